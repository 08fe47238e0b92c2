"""Thin fluid-saturated layer reduced to an equivalent spring-dashpot pair.

A thin incompressible-solid layer of thickness ``h`` bonded to a rigid
substrate and indented by a flat-ended circular indenter of radius ``a``
responds, for short times, like a spring ``k = 3 mu_s a**4 / (16 h**3)``
relaxing with time constant ``tau_R = h**2 / (3 mu_s kappa)``, where
``kappa`` is the permeability of the solid matrix.  That is exactly a
spring-dashpot series pair, so the impact machinery of the series model
applies verbatim after the reduction implemented here.

The short-time window where the reduction is trustworthy is a fixed
fraction of the consolidation time ``tau_D = h**2 / (H_A kappa)`` set by
the aggregate modulus ``H_A = lambda_s + 2 mu_s``.

All quantities are SI: Pa, m, s, N.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError, ParseError
from .models import MaxwellParams

__all__ = [
    "BiphasicLayer",
    "EquivalentMaxwell",
    "equivalent_maxwell",
    "reduce_to_maxwell",
    "validity_window",
    "pressure_profile",
    "biphasic_force",
    "biphasic_loss_factor",
    "load_layer_json",
    "load_delta0_csv",
]

# Fraction of the consolidation time over which the short-time reduction
# holds; beyond it the fluid pressure has measurably diffused.
USABLE_FRACTION = 0.1

# Aspect ratio beyond which the thin-layer asymptotics degrade.
_THIN_LAYER_RATIO = 0.2

_DELTA0_HEADER = ("t", "delta0")


@dataclass(frozen=True)
class BiphasicLayer:
    """Bonded thin layer of fluid-saturated incompressible solid.

    Parameters
    ----------
    mu_s : float
        Shear modulus of the solid matrix [Pa].
    lambda_s : float
        First Lame constant of the solid matrix [Pa].
    kappa : float
        Permeability [m^4 / (N s)].
    h : float
        Layer thickness [m].
    a : float
        Contact (indenter) radius [m].

    Notes
    -----
    The aggregate modulus ``H_A = lambda_s + 2 mu_s`` is computed at
    construction.  A warning is emitted when ``h / a`` exceeds 0.2, where
    the thin-layer reduction loses accuracy.
    """

    mu_s: float
    lambda_s: float
    kappa: float
    h: float
    a: float
    H_A: float = field(init=False)

    def __post_init__(self) -> None:
        for name in ("mu_s", "kappa", "h", "a"):
            value = getattr(self, name)
            if not (value > 0.0) or not math.isfinite(value):
                raise DomainError(f"{name} must be positive, got {value!r}")
        if self.lambda_s < 0.0 or not math.isfinite(self.lambda_s):
            raise DomainError(f"lambda_s must be nonnegative, got {self.lambda_s!r}")
        object.__setattr__(self, "H_A", self.lambda_s + 2.0 * self.mu_s)
        if self.h / self.a > _THIN_LAYER_RATIO:
            warnings.warn(
                f"h/a = {self.h / self.a:.3g} exceeds {_THIN_LAYER_RATIO}; "
                "the thin-layer reduction is inaccurate for thick layers",
                stacklevel=3,
            )


@dataclass(frozen=True)
class EquivalentMaxwell:
    """Spring-dashpot series pair equivalent to a thin layer.

    ``chi`` is the pressure-decay rate, the reciprocal of ``tau_R``; the
    product ``chi * tau_R = 1`` is enforced at construction.
    """

    k: float
    tau_R: float
    chi: float

    def __post_init__(self) -> None:
        if not (self.k > 0.0) or not (self.tau_R > 0.0):
            raise DomainError("k and tau_R must be positive")
        if abs(self.chi * self.tau_R - 1.0) > 1e-12:
            raise DomainError(
                f"chi * tau_R = {self.chi * self.tau_R!r} must equal 1"
            )


def equivalent_maxwell(layer: BiphasicLayer) -> EquivalentMaxwell:
    """Short-time equivalent series pair of a thin layer.

    The stiffness scales with the fourth power of the contact radius and
    the inverse cube of the thickness; the relaxation time grows with the
    square of the thickness.  Doubling ``h`` therefore cuts ``k`` eightfold
    and quadruples ``tau_R``.
    """
    k = 3.0 * layer.mu_s * layer.a**4 / (16.0 * layer.h**3)
    tau_R = layer.h**2 / (3.0 * layer.mu_s * layer.kappa)
    return EquivalentMaxwell(k=k, tau_R=tau_R, chi=1.0 / tau_R)


def reduce_to_maxwell(layer: BiphasicLayer, m: float, v0: float) -> MaxwellParams:
    """Impact parameters of the equivalent series pair.

    Raises
    ------
    DomainError
        If the resulting loss factor is at or above one (relaxation too
        fast for an oscillatory rebound), via parameter validation.
    """
    eq = equivalent_maxwell(layer)
    return MaxwellParams(m=m, k=eq.k, b=eq.k * eq.tau_R, v0=v0)


def validity_window(layer: BiphasicLayer) -> tuple[float, float]:
    """Consolidation time and the usable short-time window.

    Returns
    -------
    tuple of float
        ``(tau_D, t_usable)`` with ``tau_D = h**2 / (H_A kappa)`` and
        ``t_usable = 0.1 * tau_D``.
    """
    tau_D = layer.h**2 / (layer.H_A * layer.kappa)
    return tau_D, USABLE_FRACTION * tau_D


def _check_history(times: np.ndarray, delta0: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    times = np.asarray(times, dtype=float)
    delta0 = np.asarray(delta0, dtype=float)
    if times.ndim != 1 or times.shape != delta0.shape or times.size < 2:
        raise DomainError("history needs matching 1-d time and depth arrays")
    if times[0] != 0.0 or np.any(np.diff(times) <= 0.0):
        raise DomainError("history times must increase strictly from 0")
    if delta0[0] != 0.0:
        raise DomainError("indentation history must start at zero depth")
    return times, delta0


def _exp_weighted_depth(times, delta0, chi, t_eval: float) -> float:
    """``integral_0^t exp(-chi (t - s)) delta0(s) ds`` for piecewise-linear depth.

    Exact per segment; the running value decays by ``exp(-chi dt)`` across
    each segment and gains the closed-form segment contribution.
    """
    if t_eval < 0.0 or t_eval > times[-1]:
        raise DomainError(f"t = {t_eval!r} lies outside the sampled history")
    acc = 0.0
    for i in range(times.size - 1):
        t0, t1 = times[i], times[i + 1]
        if t0 >= t_eval:
            break
        seg_end = min(t1, t_eval)
        dt = seg_end - t0
        slope = (delta0[i + 1] - delta0[i]) / (t1 - t0)
        d_end = delta0[i] + slope * dt
        E = math.exp(-chi * dt)
        acc = E * acc + d_end * (1.0 - E) / chi - slope * (
            1.0 - E * (1.0 + chi * dt)
        ) / chi**2
        if seg_end == t_eval:
            break
    return acc


def pressure_profile(layer: BiphasicLayer, times, delta0, r, t: float) -> np.ndarray:
    """Fluid pressure across the contact patch at time ``t``.

    The profile is parabolic in radius, vanishing at the contact edge:

        P(r, t) = 3 mu_s / (8 pi h**3) * (a**2 - r**2)
                  * [delta0(t) - chi * integral exp(-chi (t-s)) delta0(s) ds]

    so its integral over the contact disk reproduces
    :func:`biphasic_force` at every sampled instant.

    Parameters
    ----------
    times, delta0 : array_like
        Sampled indentation-depth history, starting at zero; values
        between samples interpolate linearly.
    r : array_like
        Radial stations, all within ``[0, a]``.
    t : float
        Evaluation time, within the sampled range.
    """
    times, delta0 = _check_history(times, delta0)
    r = np.asarray(r, dtype=float)
    if np.any(np.abs(r) > layer.a):
        raise DomainError("radial stations must lie inside the contact radius")
    eq = equivalent_maxwell(layer)
    depth = float(np.interp(t, times, delta0))
    relaxed = depth - eq.chi * _exp_weighted_depth(times, delta0, eq.chi, t)
    prefactor = 3.0 * layer.mu_s / (8.0 * math.pi * layer.h**3)
    return prefactor * (layer.a**2 - r**2) * relaxed


def biphasic_force(layer: BiphasicLayer, times, delta0) -> np.ndarray:
    """Contact force at every sampled instant of a depth history.

    Evaluates ``k * integral exp(-(t-s)/tau_R) delta0'(s) ds`` with an
    exact per-step exponential recursion (the history is piecewise linear,
    so its rate is piecewise constant and each segment integrates in
    closed form).  A linear ramp ``delta0 = c t`` therefore yields exactly
    ``F = k c tau_R (1 - exp(-t / tau_R))``.
    """
    times, delta0 = _check_history(times, delta0)
    eq = equivalent_maxwell(layer)
    F = np.empty_like(times)
    F[0] = 0.0
    acc = 0.0
    for i in range(times.size - 1):
        dt = times[i + 1] - times[i]
        slope = (delta0[i + 1] - delta0[i]) / dt
        E = math.exp(-dt / eq.tau_R)
        acc = E * acc + slope * eq.tau_R * (1.0 - E)
        F[i + 1] = eq.k * acc
    return F


def biphasic_loss_factor(layer: BiphasicLayer, m: float) -> float:
    """Loss factor of the equivalent series pair under an impacting mass.

    Closed form ``2 sqrt(3 m mu_s) kappa / (a**2 sqrt(h))``, identical to
    deriving the groups of :func:`reduce_to_maxwell`.  It grows with
    permeability and shear modulus and falls with thickness and contact
    radius, so thicker layers and larger indenters rebound more.
    """
    if not (m > 0.0):
        raise DomainError(f"m must be positive, got {m!r}")
    return 2.0 * math.sqrt(3.0 * m * layer.mu_s) * layer.kappa / (
        layer.a**2 * math.sqrt(layer.h)
    )


_LAYER_KEYS = frozenset({"mu_s", "lambda_s", "kappa", "h", "a"})


def load_layer_json(path: str | Path) -> BiphasicLayer:
    """Load layer parameters from a flat JSON object.

    Exactly the keys ``mu_s, lambda_s, kappa, h, a`` are accepted.
    """
    from .models import _check_keys, _load_flat_json

    data = _load_flat_json(path)
    _check_keys(path, set(data), _LAYER_KEYS, frozenset())
    return BiphasicLayer(**data)


def load_delta0_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Read a depth history CSV with header ``t,delta0``."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        if tuple(header) != _DELTA0_HEADER:
            raise ParseError(
                f"{path}: expected header 't,delta0', got {','.join(header)!r}"
            )
        times, depths = [], []
        for i, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(f"{path}: expected 2 fields", row=i)
            try:
                times.append(float(row[0]))
                depths.append(float(row[1]))
            except ValueError:
                raise ParseError(f"{path}: non-numeric value", row=i) from None
    return np.array(times), np.array(depths)
