"""Parameter types, derived nondimensional groups, and shared result types.

Three lumped-parameter contact models are supported: a spring in parallel
with a dashpot (Kelvin-Voigt), a spring in series with a dashpot (Maxwell),
and a three-element standard solid that interpolates between the two.
Every model-specific module consumes the types defined here.

Scaling conventions used throughout the package: durations are compared as
``omega0 * t``, displacements as ``x * omega0 / v0``, and forces as
``F / (m * v0 * omega0)``, where ``omega0`` is the relevant undamped
frequency and ``v0`` the incoming velocity.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, DomainError, ParseError

__all__ = [
    "DEFAULT_SAMPLES",
    "DerivedGroups",
    "KelvinVoigtParams",
    "MaxwellParams",
    "StandardSolidParams",
    "Trajectory",
    "ImpactMetrics",
    "derive_kv",
    "derive_maxwell",
    "derive_sls",
    "convert_configurations",
    "invert_configurations",
    "load_kv_params",
    "load_maxwell_params",
    "load_sls_params",
]

DEFAULT_SAMPLES = 1000

TRAJECTORY_HEADER = ("t", "x", "xdot", "xddot", "F")

# 17 significant digits round-trip an IEEE double exactly.
_FLOAT_FMT = "%.17g"


@dataclass(frozen=True)
class DerivedGroups:
    """Nondimensional groups derived from a parameter set.

    Fields that do not apply to a given model are ``None`` rather than NaN
    so that accidental use fails loudly.  ``beta`` is always the exponential
    decay rate of the oscillatory closed form (``eta * omega0`` for the
    Kelvin-Voigt model, ``zeta * omega0`` for the Maxwell model); it is not
    the dashpot coefficient of the alternate three-element configuration,
    which enters only through :func:`convert_configurations`.

    Attributes
    ----------
    omega0 : float
        Undamped angular frequency.  For the standard solid this is the
        instantaneous-stiffness frequency ``sqrt(k0 / m)``.
    omega : float or None
        Damped angular frequency of the contact oscillation.
    beta : float or None
        Exponential decay rate of the oscillatory closed form.
    eta : float or None
        Kelvin-Voigt loss factor ``b / (2 sqrt(k m))``.
    zeta : float or None
        Maxwell loss factor ``k / (2 omega0 b)``.
    rho : float or None
        Stiffness ratio ``k_inf / k0`` of the standard solid.
    Lambda : float or None
        Stiffness-relaxation group ``(k0 / m) * tau_R**2``.
    tau_R : float or None
        Relaxation time of the force-decay kernel.
    eps0 : float or None
        Gravity-to-impact ratio ``g / (omega0 * v0)``.
    """

    omega0: float
    omega: float | None = None
    beta: float | None = None
    eta: float | None = None
    zeta: float | None = None
    rho: float | None = None
    Lambda: float | None = None
    tau_R: float | None = None
    eps0: float | None = None


def _require_positive(name: str, value: float) -> None:
    if not (value > 0.0) or not math.isfinite(value):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")


def _require_nonnegative(name: str, value: float) -> None:
    if value < 0.0 or not math.isfinite(value):
        raise DomainError(f"{name} must be nonnegative and finite, got {value!r}")


@dataclass(frozen=True)
class KelvinVoigtParams:
    """Spring-dashpot pair in parallel, impacted by a rigid mass.

    Parameters
    ----------
    m : float
        Impactor mass.
    k : float
        Spring stiffness.
    b : float
        Dashpot coefficient.  ``b = 0`` is the elastic limit.
    v0 : float
        Incoming velocity at first contact.
    g : float, optional
        Gravitational acceleration acting during contact.  Zero by default.

    Notes
    -----
    Derived groups are computed eagerly at construction and cached on the
    ``derived`` attribute.  Construction fails with :class:`DomainError`
    for overdamped pairs (loss factor at or above one).
    """

    m: float
    k: float
    b: float
    v0: float
    g: float = 0.0
    derived: DerivedGroups = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        _require_positive("m", self.m)
        _require_positive("k", self.k)
        _require_nonnegative("b", self.b)
        _require_positive("v0", self.v0)
        _require_nonnegative("g", self.g)
        object.__setattr__(self, "derived", derive_kv(self))


@dataclass(frozen=True)
class MaxwellParams:
    """Spring and dashpot in series, impacted by a rigid mass.

    The dashpot must be stiff enough for the contact to oscillate: the loss
    factor ``zeta = k / (2 omega0 b)`` has to stay below one, otherwise
    construction raises :class:`DomainError`.
    """

    m: float
    k: float
    b: float
    v0: float
    g: float = 0.0
    derived: DerivedGroups = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        _require_positive("m", self.m)
        _require_positive("k", self.k)
        _require_positive("b", self.b)
        _require_positive("v0", self.v0)
        _require_nonnegative("g", self.g)
        object.__setattr__(self, "derived", derive_maxwell(self))


@dataclass(frozen=True)
class StandardSolidParams:
    """Three-element solid: spring ``k1`` in series with a parallel
    spring-dashpot pair ``(k2, b)``.

    The instantaneous stiffness is ``k0 = k1`` and the long-time stiffness
    is ``k_inf = k1 k2 / (k1 + k2)``.  The equivalent parallel configuration
    (spring ``kappa1`` in parallel with a spring ``kappa2`` in series with a
    dashpot ``beta_dashpot``) maps onto these fields through
    :func:`convert_configurations`.
    """

    m: float
    k1: float
    k2: float
    b: float
    v0: float
    derived: DerivedGroups = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        _require_positive("m", self.m)
        _require_positive("k1", self.k1)
        _require_positive("k2", self.k2)
        _require_positive("b", self.b)
        _require_positive("v0", self.v0)
        object.__setattr__(self, "derived", derive_sls(self))

    @property
    def k0(self) -> float:
        """Instantaneous stiffness."""
        return self.k1

    @property
    def k_inf(self) -> float:
        """Long-time (relaxed) stiffness."""
        return self.k1 * self.k2 / (self.k1 + self.k2)

    def relaxation_stiffness(self, t):
        """Stress-relaxation stiffness ``k(t)`` at time(s) ``t``."""
        tau_R = self.derived.tau_R
        return self.k_inf + (self.k0 - self.k_inf) * np.exp(-np.asarray(t) / tau_R)


def derive_kv(params: KelvinVoigtParams) -> DerivedGroups:
    """Derive the nondimensional groups of a spring-dashpot parallel pair.

    Returns
    -------
    DerivedGroups
        With ``omega0 = sqrt(k/m)``, decay rate ``beta = b / (2m)``, loss
        factor ``eta = beta / omega0``, damped frequency
        ``omega = sqrt(omega0**2 - beta**2)`` and gravity ratio
        ``eps0 = g / (omega0 v0)``.

    Raises
    ------
    DomainError
        If ``eta >= 1`` (no oscillatory rebound).
    """
    omega0 = math.sqrt(params.k / params.m)
    beta = params.b / (2.0 * params.m)
    eta = beta / omega0
    if eta >= 1.0:
        raise DomainError(
            f"loss factor eta = {eta:.6g} is >= 1: the pair is overdamped "
            "and the oscillatory solution does not apply"
        )
    omega = omega0 * math.sqrt(1.0 - eta * eta)
    eps0 = params.g / (omega0 * params.v0)
    return DerivedGroups(omega0=omega0, omega=omega, beta=beta, eta=eta, eps0=eps0)


def derive_maxwell(params: MaxwellParams) -> DerivedGroups:
    """Derive the nondimensional groups of a spring-dashpot series pair.

    The loss factor is ``zeta = k / (2 omega0 b)`` and the relaxation time
    is ``tau_R = b / k``.  Raises :class:`DomainError` when ``zeta >= 1``.
    """
    omega0 = math.sqrt(params.k / params.m)
    zeta = params.k / (2.0 * omega0 * params.b)
    if zeta >= 1.0:
        raise DomainError(
            f"loss factor zeta = {zeta:.6g} is >= 1: relaxation is too fast "
            "for an oscillatory rebound"
        )
    omega = omega0 * math.sqrt(1.0 - zeta * zeta)
    beta = zeta * omega0
    tau_R = params.b / params.k
    eps0 = params.g / (omega0 * params.v0)
    return DerivedGroups(
        omega0=omega0, omega=omega, beta=beta, zeta=zeta, tau_R=tau_R, eps0=eps0
    )


def derive_sls(params: StandardSolidParams) -> DerivedGroups:
    """Derive the groups of the three-element solid.

    ``omega0 = sqrt(k0/m)`` uses the instantaneous stiffness, matching
    ``Lambda = (k0/m) * tau_R**2 = (omega0 * tau_R)**2``.  The stiffness
    ratio ``rho = k_inf / k0`` lies strictly inside (0, 1) for positive
    springs.
    """
    k0 = params.k1
    k_inf = params.k1 * params.k2 / (params.k1 + params.k2)
    rho = k_inf / k0
    tau_R = params.b / (params.k1 + params.k2)
    Lambda = (k0 / params.m) * tau_R * tau_R
    omega0 = math.sqrt(k0 / params.m)
    return DerivedGroups(omega0=omega0, rho=rho, Lambda=Lambda, tau_R=tau_R)


def convert_configurations(
    kappa1: float, kappa2: float, beta_dashpot: float
) -> tuple[float, float, float]:
    """Map the parallel three-element configuration onto the series one.

    The configuration with spring ``kappa1`` in parallel with a Maxwell arm
    (spring ``kappa2`` in series with dashpot ``beta_dashpot``) responds
    identically to the series configuration returned here: both share the
    instantaneous stiffness ``kappa1 + kappa2``, the long-time stiffness
    ``kappa1`` and the relaxation time ``beta_dashpot / kappa2``.

    Returns
    -------
    tuple of float
        ``(k1, k2, b)`` of the equivalent series configuration.
    """
    _require_positive("kappa1", kappa1)
    _require_positive("kappa2", kappa2)
    _require_positive("beta_dashpot", beta_dashpot)
    k1 = kappa1 + kappa2
    k2 = (kappa1 + kappa2) * kappa1 / kappa2
    b = beta_dashpot * (kappa1 + kappa2) ** 2 / kappa2**2
    return k1, k2, b


def invert_configurations(k1: float, k2: float, b: float) -> tuple[float, float, float]:
    """Inverse of :func:`convert_configurations`.

    Returns ``(kappa1, kappa2, beta_dashpot)`` such that converting them
    back reproduces ``(k1, k2, b)`` to rounding error.
    """
    _require_positive("k1", k1)
    _require_positive("k2", k2)
    _require_positive("b", b)
    kappa1 = k1 * k2 / (k1 + k2)
    kappa2 = k1 * k1 / (k1 + k2)
    beta_dashpot = b * k1 * k1 / (k1 + k2) ** 2
    return kappa1, kappa2, beta_dashpot


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled contact history.

    Attributes
    ----------
    times : ndarray
        Sample instants, starting at exactly zero and ending at the contact
        duration.
    x, xdot, xddot : ndarray
        Indentation depth and its first two time derivatives.
    F : ndarray
        Contact force carried by the element at each sample.
    """

    times: np.ndarray
    x: np.ndarray
    xdot: np.ndarray
    xddot: np.ndarray
    F: np.ndarray

    def __post_init__(self) -> None:
        for name in ("times", "x", "xdot", "xddot", "F"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = self.times.size
        if n < 2:
            raise ConfigError("a trajectory needs at least two samples")
        for name in ("x", "xdot", "xddot", "F"):
            if getattr(self, name).size != n:
                raise ConfigError(f"array {name!r} length differs from times")
        if self.times[0] != 0.0:
            raise ConfigError("trajectory must start at t = 0")

    @property
    def t_c(self) -> float:
        """Contact duration (the final sample instant)."""
        return float(self.times[-1])

    def to_csv(self, path: str | Path) -> None:
        """Write the samples to ``path`` with a fixed five-column header.

        Values carry 17 significant digits, enough to round-trip doubles
        bit-exactly through :meth:`from_csv`.
        """
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(TRAJECTORY_HEADER)
            for row in zip(self.times, self.x, self.xdot, self.xddot, self.F):
                writer.writerow([_FLOAT_FMT % v for v in row])

    @classmethod
    def from_csv(cls, path: str | Path) -> "Trajectory":
        """Read a trajectory written by :meth:`to_csv`."""
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise ParseError(f"{path}: empty file") from None
            if tuple(header) != TRAJECTORY_HEADER:
                raise ParseError(
                    f"{path}: expected header {','.join(TRAJECTORY_HEADER)!r}, "
                    f"got {','.join(header)!r}"
                )
            cols: list[list[float]] = [[], [], [], [], []]
            for i, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != 5:
                    raise ParseError(f"{path}: expected 5 fields", row=i)
                for j, cell in enumerate(row):
                    try:
                        cols[j].append(float(cell))
                    except ValueError:
                        raise ParseError(
                            f"{path}: non-numeric value {cell!r}",
                            row=i,
                            column=TRAJECTORY_HEADER[j],
                        ) from None
        return cls(*[np.array(c) for c in cols])


@dataclass(frozen=True)
class ImpactMetrics:
    """Scalar outcomes of a single impact.

    Attributes
    ----------
    t_c : float
        Contact duration.
    e_star : float
        Coefficient of restitution (rebound speed over incoming speed).
    t_m, x_m : float
        Instant and value of the maximum indentation.
    t_M, F_M : float
        Instant and value of the maximum contact force.
    x_M : float or None
        Indentation at the force maximum, when available.
    F_m : float or None
        Force at the indentation maximum, when available.
    """

    t_c: float
    e_star: float
    t_m: float
    x_m: float
    t_M: float
    F_M: float
    x_M: float | None = None
    F_m: float | None = None


_KV_REQUIRED = frozenset({"m", "k", "b", "v0"})
_SLS_SERIES_REQUIRED = frozenset({"m", "k1", "k2", "b", "v0"})
_SLS_PARALLEL_REQUIRED = frozenset({"m", "kappa1", "kappa2", "beta", "v0"})


def _load_flat_json(path: str | Path) -> dict[str, float]:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected a flat JSON object")
    out: dict[str, float] = {}
    for key, value in raw.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(f"{path}: key {key!r} must be a number, got {value!r}")
        out[key] = float(value)
    return out


def _check_keys(path, present: set[str], required: frozenset[str], optional: frozenset[str]):
    unknown = present - required - optional
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    missing = required - present
    if missing:
        raise ConfigError(f"{path}: missing keys {sorted(missing)}")


def load_kv_params(path: str | Path) -> KelvinVoigtParams:
    """Load spring-dashpot parallel parameters from a flat JSON object.

    Required keys are ``m, k, b, v0``; ``g`` is optional and defaults to
    zero.  Unknown keys are rejected.
    """
    data = _load_flat_json(path)
    _check_keys(path, set(data), _KV_REQUIRED, frozenset({"g"}))
    return KelvinVoigtParams(
        m=data["m"], k=data["k"], b=data["b"], v0=data["v0"], g=data.get("g", 0.0)
    )


def load_maxwell_params(path: str | Path) -> MaxwellParams:
    """Load spring-dashpot series parameters from a flat JSON object.

    Same key set as :func:`load_kv_params`.
    """
    data = _load_flat_json(path)
    _check_keys(path, set(data), _KV_REQUIRED, frozenset({"g"}))
    return MaxwellParams(
        m=data["m"], k=data["k"], b=data["b"], v0=data["v0"], g=data.get("g", 0.0)
    )


def load_sls_params(path: str | Path) -> StandardSolidParams:
    """Load three-element solid parameters from a flat JSON object.

    Two key sets are accepted: ``m, k1, k2, b, v0`` for the series
    configuration, or ``m, kappa1, kappa2, beta, v0`` for the parallel one
    (converted on load).  Unknown keys are rejected.
    """
    data = _load_flat_json(path)
    present = set(data)
    if "k1" in present or "k2" in present:
        _check_keys(path, present, _SLS_SERIES_REQUIRED, frozenset())
        k1, k2, b = data["k1"], data["k2"], data["b"]
    else:
        _check_keys(path, present, _SLS_PARALLEL_REQUIRED, frozenset())
        k1, k2, b = convert_configurations(data["kappa1"], data["kappa2"], data["beta"])
    return StandardSolidParams(m=data["m"], k1=k1, k2=k2, b=b, v0=data["v0"])
