"""Drop-test analysis: stress-strain measures and experiment records.

Converts impact trajectories of a cylindrical sample to engineering
stress and strain, evaluates the incremental dynamic modulus

    E_dyn(t) = (h / (pi a**2)) * Fdot(t) / xdot(t),

solves for the modulus at a prescribed stress level, and ingests tables
of measured drop-test records so the constant-parameter predictions of
the linear models can be checked against data.

The dynamic modulus of a linear model is a material curve: it does not
depend on the impact velocity, while peak depth and peak force scale
linearly with it.  Measured records that violate those statements are
flagged by :func:`linearity_report`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NoCrossingError, ParseError, SingularityError
from .models import (
    KelvinVoigtParams,
    MaxwellParams,
    StandardSolidParams,
    Trajectory,
)

__all__ = [
    "STANDARD_GRAVITY",
    "DEFAULT_SIGMA_TARGET",
    "REL_CONSTANCY_TOL",
    "SampleGeometry",
    "ExperimentRecord",
    "PredictionVerdict",
    "LinearityReport",
    "stress_strain",
    "dynamic_modulus",
    "solve_e10",
    "energy_dissipation",
    "ingest_table",
    "linearity_report",
    "bundled_experiments_path",
]

STANDARD_GRAVITY = 9.81

# Stress level, in Pa, at which the mid-impact modulus is reported.
DEFAULT_SIGMA_TARGET = 10e6

# Depth-rate band, as a fraction of the incidence speed, inside which the
# modulus quotient is masked instead of evaluated.
GUARD_BAND_FRACTION = 1e-6

# Relative spread (max - min over mean) below which a quantity counts as
# constant across impact velocities.
REL_CONSTANCY_TOL = 0.05

# Consistency margin for the drop-height / impact-velocity conversion.
_V0_CONSISTENCY_TOL = 0.02

EXPERIMENT_HEADER = (
    "h0_mm",
    "v0_ms",
    "Emax_MPa",
    "Emax_sd",
    "E10_MPa",
    "E10_sd",
    "sigmax_MPa",
    "sigmax_sd",
    "epsmax",
    "epsmax_sd",
    "estar",
    "estar_sd",
    "dm_pct",
)


@dataclass(frozen=True)
class SampleGeometry:
    """Cylindrical sample: contact radius ``a`` and thickness ``h`` [m]."""

    a: float
    h: float

    def __post_init__(self) -> None:
        if not (self.a > 0.0) or not (self.h > 0.0):
            raise DomainError("sample radius and thickness must be positive")

    @property
    def area(self) -> float:
        return math.pi * self.a**2


@dataclass(frozen=True)
class ExperimentRecord:
    """One measured drop test, in SI units.

    ``delta_m`` is the percentage mass increase of the sample after the
    test (a damage indicator; it drives no computation here).  The
    ``v0_consistent`` flag records whether the stated impact velocity
    matches ``sqrt(2 g h0)`` within 2%.
    """

    h0: float
    v0: float
    E_max: float
    E_max_sd: float
    E_10: float
    E_10_sd: float
    sigma_max: float
    sigma_max_sd: float
    eps_max: float
    eps_max_sd: float
    e_star: float
    e_star_sd: float
    delta_m: float
    v0_consistent: bool = field(init=False)

    def __post_init__(self) -> None:
        if not (self.h0 > 0.0) or not (self.v0 > 0.0):
            raise DomainError("drop height and impact velocity must be positive")
        v0_free_fall = math.sqrt(2.0 * STANDARD_GRAVITY * self.h0)
        consistent = abs(self.v0 - v0_free_fall) <= _V0_CONSISTENCY_TOL * v0_free_fall
        object.__setattr__(self, "v0_consistent", consistent)


def stress_strain(traj: Trajectory, geom: SampleGeometry) -> tuple[np.ndarray, np.ndarray]:
    """Engineering stress and strain of a sampled impact, compression positive.

    ``sigma = F / (pi a**2)`` and ``eps = x / h`` elementwise.
    """
    return traj.F / geom.area, traj.x / geom.h


def _force_rate_model(traj: Trajectory, params) -> np.ndarray:
    if isinstance(params, KelvinVoigtParams):
        return params.k * traj.xdot + params.b * traj.xddot
    if isinstance(params, MaxwellParams):
        return params.k * traj.xdot - traj.F * (params.k / params.b)
    if isinstance(params, StandardSolidParams):
        return (
            params.k1 * params.k2 * traj.x
            + params.k1 * params.b * traj.xdot
            - (params.k1 + params.k2) * traj.F
        ) / params.b
    raise DomainError(f"unsupported parameter type {type(params).__name__!r}")


# Fourth-order first-derivative stencils on a uniform grid: interior
# central, plus forward stencils for the two leading points (mirrored at
# the trailing edge).
_EDGE_STENCILS = (
    np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0,
    np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0,
)


def _force_rate_sampled(traj: Trajectory) -> np.ndarray:
    times, F = traj.times, traj.F
    if times.size < 5:
        raise DomainError("need at least 5 samples to differentiate the force")
    steps = np.diff(times)
    dt = steps[0]
    if np.any(np.abs(steps - dt) > 1e-9 * dt):
        raise DomainError("sampled force differentiation needs a uniform time grid")
    rate = np.empty_like(F)
    rate[2:-2] = (F[:-4] - 8.0 * F[1:-3] + 8.0 * F[3:-1] - F[4:]) / (12.0 * dt)
    for i, stencil in enumerate(_EDGE_STENCILS):
        rate[i] = stencil @ F[:5] / dt
        rate[-1 - i] = -(stencil @ F[-5:][::-1]) / dt
    return rate


def dynamic_modulus(traj: Trajectory, geom: SampleGeometry, params=None) -> np.ndarray:
    """Incremental dynamic modulus ``(h / (pi a**2)) Fdot / xdot`` [Pa].

    Parameters
    ----------
    traj : Trajectory
        Sampled impact.
    geom : SampleGeometry
        Sample dimensions.
    params : optional
        Model parameters matching the trajectory.  When given, the force
        rate is evaluated from the model's own rate equation; otherwise it
        is approximated by fourth-order finite differences, which requires
        a uniform time grid.

    Returns
    -------
    numpy.ndarray
        Modulus per sample.  Entries where ``|xdot|`` falls below
        ``1e-6 * v0`` (the turning-point band, where the quotient blows
        up) are NaN.

    Raises
    ------
    SingularityError
        If every sample falls inside the masked band.
    """
    rate = _force_rate_model(traj, params) if params is not None else _force_rate_sampled(traj)
    v0_ref = abs(traj.xdot[0])
    if v0_ref == 0.0:
        v0_ref = float(np.max(np.abs(traj.xdot)))
    if v0_ref == 0.0:
        raise SingularityError("depth rate vanishes on every sample")
    masked = np.abs(traj.xdot) < GUARD_BAND_FRACTION * v0_ref
    if masked.all():
        raise SingularityError("depth rate vanishes on every sample")
    scale = geom.h / geom.area
    E = np.full_like(rate, np.nan)
    np.divide(rate, traj.xdot, out=E, where=~masked)
    E[~masked] *= scale
    return E


def solve_e10(
    params: MaxwellParams,
    geom: SampleGeometry,
    sigma_target: float = DEFAULT_SIGMA_TARGET,
) -> tuple[float, float]:
    """Time and modulus at which a series-pair impact reaches a stress level.

    Solves ``exp(-zeta omega0 t) sin(omega t) = pi a**2 omega sigma / (k v0)``
    for the first crossing on the force rise ``[0, t_M]``, then evaluates
    the dynamic modulus there from the closed-form rate quotient.

    Returns
    -------
    tuple of float
        ``(t_10, E_10)``.  A zero stress target degenerates to
        ``(0, E_max)`` with ``E_max = k h / (pi a**2)``.

    Raises
    ------
    NoCrossingError
        If the peak force stays below ``pi a**2 sigma_target``.
    """
    if sigma_target < 0.0:
        raise DomainError(f"sigma_target must be nonnegative, got {sigma_target!r}")
    E_max = params.k * geom.h / geom.area
    if sigma_target == 0.0:
        return 0.0, E_max
    d = params.derived
    omega, beta = d.omega, d.beta
    t_M = math.atan2(omega, beta) / omega
    F_M = (params.k * params.v0 / d.omega0) * math.exp(-beta * t_M)
    F_target = geom.area * sigma_target
    if F_M < F_target:
        raise NoCrossingError(
            f"peak force {F_M:.6g} N stays below the "
            f"{F_target:.6g} N needed for sigma = {sigma_target:.6g} Pa"
        )
    rhs = geom.area * omega * sigma_target / (params.k * params.v0)

    def rise(t: float) -> float:
        return math.exp(-beta * t) * math.sin(omega * t) - rhs

    t_10 = brentq(rise, 0.0, t_M, xtol=1e-15 * t_M, rtol=1e-15)
    ratio = beta / omega
    s, c = math.sin(omega * t_10), math.cos(omega * t_10)
    E_10 = E_max * (c - ratio * s) / (c + ratio * s)
    return t_10, E_10


def energy_dissipation(e_star: float) -> float:
    """Fraction of incident kinetic energy lost, ``1 - e_star**2``."""
    if not (0.0 <= e_star <= 1.0):
        raise DomainError(f"restitution must lie in [0, 1], got {e_star!r}")
    return 1.0 - e_star**2


def ingest_table(path: str | Path) -> list[ExperimentRecord]:
    """Read drop-test records from a CSV table.

    The header must match :data:`EXPERIMENT_HEADER` exactly (heights in
    mm, moduli and stresses in MPa); values convert to SI on load.

    Raises
    ------
    ParseError
        On a missing or unknown column, a malformed row, or an empty file.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        if header != EXPERIMENT_HEADER:
            missing = set(EXPERIMENT_HEADER) - set(header)
            unknown = set(header) - set(EXPERIMENT_HEADER)
            parts = [f"missing column {name!r}" for name in sorted(missing)]
            parts += [f"unknown column {name!r}" for name in sorted(unknown)]
            detail = "; ".join(parts) if parts else "columns are out of order"
            raise ParseError(f"{path}: {detail}")
        records = []
        for i, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(EXPERIMENT_HEADER):
                raise ParseError(
                    f"{path}: expected {len(EXPERIMENT_HEADER)} fields", row=i
                )
            values = {}
            for name, text in zip(EXPERIMENT_HEADER, row):
                try:
                    values[name] = float(text)
                except ValueError:
                    raise ParseError(
                        f"{path}: non-numeric value {text!r}", row=i, column=name
                    ) from None
            records.append(
                ExperimentRecord(
                    h0=values["h0_mm"] * 1e-3,
                    v0=values["v0_ms"],
                    E_max=values["Emax_MPa"] * 1e6,
                    E_max_sd=values["Emax_sd"] * 1e6,
                    E_10=values["E10_MPa"] * 1e6,
                    E_10_sd=values["E10_sd"] * 1e6,
                    sigma_max=values["sigmax_MPa"] * 1e6,
                    sigma_max_sd=values["sigmax_sd"] * 1e6,
                    eps_max=values["epsmax"],
                    eps_max_sd=values["epsmax_sd"],
                    e_star=values["estar"],
                    e_star_sd=values["estar_sd"],
                    delta_m=values["dm_pct"],
                )
            )
    return records


def bundled_experiments_path() -> Path:
    """Path of the packaged bovine-cartilage drop-test table."""
    from importlib.resources import files

    return Path(str(files("visco_impact") / "data" / "cartilage_drop_tests.csv"))


@dataclass(frozen=True)
class PredictionVerdict:
    """Outcome of one constant-across-velocities prediction.

    ``spread`` is the relative spread ``(max - min) / mean`` of the tested
    quantity over the records; the prediction passes when it stays within
    :data:`REL_CONSTANCY_TOL`.
    """

    name: str
    expectation: str
    spread: float
    passed: bool

    def line(self) -> str:
        word = "PASS" if self.passed else "FAIL"
        return (
            f"{self.name}: {word} (relative spread {self.spread:.3g}, "
            f"tolerance {REL_CONSTANCY_TOL})"
        )


@dataclass(frozen=True)
class LinearityReport:
    """Linear-model predictions checked against measured records.

    ``ratio`` holds ``sigma_max / eps_max`` per record in order of
    increasing impact velocity; for a linear model it is a constant, so a
    systematic rise with velocity signals a stiffening response.
    """

    v0: tuple[float, ...]
    ratio: tuple[float, ...]
    ratio_increasing: bool
    verdicts: tuple[PredictionVerdict, ...]

    @property
    def all_pass(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def lines(self) -> list[str]:
        out = [v.line() for v in self.verdicts]
        trend = "strictly increasing" if self.ratio_increasing else "not monotone"
        ratios = ", ".join(f"{r / 1e6:.1f}" for r in self.ratio)
        out.append(f"sigma_max/eps_max over v0 [MPa]: {ratios} ({trend})")
        return out


def _relative_spread(values: np.ndarray) -> float:
    mean = float(np.mean(values))
    if mean == 0.0:
        return 0.0 if np.ptp(values) == 0.0 else math.inf
    return float(np.ptp(values) / abs(mean))


def linearity_report(records: list[ExperimentRecord]) -> LinearityReport:
    """Check the constant-parameter predictions on a set of records.

    A linear impact model requires the restitution coefficient, the peak
    dynamic modulus, and the peak-stress to peak-strain ratio all to be
    independent of the impact velocity.  Each prediction is tested by the
    relative spread of the measured values.
    """
    if len(records) < 2:
        raise DomainError("linearity checks need at least 2 records")
    ordered = sorted(records, key=lambda r: r.v0)
    v0 = np.array([r.v0 for r in ordered])
    ratio = np.array([r.sigma_max / r.eps_max for r in ordered])
    tested = (
        ("restitution-constant", np.array([r.e_star for r in ordered])),
        ("peak-modulus-constant", np.array([r.E_max for r in ordered])),
        ("stiffness-ratio-constant", ratio),
    )
    verdicts = tuple(
        PredictionVerdict(
            name=name,
            expectation="independent of impact velocity for a linear model",
            spread=_relative_spread(values),
            passed=_relative_spread(values) <= REL_CONSTANCY_TOL,
        )
        for name, values in tested
    )
    return LinearityReport(
        v0=tuple(float(x) for x in v0),
        ratio=tuple(float(x) for x in ratio),
        ratio_increasing=bool(np.all(np.diff(ratio) > 0.0)),
        verdicts=verdicts,
    )
