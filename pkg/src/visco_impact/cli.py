"""Command-line interface: simulate, sweep, verify, biphasic, analyze.

Ties the model library together behind an argparse surface that emits
plot-ready CSV.  Scaled sweep outputs use the nondimensional conventions
``omega0 t``, ``omega0 x / v0``, ``F / (m v0 omega0)``, so one sweep file
overlays directly onto another regardless of the dimensional parameters.

Exit codes: 0 success, 1 I/O or parse failure, 2 domain violation,
3 plastic impact (no separation), 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analysis import (
    STANDARD_GRAVITY,
    bundled_experiments_path,
    energy_dissipation,
    ingest_table,
    linearity_report,
)
from .biphasic import (
    biphasic_loss_factor,
    equivalent_maxwell,
    load_layer_json,
    reduce_to_maxwell,
    validity_window,
)
from .errors import (
    ConfigError,
    DiscriminantError,
    DomainError,
    NoCrossingError,
    NoSeparationError,
    ParseError,
    PlasticImpactError,
    SingularityError,
    ViscoImpactError,
)
from .kelvin_voigt import (
    kv_drop_metrics_asymptotic,
    kv_drop_trajectory,
    kv_metrics,
    kv_trajectory,
)
from .maxwell import (
    mx_drop_metrics_asymptotic,
    mx_drop_trajectory,
    mx_metrics,
    mx_trajectory,
)
from .models import (
    DEFAULT_SAMPLES,
    ImpactMetrics,
    KelvinVoigtParams,
    MaxwellParams,
    Trajectory,
    load_kv_params,
    load_maxwell_params,
    load_sls_params,
)
from .oracle import RelaxationKernel, integrate_impact, integrate_impact_with_gravity
from .standard_solid import (
    params_from_groups,
    params_near_kv,
    params_near_maxwell,
    sls_metrics,
    sls_perturb_kv,
    sls_perturb_maxwell,
    sls_trajectory,
)

__all__ = [
    "SweepSpec",
    "SuiteResult",
    "main",
    "run_verification",
    "read_csv_rows",
]

EXIT_OK = 0
EXIT_IO = 1
EXIT_DOMAIN = 2
EXIT_PLASTIC = 3
EXIT_VERIFY = 4

THREADS_ENV = "VISCO_IMPACT_THREADS"

_FLOAT_FMT = "%.17g"

SWEEP_HEADER = (
    "param",
    "tc_scaled",
    "e_star",
    "tm_scaled",
    "tM_scaled",
    "xm_scaled",
    "FM_scaled",
)
# A rho sweep also reports the small-rho expansion for convergence plots.
SWEEP_ASYM_HEADER = SWEEP_HEADER + ("tc_scaled_asym", "e_star_asym")

ANALYZE_HEADER = (
    "v0_ms",
    "estar",
    "delta_E_fraction",
    "ratio_MPa",
    "Emax_MPa",
    "E10_MPa",
    "Emax_over_E10",
)

VERIFY_HEADER = ("suite", "max_error", "tolerance", "status")

_SWEEP_PARAMS = {
    "kv": ("eta", "eps0"),
    "maxwell": ("zeta", "eps0"),
    "sls": ("rho", "Lambda"),
}

# Defaults for the quantity a sweep holds fixed, overridable by --params.
_SWEEP_FIXED_DEFAULTS = {"eta": 0.3, "zeta": 0.3, "rho": 0.1, "Lambda": 0.25}


@dataclass(frozen=True)
class SweepSpec:
    """One-parameter sweep over a scaled metrics grid.

    ``param`` names the swept quantity; ``fixed`` supplies values held
    constant (for example the loss factor of a ``rho`` sweep).
    """

    param: str
    lo: float
    hi: float
    steps: int
    fixed: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        known = {"eta", "zeta", "rho", "eps0", "Lambda"}
        if self.param not in known:
            raise DomainError(
                f"unknown sweep parameter {self.param!r}; choose from {sorted(known)}"
            )
        if not (self.lo < self.hi):
            raise DomainError("sweep range needs lo < hi")
        if self.steps < 2:
            raise DomainError("sweep needs at least 2 steps")
        if self.param in ("eta", "zeta", "rho") and not (
            0.0 < self.lo and self.hi < 1.0
        ):
            raise DomainError(f"{self.param} sweep must stay inside (0, 1)")
        if self.param == "Lambda" and not (self.lo > 0.0):
            raise DomainError("Lambda sweep must stay positive")
        if self.param == "eps0" and self.lo < 0.0:
            raise DomainError("eps0 sweep must be nonnegative")

    def grid(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


def parse_sweep_arg(text: str) -> SweepSpec:
    """Parse a ``param:lo:hi:steps`` sweep argument."""
    parts = text.split(":")
    if len(parts) != 4:
        raise ParseError(f"expected param:lo:hi:steps, got {text!r}")
    try:
        lo, hi, steps = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError:
        raise ParseError(f"malformed sweep range in {text!r}") from None
    return SweepSpec(param=parts[0], lo=lo, hi=hi, steps=steps)


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return min(8, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be at least 1, got {n}")
    return n


def _write_rows(stream, header, rows) -> None:
    writer = csv.writer(stream)
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [_FLOAT_FMT % v if isinstance(v, float) else v for v in row]
        )


def _emit_csv(out: str | None, header, rows) -> None:
    if out is None:
        _write_rows(sys.stdout, header, rows)
    else:
        with open(out, "w", newline="") as fh:
            _write_rows(fh, header, rows)


def read_csv_rows(path: str | Path, expected_header: tuple[str, ...]) -> np.ndarray:
    """Read back a numeric CSV written by this module, header-checked."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        if header != expected_header:
            raise ParseError(
                f"{path}: expected header {','.join(expected_header)!r}, "
                f"got {','.join(header)!r}"
            )
        rows = []
        for i, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(expected_header):
                raise ParseError(f"{path}: expected {len(expected_header)} fields", row=i)
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                raise ParseError(f"{path}: non-numeric value", row=i) from None
    return np.array(rows)


def _print_metrics(metrics: ImpactMetrics, label: str = "") -> None:
    tag = f" ({label})" if label else ""
    print(f"impact metrics{tag}:", file=sys.stderr)
    for name in ("t_c", "e_star", "t_m", "x_m", "t_M", "F_M"):
        print(f"  {name} = {getattr(metrics, name):.12g}", file=sys.stderr)


def _metrics_from_trajectory(traj: Trajectory, v0: float) -> ImpactMetrics:
    i_m = int(np.argmax(traj.x))
    i_M = int(np.argmax(traj.F))
    return ImpactMetrics(
        t_c=traj.t_c,
        e_star=-traj.xdot[-1] / v0,
        t_m=float(traj.times[i_m]),
        x_m=float(traj.x[i_m]),
        t_M=float(traj.times[i_M]),
        F_M=float(traj.F[i_M]),
        x_M=float(traj.x[i_M]),
    )


def _samples_from_dt(t_c_scaled: float, dt: float | None) -> int:
    if dt is None:
        return DEFAULT_SAMPLES
    if dt <= 0.0:
        raise ConfigError(f"--dt must be positive, got {dt}")
    return max(2, int(math.ceil(t_c_scaled / dt)) + 1)


def cmd_simulate(args) -> int:
    """Run one impact and write its sampled trajectory."""
    if args.model == "kv":
        params = load_kv_params(args.params)
        if args.gravity:
            if params.g == 0.0:
                params = dataclasses.replace(params, g=STANDARD_GRAVITY)
            metrics = kv_drop_metrics_asymptotic(params)
            n = _samples_from_dt(params.derived.omega0 * metrics.t_c, args.dt)
            traj = kv_drop_trajectory(params, n_samples=n)
            _print_metrics(metrics, "weight included, small-eps0 expansion")
        else:
            metrics = kv_metrics(params)
            n = _samples_from_dt(params.derived.omega0 * metrics.t_c, args.dt)
            traj = kv_trajectory(params, n_samples=n)
            _print_metrics(metrics)
    elif args.model == "maxwell":
        params = load_maxwell_params(args.params)
        if args.gravity:
            if params.g == 0.0:
                params = dataclasses.replace(params, g=STANDARD_GRAVITY)
            metrics = mx_drop_metrics_asymptotic(params)
            n = _samples_from_dt(params.derived.omega0 * metrics.t_c, args.dt)
            traj = mx_drop_trajectory(params, n_samples=n)
            _print_metrics(metrics, "weight included, small-eps0 expansion")
        else:
            metrics = mx_metrics(params)
            n = _samples_from_dt(params.derived.omega0 * metrics.t_c, args.dt)
            traj = mx_trajectory(params, n_samples=n)
            _print_metrics(metrics)
    else:
        params = load_sls_params(args.params)
        if args.gravity:
            print(
                "three-element drop has no closed form; integrating directly",
                file=sys.stderr,
            )
            kernel = RelaxationKernel.from_params(params)
            traj = integrate_impact_with_gravity(
                kernel,
                params.m,
                params.v0,
                STANDARD_GRAVITY,
                dt_scaled=args.dt,
                horizon_scaled=args.horizon,
            )
            _print_metrics(_metrics_from_trajectory(traj, params.v0), "integrated")
        else:
            try:
                metrics = sls_metrics(params)
                n = _samples_from_dt(params.derived.omega0 * metrics.t_c, args.dt)
                traj = sls_trajectory(params, n_samples=n)
                _print_metrics(metrics)
            except DiscriminantError as exc:
                print(
                    f"closed form unavailable ({exc}); integrating directly",
                    file=sys.stderr,
                )
                kernel = RelaxationKernel.from_params(params)
                traj = integrate_impact(
                    kernel,
                    params.m,
                    params.v0,
                    dt_scaled=args.dt,
                    horizon_scaled=args.horizon,
                )
                _print_metrics(_metrics_from_trajectory(traj, params.v0), "integrated")
    if args.out is not None:
        traj.to_csv(args.out)
    return EXIT_OK


def _load_fixed(path: str | None) -> dict:
    if path is None:
        return {}
    from .models import _check_keys, _load_flat_json

    data = _load_flat_json(path)
    _check_keys(
        path, set(data), frozenset(), frozenset({"eta", "zeta", "rho", "Lambda"})
    )
    return data


def _scaled_metrics(model: str, spec: SweepSpec, value: float):
    """Metrics at one grid point, with unit mass, frequency, and speed."""
    fixed = spec.fixed
    if model == "kv":
        if spec.param == "eta":
            return kv_metrics(KelvinVoigtParams(m=1.0, k=1.0, b=2.0 * value, v0=1.0)), None
        eta = fixed.get("eta", _SWEEP_FIXED_DEFAULTS["eta"])
        params = KelvinVoigtParams(m=1.0, k=1.0, b=2.0 * eta, v0=1.0, g=value)
        return kv_drop_metrics_asymptotic(params), None
    if model == "maxwell":
        if spec.param == "zeta":
            return mx_metrics(MaxwellParams(m=1.0, k=1.0, b=0.5 / value, v0=1.0)), None
        zeta = fixed.get("zeta", _SWEEP_FIXED_DEFAULTS["zeta"])
        params = MaxwellParams(m=1.0, k=1.0, b=0.5 / zeta, v0=1.0, g=value)
        return mx_drop_metrics_asymptotic(params), None
    if spec.param == "Lambda":
        rho = fixed.get("rho", _SWEEP_FIXED_DEFAULTS["rho"])
        return sls_metrics(params_from_groups(value, rho)), None
    if "zeta" in fixed:
        params = params_near_maxwell(fixed["zeta"], value)
        asym = sls_perturb_maxwell(fixed["zeta"], value)
    else:
        eta = fixed.get("eta", _SWEEP_FIXED_DEFAULTS["eta"])
        params = params_near_kv(eta, value)
        asym = sls_perturb_kv(eta, value)
    return sls_metrics(params), asym


def cmd_sweep(args) -> int:
    """Evaluate scaled impact metrics over a one-parameter grid."""
    spec = parse_sweep_arg(args.sweep)
    if spec.param not in _SWEEP_PARAMS[args.model]:
        raise DomainError(
            f"model {args.model!r} sweeps one of {_SWEEP_PARAMS[args.model]}, "
            f"not {spec.param!r}"
        )
    fixed = _load_fixed(args.params)
    spec = dataclasses.replace(spec, fixed=fixed)
    with_asym = args.model == "sls" and spec.param == "rho"
    header = SWEEP_ASYM_HEADER if with_asym else SWEEP_HEADER
    nan_row = (math.nan,) * (len(header) - 1)

    def point(value: float):
        try:
            metrics, asym = _scaled_metrics(args.model, spec, float(value))
        except (DomainError, DiscriminantError) as exc:
            return (float(value), *nan_row), "domain", str(exc)
        except (PlasticImpactError, NoSeparationError) as exc:
            return (float(value), *nan_row), "plastic", str(exc)
        row = (
            float(value),
            metrics.t_c,
            metrics.e_star,
            metrics.t_m,
            metrics.t_M,
            metrics.x_m,
            metrics.F_M,
        )
        if with_asym:
            row += asym if asym is not None else (math.nan, math.nan)
        return row, None, None

    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        results = list(pool.map(point, spec.grid()))

    rows = [row for row, _, _ in results]
    _emit_csv(args.out, header, rows)
    domain_hit = plastic_hit = False
    for row, kind, message in results:
        if kind is not None:
            print(f"{spec.param} = {row[0]:g} skipped: {message}", file=sys.stderr)
            domain_hit = domain_hit or kind == "domain"
            plastic_hit = plastic_hit or kind == "plastic"
    if domain_hit:
        return EXIT_DOMAIN
    if plastic_hit:
        return EXIT_PLASTIC
    return EXIT_OK


@dataclass(frozen=True)
class SuiteResult:
    name: str
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance

    @property
    def status(self) -> str:
        return "pass" if self.passed else "FAIL"


def _suite_elastic_limit() -> tuple[float, float]:
    params = KelvinVoigtParams(m=1.0, k=1.0, b=0.0, v0=1.0)
    met = kv_metrics(params)
    err = max(abs(met.e_star - 1.0), abs(met.t_c - math.pi))
    traj = integrate_impact(RelaxationKernel.elastic(1.0), 1.0, 1.0)
    err = max(err, abs(-traj.xdot[-1] - 1.0), abs(traj.t_c - math.pi))
    return err, 1e-6


def _suite_parallel_pair_midpoint() -> tuple[float, float]:
    err = 0.0
    for eta in np.linspace(0.01, 0.98, 50):
        met = kv_metrics(KelvinVoigtParams(m=1.0, k=1.0, b=2.0 * eta, v0=1.0))
        err = max(err, abs(met.t_m - met.t_c / 2.0) / met.t_c)
    return err, 1e-12


def _suite_series_pair_termination() -> tuple[float, float]:
    err = 0.0
    for zeta in np.linspace(0.01, 0.98, 50):
        params = MaxwellParams(m=1.0, k=1.0, b=0.5 / zeta, v0=1.0)
        met = mx_metrics(params)
        traj = mx_trajectory(params, n_samples=200)
        err = max(err, abs(traj.F[-1]) / met.F_M)
    return err, 1e-12


def _suite_analytic_vs_oracle() -> tuple[float, float]:
    err = 0.0
    for eta in (0.2, 0.8):
        params = KelvinVoigtParams(m=1.0, k=1.0, b=2.0 * eta, v0=1.0)
        met = kv_metrics(params)
        traj = integrate_impact(RelaxationKernel.from_params(params), 1.0, 1.0)
        err = max(err, abs(met.e_star + traj.xdot[-1]), abs(met.t_c - traj.t_c))
    for zeta in (0.2, 0.8):
        params = MaxwellParams(m=1.0, k=1.0, b=0.5 / zeta, v0=1.0)
        met = mx_metrics(params)
        traj = integrate_impact(RelaxationKernel.from_params(params), 1.0, 1.0)
        err = max(err, abs(met.e_star + traj.xdot[-1]), abs(met.t_c - traj.t_c))
    for Lam, rho in ((0.25, 0.5), (0.5, 0.3)):
        params = params_from_groups(Lam, rho)
        met = sls_metrics(params)
        traj = integrate_impact(RelaxationKernel.from_params(params), 1.0, 1.0)
        err = max(err, abs(met.e_star + traj.xdot[-1]), abs(met.t_c - traj.t_c))
    return err, 1e-6


def _suite_biphasic_pipeline() -> tuple[float, float]:
    from .biphasic import BiphasicLayer

    layer = BiphasicLayer(mu_s=0.25e6, lambda_s=0.25e6, kappa=2e-15, h=0.5e-3, a=2.5e-3)
    params = reduce_to_maxwell(layer, m=0.2, v0=1.0)
    met = mx_metrics(params)
    kernel = RelaxationKernel.maxwell(params.k, params.b / params.k)
    traj = integrate_impact(kernel, 0.2, 1.0)
    omega0 = params.derived.omega0
    return (
        max(abs(met.e_star + traj.xdot[-1]), omega0 * abs(met.t_c - traj.t_c)),
        1e-6,
    )


def _suite_energy_identity() -> tuple[float, float]:
    err = 0.0
    for params in (
        KelvinVoigtParams(m=1.0, k=1.0, b=0.6, v0=1.0),
        MaxwellParams(m=1.0, k=1.0, b=1.25, v0=1.0),
    ):
        traj = integrate_impact(RelaxationKernel.from_params(params), 1.0, 1.0)
        lost = 1.0 - traj.xdot[-1] ** 2
        met = kv_metrics(params) if isinstance(params, KelvinVoigtParams) else mx_metrics(params)
        err = max(err, abs(energy_dissipation(met.e_star) - lost))
    return err, 1e-8


_VERIFY_SUITES = (
    ("elastic-limit", _suite_elastic_limit),
    ("parallel-pair-midpoint", _suite_parallel_pair_midpoint),
    ("series-pair-termination", _suite_series_pair_termination),
    ("analytic-vs-oracle", _suite_analytic_vs_oracle),
    ("biphasic-pipeline", _suite_biphasic_pipeline),
    ("energy-identity", _suite_energy_identity),
)


def run_verification(suites=None) -> list[SuiteResult]:
    """Run the cross-validation suites and collect their worst errors."""
    results = []
    for name, suite in suites if suites is not None else _VERIFY_SUITES:
        max_error, tolerance = suite()
        results.append(SuiteResult(name=name, max_error=max_error, tolerance=tolerance))
    return results


def cmd_verify(args, suites=None) -> int:
    """Cross-validate the closed forms against direct integration."""
    results = run_verification(suites)
    for r in results:
        print(f"{r.name}: {r.status} (max error {r.max_error:.3e}, tolerance {r.tolerance:.1e})")
    if args.out is not None:
        rows = [(r.name, r.max_error, r.tolerance, r.status) for r in results]
        with open(args.out, "w", newline="") as fh:
            _write_rows(fh, VERIFY_HEADER, rows)
    if any(not r.passed for r in results):
        return EXIT_VERIFY
    return EXIT_OK


def cmd_biphasic(args) -> int:
    """Reduce a layer file to its series pair and optionally run the impact."""
    layer = load_layer_json(args.params)
    eq = equivalent_maxwell(layer)
    tau_D, usable = validity_window(layer)
    zeta = biphasic_loss_factor(layer, args.m)
    print(f"k = {eq.k:.6g} N/m")
    print(f"tau_R = {eq.tau_R:.6g} s")
    print(f"chi = {eq.chi:.6g} 1/s")
    print(f"zeta = {zeta:.6g}")
    print(f"tau_D = {tau_D:.6g} s")
    print(f"usable window = {usable:.6g} s")
    if args.out is None:
        return EXIT_OK
    if zeta >= 1.0:
        print(
            f"loss factor {zeta:.3g} >= 1: no oscillatory rebound; integrating directly",
            file=sys.stderr,
        )
        kernel = RelaxationKernel.maxwell(eq.k, eq.tau_R)
        # The force decays on the relaxation scale, so a few dozen
        # relaxation times settle whether separation ever happens.
        horizon = 50.0 if args.horizon is None else args.horizon
        traj = integrate_impact(
            kernel, args.m, args.v0, dt_scaled=args.dt, horizon_scaled=horizon
        )
        metrics = _metrics_from_trajectory(traj, args.v0)
        _print_metrics(metrics, "integrated")
    else:
        params = reduce_to_maxwell(layer, args.m, args.v0)
        metrics = mx_metrics(params)
        n = _samples_from_dt(params.derived.omega0 * metrics.t_c, args.dt)
        traj = mx_trajectory(params, n_samples=n)
        _print_metrics(metrics)
    if metrics.t_c > usable:
        print(
            f"contact lasts {metrics.t_c:.3g} s, beyond the usable window "
            f"{usable:.3g} s; the reduction is unreliable there",
            file=sys.stderr,
        )
    traj.to_csv(args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    """Check linear-model predictions against measured drop-test records."""
    table = args.table if args.table is not None else bundled_experiments_path()
    records = ingest_table(table)
    report = linearity_report(records)
    for line in report.lines():
        print(line)
    print()
    print("per-record energy dissipation and moduli:")
    rows = []
    for r in sorted(records, key=lambda rec: rec.v0):
        loss = energy_dissipation(r.e_star)
        ratio = r.sigma_max / r.eps_max
        print(
            f"  v0 = {r.v0:.2f} m/s: e_star = {r.e_star:.2f}, "
            f"energy lost = {loss * 100:.1f}%, "
            f"sigma_max/eps_max = {ratio / 1e6:.1f} MPa, "
            f"E_max = {r.E_max / 1e6:.0f} MPa, E_10 = {r.E_10 / 1e6:.0f} MPa"
        )
        rows.append(
            (
                r.v0,
                r.e_star,
                loss,
                ratio / 1e6,
                r.E_max / 1e6,
                r.E_10 / 1e6,
                r.E_max / r.E_10,
            )
        )
    if args.out is not None:
        with open(args.out, "w", newline="") as fh:
            _write_rows(fh, ANALYZE_HEADER, rows)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="visco-impact",
        description=(
            "Linear viscoelastic impact models: closed-form simulation, "
            "parameter sweeps, cross-validation, thin-layer reduction, and "
            "drop-test analysis."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one impact and write its trajectory")
    p.add_argument("model", choices=("kv", "maxwell", "sls"))
    p.add_argument("--params", required=True, help="JSON parameter file")
    p.add_argument("--out", help="trajectory CSV path")
    p.add_argument(
        "--gravity",
        action="store_true",
        help=(
            "include the impactor weight during contact (g from the params "
            "file when given, 9.81 m/s^2 otherwise)"
        ),
    )
    p.add_argument("--dt", type=float, help="scaled sample spacing (omega0 dt)")
    p.add_argument("--horizon", type=float, help="scaled integration horizon")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="scaled metrics over a parameter grid")
    p.add_argument("--model", required=True, choices=("kv", "maxwell", "sls"))
    p.add_argument("--sweep", required=True, help="param:lo:hi:steps")
    p.add_argument("--params", help="JSON file of fixed quantities (eta, zeta, rho, Lambda)")
    p.add_argument("--out", help="output CSV path (stdout when omitted)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="cross-validate closed forms against integration")
    p.add_argument("--out", help="report CSV path")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("biphasic", help="reduce a thin layer to its series pair")
    p.add_argument("--params", required=True, help="layer JSON file")
    p.add_argument("--m", type=float, required=True, help="impactor mass [kg]")
    p.add_argument("--v0", type=float, default=1.0, help="impact velocity [m/s]")
    p.add_argument("--out", help="trajectory CSV path (also runs the impact)")
    p.add_argument("--dt", type=float, help="scaled sample spacing")
    p.add_argument("--horizon", type=float, help="scaled integration horizon")
    p.set_defaults(func=cmd_biphasic)

    p = sub.add_parser("analyze", help="check linear predictions on drop-test records")
    p.add_argument("table", nargs="?", help="records CSV (bundled data when omitted)")
    p.add_argument("--out", help="per-record CSV path")
    p.set_defaults(func=cmd_analyze)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DomainError, DiscriminantError, SingularityError, NoCrossingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (PlasticImpactError, NoSeparationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PLASTIC
    except ViscoImpactError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
