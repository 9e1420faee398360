"""Command-line front end: spectra, wavefunction samples, transform tables,
and a machine-readable verification report.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric
non-convergence.  Output is a pure function of the configuration (no
timestamps), so identical invocations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import __version__
from .exact_scalar import ExactScalar
from .hermite import hermite_explicit, hermite_recurrence, match_to_hermite
from .inversion import (
    assemble_wavefunction,
    boundary_exponent,
    eval_wavefunction,
    invert_transform,
    normalize,
    schrodinger_residual,
)
from .laplace_series import (
    Parity,
    build_transform,
    coefficients_closed_form,
    eval_transform,
    quantize,
    recurrence_step,
    verify_ode_identity,
)
from .oracle import (
    OracleConvergenceError,
    asymptotic_large_s,
    asymptotic_small_s,
    fd_hamiltonian,
    inner_product,
    lowest_eigenvalues,
    make_grid,
    numeric_laplace,
    quadrature,
)
from .units import Units

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NONCONVERGENCE = 3

ROUNDTRIP_TOL = 1e-8
ORTHONORMALITY_TOL = 1e-10
FD_EIGENVALUE_TOL = 2e-4
DRIFT_TOL = 1e-6
ROUNDTRIP_S_VALUES = (0.5, 1.0, 1.5, 3.0)
CONVERGENCE_RATIO_WINDOW = (3.5, 4.5)


class UsageError(ValueError):
    """Invalid flag combination or value (exit code 2)."""


@dataclass(frozen=True)
class RunConfig:
    """Resolved configuration of one CLI invocation."""

    command: str
    n_max: int = 0
    total_index: Optional[int] = None
    parity: Optional[str] = None
    n: Optional[int] = None
    hbar: float = 1.0
    mass: float = 1.0
    omega: float = 1.0
    grid_half_width: float = 10.0
    grid_points: int = 2001
    tol: float = 1e-10
    s_values: tuple[float, ...] = (0.5, 1.0, 2.0)
    output_format: str = "json"
    output_path: Optional[str] = None

    def __post_init__(self):
        if self.n_max < 0:
            raise UsageError("--n-max must be non-negative")
        if not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.output_format not in ("json", "csv"):
            raise UsageError(f"unsupported format {self.output_format!r}")

    def units(self) -> Units:
        try:
            return Units(hbar=self.hbar, mass=self.mass, omega=self.omega)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc


def _resolve_state(config: RunConfig) -> tuple[Parity, int]:
    """Map --N or (--parity, --n) to a parity sector and in-sector index."""
    by_total = config.total_index is not None
    by_pair = config.parity is not None or config.n is not None
    if by_total and by_pair:
        raise UsageError("give either --N or (--parity and --n), not both")
    if by_total:
        if config.total_index < 0:
            raise UsageError("--N must be non-negative")
        parity = Parity.of_total_index(config.total_index)
        return parity, config.total_index // 2
    if config.parity is None or config.n is None:
        raise UsageError("state selection needs --N or both --parity and --n")
    if config.n < 0:
        raise UsageError("--n must be non-negative")
    return Parity(config.parity), config.n


# ---------------------------------------------------------------------------
# serialization helpers


def _f17(value: float) -> str:
    return f"{value:.17g}"


def _scalar_payload(value: ExactScalar) -> dict:
    return {"rational": str(value.rational), "pi_half_exp": value.pi_half_exponent}


def _csv_lines(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_spectrum(config: RunConfig) -> dict:
    """Energy ladder up to total index n_max, exact and floating."""
    units = config.units()
    rows = []
    for total in range(config.n_max + 1):
        parity = Parity.of_total_index(total)
        qn = quantize(parity, total // 2, units)
        rows.append(
            {
                "total_index": qn.total_index,
                "parity": parity.value,
                "n": qn.n,
                "nu": str(qn.nu),
                "k": str(qn.k),
                "energy_over_hbar_omega": str(qn.energy_quanta),
                "energy": qn.energy,
            }
        )
    return {"rows": rows}


def _spectrum_table(payload: dict) -> tuple[list[str], list[list[str]]]:
    header = [
        "total_index",
        "parity",
        "n",
        "nu",
        "k",
        "energy_over_hbar_omega",
        "energy",
    ]
    rows = [
        [
            str(r["total_index"]),
            r["parity"],
            str(r["n"]),
            r["nu"],
            r["k"],
            r["energy_over_hbar_omega"],
            _f17(r["energy"]),
        ]
        for r in payload["rows"]
    ]
    return header, rows


def cmd_wavefunction(config: RunConfig) -> dict:
    """Samples of psi_n(x) on a uniform grid plus exact pipeline metadata."""
    parity, n = _resolve_state(config)
    units = config.units()
    ts = build_transform(parity, n, units=units)
    phi = invert_transform(ts)
    ef = assemble_wavefunction(phi, ts.qn, units)
    ef = normalize(ef, quadrature, tol=config.tol)
    constant, degree = match_to_hermite(phi, ts.qn)
    hermite = hermite_explicit(degree)

    if config.grid_points < 2:
        raise UsageError("--grid-points must be at least 2")
    if not config.grid_half_width > 0:
        raise UsageError("--grid-half-width must be positive")
    step = 2.0 * config.grid_half_width / (config.grid_points - 1)
    samples = []
    for i in range(config.grid_points):
        x = -config.grid_half_width + i * step
        samples.append({"x": x, "psi": eval_wavefunction(ef, x)})

    metadata = {
        "total_index": ts.qn.total_index,
        "parity": parity.value,
        "n": n,
        "nu": str(ts.qn.nu),
        "k": str(ts.qn.k),
        "delta": ts.qn.delta,
        "energy_over_hbar_omega": str(ts.qn.energy_quanta),
        "energy": ts.qn.energy,
        "laplace_coefficients": [str(c) for c in ts.coefficients],
        "c0": _scalar_payload(ts.c0),
        "hermite_coefficients": list(hermite.coeffs),
        "hermite_match_constant": _scalar_payload(constant),
        "gaussian_rate": ef.gaussian_rate,
        "normalization": ef.normalization,
        "units": {"hbar": units.hbar, "mass": units.mass, "omega": units.omega},
    }
    return {"metadata": metadata, "samples": samples}


def _wavefunction_table(payload: dict) -> tuple[list[str], list[list[str]]]:
    header = ["x", "psi"]
    rows = [[_f17(s["x"]), _f17(s["psi"])] for s in payload["samples"]]
    return header, rows


def cmd_laplace(config: RunConfig) -> dict:
    """Analytic vs numeric transform values for the selected state."""
    parity, n = _resolve_state(config)
    if not config.s_values:
        raise UsageError("--s needs at least one value")
    if any(not s > 0 for s in config.s_values):
        raise UsageError("all --s values must be positive")
    units = config.units()
    ts = build_transform(parity, n, units=units)
    phi = invert_transform(ts)
    rows = []
    for s in config.s_values:
        analytic = eval_transform(ts, s)
        numeric = numeric_laplace(phi, s, tol=config.tol * max(1.0, abs(analytic)))
        denominator = abs(analytic) if analytic != 0.0 else 1.0
        rows.append(
            {
                "s": s,
                "transform_analytic": analytic,
                "transform_numeric": numeric,
                "relative_error": abs(numeric - analytic) / denominator,
            }
        )
    metadata = {
        "total_index": ts.qn.total_index,
        "parity": parity.value,
        "n": n,
        "nu": str(ts.qn.nu),
        "laplace_coefficients": [str(c) for c in ts.coefficients],
    }
    return {"metadata": metadata, "rows": rows}


def _laplace_table(payload: dict) -> tuple[list[str], list[list[str]]]:
    header = ["s", "transform_analytic", "transform_numeric", "relative_error"]
    rows = [
        [
            _f17(r["s"]),
            _f17(r["transform_analytic"]),
            _f17(r["transform_numeric"]),
            _f17(r["relative_error"]),
        ]
        for r in payload["rows"]
    ]
    return header, rows


# ---------------------------------------------------------------------------
# verification report


@dataclass(frozen=True)
class CheckResult:
    name: str
    n_range: str
    status: str
    worst_error: float
    detail: str

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _result(name: str, n_range: str, ok: bool, worst: float, detail: str) -> CheckResult:
    return CheckResult(
        name=name,
        n_range=n_range,
        status="pass" if ok else "fail",
        worst_error=worst,
        detail=detail,
    )


def _check_recurrence_closed_form(n_max: int) -> CheckResult:
    cap = min(n_max, 100)
    mismatches = 0
    for parity in Parity:
        for n in range(cap + 1):
            closed = coefficients_closed_form(parity, n)
            value = Fraction(1)
            for j in range(n + 1):
                if value != closed[j]:
                    mismatches += 1
                    break
                if j < n:
                    value = recurrence_step(parity, n, j, value)
    return _result(
        "recurrence_closed_form",
        f"n<={cap}, both parities",
        mismatches == 0,
        float(mismatches),
        "iterated recurrence vs closed form, exact rational comparison",
    )


def _check_ode_identity(n_max: int) -> CheckResult:
    cap = min(n_max, 50)
    worst = 0.0
    failures = 0
    for parity in Parity:
        for n in range(cap + 1):
            outcome = verify_ode_identity(build_transform(parity, n))
            if not outcome.ok:
                failures += 1
                if outcome.residual is not None:
                    worst = max(worst, abs(outcome.residual.to_float()))
    return _result(
        "ode_identity",
        f"n<={cap}, both parities",
        failures == 0,
        worst,
        "transform equation expanded symbolically; residual must be phi(0)/2",
    )


def _check_hermite_match(n_max: int) -> CheckResult:
    cap = min(n_max, 25)
    worst = 0.0
    failures = 0
    for parity in Parity:
        for n in range(cap + 1):
            ts = build_transform(parity, n)
            phi = invert_transform(ts)
            try:
                constant, degree = match_to_hermite(phi, ts.qn)
            except Exception:
                failures += 1
                continue
            if hermite_explicit(degree) != hermite_recurrence(degree):
                failures += 1
                continue
            expected = _expected_hermite_constant(parity, n)
            if constant != expected:
                failures += 1
                worst = max(worst, abs(constant.to_float() - expected.to_float()))
    return _result(
        "hermite_match",
        f"n<={cap}, both parities",
        failures == 0,
        worst,
        "phi_n proportional to H_N(sqrt(xi)) with the exact closed-form constant",
    )


def _expected_hermite_constant(parity: Parity, n: int) -> ExactScalar:
    """Exact prefactor: Gamma(n+1/2)/((2n)! sqrt(pi)) even, n!/((2n+1)! sqrt(pi)) odd."""
    from .exact_scalar import SQRT_PI, gamma_of_half_integer

    if parity is Parity.EVEN:
        return gamma_of_half_integer(2 * n + 1) / (
            SQRT_PI * math.factorial(2 * n)
        )
    return ExactScalar(
        Fraction(math.factorial(n), math.factorial(2 * n + 1))
    ) / SQRT_PI


def _check_schrodinger_residual(n_max: int) -> CheckResult:
    cap = min(2 * n_max + 1, 40)
    unit_systems = (Units(), Units(hbar=0.5, mass=2.0, omega=3.0))
    worst = 0.0
    failures = 0
    for total in range(cap + 1):
        parity = Parity.of_total_index(total)
        for units in unit_systems:
            ts = build_transform(parity, total // 2, units=units)
            ef = assemble_wavefunction(invert_transform(ts), ts.qn, units)
            residual = schrodinger_residual(ef)
            if not residual.is_zero:
                failures += 1
                worst = max(
                    worst, max(abs(c.to_float()) for _, c in residual.terms)
                )
    return _result(
        "schrodinger_residual",
        f"N<={cap}, two unit systems",
        failures == 0,
        worst,
        "(H - E) psi expanded symbolically; residual polynomial must vanish",
    )


def _check_orthonormality(n_max: int, tol: float) -> CheckResult:
    cap = min(n_max, 15)
    units = Units()
    states = []
    for total in range(cap + 1):
        parity = Parity.of_total_index(total)
        ts = build_transform(parity, total // 2, units=units)
        ef = assemble_wavefunction(invert_transform(ts), ts.qn, units)
        states.append(normalize(ef, quadrature, tol=min(tol, 1e-12)))
    worst = 0.0
    for i, a in enumerate(states):
        for b in states[i:]:
            expected = 1.0 if a is b else 0.0
            worst = max(worst, abs(inner_product(a, b) - expected))
    ground_gap = abs(states[0].normalization - math.pi ** -0.25)
    worst = max(worst, ground_gap)
    return _result(
        "orthonormality",
        f"N<={cap}",
        worst < ORTHONORMALITY_TOL,
        worst,
        "pairwise <psi_m|psi_n> vs delta_mn by quadrature; A_0 vs pi**(-1/4)",
    )


def _check_fd_oracle(config: RunConfig) -> CheckResult:
    count = min(config.n_max, 10) + 1
    units = Units()
    coarse_grid = make_grid(config.grid_half_width, config.grid_points, units)
    fine_grid = make_grid(
        config.grid_half_width, 2 * (config.grid_points - 1) + 1, units
    )
    coarse = lowest_eigenvalues(fd_hamiltonian(coarse_grid, units), count, tol=1e-10)
    fine = lowest_eigenvalues(fd_hamiltonian(fine_grid, units), count, tol=1e-10)
    worst_fine = 0.0
    ratio_ok = True
    ratios = []
    for level, (ec, ef_) in enumerate(zip(coarse, fine)):
        exact = level + 0.5
        err_coarse = abs(ec - exact)
        err_fine = abs(ef_ - exact)
        worst_fine = max(worst_fine, err_fine)
        if err_fine > 0:
            ratio = err_coarse / err_fine
            ratios.append(ratio)
            lo, hi = CONVERGENCE_RATIO_WINDOW
            if not lo <= ratio <= hi:
                ratio_ok = False
    ok = worst_fine < FD_EIGENVALUE_TOL and ratio_ok
    detail = (
        "Sturm bisection at h and h/2; second-order ratios "
        + ",".join(f"{r:.2f}" for r in ratios)
    )
    return _result(
        "fd_oracle", f"N<={count - 1}", ok, worst_fine, detail
    )


def _check_laplace_roundtrip(n_max: int) -> CheckResult:
    cap = min(n_max, 8)
    worst = 0.0
    for parity in Parity:
        for n in range(cap + 1):
            ts = build_transform(parity, n)
            phi = invert_transform(ts)
            for s in ROUNDTRIP_S_VALUES:
                analytic = eval_transform(ts, s)
                numeric = numeric_laplace(
                    phi, s, tol=1e-9 * max(1.0, abs(analytic))
                )
                worst = max(worst, abs(numeric - analytic) / abs(analytic))
    return _result(
        "laplace_roundtrip",
        f"n<={cap}, both parities",
        worst < ROUNDTRIP_TOL,
        worst,
        f"numeric transform of phi vs series at s={ROUNDTRIP_S_VALUES}",
    )


def _check_asymptotics(n_max: int) -> CheckResult:
    cap = min(n_max, 10)
    worst = 0.0
    ok = True
    for parity in Parity:
        for n in range(cap + 1):
            ts = build_transform(parity, n)
            small = asymptotic_small_s(ts)
            large = asymptotic_large_s(ts)
            worst = max(worst, small.limit_drift, large.limit_drift)
            ok = ok and small.passed and large.passed
    return _result(
        "asymptotics",
        f"n<={cap}, both parities",
        ok,
        worst,
        "s->0 limit by extrapolation along decreasing s; s->inf drift at s=1e8",
    )


def cmd_verify(config: RunConfig) -> tuple[dict, bool]:
    """Run every check family and assemble the machine-readable report."""
    checks = [
        _check_recurrence_closed_form(config.n_max),
        _check_ode_identity(config.n_max),
        _check_hermite_match(config.n_max),
        _check_schrodinger_residual(config.n_max),
        _check_orthonormality(config.n_max, config.tol),
        _check_fd_oracle(config),
        _check_laplace_roundtrip(config.n_max),
        _check_asymptotics(config.n_max),
    ]
    all_passed = all(c.passed for c in checks)
    payload = {
        "meta": {"version": __version__, "config": asdict(config)},
        "checks": [asdict(c) for c in checks],
    }
    return payload, all_passed


def _verify_table(payload: dict) -> tuple[list[str], list[list[str]]]:
    header = ["name", "n_range", "status", "worst_error", "detail"]
    rows = [
        [
            c["name"],
            c["n_range"],
            c["status"],
            _f17(c["worst_error"]),
            c["detail"].replace(",", ";"),
        ]
        for c in payload["checks"]
    ]
    return header, rows


# ---------------------------------------------------------------------------
# argument parsing and dispatch


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--hbar", type=float, default=1.0)
    parser.add_argument("--mass", type=float, default=1.0)
    parser.add_argument("--omega", type=float, default=1.0)
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", default=None, metavar="PATH")


def _add_state_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--N", type=int, default=None, dest="total_index",
                        help="total ladder index (parity and n derived)")
    parser.add_argument("--parity", choices=("even", "odd"), default=None)
    parser.add_argument("--n", type=int, default=None,
                        help="index within the parity sector")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qho-laplace",
        description="Harmonic-oscillator spectra and eigenfunctions from the "
        "Laplace-transform series, with numeric cross-checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    spectrum = sub.add_parser("spectrum", help="energy ladder table")
    spectrum.add_argument("--n-max", type=int, default=0, dest="n_max")
    _add_common_flags(spectrum)

    wavefunction = sub.add_parser("wavefunction", help="psi_n samples + metadata")
    _add_state_flags(wavefunction)
    wavefunction.add_argument("--grid-half-width", type=float, default=10.0)
    wavefunction.add_argument("--grid-points", type=int, default=2001)
    wavefunction.add_argument("--tol", type=float, default=1e-10)
    _add_common_flags(wavefunction)

    laplace = sub.add_parser("laplace", help="analytic vs numeric transform")
    _add_state_flags(laplace)
    laplace.add_argument("--s", default="0.5,1.0,2.0",
                         help="comma-separated positive s values")
    laplace.add_argument("--tol", type=float, default=1e-10)
    _add_common_flags(laplace)

    verify = sub.add_parser("verify", help="run all check families")
    verify.add_argument("--n-max", type=int, default=10, dest="n_max")
    verify.add_argument("--grid-half-width", type=float, default=10.0)
    verify.add_argument("--grid-points", type=int, default=2001)
    verify.add_argument("--tol", type=float, default=1e-10)
    _add_common_flags(verify)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    s_values: tuple[float, ...] = ()
    if getattr(args, "s", None) is not None:
        try:
            s_values = tuple(float(part) for part in args.s.split(",") if part)
        except ValueError as exc:
            raise UsageError(f"could not parse --s value {args.s!r}") from exc
    return RunConfig(
        command=args.command,
        n_max=getattr(args, "n_max", 0),
        total_index=getattr(args, "total_index", None),
        parity=getattr(args, "parity", None),
        n=getattr(args, "n", None),
        hbar=args.hbar,
        mass=args.mass,
        omega=args.omega,
        grid_half_width=getattr(args, "grid_half_width", 10.0),
        grid_points=getattr(args, "grid_points", 2001),
        tol=getattr(args, "tol", 1e-10),
        s_values=s_values or (0.5, 1.0, 2.0),
        output_format=args.format,
        output_path=args.out,
    )


def _render(payload: dict, config: RunConfig,
            table: Callable[[dict], tuple[list[str], list[list[str]]]]) -> str:
    if config.output_format == "json":
        return json.dumps(payload, indent=2) + "\n"
    header, rows = table(payload)
    return _csv_lines(header, rows)


def _emit(text: str, config: RunConfig) -> None:
    if config.output_path is None:
        sys.stdout.write(text)
    else:
        with open(config.output_path, "w", encoding="utf-8", newline="") as sink:
            sink.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        config = _config_from_args(args)
        if config.command == "spectrum":
            _emit(_render(cmd_spectrum(config), config, _spectrum_table), config)
            return EXIT_OK
        if config.command == "wavefunction":
            _emit(_render(cmd_wavefunction(config), config, _wavefunction_table), config)
            return EXIT_OK
        if config.command == "laplace":
            _emit(_render(cmd_laplace(config), config, _laplace_table), config)
            return EXIT_OK
        payload, all_passed = cmd_verify(config)
        _emit(_render(payload, config, _verify_table), config)
        return EXIT_OK if all_passed else EXIT_CHECK_FAILED
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OracleConvergenceError as exc:
        print(f"numeric non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
