"""Command-line front end: form-factor sweeps, phases, scans, and fits.

Every numeric output is deterministic for identical inputs (including
the Monte Carlo seed), CSV floats carry 17 significant digits for
round-trip fidelity, and each failure class maps to its own exit code
so sweeps can be scripted:

    0  success
    1  check ran but failed its criterion (check-reduction)
    2  usage or validation error
    3  kinematics outside the supported domain / singular geometry
    4  infrared-divergent integral requested
    5  integration did not converge within budget
    6  malformed input file
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from pathlib import Path

from .errors import (
    DomainError,
    EndpointMismatch,
    InfraredDivergent,
    NonConvergence,
    ParseError,
    PointOnPath,
    SingularPath,
    SingularPoint,
)
from .field import FieldConfig
from .formfactor import (
    SusyParams,
    YukawaParams,
    cs_mass_scan,
    ir_scan,
    reduction_check,
    reduction_integrand_deviation,
    susy_form_factor,
    susy_integrand,
    yukawa_form_factor,
)
from .phase import GAMMA_CONVENTION_S, PolylinePath, Species, ac_phase, fringe_shift
from .quadrature import DEFAULT_BUDGET, mc_integrate_triangle

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_INFRARED = 4
EXIT_NONCONVERGENCE = 5
EXIT_PARSE = 6

_UNITS_NOTE = (
    "Units: all inputs are dimensionless ratios in natural units -- q2 is "
    "q^2/m^2 (gauge model) or q^2/m_phi^2 (Yukawa model), mcs2 is "
    "Mcs^2/m^2, and Yukawa masses are quoted in units of the scalar mass. "
    "Couplings in 2+1 dimensions carry dimension (mass)^(1/2), so form "
    "factors are reported as a dimensionless integral together with a "
    "symbolic prefactor tag and are never pre-multiplied."
)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def _emit_table(args, columns, rows, fit=None):
    if args.out == "json":
        payload = {"rows": [dict(zip(columns, row)) for row in rows]}
        if fit is not None:
            payload["fit"] = fit
        print(json.dumps(_json_safe(payload), indent=2))
    else:
        print(",".join(columns))
        for row in rows:
            print(",".join(_fmt(v) for v in row))
        if fit is not None:
            for key, val in fit.items():
                print(f"# {key} = {_fmt(val)}")


def _float_list(text: str, what: str):
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise ValueError(f"{what} sweep must contain at least one value")
    return [float(t) for t in items]


def _read_text(path_str: str) -> str:
    try:
        return Path(path_str).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read {path_str}: {exc}") from exc


def cmd_mdm(args) -> int:
    q2_list = _float_list(args.q2, "q2")
    rows = []
    for q2 in q2_list:
        params = SusyParams(q_hat2=q2, mcs_hat2=args.mcs2)
        if args.method == "mc":
            if params.mcs_hat2 == 0.0:
                raise InfraredDivergent(
                    "the mcs2 = 0 integral is infrared divergent; sampling it "
                    "would return a sample-size-dependent number"
                )
            res = mc_integrate_triangle(
                lambda x, y, p=params: susy_integrand(x, y, p),
                args.samples,
                args.seed,
            )
            integral, error, evals = res.value, res.error_estimate, res.evaluations
        else:
            res = susy_form_factor(params, args.tol, budget=args.budget)
            integral, error, evals = res.integral, res.error_estimate, res.evaluations
        rows.append((q2, args.mcs2, integral, error, evals))
    _emit_table(args, ("q_hat2", "mcs_hat2", "integral", "error_estimate", "evaluations"), rows)
    return EXIT_OK


def cmd_yukawa(args) -> int:
    q2_list = _float_list(args.q2, "q2")
    rows = []
    for q2 in q2_list:
        params = YukawaParams(
            q_hat2=q2, m1_hat=args.m1, m2_hat=args.m2,
            e1=args.e1, e2=args.e2, a_abs2=args.a2,
        )
        res = yukawa_form_factor(params, args.tol, budget=args.budget)
        rows.append((q2, args.m1, args.m2, args.e1, args.e2,
                     res.integral, res.error_estimate))
    _emit_table(
        args,
        ("q_hat2", "m1_hat", "m2_hat", "e1", "e2", "integral", "error_estimate"),
        rows,
    )
    return EXIT_OK


def cmd_phase(args) -> int:
    config = FieldConfig.from_json(_read_text(args.charges))
    path = PolylinePath.from_json(_read_text(args.path))
    result = ac_phase(path, config, args.g, args.species, args.tol)
    payload = {
        "phase": result.phase,
        "windings": list(result.windings),
        "error_estimate": result.error_estimate,
        "species": result.species.value,
        "g": args.g,
        "convention_s": GAMMA_CONVENTION_S,
    }
    print(json.dumps(_json_safe(payload), indent=2))
    return EXIT_OK


def cmd_fringe(args) -> int:
    config = FieldConfig.from_json(_read_text(args.charges))
    arm_a = PolylinePath.from_json(_read_text(args.path_a))
    arm_b = PolylinePath.from_json(_read_text(args.path_b))
    result = fringe_shift(arm_a, arm_b, config, args.g, args.species, args.tol)
    payload = {
        "delta_phase": result.delta_phase,
        "contrast": result.contrast,
        "species": Species(args.species).value,
        "g": args.g,
        "convention_s": GAMMA_CONVENTION_S,
    }
    print(json.dumps(_json_safe(payload), indent=2))
    return EXIT_OK


def cmd_ir_scan(args) -> int:
    if args.param == "q2":
        values = _float_list(args.q2, "q2")
        scan = ir_scan(values, args.mcs2, args.tol, budget=args.budget)
    else:
        values = _float_list(args.mcs2_list, "mcs2")
        scan = cs_mass_scan(values, args.q2_fixed, args.tol, budget=args.budget)
    rows = [
        (row.parameter, row.integral, row.error_estimate, row.evaluations)
        for row in scan.rows
    ]
    fit = {
        "slope": scan.slope,
        "intercept": scan.intercept,
        "r_squared": scan.r_squared,
    }
    _emit_table(
        args,
        (scan.parameter_name, "integral", "error_estimate", "evaluations"),
        rows,
        fit=fit,
    )
    return EXIT_OK


def cmd_check_reduction(args) -> int:
    grid = _float_list(args.grid, "grid")
    pointwise = max(
        reduction_integrand_deviation(q2, args.points, args.seed) for q2 in grid
    )
    print(f"pointwise integrand deviation over {args.points} samples: "
          f"{_fmt(pointwise)}")
    deviation = reduction_check(grid, args.tol)
    print(f"max integral deviation: {_fmt(deviation)} (bound {_fmt(2 * args.tol)})")
    return EXIT_OK if deviation <= 2.0 * args.tol else EXIT_CHECK_FAILED


class _Parser(argparse.ArgumentParser):
    # Sweep values like "-0.5,-1e-2" must parse as option arguments, not
    # as unknown flags; widen the stock negative-number recognizer (an
    # instance attribute, so it has to be replaced after init).
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(r"^-(\d|\.\d)[\d.,eE+-]*$")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="acmoment",
        description=(
            "One-loop anomalous magnetic-moment form factors in 2+1 "
            "dimensions and Aharonov-Casher phases around line charges."
        ),
        epilog=_UNITS_NOTE,
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-8,
                        help="absolute integration tolerance (default 1e-8)")
    common.add_argument("--out", choices=("csv", "json"), default="csv",
                        help="table format for sweep commands (default csv)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for Monte Carlo sampling (default 0)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mdm", parents=[common],
                       help="gauge-model form-factor sweep over q2")
    p.add_argument("--q2", required=True,
                   help="comma-separated list of q^2/m^2 values")
    p.add_argument("--mcs2", type=float, default=0.0,
                   help="Chern-Simons mass squared over m^2 (default 0)")
    p.add_argument("--method", choices=("adaptive", "mc"), default="adaptive",
                   help="adaptive quadrature or Monte Carlo cross-check")
    p.add_argument("--samples", type=int, default=1_000_000,
                   help="Monte Carlo sample count (mc method)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="max integrand evaluations before giving up")
    p.set_defaults(func=cmd_mdm)

    p = sub.add_parser("yukawa", parents=[common],
                       help="Yukawa-model form-factor sweep over q2")
    p.add_argument("--q2", required=True,
                   help="comma-separated list of q^2/m_phi^2 values")
    p.add_argument("--m1", type=float, required=True, help="m1/m_phi (> 0)")
    p.add_argument("--m2", type=float, required=True, help="m2/m_phi (>= 0)")
    p.add_argument("--e1", type=float, default=1.0, help="charge of spinor 1")
    p.add_argument("--e2", type=float, default=0.0, help="charge of spinor 2")
    p.add_argument("--a2", type=float, default=1.0,
                   help="|a|^2 Yukawa coupling squared (prefactor metadata)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="max integrand evaluations before giving up")
    p.set_defaults(func=cmd_yukawa)

    p = sub.add_parser("phase", parents=[common],
                       help="topological phase of a closed path (JSON output)")
    p.add_argument("--charges", required=True, help="charge-set JSON file")
    p.add_argument("--path", required=True, help="closed-path JSON file")
    p.add_argument("--g", type=float, required=True, help="moment coupling g")
    p.add_argument("--species", choices=("spinor", "scalar"), required=True)
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("fringe", parents=[common],
                       help="two-arm interferometer fringe shift (JSON output)")
    p.add_argument("--charges", required=True, help="charge-set JSON file")
    p.add_argument("--path-a", required=True, help="open-arm JSON file")
    p.add_argument("--path-b", required=True, help="open-arm JSON file")
    p.add_argument("--g", type=float, required=True, help="moment coupling g")
    p.add_argument("--species", choices=("spinor", "scalar"), required=True)
    p.set_defaults(func=cmd_fringe)

    p = sub.add_parser("ir-scan", parents=[common],
                       help="infrared sweep with a line fit of I vs ln(1/p)")
    p.add_argument("--param", choices=("q2", "mcs2"), default="q2",
                   help="sweep q2 at fixed mcs2, or the regulator mass itself")
    p.add_argument("--q2", default="",
                   help="ascending negative q2 list (param=q2)")
    p.add_argument("--mcs2", type=float, default=0.0,
                   help="fixed regulator mass squared (param=q2)")
    p.add_argument("--mcs2-list", default="",
                   help="descending positive mcs2 list (param=mcs2)")
    p.add_argument("--q2-fixed", type=float, default=0.0,
                   help="fixed q2 (param=mcs2, default 0)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="max integrand evaluations per point")
    p.set_defaults(func=cmd_ir_scan)

    p = sub.add_parser("check-reduction", parents=[common],
                       help="compare Yukawa and gauge models in the reduction limit")
    p.add_argument("--grid", default="-0.5,-1,-2",
                   help="comma-separated negative q2 grid")
    p.add_argument("--points", type=int, default=100,
                   help="random points for the pointwise integrand check")
    p.set_defaults(func=cmd_check_reduction)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the diagnostic
        return int(exc.code or 0)
    try:
        if not args.tol > 0.0:
            raise ValueError("--tol must be positive")
        return args.func(args)
    except (ValueError, EndpointMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, SingularPoint, SingularPath, PointOnPath) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except InfraredDivergent as exc:
        print(f"infrared divergent: {exc}", file=sys.stderr)
        return EXIT_INFRARED
    except NonConvergence as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
