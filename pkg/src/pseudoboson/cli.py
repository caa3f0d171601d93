"""Command-line entry point: ``pseudoboson {family,scan,oracle,verify-all}``.

Exit codes: 0 all checks pass, 1 a tolerance check failed, 2 bad input or
inadmissible parameters, 3 numerical convergence failure.
"""

import argparse
import datetime as _dt
import io
import os
import sys

from . import __version__
from .core import admissibility, coefficient_set, make_parameters, vacuum_widths
from .errors import ConvergenceError, DegenerateError, DomainError, InadmissibleError
from .family import (
    build_family,
    hermite_case_check,
    ladder_consistency,
    number_eigencheck,
    riesz_diagnostic,
    verify_biorthonormality,
)
from .fock import (
    eq31_convergence,
    inverse_residual,
    quadrature_inner_product,
    verify_eq31,
    verify_eq35,
    verify_intertwining,
)
from .region import eta_window, linspace, scan_region
from .report import csv_cell, dumps

EXIT_OK, EXIT_TOL, EXIT_INPUT, EXIT_CONVERGENCE = 0, 1, 2, 3

FAMILY_TOLS = {
    "biorth": 1e-8,
    "ladder": 1e-9,
    "determinant": 1e-12,
    "riesz_floor": 1e-10,
    "hermite": 1e-9,
}
ORACLE_TOLS = {
    "eq31": 1e-6,
    "eq35": 1e-5,
    "intertwining": 1e-6,
    "inverse": 1e-9,
    "quadrature": 1e-9,
}
SCAN_COLUMNS = [
    "alpha", "eta", "epsilon", "ratioA", "ratioB", "condA", "condB",
    "admissible", "eta0", "classification", "classification_consistent",
]

ACCEPTANCE_POINTS = [(1.0, 0.0), (0.3, 0.1), (0.45, 0.15)]


class UsageError(Exception):
    pass


def tol_scale():
    raw = os.environ.get("PSEUDOBOSON_TOL_SCALE", "1")
    try:
        val = float(raw)
    except ValueError:
        raise UsageError(f"PSEUDOBOSON_TOL_SCALE must be a number, got {raw!r}")
    if not val > 0:
        raise UsageError("PSEUDOBOSON_TOL_SCALE must be positive")
    return val


def effective_tolerances(args, defaults):
    scale = tol_scale()
    out = {}
    for name, default in defaults.items():
        given = getattr(args, f"tol_{name}", None)
        out[name] = (default if given is None else given) * scale
    return out


def _metadata():
    now = _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0)
    return {"generated_at": now.isoformat(), "version": __version__}


def _eta(args):
    return complex(args.eta_re, args.eta_im)


# -- family -----------------------------------------------------------------

QUADRATURE_NMAX = 12


def family_report(epsilon, eta, n_max, tols, gram_size=16, quadrature=False,
                  quadrature_nmax=QUADRATURE_NMAX):
    p = make_parameters(epsilon, eta)
    c = coefficient_set(p)
    cond_a, cond_b = admissibility(c)
    fam = build_family(p, n_max)
    w_phi, w_psi = vacuum_widths(c)

    det_dev = abs(c.determinant() - 1.0)
    biorth, _ = verify_biorthonormality(fam)
    ladder = ladder_consistency(fam, tols["ladder"])
    eigen = number_eigencheck(fam, tols["ladder"])
    riesz = riesz_diagnostic(fam, gram_size, tols["riesz_floor"])
    herm = hermite_case_check(fam, rtol=tols["hermite"])

    checks = {
        "determinant": det_dev <= tols["determinant"],
        "biorthonormality": biorth <= tols["biorth"],
        "ladder": ladder.passed,
        "eigen": eigen.passed,
        "riesz_lower_bound": riesz.lower_bound_ok,
        "hermite_case": herm.passed,
    }
    report = {
        "command": "family",
        "parameters": {"epsilon": p.epsilon, "eta": p.eta, "theta": p.theta, "n_max": n_max},
        "coefficients": {
            k: getattr(c, k)
            for k in ("kA1", "kA2", "kB1", "kB2", "kAplus", "kAminus", "kBplus", "kBminus")
        },
        "determinant_deviation": det_dev,
        "admissibility": {"condA": cond_a, "condB": cond_b},
        "widths": {"phi": w_phi, "psi": w_psi},
        "normalisation": {"N0_phi": fam.norm_phi, "N0_psi": fam.norm_psi},
        "biorthonormality": {"max_deviation": biorth, "passed": checks["biorthonormality"]},
        "ladder": ladder.as_dict(),
        "eigen": eigen.as_dict(),
        "riesz": riesz.as_dict(),
        "hermite_case": herm.as_dict(),
    }
    if quadrature:
        # quadrature integrates the rounded polynomials, whose pairing error
        # grows quickly with n; it is cross-checked on the leading block only
        k = min(n_max, quadrature_nmax)
        sub = build_family(p, k)
        dq, _ = verify_biorthonormality(sub, quadrature_inner_product)
        checks["biorthonormality_quadrature"] = dq <= tols["biorth"]
        report["biorthonormality"]["quadrature_max_deviation"] = dq
        report["biorthonormality"]["quadrature_n_max"] = k
    report["checks"] = checks
    report["passed"] = all(checks.values())
    report["tolerances"] = tols
    return report


def cmd_family(args):
    tols = effective_tolerances(args, FAMILY_TOLS)
    report = family_report(args.epsilon, _eta(args), args.nmax, tols,
                           args.gram_size, args.quadrature, args.quadrature_nmax)
    return report, EXIT_OK if report["passed"] else EXIT_TOL


# -- scan -------------------------------------------------------------------

def scan_rows(alphas, etas):
    points = scan_region(alphas, etas)
    rows = [pt.row() for pt in points]
    consistent = all(pt.consistent is not False for pt in points)
    return rows, consistent


def cmd_scan(args):
    if args.eta_steps < 1:
        raise UsageError("--eta-steps must be at least 1")
    if args.eta_max < args.eta_min:
        raise UsageError("--eta-max must not be below --eta-min")
    etas = linspace(args.eta_min, args.eta_max, args.eta_steps)
    rows, consistent = scan_rows(args.alpha, etas)
    report = {
        "command": "scan",
        "eta0": {repr(a): eta_window(a) for a in args.alpha},
        "rows": rows,
        "passed": consistent,
    }
    return report, EXIT_OK if consistent else EXIT_TOL


def rows_to_csv(rows):
    buf = io.StringIO()
    buf.write(",".join(SCAN_COLUMNS) + "\n")
    for r in rows:
        buf.write(",".join(csv_cell(r[c]) for c in SCAN_COLUMNS) + "\n")
    return buf.getvalue()


# -- oracle -----------------------------------------------------------------

def oracle_report(epsilon, eta, dim, block, n_max, omega, tols):
    if dim < 3 * block:
        raise UsageError(f"--dim {dim} must be at least 3 * --block ({3 * block})")
    if 4 * n_max > dim:
        raise UsageError(f"--nmax {n_max} must be at most --dim / 4")
    p = make_parameters(epsilon, eta)
    eq31 = verify_eq31(p, dim, block)
    conv_block = min(block, 40 // 3)
    conv = eq31_convergence(p, (40, 60, 80), conv_block)
    eq35 = verify_eq35(p, dim, n_max)
    inter = verify_intertwining(p, dim, block, omega)
    inv_block, inv_full = inverse_residual(p, dim, block)

    fam = build_family(p, min(n_max, 12))
    exact, _ = verify_biorthonormality(fam)
    quad, _ = verify_biorthonormality(fam, quadrature_inner_product)
    checks = {
        "eq31": max(eq31["resA"], eq31["resB"]) <= tols["eq31"],
        "eq31_convergence": conv["non_increasing"],
        "eq35_phi": eq35["phi_deviation"] <= tols["eq35"],
        "eq35_psi": eq35["psi_deviation"] <= tols["eq35"],
        "eq35_single_gamma": eq35["gamma_spread"] <= tols["eq35"],
        "intertwining": max(inter["HS_Sh"], inter["SHdag_hS"]) <= tols["intertwining"],
        "inverse_block": inv_block <= tols["inverse"],
        "quadrature_vs_exact": abs(quad - exact) <= tols["quadrature"],
    }
    return {
        "command": "oracle",
        "parameters": {"epsilon": p.epsilon, "eta": p.eta, "theta": p.theta,
                       "dim": dim, "block": block, "n_max": n_max, "omega": omega},
        "eq31": eq31,
        "eq31_convergence": conv,
        "eq35": eq35,
        "intertwining": inter,
        "inverse": {"block_max": inv_block, "full_max": inv_full},
        "quadrature": {"exact_biorth_deviation": exact, "quadrature_biorth_deviation": quad},
        "checks": checks,
        "passed": all(checks.values()),
        "tolerances": tols,
    }


def cmd_oracle(args):
    tols = effective_tolerances(args, ORACLE_TOLS)
    report = oracle_report(args.epsilon, _eta(args), args.dim, args.block,
                           args.nmax, args.omega, tols)
    return report, EXIT_OK if report["passed"] else EXIT_TOL


# -- verify-all -------------------------------------------------------------

def cmd_verify_all(args):
    ftols = effective_tolerances(args, FAMILY_TOLS)
    otols = effective_tolerances(args, ORACLE_TOLS)
    families = [
        family_report(e, h, args.nmax, ftols, quadrature=True) for e, h in ACCEPTANCE_POINTS
    ]
    e0 = eta_window(3.0)
    rows, consistent = scan_rows([3.0], linspace(-0.4, 0.4, 81))
    oracles = [
        oracle_report(1.0, 0.0, 60, 20, 8, 1.0, otols),
        oracle_report(0.3, 0.1, 80, 20, 8, 1.0, otols),
    ]
    passed = all(r["passed"] for r in families + oracles) and consistent
    report = {
        "command": "verify-all",
        "families": families,
        "scan": {"alpha": 3.0, "eta0": e0, "consistent": consistent, "rows": len(rows)},
        "oracles": oracles,
        "passed": passed,
    }
    return report, EXIT_OK if passed else EXIT_TOL


# -- argument parsing -------------------------------------------------------

def _add_point(p):
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--eta-re", type=float, default=0.0)
    p.add_argument("--eta-im", type=float, default=0.0)


def _add_tols(p, defaults):
    for name, val in defaults.items():
        p.add_argument(f"--tol-{name.replace('_', '-')}", dest=f"tol_{name}", type=float,
                       default=None, help=f"default {val:g}")


def _add_output(p, formats=("json",)):
    p.add_argument("-o", "--output", default=None, help="report file (default: stdout)")
    p.add_argument("--format", choices=formats, default=formats[0])


def build_parser():
    parser = argparse.ArgumentParser(prog="pseudoboson", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family", help="build phi_n, Psi_n and run all family checks")
    _add_point(p)
    p.add_argument("--nmax", type=int, default=20)
    p.add_argument("--gram-size", type=int, default=16)
    p.add_argument("--quadrature", action="store_true",
                   help="also check biorthonormality with the quadrature oracle")
    p.add_argument("--quadrature-nmax", type=int, default=QUADRATURE_NMAX,
                   help="largest index in the quadrature cross-check (default 12)")
    _add_tols(p, FAMILY_TOLS)
    _add_output(p)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("scan", help="classify an (alpha, eta) grid")
    p.add_argument("--alpha", type=float, nargs="+", required=True)
    p.add_argument("--eta-min", type=float, required=True)
    p.add_argument("--eta-max", type=float, required=True)
    p.add_argument("--eta-steps", type=int, required=True)
    _add_output(p, ("csv", "json"))
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("oracle", help="truncated Fock-space cross-checks")
    _add_point(p)
    p.add_argument("--dim", type=int, default=80)
    p.add_argument("--block", type=int, default=20)
    p.add_argument("--nmax", type=int, default=8)
    p.add_argument("--omega", type=float, default=1.0)
    _add_tols(p, ORACLE_TOLS)
    _add_output(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify-all", help="run every check at the standard points")
    p.add_argument("--nmax", type=int, default=20)
    _add_tols(p, {**FAMILY_TOLS, **ORACLE_TOLS})
    _add_output(p)
    p.set_defaults(func=cmd_verify_all)
    return parser


def render(report, fmt):
    if fmt == "csv":
        return rows_to_csv(report["rows"])
    out = dict(report)
    out["metadata"] = _metadata()
    return dumps(out)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.func(args)
    except (UsageError, DomainError, InadmissibleError, DegenerateError) as exc:
        print(f"pseudoboson {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"pseudoboson {args.command}: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE

    text = render(report, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code != EXIT_OK:
        print(f"pseudoboson {args.command}: tolerance check failed", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
