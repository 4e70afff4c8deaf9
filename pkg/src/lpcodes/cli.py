"""Command-line front end.

Exit codes: 0 success, 1 a check ran and found a counterexample, 2 a
precondition or budget refusal, 3 a parse error, 4 an invariant violation.
Every report is JSON with ``schema: 1``, the package version, and the seed
when one was used.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import qc_distance_bound
from .chains import balance_construct, balance_twice
from .csscode import (
    CssCode,
    code_params,
    css_dimension,
    css_new,
    distance_upper,
    exact_distance,
)
from .errors import (
    BudgetExceededError,
    ChainComplexError,
    LPCodesError,
    OrthogonalityError,
    ParseError,
)
from .expander import (
    TannerSpec,
    certify_expanding,
    local_code_search,
    qc_tanner_parity,
    random_regular,
    shift_lift,
    spectrum_lambda,
    tanner_parity,
    theorem1_pipeline,
)
from .f2core import BinMatrix, FieldSpec, GfMatrix
from .formats import format_graph, parse_graph, parse_grid, read_alist, write_alist
from .groupring import AlgMatrix, block_lift, factor_cyclic, format_matrix, parse_entry, parse_matrix
from .poly2 import parse as parse_poly
from .poly2 import to_str as poly_str
from .products import gb, hp, lp, lp_ab, lp_from_field, lp_square

EXIT_OK, EXIT_CHECK_FAILED, EXIT_REFUSED, EXIT_PARSE, EXIT_INVARIANT = 0, 1, 2, 3, 4


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items() if not str(k).startswith("_")}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        if math.isinf(obj):
            return "infinity"
        return float(obj)
    return obj


def _emit(report: dict, out=None) -> None:
    text = json.dumps(_jsonable({"schema": 1, "version": __version__, **report}), indent=2, sort_keys=True)
    print(text, file=out or sys.stdout)


# ---------------------------------------------------------------- operand loading


def _operand_text(value: str, base: Path) -> tuple[str, str | None]:
    """(text, suffix) from a path relative to ``base`` or from inline text."""
    if "\n" not in value and len(value) < 4096:
        p = base / value
        if p.is_file():
            return p.read_text(), p.suffix
    return value, None


def _load_alg(value: str, base: Path) -> AlgMatrix:
    text, suffix = _operand_text(value, base)
    if suffix == ".alist":
        return AlgMatrix.from_binary(read_alist(base / value).to_dense())
    return parse_matrix(text)


def _load_binary(value: str, base: Path) -> BinMatrix:
    text, suffix = _operand_text(value, base)
    if suffix == ".alist":
        return read_alist(base / value)
    if text.lstrip().startswith("group"):
        return block_lift(parse_matrix(text))
    grid = parse_grid(text)
    return BinMatrix.from_dense((grid & 1).astype(np.uint8))


def _load_gf(value: str, base: Path, fld: FieldSpec) -> GfMatrix:
    text, _ = _operand_text(value, base)
    grid = parse_grid(text)
    return GfMatrix(fld, tuple(tuple(fld.reduce(int(v)) for v in row) for row in grid))


def build_from_descriptor(desc: dict, base: Path = Path(".")) -> CssCode:
    """Construct a code from a descriptor {type, a, b, ...}."""
    kind = desc.get("type")
    if kind == "hp":
        return hp(_load_binary(desc["a"], base), _load_binary(desc["b"], base))
    if kind == "gb":
        A, B = _load_alg(desc["a"], base), _load_alg(desc["b"], base)
        return gb(A[0, 0], B[0, 0])
    if kind == "lp":
        return lp(_load_alg(desc["a"], base), _load_alg(desc["b"], base))
    if kind == "lp_square":
        return lp_square(_load_alg(desc["a"], base))
    if kind == "lp_ab":
        A = _load_alg(desc["a"], base)
        return lp_ab(A, parse_entry(str(desc.get("b", "1+x")), A.group))
    if kind == "lp_from_field":
        fld = FieldSpec(parse_poly(desc["modulus"]))
        return lp_from_field(_load_gf(desc["a"], base, fld), _load_gf(desc["b"], base, fld))
    raise ParseError(f"unknown construction type {kind!r}", line=1, column=1, token=str(kind))


def _load_code(path: str) -> CssCode:
    p = Path(path)
    return css_new(read_alist(p / "HX.alist"), read_alist(p / "HZ.alist"), {"source": str(p)})


# ---------------------------------------------------------------- commands


def _params_report(Q: CssCode, args) -> dict:
    params = code_params(
        Q, distance=args.distance, budget=args.budget, seed=args.seed, trials=args.trials, jobs=args.jobs
    )
    rep = params.to_json()
    if args.distance in ("upper", "auto"):
        rep["seed"] = args.seed
    return rep


def cmd_construct(args) -> int:
    path = Path(args.descriptor)
    try:
        desc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    Q = build_from_descriptor(desc, path.parent)
    out = Path(args.out) if args.out else path.with_suffix("")
    out.mkdir(parents=True, exist_ok=True)
    write_alist(out / "HX.alist", Q.HX)
    write_alist(out / "HZ.alist", Q.HZ)
    report = _params_report(Q, args)
    report["output"] = str(out)
    with open(out / "report.json", "w") as fh:
        _emit(report, fh)
    _emit(report)
    return EXIT_OK


def cmd_analyze(args) -> int:
    _emit(_params_report(_load_code(args.code), args))
    return EXIT_OK


def cmd_distance(args) -> int:
    Q = _load_code(args.code)
    sides = ["Z", "X"] if args.side == "both" else [args.side.upper()]
    report: dict = {"method": args.method}
    k = css_dimension(Q)
    for side in sides:
        key = "d" + side.lower()
        if k == 0:
            value, kind = math.inf, "exact"
        elif args.method == "exact":
            method = "auto" if args.infoset else "enumerate"
            value, kind = exact_distance(Q, side, budget=args.budget, jobs=args.jobs, method=method), "exact"
        else:
            value, kind = distance_upper(Q, side, seed=args.seed, trials=args.trials, jobs=args.jobs), "upper-bound"
            report["seed"] = args.seed
            report["trials"] = args.trials
        report[key] = value
        report[key + "_kind"] = kind
    _emit(report)
    return EXIT_OK


def cmd_factor(args) -> int:
    fac = factor_cyclic(args.l)
    _emit({"ell": args.l, "factors": [poly_str(f) for f in fac.factors], "degrees": list(fac.degrees)})
    return EXIT_OK


def cmd_bound(args) -> int:
    W = parse_grid(Path(args.weights).read_text())
    _emit({"weights": W, "bound": qc_distance_bound(W)})
    return EXIT_OK


def cmd_balance(args) -> int:
    Q = _load_code(args.code)
    H_C = _load_binary(args.classical, Path("."))
    B = balance_twice(Q, H_C, args.grade, args.grade) if args.twice else balance_construct(Q, H_C, args.grade)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_alist(out / "HX.alist", B.HX)
        write_alist(out / "HZ.alist", B.HZ)
    _emit(_params_report(B, args))
    return EXIT_OK


def _spectral(G) -> dict:
    rep = spectrum_lambda(G)
    return {"lambda": rep.lam, "eigenvalues": rep.eigenvalues, "n": G.n, "w": G.regular_degree}


def cmd_expander(args) -> int:
    sub = args.expander_cmd
    if sub == "gen":
        G = random_regular(args.n, args.w, args.seed)
        if args.out:
            Path(args.out).write_text(format_graph(G))
        _emit({"seed": args.seed, "graph": args.out, **_spectral(G)})
        return EXIT_OK
    if sub == "lift":
        G, _ = parse_graph(Path(args.graph).read_text())
        lifted, lift = shift_lift(G, args.l, seed=args.seed)
        if args.out:
            Path(args.out).write_text(format_graph(G, lift.shifts))
        _emit({"seed": args.seed, "ell": args.l, "shifts": lift.shifts, "base": _spectral(G), "lift": _spectral(lifted)})
        return EXIT_OK
    if sub == "tanner":
        G, shifts = parse_graph(Path(args.graph).read_text())
        if args.h0:
            H0 = _load_binary(args.h0, Path("."))
        else:
            H0 = local_code_search(G.regular_degree, args.r, args.delta, args.seed)
        report: dict = {"seed": args.seed, "H0": H0.to_dense()}
        if shifts is None:
            H = tanner_parity(TannerSpec(G, H0))
            report["shape"] = list(H.shape)
        else:
            lifted, lift = shift_lift(G, int(args.l), shifts=shifts)
            A = qc_tanner_parity(G, lift, H0)
            H = block_lift(A)
            report["qc_matrix"] = format_matrix(A)
            report["shape"] = list(H.shape)
        if args.out:
            write_alist(args.out, H)
            report["output"] = args.out
        _emit(report)
        return EXIT_OK
    if sub == "certify":
        H = read_alist(args.matrix)
        cert = certify_expanding(H, args.alpha, args.beta, budget=args.budget)
        report = {
            "alpha": cert.alpha,
            "beta": cert.beta,
            "verified_up_to": cert.verified_up_to,
            "min_ratio": cert.min_ratio,
            "holds": cert.holds,
            "counterexample": None if cert.counterexample is None else np.flatnonzero(cert.counterexample),
        }
        _emit(report)
        return EXIT_OK if cert.holds else EXIT_CHECK_FAILED
    if sub == "pipeline":
        rep = theorem1_pipeline(args.l, args.n, args.w, args.r, args.delta, seed=args.seed, upper_trials=args.trials)
        _emit(rep)
        return EXIT_OK
    raise AssertionError(sub)


# ---------------------------------------------------------------- parser


def _add_distance_opts(p: argparse.ArgumentParser, default: str = "none") -> None:
    p.add_argument("--distance", choices=["none", "exact", "upper", "auto"], default=default)
    p.add_argument("--budget", type=int, default=26, help="largest kernel dimension to enumerate")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lpcodes", description="Lifted-product and related quantum LDPC codes.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes for searches")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a code from a JSON descriptor")
    p.add_argument("descriptor")
    p.add_argument("--out", help="output directory (default: descriptor path without suffix)")
    _add_distance_opts(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("analyze", help="parameters of a code directory holding HX.alist and HZ.alist")
    p.add_argument("code")
    _add_distance_opts(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("distance", help="exact or estimated distance")
    p.add_argument("code")
    p.add_argument("--side", choices=["z", "x", "Z", "X", "both"], default="both")
    p.add_argument("--method", choices=["exact", "estimate"], default="exact")
    p.add_argument("--infoset", action="store_true", help="fall back to information-set search past the budget")
    p.add_argument("--budget", type=int, default=26)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("expander", help="graphs, lifts, Tanner codes and expansion checks")
    esub = p.add_subparsers(dest="expander_cmd", required=True)
    e = esub.add_parser("gen")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--w", type=int, required=True)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out")
    e = esub.add_parser("lift")
    e.add_argument("--graph", required=True)
    e.add_argument("--l", type=int, required=True)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out")
    e = esub.add_parser("tanner")
    e.add_argument("--graph", required=True, help="edge list; a third column of shifts makes the code quasi-cyclic")
    e.add_argument("--l", type=int, default=1, help="lift size when the graph file carries shifts")
    e.add_argument("--h0", help="local check matrix (alist, integer grid or polynomial text)")
    e.add_argument("--r", type=int, default=1)
    e.add_argument("--delta", type=float, default=0.25)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out")
    e = esub.add_parser("certify")
    e.add_argument("--matrix", required=True)
    e.add_argument("--alpha", type=float, required=True)
    e.add_argument("--beta", type=float, required=True)
    e.add_argument("--budget", type=int, default=20_000_000)
    e = esub.add_parser("pipeline")
    e.add_argument("--l", type=int, required=True)
    e.add_argument("--n", type=int, required=True, help="base graph vertices")
    e.add_argument("--w", type=int, required=True)
    e.add_argument("--r", type=int, required=True)
    e.add_argument("--delta", type=float, default=0.5)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--trials", type=int, default=200)
    p.set_defaults(func=cmd_expander)

    p = sub.add_parser("bound", help="permanent upper bound from a weight matrix grid")
    p.add_argument("weights")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("factor", help="irreducible factors of x^l - 1")
    p.add_argument("--l", type=int, required=True)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("balance", help="tensor a CSS code with a classical code")
    p.add_argument("code")
    p.add_argument("classical", help="parity-check matrix of the classical code")
    p.add_argument("--grade", type=int, default=1)
    p.add_argument("--twice", action="store_true")
    p.add_argument("--out")
    _add_distance_opts(p)
    p.set_defaults(func=cmd_balance)
    return parser


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, (OrthogonalityError, ChainComplexError)):
        return EXIT_INVARIANT
    return EXIT_REFUSED


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc} (required: {exc.required})", file=sys.stderr)
        return EXIT_REFUSED
    except KeyError as exc:
        print(f"error: descriptor is missing the field {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (LPCodesError, NotImplementedError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
