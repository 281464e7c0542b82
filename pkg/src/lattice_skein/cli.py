"""``lattice-skein`` command line.

Exit codes: 0 ok, 2 invalid input, 3 budget exceeded, 4 verification failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import catalan, coefficients, kernel, oracle, plucking, poset
from .catalan import CatalanState, floor_returns, is_realizable
from .errors import BudgetExceeded, SkeinError, ValidationError
from .laurent import LaurentPoly

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_MISMATCH = 0, 2, 3, 4


def _read_state(text: str) -> CatalanState:
    path = Path(text)
    if path.is_file():
        return catalan.load(path)
    return catalan.from_json(text)


def _state_from_args(args) -> CatalanState:
    if args.state and args.b:
        raise ValidationError("give either --state or --b, not both")
    if args.state:
        return _read_state(args.state)
    if args.b:
        b = poset.parse_bseq(args.b)
        n = args.n if args.n is not None else max(b)
        return poset.state_of(b, n)
    raise ValidationError("a state is required (--state or --b)")


def _workers(args) -> int:
    return args.threads if getattr(args, "threads", None) else oracle.default_workers()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# --- commands ------------------------------------------------------------------


def cmd_expand(args) -> int:
    if args.restricted:
        table = oracle.restricted_expansion(args.m, args.n, budget=args.max_restricted, workers=_workers(args))
    else:
        table = oracle.full_expansion(args.m, args.n, budget=args.max_full_log2, workers=_workers(args))
    if args.filter_state:
        want = _read_state(args.filter_state)
        if (want.m, want.n) != (args.m, args.n):
            raise ValidationError(f"filter state lives in L({want.m},{want.n}), not L({args.m},{args.n})")
        table = {want: table.get(want, LaurentPoly())}
    if args.format == "json":
        rows = [{"state": c.to_json(), "coefficient": str(p)} for c, p in table.items()]
        _emit(json.dumps(rows, indent=2) + "\n", args.out)
    elif args.filter_state:
        _emit(f"{next(iter(table.values()))}\n", args.out)
    else:
        _emit("".join(f"{c.key()}\t{p}\n" for c, p in table.items()), args.out)
    return EXIT_OK


def cmd_coeff(args) -> int:
    c = _state_from_args(args)
    rep = coefficients.property_report(c, args.route)
    if args.format == "json":
        _emit(rep.dumps() + "\n", args.out)
        return EXIT_OK
    lines = [f"state: {c}", f"coefficient: {rep.coefficient}", f"route: {rep.route}"]
    if rep.properties:
        lines += [f"{k}: {str(v).lower()}" for k, v in rep.properties.as_dict().items()]
    lines.append(f"extremes_one: {str(rep.extremes_one()).lower()}")
    if rep.b_min is not None:
        lines += [f"b_min: {poset.format_bseq(rep.b_min)}", f"b_max: {poset.format_bseq(rep.b_max)}"]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _verify_one(c: CatalanState, full: dict, restricted: dict) -> str | None:
    """Return a description of the first disagreement, or None."""
    want = full[c] if full is not None else None
    if not floor_returns(c):
        fib = poset.fiber(c, "peel")
        routes = {
            "tree": coefficients.coefficient_tree(c),
            "fiber": poset.coeff_from_fiber(c, fib),
            "restricted": restricted.get(c),
        }
        if want is not None:
            routes["full"] = want
        vals = set(routes.values())
        if len(vals) != 1:
            return "routes disagree: " + "; ".join(f"{k}={v}" for k, v in routes.items())
        poly = next(iter(vals))
        if poly.evaluate(1) != len(fib):
            return f"C(1)={poly.evaluate(1)} but the fiber has {len(fib)} elements"
        try:
            poset.hasse(c)
            poset.extremal(c, fib)
        except AssertionError as exc:
            return f"poset check failed: {exc}"
    if want is not None and coefficients.cross_sections(c):
        got = coefficients.coefficient_factored(c)
        if got != want:
            return f"factored={got} full={want}"
    rep = coefficients.property_report(c, "auto" if want is None or not floor_returns(c) else "oracle")
    if not rep.ok:
        bad = [k for k, v in rep.claims.items() if not v]
        return f"property claims fail: {', '.join(bad)}"
    return None


def cmd_verify(args) -> int:
    flip = args.inject_fault
    saved = oracle.FLIP_CONVENTION
    oracle.FLIP_CONVENTION = flip
    try:
        total = 0
        for m in range(1, args.max_m + 1):
            for n in range(1, args.max_n + 1):
                if (n + 1) ** m > args.max_restricted:
                    print(f"L({m},{n}): skipped (restricted budget)")
                    continue
                restricted = oracle.restricted_expansion(m, n, budget=args.max_restricted, workers=_workers(args))
                full = None
                if m * n <= args.max_full_log2:
                    full = oracle.full_expansion(m, n, budget=args.max_full_log2, workers=_workers(args))
                states = list(full) if full is not None else list(restricted)
                cat_f = 0
                for c in states:
                    if not is_realizable(c):
                        print(f"unrealizable state in the expansion: {c.dumps()}", file=sys.stderr)
                        return EXIT_MISMATCH
                    problem = _verify_one(c, full, restricted)
                    if problem:
                        print(f"FAIL L({m},{n}) {problem}\nstate: {c.dumps()}", file=sys.stderr)
                        return EXIT_MISMATCH
                    cat_f += not floor_returns(c)
                total += len(states)
                oracle_note = "full+restricted" if full is not None else "restricted only"
                print(f"L({m},{n}): {len(states)} states, {cat_f} without floor returns ({oracle_note})")
        print(f"pass: {total} states checked")
        return EXIT_OK
    finally:
        oracle.FLIP_CONVENTION = saved


def cmd_export(args) -> int:
    c = _state_from_args(args)
    if args.what == "hasse":
        text = poset.hasse(c).to_dot()
    elif args.what == "tree":
        text = plucking.to_dot(plucking.tree_of(c))
    else:
        text = c.dumps() + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    from . import _pykernel

    impls = {"python": _pykernel}
    if kernel.BACKEND == "cython":
        impls["cython"] = kernel._impl
    m, n = args.m, args.n
    total = (n + 1) ** m if args.restricted else 2 ** (m * n)
    budget = args.max_restricted if args.restricted else 2**args.max_full_log2
    if total > budget:
        raise BudgetExceeded(f"benchmark on L({m},{n})", total, budget)
    fn_name = "accumulate_restricted" if args.restricted else "accumulate_full"
    results = {}
    for name, impl in impls.items():
        t0 = time.perf_counter()
        hist = getattr(impl, fn_name)(m, n, 0, total, False)
        results[name] = (time.perf_counter() - t0, hist)
    ref = results["python"][1]
    for name, (secs, hist) in results.items():
        same = "ok" if hist == ref else "MISMATCH"
        print(f"{name:7s} {total:>10d} states  {secs:8.3f} s  {total / secs:12.0f} states/s  {same}")
    return EXIT_OK if all(h == ref for _, h in results.values()) else EXIT_MISMATCH


# --- parser --------------------------------------------------------------------


def _budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-full-log2", type=int, default=oracle.DEFAULT_FULL_BUDGET,
                   help="largest mn for the full 2^(mn) enumeration (default %(default)s)")
    p.add_argument("--max-restricted", type=int, default=oracle.DEFAULT_RESTRICTED_BUDGET,
                   help="largest (n+1)^m for the restricted enumeration (default %(default)s)")
    p.add_argument("--threads", type=int, default=None, help="worker processes (default: $SKEIN_THREADS or 1)")


def _state_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--state", help="state JSON, inline or a file path")
    p.add_argument("--b", help='b-sequence such as "(3,4,4,3)"')
    p.add_argument("--n", type=int, help="columns for --b (default: max entry of b)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lattice-skein", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="coefficient of every Catalan state of L(m,n)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--restricted", action="store_true", help="only the (n+1)^m staircase states")
    p.add_argument("--filter-state", help="print only this state's coefficient")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    _budget_flags(p)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("coeff", help="coefficient and property flags of one state")
    _state_flags(p)
    p.add_argument("--route", choices=coefficients.ROUTES, default="auto")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_coeff)

    p = sub.add_parser("verify", help="cross-check every route on all small lattices")
    p.add_argument("--max-m", type=int, default=3)
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--inject-fault", action="store_true", help="run the oracle with the markers swapped")
    _budget_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="DOT for the fiber poset or the dual tree")
    _state_flags(p)
    p.add_argument("--what", choices=("hasse", "tree", "state"), default="hasse")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("bench", help="time the compiled and pure-Python kernels")
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--restricted", action="store_true")
    _budget_flags(p)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (SkeinError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
