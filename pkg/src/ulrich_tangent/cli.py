"""Command-line driver.

Exit status: 0 when every check passes, 1 when any check fails, 2 on usage
errors (bad flags, unparsable tokens, malformed JSON input).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import ulrichcheck as uc
from . import verify
from .homspace import HomSpace, HomSpaceError, invariants, parse_space, coefficient_margin

ENV_MAX_RANK = "ULRICH_MAX_RANK"


class UsageError(Exception):
    pass


def _default_max_rank() -> int:
    raw = os.environ.get(ENV_MAX_RANK)
    if raw is None:
        return verify.DEFAULT_MAX_RANK
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{ENV_MAX_RANK}={raw!r} is not an integer") from None


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


# -- report ------------------------------------------------------------------


def space_report(space: HomSpace) -> dict:
    inv = invariants(space)
    n, k = inv.dimension, inv.picard_rank
    out = {"space": str(space), **inv.to_json()}
    obstructions = []
    exception = max(inv.j) >= n if inv.j else False
    obstructions.append(
        f"anticanonical bound: max j >= n (exception: {inv.model})"
        if exception
        else "anticanonical bound: max j < n"
    )
    if n == 1:
        obstructions.append("curve: T Ulrich only for (P1, O(3))")
    elif n == 2:
        obstructions.append("surface: T Ulrich only for (P2, O(2))")
    if k >= 2:
        if inv.model.kind == "P1xPl":
            l = inv.model.param
            if l >= 2:
                obstructions.append(
                    f"P1 x Pl: displayed residual at a=b=1 is {uc.fmt(uc.p1_times_pl_residual(l, 1, 1))} > 0"
                )
        else:
            margin = coefficient_margin(n, inv.j)
            out["coefficient_margin"] = uc.fmt(margin)
            obstructions.append(f"Picard >= 2 coefficient: margin {uc.fmt(margin)} >= 2/{n + 2}")
    elif k == 1 and n >= 3:
        reasons = verify.picard_one_contradictions(n, inv.aut_dim, inv.model)
        out["degree_divisor"] = uc.degree_divisor(n)
        out["contradictions"] = reasons
        label = "Picard one arithmetic" if n >= 4 else "threefold degree bound"
        obstructions.append(f"{label}: " + "; ".join(reasons))
    out["obstructions"] = obstructions
    return out


def cmd_report(args) -> int:
    node_lists = args.nodes or []
    try:
        space = parse_space(args.type, node_lists)
    except HomSpaceError as exc:
        raise UsageError(str(exc)) from None
    if any(not f.nodes for f in space.factors):
        raise UsageError("every factor needs at least one marked node")
    rep = space_report(space)
    if args.json:
        _emit(rep)
        return 0
    width = max(len(k) for k in rep)
    for key, val in rep.items():
        if isinstance(val, list) and key in ("obstructions", "contradictions"):
            print(f"{key:<{width}}  ")
            for item in val:
                print(f"{'':<{width}}    - {item}")
        else:
            shown = "(" + ",".join(map(str, val)) + ")" if isinstance(val, list) else val
            print(f"{key:<{width}}  {shown}")
    return 0


# -- verification ------------------------------------------------------------


def _print_report(report: verify.VerificationReport, as_json: bool, full: bool) -> int:
    if as_json:
        sys.stdout.write(report.dumps())
    else:
        sys.stdout.write(verify.render_text(report, full=full))
    return 0 if report.passed else 1


def cmd_verify_all(args) -> int:
    max_rank = args.max_rank if args.max_rank is not None else _default_max_rank()
    try:
        verify._check_bounds(max_rank, args.max_components)
    except verify.VerifyError as exc:
        raise UsageError(str(exc)) from None
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    report = verify.run_all(max_rank, args.max_components, jobs=args.jobs)
    return _print_report(report, args.json, args.full)


def cmd_table1(args) -> int:
    max_rank = args.max_rank if args.max_rank is not None else _default_max_rank()
    try:
        report = verify.verify_table1(max_rank)
    except verify.VerifyError as exc:
        raise UsageError(str(exc)) from None
    return _print_report(report, args.json, True)


# -- Chern data --------------------------------------------------------------


def _load(path: str, cls):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from None
    try:
        return cls.from_json(obj)
    except uc.ChernDataError as exc:
        raise UsageError(str(exc)) from None


def _print_check(result: uc.CheckResult, data, as_json: bool) -> int:
    if as_json:
        _emit({"input": data.to_json(), **result.to_json()})
    else:
        rows = list(result.residuals) + list(result.aux)
        width = max(len(name) for name, _ in rows)
        for name, val in result.residuals:
            print(f"residual {name:<{width}}  {uc.fmt(val)}")
        for name, val in result.aux:
            print(f"value    {name:<{width}}  {uc.fmt(val)}")
        for w in result.warnings:
            print(f"warning: {w}")
        print("PASS" if result.passed else "FAIL")
    return 0 if result.passed else 1


def cmd_chern_surface(args) -> int:
    data = _load(args.input, uc.SurfaceChernData)
    return _print_check(uc.surface_identities(data), data, args.json)


def cmd_chern_threefold(args) -> int:
    data = _load(args.input, uc.ThreefoldChernData)
    result = uc.threefold_identities(data)
    if not args.json:
        print(f"c2.H = {data.c2H}")
    return _print_check(result, data, args.json)


def cmd_curve(args) -> int:
    if args.genus < 0 or args.degree < 1:
        raise UsageError("need --genus >= 0 and --degree >= 1")
    t = uc.curve_tangent_ulrich(args.genus, args.degree)
    c = uc.curve_cotangent_ulrich(args.genus, args.degree)
    out = {
        "genus": args.genus,
        "degree": args.degree,
        "tangent_ulrich": t.ulrich,
        "tangent_certificate": t.reason,
        "cotangent_ulrich": c.ulrich,
        "cotangent_certificate": c.reason,
    }
    if args.json:
        _emit(out)
    else:
        for k, v in out.items():
            print(f"{k:<21}  {v}")
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ulrich-verify",
        description="Exact checks for projective manifolds with Ulrich (co)tangent bundle.",
        epilog=f"Environment: {ENV_MAX_RANK} overrides the default --max-rank "
        f"({verify.DEFAULT_MAX_RANK}).",
    )
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("report", help="invariants and obstructions for one G/P")
    r.add_argument("type", help='Lie type token, products joined by "x", e.g. A4 or A1xA3')
    r.add_argument(
        "--nodes", type=int, nargs="+", action="append", metavar="N",
        help="marked nodes; repeat once per factor, in factor order",
    )
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_report)

    v = sub.add_parser("verify-all", help="run every driver and aggregate")
    v.add_argument("--max-rank", type=int, default=None)
    v.add_argument("--max-components", type=int, default=verify.DEFAULT_MAX_COMPONENTS)
    v.add_argument("--jobs", type=int, default=1, help="worker processes (output is identical)")
    v.add_argument("--json", action="store_true")
    v.add_argument("--full", action="store_true", help="list every record in text mode")
    v.set_defaults(func=cmd_verify_all)

    t = sub.add_parser("table1", help="root-engine dimensions against the Picard-one dimension table")
    t.add_argument("--max-rank", type=int, default=None)
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_table1)

    for kind, fn in (("surface", cmd_chern_surface), ("threefold", cmd_chern_threefold)):
        c = sub.add_parser(f"chern-{kind}", help=f"Ulrich identities for {kind} Chern data (JSON)")
        c.add_argument("input", help="path to a JSON object of integer intersection numbers")
        c.add_argument("--json", action="store_true")
        c.set_defaults(func=fn)

    cv = sub.add_parser("curve", help="(co)tangent bundle of a curve of genus g and degree d")
    cv.add_argument("--genus", type=int, required=True)
    cv.add_argument("--degree", type=int, required=True)
    cv.add_argument("--json", action="store_true")
    cv.set_defaults(func=cmd_curve)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
