"""Exhaustive drivers that check every finite claim up to a bound.

Each driver returns a :class:`VerificationReport` whose records are sorted
deterministically, so serial and parallel runs serialise to the same bytes.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Any, Callable, Iterator, Optional, Sequence

from . import ulrichcheck as uc
from .homspace import (
    GENERATOR_DEGREE,
    Factor,
    HomSpace,
    Model,
    invariants,
    table1_dimension,
    coefficient_margin,
)
from .rootsys import SimpleType, closed_form_lie_dim, lie_algebra_dim, simple_types

MAX_RANK_CAP = 16
MAX_COMPONENTS_CAP = 3
DEFAULT_MAX_RANK = 8
DEFAULT_MAX_COMPONENTS = 3
# factors of multi-factor products are limited to this rank
DEFAULT_PRODUCT_MAX_RANK = 4
DEFAULT_ORACLE_DIM_CAP = 12

EXCEPTIONAL_TYPES = tuple(SimpleType(f, r) for f, r in (("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)))

PREAMBLE = (
    "Universe starts at rational homogeneous G/P: the reduction X = A x G/P and the "
    "exclusion of the abelian factor are analytic and not re-checked here.",
    "Positivity of the monomials L_1^l1 ... L_k^lk on G/P is taken as a hypothesis, never computed.",
)


class VerifyError(ValueError):
    pass


@dataclass
class Record:
    subject: str
    invariants: dict
    expected: Any
    actual: Any
    passed: bool
    key: tuple = field(default=(), repr=False)

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "invariants": self.invariants,
            "expected": self.expected,
            "actual": self.actual,
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    claim: str
    universe: str
    records: list[Record]
    notes: tuple[str, ...] = ()
    subreports: list["VerificationReport"] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.records = sorted(self.records, key=lambda r: r.key)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records) and all(s.passed for s in self.subreports)

    @property
    def summary(self) -> dict:
        failed = sum(not r.passed for r in self.records)
        out = {
            "total": len(self.records),
            "passed": len(self.records) - failed,
            "failed": failed,
            "pass": self.passed,
        }
        out.update(self.extra)
        return out

    def failures(self) -> list[Record]:
        return [r for r in self.records if not r.passed]

    def to_json(self) -> dict:
        doc: dict = {
            "claim": self.claim,
            "universe": self.universe,
            "notes": list(self.notes),
            "records": [r.to_json() for r in self.records],
            "summary": self.summary,
        }
        if self.subreports:
            doc["subreports"] = [s.to_json() for s in self.subreports]
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":")) + "\n"


def _check_bounds(max_rank: int, max_components: int = 1) -> None:
    if not 1 <= max_rank <= MAX_RANK_CAP:
        raise VerifyError(f"max_rank must be in 1..{MAX_RANK_CAP}, got {max_rank}")
    if not 1 <= max_components <= MAX_COMPONENTS_CAP:
        raise VerifyError(f"max_components must be in 1..{MAX_COMPONENTS_CAP}, got {max_components}")


# -- universes ---------------------------------------------------------------


def _markings(rank: int) -> list[tuple[int, ...]]:
    nodes = range(1, rank + 1)
    out = [c for k in range(1, rank + 1) for c in itertools.combinations(nodes, k)]
    return sorted(out)


def _factors(max_rank: int) -> list[Factor]:
    return [Factor(t, m) for t in simple_types(max_rank) for m in _markings(t.rank)]


def enumerate_spaces(
    max_rank: int,
    max_components: int,
    product_max_rank: int = DEFAULT_PRODUCT_MAX_RANK,
) -> list[HomSpace]:
    """Marked simple types up to ``max_rank`` plus unordered products of marked factors.

    Factors inside products have rank at most ``min(max_rank, product_max_rank)``.
    """
    _check_bounds(max_rank, max_components)
    spaces = [HomSpace((f,)) for f in _factors(max_rank)]
    small = _factors(min(max_rank, product_max_rank))
    for c in range(2, max_components + 1):
        spaces.extend(HomSpace(combo) for combo in itertools.combinations_with_replacement(small, c))
    return sorted(spaces, key=lambda s: s.sort_key)


def picard_one_spaces(max_rank: int) -> list[HomSpace]:
    """Single-node markings of every type up to ``max_rank`` and of all exceptional types."""
    _check_bounds(max_rank)
    types = sorted(set(simple_types(max_rank)) | set(EXCEPTIONAL_TYPES), key=lambda t: t.sort_key)
    return [HomSpace((Factor(t, (r,)),)) for t in types for r in range(1, t.rank + 1)]


def _universe(max_rank: int, max_components: int, product_max_rank: int) -> str:
    return (
        f"simple types of rank <= {max_rank} with every nonempty marking; unordered products "
        f"of <= {max_components} marked factors of rank <= {min(max_rank, product_max_rank)}"
    )


def _picard_one_universe(max_rank: int) -> str:
    return f"single-node markings of simple types of rank <= {max_rank}, plus E6, E7, E8, F4, G2"


# -- Picard-one dimension table and automorphism bound ----------------------


def verify_table1(max_rank: int = DEFAULT_MAX_RANK) -> VerificationReport:
    records = []
    for s in picard_one_spaces(max_rank):
        f = s.factors[0]
        inv = invariants(s)
        n_table = table1_dimension(f.type, f.nodes[0])
        g_engine, g_table = lie_algebra_dim(f.type), closed_form_lie_dim(f.type)
        records.append(
            Record(
                str(s),
                {"dim_g": g_engine, "dim_g_table": g_table},
                n_table,
                inv.dimension,
                inv.dimension == n_table and g_engine == g_table,
                s.sort_key,
            )
        )
    return VerificationReport("table1", _picard_one_universe(max_rank), records)


AUT_MODELS = ("ProjSpace", "Quadric", "Gr25")


def verify_aut_lemma(max_rank: int = DEFAULT_MAX_RANK) -> VerificationReport:
    records = []
    for s in picard_one_spaces(max_rank):
        inv = invariants(s)
        n = inv.dimension
        threshold = Fraction(n * (n + 2), 2)
        holds = inv.aut_dim >= threshold
        recognised = inv.model.kind in AUT_MODELS
        records.append(
            Record(
                str(s),
                {"n": n, "aut_dim": inv.aut_dim, "threshold": uc.fmt(threshold), "model": str(inv.model)},
                recognised,
                holds,
                holds == recognised,
                s.sort_key,
            )
        )
    return VerificationReport(
        "aut_lemma",
        _picard_one_universe(max_rank),
        records,
        notes=("expected: model in {ProjSpace, Quadric, Gr25}; actual: aut_dim >= n(n+2)/2",),
    )


# -- anticanonical bound and Picard >= 2 coefficients -----------------------

J_EXCEPTIONS = ("ProjSpace", "Quadric", "P1xPl")


def verify_j_bound(
    max_rank: int = DEFAULT_MAX_RANK,
    max_components: int = DEFAULT_MAX_COMPONENTS,
    product_max_rank: int = DEFAULT_PRODUCT_MAX_RANK,
) -> VerificationReport:
    records = []
    exceptions = 0
    for s in enumerate_spaces(max_rank, max_components, product_max_rank):
        inv = invariants(s)
        exception = max(inv.j) >= inv.dimension
        exceptions += exception
        records.append(
            Record(
                str(s),
                {"n": inv.dimension, "j": list(inv.j), "model": str(inv.model)},
                inv.model.kind in J_EXCEPTIONS,
                exception,
                exception == (inv.model.kind in J_EXCEPTIONS),
                s.sort_key,
            )
        )
    return VerificationReport(
        "j_bound",
        _universe(max_rank, max_components, product_max_rank),
        records,
        notes=("expected: model in {ProjSpace, Quadric, P1xPl}; actual: max_i j_i >= n",),
        extra={"exceptions": exceptions},
    )


def weak_compositions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """All (l_1..l_k) with l_i >= 0 summing to n."""
    if k == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in weak_compositions(n - first, k - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def composition_oracle(n: int, j: tuple[int, ...]) -> tuple[Fraction, int]:
    """Minimum over all compositions of n(n+1)/(n+2) - sum_i l_i j_i / n, and how many were checked."""
    worst = None
    count = 0
    for lam in weak_compositions(n, len(j)):
        total = sum(l * x for l, x in zip(lam, j))
        count += 1
        if worst is None or total > worst:
            worst = total
    return Fraction(n * (n + 1), n + 2) - Fraction(worst, n), count


def coefficient_monotone_in_a() -> bool:
    """The Picard >= 2 coefficient is non-decreasing in each a_i (checked symbolically)."""
    import sympy as sp

    n, lam, j, a = sp.symbols("n lambda_i j_i a_i", positive=True)
    coeff = n * (n + 1) / (n + 2) - lam * j / (n * a)
    return bool(sp.simplify(sp.diff(coeff, a)).is_nonnegative)


def verify_picard_ge2(
    max_rank: int = DEFAULT_MAX_RANK,
    max_components: int = DEFAULT_MAX_COMPONENTS,
    oracle_dim_cap: int = DEFAULT_ORACLE_DIM_CAP,
    product_max_rank: int = DEFAULT_PRODUCT_MAX_RANK,
) -> VerificationReport:
    records = []
    oracle_runs = 0
    delegated = 0
    for s in enumerate_spaces(max_rank, max_components, product_max_rank):
        if s.picard_rank < 2:
            continue
        inv = invariants(s)
        if inv.model.kind == "P1xPl":
            delegated += 1
            continue
        n = inv.dimension
        margin = coefficient_margin(n, inv.j)
        # margin >= 2/(n+2)  <=>  n(n+1) - (n+2) max j >= 2
        ok = n * (n + 1) - (n + 2) * max(inv.j) >= 2
        data = {"n": n, "j": list(inv.j), "margin": uc.fmt(margin)}
        if n <= oracle_dim_cap:
            oracle_min, count = composition_oracle(n, tuple(sorted(inv.j)))
            oracle_runs += 1
            data["oracle_min"] = uc.fmt(oracle_min)
            data["compositions"] = count
            ok = ok and oracle_min == margin
        records.append(Record(str(s), data, f">= 2/{n + 2}", uc.fmt(margin), ok, (0, s.sort_key)))
    monotone = coefficient_monotone_in_a()
    records.append(Record("d/da_i coefficient >= 0", {}, True, monotone, monotone, (1,)))
    return VerificationReport(
        "picard_ge2",
        _universe(max_rank, max_components, product_max_rank) + "; Picard rank >= 2, P1 x Pl delegated",
        records,
        notes=PREAMBLE[1:] + (f"composition oracle for n <= {oracle_dim_cap}",),
        extra={"oracle_runs": oracle_runs, "delegated_P1xPl": delegated},
    )


def verify_p1_times_pl(l_max: int = 20, ab_max: int = 20) -> VerificationReport:
    """Non-Ulrichness of T on P^1 x P^l, l >= 2, for H = O(a, b) on a grid."""
    records = []
    for l in range(2, l_max + 1):
        for a in range(1, ab_max + 1):
            for b in range(1, ab_max + 1):
                shown = uc.p1_times_pl_residual(l, a, b)
                true = uc.p1_times_pl_intersection(l, a, b)
                records.append(
                    Record(
                        f"P1xP{l} O({a},{b})",
                        {"displayed": uc.fmt(shown), "intersection": uc.fmt(true)},
                        "displayed > 0 and intersection != 0",
                        uc.fmt(shown),
                        shown > 0 and true != 0,
                        (l, a, b),
                    )
                )
    anchor = uc.p1_times_pl_residual(2, 1, 1)
    records.append(Record("P1xP2 O(1,1) value", {}, "11/5", uc.fmt(anchor), anchor == Fraction(11, 5), (0,)))
    return VerificationReport(
        "p1_times_pl", f"2 <= l <= {l_max}, 1 <= a, b <= {ab_max}", records
    )


# -- Picard number one -------------------------------------------------------


def picard_one_contradictions(n: int, aut: int, model: Model) -> list[str]:
    """Every arithmetic obstruction to T_X Ulrich on a Picard-one G/P of dimension n."""
    ell = uc.degree_divisor(n)
    out = []
    if aut % (n * ell):
        out.append(f"h0(T) = {aut} is not n*d with {ell} | d (n*l = {n * ell})")
    if 2 * aut < n * (n + 2):
        out.append(f"h0(T) = {aut} < n(n+2)/2 = {uc.fmt(Fraction(n * (n + 2), 2))}")
    if n % 2 and aut < n * n + 2 * n:
        out.append(f"n odd needs h0(T) >= n^2+2n = {n * n + 2 * n}, got {aut}")
    if model.kind == "ProjSpace" and uc.pn_tangent_equation(n) is None:
        out.append(f"d^{n} = {n + 2} has no integer solution")
    if model.kind == "Quadric" and n % 2 == 0:
        m = n // 2
        if ((2 * m + 1) * (m + 1)) % (2 * m * (m + 1)):
            out.append(f"{2 * m * (m + 1)}k = {(2 * m + 1) * (m + 1)} has no integer solution")
    gen = GENERATOR_DEGREE.get(model)
    if gen and aut % n == 0 and (aut // n) % gen:
        out.append(f"{n}d = {aut} gives d = {aut // n}, not a multiple of {gen}")
    return out


def verify_picard_one(
    max_rank: int = DEFAULT_MAX_RANK, min_dim: int = 4, max_dim: Optional[int] = None
) -> VerificationReport:
    records = []
    for s in picard_one_spaces(max_rank):
        inv = invariants(s)
        n = inv.dimension
        if n < min_dim or (max_dim is not None and n > max_dim):
            continue
        reasons = picard_one_contradictions(n, inv.aut_dim, inv.model)
        records.append(
            Record(
                str(s),
                {
                    "n": n,
                    "aut_dim": inv.aut_dim,
                    "l": uc.degree_divisor(n),
                    "model": str(inv.model),
                    "contradictions": reasons,
                },
                "excluded",
                "excluded" if reasons else "not excluded",
                bool(reasons),
                s.sort_key,
            )
        )
    span = f"{min_dim} <= n" + (f" <= {max_dim}" if max_dim is not None else "")
    claim = "picard_one" if min_dim >= 4 else "picard_one_threefolds"
    return VerificationReport(claim, _picard_one_universe(max_rank) + f"; {span}", records)


# -- low dimensions ----------------------------------------------------------


def verify_curves(g_max: int = 10, d_max: int = 30) -> VerificationReport:
    records = []
    for g in range(g_max + 1):
        for d in range(1, d_max + 1):
            t = uc.curve_tangent_ulrich(g, d)
            c = uc.curve_cotangent_ulrich(g, d)
            expected = (g, d) == (0, 3)
            records.append(
                Record(
                    f"g={g} d={d}",
                    {"tangent": t.reason, "cotangent": c.reason},
                    expected,
                    t.ulrich,
                    t.ulrich == expected and not c.ulrich,
                    (g, d),
                )
            )
    return VerificationReport("curves", f"0 <= g <= {g_max}, 1 <= d <= {d_max}", records)


def verify_pn_equation(n_max: int = 64) -> VerificationReport:
    known = {1: 3, 2: 2}
    records = []
    for n in range(1, n_max + 1):
        d = uc.pn_tangent_equation(n)
        records.append(Record(f"n={n}", {}, known.get(n), d, d == known.get(n), (n,)))
    return VerificationReport("pn_equation", f"1 <= n <= {n_max}", records)


def verify_surfaces() -> VerificationReport:
    records = []
    chain = uc.surface_classification_constraints()
    for i, step in enumerate(chain.steps):
        records.append(Record(step.name, {}, True, step.value, step.holds, (0, i)))
    outputs = {"Hsq": 4, "KH": -6, "Ksq": 9, "chiO": 1, "q": 0, "genus_adjoint": 1}
    for i, (name, want) in enumerate(outputs.items()):
        got = getattr(chain, name)
        records.append(Record(f"chain output {name}", {}, want, got, got == want, (1, i)))
    # T_{P^2}(-jH) = Omega^1(3 - 2j) with H = O(2)
    for j in (1, 2):
        h = uc.bott_dims(2, 1, 3 - 2 * j)
        records.append(
            Record(f"h^q(P2, Omega1({3 - 2 * j}))", {}, [0, 0, 0], list(h), h == (0, 0, 0), (2, j))
        )
    # Omega^1: the first identity reads K.H = K.H + 3H^2
    for hsq in range(1, 21):
        res = Fraction(-3 * hsq)
        data = uc.SurfaceChernData(r=2, c1H=-hsq, c1sq=0, c1K=0, c2=0, KH=-hsq, Hsq=hsq, chiO=1)
        got = uc.surface_identities(data).residual("c1.H")
        records.append(
            Record(f"cotangent H^2={hsq}", {}, uc.fmt(res), uc.fmt(got), got == res != 0, (3, hsq))
        )
    return VerificationReport(
        "surfaces", "numerical chain, Veronese Bott vanishing, cotangent first identity", records,
        extra={"Hsq": chain.Hsq, "Ksq": chain.Ksq},
    )


def verify_index2_fano(c2_span: int = 10, c3_span: int = 5) -> VerificationReport:
    """Index-2 Fano threefolds of degree 3..7: the identities hold iff c2.H = d + 2, c3 = 0."""
    records = []
    for d in range(3, 8):
        hits = [
            (c2, c3)
            for c2 in range(0, 3 * d + c2_span + 1)
            for c3 in range(-c3_span, c3_span + 1)
            if uc.threefold_identities(uc.index2_fano_data(d, c2, c3)).passed
        ]
        records.append(Record(f"d={d}", {"c2H": d + 2}, [[d + 2, 0]], [list(h) for h in hits], hits == [(d + 2, 0)], (d,)))
    return VerificationReport("index2_fano_threefolds", "d in 3..7, scanned c2.H and c3", records)


# -- everything --------------------------------------------------------------


def _survivors(curves: VerificationReport, surfaces: VerificationReport, higher: Sequence[VerificationReport]) -> list[str]:
    out = []
    for r in curves.records:
        if r.actual is True:
            g, d = (int(part.split("=")[1]) for part in r.subject.split())
            out.append(f"(P1,O({d}))" if g == 0 else f"(genus {g},deg {d})")
    if all(r.passed for r in surfaces.records) and surfaces.extra.get("Ksq") == 9:
        t = isqrt(surfaces.extra["Hsq"])
        out.append(f"(P2,O({t}))")
    for rep in higher:
        out.extend(f"unexcluded {r.subject}" for r in rep.failures())
    return sorted(out)


EXPECTED_SURVIVORS = ["(P1,O(3))", "(P2,O(2))"]


def _tasks(max_rank: int, max_components: int) -> list[tuple[Callable, tuple]]:
    return [
        (verify_table1, (max_rank,)),
        (verify_aut_lemma, (max_rank,)),
        (verify_j_bound, (max_rank, max_components)),
        (verify_picard_ge2, (max_rank, max_components)),
        (verify_p1_times_pl, ()),
        (verify_picard_one, (max_rank,)),
        (verify_picard_one, (max_rank, 3, 3)),
        (verify_curves, ()),
        (verify_pn_equation, ()),
        (verify_surfaces, ()),
        (verify_index2_fano, ()),
    ]


def _call(task):
    fn, args = task
    return fn(*args)


def run_all(
    max_rank: int = DEFAULT_MAX_RANK, max_components: int = DEFAULT_MAX_COMPONENTS, jobs: int = 1
) -> VerificationReport:
    _check_bounds(max_rank, max_components)
    tasks = _tasks(max_rank, max_components)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            subs = list(pool.map(_call, tasks))
    else:
        subs = [_call(t) for t in tasks]
    by_claim = {s.claim: s for s in subs}
    survivors = _survivors(
        by_claim["curves"],
        by_claim["surfaces"],
        [by_claim[c] for c in ("picard_one", "picard_one_threefolds", "picard_ge2", "p1_times_pl")],
    )
    records = [
        Record(s.claim, s.summary, True, s.passed, s.passed, (i,)) for i, s in enumerate(subs)
    ]
    records.append(
        Record("survivors", {}, EXPECTED_SURVIVORS, survivors, survivors == EXPECTED_SURVIVORS, (len(subs),))
    )
    return VerificationReport(
        "classification",
        f"max_rank={max_rank}, max_components={max_components}",
        records,
        notes=PREAMBLE,
        subreports=subs,
        extra={"survivors": survivors},
    )


# -- text rendering ----------------------------------------------------------


def _cell(v: Any) -> str:
    if isinstance(v, (list, tuple)):
        return "(" + ",".join(_cell(x) for x in v) + ")"
    if v is None:
        return "-"
    return str(v)


def render_text(report: VerificationReport, full: bool = False) -> str:
    lines = [f"claim: {report.claim}", f"universe: {report.universe}"]
    lines += [f"note: {n}" for n in report.notes]
    s = report.summary
    lines.append(
        "summary: " + ", ".join(f"{k}={_cell(v)}" for k, v in s.items())
    )
    rows = report.records if full else report.failures()
    if rows:
        w1 = max(len(r.subject) for r in rows)
        w2 = max(len(_cell(r.expected)) for r in rows)
        w3 = max(len(_cell(r.actual)) for r in rows)
        for r in rows:
            lines.append(
                f"  {r.subject:<{w1}}  expected {_cell(r.expected):<{w2}}  actual {_cell(r.actual):<{w3}}  "
                f"{'PASS' if r.passed else 'FAIL'}"
            )
    out = "\n".join(lines) + "\n"
    for sub in report.subreports:
        out += "\n" + render_text(sub, full=full)
    return out
