"""Invariants of rational homogeneous spaces G/P(Sigma).

A space is a tuple of simple factors, each carrying its own marking.  All
invariants are computed per factor from the root engine and combined
additively, so products never need their own root system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

from .rootsys import (
    Root,
    RootSystemError,
    SimpleType,
    lie_algebra_dim,
    parse_type,
    root_datum,
)


class HomSpaceError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Factor:
    """One simple factor G_i/P_i; ``nodes`` is the sorted marking."""

    type: SimpleType
    nodes: tuple[int, ...]

    def __post_init__(self) -> None:
        nodes = tuple(sorted(set(self.nodes)))
        for i in nodes:
            if not 1 <= i <= self.type.rank:
                raise HomSpaceError(f"node {i} out of range for {self.type}")
        object.__setattr__(self, "nodes", nodes)

    def __str__(self) -> str:
        return self.label

    @cached_property
    def label(self) -> str:
        return f"{self.type}[{','.join(map(str, self.nodes))}]"

    @cached_property
    def sort_key(self) -> tuple:
        return (self.type.sort_key, self.nodes)


@dataclass(frozen=True)
class HomSpace:
    factors: tuple[Factor, ...]

    @classmethod
    def of(cls, *factors: Factor) -> "HomSpace":
        """Build a space with factors in canonical (sorted) order."""
        return cls(tuple(sorted(factors, key=lambda f: f.sort_key)))

    @classmethod
    def simple(cls, family: str, rank: int, nodes: Iterable[int]) -> "HomSpace":
        return cls((Factor(SimpleType(family, rank), tuple(nodes)),))

    def __str__(self) -> str:
        return "x".join(f.label for f in self.factors)

    @cached_property
    def sort_key(self) -> tuple:
        return tuple(f.sort_key for f in self.factors)

    @property
    def picard_rank(self) -> int:
        return sum(len(f.nodes) for f in self.factors)


def parse_space(type_token: str, node_lists: Sequence[Sequence[int]]) -> HomSpace:
    """Parse ``"A1xA3"`` with per-factor node lists, in factor order."""
    tokens = [t for t in type_token.replace("X", "x").split("x")]
    if any(not t for t in tokens):
        raise HomSpaceError(f"cannot parse space token {type_token!r}")
    types = []
    for t in tokens:
        try:
            types.append(parse_type(t))
        except RootSystemError as exc:
            raise HomSpaceError(str(exc)) from None
    if len(node_lists) != len(types):
        raise HomSpaceError(
            f"{type_token!r} has {len(types)} factor(s) but {len(node_lists)} node list(s) given"
        )
    return HomSpace(tuple(Factor(t, tuple(ns)) for t, ns in zip(types, node_lists)))


# -- per-factor root combinatorics ------------------------------------------


def phi_plus_sigma(t: SimpleType, nodes: Iterable[int]) -> tuple[Root, ...]:
    """Positive roots with zero coefficient at every marked node (roots of the Levi)."""
    marked = [i - 1 for i in nodes]
    return tuple(
        a for a in root_datum(t).positive_roots if all(a[i] == 0 for i in marked)
    )


@lru_cache(maxsize=None)
def _factor_invariants(f: Factor) -> tuple[int, tuple[int, ...]]:
    datum = root_datum(f.type)
    marked = [i - 1 for i in f.nodes]
    c_sigma = [0] * f.type.rank
    n = 0
    for a in datum.positive_roots:
        if any(a[i] for i in marked):
            n += 1
            for k, c in enumerate(a):
                c_sigma[k] += c
    j = tuple(datum.pairing(c_sigma, i) for i in f.nodes)
    if any(x <= 0 for x in j):
        raise RuntimeError(f"non-positive anticanonical coefficient {j} on {f}")
    return n, j


def dimension(space: HomSpace) -> int:
    return sum(_factor_invariants(f)[0] for f in space.factors)


def anticanonical_coefficients(space: HomSpace) -> tuple[int, ...]:
    """j_i = <c_Sigma, alpha_i^vee> for each marked node, in factor/node order."""
    return tuple(x for f in space.factors for x in _factor_invariants(f)[1])


def table1_dimension(t: SimpleType, node: int) -> int:
    """Dimension of G/P_r from the classical closed forms and exceptional value grids.

    The type D formula is only valid away from node l-1; that node is the
    mirror image of node l under the diagram automorphism.
    """
    l, r = t.rank, node
    if not 1 <= r <= l:
        raise HomSpaceError(f"node {r} out of range for {t}")
    if t.family == "A":
        return r * (l + 1 - r)
    if t.family in "BC":
        return r * (4 * l + 1 - 3 * r) // 2
    if t.family == "D":
        if r == l - 1:
            r = l
        return r * (4 * l - 1 - 3 * r) // 2
    return _TABLE1_GRID[(t.family, l)][r - 1]


_TABLE1_GRID = {
    ("E", 6): (16, 21, 25, 29, 25, 16),
    ("E", 7): (33, 42, 47, 53, 50, 42, 27),
    ("E", 8): (78, 92, 98, 106, 104, 97, 83, 57),
    ("F", 4): (15, 20, 20, 15),
    ("G", 2): (5, 5),
}


# -- automorphisms and recognised models -------------------------------------


def _exceptional_target(t: SimpleType, node: int) -> Optional[SimpleType]:
    """Group of the larger automorphism group for Demazure's exceptional pairs."""
    if t.family == "C" and node == 1:
        return SimpleType("A", 2 * t.rank - 1)
    if t.family == "B" and node == t.rank:
        # D_3 = A_3
        return SimpleType("A", 3) if t.rank == 2 else SimpleType("D", t.rank + 1)
    if t.family == "G" and node == 1:
        return SimpleType("B", 3)
    return None


def aut_dim(space: HomSpace) -> int:
    """dim H^0(X, T_X) = dim Aut(X) for a Picard-rank-one space."""
    if len(space.factors) != 1 or space.picard_rank != 1:
        raise HomSpaceError(f"aut_dim needs Picard rank one on a simple group, got {space}")
    f = space.factors[0]
    target = _exceptional_target(f.type, f.nodes[0])
    return lie_algebra_dim(target or f.type)


@dataclass(frozen=True)
class Model:
    kind: str  # ProjSpace | Quadric | Gr25 | P1xPl | Other
    param: Optional[int] = None

    def __str__(self) -> str:
        return self.kind if self.param is None else f"{self.kind}({self.param})"


OTHER = Model("Other")


@lru_cache(maxsize=None)
def _factor_model(f: Factor) -> Model:
    if len(f.nodes) != 1:
        return OTHER
    fam, l, r = f.type.family, f.type.rank, f.nodes[0]
    if fam == "A" and r in (1, l):
        return Model("ProjSpace", l)
    if fam == "C" and r == 1:
        return Model("ProjSpace", 2 * l - 1)
    if (fam, l, r) == ("B", 2, 2):
        return Model("ProjSpace", 3)
    if fam == "B" and r == 1:
        return Model("Quadric", 2 * l - 1)
    if fam == "D" and r == 1:
        return Model("Quadric", 2 * l - 2)
    if (fam, l, r) == ("A", 3, 2):
        return Model("Quadric", 4)
    if (fam, l) == ("D", 4) and r in (3, 4):
        return Model("Quadric", 6)
    if (fam, l, r) == ("B", 3, 3):
        return Model("Quadric", 6)
    if (fam, l, r) == ("G", 2, 1):
        return Model("Quadric", 5)
    if (fam, l) == ("A", 4) and r in (2, 3):
        return Model("Gr25")
    return OTHER


def identify_model(space: HomSpace) -> Model:
    """Recognise P^n, Q^n, Gr(2,5) and P^1 x P^l from a curated isomorphism table."""
    fs = space.factors
    if len(fs) == 1:
        return _factor_model(fs[0])
    if len(fs) == 2:
        models = [_factor_model(f) for f in fs]
        p1 = Model("ProjSpace", 1)
        for a, b in ((0, 1), (1, 0)):
            if models[a] == p1 and models[b].kind == "ProjSpace":
                return Model("P1xPl", models[b].param)
    return OTHER


# Degree of the ample generator, for the few spaces where it is needed.
GENERATOR_DEGREE = {Model("Gr25"): 5}


@dataclass(frozen=True)
class SpaceInvariants:
    dimension: int
    picard_rank: int
    j: tuple[int, ...]
    aut_dim: Optional[int]
    model: Model

    def to_json(self) -> dict:
        return {
            "n": self.dimension,
            "picard_rank": self.picard_rank,
            "j": list(self.j),
            "aut_dim": self.aut_dim,
            "model": str(self.model),
        }


def invariants(space: HomSpace) -> SpaceInvariants:
    k = space.picard_rank
    aut = aut_dim(space) if k == 1 and len(space.factors) == 1 else None
    return SpaceInvariants(
        dimension(space), k, anticanonical_coefficients(space), aut, identify_model(space)
    )


def coefficient_margin(n: int, j: Sequence[int]) -> Fraction:
    """Smallest coefficient n(n+1)/(n+2) - max_i j_i over the composition simplex at a_i = 1."""
    return Fraction(n * (n + 1), n + 2) - max(j)
