"""Exact root systems of the simple Lie algebras in Bourbaki numbering.

Everything here is integer arithmetic on simple-root coordinates.  The Cartan
matrix convention is ``cartan[i][j] = <alpha_j, alpha_i^vee>`` (0-based in
code, 1-based node labels in the public API), and every pairing goes through
:func:`coroot_pairing`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple

FAMILIES = "ABCDEFG"

# smallest admissible rank per family; E/F/G are checked separately
_MIN_RANK = {"A": 1, "B": 2, "C": 3, "D": 4}

Root = Tuple[int, ...]
Matrix = Tuple[Tuple[int, ...], ...]


class RootSystemError(ValueError):
    """Invalid Lie type or node index."""


@dataclass(frozen=True, order=True)
class SimpleType:
    family: str
    rank: int

    def __post_init__(self) -> None:
        f, r = self.family, self.rank
        if f not in FAMILIES:
            raise RootSystemError(f"unknown family {f!r}")
        if not isinstance(r, int) or isinstance(r, bool):
            raise RootSystemError(f"rank must be an integer, got {r!r}")
        if f in _MIN_RANK and r < _MIN_RANK[f]:
            raise RootSystemError(f"{f}_{r}: type {f} requires rank >= {_MIN_RANK[f]}")
        if f == "E" and r not in (6, 7, 8):
            raise RootSystemError(f"E_{r}: type E requires rank in {{6, 7, 8}}")
        if f == "F" and r != 4:
            raise RootSystemError(f"F_{r}: type F requires rank = 4")
        if f == "G" and r != 2:
            raise RootSystemError(f"G_{r}: type G requires rank = 2")

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def sort_key(self) -> tuple[int, int]:
        return (FAMILIES.index(self.family), self.rank)


def parse_type(token: str) -> SimpleType:
    """Parse a token such as ``"E8"`` or ``"d5"``."""
    tok = token.strip()
    if len(tok) < 2 or tok[0].upper() not in FAMILIES or not tok[1:].isdigit():
        raise RootSystemError(f"cannot parse Lie type token {token!r}")
    return SimpleType(tok[0].upper(), int(tok[1:]))


def _edges(family: str, rank: int) -> list[tuple[int, int]]:
    """Undirected Dynkin edges, 1-based Bourbaki labels."""
    if family in "ABC":
        return [(i, i + 1) for i in range(1, rank)]
    if family == "D":
        return [(i, i + 1) for i in range(1, rank - 1)] + [(rank - 2, rank)]
    if family == "E":
        # 1-3-4-5-...-rank with 2 attached to 4
        return [(1, 3), (2, 4), (3, 4)] + [(i, i + 1) for i in range(4, rank)]
    if family == "F":
        return [(1, 2), (2, 3), (3, 4)]
    return [(1, 2)]  # G


@lru_cache(maxsize=None)
def cartan_matrix(t: SimpleType) -> Matrix:
    """Cartan matrix with entry (i, j) equal to <alpha_j, alpha_i^vee>.

    Bourbaki lengths: B_l has alpha_l short, C_l has alpha_l long, F_4 has
    alpha_3, alpha_4 short and G_2 has alpha_1 short.
    """
    n = t.rank
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
    for i, j in _edges(t.family, n):
        a[i - 1][j - 1] = a[j - 1][i - 1] = -1
    # <alpha_long, alpha_short^vee> = -k for a k-fold bond
    if t.family == "B":
        a[n - 1][n - 2] = -2
    elif t.family == "C":
        a[n - 2][n - 1] = -2
    elif t.family == "F":
        a[2][1] = -2
    elif t.family == "G":
        a[0][1] = -3
    return tuple(tuple(row) for row in a)


def coroot_pairing(root: Sequence[int], i: int, cartan: Matrix) -> int:
    """<root, alpha_i^vee> for a 1-based node ``i``."""
    n = len(cartan)
    if not 1 <= i <= n:
        raise RootSystemError(f"node {i} out of range 1..{n}")
    if len(root) != n:
        raise RootSystemError(f"root of length {len(root)} for rank {n}")
    row = cartan[i - 1]
    return sum(c * row[k] for k, c in enumerate(root))


def _unit(n: int, i: int) -> Root:
    return tuple(1 if k == i else 0 for k in range(n))


@lru_cache(maxsize=None)
def positive_roots(t: SimpleType) -> tuple[Root, ...]:
    """All positive roots, ordered by height and then lexicographically.

    Built height by height with root strings: for a root ``b`` and simple
    root ``a_i``, ``b + a_i`` is a root iff ``p - <b, a_i^vee> > 0`` where
    ``p`` is the largest ``k`` with ``b - k a_i`` a root.
    """
    cartan = cartan_matrix(t)
    n = t.rank
    known: set[Root] = set()
    layer = [_unit(n, i) for i in range(n)]
    out: list[Root] = []
    while layer:
        layer.sort()
        out.extend(layer)
        known.update(layer)
        nxt: set[Root] = set()
        for b in layer:
            for i in range(n):
                p = 0
                down = list(b)
                while True:
                    down[i] -= 1
                    if tuple(down) in known:
                        p += 1
                    else:
                        break
                if p - coroot_pairing(b, i + 1, cartan) > 0:
                    up = list(b)
                    up[i] += 1
                    nxt.add(tuple(up))
        layer = list(nxt)
    return tuple(out)


@dataclass(frozen=True)
class RootDatum:
    type: SimpleType
    cartan: Matrix
    positive_roots: tuple[Root, ...]

    @property
    def rank(self) -> int:
        return self.type.rank

    def pairing(self, root: Sequence[int], i: int) -> int:
        return coroot_pairing(root, i, self.cartan)


@lru_cache(maxsize=None)
def root_datum(t: SimpleType) -> RootDatum:
    return RootDatum(t, cartan_matrix(t), positive_roots(t))


def lie_algebra_dim(t: SimpleType) -> int:
    return t.rank + 2 * len(positive_roots(t))


def closed_form_lie_dim(t: SimpleType) -> int:
    """dim g from the usual closed forms (independent of root enumeration)."""
    l = t.rank
    if t.family == "A":
        return l * l + 2 * l
    if t.family in "BC":
        return 2 * l * l + l
    if t.family == "D":
        return 2 * l * l - l
    return {("E", 6): 78, ("E", 7): 133, ("E", 8): 248, ("F", 4): 52, ("G", 2): 14}[
        (t.family, l)
    ]


def simple_types(max_rank: int, *, exceptional: bool = True) -> list[SimpleType]:
    """Every valid simple type of rank <= max_rank in (family, rank) order."""
    out = []
    for f in FAMILIES:
        for r in range(1, max_rank + 1):
            try:
                out.append(SimpleType(f, r))
            except RootSystemError:
                continue
    if not exceptional:
        out = [t for t in out if t.family in "ABCD"]
    return out
