"""Numerical Ulrich conditions on curves, surfaces and threefolds.

Chern data are plain intersection numbers (every class already paired down
to a degree), and every identity is checked by exact rational arithmetic.
Residuals are always ``lhs - rhs``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from typing import Optional

F = Fraction


class ChernDataError(ValueError):
    pass


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    residuals: tuple[tuple[str, Fraction], ...]
    aux: tuple[tuple[str, Fraction], ...] = ()
    warnings: tuple[str, ...] = ()

    @classmethod
    def from_residuals(cls, residuals, aux=(), warnings=()) -> "CheckResult":
        residuals = tuple((name, F(v)) for name, v in residuals)
        return cls(all(v == 0 for _, v in residuals), residuals, tuple(aux), tuple(warnings))

    def residual(self, name: str) -> Fraction:
        return dict(self.residuals)[name]

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "residuals": {k: fmt(v) for k, v in self.residuals},
            "aux": {k: fmt(v) for k, v in self.aux},
            "warnings": list(self.warnings),
        }


def fmt(x) -> str:
    """Exact rational as ``"p/q"`` (or ``"p"``)."""
    return str(F(x))


def _check_ints(obj, names) -> None:
    for name in names:
        v = getattr(obj, name)
        if v is None:
            continue
        if not isinstance(v, int) or isinstance(v, bool):
            raise ChernDataError(f"field {name} must be an integer, got {v!r}")


# -- first Chern class -------------------------------------------------------


def lemma_c1_residual(n: int, r: int, c1Hpow: int, KHpow: int, Hn: int) -> Fraction:
    """c1(E).H^{n-1} - r/2 (K + (n+1)H).H^{n-1}."""
    return c1Hpow - F(r, 2) * (KHpow + (n + 1) * Hn)


# -- surfaces ----------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceChernData:
    r: int
    c1H: int
    c1sq: int
    c1K: int
    c2: int
    KH: int
    Hsq: int
    chiO: int
    Ksq: Optional[int] = None  # only needed for the Ulrich dual

    REQUIRED = ("r", "c1H", "c1sq", "c1K", "c2", "KH", "Hsq", "chiO")

    def __post_init__(self) -> None:
        _check_ints(self, self.REQUIRED + ("Ksq",))
        if self.r < 1:
            raise ChernDataError("r must be >= 1")
        if self.Hsq < 1:
            raise ChernDataError("Hsq must be >= 1")

    @classmethod
    def from_json(cls, obj: dict) -> "SurfaceChernData":
        return _from_json(cls, obj)

    def to_json(self) -> dict:
        return {k: v for k, v in dataclasses.asdict(self).items() if v is not None}


def surface_identities(data: SurfaceChernData) -> CheckResult:
    """Both Casnati identities for a rank r bundle on a polarised surface."""
    d = data
    first = d.c1H - F(d.r, 2) * (d.KH + 3 * d.Hsq)
    second = d.c2 - (F(d.c1sq - d.c1K, 2) - d.r * (d.Hsq - d.chiO))
    return CheckResult.from_residuals([("c1.H", first), ("c2", second)])


def ulrich_dual_surface(data: SurfaceChernData) -> SurfaceChernData:
    """Chern numbers of E^dual (K + 3H)."""
    d = data
    if d.Ksq is None:
        raise ChernDataError("Ulrich dual needs Ksq (K_S^2)")
    r = d.r
    DH = d.KH + 3 * d.Hsq
    DK = d.Ksq + 3 * d.KH
    DD = d.Ksq + 6 * d.KH + 9 * d.Hsq
    c1D = d.c1K + 3 * d.c1H
    return dataclasses.replace(
        d,
        c1H=-d.c1H + r * DH,
        c1sq=d.c1sq - 2 * r * c1D + r * r * DD,
        c1K=-d.c1K + r * DK,
        c2=d.c2 - (r - 1) * c1D + comb(r, 2) * DD,
    )


def veronese_tangent() -> SurfaceChernData:
    """T_{P^2} polarised by O(2)."""
    return SurfaceChernData(r=2, c1H=6, c1sq=9, c1K=-9, c2=3, KH=-6, Hsq=4, chiO=1, Ksq=9)


# -- threefolds --------------------------------------------------------------


@dataclass(frozen=True)
class ThreefoldChernData:
    r: int
    c1Hsq: int  # c1(E).H^2
    c1sqH: int  # c1(E)^2.H
    c1cube: int
    c2H: int
    c1c2: int
    c3: int
    KHsq: int
    KsqH: int
    c1sqK: int
    c2K: int
    c1Ksq: int
    c1c2X: int  # c1(E).c2(X)
    c2XH: int
    Hcube: int
    chiO: int
    c1HK: int  # c1(E).H.K

    def __post_init__(self) -> None:
        _check_ints(self, [f.name for f in dataclasses.fields(self)])
        if self.r < 1:
            raise ChernDataError("r must be >= 1")
        if self.Hcube < 1:
            raise ChernDataError("Hcube must be >= 1")

    @classmethod
    def from_json(cls, obj: dict) -> "ThreefoldChernData":
        return _from_json(cls, obj)

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


def threefold_twist(data: ThreefoldChernData, j: int) -> ThreefoldChernData:
    """Chern numbers of E(-jH)."""
    d, r = data, data.r
    t = -j  # twist by D = tH
    b1, b2, b3, b22 = r - 1, comb(r, 2), comb(r, 3), comb(r - 1, 2)
    # c1' = c1 + r t H
    # c2' = c2 + (r-1) t c1 H + C(r,2) t^2 H^2
    # c3' = c3 + (r-2) t c2 H + C(r-1,2) t^2 c1 H^2 + C(r,3) t^3 H^3
    c1Hsq = d.c1Hsq + r * t * d.Hcube
    c1sqH = d.c1sqH + 2 * r * t * d.c1Hsq + r * r * t * t * d.Hcube
    c1cube = d.c1cube + 3 * r * t * d.c1sqH + 3 * r * r * t * t * d.c1Hsq + r**3 * t**3 * d.Hcube
    c2H = d.c2H + b1 * t * d.c1Hsq + b2 * t * t * d.Hcube
    c1c2 = (
        d.c1c2
        + b1 * t * d.c1sqH
        + b2 * t * t * d.c1Hsq
        + r * t * d.c2H
        + r * b1 * t * t * d.c1Hsq
        + r * b2 * t**3 * d.Hcube
    )
    c3 = d.c3 + (r - 2) * t * d.c2H + b22 * t * t * d.c1Hsq + b3 * t**3 * d.Hcube
    c1sqK = d.c1sqK + 2 * r * t * d.c1HK + r * r * t * t * d.KHsq
    c2K = d.c2K + b1 * t * d.c1HK + b2 * t * t * d.KHsq
    c1Ksq = d.c1Ksq + r * t * d.KsqH
    c1c2X = d.c1c2X + r * t * d.c2XH
    c1HK = d.c1HK + r * t * d.KHsq
    return dataclasses.replace(
        d,
        c1Hsq=c1Hsq,
        c1sqH=c1sqH,
        c1cube=c1cube,
        c2H=c2H,
        c1c2=c1c2,
        c3=c3,
        c1sqK=c1sqK,
        c2K=c2K,
        c1Ksq=c1Ksq,
        c1c2X=c1c2X,
        c1HK=c1HK,
    )


def threefold_chi(data: ThreefoldChernData) -> Fraction:
    """Hirzebruch-Riemann-Roch on a threefold."""
    d = data
    return (
        d.r * d.chiO
        + F(d.c1Ksq + d.c1c2X, 12)
        + F(2 * d.c2K - d.c1sqK, 4)
        + F(d.c1cube - 3 * d.c1c2 + 3 * d.c3, 6)
    )


def threefold_delta(data: ThreefoldChernData, j: int) -> Fraction:
    """chi(E(-jH)) - chi(E) as a cubic in j, evaluated directly from the data."""
    d, r = data, data.r
    linear = 12 * d.c2H + 6 * d.c1HK - 6 * d.c1sqH - r * d.KsqH - r * d.c2XH
    quad = 2 * d.c1Hsq - r * d.KHsq
    return F(j * linear, 12) + F(j * j * quad, 4) - F(j**3 * r * d.Hcube, 6)


def threefold_identities(data: ThreefoldChernData) -> CheckResult:
    """The three threefold Ulrich identities plus chi(E(-jH)), j = 1, 2, 3."""
    d, r = data, data.r
    first = d.c1Hsq - F(r, 2) * (d.KHsq + 4 * d.Hcube)
    second = d.c2H - (
        F(r, 12) * (d.KsqH + d.c2XH - 22 * d.Hcube) + F(d.c1sqH - d.c1HK, 2)
    )
    third = d.c3 - (
        d.c1c2
        - F(d.c1cube, 3)
        + F(d.c1sqK - 2 * d.c2K, 2)
        - F(d.c1Ksq + d.c1c2X, 6)
        + 2 * r * (d.Hcube - d.chiO)
    )
    chi = threefold_chi(d)
    chis = [chi + threefold_delta(d, j) for j in (1, 2, 3)]
    result = CheckResult.from_residuals(
        [("c1.H^2", first), ("c2.H", second), ("c3", third)],
        aux=[("chi(E)", chi)] + [(f"chi(E(-{j}H))", c) for j, c in zip((1, 2, 3), chis)],
        warnings=[] if chi.denominator == 1 else [f"non-integral chi(E) = {chi}"],
    )
    if result.passed != all(c == 0 for c in chis):
        raise RuntimeError("threefold identities disagree with chi(E(-jH)) = 0, j = 1, 2, 3")
    return result


def index2_fano_data(d: int, c2H: Optional[int] = None, c3: int = 0) -> ThreefoldChernData:
    """Rank-2 bundle with c1 = 2H on an index-2 Fano threefold (-K = 2H) of degree d."""
    c2H = d + 2 if c2H is None else c2H
    return ThreefoldChernData(
        r=2,
        c1Hsq=2 * d,
        c1sqH=4 * d,
        c1cube=8 * d,
        c2H=c2H,
        c1c2=2 * c2H,
        c3=c3,
        KHsq=-2 * d,
        KsqH=4 * d,
        c1sqK=-8 * d,
        c2K=-2 * c2H,
        c1Ksq=8 * d,
        c1c2X=24,
        c2XH=12,
        Hcube=d,
        chiO=1,
        c1HK=-4 * d,
    )


_K_FIELDS = ("KHsq", "KsqH", "c1sqK", "c2K", "c1Ksq", "c1HK")


def corollary_k0_residual(data: ThreefoldChernData) -> tuple[Fraction, Optional[int]]:
    """12 c2.H - 13 c1.H^2 - 2 c2(X).H, and the genus of the zero-locus curve when c2(X) = 0."""
    nonzero = [name for name in _K_FIELDS if getattr(data, name) != 0]
    if nonzero:
        raise ChernDataError(f"c1(X) = 0 required, nonzero K pairings: {', '.join(nonzero)}")
    residual = F(12 * data.c2H - 13 * data.c1Hsq - 2 * data.c2XH)
    genus = 2 * data.c2H + 1 if data.c2XH == 0 else None
    return residual, genus


# -- curves and projective spaces --------------------------------------------


def p1_cohomology(k: int) -> tuple[int, int]:
    """(h^0, h^1) of O_{P^1}(k)."""
    return max(0, k + 1), max(0, -k - 1)


def bott_dims(n: int, p: int, k: int) -> tuple[int, ...]:
    """h^q(P^n, Omega^p(k)) for q = 0..n (Bott's formula)."""
    if not 0 <= p <= n:
        raise ValueError(f"need 0 <= p <= n, got p={p}, n={n}")
    h = [0] * (n + 1)
    if k > p:
        h[0] = comb(k + n - p, k) * comb(k - 1, p)
    if k == 0:
        h[p] += 1
    if k < p - n:
        h[n] = comb(-k + p, -k) * comb(-k - 1, n - p)
    return tuple(h)


@dataclass(frozen=True)
class CurveVerdict:
    ulrich: bool
    reason: str
    witness: int  # dimension of the non-vanishing cohomology group (0 if Ulrich)


def curve_tangent_ulrich(g: int, d: int) -> CurveVerdict:
    """Is T_C Ulrich on a genus g curve embedded with degree d?"""
    if g < 0 or d < 1:
        raise ValueError("need g >= 0 and d >= 1")
    if g == 0:
        # T(-H) = O(2-d); h^1 = h^0(O(d-4)) by duality
        h0, h1 = p1_cohomology(2 - d)
        if h0:
            return CurveVerdict(False, f"h0(O(2-d)) = {h0}", h0)
        if h1:
            return CurveVerdict(False, f"h0(O(d-4)) = {h1}", h1)
        return CurveVerdict(True, "h0 = h1 = 0", 0)
    # deg(T(-H)) = 2-2g-d < 0 kills h^0; h^1 = h^0(omega^2(H)) = 3g-3+d by Riemann-Roch
    w = 3 * g - 3 + d
    return CurveVerdict(False, f"h0(omega^2(H)) = 3g-3+d = {w}", w)


def curve_cotangent_ulrich(g: int, d: int) -> CurveVerdict:
    """Omega_C(-H) Ulrich would force h^0(O_C(H)) = 0, impossible for very ample H."""
    if g < 0 or d < 1:
        raise ValueError("need g >= 0 and d >= 1")
    # embedding gives at least two independent sections; exact on P^1
    h0 = d + 1 if g == 0 else max(2, d + 1 - g)
    return CurveVerdict(False, f"h0(O_C(H)) >= {h0}", h0)


def pn_tangent_equation(n: int) -> Optional[int]:
    """The degree d with d^n = n + 2, if any."""
    if n < 1:
        raise ValueError("need n >= 1")
    target = n + 2
    d = 1
    while d**n < target:
        d += 1
    return d if d**n == target else None


def p1_times_pl_residual(l: int, a: int, b: int) -> Fraction:
    """The displayed first-Chern-class expression for T on P^1 x P^l with H = O(a, b)."""
    return a * b**l * (F((l + 1) ** 2 * (l + 2), l + 3) - F(a * (l + 1) + 2 * b, a * b))


def p1_times_pl_intersection(l: int, a: int, b: int) -> Fraction:
    """n(n+1)/(n+2) H^n + K.H^{n-1} on P^1 x P^l, H = O(a, b), from intersection numbers.

    With A, B the pulled-back hyperplanes: A^2 = 0, A.B^l = 1, so
    H^{l+1} = (l+1) a b^l and K.H^l = -2 b^l - l(l+1) a b^(l-1).
    """
    n = l + 1
    Hn = n * a * b**l
    KH = -2 * b**l - l * (l + 1) * a * b ** (l - 1)
    return F(n * (n + 1), n + 2) * Hn + KH


def degree_divisor(n: int) -> int:
    """(n+2)/gcd(n^2+n, n+2): deg X must be a multiple of this if T_X is Ulrich."""
    return (n + 2) // gcd(n * n + n, n + 2)


@dataclass(frozen=True)
class SurfaceStep:
    name: str
    value: str
    holds: bool


@dataclass(frozen=True)
class SurfaceConstraints:
    steps: tuple[SurfaceStep, ...]
    Hsq: int
    KH: int
    Ksq: int
    chiO: int
    q: int
    genus_adjoint: int

    @property
    def passed(self) -> bool:
        return all(s.holds for s in self.steps)

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "Hsq": self.Hsq,
            "KH": self.KH,
            "Ksq": self.Ksq,
            "chiO": self.chiO,
            "q": self.q,
            "genus_adjoint": self.genus_adjoint,
            "steps": [dataclasses.asdict(s) for s in self.steps],
        }


def surface_classification_constraints() -> SurfaceConstraints:
    """Numerical chain forcing (P^2, O(2)) for a surface with Ulrich tangent bundle.

    T_S has r = 2, c1 = -K.  The first identity gives 2 K.H = -3 H^2; a
    hyperplane curve has genus 1 - H^2/4; the second identity with Noether
    gives chi(O) = (K^2 - 4)/5; the adjoint curve in |K + 3H| has genus
    K^2 - 8; and q = 1 - chi(O) = (9 - K^2)/5 for a ruled surface.
    """
    steps: list[SurfaceStep] = []

    # 2 K.H = -3 H^2 with H^2 >= 1, and g(C) = 1 + (H^2 + K.H)/2 a non-negative integer
    hsq_candidates = []
    for hsq in range(1, 5):  # g(C) = 1 - H^2/4 >= 0 caps H^2 at 4
        if (3 * hsq) % 2:
            continue
        kh = -3 * hsq // 2
        g = 1 + F(hsq + kh, 2)
        assert g == 1 - F(hsq, 4)
        if g.denominator == 1 and g >= 0:
            hsq_candidates.append((hsq, kh))
    steps.append(SurfaceStep("2K.H = -3H^2, g(C) = 1 - H^2/4 in Z>=0", str(hsq_candidates), hsq_candidates == [(4, -6)]))
    hsq, kh = hsq_candidates[0]

    def data_at(ksq: int, chi: int) -> SurfaceChernData:
        # T_S: c1 = -K, c2 = e = 12 chi - K^2 (Noether)
        return SurfaceChernData(
            r=2, c1H=-kh, c1sq=ksq, c1K=-ksq, c2=12 * chi - ksq, KH=kh, Hsq=hsq, chiO=chi, Ksq=ksq
        )

    # chi(O) from the second identity: e = K^2 - 8 + 2 chi, Noether 12 chi = K^2 + e
    def chi_of(ksq: int) -> Fraction:
        return F(ksq - 4, 5)

    probe = [k for k in range(-20, 21) if chi_of(k).denominator == 1]
    ok = all(surface_identities(data_at(k, int(chi_of(k)))).passed for k in probe)
    steps.append(SurfaceStep("chi(O) = (K^2 - 4)/5 solves both identities", "checked on K^2 in [-20, 20]", ok))

    def adjoint_genus(ksq: int) -> Fraction:
        D2 = ksq + 6 * kh + 9 * hsq
        return 1 + F(D2 + ksq + 3 * kh, 2)

    window = range(-100, 101)
    lower = min(k for k in window if adjoint_genus(k) >= 0)
    linear = all(adjoint_genus(k) == k - 8 for k in window)
    steps.append(SurfaceStep("g(K+3H) = K^2 - 8 >= 0", f"K^2 >= {lower}", linear and lower == 8))

    upper = max(k for k in window if 1 - chi_of(k) >= 0)
    steps.append(SurfaceStep("q = (9 - K^2)/5 >= 0", f"K^2 <= {upper}", upper == 9))

    solutions = [k for k in range(lower, upper + 1) if chi_of(k).denominator == 1]
    steps.append(SurfaceStep("chi(O) integral on [lower, upper]", str(solutions), solutions == [9]))
    ksq = solutions[0]
    chi = int(chi_of(ksq))
    q = 1 - chi
    g_adj = int(adjoint_genus(ksq))
    steps.append(SurfaceStep("K^2 = 9 => chi(O) = 1, q = 0, g(K+3H) = 1", f"chi={chi}, q={q}, g={g_adj}", (chi, q, g_adj) == (1, 0, 1)))
    steps.append(SurfaceStep("Veronese tangent data satisfies both identities", "", surface_identities(veronese_tangent()).passed))
    return SurfaceConstraints(tuple(steps), hsq, kh, ksq, chi, q, g_adj)


# -- JSON ingestion ----------------------------------------------------------


def _from_json(cls, obj):
    if not isinstance(obj, dict):
        raise ChernDataError("expected a JSON object")
    names = [f.name for f in dataclasses.fields(cls)]
    required = [f.name for f in dataclasses.fields(cls) if f.default is dataclasses.MISSING]
    for name in required:
        if name not in obj:
            raise ChernDataError(f"missing field {name}")
    unknown = sorted(set(obj) - set(names))
    if unknown:
        raise ChernDataError(f"unknown field(s): {', '.join(unknown)}")
    return cls(**{k: obj[k] for k in names if k in obj})
