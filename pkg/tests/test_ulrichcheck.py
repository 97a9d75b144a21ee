from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from ulrich_tangent import ulrichcheck as uc

F = Fraction


def _binom3(m):
    # C(m+3, 3) as a polynomial, valid for negative m
    return F((m + 3) * (m + 2) * (m + 1), 6)


def p3_split(degrees, e=1):
    """Direct sum of O(a_k) on P^3 polarised by H = O(e)."""
    s1 = sum(degrees)
    e2 = sum(a * b for i, a in enumerate(degrees) for b in degrees[i + 1 :])
    e3 = sum(
        a * b * c
        for i, a in enumerate(degrees)
        for j, b in enumerate(degrees[i + 1 :], i + 1)
        for c in degrees[j + 1 :]
    )
    return uc.ThreefoldChernData(
        r=len(degrees), c1Hsq=s1 * e * e, c1sqH=s1 * s1 * e, c1cube=s1**3, c2H=e2 * e,
        c1c2=s1 * e2, c3=e3, KHsq=-4 * e * e, KsqH=16 * e, c1sqK=-4 * s1 * s1, c2K=-4 * e2,
        c1Ksq=16 * s1, c1c2X=6 * s1, c2XH=6 * e, Hcube=e**3, chiO=1, c1HK=-4 * s1 * e,
    )


def p3_tangent(e=1):
    # c(T) = (1+h)^4: c1 = 4, c2 = 6, c3 = 4
    return uc.ThreefoldChernData(
        r=3, c1Hsq=4 * e * e, c1sqH=16 * e, c1cube=64, c2H=6 * e, c1c2=24, c3=4,
        KHsq=-4 * e * e, KsqH=16 * e, c1sqK=-64, c2K=-24, c1Ksq=64, c1c2X=24, c2XH=6 * e,
        Hcube=e**3, chiO=1, c1HK=-16 * e,
    )


def test_hrr_anchors():
    assert uc.threefold_chi(p3_split([0])) == 1
    assert uc.threefold_chi(p3_split([1])) == 4
    assert uc.threefold_chi(p3_tangent()) == 15


SPLIT = st.lists(st.integers(-4, 4), min_size=1, max_size=3)


@given(SPLIT, st.integers(1, 3), st.integers(-3, 3))
def test_twist_against_split_oracle(degrees, e, j):
    d = p3_split(degrees, e)
    tw = uc.threefold_twist(d, j)
    assert tw == p3_split([a - j * e for a in degrees], e)
    want = sum(_binom3(a - j * e) for a in degrees)
    assert uc.threefold_chi(tw) == want
    assert uc.threefold_chi(d) + uc.threefold_delta(d, j) == want


@given(SPLIT, st.integers(1, 3))
def test_identities_match_chi_vanishing(degrees, e):
    d = p3_split(degrees, e)
    res = uc.threefold_identities(d)
    vanish = all(sum(_binom3(a - j * e) for a in degrees) == 0 for j in (1, 2, 3))
    assert res.passed == vanish


def test_structure_sheaf_is_ulrich_on_p3():
    assert uc.threefold_identities(p3_split([0])).passed
    assert uc.threefold_identities(p3_split([0, 0])).passed
    assert not uc.threefold_identities(p3_split([1])).passed
    assert not uc.threefold_identities(p3_tangent()).passed


INTS = st.integers(-6, 6)
THREEFOLD = st.builds(
    uc.ThreefoldChernData,
    r=st.integers(1, 4), c1Hsq=INTS, c1sqH=INTS, c1cube=INTS, c2H=INTS, c1c2=INTS, c3=INTS,
    KHsq=INTS, KsqH=INTS, c1sqK=INTS, c2K=INTS, c1Ksq=INTS, c1c2X=INTS, c2XH=INTS,
    Hcube=st.integers(1, 6), chiO=INTS, c1HK=INTS,
)


@given(THREEFOLD, st.integers(-3, 3), st.integers(-3, 3))
def test_twist_composes(d, a, b):
    assert uc.threefold_twist(uc.threefold_twist(d, a), b) == uc.threefold_twist(d, a + b)
    assert uc.threefold_twist(d, 0) == d


@given(THREEFOLD, st.integers(-3, 3))
def test_delta_consistency(d, j):
    assert uc.threefold_chi(uc.threefold_twist(d, j)) == uc.threefold_chi(d) + uc.threefold_delta(d, j)


@given(THREEFOLD)
def test_identities_never_disagree_with_chi(d):
    res = uc.threefold_identities(d)
    chis = [v for k, v in res.aux if k.startswith("chi(E(-")]
    assert res.passed == all(c == 0 for c in chis)


@pytest.mark.parametrize("d", range(3, 8))
def test_index2_fano(d):
    assert uc.threefold_identities(uc.index2_fano_data(d)).passed
    assert not uc.threefold_identities(uc.index2_fano_data(d, d + 3)).passed
    assert not uc.threefold_identities(uc.index2_fano_data(d, c3=1)).passed


def test_k0_corollary():
    d = uc.ThreefoldChernData(
        r=2, c1Hsq=0, c1sqH=0, c1cube=0, c2H=3, c1c2=0, c3=0, KHsq=0, KsqH=0, c1sqK=0,
        c2K=0, c1Ksq=0, c1c2X=0, c2XH=0, Hcube=2, chiO=0, c1HK=0,
    )
    assert uc.corollary_k0_residual(d) == (36, 7)
    with pytest.raises(uc.ChernDataError):
        uc.corollary_k0_residual(uc.index2_fano_data(3))


# -- surfaces ----------------------------------------------------------------


def test_veronese_tangent():
    res = uc.surface_identities(uc.veronese_tangent())
    assert res.passed
    assert res.residual("c1.H") == 0 and res.residual("c2") == 0


SURFACE = st.builds(
    uc.SurfaceChernData,
    r=st.integers(1, 4), c1H=INTS, c1sq=INTS, c1K=INTS, c2=INTS, KH=INTS,
    Hsq=st.integers(1, 9), chiO=st.integers(-3, 3), Ksq=INTS,
)


@given(SURFACE)
def test_dual_is_involution(d):
    assert uc.ulrich_dual_surface(uc.ulrich_dual_surface(d)) == d


@given(SURFACE)
def test_dual_preserves_identities(d):
    a = uc.surface_identities(d)
    b = uc.surface_identities(uc.ulrich_dual_surface(d))
    assert b.residual("c1.H") == -a.residual("c1.H")
    if a.residual("c1.H") == 0:
        assert b.residual("c2") == a.residual("c2")
    assert a.passed == b.passed


def test_dual_needs_ksq():
    d = uc.SurfaceChernData(r=2, c1H=6, c1sq=9, c1K=-9, c2=3, KH=-6, Hsq=4, chiO=1)
    with pytest.raises(uc.ChernDataError):
        uc.ulrich_dual_surface(d)


def test_veronese_is_special():
    # det T = omega (3H) on (P^2, O(2)), so T is fixed by duality
    v = uc.veronese_tangent()
    assert uc.ulrich_dual_surface(v) == v


def test_classification_chain():
    c = uc.surface_classification_constraints()
    assert c.passed
    assert (c.Hsq, c.KH, c.Ksq, c.chiO, c.q, c.genus_adjoint) == (4, -6, 9, 1, 0, 1)


def test_lemma_c1():
    # T_{P^2} with H = O(2): 6 - 2/2 (-6 + 12) = 0
    assert uc.lemma_c1_residual(2, 2, 6, -6, 4) == 0


# -- Bott, curves, P^n -------------------------------------------------------


def _koszul_chi(n, p, k):
    # 0 -> Omega^p -> wedge^p O(-1)^{n+1} -> Omega^{p-1} -> 0, twisted by k
    if p == 0:
        return comb_poly(k + n, n)
    return comb(n + 1, p) * comb_poly(k - p + n, n) - _koszul_chi(n, p - 1, k)


def comb_poly(top, n):
    num = 1
    for i in range(n):
        num *= top - i
    den = 1
    for i in range(1, n + 1):
        den *= i
    return F(num, den)


@pytest.mark.parametrize("n", range(1, 6))
def test_bott_against_koszul(n):
    for p in range(n + 1):
        for k in range(-8, 9):
            h = uc.bott_dims(n, p, k)
            assert sum((-1) ** q * x for q, x in enumerate(h)) == _koszul_chi(n, p, k)
            assert sum(1 for x in h if x) <= 1
            assert all(x >= 0 for x in h)


def test_veronese_bott():
    for j in (1, 2):
        assert uc.bott_dims(2, 1, 3 - 2 * j) == (0, 0, 0)
    assert uc.bott_dims(2, 1, 0) == (0, 1, 0)
    assert uc.bott_dims(2, 1, 2) == (3, 0, 0)


def test_p1_cohomology():
    for k in range(-6, 7):
        h0, h1 = uc.p1_cohomology(k)
        assert h0 - h1 == k + 1
        assert uc.bott_dims(1, 0, k) == (h0, h1)


def test_curves():
    hits = [(g, d) for g in range(11) for d in range(1, 31) if uc.curve_tangent_ulrich(g, d).ulrich]
    assert hits == [(0, 3)]
    assert not any(uc.curve_cotangent_ulrich(g, d).ulrich for g in range(11) for d in range(1, 31))
    assert uc.curve_tangent_ulrich(0, 3).witness == 0
    with pytest.raises(ValueError):
        uc.curve_tangent_ulrich(-1, 2)


def test_pn_equation():
    assert [n for n in range(1, 65) if uc.pn_tangent_equation(n) is not None] == [1, 2]
    assert uc.pn_tangent_equation(1) == 3 and uc.pn_tangent_equation(2) == 2


def test_p1_times_pl():
    assert uc.p1_times_pl_residual(2, 1, 1) == F(11, 5)
    for l in range(2, 8):
        assert uc.p1_times_pl_intersection(l, 1, 1) == F(-4, l + 3)


@given(st.integers(2, 12), st.integers(1, 12), st.integers(1, 12))
def test_p1_times_pl_intersection_direct(l, a, b):
    # expand (aA + bB)^{l+1} and K = -2A - (l+1)B with A^2 = 0, A B^l = 1
    n = l + 1
    hn = n * a * b**l
    kh = -2 * b**l - (l + 1) * comb(l, l - 1) * a * b ** (l - 1)
    assert uc.p1_times_pl_intersection(l, a, b) == F(n * (n + 1), n + 2) * hn + kh


def test_degree_divisor():
    assert uc.degree_divisor(4) == 3
    assert uc.degree_divisor(6) == 4
    assert uc.degree_divisor(2) == 2


def test_json_round_trip_and_errors():
    v = uc.veronese_tangent()
    assert uc.SurfaceChernData.from_json(v.to_json()) == v
    obj = v.to_json()
    del obj["c2"]
    with pytest.raises(uc.ChernDataError, match="missing field c2"):
        uc.SurfaceChernData.from_json(obj)
    with pytest.raises(uc.ChernDataError, match="unknown"):
        uc.SurfaceChernData.from_json({**v.to_json(), "bogus": 1})
    with pytest.raises(uc.ChernDataError):
        uc.SurfaceChernData.from_json({**v.to_json(), "c2": 1.5})
    t = uc.index2_fano_data(5)
    assert uc.ThreefoldChernData.from_json(t.to_json()) == t


def test_dual_invariance_exhaustive_grid():
    import itertools

    count = 0
    for r, c1H, KH, Hsq in itertools.product((1, 2, 3), range(-3, 4), range(-3, 4), (1, 2, 3)):
        for c1sq, c1K, c2, chiO, Ksq in itertools.product((-2, 0, 3), (-1, 0, 2), (-2, 1), (0, 1), (-1, 4)):
            d = uc.SurfaceChernData(r, c1H, c1sq, c1K, c2, KH, Hsq, chiO, Ksq)
            dual = uc.ulrich_dual_surface(d)
            assert uc.surface_identities(d).passed == uc.surface_identities(dual).passed
            count += 1
    assert count == 3 * 7 * 7 * 3 * 72


def test_p1xp1_tangent_fails():
    d = uc.SurfaceChernData(r=2, c1H=4, c1sq=8, c1K=-8, c2=4, KH=-4, Hsq=2, chiO=1)
    res = uc.surface_identities(d)
    assert not res.passed and res.residual("c1.H") == 2


@given(SURFACE)
def test_c1_specializes_to_surface(d):
    assert uc.lemma_c1_residual(2, d.r, d.c1H, d.KH, d.Hsq) == uc.surface_identities(d).residual("c1.H")


@given(THREEFOLD)
def test_c1_specializes_to_threefold(d):
    assert uc.lemma_c1_residual(3, d.r, d.c1Hsq, d.KHsq, d.Hcube) == uc.threefold_identities(d).residual("c1.H^2")


@given(st.integers(1, 6))
def test_c1_p3_tangent_never_vanishes(e):
    assert uc.lemma_c1_residual(3, 3, 4 * e * e, -4 * e * e, e**3) != 0


@given(THREEFOLD, st.integers(-5, 5))
def test_delta_consistency_wide(d, j):
    assert uc.threefold_chi(uc.threefold_twist(d, j)) - uc.threefold_chi(d) == uc.threefold_delta(d, j)


def test_p1_times_pl_line_case():
    # l = 1 reduces to 3ab - 2a - 2b, negative at (1, 1)
    assert uc.p1_times_pl_residual(1, 2, 2) == 4
    assert uc.p1_times_pl_residual(1, 1, 1) == -1
