"""Polynomial layer: ring laws, ordering, division, gcd."""

import random

from hyp3term.multipoly import (HeuristicGCDFailed, MultiPoly, _heugcd,
                                _prs_gcd, grlex_key, poly_gcd)
from hyp3term.rationals import Q

A = MultiPoly.var("a")
B = MultiPoly.var("b")
C = MultiPoly.var("c")
X = MultiPoly.var("x")
ONE = MultiPoly.one()


def random_poly(rng, terms=4, deg=3, denom=6):
    out = MultiPoly.zero()
    for _ in range(rng.randint(1, terms)):
        exp = tuple(rng.randint(0, deg) for _ in range(4))
        coeff = Q(rng.randint(-8, 8), rng.randint(1, denom))
        out = out + MultiPoly.monomial(exp, coeff)
    return out


def test_ring_laws_randomized():
    rng = random.Random(101)
    for _ in range(400):
        f = random_poly(rng)
        g = random_poly(rng)
        h = random_poly(rng)
        assert f + g == g + f
        assert (f + g) + h == f + (g + h)
        assert f * g == g * f
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert f - f == MultiPoly.zero()
        assert f * ONE == f
        assert f * MultiPoly.zero() == MultiPoly.zero()


def test_graded_lex_order():
    # degree first, then lexicographic on (e_a, e_b, e_c, e_x)
    assert grlex_key((0, 0, 0, 2)) > grlex_key((1, 0, 0, 0))
    assert grlex_key((1, 0, 0, 0)) > grlex_key((0, 0, 0, 1))
    poly = A * A + B * X + C
    exps = [e for e, _ in poly.sorted_terms()]
    assert exps == [(2, 0, 0, 0), (0, 1, 0, 1), (0, 0, 1, 0)]
    assert poly.leading()[0] == (2, 0, 0, 0)


def test_content_and_primitive():
    poly = (A * 6 + B * 4).scale(Q(1, 3))
    cont, prim = poly.primitive()
    assert cont == Q(2, 3)
    assert prim == A * 3 + B * 2
    neg = -A * 2 - B * 4
    cont, prim = neg.primitive()
    assert cont == Q(-2)
    assert prim == A + B * 2


def test_exact_division():
    f = (A + B) * (C - X) * (C - X)
    assert f.divide_exact(C - X) == (A + B) * (C - X)
    assert f.divide_exact(A + B) == (C - X) ** 2
    assert f.divide_exact(A + C) is None
    assert MultiPoly.zero().divide_exact(A) == MultiPoly.zero()
    g = f.scale(Q(3, 7))
    assert g.divide_exact(f) == MultiPoly.const(Q(3, 7))


def test_pow_and_derivative():
    p = (X + ONE) ** 3
    assert p == X * X * X + X * X * 3 + X * 3 + ONE
    assert p.deriv_x() == (X * X + X * 2 + ONE) * 3
    assert (A * B).deriv_x() == MultiPoly.zero()


def test_gcd_structured_products():
    rng = random.Random(77)
    lin = [A + ONE, C - A, C - B, X, X - ONE, B + C - ONE, A + B - C]
    for _ in range(60):
        common = ONE
        for factor in rng.sample(lin, rng.randint(0, 3)):
            common = common * factor
        f = common * random_poly(rng, terms=3, deg=2)
        g = common * random_poly(rng, terms=3, deg=2)
        if f.is_zero() or g.is_zero():
            continue
        gcd = poly_gcd(f, g)
        assert f.divide_exact(gcd) is not None
        assert g.divide_exact(gcd) is not None
        # the constructed common part always divides the gcd
        assert gcd.divide_exact(common.primitive()[1]) is not None


def test_gcd_heuristic_matches_prs():
    rng = random.Random(78)
    for _ in range(25):
        common = (A + B) * (C - X) if rng.random() < 0.5 else (X * (A - ONE))
        f = (common * random_poly(rng, terms=3, deg=2)).primitive()[1]
        g = (common * random_poly(rng, terms=3, deg=2)).primitive()[1]
        if f.is_zero() or g.is_zero():
            continue
        try:
            heu = _heugcd(f, g).primitive()[1]
        except HeuristicGCDFailed:
            continue
        prs = _prs_gcd(f, g).primitive()[1]
        assert heu == prs


def test_gcd_edge_cases():
    assert poly_gcd(MultiPoly.zero(), A * 2) == A
    assert poly_gcd(A, MultiPoly.zero()) == A
    assert poly_gcd(MultiPoly.const(4), MultiPoly.const(6)) == ONE
    assert poly_gcd(X * X * A, X * X * X) == X * X
    assert poly_gcd(A + B, A + C) == ONE


def test_substitute_polys():
    f = A * A + B
    out = f.substitute_polys({0: C - ONE, 1: X})
    assert out == (C - ONE) * (C - ONE) + X


def test_json_roundtrip():
    poly = A * B - X.scale(Q(2, 3)) + ONE
    data = poly.to_json_terms()
    assert data == [[1, 1, 0, 0, "1/1"], [0, 0, 0, 1, "-2/3"],
                    [0, 0, 0, 0, "1/1"]]
    assert MultiPoly.from_json_terms(data) == poly
