import random
from itertools import product

import pytest
import sympy

from jetinv.diffring import JetRing, Polynomial, graded_basis, iter_derive, parse
from jetinv.jets import AffineScheme, ideal_piece_rank, ideal_piece_span, jet_ideal, quotient_piece_dim


def scheme(*gens, nbase=2):
    return AffineScheme(JetRing(nbase), [parse(g) for g in gens])


def test_jet_ideal_of_xy():
    basis = jet_ideal(scheme("x[1]*x[2]"), 1)
    assert basis.polynomials() == [parse("x[1]*x[2]"), parse("x[1]^(1)*x[2] + x[1]*x[2]^(1)")]


def test_jet_ideal_m0_is_the_scheme():
    assert jet_ideal(scheme("x[1]^2 - x[2]^3"), 0).polynomials() == [parse("x[1]^2 - x[2]^3")]


def test_scheme_validation():
    with pytest.raises(ValueError):
        scheme("x[1]^(1)")
    with pytest.raises(ValueError):
        ideal_piece_rank(scheme("x[1] + x[2]^2"), 1, 2, 0)
    with pytest.raises(ValueError):
        AffineScheme(JetRing(1), [Polynomial()])


def test_ideal_piece_examples():
    s = scheme("x[1]*x[2]")
    assert ideal_piece_rank(s, 1, 2, 0) == 1
    assert ideal_piece_rank(s, 1, 2, 1) == 1
    assert ideal_piece_span(s, 1, 2, 1).contains(parse("x[1]^(1)*x[2] + x[1]*x[2]^(1)"))


def test_quotient_dims():
    assert quotient_piece_dim(AffineScheme(JetRing(1), []), 1, 2, 1) == 1
    assert quotient_piece_dim(scheme("x[1]*x[2]"), 0, 2, 0) == 2
    assert quotient_piece_dim(scheme("x[1]*x[2]"), 1, 2, 1) == 3


def brute_rank(gens, nbase, m, d, w):
    """Products of every variable multiset with every derivative, reduced by sympy."""
    ring = JetRing(nbase, m)
    derived = [iter_derive(ring, parse(g), i) for g in gens for i in range(m + 1)]
    cols = graded_basis(ring, d, w)
    index = {mono: i for i, mono in enumerate(cols)}
    rows = []
    for g in derived:
        for e, ww in product(range(d + 1), range(w + 1)):
            for mono in graded_basis(ring, e, ww):
                p = g * Polynomial.monomial(mono)
                if p and all(k in index for k in p.terms):
                    rows.append([p.terms.get(c, 0) for c in cols])
    return sympy.Matrix(rows).rank() if rows else 0


@pytest.mark.parametrize("gens", [["x[1]*x[2]"], ["x[1]^2 - x[2]^2"], ["x[1]^2*x[2]", "x[2]^3"]])
def test_ideal_rank_against_dense_oracle(gens):
    s = scheme(*gens)
    for m, d, w in product(range(3), range(1, 4), range(3)):
        assert ideal_piece_rank(s, m, d, w) == brute_rank(gens, 2, m, d, w), (m, d, w)
        assert ideal_piece_span(s, m, d, w, verify=True).dim == ideal_piece_rank(s, m, d, w)


def test_random_ideals_seeded():
    rng = random.Random(7)
    for _ in range(200):
        a, b = rng.randint(1, 3), rng.randint(1, 3)
        g = f"{b}*x[1]^2 {rng.choice('+-')} {a}*x[1]*x[2]"
        m, d, w = rng.randint(0, 2), rng.randint(2, 3), rng.randint(0, 2)
        assert ideal_piece_rank(scheme(g), m, d, w) == brute_rank([g], 2, m, d, w)
