import random
from itertools import combinations_with_replacement

import pytest
from hypothesis import given, settings, strategies as st

from jetinv.diffring import Polynomial, parse
from jetinv.errors import NotInvariantError
from jetinv.linalg import span_rank
from jetinv.smt.cstar import (
    FMonomial,
    FVar,
    L_of_w,
    Letter,
    M_of_h,
    Word,
    fmono_of_word,
    is_admissible,
    is_standard_fmono,
    pstar,
    standard_fmonomials,
    straighten_cstar,
    word_monomial,
    word_order,
)


def fm(*triples):
    return FMonomial(tuple(FVar(*t) for t in triples))


def random_standard(rng, n, maxfac=4, maxk=3):
    while True:
        fs = [FVar(rng.randint(1, n), rng.randint(1, n), rng.randint(0, maxk)) for _ in range(rng.randint(1, maxfac))]
        m = FMonomial(tuple(fs))
        if is_standard_fmono(m):
            return m


def test_L_examples():
    assert L_of_w(fm((1, 1, 0))) == Word(((0, 1),), ((0, 1),))
    assert L_of_w(fm((1, 1, 0), (1, 2, 1))) == Word(((0, 1), (1, 1)), ((0, 1), (0, 2)))


def test_L_rejects_nonstandard():
    with pytest.raises(ValueError):
        L_of_w(fm((1, 2, 0), (2, 1, 0)))


def test_M_example():
    h = pstar(fm((1, 1, 1)), 1)
    assert h == parse("x[1]^(1)*x[2] + x[1]*x[2]^(1)")
    assert M_of_h(h, 1) == Word(((1, 1),), ((0, 1),))
    with pytest.raises(ValueError):
        M_of_h(Polynomial(), 1)


def test_word_order_prefers_weight():
    o = word_order(1)
    assert o.compare(next(iter(parse("x[1]^(1)*x[2]").terms)), next(iter(parse("x[1]^2*x[2]^2").terms))) < 0
    assert o.compare(next(iter(parse("x[1]^(1)*x[2]").terms)), next(iter(parse("x[1]*x[2]").terms))) > 0


def test_straighten_examples():
    assert straighten_cstar(parse("x[1]^(1)*x[2] + x[1]*x[2]^(1)"), 1) == [(fm((1, 1, 1)), 1)]
    std = fm((1, 1, 0), (2, 2, 0))
    assert straighten_cstar(pstar(std, 2), 2) == [(std, 1)]
    assert straighten_cstar(pstar(fm((1, 2, 0), (2, 1, 0)), 2), 2) == [(std, 1)]


def test_straighten_rejects_non_invariant():
    with pytest.raises(NotInvariantError) as exc:
        straighten_cstar(parse("x[1]^(1)*x[2]"), 1)
    assert exc.value.constraint == (0, 1)


@settings(max_examples=200, deadline=None, derandomize=True)
@given(st.integers(0, 10**6))
def test_L_is_admissible(seed):
    rng = random.Random(seed)
    m = random_standard(rng, rng.randint(1, 3))
    w = L_of_w(m)
    assert is_admissible(w)
    assert fmono_of_word(w) == m


@settings(max_examples=200, deadline=None, derandomize=True)
@given(st.integers(0, 10**6))
def test_leading_word_oracle(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    m = random_standard(rng, n)
    assert M_of_h(pstar(m, n), n) == L_of_w(m)


def _admissible_words(n, r, maxk):
    letters = [Letter(k, i) for k in range(maxk + 1) for i in range(1, n + 1)]
    for u in combinations_with_replacement(letters, r):
        for v in combinations_with_replacement(letters, r):
            w = Word(u, v)
            if all(a.order + b.order <= maxk for a, b in zip(u, v)) and is_admissible(w):
                yield w


@pytest.mark.parametrize("n,r", [(1, 1), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3)])
def test_bijection_on_bounded_range(n, r):
    maxk = 3
    fms = [f for w in range(r * maxk + 1) for f in standard_fmonomials(n, r, w)
           if all(x.k <= maxk for x in f.factors)]
    images = {L_of_w(f) for f in fms}
    assert len(images) == len(fms)
    admissible = set(_admissible_words(n, r, maxk))
    assert admissible == images


@pytest.mark.parametrize("n,r,w", [(2, 2, 0), (2, 2, 2), (2, 3, 1), (2, 2, 4), (3, 2, 2), (2, 3, 3)])
def test_standard_images_independent(n, r, w):
    fms = standard_fmonomials(n, r, w)
    polys = [pstar(f, n) for f in fms]
    assert span_rank(polys) == len(polys)
    assert len({M_of_h(p, n) for p in polys}) == len(polys)


@settings(max_examples=200, deadline=None, derandomize=True)
@given(st.integers(0, 10**6))
def test_f11_multiplication_preserves_rank(seed):
    rng = random.Random(seed)
    n, r, w = rng.randint(1, 2), rng.randint(1, 2), rng.randint(0, 3)
    fms = standard_fmonomials(n, r, w)
    pick = rng.sample(fms, min(len(fms), rng.randint(1, 6)))
    polys = [pstar(f, n) for f in pick]
    f11 = pstar(fm((1, 1, 0)), n)
    assert span_rank([p * f11 for p in polys]) == span_rank(polys)


@settings(max_examples=200, deadline=None, derandomize=True)
@given(st.integers(0, 10**6))
def test_straighten_progress_and_soundness(seed):
    rng = random.Random(seed)
    n, r = rng.randint(1, 2), rng.randint(1, 3)
    w = rng.randint(0, 3)
    h = Polynomial()
    for _ in range(3):
        # arbitrary, often nonstandard, products of f-variables in one piece
        ks = [0] * r
        for _ in range(w):
            ks[rng.randrange(r)] += 1
        prod = FMonomial(tuple(FVar(rng.randint(1, n), rng.randint(1, n), k) for k in ks))
        h = h + pstar(prod, n) * rng.randint(-3, 3)
    if not h:
        return
    out = straighten_cstar(h, n)
    o = word_order(n)
    keys = [o.key(word_monomial(L_of_w(f), n)) for f, _ in out]
    assert all(a > b for a, b in zip(keys, keys[1:]))
    assert all(is_standard_fmono(f) for f, _ in out)
    assert sum((pstar(f, n) * c for f, c in out), Polynomial()) == h
