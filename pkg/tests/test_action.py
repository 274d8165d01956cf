import random
from itertools import product
from math import factorial

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from jetinv import action
from jetinv.diffring import JetRing, JetVariable, Monomial, Polynomial, derive, graded_basis, parse, to_raw
from jetinv.errors import UnsupportedError
from jetinv.smt.sln import det_symbol


def rand_poly(rng, nbase, top, nterms=3, maxdeg=3):
    terms = {}
    for _ in range(nterms):
        vs = [JetVariable(rng.randrange(nbase), rng.randint(0, top)) for _ in range(rng.randint(0, maxdeg))]
        mono = Monomial((v, 1) for v in vs)
        terms[mono] = terms.get(mono, 0) + rng.randint(-4, 4)
    return Polynomial(terms)


# -- pinned examples -----------------------------------------------------------------

def test_torus_weight_zero_monomial():
    spec = action.torus([2, -3])
    assert not action.act(JetRing(2), spec, 0, 0, parse("x[1]^3*x[2]^2"))


def test_lambda_coefficients():
    spec = action.lie([[[1]]])
    ring = JetRing(1)
    assert action.act(ring, spec, 0, 2, parse("x[1]^(3)")) == parse("6*x[1]^(1)")
    assert not action.act(ring, spec, 0, 1, parse("x[1]"))
    div = JetRing(1, divided=True)
    assert action.act(div, spec, 0, 2, parse("x[1]^(3)")) == parse("x[1]^(1)")


def test_finite_substitution():
    spec = action.finite([[[-1]]])
    ring = JetRing(1, 1)
    assert spec.group_size == 2
    assert action.act_finite(ring, spec, [[-1]], parse("x[1]*x[1]^(1)")) == parse("x[1]*x[1]^(1)")
    assert action.act_finite(ring, spec, [[-1]], parse("x[1]^(1)")) == parse("-x[1]^(1)")
    assert action.act_finite(ring, spec, [[1]], parse("x[1]^(1)")) == parse("x[1]^(1)")
    with pytest.raises(UnsupportedError):
        action.act(ring, spec, 0, 0, parse("x[1]"))


def test_finite_closure_bound():
    rot = [[0, -1], [1, 0]]
    assert action.finite([rot]).group_size == 4
    with pytest.raises(UnsupportedError):
        action.finite([[[2]]], bound=50)


def test_sign_group_dims():
    spec = action.finite([[[-1]]])
    ring = JetRing(1, 1)
    got = [action.invariant_piece(ring, spec, 1, 2, w) for w in range(3)]
    assert [s.dim for s in got] == [1, 1, 1]
    assert got[0].vectors == [parse("x[1]^2")]
    assert got[1].vectors == [parse("x[1]*x[1]^(1)")]
    assert got[2].vectors == [parse("x[1]^(1)^2")]


def test_torus_pair_m0():
    s = action.invariant_piece(JetRing(2, 0), action.torus([1, -1]), 0, 2, 0)
    assert s.vectors == [parse("x[1]*x[2]")]


def test_torus_2_3_piece():
    ring = JetRing(2, 1)
    spec = action.torus([2, -3])
    s = action.invariant_piece(ring, spec, 1, 5, 2)
    w = parse("x[1]") * parse("3*x[2]*x[1]^(1) + 2*x[1]*x[2]^(1)") ** 2
    assert s.contains(w)
    assert s.dim == dense_invariant_dim(ring, spec, 5, 2)


def test_sl2_small_pieces():
    spec = action.sl(2, 2)
    s = action.invariant_piece(JetRing(4, 0), spec, 0, 2, 0)
    assert s.dim == 1
    assert s.contains(det_symbol(2, ((1, 0), (2, 0))))
    assert action.invariant_piece(JetRing(2, 1), action.sl(2, 1), 1, 2, 1).dim == 0


def test_check_invariant_reports_constraint():
    spec = action.torus([1, -1])
    assert action.check_invariant(JetRing(2), spec, parse("x[1]^(1)*x[2] + x[1]*x[2]^(1)")) is None
    assert action.check_invariant(JetRing(2), spec, parse("x[1]^(1)*x[2]")) == (0, 1)


def test_classical_generator_counts():
    assert len(action.sl_matrices(3)) == 8
    assert len(action.gl_matrices(3)) == 9
    assert len(action.so_matrices(4)) == 6
    assert len(action.sp_matrices(2)) == 10


def test_sp_form_is_preserved():
    # every generator X satisfies X^T J + J X = 0 for the standard symplectic form
    for n in (1, 2, 3):
        J = sympy.zeros(2 * n)
        for i in range(n):
            J[i, n + i], J[n + i, i] = 1, -1
        for a in action.sp_matrices(n):
            X = sympy.Matrix(a).T
            assert X.T * J + J * X == sympy.zeros(2 * n)


# -- sympy oracle ---------------------------------------------------------------------

def _sym(v):
    return sympy.Symbol(f"x{v.base}_{v.order}")


def _to_sympy(f):
    return sum(sympy.Rational(c) * sympy.Mul(*[_sym(v) ** e for v, e in m.factors]) for m, c in f.terms.items())


def sympy_act(spec, xi, r, f, ring):
    """``xi t^r`` as a sum of partial derivatives."""
    a = spec.matrices[xi]
    expr = _to_sympy(f)
    top = ring.truncation
    out = 0
    for b in range(spec.dim):
        for i in range(r, (top if top is not None else 6) + 1):
            lam = 1 if ring.divided else factorial(i) // factorial(i - r)
            image = sum(a[k][b] * _sym(JetVariable(k, i - r)) for k in range(spec.dim))
            out += lam * image * sympy.diff(expr, _sym(JetVariable(b, i)))
    return sympy.expand(out)


def dense_invariant_dim(ring, spec, d, w):
    basis = graded_basis(ring, d, w)
    top = min(w, ring.truncation)
    rows = {}
    for c, mono in enumerate(basis):
        for xi, r in product(range(len(spec.matrices)), range(top + 1)):
            img = sympy.Poly(sympy_act(spec, xi, r, Polynomial.monomial(mono), ring), *_gens(ring))
            for mon, coeff in img.terms():
                rows.setdefault((xi, r, mon), {})[c] = coeff
    if not rows:
        return len(basis)
    mat = sympy.Matrix([[row.get(c, 0) for c in range(len(basis))] for row in rows.values()])
    return len(basis) - mat.rank()


def _gens(ring):
    return [_sym(JetVariable(b, k)) for b in range(ring.num_base_vars) for k in range(ring.truncation + 1)]


@pytest.mark.parametrize("spec,nbase", [
    (action.torus([1, -1]), 2),
    (action.torus([2, -3]), 2),
    (action.sl(2, 1), 2),
    (action.sl(2, 2), 4),
    (action.classical("so", 2, 2), 4),
    (action.classical("gl", 1, 1, 1), 2),
])
def test_invariant_dims_against_sympy(spec, nbase):
    for m, d, w in product(range(3), range(1, 4), range(3)):
        ring = JetRing(nbase, m)
        if len(graded_basis(ring, d, w)) > 60:
            continue
        assert action.invariant_piece(ring, spec, m, d, w).dim == dense_invariant_dim(
            ring.with_truncation(min(m, w)), spec, d, w), (m, d, w)


def test_sl_reduce_agrees_with_direct_kernel():
    spec = action.sl(2, 2)
    for m in range(4):
        ring = JetRing(4, m)
        for d in range(1, 5):
            for w in range(4):
                a = action.invariant_piece(ring, spec, m, d, w)
                b = action.sl_reduce_invariant_piece(ring, spec, m, d, w)
                assert a == b, (m, d, w)


# -- properties -----------------------------------------------------------------------

SPECS = [action.sl(2, 2), action.torus([1, 2, -3]), action.classical("sp", 1, 2), action.classical("gl", 2, 1, 1)]


@settings(max_examples=200, deadline=None, derandomize=True)
@given(st.integers(0, 10**6))
def test_derivation_law(seed):
    rng = random.Random(seed)
    spec = rng.choice(SPECS)
    ring = JetRing(spec.dim, rng.choice([None, 2, 3]), divided=rng.random() < 0.5)
    top = 3 if ring.truncation is None else ring.truncation
    f, g = rand_poly(rng, spec.dim, top), rand_poly(rng, spec.dim, top)
    xi, r = rng.randrange(len(spec.matrices)), rng.randint(0, top)
    lhs = action.act(ring, spec, xi, r, f * g)
    assert lhs == action.act(ring, spec, xi, r, f) * g + f * action.act(ring, spec, xi, r, g)


@settings(max_examples=200, deadline=None, derandomize=True)
@given(st.integers(0, 10**6))
def test_weight_shift(seed):
    rng = random.Random(seed)
    spec = rng.choice(SPECS)
    ring = JetRing(spec.dim)
    d, w, r = rng.randint(1, 3), rng.randint(0, 3), rng.randint(0, 3)
    basis = graded_basis(ring, d, w)
    f = Polynomial({rng.choice(basis): 1})
    img = action.act(ring, spec, rng.randrange(len(spec.matrices)), r, f)
    if r > w:
        assert not img
    elif img:
        assert img.grading() == (d, w - r)


@settings(max_examples=200, deadline=None, derandomize=True)
@given(st.integers(0, 10**6))
def test_d_equivariance_r0(seed):
    rng = random.Random(seed)
    spec = rng.choice(SPECS)
    ring = JetRing(spec.dim, divided=rng.random() < 0.5)
    f = rand_poly(rng, spec.dim, 3)
    xi = rng.randrange(len(spec.matrices))
    assert action.act(ring, spec, xi, 0, derive(ring, f)) == derive(ring, action.act(ring, spec, xi, 0, f))


@settings(max_examples=200, deadline=None, derandomize=True)
@given(st.integers(0, 10**6))
def test_commutator_with_d(seed):
    # raw variables: [xi t^r, D] = r xi t^(r-1)
    rng = random.Random(seed)
    spec = rng.choice(SPECS)
    ring = JetRing(spec.dim)
    f = rand_poly(rng, spec.dim, 3)
    xi, r = rng.randrange(len(spec.matrices)), rng.randint(1, 3)
    lhs = action.act(ring, spec, xi, r, derive(ring, f)) - derive(ring, action.act(ring, spec, xi, r, f))
    assert lhs == action.act(ring, spec, xi, r - 1, f) * r


@settings(max_examples=200, deadline=None, derandomize=True)
@given(st.integers(0, 10**6))
def test_divided_and_raw_actions_agree(seed):
    rng = random.Random(seed)
    spec = rng.choice(SPECS)
    f = rand_poly(rng, spec.dim, 3)
    xi, r = rng.randrange(len(spec.matrices)), rng.randint(0, 3)
    raw = action.act(JetRing(spec.dim), spec, xi, r, to_raw(f))
    div = action.act(JetRing(spec.dim, divided=True), spec, xi, r, f)
    assert raw == to_raw(div)
