"""Action of ``g[t]/t^(m+1)`` (or a finite group) on jet coordinate rings.

Matrices act on the span of the base coordinate functions: a matrix ``A``
sends ``x_j`` to ``sum_k A[k][j] x_k``.  The Lie derivation ``xi t^r`` sends
``x_j^(i)`` to ``i!/(i-r)! (xi x_j)^(i-r)`` in raw variables and to
``(xi x_j)^[i-r]`` in divided powers (zero when ``r > i``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .diffring import JetRing, JetVariable, Monomial, Polynomial, graded_basis
from .errors import UnsupportedError
from .linalg import LinearSpan, kernel


def _num(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def _matrix(rows) -> tuple:
    return tuple(tuple(_num(v) for v in row) for row in rows)


def _zero(n):
    return [[0] * n for _ in range(n)]


def _identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _matmul(a, b):
    n = len(a)
    return tuple(
        tuple(_num(sum(a[i][k] * b[k][j] for k in range(n) if a[i][k] and b[k][j])) for j in range(n))
        for i in range(n)
    )


def _det(rows) -> Fraction:
    m = [[Fraction(v) for v in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] / m[c][c]
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def _columns(mat) -> tuple:
    n = len(mat)
    return tuple(tuple((k, mat[k][j]) for k in range(n) if mat[k][j]) for j in range(n))


def _is_diagonal(mat) -> bool:
    return all(not v for i, row in enumerate(mat) for j, v in enumerate(row) if i != j)


@dataclass(frozen=True)
class GroupActionSpec:
    """A reductive group acting linearly on ``dim`` coordinate functions.

    ``kind`` is ``"lie"`` (generators of the Lie algebra), ``"torus"`` (one
    diagonal generator built from a weight vector) or ``"finite"`` (group
    generators plus their closure ``elements``).  ``n``/``copies``/``duals``
    record the layout when the action is a classical one.
    """

    kind: str
    dim: int
    matrices: tuple
    weights: tuple = ()
    elements: tuple = ()
    n: int = 0
    copies: int = 0
    duals: int = 0
    family: str = ""
    _cols: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("lie", "torus", "finite"):
            raise ValueError(f"unknown action kind {self.kind!r}")
        for mat in self.matrices:
            if len(mat) != self.dim or any(len(r) != self.dim for r in mat):
                raise ValueError("matrix size does not match the number of coordinates")
        object.__setattr__(self, "_cols", tuple(_columns(a) for a in self.matrices))

    @property
    def group_size(self):
        return len(self.elements) if self.kind == "finite" else None

    def columns(self, xi: int):
        return self._cols[xi]


def lie(matrices, **meta) -> GroupActionSpec:
    mats = tuple(_matrix(a) for a in matrices)
    if not mats:
        raise ValueError("need at least one generator")
    return GroupActionSpec("lie", len(mats[0]), mats, **meta)


def torus(weights) -> GroupActionSpec:
    weights = tuple(int(w) for w in weights)
    n = len(weights)
    diag = tuple(tuple(weights[i] if i == j else 0 for j in range(n)) for i in range(n))
    return GroupActionSpec("torus", n, (diag,), weights=weights, family="torus")


def finite(generators, bound: int = 10_000) -> GroupActionSpec:
    """Finite matrix group; the closure is built breadth first."""
    gens = tuple(_matrix(g) for g in generators)
    if not gens:
        raise ValueError("need at least one generator")
    n = len(gens[0])
    for g in gens:
        if _det(g) == 0:
            raise ValueError("finite-group generators must be invertible")
    ident = _identity(n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = _matmul(g, a)
                if b not in seen:
                    seen.add(b)
                    if len(seen) > bound:
                        raise UnsupportedError(f"group closure exceeds {bound} elements")
                    nxt.append(b)
        frontier = nxt
    return GroupActionSpec("finite", n, gens, elements=tuple(sorted(seen)), family="finite")


# -- classical Lie algebras ---------------------------------------------------

def _unit(n, i, j, c=1):
    a = _zero(n)
    a[i][j] = c
    return a


def sl_matrices(n: int) -> list:
    mats = [_unit(n, i, j) for i in range(n) for j in range(n) if i != j]
    for i in range(n - 1):
        a = _zero(n)
        a[i][i], a[i + 1][i + 1] = 1, -1
        mats.append(a)
    return mats


def gl_matrices(n: int) -> list:
    return [_unit(n, i, j) for i in range(n) for j in range(n)]


def so_matrices(n: int) -> list:
    mats = []
    for i in range(n):
        for j in range(i + 1, n):
            a = _unit(n, i, j)
            a[j][i] = -1
            mats.append(a)
    return mats


def sp_matrices(n: int) -> list:
    """Transposes of a basis of ``sp_2n`` for the form ``J = [[0, I], [-I, 0]]``."""
    size = 2 * n
    mats = []
    for i in range(n):
        for j in range(n):
            a = _zero(size)
            a[i][j] = 1
            a[n + j][n + i] = -1
            mats.append(a)
    for i in range(n):
        for j in range(i, n):
            b = _zero(size)
            b[i][n + j] = 1
            b[j][n + i] = 1
            mats.append(b)
            c = _zero(size)
            c[n + i][j] = 1
            c[n + j][i] = 1
            mats.append(c)
    return [[list(r) for r in zip(*a)] for a in mats]


def block_action(mats, copies: int, duals: int = 0) -> list:
    """Stack ``A`` on each vector copy and ``-A^T`` on each dual copy."""
    n = len(mats[0])
    size = n * (copies + duals)
    out = []
    for a in mats:
        big = _zero(size)
        for c in range(copies + duals):
            off = c * n
            for k in range(n):
                for j in range(n):
                    v = a[k][j] if c < copies else -a[j][k]
                    if v:
                        big[off + k][off + j] = v
        out.append(big)
    return out


_LIE = {"sl": sl_matrices, "gl": gl_matrices, "so": so_matrices, "sp": sp_matrices}


def classical(family: str, n: int, copies: int, duals: int = 0) -> GroupActionSpec:
    """``family`` in ``sl``/``gl``/``so``/``sp``; ``sp`` uses ``2n`` coordinates."""
    if family not in _LIE:
        raise UnsupportedError(f"unknown classical family {family!r}")
    if family in ("so", "sp") and duals:
        raise UnsupportedError("dual copies only apply to sl and gl")
    if copies + duals < 1:
        raise ValueError("need at least one copy")
    mats = block_action(_LIE[family](n), copies, duals)
    return lie(mats, n=n, copies=copies, duals=duals, family=family)


def sl(n: int, copies: int, duals: int = 0) -> GroupActionSpec:
    return classical("sl", n, copies, duals)


def f_operator(spec: GroupActionSpec) -> tuple:
    """Matrix of ``X`` with ``X x_n = x_1`` on every vector copy."""
    if spec.family != "sl" or spec.duals:
        raise UnsupportedError("F reduction needs SL_n acting on copies of C^n")
    n = spec.n
    return _matrix(block_action([_unit(n, 0, n - 1)], spec.copies)[0])


# -- derivations ----------------------------------------------------------------

def _lam(i: int, r: int, divided: bool):
    if r > i:
        return 0
    if divided:
        return 1
    return factorial(i) // factorial(i - r)


def apply_derivation(ring: JetRing, cols, r: int, f: Polynomial) -> Polynomial:
    """``xi t^r`` for the matrix with sparse columns ``cols``."""
    out: dict = {}
    divided = ring.divided
    for mono, c in f.terms.items():
        for v, e in mono.factors:
            lam = _lam(v.order, r, divided)
            if not lam:
                continue
            col = cols[v.base]
            if not col:
                continue
            rest = mono / Monomial._raw(((v, 1),))
            o = v.order - r
            s = c * e * lam
            for k, a in col:
                m = rest * Monomial._raw(((JetVariable(k, o), 1),))
                nv = out.get(m, 0) + s * a
                if nv:
                    out[m] = nv
                else:
                    out.pop(m, None)
    return Polynomial._wrap(out)


def act(ring: JetRing, spec: GroupActionSpec, xi: int, r: int, f: Polynomial) -> Polynomial:
    if spec.kind == "finite":
        raise UnsupportedError("finite groups act by substitution, use act_finite")
    if r < 0 or (ring.truncation is not None and r > ring.truncation):
        raise ValueError("power of t outside 0..m")
    return apply_derivation(ring, spec.columns(xi), r, f)


def act_finite(ring: JetRing, spec: GroupActionSpec, g, f: Polynomial) -> Polynomial:
    if spec.kind != "finite":
        raise UnsupportedError("act_finite needs a finite group")
    cols = _columns(_matrix(g))
    forms: dict = {}

    def image(v: JetVariable) -> Polynomial:
        p = forms.get(v)
        if p is None:
            p = Polynomial({Monomial._raw(((JetVariable(k, v.order), 1),)): a for k, a in cols[v.base]})
            forms[v] = p
        return p

    out = Polynomial()
    for mono, c in f.terms.items():
        term = Polynomial.constant(c)
        for v, e in mono.factors:
            term = term * image(v) ** e
        out = out + term
    return out


def constraints(spec: GroupActionSpec, m: int, w: int):
    """``(xi, r)`` pairs whose kernels cut out the invariants of a weight-``w`` piece."""
    top = min(w, m)
    return [(xi, r) for xi in range(len(spec.matrices)) for r in range(top + 1)]


def check_invariant(ring: JetRing, spec: GroupActionSpec, f: Polynomial):
    """First violated ``(generator, r)`` pair, or None when ``f`` is invariant."""
    if spec.kind == "finite":
        for gi, g in enumerate(spec.matrices):
            if act_finite(ring, spec, g, f) != f:
                return (gi, 0)
        return None
    m = ring.truncation
    w = max((mono.weight for mono in f.terms), default=0)
    top = w if m is None else min(w, m)
    for xi in range(len(spec.matrices)):
        for r in range(top + 1):
            if apply_derivation(ring, spec.columns(xi), r, f):
                return (xi, r)
    return None


# -- invariant pieces -------------------------------------------------------------

def _kernel_span(basis, images, piece) -> LinearSpan:
    vecs = kernel(images)
    polys = [Polynomial({basis[c]: v for c, v in vec.items()}) for vec in vecs]
    return LinearSpan.from_polynomials(polys, piece=piece)


@lru_cache(maxsize=512)
def _invariant_vectors(ring: JetRing, spec: GroupActionSpec, d: int, w: int):
    m = ring.truncation
    basis = graded_basis(ring, d, w)
    if spec.kind == "finite":
        images = []
        for mono in basis:
            p = Polynomial.monomial(mono)
            img = {}
            for gi, g in enumerate(spec.matrices):
                for t, c in (act_finite(ring, spec, g, p) - p).terms.items():
                    img[(gi, t)] = c
            images.append(img)
        return tuple(_kernel_span(basis, images, (d, w, m)).vectors)
    diag = [xi for xi, a in enumerate(spec.matrices) if _is_diagonal(a)]
    if diag:
        def eig(mono, xi):
            a = spec.matrices[xi]
            return sum(a[v.base][v.base] * e for v, e in mono.factors)

        basis = [mono for mono in basis if all(eig(mono, xi) == 0 for xi in diag)]
    pairs = [(xi, r) for xi, r in constraints(spec, m, w) if not (r == 0 and xi in diag)]
    images = []
    for mono in basis:
        p = Polynomial.monomial(mono)
        img = {}
        for xi, r in pairs:
            for t, c in apply_derivation(ring, spec.columns(xi), r, p).terms.items():
                img[(xi, r, t)] = c
        images.append(img)
    return tuple(_kernel_span(basis, images, (d, w, m)).vectors)


def _effective(ring: JetRing, m: int, w: int) -> JetRing:
    return ring.with_truncation(min(m, w))


def invariant_piece(ring: JetRing, spec: GroupActionSpec, m: int, d: int, w: int) -> LinearSpan:
    """Basis of the ``G_m``-invariants in the ``(d, w)`` piece of ``O(V_m)``."""
    if spec.dim != ring.num_base_vars:
        raise ValueError("action and ring disagree on the number of coordinates")
    vecs = _invariant_vectors(_effective(ring, m, w), spec, d, w)
    return LinearSpan((d, w, m), list(vecs))


def sl_reduce_invariant_piece(ring: JetRing, spec: GroupActionSpec, m: int, d: int, w: int) -> LinearSpan:
    """Invariants as ``ker F`` on the span of standard products of determinants."""
    from .smt.sln import P_of_W, standard_tableaux

    n, copies = spec.n, spec.copies
    fmat = f_operator(spec)
    if d % n:
        return LinearSpan((d, w, m), [])
    top = min(m, w)
    div = ring.with_truncation(top).with_divided(True)
    cols = _columns(fmat)
    tabs = standard_tableaux(n, copies, d // n, w, top)
    polys = [P_of_W(W) for W in tabs]
    if top >= 1:
        images = [apply_derivation(div, cols, 1, p).terms for p in polys]
        vecs = kernel(images)
        polys = [sum((polys[c] * v for c, v in vec.items()), Polynomial()) for vec in vecs]
    if not ring.divided:
        from .diffring import to_raw

        polys = [to_raw(p) for p in polys]
    return LinearSpan.from_polynomials(polys, piece=(d, w, m))
