"""Word calculus for ``C*`` acting with weights ``+1`` (``x_1..x_n``) and ``-1`` (``y_1..y_n``).

Variables are raw: ``x_i^(k) = D^k x_i``.  In a jet ring with ``2n`` base
coordinates ``x_i`` is base ``i-1`` and ``y_j`` is base ``n+j-1``.  Indices
are 1-based throughout this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import NamedTuple

from ..diffring import CstarWordOrder, JetRing, JetVariable, Monomial, Polynomial
from ..errors import InternalError, NotInvariantError


class Letter(NamedTuple):
    """A variable ``x_index^(order)`` or ``y_index^(order)``; compares by (order, index)."""

    order: int
    index: int


class FVar(NamedTuple):
    """``f_ij^(k) = D^k f_ij`` where ``f_ij`` pulls back to ``x_i y_j``."""

    i: int
    j: int
    k: int

    def render(self) -> str:
        return f"f[{self.i},{self.j}]^({self.k})"


def f_leq(a: FVar, b: FVar) -> bool:
    if a.k + 2 <= b.k:
        return True
    if a.k + 1 == b.k:
        return a.i <= b.i or a.j <= b.j
    if a.k == b.k:
        return a.i <= b.i and a.j <= b.j
    return False


def _chain_key(f: FVar):
    return (f.k, f.i, f.j)


@dataclass(frozen=True)
class FMonomial:
    """A product of f-variables, kept sorted by (k, i, j)."""

    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(sorted((FVar(*f) for f in self.factors), key=_chain_key)))

    @property
    def degree(self) -> int:
        return 2 * len(self.factors)

    @property
    def weight(self) -> int:
        return sum(f.k for f in self.factors)

    def render(self) -> str:
        return "*".join(f.render() for f in self.factors) or "1"


def is_standard_fmono(fm: FMonomial) -> bool:
    """A chain under the partial order exists iff the (k, i, j) sorted list is one."""
    fs = fm.factors
    return all(f_leq(a, b) for a, b in zip(fs, fs[1:]))


@dataclass(frozen=True)
class Word:
    u: tuple
    v: tuple

    def __post_init__(self):
        u = tuple(Letter(*x) for x in self.u)
        v = tuple(Letter(*y) for y in self.v)
        if len(u) != len(v):
            raise ValueError("a word has as many x letters as y letters")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    def render(self) -> str:
        xs = "*".join(f"x{a.index}^({a.order})" for a in self.u)
        ys = "*".join(f"y{b.index}^({b.order})" for b in self.v)
        return f"{xs} | {ys}"


def is_standard_word(word: Word) -> bool:
    return list(word.u) == sorted(word.u) and list(word.v) == sorted(word.v)


def is_admissible(word: Word) -> bool:
    if not is_standard_word(word):
        return False
    if word.v and word.v[0].order != 0:
        return False
    return all(Letter(a.order + 1, a.index) > b for a, b in zip(word.v, word.v[1:]))


def word_monomial(word: Word, n: int) -> Monomial:
    fac = [(JetVariable(a.index - 1, a.order), 1) for a in word.u]
    fac += [(JetVariable(n + b.index - 1, b.order), 1) for b in word.v]
    return Monomial(fac)


def monomial_word(mono: Monomial, n: int) -> Word:
    u, v = CstarWordOrder(n).split(mono)
    return Word(tuple(Letter(o, i + 1) for o, i in u), tuple(Letter(o, i + 1) for o, i in v))


def L_of_w(fm: FMonomial) -> Word:
    """The admissible word matched to a standard f-monomial."""
    if not is_standard_fmono(fm):
        raise ValueError(f"{fm.render()} is not standard")
    u, v = [], []
    prev_j, prev_b = None, None
    for f in fm.factors:
        if prev_j is None:
            b = 0
        else:
            b = prev_b if prev_j <= f.j else prev_b + 1
        if b > f.k:
            raise InternalError("no admissible letter for a standard factor")
        u.append(Letter(f.k - b, f.i))
        v.append(Letter(b, f.j))
        prev_j, prev_b = f.j, b
    return Word(tuple(u), tuple(v))


def fmono_of_word(word: Word) -> FMonomial:
    """Inverse of :func:`L_of_w` on admissible words."""
    if not is_admissible(word):
        raise ValueError("word is not admissible")
    fm = FMonomial(tuple(FVar(a.index, b.index, a.order + b.order) for a, b in zip(word.u, word.v)))
    if not is_standard_fmono(fm) or L_of_w(fm) != word:
        raise ValueError("admissible word has no standard preimage")
    return fm


_ORDERS: dict = {}


def word_order(n: int) -> CstarWordOrder:
    o = _ORDERS.get(n)
    if o is None:
        o = _ORDERS[n] = CstarWordOrder(n)
    return o


def M_of_h(h: Polynomial, n: int) -> Word:
    """The greatest word of ``h``."""
    if not h:
        raise ValueError("the zero polynomial has no leading word")
    return monomial_word(word_order(n).max(h.terms), n)


@lru_cache(maxsize=65536)
def pstar_var(f: FVar, n: int) -> Polynomial:
    """``D^k (x_i y_j)`` expanded by Leibniz."""
    terms = {}
    for a in range(f.k + 1):
        mono = Monomial([(JetVariable(f.i - 1, a), 1), (JetVariable(n + f.j - 1, f.k - a), 1)])
        terms[mono] = terms.get(mono, 0) + comb(f.k, a)
    return Polynomial(terms)


def pstar(fm: FMonomial, n: int) -> Polynomial:
    out = Polynomial.constant(1)
    for f in fm.factors:
        out = out * pstar_var(f, n)
    return out


def standard_fmonomials(n: int, r: int, w: int) -> list:
    """Standard f-monomials with ``r`` factors and total order ``w``."""
    fvars = sorted((FVar(i, j, k) for i in range(1, n + 1) for j in range(1, n + 1) for k in range(w + 1)),
                   key=_chain_key)
    out = []

    def rec(start, left, acc):
        if len(acc) == r:
            if left == 0:
                out.append(FMonomial(tuple(acc)))
            return
        for idx in range(start, len(fvars)):
            f = fvars[idx]
            if f.k > left:
                break
            if acc and not f_leq(acc[-1], f):
                continue
            acc.append(f)
            rec(idx, left - f.k, acc)
            acc.pop()

    rec(0, w, [])
    return out


def straighten_cstar(h: Polynomial, n: int, check=True, max_steps=100_000):
    """Write a ``C*_infinity``-invariant ``h`` as ``sum c * p*(standard f-monomial)``.

    Each step removes the leading word, which strictly decreases.
    """
    if check:
        from ..action import check_invariant, torus

        spec = torus([1] * n + [-1] * n)
        bad = check_invariant(JetRing(2 * n), spec, h)
        if bad is not None:
            raise NotInvariantError(f"input is not invariant: constraint {bad} fails", bad)
    o = word_order(n)
    out = []
    rest = h
    prev = None
    for _ in range(max_steps):
        if not rest:
            break
        top = o.max(rest.terms)
        if prev is not None and o.key(top) >= o.key(prev):
            raise InternalError("leading word did not decrease")
        prev = top
        word = monomial_word(top, n)
        try:
            fm = fmono_of_word(word)
        except ValueError as exc:
            raise InternalError(f"leading word {word.render()} is not admissible") from exc
        p = pstar(fm, n)
        coeff = Fraction(rest.terms[top]) / p.terms[top]
        if coeff.denominator == 1:
            coeff = coeff.numerator
        rest = rest - p * coeff
        out.append((fm, coeff))
    else:
        raise InternalError("straightening did not terminate")
    if check:
        total = Polynomial()
        for fm, c in out:
            total = total + pstar(fm, n) * c
        if total != h:
            raise InternalError("re-expansion does not reproduce the input")
    return out
