"""Tableau calculus for ``l`` copies of ``C^n`` under ``SL_n``.

Everything here lives in divided-power variables ``x_i^(j,k) = D^k x_i^(j,0) / k!``
stored as base index ``(j-1)*n + (i-1)`` and order ``k``.  A pair
``omega = (j, k)`` is 1-based in ``j``; pairs compare by ``(k, j)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

from ..diffring import JetRing, JetVariable, Monomial, Polynomial, SlnOrder, iter_derive
from ..errors import InternalError, NotInvariantError


def pair_key(omega):
    j, k = omega
    return (k, j)


def _sorted_pairs(pairs):
    return tuple(sorted(pairs, key=pair_key))


def variable(n: int, i: int, omega) -> JetVariable:
    """``x_i^omega`` with ``i`` 1-based."""
    j, k = omega
    return JetVariable((j - 1) * n + (i - 1), k)


def pair_of(n: int, v: JetVariable):
    j, i = divmod(v.base, n)
    return i + 1, (j + 1, v.order)


def _strictly_increasing(row) -> bool:
    return all(pair_key(a) < pair_key(b) for a, b in zip(row, row[1:]))


@dataclass(frozen=True)
class TableauW:
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(tuple(p) for p in r) for r in self.rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("all rows of a tableau have n entries")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def weight(self) -> int:
        return sum(k for r in self.rows for _, k in r)

    def render(self) -> str:
        return "\n".join(" ".join(f"({j},{k})" for j, k in r) for r in self.rows)

    @classmethod
    def parse(cls, text: str) -> "TableauW":
        rows = []
        for line in text.strip().splitlines():
            cells = line.replace(")", ") ").split()
            rows.append(tuple(tuple(int(x) for x in c.strip("()").split(",")) for c in cells if c))
        return cls(tuple(rows))


@dataclass(frozen=True)
class TableauY:
    """``q`` two-entry rows followed by ``r`` one-entry rows, all with ``k > 0``."""

    pairs: tuple
    singles: tuple

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((tuple(a), tuple(b)) for a, b in self.pairs))
        object.__setattr__(self, "singles", tuple(tuple(a) for a in self.singles))
        for p in [x for r in self.pairs for x in r] + list(self.singles):
            if p[1] <= 0:
                raise ValueError("entries of a Y tableau have positive weight")


def _columns_nondecreasing(cols) -> bool:
    return all(pair_key(a) <= pair_key(b) for c in cols for a, b in zip(c, c[1:]))


def is_standard_tableau(t) -> bool:
    if isinstance(t, TableauW):
        if not all(_strictly_increasing(r) for r in t.rows):
            return False
        return _columns_nondecreasing(list(zip(*t.rows)))
    if isinstance(t, TableauY):
        if not all(_strictly_increasing(r) for r in t.pairs):
            return False
        first = [a for a, _ in t.pairs] + list(t.singles)
        second = [b for _, b in t.pairs]
        return _columns_nondecreasing([first, second])
    raise TypeError("expected a TableauW or TableauY")


def _perm_sign(p) -> int:
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@lru_cache(maxsize=None)
def _signed_perms(n: int):
    return tuple((p, _perm_sign(p)) for p in permutations(range(n)))


@lru_cache(maxsize=65536)
def det_symbol(n: int, omegas: tuple) -> Polynomial:
    """``[x^omega_1, ..., x^omega_n]``: column ``t`` is the vector ``x^omega_t``."""
    omegas = tuple(tuple(o) for o in omegas)
    if len(omegas) != n:
        raise ValueError("a determinant needs n columns")
    terms = {}
    for p, s in _signed_perms(n):
        mono = Monomial((variable(n, p[t] + 1, omegas[t]), 1) for t in range(n))
        terms[mono] = terms.get(mono, 0) + s
    return Polynomial(terms)


def P_of_W(W: TableauW) -> Polynomial:
    out = Polynomial.constant(1)
    for row in W.rows:
        out = out * det_symbol(W.n, row)
    return out


def Q_of_W(W: TableauW) -> Monomial:
    n = W.n
    return Monomial((variable(n, t + 1, row[t]), 1) for row in W.rows for t in range(n))


_ORDERS: dict = {}


def order(n: int) -> SlnOrder:
    o = _ORDERS.get(n)
    if o is None:
        o = _ORDERS[n] = SlnOrder(n)
    return o


def lowest_monomial(h: Polynomial, n: int) -> Monomial:
    if not h:
        raise ValueError("the zero polynomial has no lowest monomial")
    return order(n).min(h.terms)


def tableau_of(mono: Monomial, n: int) -> TableauW:
    """The unique tableau with nondecreasing columns whose Q is ``mono``."""
    cols = [[] for _ in range(n)]
    for v, e in mono.factors:
        i, omega = pair_of(n, v)
        cols[i - 1].extend([omega] * e)
    s = len(cols[0])
    if any(len(c) != s for c in cols):
        raise NotInvariantError(f"monomial is not a product of determinant leading terms: {mono!r}")
    cols = [sorted(c, key=pair_key) for c in cols]
    return TableauW(tuple(tuple(cols[t][r] for t in range(n)) for r in range(s)))


# -- derivatives of base determinants ------------------------------------------

def arc_ring(n: int, copies: int) -> JetRing:
    return JetRing(n * copies, None, divided=True)


@lru_cache(maxsize=65536)
def derived_det(n: int, js: tuple, k: int) -> Polynomial:
    """``D^k [x^(j_1,0), ..., x^(j_n,0)]``."""
    base = det_symbol(n, tuple((j, 0) for j in js))
    ring = JetRing(n * max(js), None, divided=True)
    return iter_derive(ring, base, k)


def lowest_term_shift(js, k: int) -> tuple:
    """Pairs whose determinant has the same lowest term as ``D^k [j_1..j_n]``."""
    n = len(js)
    a, b = divmod(k, n)
    js = sorted(js)
    return tuple((j, a) for j in js[b:]) + tuple((j, a + 1) for j in js[:b])


def det_lowest_term_holds(n: int, omegas) -> bool:
    omegas = _sorted_pairs(omegas)
    expected = Monomial((variable(n, t + 1, omegas[t]), 1) for t in range(n))
    return lowest_monomial(det_symbol(n, omegas), n) == expected


def derived_det_lowest_term_holds(n: int, js, k: int) -> bool:
    js = tuple(sorted(js))
    lhs = lowest_monomial(derived_det(n, js, k), n)
    return lhs == lowest_monomial(det_symbol(n, lowest_term_shift(js, k)), n)


def row_condition(row) -> bool:
    """The last entry, lowered by one, must lie below the first entry."""
    j, k = row[-1]
    if k == 0:
        return True
    return pair_key((j, k - 1)) < pair_key(row[0])


def row_generator(row):
    """``(j_1 < ... < j_n, k)`` for a row satisfying :func:`row_condition`."""
    js = tuple(sorted(j for j, _ in row))
    if len(set(js)) != len(js):
        raise NotInvariantError(f"row {row} repeats a copy index")
    return js, sum(k for _, k in row)


# -- enumeration ----------------------------------------------------------------

def _rows(n, copies, top):
    pairs = sorted(((j, k) for j in range(1, copies + 1) for k in range(top + 1)), key=pair_key)
    return [r for r in combinations(pairs, n)]


def standard_tableaux(n: int, copies: int, s: int, w: int, top: int) -> list:
    """Standard tableaux with ``s`` rows, total weight ``w``, orders ``<= top``."""
    if s == 0:
        return [TableauW(())] if w == 0 else []
    rows = [(r, sum(k for _, k in r)) for r in _rows(n, copies, min(top, w))]
    keyed = [(tuple(pair_key(p) for p in r), r, wt) for r, wt in rows if wt <= w]
    out = []

    def rec(prev, left, acc):
        if len(acc) == s:
            if left == 0:
                out.append(TableauW(tuple(acc)))
            return
        for key, r, wt in keyed:
            if wt > left:
                continue
            if prev is not None and any(a > b for a, b in zip(prev, key)):
                continue
            acc.append(r)
            rec(key, left - wt, acc)
            acc.pop()

    rec(None, w, [])
    return out


# -- express as pullback ----------------------------------------------------------

@dataclass(frozen=True)
class DetProduct:
    """``prod D^k [j_1..j_n]`` with factors sorted."""

    factors: tuple

    def polynomial(self, n: int) -> Polynomial:
        out = Polynomial.constant(1)
        for js, k in self.factors:
            out = out * derived_det(n, js, k)
        return out

    def render(self) -> str:
        return " * ".join(f"(det {' '.join(map(str, js))}, k={k})" for js, k in self.factors)


def express_as_pullback_sln(h: Polynomial, n: int, copies: int, check=True, max_steps=100_000):
    """Write an invariant ``h`` (divided powers) as a combination of products of ``D^k`` determinants.

    Returns a list of ``(DetProduct, coefficient)``.  Each step matches the
    lowest term of ``h``; the lowest term strictly increases until ``h``
    vanishes.
    """
    if check:
        from ..action import check_invariant, sl

        bad = check_invariant(arc_ring(n, copies), sl(n, copies), h)
        if bad is not None:
            raise NotInvariantError(f"input is not invariant: constraint {bad} fails", bad)
    o = order(n)
    out = []
    rest = h
    prev = None
    for _ in range(max_steps):
        if not rest:
            break
        low = o.min(rest.terms)
        if prev is not None and o.key(low) <= o.key(prev):
            raise InternalError("lowest term did not increase")
        prev = low
        W = tableau_of(low, n)
        factors = []
        for row in W.rows:
            if not _strictly_increasing(row) or not row_condition(row):
                raise NotInvariantError(f"lowest term {low!r} is not of invariant shape")
            factors.append(row_generator(row))
        prod = DetProduct(tuple(sorted(factors)))
        p = prod.polynomial(n)
        c = p.terms.get(low)
        if not c:
            raise InternalError("product of determinants misses the lowest term")
        coeff = Fraction(rest.terms[low]) / c
        if coeff.denominator == 1:
            coeff = coeff.numerator
        rest = rest - p * coeff
        out.append((prod, coeff))
    else:
        raise InternalError("straightening did not terminate")
    if check:
        total = Polynomial()
        for prod, c in out:
            total = total + prod.polynomial(n) * c
        if total != h:
            raise InternalError("re-expansion does not reproduce the input")
    return out
