"""Sparse differential polynomial rings over jet variables.

A jet variable ``x[b]^(k)`` is the ``k``-th derivative of base coordinate ``b``.
Polynomials carry exact rational coefficients (``int`` or ``Fraction``) and are
bi-graded by degree and weight, where ``wt(x[b]^(k)) = k``.

Two normalizations of the variables are supported by :class:`JetRing`:

* raw: ``D x^(k) = x^(k+1)``
* divided powers: ``x^[k] = D^k x / k!`` so that ``D x^[k] = (k+1) x^[k+1]``

Base indices are 0-based internally and 1-based in the text syntax.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product
from math import factorial
from typing import Iterable, NamedTuple


class JetVariable(NamedTuple):
    base: int
    order: int


class Monomial:
    """Immutable product of jet variables.

    ``factors`` is a tuple of ``(JetVariable, exponent)`` pairs sorted by
    variable (base index, then order); the empty tuple is the unit monomial.
    """

    __slots__ = ("factors", "degree", "weight", "_hash")

    def __init__(self, factors: Iterable = ()):
        merged: dict = {}
        for var, e in factors:
            if not isinstance(var, JetVariable):
                var = JetVariable(*var)
            if e < 0 or var.order < 0 or var.base < 0:
                raise ValueError(f"bad factor {var}^{e}")
            if e:
                merged[var] = merged.get(var, 0) + e
        self._set(tuple(sorted(merged.items())))

    def _set(self, factors):
        self.factors = factors
        self.degree = sum(e for _, e in factors)
        self.weight = sum(v.order * e for v, e in factors)
        self._hash = hash(factors)

    @classmethod
    def _raw(cls, factors) -> "Monomial":
        # factors already sorted, merged and positive
        m = cls.__new__(cls)
        m._set(factors)
        return m

    @classmethod
    def of(cls, *variables) -> "Monomial":
        """Monomial from a list of variables, repeated for powers."""
        return cls((JetVariable(*v), 1) for v in variables)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.factors == other.factors

    def __repr__(self):
        return f"Monomial({render_monomial(self)})"

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not other.factors:
            return self
        if not self.factors:
            return other
        d = dict(self.factors)
        for v, e in other.factors:
            d[v] = d.get(v, 0) + e
        return Monomial._raw(tuple(sorted(d.items())))

    def divides(self, other: "Monomial") -> bool:
        d = dict(other.factors)
        return all(d.get(v, 0) >= e for v, e in self.factors)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        d = dict(self.factors)
        for v, e in other.factors:
            left = d.get(v, 0) - e
            if left < 0:
                raise ValueError(f"{other!r} does not divide {self!r}")
            if left:
                d[v] = left
            else:
                del d[v]
        return Monomial._raw(tuple(sorted(d.items())))

    def exchange(self, old: JetVariable, new: JetVariable) -> "Monomial":
        """Divide by one power of ``old`` and multiply by ``new``."""
        d = dict(self.factors)
        e = d[old]
        if e == 1:
            del d[old]
        else:
            d[old] = e - 1
        d[new] = d.get(new, 0) + 1
        return Monomial._raw(tuple(sorted(d.items())))

    def variables(self):
        return [v for v, _ in self.factors]

    def expanded(self):
        """Variables repeated according to their exponents."""
        out = []
        for v, e in self.factors:
            out.extend([v] * e)
        return out

    def max_order(self) -> int:
        return max((v.order for v, _ in self.factors), default=0)


ONE = Monomial()


class Polynomial:
    """Sparse polynomial: a map from :class:`Monomial` to a nonzero coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms is None:
            self.terms = {}
        elif isinstance(terms, dict):
            self.terms = {m: c for m, c in terms.items() if c != 0}
        else:
            acc: dict = {}
            for m, c in terms:
                _acc(acc, m, c)
            self.terms = acc
        if any(isinstance(c, float) for c in self.terms.values()):
            raise TypeError("coefficients must be exact rationals")

    @classmethod
    def _wrap(cls, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls({ONE: c})

    @classmethod
    def monomial(cls, mono: Monomial, c=1) -> "Polynomial":
        return cls({mono: c})

    @classmethod
    def var(cls, base: int, order: int = 0) -> "Polynomial":
        return cls({Monomial(((JetVariable(base, order), 1),)): 1})

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def items(self):
        return self.terms.items()

    def monomials(self):
        return list(self.terms)

    def coefficient(self, mono: Monomial):
        return self.terms.get(mono, 0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        return f"Polynomial({render(self)!r})"

    def __str__(self):
        return render(self)

    def __neg__(self):
        return Polynomial._wrap({m: -c for m, c in self.terms.items()})

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            _acc(out, m, c)
        return Polynomial._wrap(out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            _acc(out, m, -c)
        return Polynomial._wrap(out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Polynomial()
            return Polynomial._wrap({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                _acc(out, m1 * m2, c1 * c2)
        return Polynomial._wrap(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def is_homogeneous(self) -> bool:
        gradings = {(m.degree, m.weight) for m in self.terms}
        return len(gradings) <= 1

    def grading(self):
        """``(degree, weight)`` of a nonzero homogeneous polynomial."""
        gradings = {(m.degree, m.weight) for m in self.terms}
        if len(gradings) != 1:
            raise ValueError("polynomial is zero or not bihomogeneous")
        return next(iter(gradings))

    @property
    def degree(self) -> int:
        return max((m.degree for m in self.terms), default=0)

    @property
    def weight(self) -> int:
        return max((m.weight for m in self.terms), default=0)

    def variables(self):
        return sorted({v for m in self.terms for v, _ in m.factors})

    def exact_divide(self, other: "Polynomial") -> "Polynomial":
        """Divide by a single term ``c * M``; raise if not exact."""
        if len(other.terms) != 1:
            raise ValueError("divisor must be a monomial times a scalar")
        (mono, c), = other.terms.items()
        out = {}
        for m, a in self.terms.items():
            if not mono.divides(m):
                raise ValueError(f"{render(other)} does not divide {render(self)}")
            out[m / mono] = Fraction(a) / c
        return Polynomial(out)

    def map_monomials(self, fn) -> "Polynomial":
        out: dict = {}
        for m, c in self.terms.items():
            _acc(out, fn(m), c)
        return Polynomial._wrap(out)


def _acc(d: dict, m, c):
    v = d.get(m, 0) + c
    if v:
        d[m] = v
    else:
        d.pop(m, None)


@dataclass(frozen=True)
class JetRing:
    """``C[x_b^(k) : b < num_base_vars, k <= truncation]`` with derivation D.

    ``truncation=None`` is the arc space (m = infinity).
    """

    num_base_vars: int
    truncation: int | None = None
    divided: bool = False

    def __post_init__(self):
        if self.num_base_vars < 1:
            raise ValueError("num_base_vars must be positive")
        if self.truncation is not None and self.truncation < 0:
            raise ValueError("truncation must be >= 0")

    def var(self, base: int, order: int = 0) -> Polynomial:
        self._check_var(JetVariable(base, order))
        return Polynomial.var(base, order)

    def with_truncation(self, m: int | None) -> "JetRing":
        return JetRing(self.num_base_vars, m, self.divided)

    def with_divided(self, divided: bool) -> "JetRing":
        return JetRing(self.num_base_vars, self.truncation, divided)

    def _check_var(self, v: JetVariable):
        if not 0 <= v.base < self.num_base_vars:
            raise ValueError(f"base index {v.base} outside ring with {self.num_base_vars} base variables")
        if self.truncation is not None and v.order > self.truncation:
            raise ValueError(f"order {v.order} exceeds truncation {self.truncation}")

    def contains(self, f: Polynomial) -> bool:
        try:
            for m in f.terms:
                for v, _ in m.factors:
                    self._check_var(v)
        except ValueError:
            return False
        return True

    def check(self, f: Polynomial) -> Polynomial:
        for m in f.terms:
            for v, _ in m.factors:
                self._check_var(v)
        return f


def derive(ring: JetRing, f: Polynomial) -> Polynomial:
    """Apply D by the Leibniz rule; top-order variables derive to zero."""
    top = ring.truncation
    divided = ring.divided
    out: dict = {}
    for mono, c in f.terms.items():
        for v, e in mono.factors:
            if top is not None and v.order >= top:
                continue
            scale = c * e
            if divided:
                scale *= v.order + 1
            _acc(out, mono.exchange(v, JetVariable(v.base, v.order + 1)), scale)
    return Polynomial._wrap(out)


def iter_derive(ring: JetRing, f: Polynomial, k: int) -> Polynomial:
    if k < 0:
        raise ValueError("k must be nonnegative")
    for _ in range(k):
        if not f:
            break
        f = derive(ring, f)
    return f


def to_divided(f: Polynomial) -> Polynomial:
    """Rewrite a raw-variable polynomial in divided-power variables.

    Uses ``x^(k) = k! x^[k]``.
    """
    out = {}
    for m, c in f.terms.items():
        s = 1
        for v, e in m.factors:
            s *= factorial(v.order) ** e
        out[m] = c * s
    return Polynomial._wrap(out)


def to_raw(f: Polynomial) -> Polynomial:
    out = {}
    for m, c in f.terms.items():
        s = 1
        for v, e in m.factors:
            s *= factorial(v.order) ** e
        q = Fraction(c) / s if s != 1 else c
        out[m] = q.numerator if isinstance(q, Fraction) and q.denominator == 1 else q
    return Polynomial._wrap(out)


# -- graded pieces -----------------------------------------------------------

def _weight_splits(w: int, d: int, top: int):
    """Counts ``c[1..top]`` with sum k*c[k] = w and sum c[k] <= d."""

    def rec(k, left_w, left_d):
        if k == 0:
            if left_w == 0:
                yield ()
            return
        for c in range(min(left_w // k, left_d), -1, -1):
            for rest in rec(k - 1, left_w - k * c, left_d - c):
                yield rest + (c,)

    yield from rec(top, w, d)


@lru_cache(maxsize=4096)
def _graded_basis(num_base: int, top: int, d: int, w: int):
    out = []
    bases = range(num_base)
    for counts in _weight_splits(w, d, top):
        c0 = d - sum(counts)
        levels = [(0, c0)] + [(k + 1, c) for k, c in enumerate(counts) if c]
        choices = [list(combinations_with_replacement(bases, c)) for _, c in levels]
        for pick in product(*choices):
            fac: dict = {}
            for (order, _), chosen in zip(levels, pick):
                for b in chosen:
                    v = JetVariable(b, order)
                    fac[v] = fac.get(v, 0) + 1
            out.append(Monomial._raw(tuple(sorted(fac.items()))))
    out.sort(key=DEFAULT_ORDER.key)
    return tuple(out)


def graded_basis(ring: JetRing, d: int, w: int) -> list[Monomial]:
    """All monomials of degree ``d`` and weight ``w`` in ``ring``, sorted."""
    if d < 0 or w < 0:
        return []
    top = w if ring.truncation is None else min(w, ring.truncation)
    if d == 0:
        return [ONE] if w == 0 else []
    return list(_graded_basis(ring.num_base_vars, top, d, w))


def piece_size(ring: JetRing, d: int, w: int) -> int:
    return len(graded_basis(ring, d, w))


# -- monomial orders ---------------------------------------------------------

class Cmp(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


class MonomialOrder:
    """Total order on monomials given by a sort key; keys are memoized."""

    name = "abstract"

    def __init__(self):
        self._cache: dict = {}

    def key(self, mono: Monomial):
        k = self._cache.get(mono)
        if k is None:
            k = self._key(mono)
            if len(self._cache) > 2_000_000:
                self._cache.clear()
            self._cache[mono] = k
        return k

    def _key(self, mono):
        raise NotImplementedError

    def compare(self, a: Monomial, b: Monomial) -> Cmp:
        ka, kb = self.key(a), self.key(b)
        return Cmp.LT if ka < kb else Cmp.GT if ka > kb else Cmp.EQ

    def min(self, monos):
        return min(monos, key=self.key)

    def max(self, monos):
        return max(monos, key=self.key)


class SlnOrder(MonomialOrder):
    """Recursive order for ``l`` copies of ``C^n``.

    Base index ``b`` is coordinate ``i = b % n + 1`` of copy ``j = b // n + 1``
    and the variable ``x_i^(j,k)`` is keyed by ``(k, j, -i)``, so that
    ``x_1^w > ... > x_n^w``.  Monomials compare by degree, weight, then the
    largest variable, then recursively the remainders.
    """

    name = "sln_order"

    def __init__(self, n: int):
        super().__init__()
        self.n = n

    def var_key(self, v: JetVariable):
        j, i = divmod(v.base, self.n)
        return (v.order, j, -i)

    def _key(self, mono):
        ks = []
        for v, e in mono.factors:
            ks.extend([self.var_key(v)] * e)
        ks.sort(reverse=True)
        return (mono.degree, mono.weight, tuple(ks))


class CstarWordOrder(MonomialOrder):
    """Order on balanced words ``u_1..u_r v_1..v_r`` for C* with weights +-1.

    Base indices ``0..n-1`` are ``x_1..x_n``; ``n..2n-1`` are ``y_1..y_n``.
    Variables of each kind compare by (order, index).  Words compare by
    weight, then lexicographically on ``u_1, v_1, u_2, v_2, ...``.
    """

    name = "cstar_word_order"

    def __init__(self, n: int):
        super().__init__()
        self.n = n

    def split(self, mono: Monomial):
        u, v = [], []
        for var, e in mono.factors:
            if var.base < self.n:
                u.extend([(var.order, var.base)] * e)
            else:
                v.extend([(var.order, var.base - self.n)] * e)
        if len(u) != len(v):
            raise ValueError(f"{render_monomial(mono)} is not a balanced word")
        u.sort()
        v.sort()
        return u, v

    def _key(self, mono):
        u, v = self.split(mono)
        inter = []
        for a, b in zip(u, v):
            inter.append(a)
            inter.append(b)
        return (mono.degree, mono.weight, tuple(inter))


DEFAULT_ORDER = SlnOrder(1)


def compare_monomials(order: MonomialOrder, a: Monomial, b: Monomial) -> Cmp:
    return order.compare(a, b)


# -- text syntax -------------------------------------------------------------

def _fmt_coeff(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)


def render_variable(v: JetVariable) -> str:
    return f"x[{v.base + 1}]^({v.order})"


def render_monomial(m: Monomial) -> str:
    if not m.factors:
        return "1"
    parts = []
    for v, e in m.factors:
        parts.append(render_variable(v) + (f"^{e}" if e > 1 else ""))
    return "*".join(parts)


def _render_sort_key(m: Monomial):
    return (m.degree, m.weight, m.factors)


def render(f: Polynomial) -> str:
    """Deterministic text form, e.g. ``3*x[1]^(0)^2*x[2]^(1) - 1/2*x[1]^(1)``."""
    if not f.terms:
        return "0"
    out = []
    for i, m in enumerate(sorted(f.terms, key=_render_sort_key)):
        c = f.terms[m]
        neg = c < 0
        a = -c if neg else c
        if m.factors:
            body = render_monomial(m) if a == 1 else f"{_fmt_coeff(a)}*{render_monomial(m)}"
        else:
            body = _fmt_coeff(a)
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


_TOKEN = re.compile(
    r"\s*(?:(?P<var>x\[(?P<b>\d+)\](?:\^\((?P<k>\d+)\))?(?:\^(?P<e>\d+))?)"
    r"|(?P<num>\d+(?:/\d+)?)|(?P<op>[+\-*]))"
)


def parse(text: str) -> Polynomial:
    """Parse the syntax produced by :func:`render`.

    ``x[b]`` without an order means order 0; base indices are 1-based.
    """
    pos = 0
    tokens = []
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ValueError(f"cannot parse polynomial near {text[pos:pos + 20]!r}")
        pos = mt.end()
        if mt.group("var"):
            b = int(mt.group("b"))
            if b < 1:
                raise ValueError("base indices are 1-based")
            k = int(mt.group("k") or 0)
            e = int(mt.group("e") or 1)
            tokens.append(("var", (JetVariable(b - 1, k), e)))
        elif mt.group("num"):
            tokens.append(("num", Fraction(mt.group("num"))))
        else:
            tokens.append(("op", mt.group("op")))
    if not tokens:
        raise ValueError("empty polynomial")
    if tokens == [("num", Fraction(0))]:
        return Polynomial()

    out: dict = {}
    sign = 1
    coeff = Fraction(1)
    factors: list = []
    expect_factor = True
    seen_any = False

    def flush():
        c = sign * coeff
        if c.denominator == 1:
            c = c.numerator
        _acc(out, Monomial(factors), c)

    for kind, val in tokens:
        if kind == "op" and val in "+-":
            if expect_factor and seen_any:
                raise ValueError("dangling operator")
            if seen_any:
                flush()
            sign = -1 if val == "-" else 1
            coeff = Fraction(1)
            factors = []
            expect_factor = True
            seen_any = True
        elif kind == "op":
            if expect_factor:
                raise ValueError("unexpected '*'")
            expect_factor = True
        else:
            if not expect_factor:
                raise ValueError("missing operator between factors")
            if kind == "num":
                coeff *= val
            else:
                factors.append(val)
            expect_factor = False
            seen_any = True
    if expect_factor:
        raise ValueError("polynomial ends with an operator")
    flush()
    return Polynomial._wrap(out)
