"""Exact sparse linear algebra over Q.

Rows are dicts ``column -> coefficient``.  Elimination is fraction-free: each
row is kept as a primitive integer vector and combined by cross-multiplication,
so intermediate values stay integral.  A modular rank is available as an
independent cross-check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .diffring import DEFAULT_ORDER, Polynomial
from .errors import InternalError


def primitive(row: dict) -> dict:
    """Scale a nonzero rational row to coprime integers, first entry positive."""
    if not row:
        return {}
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    if den != 1:
        row = {k: int(v * den) for k, v in row.items()}
    elif any(isinstance(v, Fraction) for v in row.values()):
        row = {k: int(v) for k, v in row.items()}
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        row = {k: v // g for k, v in row.items()}
    return row


class Echelon:
    """Incremental row echelon form; the pivot of a row is its smallest column."""

    def __init__(self):
        self.pivots: dict = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict) -> dict:
        """Eliminate pivot columns from the leading end of ``row``."""
        row = primitive({k: v for k, v in row.items() if v})
        pivots = self.pivots
        while row:
            c = min(row)
            p = pivots.get(c)
            if p is None:
                return row
            a, b = p[c], row[c]
            g = gcd(a, b)
            a //= g
            b //= g
            new = {k: a * v for k, v in row.items()} if a != 1 else dict(row)
            for k, v in p.items():
                nv = new.get(k, 0) - b * v
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            row = primitive(new)
        return row

    def add(self, row: dict) -> bool:
        """Insert ``row``; return True if it increased the rank."""
        row = self.reduce(row)
        if not row:
            return False
        self.pivots[min(row)] = row
        return True

    def reduced_rows(self) -> dict:
        """Fully reduced echelon form: pivot columns appear in one row only."""
        rows = {c: dict(r) for c, r in self.pivots.items()}
        order = sorted(rows)
        for c in reversed(order):
            p = rows[c]
            a = p[c]
            for c2 in order:
                if c2 >= c:
                    break
                r = rows[c2]
                b = r.get(c)
                if not b:
                    continue
                g = gcd(a, b)
                aa, bb = a // g, b // g
                new = {k: aa * v for k, v in r.items()}
                for k, v in p.items():
                    nv = new.get(k, 0) - bb * v
                    if nv:
                        new[k] = nv
                    else:
                        new.pop(k, None)
                rows[c2] = primitive(new)
        return rows


def rank(rows) -> int:
    e = Echelon()
    for r in rows:
        e.add(r)
    return e.rank


def rank_mod_p(rows, p: int) -> int:
    """Rank of a rational matrix modulo the prime ``p``.

    Only meaningful when ``p`` divides no denominator; callers pick a large
    random prime so that a mismatch with the exact rank signals a bug.
    """
    pivots: dict = {}
    for row in rows:
        r = {}
        for k, v in row.items():
            if isinstance(v, Fraction):
                v = v.numerator * pow(v.denominator, -1, p)
            v %= p
            if v:
                r[k] = v
        while r:
            c = min(r)
            piv = pivots.get(c)
            if piv is None:
                inv = pow(r[c], -1, p)
                pivots[c] = {k: v * inv % p for k, v in r.items()}
                break
            f = r[c]
            for k, v in piv.items():
                nv = (r.get(k, 0) - f * v) % p
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    return len(pivots)


_PRIMES = (2305843009213693951, 1000000000000000003, 998244353, 4611686018427388039)


def random_prime(rng=None) -> int:
    return (rng or random).choice(_PRIMES)


def _components(ncols: int, rows) -> list:
    parent = list(range(ncols))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for r in rows:
        cols = iter(r)
        first = next(cols, None)
        if first is None:
            continue
        ra = find(first)
        for c in cols:
            rb = find(c)
            if rb != ra:
                parent[rb] = ra
    groups: dict = {}
    for c in range(ncols):
        groups.setdefault(find(c), []).append(c)
    return list(groups.values())


def kernel(images, verify: bool = False) -> list:
    """Basis of the kernel of the linear map sending basis vector ``c`` to ``images[c]``.

    ``images[c]`` is a dict ``target -> coefficient``.  Returns a list of
    dicts ``column -> Fraction``.  Columns are split into independent blocks
    (connected through shared targets) and each block is eliminated separately.
    """
    ncols = len(images)
    by_target: dict = {}
    for c, img in enumerate(images):
        for t, v in img.items():
            if v:
                by_target.setdefault(t, {})[c] = v
    rows = list(by_target.values())
    out = []
    block_rows: dict = {}
    comps = _components(ncols, rows)
    where = {}
    for gi, comp in enumerate(comps):
        for c in comp:
            where[c] = gi
    for r in rows:
        block_rows.setdefault(where[min(r)], []).append(r)
    for gi, comp in enumerate(comps):
        rs = block_rows.get(gi, [])
        if not rs:
            out.extend({c: Fraction(1)} for c in comp)
            continue
        e = Echelon()
        for r in rs:
            e.add(r)
        if verify:
            p = random_prime()
            if rank_mod_p(rs, p) != e.rank:
                raise InternalError("exact and modular ranks disagree")
        red = e.reduced_rows()
        free = [c for c in comp if c not in red]
        for f in free:
            vec = {f: Fraction(1)}
            for pc, prow in red.items():
                b = prow.get(f)
                if b:
                    vec[pc] = Fraction(-b, prow[pc])
            out.append(vec)
    return out


def rref(vectors) -> list:
    """Canonical reduced row echelon form with pivot entries equal to 1."""
    e = Echelon()
    for v in vectors:
        e.add(v)
    red = e.reduced_rows()
    out = []
    for c in sorted(red):
        r = red[c]
        a = r[c]
        out.append({k: (Fraction(v, a) if v % a else v // a) for k, v in sorted(r.items())})
    return out


@dataclass
class LinearSpan:
    """Subspace of a graded piece, stored as a canonical RREF basis.

    Columns are monomials ordered by ``DEFAULT_ORDER``; the pivot of each
    basis vector is its smallest monomial and has coefficient 1.  Two spans
    are equal iff their ``vectors`` are equal.
    """

    piece: tuple
    vectors: list = field(default_factory=list)
    basis_monomials: list | None = None

    @property
    def rank(self) -> int:
        return len(self.vectors)

    dim = rank

    @classmethod
    def from_polynomials(cls, polys, piece=(), basis_monomials=None, verify=False):
        polys = [p for p in polys if p]
        cols = sorted({m for p in polys for m in p.terms}, key=DEFAULT_ORDER.key)
        index = {m: i for i, m in enumerate(cols)}
        rows = [{index[m]: c for m, c in p.terms.items()} for p in polys]
        reduced = rref(rows)
        if verify and rows:
            if rank_mod_p(rows, random_prime()) != len(reduced):
                raise InternalError("exact and modular ranks disagree")
        vectors = [Polynomial({cols[i]: c for i, c in r.items()}) for r in reduced]
        return cls(tuple(piece), vectors, basis_monomials)

    def polynomials(self) -> list:
        return list(self.vectors)

    def __eq__(self, other):
        if not isinstance(other, LinearSpan):
            return NotImplemented
        return self.vectors == other.vectors

    def pivots(self) -> list:
        return [DEFAULT_ORDER.min(v.terms) for v in self.vectors]

    def reduce(self, f: Polynomial) -> Polynomial:
        """Remainder of ``f`` after eliminating every pivot monomial."""
        terms = dict(f.terms)
        for v, pivot in zip(self.vectors, self.pivots()):
            c = terms.get(pivot)
            if not c:
                continue
            for m, a in v.terms.items():
                nv = terms.get(m, 0) - c * a
                if nv:
                    terms[m] = nv
                else:
                    terms.pop(m, None)
        return Polynomial(terms)

    def contains(self, f: Polynomial) -> bool:
        return not self.reduce(f)

    def contains_span(self, other: "LinearSpan") -> bool:
        return all(self.contains(v) for v in other.vectors)

    def coordinates(self, f: Polynomial) -> list:
        """Coefficients of ``f`` in the RREF basis; raises if ``f`` is outside."""
        coords = [f.terms.get(p, 0) for p in self.pivots()]
        recon = Polynomial()
        for c, v in zip(coords, self.vectors):
            recon = recon + v * c
        if recon != f:
            raise ValueError("polynomial is not in the span")
        return coords


def polys_kernel(polys, verify=False) -> list:
    """Kernel of ``c -> sum_i c_i polys[i]`` as a list of coefficient dicts."""
    return kernel([p.terms for p in polys], verify=verify)


def span_rank(polys) -> int:
    cols: dict = {}
    rows = []
    for p in polys:
        rows.append({cols.setdefault(m, len(cols)): c for m, c in p.terms.items()})
    return rank(rows)


__all__ = [
    "Echelon",
    "LinearSpan",
    "kernel",
    "polys_kernel",
    "primitive",
    "rank",
    "rank_mod_p",
    "rref",
    "span_rank",
]
