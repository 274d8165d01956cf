"""Quotient presentations, the pullback ``p_m^*`` and good/bad classification."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import comb

from . import action as act_mod
from .action import GroupActionSpec, check_invariant, invariant_piece, sl_reduce_invariant_piece
from .diffring import (
    DEFAULT_ORDER,
    JetRing,
    JetVariable,
    Monomial,
    Polynomial,
    SlnOrder,
    iter_derive,
    render,
)
from .errors import InternalError, UnsupportedError
from .linalg import LinearSpan, polys_kernel

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RepresentationSpec:
    """A representation together with its group.

    Coordinates of copy ``a`` occupy bases ``a*size .. a*size + size - 1``
    where ``size`` is ``n`` (``2n`` for ``sp``); dual copies follow the
    vector copies.
    """

    family: str
    n: int = 0
    k: int = 0
    l: int = 0
    weights: tuple = ()
    matrices: tuple = ()
    custom_action: GroupActionSpec | None = None
    custom_generators: tuple = ()

    def __post_init__(self):
        if self.family in ("sl", "gl", "so", "sp"):
            if self.n < 1 or self.k < 0 or self.l < 0:
                raise ValueError("need n >= 1 and nonnegative copy counts")
            if self.family in ("so", "sp") and self.l:
                raise UnsupportedError(f"{self.family} takes no dual copies")
            if self.k + self.l == 0:
                raise ValueError("need at least one copy")
        elif self.family == "torus":
            if not self.weights:
                raise ValueError("torus needs a weight vector")
        elif self.family == "finite":
            if not self.matrices:
                raise ValueError("finite group needs generators")
        elif self.family == "custom":
            if self.custom_action is None:
                raise ValueError("custom representation needs an action")
        else:
            raise UnsupportedError(f"unknown family {self.family!r}")

    @property
    def block(self) -> int:
        return 2 * self.n if self.family == "sp" else self.n

    @property
    def dim(self) -> int:
        if self.family in ("sl", "gl", "so", "sp"):
            return self.block * (self.k + self.l)
        if self.family == "torus":
            return len(self.weights)
        if self.family == "finite":
            return len(self.matrices[0])
        return self.custom_action.dim

    def ring(self, m=None) -> JetRing:
        return JetRing(self.dim, m)

    def action(self) -> GroupActionSpec:
        return _action(self)

    def label(self) -> str:
        if self.family in ("sl", "gl"):
            return f"{self.family}(n={self.n}, k={self.k}, l={self.l})"
        if self.family in ("so", "sp"):
            return f"{self.family}(n={self.n}, k={self.k})"
        if self.family == "torus":
            return f"torus{self.weights}"
        return self.family


_ACTIONS: dict = {}


def _action(rep: RepresentationSpec) -> GroupActionSpec:
    spec = _ACTIONS.get(rep)
    if spec is None:
        if rep.family in ("sl", "gl", "so", "sp"):
            spec = act_mod.classical(rep.family, rep.n, rep.k, rep.l)
        elif rep.family == "torus":
            spec = act_mod.torus(rep.weights)
        elif rep.family == "finite":
            spec = act_mod.finite(rep.matrices)
        else:
            spec = rep.custom_action
        _ACTIONS[rep] = spec
    return spec


def sl_std(n, k, l=0):
    return RepresentationSpec("sl", n, k, l)


def gl_std(n, k, l):
    return RepresentationSpec("gl", n, k, l)


def so_std(n, k):
    return RepresentationSpec("so", n, k)


def sp_std(n, k):
    return RepresentationSpec("sp", n, k)


def torus_rep(weights):
    return RepresentationSpec("torus", weights=tuple(int(w) for w in weights))


def finite_rep(matrices):
    return RepresentationSpec("finite", matrices=tuple(tuple(tuple(r) for r in g) for g in matrices))


def custom_rep(spec: GroupActionSpec, generators):
    return RepresentationSpec("custom", custom_action=spec, custom_generators=tuple(generators))


# -- presentations ----------------------------------------------------------------

@dataclass
class QuotientPresentation:
    """Generators ``p_j`` of ``O(V)^G`` and relations among them.

    Relations are polynomials in the f-ring ``JetRing(len(generators))``
    where base ``j`` stands for ``p_j``.  Every relation is checked to
    vanish under substitution.
    """

    num_base_vars: int
    generators: tuple
    relations: tuple = ()
    relations_complete: bool = True
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.generators = tuple(self.generators)
        self.relations = tuple(r for r in self.relations if r)
        for name, p, deg in self.generators:
            if not p or {mo.degree for mo in p.terms} != {deg}:
                raise ValueError(f"generator {name} is not homogeneous of degree {deg}")
        for rel in self.relations:
            if self.pullback(rel):
                raise InternalError(f"relation does not vanish: {render(rel)}")

    @property
    def f_ring(self) -> JetRing:
        return JetRing(len(self.generators))

    def names(self):
        return [g[0] for g in self.generators]

    def derived(self, j: int, i: int) -> Polynomial:
        key = (j, i)
        p = self._cache.get(key)
        if p is None:
            p = self.generators[j][1] if i == 0 else iter_derive(JetRing(self.num_base_vars), self.derived(j, i - 1), 1)
            self._cache[key] = p
        return p

    def pullback(self, f: Polynomial, m=None) -> Polynomial:
        out = Polynomial()
        for mono, c in f.terms.items():
            term = Polynomial.constant(c)
            for v, e in mono.factors:
                if m is not None and v.order > m:
                    raise ValueError("f-variable order exceeds the truncation")
                term = term * self.derived(v.base, v.order) ** e
            out = out + term
        return out


def _var(b, k=0) -> Polynomial:
    return Polynomial.var(b, k)


def _fdet(entries) -> Polynomial:
    """Determinant of a square matrix of polynomials."""
    size = len(entries)
    from .smt.sln import _signed_perms

    out = Polynomial()
    for p, s in _signed_perms(size):
        term = Polynomial.constant(s)
        for r in range(size):
            term = term * entries[r][p[r]]
        out = out + term
    return out


def _pfaffian(entries) -> Polynomial:
    size = len(entries)
    if size == 0:
        return Polynomial.constant(1)
    out = Polynomial()
    for j in range(1, size):
        keep = [t for t in range(size) if t not in (0, j)]
        minor = [[entries[a][b] for b in keep] for a in keep]
        sign = 1 if j % 2 == 1 else -1
        out = out + entries[0][j] * _pfaffian(minor) * sign
    return out


def _quadratic_relations(gens, num_base) -> list:
    probe = QuotientPresentation(num_base, gens)
    monos = [Monomial([(JetVariable(a, 0), 1), (JetVariable(b, 0), 1)])
             for a, b in combinations_with_replacement(range(len(gens)), 2)]
    images = [probe.pullback(Polynomial.monomial(mo)) for mo in monos]
    rels = []
    for vec in polys_kernel(images):
        rels.append(Polynomial({monos[c]: v for c, v in vec.items()}))
    return LinearSpan.from_polynomials(rels).vectors


def _det_generator(rep, copies) -> Polynomial:
    from .smt.sln import det_symbol

    return det_symbol(rep.n, tuple((c + 1, 0) for c in copies))


def _sl_like(rep: RepresentationSpec):
    n, k, l = rep.n, rep.k, rep.l
    gens = []
    det_idx, dual_idx, alpha = {}, {}, {}
    if rep.family == "sl":
        for cs in combinations(range(k), n):
            det_idx[cs] = len(gens)
            gens.append((f"d[{','.join(str(c + 1) for c in cs)}]", _det_generator(rep, cs), n))
        for cs in combinations(range(l), n):
            dual_idx[cs] = len(gens)
            gens.append((f"e[{','.join(str(c + 1) for c in cs)}]", _det_generator(rep, [k + c for c in cs]), n))
    for a in range(k):
        for b in range(l):
            p = Polynomial()
            for i in range(n):
                p = p + _var(a * n + i) * _var((k + b) * n + i)
            alpha[(a, b)] = len(gens)
            gens.append((f"a[{a + 1},{b + 1}]", p, 2))
    return gens, det_idx, dual_idx, alpha


def _presentation_sl(rep):
    n, k, l = rep.n, rep.k, rep.l
    gens, det_idx, dual_idx, alpha = _sl_like(rep)
    dim = rep.dim
    if not gens:
        raise UnsupportedError(f"{rep.label()} has no invariants")
    lo, hi = sorted((k, l))
    if hi < n or (lo == 0 and hi <= n + 1) or (lo < n and hi == n):
        return QuotientPresentation(dim, gens)
    if k == n and l == n:
        f = [[_var(alpha[(a, b)]) for b in range(n)] for a in range(n)]
        rel = _fdet(f) - _var(det_idx[tuple(range(n))]) * _var(dual_idx[tuple(range(n))])
        return QuotientPresentation(dim, gens, (rel,))
    if lo == 0 or (hi == n + 1 and lo == n - 1):
        return QuotientPresentation(dim, gens, _quadratic_relations(gens, dim))
    return QuotientPresentation(dim, gens, _quadratic_relations(gens, dim), relations_complete=False)


def _presentation_gl(rep):
    n, k, l = rep.n, rep.k, rep.l
    gens, _, _, alpha = _sl_like(rep)
    if not gens:
        raise UnsupportedError(f"{rep.label()} has no invariants")
    rels = []
    if k > n and l > n:
        for rows in combinations(range(k), n + 1):
            for cols in combinations(range(l), n + 1):
                rels.append(_fdet([[_var(alpha[(a, b)]) for b in cols] for a in rows]))
    return QuotientPresentation(rep.dim, gens, rels)


def _presentation_so(rep):
    n, k = rep.n, rep.k
    gens = []
    idx = {}
    for a in range(k):
        for b in range(a, k):
            p = Polynomial()
            for i in range(n):
                p = p + _var(a * n + i) * _var(b * n + i)
            idx[(a, b)] = idx[(b, a)] = len(gens)
            gens.append((f"a[{a + 1},{b + 1}]", p, 2))
    dets = {}
    for cs in combinations(range(k), n):
        dets[cs] = len(gens)
        gens.append((f"d[{','.join(str(c + 1) for c in cs)}]", _det_generator(rep, cs), n))
    if k < n:
        return QuotientPresentation(rep.dim, gens)
    if k == n:
        f = [[_var(idx[(a, b)]) for b in range(n)] for a in range(n)]
        d = _var(dets[tuple(range(n))])
        return QuotientPresentation(rep.dim, gens, (_fdet(f) - d * d,))
    return QuotientPresentation(rep.dim, gens, _quadratic_relations(gens, rep.dim), relations_complete=False)


def _presentation_sp(rep):
    n, k = rep.n, rep.k
    size = 2 * n
    gens = []
    idx = {}
    for a in range(k):
        for b in range(a + 1, k):
            p = Polynomial()
            for i in range(n):
                p = p + _var(a * size + i) * _var(b * size + n + i) - _var(a * size + n + i) * _var(b * size + i)
            idx[(a, b)] = len(gens)
            gens.append((f"w[{a + 1},{b + 1}]", p, 2))
    if not gens:
        raise UnsupportedError(f"{rep.label()} has no invariants")

    def entry(a, b):
        if a == b:
            return Polynomial()
        return _var(idx[(a, b)]) if a < b else -_var(idx[(b, a)])

    rels = []
    if k >= 2 * n + 2:
        for cs in combinations(range(k), 2 * n + 2):
            rels.append(_pfaffian([[entry(a, b) for b in cs] for a in cs]))
    return QuotientPresentation(rep.dim, gens, rels)


def _torus_hilbert_basis(weights) -> list:
    pos = [w for w in weights if w > 0]
    neg = [-w for w in weights if w < 0]
    bound = max(pos, default=0) + max(neg, default=0)
    bound = max(bound, 1)
    found = []
    for deg in range(1, bound + 1):
        for combo in combinations_with_replacement(range(len(weights)), deg):
            if sum(weights[b] for b in combo) != 0:
                continue
            mono = Monomial((JetVariable(b, 0), 1) for b in combo)
            if any(g.divides(mono) for g in found):
                continue
            found.append(mono)
    return found


def _presentation_torus(rep):
    w = rep.weights
    dim = len(w)
    pos = [b for b in range(dim) if w[b] > 0]
    neg = [b for b in range(dim) if w[b] < 0]
    if all(abs(x) == 1 for x in w):
        gens = []
        idx = {}
        for a, i in enumerate(pos):
            for c, j in enumerate(neg):
                idx[(a, c)] = len(gens)
                gens.append((f"f[{a + 1},{c + 1}]", _var(i) * _var(j), 2))
        rels = []
        seen = set()
        for a, c in combinations(range(len(pos)), 2):
            for b, d in combinations(range(len(neg)), 2):
                if (a, b, c, d) in seen:
                    continue
                seen.add((a, b, c, d))
                rels.append(_var(idx[(a, b)]) * _var(idx[(c, d)]) - _var(idx[(a, d)]) * _var(idx[(c, b)]))
        if not gens:
            raise UnsupportedError("torus without invariants")
        return QuotientPresentation(dim, gens, rels)
    monos = _torus_hilbert_basis(w)
    if not monos:
        raise UnsupportedError("torus without invariants")
    from .diffring import render_monomial

    gens = [(render_monomial(mo), Polynomial.monomial(mo), mo.degree) for mo in monos]
    if len(gens) == 1:
        return QuotientPresentation(dim, gens)
    return QuotientPresentation(dim, gens, _quadratic_relations(gens, dim), relations_complete=False)


def _presentation_finite(rep):
    spec = rep.action()
    ring = rep.ring(0)
    gens = []
    for d in range(1, spec.group_size + 1):
        inv = invariant_piece(ring, spec, 0, d, 0)
        if not inv.vectors:
            continue
        products = _products_of(gens, d)
        have = LinearSpan.from_polynomials(products)
        for v in inv.vectors:
            if not have.contains(v):
                gens.append((f"p{len(gens) + 1}", v, d))
                have = LinearSpan.from_polynomials(have.vectors + [v])
    if not gens:
        raise UnsupportedError("finite group without invariants")
    if len(gens) == 1:
        return QuotientPresentation(rep.dim, gens)
    return QuotientPresentation(rep.dim, gens, _quadratic_relations(gens, rep.dim), relations_complete=False)


def _products_of(gens, d) -> list:
    out = []

    def rec(start, left, acc):
        if left == 0:
            out.append(acc)
            return
        for j in range(start, len(gens)):
            if gens[j][2] <= left:
                rec(j, left - gens[j][2], acc * gens[j][1])

    rec(0, d, Polynomial.constant(1))
    return out


def classical_generators(rep: RepresentationSpec) -> QuotientPresentation:
    if rep.family == "sl":
        return _presentation_sl(rep)
    if rep.family == "gl":
        return _presentation_gl(rep)
    if rep.family == "so":
        return _presentation_so(rep)
    if rep.family == "sp":
        return _presentation_sp(rep)
    if rep.family == "torus":
        return _presentation_torus(rep)
    if rep.family == "finite":
        return _presentation_finite(rep)
    gens = [(f"p{j + 1}", p, next(iter(p.terms)).degree) for j, p in enumerate(rep.custom_generators)]
    return QuotientPresentation(rep.dim, gens, relations_complete=False)


# -- pieces ---------------------------------------------------------------------

def _product_terms(items, d, w):
    """All products over multisets of ``(degree, weight, poly)`` items with totals ``(d, w)``."""
    out = []
    items = list(items)

    def rec(start, dl, wl, acc):
        if dl == 0:
            if wl == 0:
                out.append(acc)
            return
        for idx in range(start, len(items)):
            deg, wt, p = items[idx]
            if deg <= dl and wt <= wl:
                rec(idx, dl - deg, wl - wt, acc * p)

    rec(0, d, w, Polynomial.constant(1))
    return out


def pullback_image_piece(rep: RepresentationSpec, pres: QuotientPresentation, m: int, d: int, w: int) -> LinearSpan:
    """Span of products ``prod D^(i_s) p_(j_s)`` with each ``i_s <= m``."""
    top = min(m, w)
    items = [(deg, i, pres.derived(j, i)) for j, (_, _, deg) in enumerate(pres.generators) for i in range(top + 1)]
    prods = _product_terms(items, d, w)
    return LinearSpan.from_polynomials(prods, piece=(d, w, m))


def invariant_span(rep: RepresentationSpec, m: int, d: int, w: int) -> LinearSpan:
    spec = rep.action()
    if rep.family == "sl" and rep.l == 0 and rep.n >= 2:
        return sl_reduce_invariant_piece(rep.ring(m), spec, m, d, w)
    return invariant_piece(rep.ring(m), spec, m, d, w)


@dataclass
class PieceReport:
    piece: tuple
    inv_dim: int
    img_dim: int
    verdict: str
    witness: Polynomial | None = None

    def to_dict(self, rep: RepresentationSpec) -> dict:
        d, w, m = self.piece
        return {
            "family": rep.family,
            "n": rep.n,
            "k": rep.k,
            "l": rep.l,
            "m": m,
            "d": d,
            "w": w,
            "inv_dim": self.inv_dim,
            "img_dim": self.img_dim,
            "verdict": self.verdict,
            "witness_text": render(self.witness) if self.witness is not None else None,
        }


def witness_order(rep: RepresentationSpec):
    return SlnOrder(rep.n) if rep.family == "sl" else DEFAULT_ORDER


def classify_piece(rep: RepresentationSpec, pres: QuotientPresentation, m: int, d: int, w: int) -> PieceReport:
    inv = invariant_span(rep, m, d, w)
    img = pullback_image_piece(rep, pres, m, d, w)
    if not inv.contains_span(img):
        raise InternalError("pullback image is not contained in the invariants")
    if img.dim == inv.dim:
        return PieceReport((d, w, m), inv.dim, img.dim, "good_evidence")
    o = witness_order(rep)
    for v in sorted(inv.vectors, key=lambda p: o.key(o.max(p.terms))):
        if not img.contains(v):
            return PieceReport((d, w, m), inv.dim, img.dim, "bad_witnessed", v)
    raise InternalError("no witness found although the image is smaller")


def classify_grid(rep, pres, m, dmax, wmax, jobs=1) -> list:
    keys = [(d, w) for d in range(1, dmax + 1) for w in range(wmax + 1)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futs = [pool.submit(classify_piece, rep, pres, m, d, w) for d, w in keys]
            return [f.result() for f in futs]
    return [classify_piece(rep, pres, m, d, w) for d, w in keys]


def reports_document(rep: RepresentationSpec, reports) -> str:
    pieces = sorted((r.to_dict(rep) for r in reports), key=lambda x: (x["m"], x["d"], x["w"]))
    doc = {"schema_version": SCHEMA_VERSION, "representation": rep.label(), "pieces": pieces}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# -- probes -----------------------------------------------------------

def noninjectivity_probe(w: int = 1) -> dict:
    """Weight-one degree-two terms for ``(6 C^3, SL_3)`` using all six indices."""
    from .smt.sln import TableauW, is_standard_tableau, lowest_term_shift

    if w != 1:
        raise UnsupportedError("only weight one is implemented")
    rep = sl_std(3, 6)
    pres = classical_generators(rep)
    index = {}
    for j, (name, _, _) in enumerate(pres.generators):
        index[tuple(int(c) for c in name[2:-1].split(","))] = j
    everything = set(range(1, 7))
    terms = []
    nonstandard = 0
    for abc in combinations(range(1, 7), 3):
        def_ = tuple(sorted(everything - set(abc)))
        mono = Monomial([(JetVariable(index[abc], 0), 1), (JetVariable(index[def_], 1), 1)])
        terms.append(mono)
        low = TableauW(((tuple((j, 0) for j in abc)), lowest_term_shift(def_, 1)))
        if not is_standard_tableau(low):
            nonstandard += 1
    quad = [Monomial([(JetVariable(index[abc], 0), 1), (JetVariable(index[tuple(sorted(everything - set(abc)))], 0), 1)])
            for abc in combinations(range(1, 7), 3) if 1 in abc]
    rels = []
    for vec in polys_kernel([pres.pullback(Polynomial.monomial(mo)) for mo in quad]):
        rels.append(Polynomial({quad[c]: v for c, v in vec.items()}))
    fring = pres.f_ring
    d_rels = [iter_derive(fring, r, 1) for r in rels]
    relation_span_dim = LinearSpan.from_polynomials(d_rels).dim
    kernel_dim = len(polys_kernel([pres.pullback(Polynomial.monomial(mo), 1) for mo in terms]))
    return {
        "nonstandard_count": nonstandard,
        "relation_span_dim": relation_span_dim,
        "kernel_dim": kernel_dim,
        "num_terms": len(terms),
        "plucker_all_six_dim": len(rels),
    }


def dfinite_probe(rep: RepresentationSpec, candidates, dmax: int, wmax: int) -> list:
    """Compare each invariant piece with the span of products of derivatives of ``candidates``."""
    spec = rep.action()
    arc = rep.ring()
    cands = []
    for c in candidates:
        if not c.is_homogeneous():
            raise ValueError("candidates must be bihomogeneous")
        bad = check_invariant(arc, spec, c)
        if bad is not None:
            from .errors import NotInvariantError

            raise NotInvariantError(f"candidate {render(c)} violates {bad}", bad)
        cands.append(c)
    out = []
    for d in range(1, dmax + 1):
        for w in range(wmax + 1):
            items = []
            for c in cands:
                deg, wt = c.grading()
                for i in range(0, w - wt + 1):
                    items.append((deg, wt + i, iter_derive(arc, c, i)))
            span = LinearSpan.from_polynomials(_product_terms(items, d, w))
            inv = invariant_span(rep, w, d, w)
            witness = next((v for v in inv.vectors if not span.contains(v)), None)
            out.append({
                "d": d,
                "w": w,
                "inv_dim": inv.dim,
                "span_dim": span.dim,
                "contained": witness is None,
                "witness_text": render(witness) if witness is not None else None,
            })
    return out


# -- census --------------------------------------------------------------------------

def dim_group(family: str, n: int) -> int:
    table = {"sl": n * n - 1, "gl": n * n, "so": n * (n - 1) // 2, "sp": n * (2 * n + 1)}
    if family not in table:
        raise UnsupportedError(f"unknown family {family!r}")
    return table[family]


def _plucker_relation_count(n: int, k: int) -> int:
    """Quadratic Plucker relations for ``k choose n`` brackets."""
    subsets = list(combinations(range(k), n))
    standard = sum(1 for a, b in combinations_with_replacement(subsets, 2) if all(x <= y for x, y in zip(a, b)))
    return comb(len(subsets) + 1, 2) - standard


def _classify(gens, rels, dim_z):
    if rels == 0:
        return "coregular"
    if gens - rels != dim_z:
        return "too_many_relations"
    return "hypersurface" if rels == 1 else "complete_intersection"


def census(family: str, n: int, k: int, l: int = 0) -> dict:
    """Generator and relation counts with the resulting classification."""
    if n < 1 or k < 0 or l < 0:
        raise ValueError("bad parameters")
    dim_g = dim_group(family, n)
    if family == "sl":
        if n < 2:
            raise UnsupportedError("SL_1 is trivial")
        dim_v = n * (k + l)
        lo, hi = sorted((k, l))
        if hi < n:
            gens, rels, dim_z = k * l, 0, k * l
        elif lo == 0:
            gens = comb(hi, n)
            if hi <= n + 1:
                rels, dim_z = 0, gens
            else:
                rels, dim_z = _plucker_relation_count(n, hi), n * (hi - n) + 1
        elif hi == n and lo < n:
            gens, rels, dim_z = 1 + k * l, 0, 1 + k * l
        elif k == n and l == n:
            gens, rels, dim_z = n * n + 2, 1, n * n + 1
        elif hi == n + 1 and lo == n - 1:
            gens, rels, dim_z = (n + 1) + (n + 1) * (n - 1), n - 1, n * n + 1
        elif hi == n + 1 and lo == n:
            gens = (n + 1) + 1 + n * (n + 1)
            return {"num_generators": gens, "num_relations": None, "dim_V": dim_v, "dim_G": dim_g,
                    "dim_Z": dim_v - dim_g, "classification": "too_many_relations"}
        else:
            raise UnsupportedError(f"SL_{n} with k={k}, l={l} is outside the table")
    elif family == "sp":
        if l:
            raise UnsupportedError("Sp takes no dual copies")
        dim_v = 2 * n * k
        gens = comb(k, 2)
        if k <= 2 * n + 1:
            rels, dim_z = 0, gens
        else:
            rels, dim_z = comb(k, 2 * n + 2), gens - comb(k - 2 * n, 2)
    elif family == "gl":
        dim_v = n * (k + l)
        gens = k * l
        if min(k, l) <= n:
            rels, dim_z = 0, gens
        else:
            rels, dim_z = comb(k, n + 1) * comb(l, n + 1), gens - (k - n) * (l - n)
    elif family == "so":
        if l:
            raise UnsupportedError("SO takes no dual copies")
        if n < 2:
            raise UnsupportedError("SO_1 is trivial")
        dim_v = n * k
        if k < n:
            gens, rels, dim_z = comb(k + 1, 2), 0, comb(k + 1, 2)
        elif k == n:
            gens, rels, dim_z = comb(n + 1, 2) + 1, 1, comb(n + 1, 2)
        else:
            raise UnsupportedError(f"SO_{n} with k={k} > n is outside the table")
    else:
        raise UnsupportedError(f"unknown family {family!r}")
    return {
        "num_generators": gens,
        "num_relations": rels,
        "dim_V": dim_v,
        "dim_G": dim_g,
        "dim_Z": dim_z,
        "classification": _classify(gens, rels, dim_z),
    }


def codim_formula(family: str, n: int) -> dict:
    """Codimension of the null fibre in ``Z_m`` for the complete-intersection cases.

    ``lhs`` is the dimension count before simplification; ``value`` the
    closed form; ``bound`` the lower bound the argument needs.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if family == "sl":
        lhs = 2 * (n * n + 1) - (n * n + n)
        value, bound = n * n - n + 2, 4
    elif family == "sp":
        c = comb(2 * n + 2, 2)
        lhs = (n + 1) * (c - 1) - n * c
        value, bound = 2 * n * n + 2 * n, 4
    elif family == "gl":
        lhs = (n + 1) * ((n + 1) ** 2 - 1) - n * (n + 1) ** 2
        value, bound = n * (n + 1), 2
    elif family in ("so", "so_even", "so_odd"):
        parity = "so_even" if n % 2 == 0 else "so_odd"
        if family != "so" and family != parity:
            raise ValueError(f"{family} needs n of matching parity")
        dim_z = Fraction(n * (n + 1), 2)
        if n % 2 == 0:
            lhs = dim_z - (n - 1) + Fraction(n - 2, 2)
            value = Fraction(n * n, 2)
        else:
            lhs = dim_z - (n - 1) + Fraction(n - 1, 2)
            value = Fraction(n * n, 2) + Fraction(1, 2)
        bound = 2
    else:
        raise UnsupportedError(f"no codimension formula for {family!r}")
    return {"value": Fraction(value), "lhs": Fraction(lhs), "bound": bound}
