"""Jet ideals of affine schemes and their graded pieces."""

from __future__ import annotations

from dataclasses import dataclass

from .diffring import JetRing, Polynomial, graded_basis, iter_derive
from .linalg import Echelon, LinearSpan


@dataclass(frozen=True)
class AffineScheme:
    """``Spec C[y_1..y_r]/<f_1..f_k>``.

    Graded pieces need degree-homogeneous generators; the jet ideal itself does not.
    """

    ring: JetRing
    generators: tuple

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        base = self.ring.with_truncation(0)
        for f in self.generators:
            if not f:
                raise ValueError("ideal generators must be nonzero")
            if not base.contains(f):
                raise ValueError("generators must live in the base ring")

    def check_homogeneous(self):
        for f in self.generators:
            if len({m.degree for m in f.terms}) != 1:
                raise ValueError("graded pieces need degree-homogeneous generators")


@dataclass(frozen=True)
class JetIdealBasis:
    m: int
    elements: tuple  # ((l, i), D^i f_l)

    def polynomials(self):
        return [p for _, p in self.elements]


def jet_ideal(scheme: AffineScheme, m: int) -> JetIdealBasis:
    ring = scheme.ring.with_truncation(m)
    elems = []
    for l, f in enumerate(scheme.generators):
        g = f
        for i in range(m + 1):
            elems.append(((l, i), g))
            g = iter_derive(ring, g, 1)
    return JetIdealBasis(m, tuple(elems))


def _piece_products(scheme: AffineScheme, m: int, d: int, w: int):
    scheme.check_homogeneous()
    ring = scheme.ring.with_truncation(m)
    for (l, i), g in jet_ideal(scheme, m).elements:
        if not g:
            continue
        deg = next(iter(g.terms)).degree
        if deg > d or i > w:
            continue
        for mono in graded_basis(ring, d - deg, w - i):
            yield Polynomial({mono * k: c for k, c in g.terms.items()})


def ideal_piece_span(scheme: AffineScheme, m: int, d: int, w: int, verify=False) -> LinearSpan:
    """Span of ``M * D^i f_l`` inside the (d, w) piece of ``R_m``."""
    ring = scheme.ring.with_truncation(m)
    return LinearSpan.from_polynomials(
        _piece_products(scheme, m, d, w), piece=(d, w, m),
        basis_monomials=graded_basis(ring, d, w), verify=verify,
    )


def ideal_piece_rank(scheme: AffineScheme, m: int, d: int, w: int) -> int:
    ring = scheme.ring.with_truncation(m)
    index = {mono: i for i, mono in enumerate(graded_basis(ring, d, w))}
    e = Echelon()
    for p in _piece_products(scheme, m, d, w):
        e.add({index[k]: c for k, c in p.terms.items()})
    return e.rank


def quotient_piece_dim(scheme: AffineScheme, m: int, d: int, w: int) -> int:
    ring = scheme.ring.with_truncation(m)
    return len(graded_basis(ring, d, w)) - ideal_piece_rank(scheme, m, d, w)
