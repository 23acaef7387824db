"""Graded complexes, Day convolution, π_! and the comodule picture.

A graded complex is a finitely supported family ``w ↦ x(w)`` of chain
complexes.  ``total`` (π_!) takes the direct sum, and a grading on the sum is
the same thing as a family of orthogonal idempotent chain maps summing to the
identity (a comodule over the Laurent coalgebra), which is how
:class:`Comodule` stores it.
"""
from __future__ import annotations

from typing import Mapping

from .errors import InvariantError, RingMismatchError
from .exactla import (BaseRing, ChainComplex, ChainMap, HomologyModule, Lattice, Matrix, direct_sum, homology,
                      image, tensor)
from .exactla.complexes import _tensor_layout


class GradedComplex:
    __slots__ = ("ring", "_pieces")

    def __init__(self, ring: BaseRing, pieces: Mapping[int, ChainComplex] | None = None):
        self.ring = ring
        self._pieces = {}
        for w, c in sorted((pieces or {}).items()):
            if c.ring != ring:
                raise RingMismatchError(f"piece at weight {w} is over {c.ring}, expected {ring}")
            if not c.is_zero():
                self._pieces[int(w)] = c

    def piece(self, w: int) -> ChainComplex:
        return self._pieces.get(w) or ChainComplex.zero(self.ring)

    @property
    def pieces(self) -> dict[int, ChainComplex]:
        return dict(self._pieces)

    def weights(self) -> list[int]:
        return list(self._pieces)

    def is_zero(self) -> bool:
        return not self._pieces

    def homology(self) -> dict[tuple[int, int], HomologyModule]:
        """Nonzero ``H_n(x(w))`` keyed by ``(w, n)``."""
        out = {}
        for w, c in self._pieces.items():
            for n in c.degrees():
                h = homology(c, n)
                if not h.is_zero():
                    out[(w, n)] = h
        return out

    def __eq__(self, other):
        if not isinstance(other, GradedComplex):
            return NotImplemented
        return self.ring == other.ring and self._pieces == other._pieces

    def __hash__(self):
        return hash((self.ring, tuple(self._pieces.items())))

    def __repr__(self):
        return f"GradedComplex({self.ring}, {self._pieces})"


def unit_graded(ring: BaseRing) -> GradedComplex:
    return GradedComplex(ring, {0: ChainComplex.concentrated(ring)})


def constant(c: ChainComplex) -> GradedComplex:
    """π^*: ``c`` placed in weight 0."""
    return GradedComplex(c.ring, {0: c})


def twist(x: GradedComplex, k: int) -> GradedComplex:
    return GradedComplex(x.ring, {w + k: c for w, c in x.pieces.items()})


def total(x: GradedComplex) -> ChainComplex:
    """π_!: direct sum of the pieces, weights ascending."""
    return direct_sum(x.pieces.values(), ring=x.ring)


def day_tensor_graded(x: GradedComplex, y: GradedComplex) -> GradedComplex:
    """``(x⊗y)(n) = ⊕_{i+j=n} x(i) ⊗ y(j)``, summands ordered by ``i``."""
    if x.ring != y.ring:
        raise RingMismatchError(f"Day convolution of graded complexes over {x.ring} and {y.ring}")
    out: dict[int, list] = {}
    for i, a in x.pieces.items():
        for j, b in y.pieces.items():
            out.setdefault(i + j, []).append((i, tensor(a, b)))
    return GradedComplex(x.ring, {n: direct_sum([t for _, t in sorted(ts, key=lambda p: p[0])], ring=x.ring)
                                  for n, ts in out.items()})


def _total_index(x: GradedComplex) -> dict:
    """(weight, degree) -> offset of that piece inside ``total(x)`` in that degree."""
    idx = {}
    off: dict[int, int] = {}
    for w, c in x.pieces.items():
        for n in c.degrees():
            idx[(w, n)] = off.get(n, 0)
            off[n] = off.get(n, 0) + c.rank(n)
    return idx


def total_tensor_comparison(x: GradedComplex, y: GradedComplex) -> ChainMap:
    """The reordering isomorphism ``total(x ⊗ y) -> total(x) ⊗ total(y)``.

    Both sides carry the same basis ``a⊗b`` up to order; the returned map is
    the permutation, checked to be a chain map.
    """
    lhs = total(day_tensor_graded(x, y))
    tx, ty = total(x), total(y)
    rhs = tensor(tx, ty)
    xi, yi = _total_index(x), _total_index(y)
    rl = _tensor_layout(tx, ty)
    roff = {}
    for n, pqs in rl.items():
        o = 0
        for p, q in pqs:
            roff[(p, q)] = o
            o += tx.rank(p) * ty.rank(q)
    perm: dict[int, list] = {n: [] for n in lhs.degrees()}
    weights: dict[int, list] = {}
    for i in x.weights():
        for j in y.weights():
            weights.setdefault(i + j, []).append(i)
    for k in sorted(weights):
        for i in sorted(weights[k]):
            a, b = x.piece(i), y.piece(k - i)
            for n, pqs in _tensor_layout(a, b).items():
                for p, q in pqs:
                    for s in range(a.rank(p)):
                        for t in range(b.rank(q)):
                            col = roff[(p, q)] + (xi[(i, p)] + s) * ty.rank(q) + yi[(k - i, q)] + t
                            perm[n].append(col)
    ring = x.ring
    comps = {}
    for n, cols in perm.items():
        m = [[ring.zero] * len(cols) for _ in range(rhs.rank(n))]
        for j, r in enumerate(cols):
            m[r][j] = ring.one
        comps[n] = Matrix(ring, rhs.rank(n), len(cols), m)
    return ChainMap(lhs, rhs, comps, check=True)


class Comodule:
    """A complex with a Laurent-coalgebra coaction, stored as idempotents ``ρ_w``."""

    def __init__(self, ring: BaseRing, carrier: ChainComplex, coaction: Mapping[int, ChainMap], check: bool = True):
        if carrier.ring != ring:
            raise RingMismatchError("carrier ring differs from comodule ring")
        self.ring = ring
        self.carrier = carrier
        self.coaction = {w: r for w, r in sorted(coaction.items()) if not r.is_zero()}
        if check:
            self.validate()

    def validate(self) -> None:
        c = self.carrier
        for w, r in self.coaction.items():
            if r.source != c or r.target != c:
                raise InvariantError("coaction component is not an endomorphism of the carrier", f"weight {w}")
        for n in c.degrees():
            total_map = Matrix.zero(self.ring, c.rank(n), c.rank(n))
            for w, r in self.coaction.items():
                total_map = total_map + r[n]
                for v, s in self.coaction.items():
                    prod = r[n] @ s[n]
                    want = r[n] if v == w else Matrix.zero(self.ring, c.rank(n), c.rank(n))
                    if prod != want:
                        what = "idempotent" if v == w else "orthogonal"
                        raise InvariantError(f"coaction components not {what}", f"weights ({w}, {v}), degree {n}")
            if not total_map.is_identity():
                raise InvariantError("coaction components do not sum to the identity (counit)", f"degree {n}")

    def component(self, w: int) -> ChainMap:
        return self.coaction.get(w) or ChainMap.zero(self.carrier, self.carrier)


def to_comodule(x: GradedComplex) -> Comodule:
    c = total(x)
    idx = _total_index(x)
    ring = x.ring
    coaction = {}
    for w, p in x.pieces.items():
        comps = {}
        for n in p.degrees():
            diag = [ring.zero] * c.rank(n)
            for k in range(p.rank(n)):
                diag[idx[(w, n)] + k] = ring.one
            comps[n] = Matrix.diagonal(ring, diag)
        coaction[w] = ChainMap(c, c, comps, check=False)
    return Comodule(ring, c, coaction, check=False)


def from_comodule_with_iso(c: Comodule) -> tuple[GradedComplex, ChainMap]:
    """Pieces ``im ρ_w`` on canonical (echelon) bases, and the iso ``total(pieces) -> carrier``."""
    c.validate()
    ring = c.ring
    car = c.carrier
    bases: dict[int, dict[int, Lattice]] = {}
    pieces = {}
    for w, r in c.coaction.items():
        bases[w] = {n: image(r[n]) for n in car.degrees()}
        ranks = {n: L.rank for n, L in bases[w].items()}
        diffs = {}
        for n, L in bases[w].items():
            below = bases[w].get(n - 1)
            if L.rank and below is not None and below.rank:
                d = car.d(n)
                diffs[n] = Matrix.from_columns(ring, [below.coords(d.apply(v)) for v in L.basis], below.rank)
        pieces[w] = ChainComplex(ring, ranks, diffs, check=False)
    g = GradedComplex(ring, pieces)
    comps = {}
    for n in car.degrees():
        cols = []
        for w in g.weights():
            cols += [list(v) for v in bases[w][n].basis]
        comps[n] = Matrix.from_columns(ring, cols, car.rank(n))
    return g, ChainMap(total(g), car, comps, check=True)


def from_comodule(c: Comodule) -> GradedComplex:
    return from_comodule_with_iso(c)[0]
