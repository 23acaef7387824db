"""Strict colimits of finite poset-shaped diagrams of chain complexes.

The colimit is computed degreewise as the cokernel of
``⊕_edges C_src -> ⊕_vertices C_v, x ↦ f(x) - x``.  Over Z this cokernel
need not be free, so :func:`poset_colimit` returns a
:class:`PresentedComplex` (generators modulo a relation subcomplex).  It can
be turned into a free complex either exactly (:meth:`PresentedComplex.quotient`,
only when every degree is torsion-free) or up to quasi-isomorphism
(:meth:`PresentedComplex.resolution`, always).
"""
from __future__ import annotations

from typing import Hashable, Mapping, Sequence

from ..errors import InvariantError, RingMismatchError
from .complexes import ChainComplex, ChainMap, boundaries, cone, direct_sum
from .lattice import HomologyModule, Lattice, Subquotient, from_orders
from .matrix import Matrix
from .normal import diagonalize, invariant_factors
from .rings import BaseRing


class PosetDiagram:
    """Complexes on the vertices of a finite poset, chain maps on its covering edges ``u -> v``."""

    def __init__(self, ring: BaseRing, objects: Mapping[Hashable, ChainComplex],
                 edges: Mapping[tuple, ChainMap], order: Sequence[Hashable] | None = None):
        self.ring = ring
        self.vertices = list(order) if order is not None else list(objects)
        if set(self.vertices) != set(objects):
            raise ValueError("vertex order must list every object exactly once")
        self.objects = dict(objects)
        self.edges = dict(edges)
        for v, c in self.objects.items():
            if c.ring != ring:
                raise RingMismatchError(f"vertex {v!r} is over {c.ring}, diagram over {ring}")
        for (u, v), f in self.edges.items():
            if u not in self.objects or v not in self.objects:
                raise ValueError(f"edge {(u, v)!r} has an unknown endpoint")
            if f.source != self.objects[u] or f.target != self.objects[v]:
                raise InvariantError("edge map endpoints differ from vertex objects", f"edge {(u, v)!r}")

    def _topological(self) -> list:
        indeg = {v: 0 for v in self.vertices}
        out = {v: [] for v in self.vertices}
        for u, v in self.edges:
            indeg[v] += 1
            out[u].append(v)
        ready = [v for v in self.vertices if indeg[v] == 0]
        order = []
        while ready:
            u = ready.pop(0)
            order.append(u)
            for v in out[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    ready.append(v)
        if len(order) != len(self.vertices):
            raise InvariantError("edges contain a cycle; not a poset")
        return order

    def check_commutes(self) -> None:
        """Every pair of parallel composites agrees; raises :class:`InvariantError` otherwise."""
        topo = self._topological()
        preds = {v: [] for v in self.vertices}
        for (u, v), f in self.edges.items():
            preds[v].append((u, f))
        for src in topo:
            comp = {src: ChainMap.identity(self.objects[src])}
            for v in topo:
                if v == src:
                    continue
                found = None
                for w, f in preds[v]:
                    if w in comp:
                        g = f @ comp[w]
                        if found is None:
                            found = g
                        elif g != found:
                            raise InvariantError("diagram does not commute", f"paths {src!r} -> {v!r}")
                if found is not None:
                    comp[v] = found


class PresentedComplex:
    """``G / R`` for a free complex ``G`` and a subcomplex ``R`` given by lattices ``R_n ⊂ G_n``."""

    def __init__(self, generators: ChainComplex, relations: Mapping[int, Lattice],
                 offsets: Mapping[Hashable, dict] | None = None, sizes: Mapping[Hashable, dict] | None = None):
        self.generators = generators
        self.ring = generators.ring
        self.relations = {n: relations.get(n, Lattice(self.ring, generators.rank(n)))
                          for n in generators.degrees()}
        self.offsets = dict(offsets or {})
        self.sizes = dict(sizes or {})
        self._quot = None

    def module(self, n: int) -> HomologyModule:
        """The degree-n module ``G_n / R_n`` (free summands plus torsion)."""
        G, R = self.generators.rank(n), self.relations.get(n)
        if G == 0:
            return HomologyModule.zero(self.ring)
        if not R.rank:
            return HomologyModule(self.ring, G)
        # G/R from the invariant factors of R's basis
        inv = invariant_factors(Matrix.from_rows(self.ring, R.basis, G))
        return from_orders(self.ring, [0] * (G - len(inv)) + list(inv))

    def is_free(self) -> bool:
        return all(not self.module(n).torsion for n in self.generators.degrees())

    def degrees(self) -> list[int]:
        return self.generators.degrees()

    def homology(self, n: int) -> HomologyModule:
        g = self.generators
        if g.rank(n) == 0:
            return HomologyModule.zero(self.ring)
        below = self.relations.get(n - 1, Lattice(self.ring, g.rank(n - 1)))
        z = below.preimage(g.d(n)) if g.rank(n - 1) else Lattice.full(self.ring, g.rank(n))
        b = boundaries(g, n) + self.relations[n]
        return Subquotient(z, b).module()

    # -- exact free model ---------------------------------------------------

    def _complement(self, n: int):
        """(projection G_n -> Q_n, section Q_n -> G_n) or None if G_n/R_n has torsion."""
        ring = self.ring
        N = self.generators.rank(n)
        R = self.relations[n]
        if ring.is_field or all(R.basis[i][p] == 1 for i, p in enumerate(R.pivots)):
            piv = set(R.pivots)
            free = [j for j in range(N) if j not in piv]
            rows = []
            for j in free:
                row = [ring.zero] * N
                row[j] = ring.one
                for i, p in enumerate(R.pivots):
                    # field pivots are 1 after normalisation, Z pivots here are 1 too
                    c = R.basis[i][j]
                    if c != 0:
                        row[p] = ring.reduce(row[p] - c)
                rows.append(row)
            proj = Matrix.from_rows(ring, rows, N)
            sect = Matrix.from_columns(ring, [[ring.one if i == j else ring.zero for i in range(N)] for j in free], N)
            return proj, sect
        d = diagonalize(Matrix.from_rows(ring, R.basis, N))
        if not all(x == 1 for x in d.invariants):
            return None
        r = R.rank
        proj = d.V.submatrix(range(N), range(r, N)).T
        sect = d.V_inv.submatrix(range(r, N), range(N)).T
        return proj, sect

    def quotient(self) -> tuple[ChainComplex, dict, dict]:
        """Free complex ``Q ≅ G/R`` with projections ``G_n -> Q_n`` and sections.

        Raises ``ValueError`` when some ``G_n / R_n`` has torsion.
        """
        if self._quot is not None:
            return self._quot
        proj, sect = {}, {}
        for n in self.generators.degrees():
            ps = self._complement(n)
            if ps is None:
                raise ValueError(f"colimit has torsion in degree {n}; use resolution()")
            proj[n], sect[n] = ps
        g = self.generators
        ranks = {n: proj[n].rows for n in proj}
        diffs = {n: proj[n - 1] @ g.d(n) @ sect[n] for n in proj if n - 1 in proj and ranks[n] and ranks[n - 1]}
        q = ChainComplex(self.ring, ranks, diffs, check=False)
        self._quot = (q, proj, sect)
        return self._quot

    def projection(self) -> ChainMap:
        q, proj, _ = self.quotient()
        return ChainMap(self.generators, q, proj, check=False)

    # -- quasi-isomorphic free model ----------------------------------------

    def relation_complex(self) -> tuple[ChainComplex, ChainMap]:
        g = self.generators
        ring = self.ring
        ranks = {n: L.rank for n, L in self.relations.items()}
        diffs = {}
        for n, L in self.relations.items():
            below = self.relations.get(n - 1)
            if not L.rank or below is None or not below.rank:
                continue
            d = g.d(n)
            cols = [below.coords(d.apply(v)) for v in L.basis]
            diffs[n] = Matrix.from_columns(ring, cols, below.rank)
        r = ChainComplex(ring, ranks, diffs, check=False)
        inc = ChainMap(r, g, {n: L.matrix() for n, L in self.relations.items() if L.rank}, check=False)
        return r, inc

    def resolution(self) -> tuple[ChainComplex, ChainMap]:
        """``cone(R ↪ G)`` (free, quasi-isomorphic to ``G/R``) and the map ``G -> cone``."""
        from .complexes import cone_inclusion
        _, inc = self.relation_complex()
        return cone(inc), cone_inclusion(inc)

    def vertex_inclusion(self, v: Hashable) -> dict[int, Matrix]:
        """Degreewise block inclusion of vertex ``v``'s complex into ``G``."""
        ring = self.ring
        out = {}
        for n, off in self.offsets[v].items():
            size = self.sizes[v][n]
            N = self.generators.rank(n)
            z, o = ring.zero, ring.one
            rows = tuple(tuple(o if i - off == j else z for j in range(size)) for i in range(N))
            out[n] = Matrix._raw(ring, N, size, rows)
        return out


def poset_colimit(diagram: PosetDiagram, check: bool = True) -> PresentedComplex:
    """Strict colimit of ``diagram`` as a presented complex."""
    if check:
        diagram.check_commutes()
    ring = diagram.ring
    verts = diagram.vertices
    objs = diagram.objects
    G = direct_sum([objs[v] for v in verts], ring=ring)
    offsets = {v: {} for v in verts}
    sizes = {v: {} for v in verts}
    for n in G.degrees():
        off = 0
        for v in verts:
            offsets[v][n] = off
            sizes[v][n] = objs[v].rank(n)
            off += objs[v].rank(n)
    relations = {}
    for n in G.degrees():
        N = G.rank(n)
        vecs = []
        for (u, v), f in diagram.edges.items():
            m = f[n]
            ou, ov = offsets[u][n], offsets[v][n]
            for j in range(objs[u].rank(n)):
                vec = [ring.zero] * N
                vec[ou + j] = ring.reduce(vec[ou + j] - 1)
                for i in range(m.rows):
                    x = m[i, j]
                    if x != 0:
                        vec[ov + i] = ring.reduce(vec[ov + i] + x)
                vecs.append(vec)
        relations[n] = Lattice(ring, N, vecs)
    return PresentedComplex(G, relations, offsets, sizes)
