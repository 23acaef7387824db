"""Bounded filtered complexes ``… → X_n → X_{n-1} → …``.

Only a window ``[bottom, top]`` of levels is stored.  Above ``top`` every
level is zero.  Below ``bottom`` the tail is either ``"constant"`` (``X_n =
X_bottom`` with identity maps) or ``"zero"`` (``X_n = 0``).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .errors import InvariantError, RingMismatchError
from .exactla import (BaseRing, ChainComplex, ChainMap, Lattice, Matrix, PosetDiagram, PresentedComplex, cone,
                      direct_sum, is_split_injective, kernel, poset_colimit, tensor, tensor_maps)
from .graded import GradedComplex

CONSTANT = "constant"
ZERO = "zero"
TAILS = (CONSTANT, ZERO)


class NonCellularWarning(UserWarning):
    """Strict Day convolution of inputs whose structure maps are not split injective."""


class TorsionColimitWarning(UserWarning):
    """A colimit level had torsion, so levels were replaced by free resolutions."""


class FilteredComplex:
    __slots__ = ("ring", "bottom", "top", "tail", "_levels", "_maps")

    def __init__(self, ring: BaseRing, bottom: int, top: int, levels: Mapping[int, ChainComplex],
                 structure_maps: Mapping[int, ChainMap] | None = None, tail: str = CONSTANT, check: bool = True):
        if tail not in TAILS:
            raise ValueError(f"tail must be one of {TAILS}, got {tail!r}")
        if top < bottom:
            raise ValueError(f"empty window [{bottom}, {top}]")
        self.ring = ring
        self.bottom = int(bottom)
        self.top = int(top)
        self.tail = tail
        self._levels = {}
        for n in range(bottom, top + 1):
            c = levels.get(n)
            if c is None:
                c = ChainComplex.zero(ring)
            if c.ring != ring:
                raise RingMismatchError(f"level {n} is over {c.ring}, expected {ring}")
            self._levels[n] = c
        extra = set(levels) - set(self._levels)
        if extra:
            raise InvariantError(f"levels {sorted(extra)} lie outside the window [{bottom}, {top}]")
        maps = dict(structure_maps or {})
        extra = set(maps) - set(range(bottom + 1, top + 1))
        if extra:
            raise InvariantError(f"structure maps {sorted(extra)} lie outside ({bottom}, {top}]")
        self._maps = {}
        for n in range(bottom + 1, top + 1):
            f = maps.get(n)
            src, tgt = self._levels[n], self._levels[n - 1]
            if f is None:
                f = ChainMap.zero(src, tgt)
            elif f.source != src or f.target != tgt:
                raise InvariantError("structure map endpoints differ from the levels", f"level {n} -> {n - 1}")
            elif check:
                # re-validate commutation with differentials
                try:
                    ChainMap(src, tgt, f.components(), check=True)
                except InvariantError as e:
                    raise InvariantError(e.args[0], f"structure map {n} -> {n - 1}, {e.where}") from None
            self._maps[n] = f

    # -- accessors ------------------------------------------------------------

    def level(self, n: int) -> ChainComplex:
        if n > self.top:
            return ChainComplex.zero(self.ring)
        if n < self.bottom:
            return self._levels[self.bottom] if self.tail == CONSTANT else ChainComplex.zero(self.ring)
        return self._levels[n]

    def structure_map(self, n: int) -> ChainMap:
        """``X_n -> X_{n-1}`` for any integer ``n``."""
        if self.bottom < n <= self.top:
            return self._maps[n]
        src, tgt = self.level(n), self.level(n - 1)
        if n <= self.bottom and self.tail == CONSTANT:
            return ChainMap.identity(src)
        return ChainMap.zero(src, tgt)

    def transition(self, m: int, n: int) -> ChainMap:
        """Composite ``X_m -> X_n`` for ``m >= n``."""
        f = ChainMap.identity(self.level(m))
        for k in range(m, n, -1):
            f = self.structure_map(k) @ f
        return f

    @property
    def levels(self) -> dict[int, ChainComplex]:
        return dict(self._levels)

    @property
    def structure_maps(self) -> dict[int, ChainMap]:
        return dict(self._maps)

    def window(self) -> range:
        return range(self.bottom, self.top + 1)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self._levels.values())

    def normalized(self) -> FilteredComplex:
        """Drop zero levels at the top, and at the bottom of a zero tail."""
        b, t = self.bottom, self.top
        while t > b and self._levels[t].is_zero():
            t -= 1
        if self.tail == ZERO:
            while b < t and self._levels[b].is_zero():
                b += 1
        if (b, t) == (self.bottom, self.top):
            return self
        return FilteredComplex(self.ring, b, t, {n: self._levels[n] for n in range(b, t + 1)},
                               {n: self._maps[n] for n in range(b + 1, t + 1)}, self.tail, check=False)

    def __eq__(self, other):
        if not isinstance(other, FilteredComplex):
            return NotImplemented
        return (self.ring == other.ring and self.bottom == other.bottom and self.top == other.top
                and self.tail == other.tail and self._levels == other._levels and self._maps == other._maps)

    def __hash__(self):
        return hash((self.ring, self.bottom, self.top, self.tail, tuple(self._levels.items())))

    def __repr__(self):
        return f"FilteredComplex({self.ring}, [{self.bottom}, {self.top}], tail={self.tail}, levels={self._levels})"


def zero_filtered(ring: BaseRing) -> FilteredComplex:
    return FilteredComplex(ring, 0, 0, {}, tail=ZERO)


def unit_filtered(ring: BaseRing) -> FilteredComplex:
    """``ring`` at every level ``n <= 0`` with identity maps."""
    return FilteredComplex(ring, 0, 0, {0: ChainComplex.concentrated(ring)}, tail=CONSTANT)


def algebra_A(ring: BaseRing) -> FilteredComplex:
    """``ring`` in level 0 only; every other level is zero."""
    return FilteredComplex(ring, 0, 0, {0: ChainComplex.concentrated(ring)}, tail=ZERO)


def res(x: FilteredComplex) -> GradedComplex:
    """Forget the structure maps; the constant tail is represented by its value at ``bottom``."""
    return GradedComplex(x.ring, x.levels)


def kan_extend(g: GradedComplex) -> FilteredComplex:
    """``(I g)_n = ⊕_{m >= n} g(m)`` (weights ascending) with the summand inclusions."""
    ring = g.ring
    if g.is_zero():
        return zero_filtered(ring)
    ws = g.weights()
    lo, hi = ws[0], ws[-1]
    levels = {n: direct_sum([g.piece(m) for m in ws if m >= n], ring=ring) for n in range(lo, hi + 1)}
    maps = {}
    for n in range(lo + 1, hi + 1):
        src, tgt = levels[n], levels[n - 1]
        head = g.piece(n - 1)
        comps = {}
        for k in src.degrees():
            off = head.rank(k)
            comps[k] = Matrix.from_columns(ring, [[1 if i == off + j else 0 for i in range(tgt.rank(k))]
                                                  for j in range(src.rank(k))], tgt.rank(k))
        maps[n] = ChainMap(src, tgt, comps, check=False)
    return FilteredComplex(ring, lo, hi, levels, maps, CONSTANT, check=False)


def gr_window(x: FilteredComplex) -> range:
    lo = x.bottom if x.tail == CONSTANT else x.bottom - 1
    return range(lo, x.top + 1)


def gr(x: FilteredComplex) -> GradedComplex:
    """``gr_i = cone(X_{i+1} -> X_i)``; the acyclic cones of a constant tail are left out."""
    return GradedComplex(x.ring, {i: cone(x.structure_map(i + 1)) for i in gr_window(x)})


def underlying(x: FilteredComplex) -> ChainComplex:
    """The colimit of the filtration: ``X_bottom`` for a constant tail, zero otherwise."""
    return x.level(x.bottom) if x.tail == CONSTANT else ChainComplex.zero(x.ring)


def is_cellular(x: FilteredComplex) -> bool:
    """Every structure map (tail included) is degreewise split injective."""
    ns = range(x.bottom + 1, x.top + 2) if x.tail == CONSTANT else range(x.bottom, x.top + 2)
    return all(is_split_injective(x.structure_map(n)) for n in ns)


def direct_sum_filtered(x: FilteredComplex, y: FilteredComplex) -> FilteredComplex:
    if x.ring != y.ring:
        raise RingMismatchError("direct sum of filtered complexes over different rings")
    if x.tail != y.tail:
        raise ValueError("direct sum needs matching tails")
    b, t = min(x.bottom, y.bottom), max(x.top, y.top)
    levels = {n: direct_sum([x.level(n), y.level(n)], ring=x.ring) for n in range(b, t + 1)}
    maps = {}
    for n in range(b + 1, t + 1):
        f, g = x.structure_map(n), y.structure_map(n)
        comps = {k: _block2(x.ring, f[k], g[k]) for k in levels[n].degrees()}
        maps[n] = ChainMap(levels[n], levels[n - 1], comps, check=False)
    return FilteredComplex(x.ring, b, t, levels, maps, x.tail, check=False)


def _block2(ring, a: Matrix, b: Matrix) -> Matrix:
    from .exactla import block_diag
    return block_diag(ring, [a, b])


# -- Res ⊣ I ------------------------------------------------------------------

def _solve(ring: BaseRing, unknowns: list[tuple], residual: Callable[[dict], list[Matrix]]) -> tuple[Lattice, list]:
    """Kernel of a linear map on tuples of matrices.

    ``unknowns`` is a list of ``(key, rows, cols)``; ``residual`` maps a dict of
    matrices to a list of matrices that must all vanish.  Returns the solution
    lattice in the flattened coordinates and the coordinate layout.
    """
    layout = []
    for key, r, c in unknowns:
        for i in range(r):
            for j in range(c):
                layout.append((key, i, j))
    shapes = {key: (r, c) for key, r, c in unknowns}
    cols = []
    for key, i, j in layout:
        mats = {k: Matrix.zero(ring, *s) for k, s in shapes.items()}
        m = mats[key].to_lists()
        m[i][j] = ring.one
        mats[key] = Matrix(ring, *shapes[key], m)
        res_vec = []
        for r in residual(mats):
            for row in r.to_lists():
                res_vec += row
        cols.append(res_vec)
    if not layout:
        return Lattice(ring, 0), layout
    height = len(cols[0])
    if height == 0:
        return Lattice.full(ring, len(layout)), layout
    return kernel(Matrix.from_columns(ring, cols, height)), layout


def _chain_residuals(src: ChainComplex, tgt: ChainComplex, comps: Mapping[int, Matrix]) -> list[Matrix]:
    out = []
    for n in set(src.degrees()) | {k + 1 for k in src.degrees()}:
        f_n = comps.get(n, Matrix.zero(src.ring, tgt.rank(n), src.rank(n)))
        f_m = comps.get(n - 1, Matrix.zero(src.ring, tgt.rank(n - 1), src.rank(n - 1)))
        out.append(tgt.d(n) @ f_n - f_m @ src.d(n))
    return out


@dataclass
class AdjunctionReport:
    ring: BaseRing
    filtered_rank: int
    graded_rank: int
    bijective: bool
    counts: tuple | None = None  # (|Hom_filt|, |Hom_gr|) over a finite field

    @property
    def ok(self) -> bool:
        return self.bijective and self.filtered_rank == self.graded_rank

    def __bool__(self):
        return self.ok


def adjunction_check(g: GradedComplex, x: FilteredComplex) -> AdjunctionReport:
    """Compare filtered maps ``I(g) -> x`` with weight-wise maps ``g(w) -> x_w``.

    Restriction to the summands ``g(w) ⊂ I(g)_w`` is shown to be a bijection
    between the two solution modules.
    """
    if g.ring != x.ring:
        raise RingMismatchError("adjunction check over different rings")
    ring = g.ring
    ig = kan_extend(g)
    ws = g.weights()
    # graded side: one chain map per weight of g
    gu = []
    for w in ws:
        for n in sorted(set(g.piece(w).degrees()) | set(x.level(w).degrees())):
            gu.append(((w, n), x.level(w).rank(n), g.piece(w).rank(n)))

    def g_res(mats):
        out = []
        for w in ws:
            out += _chain_residuals(g.piece(w), x.level(w), {n: m for (v, n), m in mats.items() if v == w})
        return out

    G, glayout = _solve(ring, gu, g_res)

    # filtered side: f_n for n in [lo, top of I(g)]; lower levels are forced by the constant tail of I(g)
    if g.is_zero():
        levels = []
    else:
        lo = min(ig.bottom, x.bottom)
        levels = list(range(lo, ig.top + 1))
    fu = []
    for k in levels:
        for n in sorted(set(ig.level(k).degrees()) | set(x.level(k).degrees())):
            fu.append(((k, n), x.level(k).rank(n), ig.level(k).rank(n)))

    def f_res(mats):
        comps = {k: {n: m for (v, n), m in mats.items() if v == k} for k in levels}
        out = []
        for k in levels:
            out += _chain_residuals(ig.level(k), x.level(k), comps[k])
        for k in levels[1:]:
            s_ig, s_x = ig.structure_map(k), x.structure_map(k)
            for n in ig.level(k).degrees():
                a = comps[k - 1].get(n, Matrix.zero(ring, x.level(k - 1).rank(n), ig.level(k - 1).rank(n)))
                b = comps[k].get(n, Matrix.zero(ring, x.level(k).rank(n), ig.level(k).rank(n)))
                out.append(a @ s_ig[n] - s_x[n] @ b)
        return out

    F, flayout = _solve(ring, fu, f_res)

    # restriction: f_w composed with the inclusion of g(w) as the first summand of I(g)_w
    gindex = {key: i for i, key in enumerate(glayout)}
    images = []
    for vec in F.basis:
        out = [ring.zero] * len(glayout)
        for val, (key, i, j) in zip(vec, flayout):
            if val == 0:
                continue
            w, n = key
            if w in ws and j < g.piece(w).rank(n):
                out[gindex[((w, n), i, j)]] = val
        images.append(out)
    img = Lattice(ring, len(glayout), images)
    bijective = img.rank == F.rank and img == G
    counts = None
    if ring.is_field and ring.p:
        counts = (ring.p ** F.rank, ring.p ** G.rank)
    return AdjunctionReport(ring, F.rank, G.rank, bijective, counts)


# -- Day convolution ----------------------------------------------------------

@dataclass
class DayLevel:
    """One level of a Day tensor: the presented colimit and the map from its generators to the free model."""

    vertices: list
    presented: PresentedComplex
    to_model: ChainMap  # generators -> chosen free model of the level

    def vertex_map(self, v) -> ChainMap | None:
        if v not in self.presented.offsets:
            return None
        inc = self.presented.vertex_inclusion(v)
        src = self.presented_objects[v]
        comps = {n: self.to_model[n] @ inc[n] for n in inc}
        return ChainMap(src, self.to_model.target, comps, check=False)

    presented_objects: dict = field(default_factory=dict)


@dataclass
class DayTensor:
    result: FilteredComplex
    levels: dict  # n -> DayLevel
    resolved: bool  # True when levels are cones of relation inclusions rather than exact quotients

    def level_data(self, n: int) -> DayLevel | None:
        r = self.result
        if n > r.top:
            return None
        if n < r.bottom:
            if r.tail == ZERO:
                return None
            n = r.bottom
        return self.levels.get(n)


def _tail_bottom(x: FilteredComplex) -> int:
    return x.bottom - 1 if x.tail == ZERO else x.bottom


def day_tensor_filtered_data(x: FilteredComplex, y: FilteredComplex, warn: bool = True) -> DayTensor:
    if x.ring != y.ring:
        raise RingMismatchError(f"Day convolution of filtered complexes over {x.ring} and {y.ring}")
    ring = x.ring
    if warn and not (is_cellular(x) and is_cellular(y)):
        warnings.warn("strict Day convolution of non-cellular filtered complexes need not be homotopically "
                      "correct", NonCellularWarning, stacklevel=3)
    bx, by = _tail_bottom(x), _tail_bottom(y)
    lo, hi = bx + by, x.top + y.top
    objects = {(i, j): tensor(x.level(i), y.level(j))
               for i in range(bx, x.top + 1) for j in range(by, y.top + 1)}
    edges = {}
    for (i, j) in objects:
        if (i - 1, j) in objects:
            edges[((i, j), (i - 1, j))] = (x.structure_map(i), "x")
        if (i, j - 1) in objects:
            edges[((i, j), (i, j - 1))] = (y.structure_map(j), "y")
    emaps = {}
    for (u, v), (f, side) in edges.items():
        a, b = objects[u], objects[v]
        g = tensor_maps(f, ChainMap.identity(y.level(u[1]))) if side == "x" else \
            tensor_maps(ChainMap.identity(x.level(u[0])), f)
        emaps[(u, v)] = ChainMap(a, b, g.components(), check=False)

    presented = {}
    verts = {}
    for n in range(lo, hi + 1):
        vs = sorted((v for v in objects if v[0] + v[1] >= n), key=lambda v: (-(v[0] + v[1]), -v[0]))
        sub = {v: objects[v] for v in vs}
        diag = PosetDiagram(ring, sub, {e: f for e, f in emaps.items() if e[0] in sub and e[1] in sub}, order=vs)
        presented[n] = poset_colimit(diag, check=False)
        verts[n] = vs

    resolved = not all(p.is_free() for p in presented.values())
    if resolved:
        warnings.warn("Day tensor colimit has torsion; levels replaced by quasi-isomorphic free models",
                      TorsionColimitWarning, stacklevel=3)
    models, to_model = {}, {}
    for n, p in presented.items():
        if resolved:
            c, inc = p.resolution()
            models[n], to_model[n] = c, inc
        else:
            proj = p.projection()
            models[n], to_model[n] = proj.target, proj

    maps = {}
    for n in range(lo + 1, hi + 1):
        maps[n] = _induced_level_map(presented[n], presented[n - 1], verts[n], verts[n - 1],
                                     to_model[n], to_model[n - 1], resolved)
    tail = CONSTANT if x.tail == CONSTANT and y.tail == CONSTANT else ZERO
    result = FilteredComplex(ring, lo, hi, models, maps, tail, check=False)
    levels = {n: DayLevel(verts[n], presented[n], to_model[n], {v: objects[v] for v in verts[n]})
              for n in presented}
    return DayTensor(result, levels, resolved)


def _induced_level_map(p_hi: PresentedComplex, p_lo: PresentedComplex, v_hi, v_lo, m_hi: ChainMap,
                       m_lo: ChainMap, resolved: bool) -> ChainMap:
    """Map between consecutive levels induced by the inclusion of index posets."""
    ring = p_hi.ring
    g_hi, g_lo = p_hi.generators, p_lo.generators
    inc = {}
    for n in g_hi.degrees():
        cols = []
        for v in v_hi:
            off_lo = p_lo.offsets[v][n]
            for j in range(p_hi.sizes[v][n]):
                col = [ring.zero] * g_lo.rank(n)
                col[off_lo + j] = ring.one
                cols.append(col)
        inc[n] = Matrix.from_columns(ring, cols, g_lo.rank(n))
    if not resolved:
        q_hi = m_hi.target
        sect = p_hi.quotient()[2]
        comps = {n: m_lo[n] @ inc[n] @ sect[n] for n in q_hi.degrees()}
        return ChainMap(q_hi, m_lo.target, comps, check=True)
    # cone(R_hi -> G_hi) -> cone(R_lo -> G_lo): generators by inclusion, relations by coordinates
    r_hi, r_lo = p_hi.relations, p_lo.relations
    c_hi, c_lo = m_hi.target, m_lo.target
    comps = {}
    for n in c_hi.degrees():
        a_hi, a_lo = g_hi.rank(n), g_lo.rank(n)
        rel_hi = r_hi.get(n - 1)
        rel_lo = r_lo.get(n - 1)
        rows = [[ring.zero] * c_hi.rank(n) for _ in range(c_lo.rank(n))]
        if a_hi:
            for i in range(a_lo):
                for j in range(a_hi):
                    rows[i][j] = inc[n][i, j]
        if rel_hi is not None and rel_hi.rank:
            for j, v in enumerate(rel_hi.basis):
                w = inc[n - 1].apply(v)
                coords = rel_lo.coords(w)
                for i, c in enumerate(coords):
                    rows[a_lo + i][a_hi + j] = c
        comps[n] = Matrix(ring, c_lo.rank(n), c_hi.rank(n), rows)
    return ChainMap(c_hi, c_lo, comps, check=True)


def day_tensor_filtered(x: FilteredComplex, y: FilteredComplex, warn: bool = True) -> FilteredComplex:
    """``(x⊗y)_n = colim_{i+j >= n} x_i ⊗ y_j``, zero levels at the edges trimmed."""
    return day_tensor_filtered_data(x, y, warn=warn).result.normalized()


def tensor_with_A(x: FilteredComplex, warn: bool = False) -> GradedComplex:
    """``x ⊗ 𝔸`` read as a graded complex: level ``n`` is the strict cofibre ``X_n / X_{n+1}``."""
    t = day_tensor_filtered(x, algebra_A(x.ring), warn=warn)
    return GradedComplex(x.ring, t.levels)
