"""Graded modules over the Rees algebra ``R[t]`` (``t`` of weight -1).

A module is stored like a filtered complex: pieces ``M(w)`` on a window
``[bottom, top]``, ``t: M(w) -> M(w-1)``, and a tail flag for the weights
below the window.  ``to_rees`` and ``from_rees`` are transcriptions, so the
round trips are exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import RingMismatchError
from .exactla import (BaseRing, ChainComplex, ChainMap, Matrix, block, cone, direct_sum, tensor, tensor_maps)
from .filtered import (CONSTANT, DayTensor, FilteredComplex, day_tensor_filtered_data, gr_window,
                       kan_extend, unit_filtered)
from .graded import GradedComplex


class ReesModule:
    __slots__ = ("ring", "bottom", "top", "tail", "_pieces", "_t")

    def __init__(self, ring: BaseRing, bottom: int, top: int, pieces: Mapping[int, ChainComplex],
                 t_action: Mapping[int, ChainMap] | None = None, tail: str = CONSTANT, check: bool = True):
        # validation is shared with the filtered side
        f = FilteredComplex(ring, bottom, top, pieces, t_action, tail, check=check)
        self.ring = ring
        self.bottom, self.top, self.tail = f.bottom, f.top, f.tail
        self._pieces = f.levels
        self._t = f.structure_maps

    def piece(self, w: int) -> ChainComplex:
        if w > self.top:
            return ChainComplex.zero(self.ring)
        if w < self.bottom:
            return self._pieces[self.bottom] if self.tail == CONSTANT else ChainComplex.zero(self.ring)
        return self._pieces[w]

    def t(self, w: int) -> ChainMap:
        """``t: M(w) -> M(w-1)`` for any weight ``w``."""
        if self.bottom < w <= self.top:
            return self._t[w]
        if w <= self.bottom and self.tail == CONSTANT:
            return ChainMap.identity(self.piece(w))
        return ChainMap.zero(self.piece(w), self.piece(w - 1))

    @property
    def pieces(self) -> dict[int, ChainComplex]:
        return dict(self._pieces)

    @property
    def t_action(self) -> dict[int, ChainMap]:
        return dict(self._t)

    @property
    def underlying_graded(self) -> GradedComplex:
        return GradedComplex(self.ring, self._pieces)

    def window(self, depth: int = 0) -> GradedComplex:
        """Pieces on ``[bottom - depth, top]``; ``depth`` copies of a constant tail are written out."""
        return GradedComplex(self.ring, {w: self.piece(w) for w in range(self.bottom - depth, self.top + 1)})

    def __eq__(self, other):
        if not isinstance(other, ReesModule):
            return NotImplemented
        return (self.ring == other.ring and (self.bottom, self.top, self.tail) == (other.bottom, other.top, other.tail)
                and self._pieces == other._pieces and self._t == other._t)

    def __hash__(self):
        return hash((self.ring, self.bottom, self.top, self.tail, tuple(self._pieces.items())))

    def __repr__(self):
        return f"ReesModule({self.ring}, [{self.bottom}, {self.top}], tail={self.tail}, pieces={self._pieces})"


def to_rees(x: FilteredComplex) -> ReesModule:
    return ReesModule(x.ring, x.bottom, x.top, x.levels, x.structure_maps, x.tail, check=False)


def from_rees(m: ReesModule) -> FilteredComplex:
    return FilteredComplex(m.ring, m.bottom, m.top, m.pieces, m.t_action, m.tail, check=False)


def rees_unit(ring: BaseRing) -> ReesModule:
    """``R[t]``: ``ring`` in every weight ``<= 0``, ``t`` the identity."""
    return to_rees(unit_filtered(ring))


def truncate_tail(m: ReesModule, depth: int) -> ReesModule:
    """Write out ``depth`` tail weights explicitly (same module, wider window)."""
    b = m.bottom - depth
    pieces = {w: m.piece(w) for w in range(b, m.top + 1)}
    ts = {w: m.t(w) for w in range(b + 1, m.top + 1)}
    return ReesModule(m.ring, b, m.top, pieces, ts, m.tail, check=False)


def coaction_index(m: ReesModule, depth: int) -> list[int]:
    """Weight of each basis element of the windowed module, in carrier order.

    This is the index ``w`` with ``ρ_w(e) = e`` for the comodule of the
    window; for ``R[t]`` the element ``t^n`` sits at ``-n``.
    """
    from .graded import to_comodule

    c = to_comodule(m.window(depth))
    out = []
    for n in c.carrier.degrees():
        for k in range(c.carrier.rank(n)):
            e = [1 if i == k else 0 for i in range(c.carrier.rank(n))]
            hits = [w for w, r in c.coaction.items() if r[n].apply(e) == e]
            out.append(hits[0] if len(hits) == 1 else None)
    return out


# -- resolution ---------------------------------------------------------------

@dataclass
class ReesResolution:
    """``0 -> F1 -> F0 -> M -> 0`` with ``F0``, ``F1`` free.

    ``F0`` has a generator copy of ``M(w)`` in weight ``w`` for each ``w`` of
    the window; ``F1`` has a copy of ``M(w)`` in weight ``w - 1`` for each
    ``w`` in :attr:`relation_weights`.  ``delta`` sends a generator ``m`` to
    ``t·m - t_M(m)``.
    """

    module: ReesModule
    F0: ReesModule
    F1: ReesModule
    relation_weights: list
    delta: dict  # weight -> ChainMap F1(k) -> F0(k)
    augmentation: dict  # weight -> ChainMap F0(k) -> M(k)

    def weights(self) -> range:
        return range(self.module.bottom - 1, self.module.top + 1)

    def delta_at(self, k: int) -> ChainMap:
        """Below the computed range every piece is constant (or zero)."""
        lo = self.module.bottom - 1
        if k > self.module.top:
            return ChainMap.zero(ChainComplex.zero(self.module.ring), ChainComplex.zero(self.module.ring))
        return self.delta[max(k, lo)]

    def cone(self, k: int) -> ChainComplex:
        return cone(self.delta_at(k))


def _gen_weights(m: ReesModule) -> list[int]:
    return list(range(m.bottom, m.top + 1))


def _rel_weights(m: ReesModule) -> list[int]:
    lo = m.bottom + 1 if m.tail == CONSTANT else m.bottom
    return list(range(lo, m.top + 1))


def rees_resolution(m: ReesModule) -> ReesResolution:
    ring = m.ring
    gens = _gen_weights(m)
    rels = _rel_weights(m)
    F0 = to_rees(kan_extend(GradedComplex(ring, {w: m.piece(w) for w in gens})))
    F1 = to_rees(kan_extend(GradedComplex(ring, {w - 1: m.piece(w) for w in rels})))
    lo, hi = m.bottom - 1, m.top
    delta, aug = {}, {}
    for k in range(lo, hi + 1):
        f0 = [w for w in gens if w >= k]
        f1 = [w for w in rels if w - 1 >= k]
        src = direct_sum([m.piece(w) for w in f1], ring=ring)
        tgt = direct_sum([m.piece(w) for w in f0], ring=ring)
        comps = {}
        for n in src.degrees():
            s_sizes = [m.piece(w).rank(n) for w in f1]
            t_sizes = [m.piece(w).rank(n) for w in f0]
            blocks = {}
            for a, w in enumerate(f1):
                blocks[(f0.index(w), a)] = Matrix.identity(ring, s_sizes[a])
                if w - 1 in f0:
                    blocks[(f0.index(w - 1), a)] = -m.t(w)[n]
            comps[n] = block(ring, t_sizes, s_sizes, blocks)
        delta[k] = ChainMap(src, tgt, comps, check=False)
        # augmentation: t^{w-k} on summand w
        acomps = {}
        for n in tgt.degrees():
            cols = []
            for w in f0:
                f = ChainMap.identity(m.piece(w))
                for j in range(w, k, -1):
                    f = m.t(j) @ f
                cols.append(f[n])
            acomps[n] = block(ring, [m.piece(k).rank(n)], [c.cols for c in cols],
                              {(0, j): c for j, c in enumerate(cols)})
        aug[k] = ChainMap(tgt, m.piece(k), acomps, check=False)
    # the F0/F1 pieces below lo are constant and agree with the lo entries
    return ReesResolution(m, F0, F1, rels, delta, aug)


# -- derived tensor -----------------------------------------------------------

def rees_tensor(m: ReesModule, n: ReesModule) -> ReesModule:
    """``m ⊗^L n`` over ``R[t]`` as ``cone(F1 ⊗ n -> F0 ⊗ n)`` for the resolution of ``m``.

    In weight ``k``: ``F0 ⊗ n = ⊕_u M(u) ⊗ N(k-u)`` and ``F1 ⊗ n = ⊕_u M(u) ⊗ N(k-u+1)``;
    ``t`` acts through ``n``.  No tail truncation is needed: below the window
    every ``N`` index lies in the tail of ``n``.
    """
    if m.ring != n.ring:
        raise RingMismatchError(f"tensor of Rees modules over {m.ring} and {n.ring}")
    ring = m.ring
    gens, rels = _gen_weights(m), _rel_weights(m)
    lo, hi = m.bottom + n.bottom - 1, m.top + n.top
    pieces = {}
    for k in range(lo, hi + 1):
        f0 = [tensor(m.piece(u), n.piece(k - u)) for u in gens]
        f1 = [tensor(m.piece(u), n.piece(k - u + 1)) for u in rels]
        src = direct_sum(f1, ring=ring)
        tgt = direct_sum(f0, ring=ring)
        comps = {}
        for d in src.degrees():
            s_sizes = [c.rank(d) for c in f1]
            t_sizes = [c.rank(d) for c in f0]
            blocks = {}
            for a, u in enumerate(rels):
                j = k - u + 1
                tn = tensor_maps(ChainMap.identity(m.piece(u)), n.t(j))
                blocks[(gens.index(u), a)] = tn[d]
                if u - 1 in gens:
                    tm = tensor_maps(m.t(u), ChainMap.identity(n.piece(j)))
                    blocks[(gens.index(u - 1), a)] = -tm[d]
            comps[d] = block(ring, t_sizes, s_sizes, blocks)
        delta = ChainMap(src, tgt, comps, check=False)
        pieces[k] = cone(delta)
    ts = {}
    for k in range(lo + 1, hi + 1):
        c_hi, c_lo = pieces[k], pieces[k - 1]
        comps = {}
        for d in c_hi.degrees():
            tb = [tensor_maps(ChainMap.identity(m.piece(u)), n.t(k - u))[d] for u in gens]
            sb = [tensor_maps(ChainMap.identity(m.piece(u)), n.t(k - u + 1))[d - 1] for u in rels]
            mats = tb + sb
            comps[d] = block(ring, [x.rows for x in mats], [x.cols for x in mats],
                             {(i, i): x for i, x in enumerate(mats)})
        ts[k] = ChainMap(c_hi, c_lo, comps, check=False)
    return ReesModule(ring, lo, hi, pieces, ts, n.tail, check=False)


# -- base change ----------------------------------------------------------------

def closed_point_pullback(m: ReesModule) -> GradedComplex:
    """Base change along ``t ↦ 0``: weight ``w`` is ``cone(t: M(w+1) -> M(w))``."""
    f = from_rees(m)
    return GradedComplex(m.ring, {w: cone(m.t(w + 1)) for w in gr_window(f)})


def generic_point_pullback(m: ReesModule) -> ChainComplex:
    """Base change along ``t ↦ 1``: the colimit along ``t``."""
    return m.piece(m.bottom) if m.tail == CONSTANT else ChainComplex.zero(m.ring)


# -- comparison with the Day tensor -------------------------------------------

def comparison_map(x: FilteredComplex, y: FilteredComplex, k: int, day: DayTensor | None = None,
                   tensor_: ReesModule | None = None) -> ChainMap:
    """Weight-``k`` map ``rees_tensor(to_rees x, to_rees y)(k) -> to_rees(x ⊗_Day y)(k)``.

    The ``F0`` summand ``x_u ⊗ y_{k-u}`` goes to the colimit through the
    vertex ``(u, k-u)`` (with ``k-u`` moved up to the bottom of a constant
    tail of ``y``); the ``F1`` part goes to zero.
    """
    mx, ny = to_rees(x), to_rees(y)
    t = tensor_ if tensor_ is not None else rees_tensor(mx, ny)
    day = day if day is not None else day_tensor_filtered_data(x, y, warn=False)
    src = t.piece(k)
    tgt = day.result.level(k)
    lvl = day.level_data(k)
    ring = x.ring
    gens = _gen_weights(mx)
    comps = {}
    for d in src.degrees():
        rows = tgt.rank(d)
        mats = []
        for u in gens:
            j = k - u
            a = tensor(mx.piece(u), ny.piece(j))
            blk = Matrix.zero(ring, rows, a.rank(d))
            if a.rank(d) and lvl is not None:
                jj = max(j, y.bottom) if y.tail == CONSTANT else j
                vm = lvl.vertex_map((u, jj))
                if vm is not None:
                    blk = vm[d]
            mats.append(blk)
        f1 = sum(tensor(mx.piece(u), ny.piece(k - u + 1)).rank(d - 1) for u in _rel_weights(mx))
        mats.append(Matrix.zero(ring, rows, f1))
        comps[d] = block(ring, [rows], [x_.cols for x_ in mats], {(0, i): x_ for i, x_ in enumerate(mats)})
    return ChainMap(src, tgt, comps, check=True)


def comparison_weights(x: FilteredComplex, y: FilteredComplex) -> range:
    """Weights on which the comparison has to be checked (window plus one tail weight)."""
    lo = min(x.bottom, x.bottom - 1) + min(y.bottom, y.bottom - 1) - 2
    return range(lo, x.top + y.top + 1)
