"""Spectral sequence of a bounded filtered complex.

Structure maps need not be injective, so the filtration is first replaced by
the mapping telescope: ``T = ⊕_m X_m ⊕ ⊕_m X_m[1]`` where a shifted copy
``a ∈ X_m[1]`` has ``d a = -da + a - f(a)``.  Then ``F^s T`` (all ``X_m`` with
``m >= s`` and all ``X_m[1]`` with ``m > s``) is a subcomplex quasi-isomorphic
to ``X_s`` and the pages come from the usual cycle/boundary towers:

    Z_r^s = F^s ∩ d^{-1} F^{s+r},    E_r^s = Z_r^s / (Z_{r-1}^{s+1} + d Z_{r-1}^{s-r+1}).

Indexing: ``E_1^{s,t} = H_{s+t}(gr_s)`` and ``d_r: (s,t) -> (s+r, t-r-1)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from ._parallel import pmap
from .exactla import ChainComplex, HomologyModule, Lattice, Matrix, Subquotient, block, boundaries, cycles
from .filtered import CONSTANT, FilteredComplex

HOMOLOGICAL = "homological"
SERRE = "serre"


def to_serre(s: int, t: int) -> tuple[int, int]:
    """``(s, t) -> (p, q)`` with ``d_r: (p, q) -> (p+r, q-r+1)`` and ``p + q = -(s + t)``."""
    return s, -t - 2 * s


@dataclass
class SSPage:
    r: int
    entries: dict  # (s, t) -> HomologyModule, nonzero only
    differentials: dict  # (s, t) -> Matrix on generators, target (s+r, t-r-1)
    orders: dict = field(default_factory=dict)  # (s, t) -> generator orders (0 = free)
    ring: object = None

    def entry(self, s: int, t: int) -> HomologyModule:
        e = self.entries.get((s, t))
        return e if e is not None else HomologyModule.zero(self.ring)

    def is_zero(self) -> bool:
        return not self.entries

    def total_degree(self, n: int) -> dict:
        return {s: e for (s, t), e in self.entries.items() if s + t == n}

    def has_nonzero_differential(self) -> bool:
        return any(not m.is_zero() for m in self.differentials.values())


class FiltrationTower:
    """The telescope of ``x`` with its filtration lattices, shared by all pages."""

    def __init__(self, x: FilteredComplex):
        self.x = x
        self.ring = x.ring
        self.B = x.bottom if x.tail == CONSTANT else x.bottom - 1
        self.T = x.top
        self._build()

    def _build(self):
        x, ring = self.x, self.ring
        levels = list(range(self.B, self.T + 1))
        shifted = list(range(self.B + 1, self.T + 1))
        # summands in order: X_m (m ascending), then X_m[1] (m ascending)
        summands = [("x", m) for m in levels] + [("s", m) for m in shifted]
        self.summands = summands

        def size(kind, m, n):
            return x.level(m).rank(n) if kind == "x" else x.level(m).rank(n - 1)

        degs = set()
        for m in levels:
            degs |= set(x.level(m).degrees())
            degs |= {k + 1 for k in x.level(m).degrees()}
        ranks, offsets = {}, {}
        for n in sorted(degs):
            off = 0
            for sm in summands:
                offsets[(sm, n)] = off
                off += size(*sm, n)
            ranks[n] = off
        diffs = {}
        for n in sorted(degs):
            if not ranks.get(n - 1):
                continue
            blocks = {}
            idx = {sm: i for i, sm in enumerate(summands)}
            for m in levels:
                blocks[(idx[("x", m)], idx[("x", m)])] = x.level(m).d(n)
            for m in shifted:
                j = idx[("s", m)]
                blocks[(j, j)] = -x.level(m).d(n - 1)
                blocks[(idx[("x", m)], j)] = Matrix.identity(ring, x.level(m).rank(n - 1))
                blocks[(idx[("x", m - 1)], j)] = -x.structure_map(m)[n - 1]
            diffs[n] = block(ring, [size(*sm, n - 1) for sm in summands], [size(*sm, n) for sm in summands], blocks)
        self.complex = ChainComplex(ring, ranks, diffs, check=True)
        self.offsets = offsets
        self._size = size
        self._F = {}

    def weight(self, sm) -> int:
        kind, m = sm
        return m if kind == "x" else m - 1

    def F(self, s: int, n: int) -> Lattice:
        """``F^s T_n`` as a coordinate lattice."""
        key = (s, n)
        if key not in self._F:
            idx = []
            for sm in self.summands:
                if self.weight(sm) >= s:
                    o = self.offsets.get((sm, n), 0)
                    idx += range(o, o + self._size(*sm, n))
            self._F[key] = Lattice.coordinate(self.ring, self.complex.rank(n), idx)
        return self._F[key]

    def Z(self, r: int, s: int, n: int) -> Lattice:
        c = self.complex
        Fs = self.F(max(s, self.B), n)
        if r <= 0 or c.rank(n - 1) == 0:
            return Fs
        return self.F(s + r, n - 1).preimage(c.d(n), Fs)

    def page_module(self, r: int, s: int, n: int) -> Subquotient:
        c = self.complex
        num = self.Z(r, s, n)
        den = self.Z(r - 1, s + 1, n)
        if c.rank(n + 1):
            src = self.Z(r - 1, s - r + 1, n + 1)
            den = den + src.image(c.d(n + 1))
        return Subquotient(num, den)

    @cached_property
    def degrees(self) -> list[int]:
        return self.complex.degrees()

    def max_page(self) -> int:
        """``d_r`` vanishes for ``r`` beyond the filtration length, so this page is ``E_∞``."""
        return max(1, self.T - self.B + 1)


def page(x: FilteredComplex, r: int, tower: FiltrationTower | None = None) -> SSPage:
    if r < 1:
        raise ValueError("page index must be at least 1")
    tw = tower or FiltrationTower(x)
    c = tw.complex
    keys = [(s, n) for s in range(tw.B, tw.T + 1) for n in tw.degrees]
    mods = dict(zip(keys, pmap(lambda k: tw.page_module(r, *k), keys)))
    entries, orders, diffs = {}, {}, {}
    for (s, n), sq in mods.items():
        if sq.ngens:
            entries[(s, n - s)] = sq.module()
            orders[(s, n - s)] = sq.orders
    for (s, n), sq in mods.items():
        tgt = mods.get((s + r, n - 1))
        if not sq.ngens or tgt is None or not tgt.ngens:
            continue
        d = c.d(n)
        cols = [list(tgt.reduce(d.apply(g))) for g in sq.generators]
        diffs[(s, n - s)] = Matrix.from_columns(x.ring, cols, tgt.ngens)
    return SSPage(r, entries, diffs, orders, x.ring)


def pages(x: FilteredComplex, upto: int | None = None) -> list[SSPage]:
    tw = FiltrationTower(x)
    last = upto if upto is not None else tw.max_page()
    return [page(x, r, tw) for r in range(1, last + 1)]


def stabilization(x: FilteredComplex) -> tuple[int, SSPage]:
    """Least ``r`` after which every differential vanishes, and that page."""
    ps = pages(x)
    r_stab = 1
    for p in ps:
        if p.has_nonzero_differential():
            r_stab = p.r + 1
    tw_last = ps[-1].r
    if r_stab > tw_last:
        return r_stab, page(x, r_stab)
    return r_stab, ps[r_stab - 1]


def page_homology(p: SSPage) -> dict:
    """``H(E_r, d_r)`` computed from the presentation of ``p`` alone."""
    ring = p.ring
    r = p.r
    out = {}
    for (s, t), orders in p.orders.items():
        a = len(orders)
        rel = Lattice(ring, a, [[o if i == k else 0 for i in range(a)] for k, o in enumerate(orders) if o])
        # outgoing differential to (s + r, t - r - 1)
        dout = p.differentials.get((s, t))
        if dout is not None:
            torders = p.orders[(s + r, t - r - 1)]
            b = len(torders)
            trel = Lattice(ring, b, [[o if i == k else 0 for i in range(b)] for k, o in enumerate(torders) if o])
            ker = trel.preimage(dout)
        else:
            ker = Lattice.full(ring, a)
        din = p.differentials.get((s - r, t + r + 1))
        den = rel
        if din is not None:
            den = den + Lattice(ring, a, din.columns())
        m = Subquotient(ker, den).module()
        if not m.is_zero():
            out[(s, t)] = m
    return out


@dataclass
class AbutmentRow:
    s: int
    n: int
    graded_piece: HomologyModule
    e_infinity: HomologyModule

    @property
    def ok(self) -> bool:
        return self.graded_piece == self.e_infinity


@dataclass
class AbutmentReport:
    rows: list
    r_stab: int

    @property
    def ok(self) -> bool:
        return all(row.ok for row in self.rows)

    def __bool__(self):
        return self.ok

    def mismatches(self) -> list:
        return [row for row in self.rows if not row.ok]


def induced_filtration(x: FilteredComplex, n: int) -> dict:
    """``gr_s`` of ``F_s H_n = im(H_n(X_s) -> H_n(X_bottom))``, computed on ``x`` itself."""
    ring = x.ring
    out = {}
    if x.tail != CONSTANT:
        return out
    b, top = x.bottom, x.top
    base = x.level(b)
    if base.rank(n) == 0:
        return out
    bnd = boundaries(base, n)
    images = {}
    for s in range(b, top + 2):
        f = x.transition(s, b)
        z = cycles(x.level(s), n) if x.level(s).rank(n) else Lattice(ring, 0)
        images[s] = (z.image(f[n]) if z.rank else Lattice(ring, base.rank(n))) + bnd
    for s in range(b, top + 1):
        m = Subquotient(images[s], images[s + 1]).module()
        out[s] = m
    return out


def compare_with_abutment(x: FilteredComplex) -> AbutmentReport:
    """Check ``E_∞^{s, n-s} ≅ gr_s H_n(underlying x)`` for every ``s`` and ``n``."""
    r_stab, einf = stabilization(x)
    tw = FiltrationTower(x)
    ns = set(tw.degrees) | {s + t for s, t in einf.entries}
    for n in list(x.level(x.bottom).degrees()):
        ns.add(n)
    rows = []
    zero = HomologyModule.zero(x.ring)
    for n in sorted(ns):
        grs = induced_filtration(x, n)
        for s in range(tw.B, tw.T + 1):
            g = grs.get(s, zero)
            e = einf.entries.get((s, n - s), zero)
            if g.is_zero() and e.is_zero():
                continue
            rows.append(AbutmentRow(s, n, g, e))
    return AbutmentReport(rows, r_stab)


def euler_characteristic(p: SSPage) -> int:
    """``Σ (-1)^{s+t} rank E^{s,t}`` (free ranks; over a field this is the dimension)."""
    return sum((-1) ** ((s + t) % 2) * e.free_rank for (s, t), e in p.entries.items())
