"""Bounded chain complexes of finitely generated free modules.

Homological indexing: ``d(n)`` is the matrix of ``d_n: C_n -> C_{n-1}``
(``rank(n-1)`` rows, ``rank(n)`` columns).
"""
from __future__ import annotations

from typing import Iterable, Mapping

from ..errors import InvariantError, RingMismatchError
from .lattice import HomologyModule, Lattice, Subquotient, from_orders, image, kernel
from .matrix import Matrix, block, block_diag
from .normal import invariant_factors
from .rings import BaseRing


class ChainComplex:
    __slots__ = ("ring", "_ranks", "_diffs", "_hcache")

    def __init__(self, ring: BaseRing, ranks: Mapping[int, int], differentials: Mapping[int, Matrix] | None = None,
                 check: bool = True):
        self.ring = ring
        self._ranks = {int(n): int(r) for n, r in sorted(ranks.items()) if r}
        if any(r < 0 for r in self._ranks.values()):
            raise InvariantError("negative rank")
        self._diffs = {}
        for n, m in sorted((differentials or {}).items()):
            n = int(n)
            if m.ring != ring:
                raise RingMismatchError(f"differential d_{n} over {m.ring}, complex over {ring}")
            if m.shape != (self.rank(n - 1), self.rank(n)):
                raise InvariantError(
                    f"d_{n} has shape {m.shape}, expected {(self.rank(n - 1), self.rank(n))}", f"degree {n}")
            if not m.is_zero():
                self._diffs[n] = m
        self._hcache = {}
        if check:
            for n in self._diffs:
                if n - 1 in self._diffs and not (self._diffs[n - 1] @ self._diffs[n]).is_zero():
                    raise InvariantError("d∘d ≠ 0", f"degree pair ({n}, {n - 1})")

    @classmethod
    def zero(cls, ring: BaseRing) -> ChainComplex:
        return cls(ring, {})

    @classmethod
    def concentrated(cls, ring: BaseRing, rank: int = 1, degree: int = 0) -> ChainComplex:
        return cls(ring, {degree: rank})

    @classmethod
    def from_lists(cls, ring: BaseRing, ranks: Mapping[int, int], diffs: Mapping[int, list]) -> ChainComplex:
        ranks = dict(ranks)
        return cls(ring, ranks, {n: Matrix(ring, ranks.get(n - 1, 0), ranks.get(n, 0), rows)
                                 for n, rows in diffs.items()})

    def rank(self, n: int) -> int:
        return self._ranks.get(n, 0)

    @property
    def ranks(self) -> dict[int, int]:
        return dict(self._ranks)

    def degrees(self) -> list[int]:
        return list(self._ranks)

    def d(self, n: int) -> Matrix:
        m = self._diffs.get(n)
        return m if m is not None else Matrix.zero(self.ring, self.rank(n - 1), self.rank(n))

    def differentials(self) -> dict[int, Matrix]:
        return dict(self._diffs)

    def total_rank(self) -> int:
        return sum(self._ranks.values())

    def is_zero(self) -> bool:
        return not self._ranks

    def euler_characteristic(self) -> int:
        return sum((-1) ** (n % 2) * r for n, r in self._ranks.items())

    def homology(self, n: int) -> HomologyModule:
        return homology(self, n)

    def homology_degrees(self) -> dict[int, HomologyModule]:
        """Nonzero homology modules, keyed by degree."""
        out = {}
        for n in self.degrees():
            h = homology(self, n)
            if not h.is_zero():
                out[n] = h
        return out

    def is_acyclic(self) -> bool:
        return all(homology(self, n).is_zero() for n in self.degrees())

    def __eq__(self, other):
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return self.ring == other.ring and self._ranks == other._ranks and self._diffs == other._diffs

    def __hash__(self):
        return hash((self.ring, tuple(self._ranks.items()), tuple(self._diffs.items())))

    def __repr__(self):
        ds = {n: m.to_lists() for n, m in self._diffs.items()}
        return f"ChainComplex({self.ring}, ranks={self._ranks}, d={ds})"


def homology(c: ChainComplex, n: int) -> HomologyModule:
    """``H_n(c) = ker d_n / im d_{n+1}`` in invariant-factor form."""
    cached = c._hcache.get(n)
    if cached is not None:
        return cached
    dim = c.rank(n)
    if dim == 0:
        h = HomologyModule.zero(c.ring)
    else:
        out_rank = len(invariant_factors(c.d(n))) if c.rank(n - 1) else 0
        inv = invariant_factors(c.d(n + 1)) if c.rank(n + 1) else ()
        orders = [0] * (dim - out_rank - len(inv)) + [d for d in inv if not c.ring.is_unit(d)]
        h = from_orders(c.ring, orders)
    c._hcache[n] = h
    return h


def cycles(c: ChainComplex, n: int) -> Lattice:
    return kernel(c.d(n)) if c.rank(n - 1) else Lattice.full(c.ring, c.rank(n))


def boundaries(c: ChainComplex, n: int) -> Lattice:
    return image(c.d(n + 1)) if c.rank(n + 1) else Lattice(c.ring, c.rank(n))


def homology_presentation(c: ChainComplex, n: int) -> Subquotient:
    """``H_n`` as an explicit subquotient of ``C_n`` (with generators)."""
    return Subquotient(cycles(c, n), boundaries(c, n))


class ChainMap:
    __slots__ = ("source", "target", "_comps")

    def __init__(self, source: ChainComplex, target: ChainComplex, components: Mapping[int, Matrix],
                 check: bool = True):
        if source.ring != target.ring:
            raise RingMismatchError(f"chain map from {source.ring} to {target.ring}")
        self.source = source
        self.target = target
        self._comps = {}
        for n, m in components.items():
            if m.shape != (target.rank(n), source.rank(n)):
                raise InvariantError(f"component f_{n} has shape {m.shape}, expected "
                                     f"{(target.rank(n), source.rank(n))}", f"degree {n}")
            if not m.is_zero():
                self._comps[n] = m
        if check:
            for n in set(source.degrees()) | {k + 1 for k in source.degrees()}:
                lhs = target.d(n) @ self[n]
                rhs = self[n - 1] @ source.d(n)
                if lhs != rhs:
                    raise InvariantError("chain map does not commute with differentials", f"degree {n}")

    def __getitem__(self, n: int) -> Matrix:
        m = self._comps.get(n)
        return m if m is not None else Matrix.zero(self.source.ring, self.target.rank(n), self.source.rank(n))

    @property
    def ring(self) -> BaseRing:
        return self.source.ring

    def components(self) -> dict[int, Matrix]:
        return dict(self._comps)

    @classmethod
    def identity(cls, c: ChainComplex) -> ChainMap:
        return cls(c, c, {n: Matrix.identity(c.ring, r) for n, r in c.ranks.items()}, check=False)

    @classmethod
    def zero(cls, source: ChainComplex, target: ChainComplex) -> ChainMap:
        return cls(source, target, {}, check=False)

    def __matmul__(self, other: ChainMap) -> ChainMap:
        """``self ∘ other``."""
        if other.target != self.source:
            raise ValueError("composition of non-composable chain maps")
        return ChainMap(other.source, self.target,
                        {n: self[n] @ other[n] for n in other.source.degrees()}, check=False)

    def __add__(self, other: ChainMap) -> ChainMap:
        return ChainMap(self.source, self.target,
                        {n: self[n] + other[n] for n in self.source.degrees()}, check=False)

    def __neg__(self) -> ChainMap:
        return ChainMap(self.source, self.target, {n: -m for n, m in self._comps.items()}, check=False)

    def __sub__(self, other: ChainMap) -> ChainMap:
        return self + (-other)

    def is_zero(self) -> bool:
        return not self._comps

    def is_iso(self) -> bool:
        """Degreewise invertible (over Z: unimodular)."""
        for n in set(self.source.degrees()) | set(self.target.degrees()):
            if self.source.rank(n) != self.target.rank(n):
                return False
            inv = invariant_factors(self[n])
            if len(inv) != self.source.rank(n) or not all(self.ring.is_unit(x) for x in inv):
                return False
        return True

    def is_quasi_isomorphism(self) -> bool:
        return cone(self).is_acyclic()

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self._comps == other._comps

    def __hash__(self):
        return hash((self.source, self.target, tuple(self._comps.items())))

    def __repr__(self):
        return f"ChainMap({ {n: m.to_lists() for n, m in self._comps.items()} })"


def _degrees(*cs: ChainComplex) -> list[int]:
    return sorted(set().union(*(c.degrees() for c in cs)))


def cone(f: ChainMap) -> ChainComplex:
    """Mapping cone: ``cone_n = tgt_n ⊕ src_{n-1}``, ``d = [[d_tgt, f], [0, -d_src]]``."""
    src, tgt = f.source, f.target
    ring = f.ring
    degs = set(tgt.degrees()) | {n + 1 for n in src.degrees()}
    ranks = {n: tgt.rank(n) + src.rank(n - 1) for n in degs}
    diffs = {}
    for n in degs:
        if ranks.get(n - 1, 0) == 0:
            continue
        diffs[n] = block(ring, [tgt.rank(n - 1), src.rank(n - 2)], [tgt.rank(n), src.rank(n - 1)],
                         {(0, 0): tgt.d(n), (0, 1): f[n - 1], (1, 1): -src.d(n - 1)})
    return ChainComplex(ring, ranks, diffs, check=False)


def cone_inclusion(f: ChainMap) -> ChainMap:
    """The canonical map ``target -> cone(f)``."""
    c = cone(f)
    tgt, src = f.target, f.source
    comps = {n: block(f.ring, [tgt.rank(n), src.rank(n - 1)], [tgt.rank(n)],
                      {(0, 0): Matrix.identity(f.ring, tgt.rank(n))}) for n in tgt.degrees()}
    return ChainMap(tgt, c, comps, check=False)


def cone_projection(f: ChainMap) -> ChainMap:
    """The canonical map ``cone(f) -> source[1]``."""
    c = cone(f)
    src, tgt = f.source, f.target
    s1 = shift(src, 1)
    comps = {n: block(f.ring, [src.rank(n - 1)], [tgt.rank(n), src.rank(n - 1)],
                      {(0, 1): Matrix.identity(f.ring, src.rank(n - 1))}) for n in s1.degrees()}
    return ChainMap(c, s1, comps, check=False)


def shift(c: ChainComplex, k: int) -> ChainComplex:
    """``c[k]_n = c_{n-k}`` with differential ``(-1)^k d``."""
    sign = -1 if k % 2 else 1
    return ChainComplex(c.ring, {n + k: r for n, r in c.ranks.items()},
                        {n + k: (m if sign == 1 else -m) for n, m in c.differentials().items()}, check=False)


def direct_sum(cs: Iterable[ChainComplex], ring: BaseRing | None = None) -> ChainComplex:
    cs = list(cs)
    if ring is None:
        if not cs:
            raise ValueError("empty direct sum needs a ring")
        ring = cs[0].ring
    for c in cs:
        if c.ring != ring:
            raise RingMismatchError(f"direct sum over {ring} with summand over {c.ring}")
    degs = _degrees(*cs) if cs else []
    ranks = {n: sum(c.rank(n) for c in cs) for n in degs}
    diffs = {n: block_diag(ring, [c.d(n) for c in cs]) for n in degs if ranks.get(n - 1)}
    return ChainComplex(ring, ranks, diffs, check=False)


def direct_sum_maps(fs: Iterable[ChainMap], source: ChainComplex, target: ChainComplex) -> ChainMap:
    fs = list(fs)
    comps = {n: block_diag(source.ring, [f[n] for f in fs]) for n in source.degrees()}
    return ChainMap(source, target, comps, check=False)


def _tensor_layout(a: ChainComplex, b: ChainComplex):
    """Summand order of ``(a⊗b)_n``: ``(p, q)`` with ``p`` ascending; basis ``a_i⊗b_j``, ``i`` major."""
    layout = {}
    for p in a.degrees():
        for q in b.degrees():
            layout.setdefault(p + q, []).append((p, q))
    return layout


def tensor(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    """Total complex of ``a ⊗ b`` with ``d(x⊗y) = dx⊗y + (-1)^|x| x⊗dy``."""
    if a.ring != b.ring:
        raise RingMismatchError(f"tensor of complexes over {a.ring} and {b.ring}")
    ring = a.ring
    layout = _tensor_layout(a, b)
    ranks = {n: sum(a.rank(p) * b.rank(q) for p, q in pq) for n, pq in layout.items()}
    diffs = {}
    for n, src in layout.items():
        tgt = layout.get(n - 1)
        if not tgt:
            continue
        tindex = {pq: i for i, pq in enumerate(tgt)}
        blocks = {}
        for j, (p, q) in enumerate(src):
            if (p - 1, q) in tindex and a.rank(p - 1):
                blocks[(tindex[(p - 1, q)], j)] = a.d(p).kron(Matrix.identity(ring, b.rank(q)))
            if (p, q - 1) in tindex and b.rank(q - 1):
                m = Matrix.identity(ring, a.rank(p)).kron(b.d(q))
                blocks[(tindex[(p, q - 1)], j)] = m if p % 2 == 0 else -m
        diffs[n] = block(ring, [a.rank(p) * b.rank(q) for p, q in tgt],
                         [a.rank(p) * b.rank(q) for p, q in src], blocks)
    return ChainComplex(ring, ranks, diffs, check=False)


def tensor_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    """``f ⊗ g`` for degree-0 chain maps (no Koszul sign arises)."""
    src = tensor(f.source, g.source)
    tgt = tensor(f.target, g.target)
    ring = f.ring
    sl = _tensor_layout(f.source, g.source)
    tl = _tensor_layout(f.target, g.target)
    comps = {}
    for n, spq in sl.items():
        tpq = tl.get(n, [])
        tindex = {pq: i for i, pq in enumerate(tpq)}
        blocks = {}
        for j, (p, q) in enumerate(spq):
            if (p, q) in tindex:
                blocks[(tindex[(p, q)], j)] = f[p].kron(g[q])
        comps[n] = block(ring, [f.target.rank(p) * g.target.rank(q) for p, q in tpq],
                         [f.source.rank(p) * g.source.rank(q) for p, q in spq], blocks)
    return ChainMap(src, tgt, comps, check=False)


def is_split_injective(f: ChainMap) -> bool:
    """Degreewise split injective: injective with free cokernel in every degree."""
    for n in f.source.degrees():
        inv = invariant_factors(f[n])
        if len(inv) != f.source.rank(n) or not all(f.ring.is_unit(x) for x in inv):
            return False
    return True
