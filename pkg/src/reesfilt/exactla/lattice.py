"""Submodules of R^n and their quotients.

A :class:`Lattice` is a submodule of the free module R^dim, stored as an
echelon basis.  :class:`Subquotient` presents ``num / den`` for lattices
``den ⊂ num`` in invariant-factor form and reduces ambient vectors to
coordinates on the chosen generators.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .matrix import Matrix
from .normal import diagonalize, echelon
from .rings import BaseRing


class NotInLattice(ValueError):
    pass


@dataclass(frozen=True)
class HomologyModule:
    """A finitely generated module ``R^free_rank ⊕ ⊕ R/(d_i)`` in invariant-factor form."""

    ring: BaseRing
    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        if self.ring.is_field and self.torsion:
            raise ValueError("no torsion over a field")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")
        if any(d <= 1 for d in self.torsion):
            raise ValueError("torsion coefficients must exceed 1")

    @classmethod
    def zero(cls, ring: BaseRing) -> HomologyModule:
        return cls(ring, 0, ())

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __add__(self, other: HomologyModule) -> HomologyModule:
        return from_orders(self.ring, [0] * (self.free_rank + other.free_rank) + list(self.torsion + other.torsion))

    def __str__(self):
        r = str(self.ring)
        parts = []
        if self.free_rank:
            parts.append(r if self.free_rank == 1 else f"{r}^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": [str(d) for d in self.torsion]}


def from_orders(ring: BaseRing, orders: Iterable[int]) -> HomologyModule:
    """Module from cyclic orders (0 = free, 1 = trivial), normalised to invariant factors."""
    from math import gcd

    orders = list(orders)
    free = sum(1 for d in orders if d == 0)
    tors = [abs(d) for d in orders if abs(d) > 1]
    if not tors:
        return HomologyModule(ring, free, ())
    # invariant factors of diag(tors): via prime-power decomposition by repeated gcd/lcm
    tors.sort()
    changed = True
    while changed:
        changed = False
        for i in range(len(tors)):
            for j in range(i + 1, len(tors)):
                a, b = tors[i], tors[j]
                if b % a:
                    g = gcd(a, b)
                    tors[i], tors[j] = g, a * b // g
                    changed = True
        tors.sort()
    return HomologyModule(ring, free, tuple(d for d in tors if d > 1))


class Lattice:
    __slots__ = ("ring", "dim", "basis", "pivots")

    def __init__(self, ring: BaseRing, dim: int, vectors: Iterable[Sequence] = ()):
        self.ring = ring
        self.dim = dim
        vecs = [list(v) for v in vectors if any(x != 0 for x in v)]
        for v in vecs:
            if len(v) != dim:
                raise ValueError(f"vector of length {len(v)} in R^{dim}")
        H, piv, _ = echelon(vecs, ring, dim)
        self.basis = [tuple(r) for r in H]
        self.pivots = piv

    @classmethod
    def full(cls, ring: BaseRing, dim: int) -> Lattice:
        return cls(ring, dim, [[1 if i == j else 0 for j in range(dim)] for i in range(dim)])

    @classmethod
    def coordinate(cls, ring: BaseRing, dim: int, indices: Iterable[int]) -> Lattice:
        return cls(ring, dim, [[1 if i == j else 0 for j in range(dim)] for i in sorted(indices)])

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coords(self, v: Sequence) -> list:
        ring = self.ring
        red = ring.reduce
        v = list(v)
        out = []
        for b, p in zip(self.basis, self.pivots):
            x = v[p]
            if x == 0:
                out.append(ring.zero)
                continue
            if ring.is_field:
                q = red(x * ring.inv(b[p]))
            else:
                if x % b[p]:
                    raise NotInLattice(v)
                q = x // b[p]
            out.append(q)
            for j in range(p, self.dim):
                if b[j] != 0:
                    v[j] = red(v[j] - q * b[j])
        if any(x != 0 for x in v):
            raise NotInLattice(v)
        return out

    def __contains__(self, v) -> bool:
        try:
            self.coords(v)
        except NotInLattice:
            return False
        return True

    def __add__(self, other: Lattice) -> Lattice:
        return Lattice(self.ring, self.dim, self.basis + other.basis)

    def __le__(self, other: Lattice) -> bool:
        return all(v in other for v in self.basis)

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.dim == other.dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.dim, tuple(self.basis)))

    def intersect(self, other: Lattice) -> Lattice:
        rows = self.basis + [tuple(-x for x in v) for v in other.basis]
        ker = left_kernel(rows, self.ring, self.dim)
        k = len(self.basis)
        red = self.ring.reduce
        vecs = []
        for c in ker:
            vecs.append([red(sum(c[i] * self.basis[i][j] for i in range(k))) for j in range(self.dim)])
        return Lattice(self.ring, self.dim, vecs)

    def image(self, m: Matrix) -> Lattice:
        return Lattice(self.ring, m.rows, [m.apply(v) for v in self.basis])

    def preimage(self, m: Matrix, domain: Lattice | None = None) -> Lattice:
        """``{v in domain : m v in self}``; ``domain`` defaults to all of R^cols."""
        dom = domain.basis if domain is not None else [
            [1 if i == j else 0 for j in range(m.cols)] for i in range(m.cols)]
        images = [m.apply(v) for v in dom]
        rows = [tuple(x) for x in images] + [tuple(-x for x in v) for v in self.basis]
        ker = left_kernel(rows, self.ring, m.rows)
        red = self.ring.reduce
        k = len(dom)
        vecs = [[red(sum(c[i] * dom[i][j] for i in range(k))) for j in range(m.cols)] for c in ker]
        return Lattice(self.ring, m.cols, vecs)

    def is_saturated(self) -> bool:
        if self.ring.is_field:
            return True
        if not self.basis:
            return True
        d = diagonalize(Matrix.from_rows(self.ring, self.basis, self.dim))
        return all(x == 1 for x in d.invariants)

    def matrix(self) -> Matrix:
        """Basis vectors as columns."""
        return Matrix.from_columns(self.ring, self.basis, self.dim)

    def __repr__(self):
        return f"Lattice({self.ring}, dim={self.dim}, basis={[list(b) for b in self.basis]})"


def left_kernel(rows: Sequence[Sequence], ring: BaseRing, ncols: int) -> list[list]:
    """Basis of ``{c : sum_i c_i rows[i] = 0}`` (saturated over Z)."""
    if not rows:
        return []
    H, _, T = echelon([list(r) for r in rows], ring, ncols, transform=True)
    return [T[i] for i in range(len(H), len(rows))]


def kernel(m: Matrix) -> Lattice:
    """``{v : m v = 0}``."""
    if m.rows == 0:
        return Lattice.full(m.ring, m.cols)
    return Lattice(m.ring, m.cols, left_kernel(m.columns(), m.ring, m.rows))


def image(m: Matrix) -> Lattice:
    return Lattice(m.ring, m.rows, m.columns())


class Subquotient:
    """``num / den`` for lattices ``den ⊂ num`` in a common ambient R^dim.

    Generators are chosen from the Smith form of ``den`` written in ``num``'s
    basis; ``orders[k]`` is 0 for a free generator and ``d > 1`` for one of
    order ``d``.
    """

    def __init__(self, num: Lattice, den: Lattice):
        self.ring = num.ring
        self.num = num
        self.den = den
        a = num.rank
        rel = [num.coords(v) for v in den.basis]
        red = self.ring.reduce
        if rel:
            d = diagonalize(Matrix.from_rows(self.ring, rel, a))
            invs = list(d.invariants)
            V, Vi = d.V, d.V_inv
        else:
            invs = []
            V = Vi = Matrix.identity(self.ring, a)
        self._V = V
        keep = []
        orders = []
        for k in range(a):
            dk = invs[k] if k < len(invs) else 0
            if dk == 0 or not self.ring.is_unit(dk):
                keep.append(k)
                orders.append(0 if dk == 0 else dk)
        self._keep = keep
        self.orders = tuple(orders)
        gens = []
        for k in keep:
            row = Vi.row(k)
            gens.append(tuple(red(sum(row[j] * num.basis[j][i] for j in range(a) if row[j] != 0))
                              for i in range(num.dim)))
        self.generators = gens

    @property
    def ngens(self) -> int:
        return len(self.orders)

    def module(self) -> HomologyModule:
        return from_orders(self.ring, self.orders)

    def reduce(self, v: Sequence) -> tuple:
        """Coordinates of ``v ∈ num`` on the generators (torsion parts reduced)."""
        y = self.num.coords(v)
        z = [self.ring.reduce(sum(y[j] * self._V[j, k] for j in range(len(y)) if y[j] != 0)) for k in self._keep]
        return tuple(x % d if d else x for x, d in zip(z, self.orders))

    def is_zero_class(self, v: Sequence) -> bool:
        return all(x == 0 for x in self.reduce(v))
