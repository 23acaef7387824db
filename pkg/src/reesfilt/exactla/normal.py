"""Smith, rank and Hermite normal forms with transform tracking.

All routines work on copies of the input; matrices are small and dense, so
the elimination is plain row/column operations on lists of Python numbers.
Over Z the pivot is always an entry of least absolute value in the active
block, which keeps intermediate entries small.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import RingMismatchError
from .matrix import Matrix
from .rings import BaseRing


@dataclass(frozen=True)
class Diagonalization:
    """``U @ m @ V == D`` with ``U``, ``V`` invertible; ``U_inv``/``V_inv`` their inverses."""

    U: Matrix
    D: Matrix
    V: Matrix
    U_inv: Matrix
    V_inv: Matrix
    invariants: tuple  # nonzero diagonal entries of D, in order

    @property
    def rank(self) -> int:
        return len(self.invariants)


class _Work:
    """Mutable elimination state; ``track`` adds U, U^-1, V, V^-1."""

    def __init__(self, m: Matrix, track: bool):
        self.ring = m.ring
        self.red = m.ring.reduce
        self.a = m.to_lists()
        self.m, self.n = m.rows, m.cols
        self.track = track
        if track:
            z, o = m.ring.zero, m.ring.one
            self.U = [[o if i == j else z for j in range(self.m)] for i in range(self.m)]
            self.Ui = [[o if i == j else z for j in range(self.m)] for i in range(self.m)]
            self.V = [[o if i == j else z for j in range(self.n)] for i in range(self.n)]
            self.Vi = [[o if i == j else z for j in range(self.n)] for i in range(self.n)]

    # row i += c * row k
    def row_add(self, i, k, c):
        red = self.red
        ai, ak = self.a[i], self.a[k]
        for j in range(self.n):
            if ak[j] != 0:
                ai[j] = red(ai[j] + c * ak[j])
        if self.track:
            ui, uk = self.U[i], self.U[k]
            for j in range(self.m):
                if uk[j] != 0:
                    ui[j] = red(ui[j] + c * uk[j])
            for r in self.Ui:
                if r[i] != 0:
                    r[k] = red(r[k] - c * r[i])

    def row_swap(self, i, k):
        if i == k:
            return
        self.a[i], self.a[k] = self.a[k], self.a[i]
        if self.track:
            self.U[i], self.U[k] = self.U[k], self.U[i]
            for r in self.Ui:
                r[i], r[k] = r[k], r[i]

    def row_scale(self, i, c):
        # c must be a unit
        red = self.red
        ci = self.ring.inv(c)
        self.a[i] = [red(c * x) for x in self.a[i]]
        if self.track:
            self.U[i] = [red(c * x) for x in self.U[i]]
            for r in self.Ui:
                r[i] = red(r[i] * ci)

    # col j += c * col k
    def col_add(self, j, k, c):
        red = self.red
        for r in self.a:
            if r[k] != 0:
                r[j] = red(r[j] + c * r[k])
        if self.track:
            for r in self.V:
                if r[k] != 0:
                    r[j] = red(r[j] + c * r[k])
            vk, vj = self.Vi[k], self.Vi[j]
            for t in range(self.n):
                if vj[t] != 0:
                    vk[t] = red(vk[t] - c * vj[t])

    def col_swap(self, j, k):
        if j == k:
            return
        for r in self.a:
            r[j], r[k] = r[k], r[j]
        if self.track:
            for r in self.V:
                r[j], r[k] = r[k], r[j]
            self.Vi[j], self.Vi[k] = self.Vi[k], self.Vi[j]

    def result(self, invariants) -> Diagonalization:
        ring = self.ring
        D = Matrix._raw(ring, self.m, self.n, tuple(tuple(r) for r in self.a))
        mk = lambda rows, k: Matrix._raw(ring, k, k, tuple(tuple(r) for r in rows))
        return Diagonalization(mk(self.U, self.m), D, mk(self.V, self.n), mk(self.Ui, self.m),
                               mk(self.Vi, self.n), tuple(invariants))


def _pivot_search(a, t, m, n):
    """Entry of least absolute value in a[t:, t:]; a unit short-circuits."""
    best = None
    for i in range(t, m):
        row = a[i]
        for j in range(t, n):
            x = row[j]
            if x != 0:
                ax = abs(x)
                if ax == 1:
                    return i, j
                if best is None or ax < best[0]:
                    best = (ax, i, j)
    return None if best is None else best[1:]


def _snf_loop(w: _Work) -> list:
    a, m, n = w.a, w.m, w.n
    invariants = []
    t = 0
    while t < min(m, n):
        piv = _pivot_search(a, t, m, n)
        if piv is None:
            break
        w.row_swap(t, piv[0])
        w.col_swap(t, piv[1])
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t] != 0:
                    w.row_add(i, t, -(a[i][t] // p))
                    if a[i][t] != 0:
                        clean = False
            for j in range(t + 1, n):
                if a[t][j] != 0:
                    w.col_add(j, t, -(a[t][j] // p))
                    if a[t][j] != 0:
                        clean = False
            if not clean:
                # move the smallest leftover of row/column t onto the pivot
                best = None
                for i in range(t + 1, m):
                    if a[i][t] != 0 and (best is None or abs(a[i][t]) < best[0]):
                        best = (abs(a[i][t]), "r", i)
                for j in range(t + 1, n):
                    if a[t][j] != 0 and (best is None or abs(a[t][j]) < best[0]):
                        best = (abs(a[t][j]), "c", j)
                if best[1] == "r":
                    w.row_swap(t, best[2])
                else:
                    w.col_swap(t, best[2])
                continue
            bad = None
            if abs(p) != 1:
                for i in range(t + 1, m):
                    row = a[i]
                    for j in range(t + 1, n):
                        if row[j] % p != 0:
                            bad = i
                            break
                    if bad is not None:
                        break
            if bad is None:
                break
            w.row_add(t, bad, 1)
        if a[t][t] < 0:
            w.row_scale(t, -1)
        invariants.append(a[t][t])
        t += 1
    return invariants


def _field_loop(w: _Work) -> list:
    a, m, n = w.a, w.m, w.n
    t = 0
    invariants = []
    while t < min(m, n):
        piv = None
        for j in range(t, n):
            for i in range(t, m):
                if a[i][j] != 0:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        w.row_swap(t, piv[0])
        w.col_swap(t, piv[1])
        if a[t][t] != 1:
            w.row_scale(t, w.ring.inv(a[t][t]))
        for i in range(m):
            if i != t and a[i][t] != 0:
                w.row_add(i, t, -a[i][t])
        for j in range(t + 1, n):
            if a[t][j] != 0:
                w.col_add(j, t, -a[t][j])
        invariants.append(w.ring.one)
        t += 1
    return invariants


def diagonalize(m: Matrix) -> Diagonalization:
    """Smith normal form over Z, rank normal form over a field."""
    w = _Work(m, track=True)
    inv = _field_loop(w) if m.ring.is_field else _snf_loop(w)
    return w.result(inv)


def smith_normal_form(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U @ m @ V == D`` and ``d_1 | d_2 | ...``.

    Only defined over Z; over a field use :func:`rank_normal_form`.
    """
    if m.ring.kind != "Z":
        raise RingMismatchError(f"Smith normal form needs Z, got {m.ring}; use rank_normal_form")
    d = diagonalize(m)
    return d.U, d.D, d.V


def rank_normal_form(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    if not m.ring.is_field:
        raise RingMismatchError(f"rank normal form needs a field, got {m.ring}")
    d = diagonalize(m)
    return d.U, d.D, d.V


def invariant_factors(m: Matrix) -> tuple:
    """Nonzero diagonal of the Smith form (all ones over a field)."""
    w = _Work(m, track=False)
    return tuple(_field_loop(w) if m.ring.is_field else _snf_loop(w))


def rank(m: Matrix) -> int:
    return len(invariant_factors(m))


def echelon(rows: list[list], ring: BaseRing, ncols: int, transform: bool = False):
    """Row-reduced echelon (Hermite) form of a list of row vectors.

    Over Z pivots are positive and entries above a pivot are reduced into
    ``[0, pivot)``; over a field pivots are 1 and their columns are cleared.
    Returns ``(H, pivots, T)`` where ``H`` lists the nonzero rows, ``pivots``
    their pivot columns and ``T`` (only if ``transform``) is a square list
    with ``T @ rows`` equal to ``H`` followed by zero rows.
    """
    red = ring.reduce
    a = [list(r) for r in rows]
    m = len(a)
    T = None
    if transform:
        z, o = ring.zero, ring.one
        T = [[o if i == j else z for j in range(m)] for i in range(m)]

    def add(i, k, c):
        ai, ak = a[i], a[k]
        for j in range(ncols):
            if ak[j] != 0:
                ai[j] = red(ai[j] + c * ak[j])
        if T is not None:
            ti, tk = T[i], T[k]
            for j in range(m):
                if tk[j] != 0:
                    ti[j] = red(ti[j] + c * tk[j])

    def swap(i, k):
        a[i], a[k] = a[k], a[i]
        if T is not None:
            T[i], T[k] = T[k], T[i]

    def scale(i, c):
        a[i] = [red(c * x) for x in a[i]]
        if T is not None:
            T[i] = [red(c * x) for x in T[i]]

    pivots = []
    r = 0
    for col in range(ncols):
        if r == m:
            break
        if ring.is_field:
            k = next((i for i in range(r, m) if a[i][col] != 0), None)
            if k is None:
                continue
            swap(r, k)
            if a[r][col] != 1:
                scale(r, ring.inv(a[r][col]))
            for i in range(m):
                if i != r and a[i][col] != 0:
                    add(i, r, -a[i][col])
        else:
            while True:
                nz = [i for i in range(r, m) if a[i][col] != 0]
                if not nz:
                    break
                k = min(nz, key=lambda i: abs(a[i][col]))
                swap(r, k)
                done = True
                for i in nz:
                    i = r if i == k else (k if i == r else i)
                    if i != r and a[i][col] != 0:
                        add(i, r, -(a[i][col] // a[r][col]))
                        if a[i][col] != 0:
                            done = False
                if done:
                    break
            if a[r][col] == 0:
                continue
            if a[r][col] < 0:
                scale(r, -1)
            p = a[r][col]
            for i in range(r):
                q = a[i][col] // p
                if q:
                    add(i, r, -q)
        pivots.append(col)
        r += 1
    return a[:r], pivots, T
