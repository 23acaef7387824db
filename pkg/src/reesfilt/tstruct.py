"""Connectivity and truncation for the standard and Beilinson t-structures.

Standard: every weight (or level) has no homology in negative degrees.
Beilinson: weight ``n`` may have homology down to degree ``-n``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .exactla import ChainComplex, Matrix, homology, kernel
from .filtered import FilteredComplex, gr
from .graded import GradedComplex


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: tuple | None = None  # first failing (weight, degree)

    def __bool__(self):
        return self.ok


def truncate(c: ChainComplex, n: int) -> ChainComplex:
    """Good truncation ``τ_{≥n}``: ``C_n`` becomes ``ker d_n``, lower degrees are dropped."""
    ring = c.ring
    if not any(k < n for k in c.degrees()):
        return c
    z = kernel(c.d(n))
    ranks = {k: r for k, r in c.ranks.items() if k > n}
    ranks[n] = z.rank
    diffs = {k: m for k, m in c.differentials().items() if k > n + 1}
    if z.rank and c.rank(n + 1):
        d = c.d(n + 1)
        diffs[n + 1] = Matrix.from_columns(ring, [z.coords(col) for col in d.columns()], z.rank)
    return ChainComplex(ring, ranks, diffs, check=False)


def _first_failure(pieces, bound) -> Verdict:
    for w, c in pieces:
        for k in c.degrees():
            if k < bound(w) and not homology(c, k).is_zero():
                return Verdict(False, (w, k))
    return Verdict(True)


def is_connective_standard(obj: GradedComplex | FilteredComplex) -> Verdict:
    if isinstance(obj, FilteredComplex):
        pieces = sorted(obj.levels.items())
    else:
        pieces = sorted(obj.pieces.items())
    return _first_failure(pieces, lambda w: 0)


def is_connective_beilinson(g: GradedComplex) -> Verdict:
    """``H_k(g(n)) = 0`` for ``k < -n``."""
    return _first_failure(sorted(g.pieces.items()), lambda w: -w)


def truncate_beilinson(g: GradedComplex) -> GradedComplex:
    return GradedComplex(g.ring, {w: truncate(c, -w) for w, c in g.pieces.items()})


def is_connective_beilinson_filtered(x: FilteredComplex) -> Verdict:
    """Detected on the associated graded."""
    return is_connective_beilinson(gr(x))
