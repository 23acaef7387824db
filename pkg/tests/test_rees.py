import random
import warnings

import pytest

from gen import random_cellular, random_filtered, random_graded
from oracles import det
from reesfilt.errors import RingMismatchError
from reesfilt.exactla import QQ, ZZ, ChainComplex, ChainMap, HomologyModule, Matrix, block, cone
from reesfilt.filtered import (CONSTANT, ZERO, algebra_A, day_tensor_filtered_data, gr, kan_extend, underlying,
                               unit_filtered)
from reesfilt.graded import total, unit_graded
from reesfilt.rees import (ReesModule, closed_point_pullback, coaction_index, comparison_map, comparison_weights,
                           from_rees, generic_point_pullback, rees_resolution, rees_tensor, rees_unit, to_rees,
                           truncate_tail)
from reesfilt.worked import split_example, times_two_filtration, two_step

Z0 = ChainComplex.concentrated(ZZ)


def hom(g):
    return {k: v for k, v in g.homology().items() if not v.is_zero()}


def weight_homology(m, lo, hi):
    return {w: m.piece(w).homology_degrees() for w in range(lo, hi + 1)}


def test_round_trips_random():
    rng = random.Random(1)
    for _ in range(60):
        x = random_filtered(rng)
        assert from_rees(to_rees(x)) == x
        m = to_rees(x)
        assert to_rees(from_rees(m)) == m


def test_transcription_examples():
    assert to_rees(unit_filtered(ZZ)) == rees_unit(ZZ)
    assert from_rees(rees_unit(ZZ)) == unit_filtered(ZZ)
    a = to_rees(algebra_A(ZZ))
    assert a.pieces == {0: Z0} and a.t(0).is_zero() and a.piece(-1).is_zero()
    m = to_rees(times_two_filtration())
    assert m.pieces == {0: Z0, 1: Z0}
    assert m.t(1)[0].to_lists() == [[2]]


def test_rees_unit_window():
    u = rees_unit(ZZ)
    assert total(u.window(3)).ranks == {0: 4}
    assert u.t(-5) == ChainMap.identity(Z0)
    assert truncate_tail(u, 2).bottom == -2
    assert from_rees(truncate_tail(u, 2)).level(-7) == Z0


@pytest.mark.parametrize("depth", range(1, 7))
def test_coaction_index_is_diagonal(depth):
    assert coaction_index(rees_unit(ZZ), depth) == list(range(-depth, 1))


def test_validation_shared_with_filtered():
    two = ChainComplex.from_lists(ZZ, {1: 1, 0: 1}, {1: [[2]]})
    bad = ChainMap(Z0, Z0, {0: Matrix(ZZ, 1, 1, [[1]])})
    from reesfilt.errors import InvariantError
    with pytest.raises(InvariantError):
        ReesModule(ZZ, 0, 1, {0: two, 1: Z0}, {1: bad})


def _cone_to_module(res, k):
    """``cone(F1 -> F0) -> M`` given by the augmentation on ``F0`` and zero on ``F1``."""
    d = res.delta_at(k)
    aug = res.augmentation[max(k, res.module.bottom - 1)]
    c = cone(d)
    tgt = res.module.piece(k)
    comps = {}
    for n in c.degrees():
        comps[n] = block(ZZ, [tgt.rank(n)], [d.target.rank(n), d.source.rank(n - 1)], {(0, 0): aug[n]})
    return ChainMap(c, tgt, comps, check=True)


def test_resolution_resolves():
    rng = random.Random(2)
    for _ in range(40):
        m = to_rees(random_filtered(rng, max_rank=2))
        r = rees_resolution(m)
        for k in range(m.bottom - 3, m.top + 2):
            if k > m.top:
                continue
            assert _cone_to_module(r, k).is_quasi_isomorphism()
    u = truncate_tail(rees_unit(ZZ), 2)
    r = rees_resolution(u)
    for k in range(-4, 1):
        assert _cone_to_module(r, k).is_quasi_isomorphism()


def test_koszul_resolution_of_A():
    r = rees_resolution(to_rees(algebra_A(ZZ)))
    # one generator at weight 0 and one relation generator at weight -1, joined by t
    assert r.F0 == rees_unit(ZZ)
    assert (r.F1.bottom, r.F1.top) == (-1, -1) and r.F1.pieces == {-1: Z0}
    for k in (-1, -2, -5):
        assert r.delta_at(k)[0].to_lists() == [[1]]
    assert r.delta_at(0).source.is_zero()


def _section(g, m, res, k):
    """Explicit splitting ``M(k) -> F0(k)`` for ``M = I(g)``: ``g(u) ⊂ M(k)`` goes to the generator copy ``M(u)``."""
    ws = g.weights()
    gens = [w for w in range(m.bottom, m.top + 1) if w >= k]
    comps = {}
    tgt = res.delta_at(k).target
    src = m.piece(k)
    for n in src.degrees():
        rows = [[0] * src.rank(n) for _ in range(tgt.rank(n))]
        row_off = {}
        o = 0
        for w in gens:
            row_off[w] = o
            o += m.piece(w).rank(n)
        col = 0
        for u in (u for u in ws if u >= k):
            for i in range(g.piece(u).rank(n)):
                rows[row_off[max(u, m.bottom)] + i][col + i] = 1
            col += g.piece(u).rank(n)
        comps[n] = Matrix(ZZ, tgt.rank(n), src.rank(n), rows)
    return comps


def test_resolution_splits_for_free_modules():
    rng = random.Random(3)
    for _ in range(30):
        g = random_graded(rng, max_rank=2)
        if g.is_zero():
            continue
        m = to_rees(kan_extend(g))
        r = rees_resolution(m)
        for k in range(m.bottom, m.top + 1):
            s = _section(g, m, r, k)
            d = r.delta_at(k)
            aug = r.augmentation[k]
            for n in m.piece(k).degrees():
                assert (aug[n] @ s[n]).is_identity()
            # [δ | s] is unimodular: F0(k) = im δ ⊕ s(M(k))
            for n in d.target.degrees():
                cols = d[n].columns() + s.get(n, Matrix.zero(ZZ, d.target.rank(n), 0)).columns()
                sq = [[c[i] for c in cols] for i in range(d.target.rank(n))]
                assert len(cols) == len(sq) and abs(det(sq)) == 1


def test_unit_law():
    rng = random.Random(4)
    u = rees_unit(ZZ)
    for _ in range(25):
        n = to_rees(random_filtered(rng, max_rank=2))
        t = rees_tensor(u, n)
        lo = min(t.bottom, n.bottom) - 2
        assert weight_homology(t, lo, max(t.top, n.top)) == weight_homology(n, lo, max(t.top, n.top))


def test_A_derived_square():
    a = to_rees(algebra_A(ZZ))
    t = rees_tensor(a, a)
    # Tor_0 = A in weight 0; Tor_1 of A against A sits at the weight of the Koszul generator
    assert weight_homology(t, -4, 1) == {
        -4: {}, -3: {}, -2: {}, -1: {1: HomologyModule(ZZ, 1, ())}, 0: {0: HomologyModule(ZZ, 1, ())}, 1: {}}


def test_rees_ring_mismatch():
    with pytest.raises(RingMismatchError):
        rees_tensor(rees_unit(ZZ), rees_unit(QQ))


def test_comparison_quasi_iso_cellular():
    rng = random.Random(5)
    for _ in range(25):
        x, y = random_cellular(rng), random_cellular(rng)
        t = rees_tensor(to_rees(x), to_rees(y))
        day = day_tensor_filtered_data(x, y)
        for k in comparison_weights(x, y):
            f = comparison_map(x, y, k, day=day, tensor_=t)
            assert f.is_quasi_isomorphism()
            assert t.piece(k).homology_degrees() == day.result.level(k).homology_degrees()


def test_comparison_on_two_step_with_torsion():
    x = two_step()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        day = day_tensor_filtered_data(x, x)
    t = rees_tensor(to_rees(x), to_rees(x))
    for k in comparison_weights(x, x):
        assert comparison_map(x, x, k, day=day, tensor_=t).is_quasi_isomorphism()


def test_closed_and_generic_points():
    assert hom(closed_point_pullback(rees_unit(ZZ))) == hom(unit_graded(ZZ))
    a = to_rees(algebra_A(ZZ))
    assert hom(closed_point_pullback(a)) == {(0, 0): HomologyModule(ZZ, 1, ()), (-1, 1): HomologyModule(ZZ, 1, ())}
    assert generic_point_pullback(rees_unit(ZZ)) == Z0
    assert generic_point_pullback(a).is_zero()
    rng = random.Random(6)
    for _ in range(40):
        x = random_filtered(rng)
        assert closed_point_pullback(to_rees(x)) == gr(x)
        assert generic_point_pullback(to_rees(x)) == underlying(x)


def _induced_t(m, w):
    """``t: cone(M(w+2) -> M(w+1)) -> cone(M(w+1) -> M(w))``."""
    src, tgt = cone(m.t(w + 2)), cone(m.t(w + 1))
    comps = {}
    for n in src.degrees():
        a, b = m.t(w + 1)[n], m.t(w + 2)[n - 1]
        comps[n] = block(ZZ, [a.rows, b.rows], [a.cols, b.cols], {(0, 0): a, (1, 1): b})
    return ChainMap(src, tgt, comps, check=True)


def test_closed_point_kills_t():
    from reesfilt.exactla import NotInLattice, boundaries, cycles
    rng = random.Random(8)
    xs = [two_step(), times_two_filtration(), split_example()] + [random_filtered(rng, max_rank=2) for _ in range(20)]
    for x in xs:
        m = to_rees(x)
        for w in range(m.bottom - 2, m.top + 1):
            f = _induced_t(m, w)
            for n in f.source.degrees():
                if not f.target.rank(n):
                    continue
                bnd = boundaries(f.target, n)
                for z in cycles(f.source, n).basis:
                    try:
                        bnd.coords(f[n].apply(z))
                    except NotInLattice:
                        pytest.fail(f"t acts nontrivially on gr homology at weight {w}, degree {n}")


def test_tails():
    rng = random.Random(7)
    for _ in range(20):
        x = random_filtered(rng, tail=ZERO)
        assert generic_point_pullback(to_rees(x)).is_zero()
        x = random_filtered(rng, tail=CONSTANT)
        assert generic_point_pullback(to_rees(x)) == x.level(x.bottom)
