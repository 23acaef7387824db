import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import random_complex, random_chain_map, random_unimodular
from oracles import homology_dim_fp_brute, homology_z, invariant_factors_by_minors, plain, rank_q
from reesfilt.errors import InvariantError, RingMismatchError
from reesfilt.exactla import (GF, QQ, ZZ, BaseRing, ChainComplex, ChainMap, HomologyModule, Lattice, Matrix,
                              PosetDiagram, Subquotient, cone, diagonalize, from_orders, invariant_factors, kernel,
                              poset_colimit, rank, smith_normal_form, tensor)

int_matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)))


@given(int_matrices)
@settings(max_examples=150, deadline=None)
def test_snf_matches_minors(rows):
    m = Matrix(ZZ, len(rows), len(rows[0]), rows)
    assert list(invariant_factors(m)) == invariant_factors_by_minors(rows)


@given(int_matrices)
@settings(max_examples=100, deadline=None)
def test_snf_transforms(rows):
    m = Matrix(ZZ, len(rows), len(rows[0]), rows)
    U, D, V = smith_normal_form(m)
    assert U @ m @ V == D
    assert abs(_det(U)) == 1 and abs(_det(V)) == 1
    diag = [D.to_lists()[i][i] for i in range(min(D.shape))]
    off = [D.to_lists()[i][j] for i in range(D.shape[0]) for j in range(D.shape[1]) if i != j]
    assert not any(off)
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz) and all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert len(nz) == rank_q(rows)


def _det(m):
    from oracles import det
    return det(m.to_lists())


@given(int_matrices)
@settings(max_examples=80, deadline=None)
def test_rank_over_fields(rows):
    assert rank(Matrix(QQ, len(rows), len(rows[0]), rows)) == rank_q(rows)
    m2 = Matrix(GF(2), len(rows), len(rows[0]), rows)
    U, D, V = diagonalize(m2).U, diagonalize(m2).D, diagonalize(m2).V
    assert U @ m2 @ V == D


def test_blowup_is_controlled():
    rng = random.Random(5)
    for _ in range(30):
        rows = [[rng.randint(-9, 9) for _ in range(8)] for _ in range(8)]
        m = Matrix(ZZ, 8, 8, rows)
        U, D, V = smith_normal_form(m)
        assert U @ m @ V == D


def test_rings():
    assert GF(7)(-1) == 6
    assert QQ(Fraction(2, 4)) == Fraction(1, 2)
    with pytest.raises(ValueError):
        GF(9)
    assert BaseRing.from_descriptor("fp:5") == GF(5)
    assert BaseRing.from_descriptor("z") == ZZ
    assert GF(5).inv(2) == 3


def test_ring_mismatch():
    a = Matrix(ZZ, 1, 1, [[1]])
    b = Matrix(QQ, 1, 1, [[1]])
    with pytest.raises(RingMismatchError):
        a @ b


def test_homology_times_two():
    c = ChainComplex.from_lists(ZZ, {1: 1, 0: 1}, {1: [[2]]})
    assert c.homology(0) == HomologyModule(ZZ, 0, (2,))
    assert c.homology(1).is_zero()
    c2 = ChainComplex.from_lists(GF(2), {1: 1, 0: 1}, {1: [[2]]})
    assert c2.homology(0).free_rank == 1 and c2.homology(1).free_rank == 1
    assert ChainComplex.from_lists(QQ, {1: 1, 0: 1}, {1: [[2]]}).is_acyclic()


def test_dd_violation_reports_degrees():
    with pytest.raises(InvariantError) as e:
        ChainComplex.from_lists(ZZ, {2: 1, 1: 1, 0: 1}, {2: [[1]], 1: [[1]]})
    assert "(2, 1)" in str(e.value)


def test_homology_against_oracles():
    rng = random.Random(11)
    for _ in range(150):
        c = random_complex(rng, ZZ, (0, 1, 2), 3)
        ranks, diffs = plain(c)
        for n in (0, 1, 2):
            free, tors = homology_z(ranks, diffs, n)
            h = c.homology(n)
            assert (h.free_rank, list(h.torsion)) == (free, tors)
    for _ in range(80):
        c = random_complex(rng, GF(2), (0, 1, 2), 3)
        ranks, diffs = plain(c)
        for n in (0, 1, 2):
            assert c.homology(n).free_rank == homology_dim_fp_brute(ranks, diffs, n)


def test_homology_invariant_under_base_change():
    rng = random.Random(3)
    for _ in range(40):
        c = random_complex(rng, ZZ, (0, 1), 3)
        u0, u1 = random_unimodular(rng, ZZ, c.rank(0)), random_unimodular(rng, ZZ, c.rank(1))
        d = c.d(1)
        if not (c.rank(0) and c.rank(1)):
            continue
        inv1 = _inverse_unimodular(u1)
        c2 = ChainComplex(ZZ, c.ranks, {1: u0 @ d @ inv1})
        for n in (0, 1):
            assert c.homology(n) == c2.homology(n)


def _inverse_unimodular(u):
    U, D, V = smith_normal_form(u)
    # D = U u V is the identity, so u^{-1} = V U
    assert D.is_identity()
    return V @ U


def test_lattice_and_subquotient():
    full = Lattice.full(ZZ, 2)
    sub = Lattice(ZZ, 2, [[2, 0], [0, 3]])
    sq = Subquotient(full, sub)
    assert sq.module() == from_orders(ZZ, [6])
    assert sq.ngens == 1
    assert sq.is_zero_class([4, -3])
    assert not sq.is_zero_class([1, 0])
    k = kernel(Matrix(ZZ, 1, 3, [[1, 2, 3]]))
    assert k.rank == 2
    for b in k.basis:
        assert b[0] + 2 * b[1] + 3 * b[2] == 0
    inter = Lattice(ZZ, 1, [[2]]).intersect(Lattice(ZZ, 1, [[3]]))
    assert inter.basis == [[6]] or inter.basis == [(6,)]


def test_from_orders_normalizes():
    assert from_orders(ZZ, [2, 3, 0, 1]) == HomologyModule(ZZ, 1, (6,))
    assert from_orders(ZZ, [4, 2]) == HomologyModule(ZZ, 0, (2, 4))


def test_cone_long_exact_sequence_euler():
    rng = random.Random(8)
    for _ in range(40):
        a = random_complex(rng, ZZ, (0, 1), 2)
        b = random_complex(rng, ZZ, (0, 1), 2)
        f = random_chain_map(rng, a, b)
        c = cone(f)
        assert c.euler_characteristic() == b.euler_characteristic() - a.euler_characteristic()
        # cone of the identity is contractible
        assert cone(ChainMap.identity(a)).is_acyclic()
        if f.is_quasi_isomorphism():
            assert c.is_acyclic()


def test_cone_shape():
    c = ChainComplex.concentrated(ZZ)
    f = ChainMap(c, c, {0: Matrix(ZZ, 1, 1, [[2]])})
    k = cone(f)
    assert k.ranks == {0: 1, 1: 1}
    assert k.homology(0) == HomologyModule(ZZ, 0, (2,))


def test_kunneth_over_field():
    rng = random.Random(9)
    F = GF(3)
    for _ in range(25):
        a = random_complex(rng, F, (0, 1), 2)
        b = random_complex(rng, F, (0, 1), 2)
        t = tensor(a, b)
        for n in range(0, 3):
            expected = sum(a.homology(i).free_rank * b.homology(n - i).free_rank for i in range(0, 2))
            assert t.homology(n).free_rank == expected


def test_tensor_tor_term():
    c = ChainComplex.from_lists(ZZ, {1: 1, 0: 1}, {1: [[2]]})
    t = tensor(c, c)
    # Z/2 ⊗^L Z/2 = Z/2 in degrees 0 and 1
    assert t.homology(0) == HomologyModule(ZZ, 0, (2,))
    assert t.homology(1) == HomologyModule(ZZ, 0, (2,))


def test_pushout_colimit():
    # Z <-×2- Z -×3-> Z, pushout = Z^2 / (2,-3)Z ≅ Z
    z = ChainComplex.concentrated(ZZ)
    two = ChainMap(z, z, {0: Matrix(ZZ, 1, 1, [[2]])})
    three = ChainMap(z, z, {0: Matrix(ZZ, 1, 1, [[3]])})
    d = PosetDiagram(ZZ, {"a": z, "b": z, "c": z}, {("a", "b"): two, ("a", "c"): three}, order=["a", "b", "c"])
    p = poset_colimit(d)
    assert p.homology(0) == HomologyModule(ZZ, 1, ())
    # with ×2 on both legs the pushout has torsion
    d2 = PosetDiagram(ZZ, {"a": z, "b": z, "c": z}, {("a", "b"): two, ("a", "c"): two}, order=["a", "b", "c"])
    p2 = poset_colimit(d2)
    assert p2.homology(0) == HomologyModule(ZZ, 1, (2,))
    assert not p2.is_free()
    res, proj = p2.resolution()
    assert res.homology(0) == HomologyModule(ZZ, 1, (2,))
