"""Small named objects used by ``reesfilt demo``, the bundled corpus and the tests."""
from __future__ import annotations

import warnings

from . import io
from .exactla import ZZ, BaseRing, ChainComplex, ChainMap, Matrix
from .filtered import FilteredComplex, algebra_A, day_tensor_filtered, gr, kan_extend, underlying, unit_filtered
from .graded import GradedComplex, unit_graded
from .rees import coaction_index, rees_tensor, rees_unit, to_rees
from .specseq import HOMOLOGICAL, SERRE, compare_with_abutment, page, stabilization
from .tstruct import is_connective_beilinson, is_connective_standard, truncate


def times_two_complex(ring: BaseRing = ZZ) -> ChainComplex:
    """``ring --×2--> ring`` in degrees 1, 0."""
    return ChainComplex.from_lists(ring, {1: 1, 0: 1}, {1: [[ring(2)]]})


def two_step(ring: BaseRing = ZZ) -> FilteredComplex:
    """``X_1 = ring`` (degree 0) included into ``X_0 = (ring --×2--> ring)``; constant below 0."""
    x0 = times_two_complex(ring)
    x1 = ChainComplex.concentrated(ring)
    f = ChainMap(x1, x0, {0: Matrix(ring, 1, 1, [[ring.one]])})
    return FilteredComplex(ring, 0, 1, {0: x0, 1: x1}, {1: f})


def times_two_filtration(ring: BaseRing = ZZ) -> FilteredComplex:
    """``X_1 = ring --×2--> X_0 = ring``, both in degree 0."""
    c = ChainComplex.concentrated(ring)
    return FilteredComplex(ring, 0, 1, {0: c, 1: c}, {1: ChainMap(c, c, {0: Matrix(ring, 1, 1, [[ring(2)]])})})


def split_example(ring: BaseRing = ZZ) -> FilteredComplex:
    """Kan extension of ``ring`` at weights 0 and 2."""
    c = ChainComplex.concentrated(ring)
    return kan_extend(GradedComplex(ring, {0: c, 2: c}))


def mixed_graded(ring: BaseRing = ZZ) -> GradedComplex:
    """Weight 0: the ×2 complex; weight 1: ``ring`` in degree -1."""
    return GradedComplex(ring, {0: times_two_complex(ring), 1: ChainComplex.concentrated(ring, 1, -1)})


def corpus(ring: BaseRing = ZZ) -> dict:
    """File name -> object for the bundled data directory."""
    return {
        "chain_times_two.json": times_two_complex(ring),
        "graded_mixed.json": mixed_graded(ring),
        "filtered_unit.json": unit_filtered(ring),
        "filtered_algebra_A.json": algebra_A(ring),
        "filtered_two_step.json": two_step(ring),
        "filtered_times_two.json": times_two_filtration(ring),
        "filtered_split.json": split_example(ring),
        "rees_unit.json": rees_unit(ring),
        "rees_algebra_A.json": to_rees(algebra_A(ring)),
    }


def demo_examples(ring: BaseRing | None = None, convention: str = HOMOLOGICAL) -> dict:
    ring = ring or ZZ
    items = []

    def add(name, what, value):
        items.append({"name": name, "description": what, "result": value})

    x = two_step(ring)
    r_stab, _ = stabilization(x)
    add("two_step.gr", "associated graded of the two-step example", io.to_json(gr(x), homology=True))
    add("two_step.underlying", "underlying complex of the two-step example",
        io.to_json(underlying(x), homology=True))
    add("two_step.E2", "second page of its spectral sequence", io.page_to_json(page(x, 2), convention, r_stab))
    rep = compare_with_abutment(x)
    add("two_step.abutment", "E_infinity against gr of the filtration on homology",
        {"ok": rep.ok, "rows": [{"s": r.s, "n": r.n, "gr": r.graded_piece.to_json(), "E_infinity": r.e_infinity.to_json()}
                                for r in rep.rows]})
    add("unit.gr", "gr of the unit filtered complex", io.to_json(gr(unit_filtered(ring)), homology=True))
    add("A.gr", "gr of the algebra A (weight -1 carries Tor_1)", io.to_json(gr(algebra_A(ring)), homology=True))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        aa = day_tensor_filtered(algebra_A(ring), algebra_A(ring))
    add("A.day_square", "strict Day square of A", io.to_json(aa, homology=True))
    a = to_rees(algebra_A(ring))
    add("A.derived_square", "derived Rees tensor of A with itself", io.to_json(rees_tensor(a, a), homology=True))
    add("split.levels", "Kan extension of ring at weights 0 and 2", io.to_json(split_example(ring)))
    add("rees_unit.coaction", "coaction index of t^n in the depth-3 window",
        [str(i) for i in coaction_index(rees_unit(ring), 3)])
    g = GradedComplex(ring, {1: ChainComplex.concentrated(ring, 1, -1)})
    add("beilinson.weight1_degree_minus1", "ring at weight 1, degree -1",
        {"standard": bool(is_connective_standard(g)), "beilinson": bool(is_connective_beilinson(g))})
    add("truncate.times_two", "good truncation at 0 of the ×2 complex",
        io.to_json(truncate(times_two_complex(ring), 0), homology=True))
    add("unit_graded", "the unit graded complex", io.to_json(unit_graded(ring)))
    return {"format_version": io.FORMAT_VERSION, "kind": "demo", "ring": ring.descriptor, "convention": convention,
            "examples": items}


def write_corpus(directory, ring: BaseRing = ZZ) -> list[str]:
    import os

    names = []
    for name, obj in corpus(ring).items():
        with open(os.path.join(directory, name), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(io.serialize(obj))
        names.append(name)
    return names


__all__ = ["times_two_complex", "two_step", "times_two_filtration", "split_example", "mixed_graded", "corpus",
           "demo_examples", "write_corpus", "SERRE"]
