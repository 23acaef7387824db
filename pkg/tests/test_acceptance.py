"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s`` to see the lines as they
happen; they are also collected in the terminal summary.
"""
import hashlib
import json
import os
import random
import subprocess
import sys
import time

import pytest

from gen import random_cellular, random_filtered, random_graded
from golden_cases import CASES, GOLDEN
from reesfilt.exactla import GF, ZZ, ChainComplex, HomologyModule
from reesfilt.filtered import day_tensor_filtered_data, gr, underlying
from reesfilt.graded import GradedComplex, from_comodule_with_iso, to_comodule, total_tensor_comparison
from reesfilt.rees import (closed_point_pullback, coaction_index, comparison_map, comparison_weights, from_rees,
                           generic_point_pullback, rees_tensor, rees_unit, to_rees)
from reesfilt.specseq import compare_with_abutment, page, stabilization
from reesfilt.tstruct import is_connective_beilinson, is_connective_standard, truncate_beilinson
from reesfilt.worked import two_step
from test_graded import conjugated_comodule

SEED = 20240601


@pytest.fixture(scope="module")
def corpus_z():
    """The randomized corpus shared by criteria 1, 3 and 4."""
    t0 = time.perf_counter()
    rng = random.Random(SEED)
    xs = [random_filtered(rng, ZZ, max_width=5, max_rank=4) for _ in range(500)]
    for x in xs:
        assert x.top - x.bottom + 1 <= 5
        for c in x.levels.values():
            assert all(r <= 4 for r in c.ranks.values())
            assert all(abs(v) <= 9 for m in c.differentials().values() for row in m.to_lists() for v in row)
        for f in x.structure_maps.values():
            assert all(abs(v) <= 9 for m in f.components().values() for row in m.to_lists() for v in row)
    GENERATION["seconds"] = time.perf_counter() - t0
    return xs


GENERATION = {}


@pytest.mark.criterion(1, "Rees equivalence round trips on 500 filtered complexes over Z, < 10 s")
def test_criterion_1_equivalence(corpus_z, criterion):
    t0 = time.perf_counter()
    failures = 0
    for x in corpus_z:
        m = to_rees(x)
        failures += from_rees(m) != x
        failures += to_rees(from_rees(m)) != m
    dt = time.perf_counter() - t0 + GENERATION["seconds"]
    ok = failures == 0 and dt < 10
    criterion(ok, f"{len(corpus_z)} inputs, {failures} failures, timing includes generation", dt)
    assert failures == 0
    assert dt < 10


@pytest.mark.criterion(2, "comparison map is a weight-wise quasi-isomorphism on 100 cellular pairs, < 60 s")
def test_criterion_2_monoidality(criterion):
    rng = random.Random(SEED + 2)
    t0 = time.perf_counter()
    failures, weights = [], 0
    for i in range(100):
        x = random_cellular(rng, ZZ, max_width=4, max_rank=3)
        y = random_cellular(rng, ZZ, max_width=4, max_rank=3)
        assert x.tail == "constant" and y.tail == "constant"
        t = rees_tensor(to_rees(x), to_rees(y))
        day = day_tensor_filtered_data(x, y)
        for k in comparison_weights(x, y):
            weights += 1
            f = comparison_map(x, y, k, day=day, tensor_=t)
            same = t.piece(k).homology_degrees() == day.result.level(k).homology_degrees()
            if not (f.is_quasi_isomorphism() and same):
                failures.append((i, k))
    dt = time.perf_counter() - t0
    ok = not failures and dt < 60
    criterion(ok, f"100 pairs, {weights} weights checked, {len(failures)} failures", dt)
    assert not failures
    assert dt < 60


@pytest.mark.criterion(3, "closed point of to_rees equals gr, exactly")
def test_criterion_3_closed_point(corpus_z, criterion):
    failures = sum(closed_point_pullback(to_rees(x)) != gr(x) for x in corpus_z)
    criterion(failures == 0, f"{len(corpus_z)} inputs, {failures} failures")
    assert failures == 0


@pytest.mark.criterion(4, "generic point of to_rees equals underlying, exactly")
def test_criterion_4_generic_point(corpus_z, criterion):
    failures = sum(generic_point_pullback(to_rees(x)) != underlying(x) for x in corpus_z)
    criterion(failures == 0, f"{len(corpus_z)} inputs, {failures} failures")
    assert failures == 0


@pytest.mark.criterion(5, "comodule round trips (200) and total monoidality (100 pairs)")
def test_criterion_5_comodules(criterion):
    rng = random.Random(SEED + 5)
    failures = 0
    for _ in range(200):
        x = random_graded(rng, ZZ, weights=range(-3, 4), max_rank=3)
        g, iso = from_comodule_with_iso(to_comodule(x))
        failures += not (g == x and iso.is_iso())
        c = conjugated_comodule(rng, x)
        g2, iso2 = from_comodule_with_iso(c)
        back = to_comodule(g2)
        good = iso2.is_iso() and set(back.coaction) == set(c.coaction) and all(
            iso2 @ back.coaction[w] == c.coaction[w] @ iso2 for w in c.coaction)
        failures += not good
    pairs = 0
    for _ in range(100):
        x, y = random_graded(rng, ZZ), random_graded(rng, ZZ)
        pairs += total_tensor_comparison(x, y).is_iso()
    ok = failures == 0 and pairs == 100
    criterion(ok, f"{failures} round-trip failures, {pairs}/100 monoidality isomorphisms")
    assert failures == 0 and pairs == 100


@pytest.mark.criterion(6, "coaction index of the weight -n element of the windowed Rees unit is -n, depths 1-6")
def test_criterion_6_coaction(criterion):
    bad = []
    for depth in range(1, 7):
        idx = coaction_index(rees_unit(ZZ), depth)
        # carrier order is weights ascending, one basis element per weight
        for n in range(0, depth + 1):
            if idx[depth - n] != -n:
                bad.append((depth, n, idx[depth - n]))
    criterion(not bad, f"mismatches {bad}" if bad else "depths 1-6 exact")
    assert not bad


@pytest.mark.criterion(7, "spectral sequence abuts to gr of homology on 200 inputs over Z and F_2, < 120 s")
def test_criterion_7_convergence(criterion):
    rng = random.Random(SEED + 7)
    t0 = time.perf_counter()
    failures, torsion = 0, 0
    for ring in (ZZ, GF(2)):
        for _ in range(100):
            x = random_filtered(rng, ring, max_width=5, max_rank=4)
            rep = compare_with_abutment(x)
            failures += not rep.ok
            if ring == ZZ and any(h.torsion for p in (page(x, 1),) for h in p.entries.values()):
                torsion += 1
    x = two_step()
    r, einf = stabilization(x)
    e2 = page(x, 2)
    want = {(1, -1): HomologyModule(ZZ, 0, (2,))}
    worked = (e2.entries == want and einf.entries == want and r == 2
              and compare_with_abutment(x).ok and einf.total_degree(0) == {1: HomologyModule(ZZ, 0, (2,))})
    dt = time.perf_counter() - t0
    ok = failures == 0 and worked and torsion > 0 and dt < 120
    criterion(ok, f"200 inputs, {failures} failures, {torsion} with torsion on E_1, worked example "
                  f"{'exact' if worked else 'WRONG'}", dt)
    assert failures == 0 and worked and torsion > 0
    assert dt < 120


@pytest.mark.criterion(8, "degree -n at weight n: all Beilinson-, no standard-connective; truncations connective")
def test_criterion_8_tstructures(criterion):
    family = [GradedComplex(ZZ, {n: ChainComplex.concentrated(ZZ, 1, -n)}) for n in range(1, 51)]
    beil = sum(bool(is_connective_beilinson(g)) for g in family)
    std = sum(bool(is_connective_standard(g)) for g in family)
    rng = random.Random(SEED + 8)
    inputs = family + [random_graded(rng, ZZ, degrees=(-2, -1, 0, 1)) for _ in range(200)]
    truncated = sum(bool(is_connective_beilinson(truncate_beilinson(g))) for g in inputs)
    ok = beil == 50 and std == 0 and truncated == len(inputs)
    criterion(ok, f"Beilinson {beil}/50, standard {std}/50, truncations connective {truncated}/{len(inputs)}")
    assert beil == 50 and std == 0 and truncated == len(inputs)


DRIVER = r"""
import contextlib, hashlib, io, json, sys
sys.path.insert(0, sys.argv[1])
from golden_cases import CASES, argv
from reesfilt import cli
out = {}
for name in sorted(CASES):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(argv(name))
    out[name] = [code, hashlib.sha256(buf.getvalue().encode("utf-8")).hexdigest()]
print(json.dumps(out, sort_keys=True))
"""


@pytest.mark.criterion(9, "demo and golden commands byte-identical over 5 runs and 1/4/8 threads")
def test_criterion_9_determinism(criterion):
    here = os.path.dirname(os.path.abspath(__file__))
    want = {}
    for name in CASES:
        with open(os.path.join(GOLDEN, name + ".json"), "rb") as fh:
            want[name] = [0, hashlib.sha256(fh.read()).hexdigest()]
    runs, mismatched = 0, set()
    for threads in (1, 4, 8):
        for _ in range(5):
            env = dict(os.environ, REESFILT_THREADS=str(threads))
            env.pop("PYTHONHASHSEED", None)
            proc = subprocess.run([sys.executable, "-c", DRIVER, here], capture_output=True, text=True, env=env,
                                  check=True)
            got = json.loads(proc.stdout)
            runs += 1
            mismatched |= {n for n in want if got.get(n) != want[n]}
    ok = not mismatched
    criterion(ok, f"{len(CASES)} commands x {runs} runs" + (f", mismatched {sorted(mismatched)}" if mismatched else ""))
    assert not mismatched
