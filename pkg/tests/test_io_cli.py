import json
import os
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import random_filtered, random_graded
from golden_cases import CASES, DATA, GOLDEN, run
from reesfilt import cli, io
from reesfilt.errors import InvariantError, SchemaError
from reesfilt.exactla import GF, QQ, ChainComplex
from reesfilt.rees import to_rees
from reesfilt.worked import corpus

FILES = sorted(f for f in os.listdir(DATA) if f.endswith(".json"))


def _read(name):
    with open(os.path.join(DATA, name), encoding="utf-8") as fh:
        return fh.read()


def test_bundled_corpus_is_current():
    assert sorted(corpus()) == FILES
    for name, obj in corpus().items():
        assert io.serialize(obj) == _read(name)


@pytest.mark.parametrize("name", FILES)
def test_corpus_round_trip_bytes(name):
    text = _read(name)
    assert io.serialize(io.parse(text).obj) == text


@given(st.integers(0, 10 ** 6), st.sampled_from(["z", "q", "fp:3"]))
@settings(max_examples=60, deadline=None)
def test_round_trip_random(seed, ring):
    from reesfilt.exactla import BaseRing
    r = BaseRing.from_descriptor(ring)
    rng = random.Random(seed)
    for obj in (random_filtered(rng, r, max_rank=3), random_graded(rng, r)):
        text = io.serialize(obj)
        back = io.parse(text).obj
        assert back == obj
        assert io.serialize(back) == text
    m = to_rees(random_filtered(rng, r, max_rank=2))
    assert io.parse(io.serialize(m)).obj == m


def test_rationals_and_field_entries():
    c = ChainComplex.from_lists(QQ, {1: 1, 0: 1}, {1: [[QQ(1) / 3]]})
    text = io.serialize(c)
    assert '"1/3"' in text
    assert io.parse(text).obj == c
    # F_p entries are read modulo p
    doc = json.loads(_read("chain_times_two.json"))
    assert io.from_json(doc, GF(2)).obj.d(1).is_zero()


def _doc(name):
    return json.loads(_read(name))


def test_schema_bad_shape_names_path():
    doc = _doc("filtered_two_step.json")
    doc["levels"]["0"]["differentials"]["1"] = [["2", "1"]]
    with pytest.raises(SchemaError) as e:
        io.from_json(doc)
    assert e.value.path.startswith("$.levels.0.differentials.1")


def test_schema_dd_names_degree_pair():
    doc = {"format_version": "1", "kind": "chain_complex", "ring": "z", "ranks": {"0": 1, "1": 1, "2": 1},
           "differentials": {"1": [["1"]], "2": [["1"]]}}
    with pytest.raises(SchemaError) as e:
        io.from_json(doc)
    assert "d∘d" in str(e.value) and "(2, 1)" in str(e.value)


@pytest.mark.parametrize("mutate,where", [
    (lambda d: d.pop("kind"), "$"),
    (lambda d: d.update(kind="sheaf"), "$.kind"),
    (lambda d: d.update(format_version="9"), "$.format_version"),
    (lambda d: d.update(extra=1), "$"),
    (lambda d: d["levels"]["0"]["differentials"]["1"][0].__setitem__(0, "two"), "$.levels.0.differentials.1"),
    (lambda d: d["levels"]["0"]["differentials"]["1"][0].__setitem__(0, 2), "$.levels.0.differentials.1"),
    (lambda d: d.update(tail="sideways"), "$.tail"),
    (lambda d: d["window"].update(top="x"), "$.window.top"),
    (lambda d: d["levels"].update({"7": {"ranks": {}, "differentials": {}}}), "$"),
])
def test_schema_errors(mutate, where):
    doc = _doc("filtered_two_step.json")
    mutate(doc)
    with pytest.raises((SchemaError, InvariantError)) as e:
        io.from_json(doc)
    if isinstance(e.value, SchemaError):
        assert e.value.path.startswith(where)


def test_structure_map_violation_is_located():
    doc = _doc("filtered_two_step.json")
    doc["structure_maps"]["1"]["0"] = [["0"]]
    io.from_json(doc)  # the zero map is a chain map
    doc["levels"]["1"] = {"ranks": {"1": 1}, "differentials": {}}
    doc["structure_maps"]["1"] = {"1": [["1"]]}
    with pytest.raises(SchemaError) as e:
        io.from_json(doc)
    assert e.value.path == "$.structure_maps.1"
    assert "commute" in str(e.value)


def _cli(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", FILES)
def test_check_every_bundled_file(name, capsys):
    code, out, _ = _cli(["check", os.path.join(DATA, name)], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["ok"], rep


def test_gr_on_times_two_file(capsys):
    code, out, _ = _cli(["gr", os.path.join(DATA, "filtered_times_two.json")], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["kind"] == "graded_complex"
    assert doc["homology"]["0"]["0"] == {"free_rank": 0, "torsion": ["2"]}
    assert doc["homology"]["1"]["0"] == {"free_rank": 1, "torsion": []}


def test_ss_on_two_step_file(capsys):
    code, out, _ = _cli(["ss", "--pages", "2", os.path.join(DATA, "filtered_two_step.json")], capsys)
    doc = json.loads(out)
    assert code == 0
    assert [(e["s"], e["t"], e["total_degree"], e["module"]) for e in doc["entries"]] == [
        (1, -1, 0, {"free_rank": 0, "torsion": ["2"]})]
    assert doc["stabilizes_at"] == 2
    code, out, _ = _cli(["ss", "--pages", "2", "--convention", "serre",
                         os.path.join(DATA, "filtered_two_step.json")], capsys)
    e = json.loads(out)["entries"][0]
    assert (e["p"], e["q"]) == (1, -1)


def test_error_documents(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    doc = _doc("filtered_two_step.json")
    doc["levels"]["0"]["differentials"]["1"] = [["2", "1"]]
    bad.write_text(json.dumps(doc))
    code, out, err = _cli(["gr", str(bad)], capsys)
    assert code == 2 and out == ""
    e = json.loads(err)
    assert e["kind"] == "error" and e["error"] == "SchemaError" and e["path"].startswith("$.levels.0")
    code, _, err = _cli(["gr", os.path.join(DATA, "graded_mixed.json")], capsys)
    assert code == 2 and "gr needs" in json.loads(err)["message"]
    code, _, err = _cli(["gr", "--ring", "fp:4", os.path.join(DATA, "filtered_unit.json")], capsys)
    assert code == 2
    code, _, _ = _cli(["gr", str(tmp_path / "missing.json")], capsys)
    assert code == 2
    with pytest.raises(SystemExit) as ex:
        cli.main(["ss", os.path.join(DATA, "filtered_unit.json")])
    assert ex.value.code == 2


def test_output_flag(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, out, _ = _cli(["underlying", "-o", str(target), os.path.join(DATA, "filtered_two_step.json")], capsys)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["kind"] == "chain_complex"


def test_tail_depth_widens(capsys):
    code, out, _ = _cli(["rees", "to", "--tail-depth", "3", os.path.join(DATA, "filtered_unit.json")], capsys)
    doc = json.loads(out)
    assert doc["window"] == {"bottom": -3, "top": 0}
    assert sorted(doc["pieces"], key=int) == ["-3", "-2", "-1", "0"]


def test_rees_cli_round_trip(tmp_path, capsys):
    src = os.path.join(DATA, "filtered_two_step.json")
    _, out, _ = _cli(["rees", "to", src], capsys)
    mid = tmp_path / "m.json"
    mid.write_text(out)
    _, back, _ = _cli(["rees", "from", str(mid)], capsys)
    assert back == _read("filtered_two_step.json")


def test_keys_sorted_numerically():
    text = io.serialize(corpus()["filtered_split.json"])
    doc = json.loads(text)
    assert list(doc["levels"]) == ["0", "1", "2"]
    g = random_graded(random.Random(1), weights=range(-12, 12))
    keys = list(json.loads(io.serialize(g))["pieces"])
    assert keys == sorted(keys, key=int)


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    with open(os.path.join(GOLDEN, name + ".json"), "rb") as fh:
        want = fh.read()
    code, out = run(name)
    assert code == 0
    assert out == want


def test_threads_env(monkeypatch):
    from reesfilt import _parallel
    monkeypatch.setenv("REESFILT_THREADS", "3")
    assert _parallel.threads() == 3
    assert _parallel.pmap(lambda v: v * v, range(20)) == [v * v for v in range(20)]
    # unusable values fall back to a single thread
    for bad in ("zero", "0", "-4"):
        monkeypatch.setenv("REESFILT_THREADS", bad)
        assert _parallel.threads() == 1
