"""JSON interchange format.

Every document is an object with ``format_version``, ``kind`` and ``ring``
(``"z"``, ``"q"`` or ``"fp:<p>"``).  Matrices are row-major lists of decimal
strings; weights and degrees are object keys written in ascending numeric
order.  A top-level ``"homology"`` key is informational: commands add it to
their output and the parser drops it.

    chain_complex     ranks, differentials
    graded_complex    pieces: weight -> chain complex
    filtered_complex  window, tail, levels: n -> chain complex, structure_maps: n -> {degree: matrix}
    rees_module       window, tail, pieces, t_action (same layout as filtered_complex)
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .errors import InvariantError, SchemaError
from .exactla import BaseRing, ChainComplex, ChainMap, HomologyModule, Matrix
from .filtered import TAILS, FilteredComplex
from .graded import GradedComplex
from .rees import ReesModule

FORMAT_VERSION = "1"
KINDS = ("chain_complex", "graded_complex", "filtered_complex", "rees_module")
_INT = re.compile(r"^-?[0-9]+$")
_FRAC = re.compile(r"^-?[0-9]+(/[0-9]+)?$")


@dataclass
class Document:
    kind: str
    ring: BaseRing
    obj: Any


# -- writing --------------------------------------------------------------------

def _entry(ring: BaseRing, x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def matrix_to_json(m: Matrix) -> list:
    return [[_entry(m.ring, x) for x in row] for row in m.to_lists()]


def complex_to_json(c: ChainComplex) -> dict:
    return {
        "ranks": {str(n): r for n, r in c.ranks.items()},
        "differentials": {str(n): matrix_to_json(m) for n, m in c.differentials().items()},
    }


def map_to_json(f: ChainMap) -> dict:
    return {str(n): matrix_to_json(m) for n, m in sorted(f.components().items())}


def module_to_json(h: HomologyModule) -> dict:
    return h.to_json()


def homology_to_json(obj) -> dict:
    """Nonzero homology, keyed by degree (complex) or weight then degree."""
    def one(c: ChainComplex) -> dict:
        return {str(n): module_to_json(h) for n, h in c.homology_degrees().items() if not h.is_zero()}

    if isinstance(obj, ChainComplex):
        return one(obj)
    if isinstance(obj, GradedComplex):
        return {str(w): one(c) for w, c in obj.pieces.items()}
    if isinstance(obj, FilteredComplex):
        return {str(n): one(obj.level(n)) for n in obj.window()}
    if isinstance(obj, ReesModule):
        return {str(w): one(obj.piece(w)) for w in range(obj.bottom, obj.top + 1)}
    raise TypeError(f"no homology summary for {type(obj).__name__}")


def page_to_json(p, convention: str, r_stab: int | None = None) -> dict:
    """A spectral sequence page; ``serre`` re-indexes ``(s, t)`` as ``(p, q)``."""
    from .specseq import SERRE, to_serre

    ring = p.ring
    entries, diffs = [], []
    keyed = []
    for (s, t), e in p.entries.items():
        a, b = to_serre(s, t) if convention == SERRE else (s, t)
        keyed.append(((a, b), (s, t), e))
    names = ("p", "q") if convention == SERRE else ("s", "t")
    for (a, b), (s, t), e in sorted(keyed):
        entries.append({names[0]: a, names[1]: b, "total_degree": s + t, "module": module_to_json(e),
                        "generator_orders": [str(o) for o in p.orders[(s, t)]]})
    keyed = []
    for (s, t), m in p.differentials.items():
        src = to_serre(s, t) if convention == SERRE else (s, t)
        tgt = to_serre(s + p.r, t - p.r - 1) if convention == SERRE else (s + p.r, t - p.r - 1)
        keyed.append((src, tgt, m))
    for src, tgt, m in sorted(keyed, key=lambda z: z[0]):
        diffs.append({"source": list(src), "target": list(tgt), "matrix": matrix_to_json(m)})
    doc = {"format_version": FORMAT_VERSION, "kind": "spectral_sequence_page", "ring": ring.descriptor,
           "convention": convention, "page": p.r, "entries": entries, "differentials": diffs}
    if r_stab is not None:
        doc["stabilizes_at"] = r_stab
    return doc


def to_json(obj, homology: bool = False) -> dict:
    if isinstance(obj, Document):
        obj = obj.obj
    if isinstance(obj, ChainComplex):
        doc = {"format_version": FORMAT_VERSION, "kind": "chain_complex", "ring": obj.ring.descriptor}
        doc.update(complex_to_json(obj))
    elif isinstance(obj, GradedComplex):
        doc = {"format_version": FORMAT_VERSION, "kind": "graded_complex", "ring": obj.ring.descriptor,
               "pieces": {str(w): complex_to_json(c) for w, c in obj.pieces.items()}}
    elif isinstance(obj, FilteredComplex):
        doc = {"format_version": FORMAT_VERSION, "kind": "filtered_complex", "ring": obj.ring.descriptor,
               "window": {"bottom": obj.bottom, "top": obj.top}, "tail": obj.tail,
               "levels": {str(n): complex_to_json(c) for n, c in obj.levels.items()},
               "structure_maps": {str(n): map_to_json(f) for n, f in obj.structure_maps.items()}}
    elif isinstance(obj, ReesModule):
        doc = {"format_version": FORMAT_VERSION, "kind": "rees_module", "ring": obj.ring.descriptor,
               "window": {"bottom": obj.bottom, "top": obj.top}, "tail": obj.tail,
               "pieces": {str(w): complex_to_json(c) for w, c in obj.pieces.items()},
               "t_action": {str(w): map_to_json(f) for w, f in obj.t_action.items()}}
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    if homology:
        doc["homology"] = homology_to_json(obj)
    return doc


def dumps(doc: dict) -> str:
    """Canonical text: two-space indent, insertion order, trailing newline."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def serialize(obj, homology: bool = False) -> str:
    return dumps(to_json(obj, homology=homology))


# -- reading --------------------------------------------------------------------

def _expect(d, typ, path):
    if not isinstance(d, typ):
        name = {dict: "object", list: "array", str: "string", int: "integer"}.get(typ, str(typ))
        raise SchemaError(f"expected {name}, got {type(d).__name__}", path)
    return d


def _keys(d: dict, required: set, optional: set, path: str):
    missing = required - set(d)
    if missing:
        raise SchemaError(f"missing field(s) {sorted(missing)}", path)
    extra = set(d) - required - optional
    if extra:
        raise SchemaError(f"unknown field(s) {sorted(extra)}", path)


def _intkey(k: str, path: str) -> int:
    if not _INT.match(k):
        raise SchemaError(f"key {k!r} is not an integer", path)
    return int(k)


def _int(v, path: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"expected integer, got {v!r}", path)
    return v


def _scalar(ring: BaseRing, v, path: str):
    if not isinstance(v, str):
        raise SchemaError(f"matrix entries are decimal strings, got {v!r}", path)
    pat = _FRAC if ring.kind == "Q" else _INT
    if not pat.match(v):
        raise SchemaError(f"bad entry {v!r} for ring {ring.descriptor}", path)
    if ring.kind == "Q":
        if "/" in v and int(v.split("/")[1]) == 0:
            raise SchemaError("zero denominator", path)
        return Fraction(v)
    return ring(int(v))


def _matrix(ring: BaseRing, v, rows: int, cols: int, path: str) -> Matrix:
    _expect(v, list, path)
    if len(v) != rows:
        raise SchemaError(f"matrix has {len(v)} rows, expected {rows} (shape {rows}x{cols})", path)
    data = []
    for i, row in enumerate(v):
        _expect(row, list, f"{path}[{i}]")
        if len(row) != cols:
            raise SchemaError(f"row has {len(row)} entries, expected {cols} (shape {rows}x{cols})", f"{path}[{i}]")
        data.append([_scalar(ring, x, f"{path}[{i}][{j}]") for j, x in enumerate(row)])
    return Matrix(ring, rows, cols, data)


def _complex(ring: BaseRing, d, path: str) -> ChainComplex:
    _expect(d, dict, path)
    _keys(d, {"ranks"}, {"differentials"}, path)
    ranks = {}
    for k, r in _expect(d["ranks"], dict, f"{path}.ranks").items():
        n = _intkey(k, f"{path}.ranks")
        r = _int(r, f"{path}.ranks.{k}")
        if r < 0:
            raise SchemaError("negative rank", f"{path}.ranks.{k}")
        ranks[n] = r
    diffs = {}
    for k, m in _expect(d.get("differentials", {}), dict, f"{path}.differentials").items():
        n = _intkey(k, f"{path}.differentials")
        diffs[n] = _matrix(ring, m, ranks.get(n - 1, 0), ranks.get(n, 0), f"{path}.differentials.{k}")
    try:
        return ChainComplex(ring, ranks, diffs, check=True)
    except InvariantError as e:
        raise SchemaError(str(e), path) from None


def _map(ring: BaseRing, d, src: ChainComplex, tgt: ChainComplex, path: str) -> ChainMap:
    _expect(d, dict, path)
    comps = {}
    for k, m in d.items():
        n = _intkey(k, path)
        comps[n] = _matrix(ring, m, tgt.rank(n), src.rank(n), f"{path}.{k}")
    try:
        return ChainMap(src, tgt, comps, check=True)
    except InvariantError as e:
        raise SchemaError(str(e), path) from None


def _windowed(ring: BaseRing, doc: dict, pieces_key: str, maps_key: str):
    w = _expect(doc["window"], dict, "$.window")
    _keys(w, {"bottom", "top"}, set(), "$.window")
    b, t = _int(w["bottom"], "$.window.bottom"), _int(w["top"], "$.window.top")
    if t < b:
        raise SchemaError(f"empty window [{b}, {t}]", "$.window")
    tail = doc["tail"]
    if tail not in TAILS:
        raise SchemaError(f"tail must be one of {list(TAILS)}, got {tail!r}", "$.tail")
    pieces = {}
    for k, c in _expect(doc[pieces_key], dict, f"$.{pieces_key}").items():
        n = _intkey(k, f"$.{pieces_key}")
        if not b <= n <= t:
            raise SchemaError(f"index {n} outside window [{b}, {t}]", f"$.{pieces_key}.{k}")
        pieces[n] = _complex(ring, c, f"$.{pieces_key}.{k}")
    zero = ChainComplex.zero(ring)
    maps = {}
    for k, m in _expect(doc.get(maps_key, {}), dict, f"$.{maps_key}").items():
        n = _intkey(k, f"$.{maps_key}")
        if not b < n <= t:
            raise SchemaError(f"map index {n} outside ({b}, {t}]", f"$.{maps_key}.{k}")
        maps[n] = _map(ring, m, pieces.get(n, zero), pieces.get(n - 1, zero), f"$.{maps_key}.{k}")
    return b, t, tail, pieces, maps


def from_json(doc, ring: BaseRing | None = None) -> Document:
    """Validate a decoded document; ``ring`` overrides the document's own ring."""
    _expect(doc, dict, "$")
    for key in ("format_version", "kind", "ring"):
        if key not in doc:
            raise SchemaError(f"missing field {key!r}", "$")
    if doc["format_version"] != FORMAT_VERSION:
        raise SchemaError(f"unsupported format_version {doc['format_version']!r}", "$.format_version")
    kind = doc["kind"]
    if kind not in KINDS:
        raise SchemaError(f"unknown kind {kind!r}; expected one of {list(KINDS)}", "$.kind")
    try:
        own = BaseRing.from_descriptor(_expect(doc["ring"], str, "$.ring"))
    except ValueError as e:
        raise SchemaError(str(e), "$.ring") from None
    ring = ring or own
    head = {"format_version", "kind", "ring"}
    info = {"homology"}
    if kind == "chain_complex":
        _keys(doc, head | {"ranks"}, info | {"differentials"}, "$")
        obj = _complex(ring, {k: doc[k] for k in ("ranks", "differentials") if k in doc}, "$")
    elif kind == "graded_complex":
        _keys(doc, head | {"pieces"}, info, "$")
        pieces = {}
        for k, c in _expect(doc["pieces"], dict, "$.pieces").items():
            pieces[_intkey(k, "$.pieces")] = _complex(ring, c, f"$.pieces.{k}")
        obj = GradedComplex(ring, pieces)
    elif kind == "filtered_complex":
        _keys(doc, head | {"window", "tail", "levels"}, info | {"structure_maps"}, "$")
        b, t, tail, pieces, maps = _windowed(ring, doc, "levels", "structure_maps")
        obj = FilteredComplex(ring, b, t, pieces, maps, tail, check=False)
    else:
        _keys(doc, head | {"window", "tail", "pieces"}, info | {"t_action"}, "$")
        b, t, tail, pieces, maps = _windowed(ring, doc, "pieces", "t_action")
        obj = ReesModule(ring, b, t, pieces, maps, tail, check=False)
    return Document(kind, ring, obj)


def parse(text: str, ring: BaseRing | None = None) -> Document:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e.msg} (line {e.lineno}, column {e.colno})", "$") from None
    return from_json(doc, ring)


def load(path, ring: BaseRing | None = None) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), ring)
