"""Command-line interface: ``reesfilt <command> [options]``.

Every command reads JSON documents (see :mod:`reesfilt.io`) and writes one
JSON document.  Failures write an ``error`` document to stderr and exit
nonzero.  Output is a function of the input bytes and flags only.

Weights follow the decreasing-filtration convention with ``t`` in weight -1.
The other common convention (increasing filtration, ``t`` in weight +1) is
obtained by negating every weight.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import io
from .errors import InvariantError, ReesfiltError, SchemaError
from .exactla import BaseRing, ChainComplex, ChainMap, block
from .filtered import FilteredComplex, day_tensor_filtered, gr, underlying, unit_filtered
from .graded import (GradedComplex, day_tensor_graded, from_comodule_with_iso, to_comodule, total_tensor_comparison,
                     unit_graded)
from .rees import (ReesModule, closed_point_pullback, from_rees, generic_point_pullback, rees_resolution, rees_tensor,
                   to_rees, truncate_tail)
from .specseq import HOMOLOGICAL, SERRE, compare_with_abutment, page, page_homology, pages, stabilization
from .tstruct import is_connective_beilinson, truncate, truncate_beilinson

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class UsageError(ReesfiltError):
    pass


# -- helpers ----------------------------------------------------------------------

def _ring(args) -> BaseRing | None:
    if not args.ring:
        return None
    try:
        return BaseRing.from_descriptor(args.ring)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _load(path: str, args) -> io.Document:
    return io.load(path, _ring(args))


def _widen(obj, depth: int):
    """Write ``depth`` constant-tail weights out explicitly."""
    if not depth:
        return obj
    if isinstance(obj, ReesModule):
        return truncate_tail(obj, depth)
    if isinstance(obj, FilteredComplex):
        return from_rees(truncate_tail(to_rees(obj), depth))
    return obj


def _as_filtered(doc: io.Document, what: str) -> FilteredComplex:
    if isinstance(doc.obj, FilteredComplex):
        return doc.obj
    if isinstance(doc.obj, ReesModule):
        return from_rees(doc.obj)
    raise UsageError(f"{what} needs a filtered_complex or rees_module, got {doc.kind}")


def _emit(doc: dict, args) -> None:
    text = io.dumps(doc)
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error_doc(exc: BaseException) -> dict:
    doc = {"format_version": io.FORMAT_VERSION, "kind": "error", "error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, SchemaError):
        doc["path"] = exc.path
    if isinstance(exc, InvariantError) and exc.where:
        doc["position"] = exc.where
    return doc


# -- commands ---------------------------------------------------------------------

def cmd_gr(args) -> int:
    x = _as_filtered(_load(args.file, args), "gr")
    _emit(io.to_json(gr(x), homology=True), args)
    return EXIT_OK


def cmd_underlying(args) -> int:
    x = _as_filtered(_load(args.file, args), "underlying")
    _emit(io.to_json(underlying(x), homology=True), args)
    return EXIT_OK


def cmd_homology(args) -> int:
    doc = _load(args.file, args)
    _emit({"format_version": io.FORMAT_VERSION, "kind": "homology", "ring": doc.ring.descriptor,
           "of": doc.kind, "homology": io.homology_to_json(doc.obj)}, args)
    return EXIT_OK


def cmd_rees(args) -> int:
    doc = _load(args.file, args)
    if args.direction == "to":
        if not isinstance(doc.obj, FilteredComplex):
            raise UsageError(f"rees to needs a filtered_complex, got {doc.kind}")
        out = _widen(to_rees(doc.obj), args.tail_depth)
    else:
        if not isinstance(doc.obj, ReesModule):
            raise UsageError(f"rees from needs a rees_module, got {doc.kind}")
        out = _widen(from_rees(doc.obj), args.tail_depth)
    _emit(io.to_json(out), args)
    return EXIT_OK


def cmd_tensor(args) -> int:
    a, b = _load(args.left, args), _load(args.right, args)
    if a.ring != b.ring:
        raise UsageError(f"tensor of documents over {a.ring.descriptor} and {b.ring.descriptor}")
    mode = args.mode
    if mode is None:
        if a.kind != b.kind:
            raise UsageError(f"cannot infer tensor mode from kinds {a.kind} and {b.kind}; pass --mode")
        mode = {"graded_complex": "graded", "filtered_complex": "filtered", "rees_module": "rees",
                "chain_complex": "graded"}[a.kind]
    if mode == "graded":
        def g(d):
            if isinstance(d.obj, GradedComplex):
                return d.obj
            if isinstance(d.obj, ChainComplex):
                return GradedComplex(d.ring, {0: d.obj})
            raise UsageError(f"graded tensor needs graded_complex inputs, got {d.kind}")
        out = day_tensor_graded(g(a), g(b))
    elif mode == "filtered":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            out = _widen(day_tensor_filtered(_as_filtered(a, "tensor"), _as_filtered(b, "tensor")), args.tail_depth)
    else:
        def m(d):
            if isinstance(d.obj, ReesModule):
                return d.obj
            return to_rees(_as_filtered(d, "tensor"))
        out = _widen(rees_tensor(m(a), m(b)), args.tail_depth)
    _emit(io.to_json(out, homology=True), args)
    return EXIT_OK


def cmd_truncate(args) -> int:
    doc = _load(args.file, args)
    obj = doc.obj
    if args.t_structure == "standard":
        n = args.degree
        if isinstance(obj, ChainComplex):
            out = truncate(obj, n)
        elif isinstance(obj, GradedComplex):
            out = GradedComplex(obj.ring, {w: truncate(c, n) for w, c in obj.pieces.items()})
        else:
            raise UsageError(f"standard truncation needs a chain_complex or graded_complex, got {doc.kind}")
    else:
        if not isinstance(obj, GradedComplex):
            raise UsageError(f"Beilinson truncation needs a graded_complex, got {doc.kind}")
        out = truncate_beilinson(obj)
    _emit(io.to_json(out, homology=True), args)
    return EXIT_OK


def cmd_ss(args) -> int:
    x = _as_filtered(_load(args.file, args), "ss")
    if args.pages < 1:
        raise UsageError("--pages must be at least 1")
    r_stab, _ = stabilization(x)
    _emit(io.page_to_json(page(x, args.pages), args.convention, r_stab), args)
    return EXIT_OK


def _checks_for(doc: io.Document) -> list[tuple[str, bool]]:
    obj = doc.obj
    out = [("parse and validate", True)]
    if isinstance(obj, ChainComplex):
        out.append(("truncation idempotent", all(truncate(truncate(obj, n), n) == truncate(obj, n)
                                                 for n in obj.degrees())))
        out.append(("serialize/parse round trip", io.parse(io.serialize(obj)).obj == obj))
    elif isinstance(obj, GradedComplex):
        g, iso = from_comodule_with_iso(to_comodule(obj))
        out.append(("comodule round trip", g == obj and iso.is_iso()))
        out.append(("total is monoidal", total_tensor_comparison(obj, unit_graded(obj.ring)).is_iso()))
        out.append(("Beilinson truncation is connective", bool(is_connective_beilinson(truncate_beilinson(obj)))))
        out.append(("serialize/parse round trip", io.parse(io.serialize(obj)).obj == obj))
    else:
        x = obj if isinstance(obj, FilteredComplex) else from_rees(obj)
        m = to_rees(x)
        out.append(("Rees round trip", from_rees(to_rees(x)) == x and to_rees(from_rees(m)) == m))
        out.append(("closed point is gr", closed_point_pullback(m) == gr(x)))
        out.append(("generic point is underlying", generic_point_pullback(m) == underlying(x)))
        out.append(("spectral sequence abutment", bool(compare_with_abutment(x))))
        ps = pages(x, 4)
        out.append(("E_{r+1} = H(E_r, d_r)", all(
            page_homology(ps[i]) == ps[i + 1].entries for i in range(3))))
        res = rees_resolution(m)
        ok = True
        for k in res.weights():
            d = res.delta_at(k)
            aug = res.augmentation[k]
            comps = {n: block(x.ring, [m.piece(k).rank(n)], [d.target.rank(n), d.source.rank(n - 1)],
                              {(0, 0): aug[n]}) for n in res.cone(k).degrees()}
            ok = ok and ChainMap(res.cone(k), m.piece(k), comps).is_quasi_isomorphism()
        out.append(("Rees resolution is a resolution", ok))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            unit = day_tensor_filtered(unit_filtered(x.ring), x)
        out.append(("Day unit law", unit == x.normalized()))
        out.append(("serialize/parse round trip", io.parse(io.serialize(obj)).obj == obj))
    return out


def cmd_check(args) -> int:
    doc = _load(args.file, args)
    checks = _checks_for(doc)
    ok = all(c[1] for c in checks)
    _emit({"format_version": io.FORMAT_VERSION, "kind": "check_report", "ring": doc.ring.descriptor,
           "input_kind": doc.kind, "ok": ok, "checks": [{"name": n, "ok": v} for n, v in checks]}, args)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_demo(args) -> int:
    from .worked import demo_examples

    _emit(demo_examples(_ring(args), args.convention), args)
    return EXIT_OK


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", metavar="z|q|fp:<p>", help="read matrix entries over this ring")
    common.add_argument("--tail-depth", type=int, default=0, metavar="K",
                        help="write K constant-tail weights out explicitly in filtered/Rees output")
    common.add_argument("--convention", choices=[HOMOLOGICAL, SERRE], default=HOMOLOGICAL,
                        help="spectral sequence indexing")
    common.add_argument("--output", "-o", metavar="PATH", help="write output here instead of stdout")

    p = argparse.ArgumentParser(prog="reesfilt", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gr", parents=[common], help="associated graded")
    s.add_argument("file")
    s.set_defaults(func=cmd_gr)

    s = sub.add_parser("underlying", parents=[common], help="underlying complex (colimit)")
    s.add_argument("file")
    s.set_defaults(func=cmd_underlying)

    s = sub.add_parser("homology", parents=[common], help="homology of any document")
    s.add_argument("file")
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("rees", parents=[common], help="filtered complex <-> Rees module")
    s.add_argument("direction", choices=["to", "from"])
    s.add_argument("file")
    s.set_defaults(func=cmd_rees)

    s = sub.add_parser("tensor", parents=[common], help="graded, filtered (Day) or derived Rees tensor")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--mode", choices=["graded", "filtered", "rees"])
    s.set_defaults(func=cmd_tensor)

    s = sub.add_parser("truncate", parents=[common], help="standard or Beilinson truncation")
    s.add_argument("file")
    s.add_argument("--t-structure", choices=["standard", "beilinson"], default="standard")
    s.add_argument("--degree", type=int, default=0, help="n for the standard truncation τ_{≥n}")
    s.set_defaults(func=cmd_truncate)

    s = sub.add_parser("ss", parents=[common], help="spectral sequence page")
    s.add_argument("file")
    s.add_argument("--pages", type=int, required=True, metavar="R")
    s.set_defaults(func=cmd_ss)

    s = sub.add_parser("check", parents=[common], help="run the invariant suite on an input")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("demo", parents=[common], help="emit the worked examples")
    s.set_defaults(func=cmd_demo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ReesfiltError, ValueError, OSError) as exc:
        sys.stderr.write(json.dumps(_error_doc(exc), indent=2, ensure_ascii=False) + "\n")
        return EXIT_INPUT if isinstance(exc, (SchemaError, InvariantError, UsageError, OSError)) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
