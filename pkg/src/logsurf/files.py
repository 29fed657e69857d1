"""Surface, cluster and report files.

All three are UTF-8 JSON documents.  Rationals are written as integers or as
``"a/b"`` strings; JSON floats are refused on input.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import lattice as la
from .lattice import NSLattice
from .singularities import ExceptionalCluster
from .surface import CurveRecord, FieldMode, LogSurface

_RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*-?\d+)?\s*$")


class FileFormatError(ValueError):
    def __init__(self, msg: str, where: str = ""):
        super().__init__(f"{where}: {msg}" if where else msg)
        self.where = where


def parse_rational(x: Any, where: str = "") -> Fraction:
    if isinstance(x, bool):
        raise FileFormatError(f"expected a rational, got {x!r}", where)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str) and _RATIONAL.match(x):
        try:
            return Fraction(x.replace(" ", ""))
        except ZeroDivisionError:
            raise FileFormatError(f"zero denominator in {x!r}", where) from None
    raise FileFormatError(f"expected an integer or 'a/b' string, got {x!r}", where)


def parse_class(text: str) -> tuple[Fraction, ...]:
    """Comma-separated rationals, as typed on the command line."""
    parts = [p for p in text.split(",")]
    if not text.strip() or any(not p.strip() for p in parts):
        raise FileFormatError(f"malformed class {text!r}")
    return tuple(parse_rational(p.strip(), f"class entry {i + 1}") for i, p in enumerate(parts))


def dump_rational(x: Fraction) -> int | str:
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _vec(raw, where, n=None):
    if not isinstance(raw, list):
        raise FileFormatError("expected an array", where)
    if n is not None and len(raw) != n:
        raise FileFormatError(f"expected {n} entries, got {len(raw)}", where)
    return tuple(parse_rational(x, f"{where}[{i}]") for i, x in enumerate(raw))


def _load_json(text: str) -> dict:
    try:
        doc = json.loads(text, parse_float=_no_float)
    except json.JSONDecodeError as e:
        raise FileFormatError(e.msg, f"line {e.lineno} column {e.colno}") from None
    if not isinstance(doc, dict):
        raise FileFormatError("top level must be an object", "line 1 column 1")
    return doc


def _no_float(s):
    raise FileFormatError(f"floating point literal {s} not allowed; use 'a/b'")


def _field(raw) -> FieldMode:
    if raw is None:
        return FieldMode.char0()
    if not isinstance(raw, dict):
        raise FileFormatError("field must be an object", "field")
    kind = raw.get("kind", "Char0")
    p = raw.get("p")
    if p is not None and (not isinstance(p, int) or isinstance(p, bool)):
        raise FileFormatError("p must be an integer", "field.p")
    return FieldMode(kind, p, bool(raw.get("fbar", False)))


def _dump_field(f: FieldMode) -> dict:
    if f.kind == "Char0":
        return {"kind": "Char0"}
    return {"kind": f.kind, "p": f.p, "fbar": f.is_Fp_closure}


def surface_from_dict(doc: dict) -> LogSurface:
    """Raises FileFormatError on structural problems and LatticeError for a bad Gram matrix."""
    for key in ("gram", "canonical", "ample", "curves"):
        if key not in doc:
            raise FileFormatError(f"missing key {key!r}")
    graw = doc["gram"]
    if not isinstance(graw, list) or not graw:
        raise FileFormatError("gram must be a non-empty array of rows", "gram")
    n = len(graw)
    if "rank" in doc and doc["rank"] != n:
        raise FileFormatError(f"rank {doc['rank']} does not match gram size {n}", "rank")
    g = tuple(_vec(r, f"gram[{i}]", n) for i, r in enumerate(graw))
    K = _vec(doc["canonical"], "canonical", n)
    H = _vec(doc["ample"], "ample", n)
    curves = []
    if not isinstance(doc["curves"], list):
        raise FileFormatError("curves must be an array", "curves")
    for i, c in enumerate(doc["curves"]):
        where = f"curves[{i}]"
        if not isinstance(c, dict) or "id" not in c or "class" not in c:
            raise FileFormatError("curve needs id and class", where)
        genus = c.get("genus", 0)
        if not isinstance(genus, int) or isinstance(genus, bool):
            raise FileFormatError("genus must be an integer", where)
        curves.append(CurveRecord(str(c["id"]), _vec(c["class"], f"{where}.class", n), genus,
                                  bool(c.get("singular", False))))
    boundary = []
    for i, b in enumerate(doc.get("boundary", [])):
        where = f"boundary[{i}]"
        if not isinstance(b, dict) or "curve" not in b or "coeff" not in b:
            raise FileFormatError("boundary term needs curve and coeff", where)
        boundary.append((str(b["curve"]), parse_rational(b["coeff"], where)))
    flags = doc.get("flags", {})
    fm = _field(doc.get("field"))
    lat = NSLattice(g, K, H)  # may raise LatticeError
    return LogSurface(lat, tuple(curves), tuple(boundary), fm,
                      bool(flags.get("q_factorial", True)), bool(flags.get("rational_sing", True)))


def surface_to_dict(s: LogSurface) -> dict:
    curves = []
    for c in s.curves:
        d = {"id": c.id, "class": [dump_rational(x) for x in c.cls], "genus": c.genus}
        if c.through_singularity:
            d["singular"] = True
        curves.append(d)
    return {
        "field": _dump_field(s.field),
        "rank": s.rank,
        "gram": [[dump_rational(x) for x in row] for row in s.lattice.gram],
        "canonical": [dump_rational(x) for x in s.K],
        "ample": [dump_rational(x) for x in s.H],
        "curves": curves,
        "boundary": [{"curve": cid, "coeff": dump_rational(x)} for cid, x in s.boundary],
        "flags": {"q_factorial": s.q_factorial, "rational_sing": s.rational_sing},
    }


def cluster_from_dict(doc: dict) -> tuple[ExceptionalCluster, FieldMode]:
    if "curves" not in doc:
        raise FileFormatError("missing key 'curves'")
    curves = []
    for i, c in enumerate(doc["curves"]):
        where = f"curves[{i}]"
        if not isinstance(c, dict) or "id" not in c or "self" not in c:
            raise FileFormatError("cluster curve needs id and self", where)
        curves.append((str(c["id"]), parse_rational(c["self"], where), int(c.get("genus", 0))))
    n = len(curves)
    adj = doc.get("adjacency", [[0] * n for _ in range(n)])
    if not isinstance(adj, list) or len(adj) != n:
        raise FileFormatError(f"adjacency must have {n} rows", "adjacency")
    adj = [_vec(r, f"adjacency[{i}]", n) for i, r in enumerate(adj)]
    boundary = {}
    for i, b in enumerate(doc.get("boundary", [])):
        where = f"boundary[{i}]"
        if not isinstance(b, dict) or not {"id", "coeff", "meets"} <= b.keys():
            raise FileFormatError("boundary entry needs id, coeff and meets", where)
        boundary[str(b["id"])] = (parse_rational(b["coeff"], where), _vec(b["meets"], where, n))
    return ExceptionalCluster.build(curves, adj, boundary), _field(doc.get("field"))


def cluster_to_dict(cl: ExceptionalCluster, fm: FieldMode | None = None) -> dict:
    doc: dict = {}
    if fm is not None:
        doc["field"] = _dump_field(fm)
    doc["curves"] = [{"id": i, "self": dump_rational(e), "genus": g}
                     for i, e, g in zip(cl.ids, cl.self_int, cl.genus)]
    doc["adjacency"] = [[dump_rational(x) for x in row] for row in cl.adjacency]
    doc["boundary"] = [{"id": k, "coeff": dump_rational(x), "meets": [dump_rational(m) for m in meets]}
                       for k, (x, meets) in cl.boundary.items()]
    return doc


def _scalar_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (list, dict)) for x in v)


def dumps(doc: dict) -> str:
    """Stable, diff-friendly JSON: one key per line, short arrays inline."""
    def inline(v):
        return json.dumps(v, ensure_ascii=False, separators=(", ", ": "))

    lines = ["{"]
    items = list(doc.items())
    for k, (key, v) in enumerate(items):
        tail = "," if k < len(items) - 1 else ""
        if isinstance(v, list) and v and not _scalar_list(v):
            lines.append(f"  {json.dumps(key, ensure_ascii=False)}: [")
            for j, x in enumerate(v):
                lines.append(f"    {inline(x)}" + ("," if j < len(v) - 1 else ""))
            lines.append(f"  ]{tail}")
        else:
            lines.append(f"  {json.dumps(key, ensure_ascii=False)}: {inline(v)}{tail}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def loads_surface(text: str) -> LogSurface:
    return surface_from_dict(_load_json(text))


def dumps_surface(s: LogSurface) -> str:
    return dumps(surface_to_dict(s))


def load_surface(path) -> LogSurface:
    return loads_surface(Path(path).read_text(encoding="utf-8"))


def save_surface(s: LogSurface, path) -> None:
    Path(path).write_text(dumps_surface(s), encoding="utf-8")


def loads_cluster(text: str) -> tuple[ExceptionalCluster, FieldMode]:
    return cluster_from_dict(_load_json(text))


def load_cluster(path) -> tuple[ExceptionalCluster, FieldMode]:
    return loads_cluster(Path(path).read_text(encoding="utf-8"))


def is_cluster_doc(text: str) -> bool:
    try:
        doc = _load_json(text)
    except FileFormatError:
        return False
    return "adjacency" in doc or "gram" not in doc


def dumps_report(doc: dict) -> str:
    return json.dumps(doc, ensure_ascii=False, indent=2, sort_keys=False) + "\n"


def fmt_class(v) -> list:
    return [dump_rational(x) for x in v]
