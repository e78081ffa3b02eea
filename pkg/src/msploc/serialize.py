"""JSON graph files.

Rationals are strings "p/q" or "p"; levels "0" | "1" | "inf"; monodromy
"1phi" | "1rho" | "m1" | "m2" (plus "broad"); edge classes "01" | "1inf" | "0inf".
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .graph import DecoratedGraph, Edge, EdgeClass, Leg, Level, Monodromy, Vertex


class GraphFormatError(ValueError):
    """Malformed graph document.  `field` names the offending location."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


_RAT = re.compile(r"^-?\d+(/\d+)?$")


def parse_rat(text: Any, field: str = "value") -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise GraphFormatError(field, f"expected a rational string, got {text!r}")
    s = str(text).strip()
    if not _RAT.match(s):
        raise GraphFormatError(field, f"not a rational: {text!r}")
    num, _, den = s.partition("/")
    if den and int(den) == 0:
        raise GraphFormatError(field, "zero denominator")
    return Fraction(int(num), int(den) if den else 1)


def format_rat(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


_VERTEX_KEYS = {"id", "level", "genus", "deg0", "degInf", "stable", "hour"}
_EDGE_KEYS = {"id", "endA", "endB", "class", "deg0", "degInf", "orbifoldAtInf", "specialAtInf"}
_LEG_KEYS = {"id", "vertex", "position", "monodromy"}
_TOP_KEYS = {"vertices", "edges", "legs", "degL2"}


def _check_keys(obj: Any, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise GraphFormatError(where, "expected an object")
    for k in obj:
        if k not in allowed:
            raise GraphFormatError(f"{where}.{k}", "unknown key")
    for k in sorted(required):
        if k not in obj:
            raise GraphFormatError(f"{where}.{k}", "missing key")


def _enum(cls, value: Any, field: str):
    try:
        return cls(value)
    except ValueError:
        allowed = ", ".join(repr(m.value) for m in cls)
        raise GraphFormatError(field, f"{value!r} is not one of {allowed}") from None


def _bool(value: Any, field: str) -> bool:
    if not isinstance(value, bool):
        raise GraphFormatError(field, "expected true or false")
    return value


def _int(value: Any, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise GraphFormatError(field, "expected an integer")
    return value


def _str(value: Any, field: str) -> str:
    if not isinstance(value, str):
        raise GraphFormatError(field, "expected a string id")
    return value


def graph_from_dict(doc: Any) -> DecoratedGraph:
    _check_keys(doc, _TOP_KEYS, {"vertices", "edges", "legs"}, "graph")
    for key in ("vertices", "edges", "legs"):
        if not isinstance(doc[key], list):
            raise GraphFormatError(key, "expected a list")
    vertices = []
    for i, v in enumerate(doc["vertices"]):
        w = f"vertices[{i}]"
        _check_keys(v, _VERTEX_KEYS, {"id", "level", "stable"}, w)
        hour = v.get("hour")
        vertices.append(Vertex(
            id=_str(v["id"], f"{w}.id"),
            level=_enum(Level, v["level"], f"{w}.level"),
            genus=_int(v.get("genus", 0), f"{w}.genus"),
            deg0=parse_rat(v.get("deg0", "0"), f"{w}.deg0"),
            deg_inf=parse_rat(v.get("degInf", "0"), f"{w}.degInf"),
            stable=_bool(v["stable"], f"{w}.stable"),
            hour=None if hour is None else _int(hour, f"{w}.hour"),
        ))
    edges = []
    for i, e in enumerate(doc["edges"]):
        w = f"edges[{i}]"
        _check_keys(e, _EDGE_KEYS, {"id", "endA", "endB", "class"}, w)
        edges.append(Edge(
            id=_str(e["id"], f"{w}.id"),
            end_a=_str(e["endA"], f"{w}.endA"),
            end_b=_str(e["endB"], f"{w}.endB"),
            cls=_enum(EdgeClass, e["class"], f"{w}.class"),
            deg0=parse_rat(e.get("deg0", "0"), f"{w}.deg0"),
            deg_inf=parse_rat(e.get("degInf", "0"), f"{w}.degInf"),
            orbifold_at_inf=_bool(e.get("orbifoldAtInf", False), f"{w}.orbifoldAtInf"),
            special_at_inf=_bool(e.get("specialAtInf", False), f"{w}.specialAtInf"),
        ))
    legs = []
    for i, l in enumerate(doc["legs"]):
        w = f"legs[{i}]"
        _check_keys(l, _LEG_KEYS, {"id", "vertex", "monodromy"}, w)
        legs.append(Leg(
            id=_str(l["id"], f"{w}.id"),
            vertex=_str(l["vertex"], f"{w}.vertex"),
            position=_int(l.get("position", i), f"{w}.position"),
            monodromy=_enum(Monodromy, l["monodromy"], f"{w}.monodromy"),
        ))
    positions = sorted(l.position for l in legs)
    if positions != list(range(len(legs))):
        raise GraphFormatError("legs", "positions must be 0..n-1")
    deg_l2 = parse_rat(doc.get("degL2", "0"), "degL2")
    return DecoratedGraph(
        tuple(vertices), tuple(edges), tuple(sorted(legs, key=lambda l: l.position)), deg_l2
    )


def graph_to_dict(graph: DecoratedGraph) -> dict:
    vertices = []
    for v in graph.vertices:
        d: dict[str, Any] = {
            "id": v.id, "level": v.level.value, "genus": v.genus,
            "deg0": format_rat(v.deg0), "degInf": format_rat(v.deg_inf), "stable": v.stable,
        }
        if v.hour is not None:
            d["hour"] = v.hour
        vertices.append(d)
    doc: dict[str, Any] = {
        "vertices": vertices,
        "edges": [
            {
                "id": e.id, "endA": e.end_a, "endB": e.end_b, "class": e.cls.value,
                "deg0": format_rat(e.deg0), "degInf": format_rat(e.deg_inf),
                "orbifoldAtInf": e.orbifold_at_inf, "specialAtInf": e.special_at_inf,
            }
            for e in graph.edges
        ],
        "legs": [
            {"id": l.id, "vertex": l.vertex, "position": l.position, "monodromy": l.monodromy.value}
            for l in graph.legs
        ],
    }
    if graph.deg_l2 != 0:
        doc["degL2"] = format_rat(graph.deg_l2)
    return doc


def loads(text: str) -> DecoratedGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError("document", f"invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return graph_from_dict(doc)


def dumps(graph: DecoratedGraph, compact: bool = False) -> str:
    if compact:
        return json.dumps(graph_to_dict(graph), separators=(",", ":"))
    return json.dumps(graph_to_dict(graph), indent=2) + "\n"
