"""JSON graph/morphism files and DOT rendering.

Graph file::

    {"name": "K2", "loops": "implicit", "vertices": ["1", "2"],
     "edges": [{"name": "1>2", "src": "1", "tgt": "2"}, ...]}

With ``"loops": "explicit"`` every distinguished loop is listed and
flagged ``"distinguished": true``.

Morphism file::

    {"domain": <graph object or path>, "codomain": <graph object or path>,
     "vertices": {"u": "x", ...}, "edges": {"e": "f", ...}}

Distinguished loops may be left out of ``edges``; they are forced.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from pathlib import Path
from typing import Any

from .core import RGraph, RGraphError, RGraphMorphism, to_dict, validate_morphism, validate_rgraph


class GraphFileError(RGraphError, ValueError):
    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


def _line_of(text: str, needle: str) -> int | None:
    m = re.search(needle, text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _check_shape(data: Any, text: str, origin: str) -> None:
    if not isinstance(data, dict):
        raise GraphFileError("top level must be an object", f"{origin}:1")
    for key in ("vertices", "edges"):
        if key in data and not isinstance(data[key], list):
            line = _line_of(text, re.escape(json.dumps(key))) or 1
            raise GraphFileError(f"{key!r} must be a list", f"{origin}:{line}")
    if "vertices" not in data:
        raise GraphFileError("missing field 'vertices'", f"{origin}:1")
    for i, item in enumerate(data.get("edges", [])):
        where = f"{origin}: edges[{i}]"
        if not isinstance(item, dict):
            raise GraphFileError("edge must be an object", where)
        name = item.get("name")
        line = _line_of(text, r'"name"\s*:\s*' + re.escape(json.dumps(name))) if isinstance(name, str) else None
        if line is not None:
            where = f"{origin}:{line}: edges[{i}]"
        for field in ("name", "src", "tgt"):
            if field not in item:
                raise GraphFileError(f"missing field {field!r}", where)
            if not isinstance(item[field], str):
                raise GraphFileError(f"field {field!r} must be a string", where)


def parse_graph_text(text: str, origin: str = "<string>") -> RGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFileError(exc.msg, f"{origin}:{exc.lineno}:{exc.colno}") from exc
    _check_shape(data, text, origin)
    return validate_rgraph(data)


def parse_graph_file(path: str | os.PathLike) -> RGraph:
    path = Path(path)
    return parse_graph_text(path.read_text(encoding="utf-8"), str(path))


def graph_text(g: RGraph) -> str:
    return json.dumps(to_dict(g), indent=2) + "\n"


def write_text_atomic(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_graph_file(g: RGraph, path: str | os.PathLike) -> None:
    write_text_atomic(path, graph_text(g))


def _graph_ref(ref: Any, base: Path) -> RGraph:
    if isinstance(ref, dict):
        return validate_rgraph(ref)
    if isinstance(ref, str):
        return parse_graph_file(base / ref)
    raise GraphFileError("graph reference must be an object or a path")


def parse_morphism_file(path: str | os.PathLike) -> RGraphMorphism:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFileError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from exc
    if not isinstance(data, dict):
        raise GraphFileError("top level must be an object", f"{path}:1")
    for key in ("domain", "codomain", "vertices"):
        if key not in data:
            raise GraphFileError(f"missing field {key!r}", f"{path}:1")
    dom = _graph_ref(data["domain"], path.parent)
    cod = _graph_ref(data["codomain"], path.parent)
    vertices = dict(data["vertices"])
    edges = dict(data.get("edges", {}))
    for v in dom.vertices:
        loop = dom.loop_of[v]
        if loop not in edges and vertices.get(v) in cod.loop_of:
            edges[loop] = cod.loop_of[vertices[v]]
    return validate_morphism({"vertices": vertices, "edges": edges}, dom, cod)


def morphism_to_dict(m: RGraphMorphism) -> dict[str, Any]:
    return {
        "domain": to_dict(m.domain),
        "codomain": to_dict(m.codomain),
        "vertices": m.vertex_map,
        "edges": m.edge_map,
    }


def _q(s: str) -> str:
    return json.dumps(s)


def export_dot(g: RGraph, label_edges: bool = True) -> str:
    """DOT text: one node per vertex, one arc per edge, distinguished loops dashed."""
    lines = [f"digraph {_q(g.name)} {{"]
    for v in g.vertices:
        lines.append(f"  {_q(v)};")
    for e, dist in zip(g.edges, g.distinguished):
        attrs = []
        if label_edges:
            attrs.append(f"label={_q(e.id)}")
        if dist:
            attrs.append("style=dashed")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {_q(e.src)} -> {_q(e.tgt)}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"
