"""JSON graph files and small parsing helpers shared by the CLI."""

from __future__ import annotations

import json
from pathlib import Path

from locert.graph import CertificateAssignment, Graph, IdentifierAssignment

_JSON_SAFE = (str, int, float, bool, type(None), list, dict)


def graph_to_json(G: Graph, ids: IdentifierAssignment | None = None) -> dict:
    out = {"n": G.n, "edges": [list(e) for e in G.edge_list()]}
    if G.labels is not None:
        out["labels"] = list(G.labels)
    if ids is not None:
        out["ids"] = list(ids.ids)
    family = G.meta.get("family")
    if family:
        out["family"] = {k: v for k, v in family.items() if isinstance(v, _JSON_SAFE)}
    return out


def graph_from_json(data: dict):
    """Inverse of :func:`graph_to_json`; returns ``(graph, ids or None)``."""
    try:
        n = int(data["n"])
        edges = [tuple(e) for e in data["edges"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"graph JSON needs 'n' and 'edges': {exc}") from None
    meta = {"family": data["family"]} if "family" in data else {}
    G = Graph.from_edges(n, edges, data.get("labels"), meta)
    ids = IdentifierAssignment(tuple(data["ids"])) if data.get("ids") is not None else None
    if ids is not None and len(ids) != n:
        raise ValueError("ids must cover every vertex")
    return G, ids


def dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_graph(path, G: Graph, ids=None):
    Path(path).write_text(dumps(graph_to_json(G, ids)))


def read_graph(path):
    return graph_from_json(json.loads(Path(path).read_text()))


def parse_params(text: str | None) -> dict:
    """``"k=3,t=4"`` -> ``{"k": "3", "t": "4"}``; later keys win."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ValueError(f"parameter {item!r} is not of the form key=value")
        key, value = item.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def parse_symbols(text: str):
    """Comma-separated symbols, or a path to a JSON list / certificate object."""
    p = Path(text)
    if p.exists():
        data = json.loads(p.read_text())
        if isinstance(data, dict):
            data = data.get("symbols", data.get("assignment"))
        return tuple(int(x) for x in data)
    return tuple(int(x) for x in text.split(",") if x.strip())


def assignment_to_json(c: CertificateAssignment) -> dict:
    return {"alphabet_size": c.alphabet_size, "symbols": list(c.symbols)}
