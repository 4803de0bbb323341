# src/isl/extract/graph_reader.py
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Tuple

from ..errors import GraphError
from ..graph.graph import Edge, Graph, Multigraph
from ..utils.logger import get_logger
from .base_reader import BaseReader
from .file_detector import detect_file_type

logger = get_logger("GraphReader")

Slot = Tuple[Edge, int]


def _parse_edgelist(text: str) -> Tuple[int, List[Slot]]:
    rows = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    rows = [r for r in rows if r]
    if not rows:
        raise GraphError("edge list is empty; first line must hold d")
    try:
        d = int(rows[0])
        slots: List[Slot] = []
        for r in rows[1:]:
            parts = [int(x) for x in r.split()]
            if len(parts) not in (2, 3):
                raise GraphError(f"edge line {r!r} must be 'i j' or 'i j multiplicity'")
            slots.append(((parts[0], parts[1]), parts[2] if len(parts) == 3 else 1))
    except ValueError as exc:
        raise GraphError(f"malformed edge list: {exc}") from exc
    return d, slots


def _parse_json(text: str) -> Tuple[int, List[Slot]]:
    payload = json.loads(text)
    if not isinstance(payload, dict) or "d" not in payload or "edges" not in payload:
        raise GraphError("graph JSON needs fields 'd' and 'edges'")
    slots: List[Slot] = []
    for e in payload["edges"]:
        if len(e) not in (2, 3):
            raise GraphError(f"JSON edge {e!r} must be [i, j] or [i, j, multiplicity]")
        slots.append(((int(e[0]), int(e[1])), int(e[2]) if len(e) == 3 else 1))
    return int(payload["d"]), slots


class GraphReader(BaseReader):
    """Edge-list (`.edges`, `.txt`) and JSON graphs; a third column is a multiplicity."""

    _metadata: Dict[str, Any]

    def __init__(self) -> None:
        self._metadata = {}

    def _slots(self, path: Path) -> Tuple[int, List[Slot]]:
        try:
            kind = detect_file_type(path)
            text = path.read_text(encoding="utf-8")
            if kind == "json":
                d, slots = _parse_json(text)
            elif kind == "edgelist":
                d, slots = _parse_edgelist(text)
            else:
                raise GraphError(f"{path.suffix} is not a graph format")
        except Exception as e:
            self._metadata = {"path": str(path), "status": "error", "error": str(e)}
            logger.error("Failed to load graph %s: %s", path, e)
            raise
        self._metadata = {
            "path": str(path),
            "status": "success",
            "type": kind,
            "d": d,
            "slots": len(slots),
        }
        return d, slots

    def read(self, path: Path) -> Graph:
        d, slots = self._slots(path)
        if any(m != 1 for _, m in slots):
            raise GraphError(f"{path} holds multiplicities; use read_multigraph")
        g = Graph(d, tuple(e for e, _ in slots))
        logger.info("Loaded graph: %s (d=%d, edges=%d)", path, g.d, g.n_edges)
        return g

    def read_multigraph(self, path: Path) -> Multigraph:
        d, slots = self._slots(path)
        for (i, j), m in slots:
            if i == j or not (1 <= i <= d and 1 <= j <= d):
                raise GraphError(f"edge ({i},{j}) outside vertex range 1..{d} or a self-loop")
            if m < 0:
                raise GraphError(f"negative multiplicity on ({i},{j})")
        mg = Multigraph.from_slots(d, slots)
        logger.info(
            "Loaded multigraph: %s (d=%d, multiplicity=%d)", path, mg.d, mg.total_multiplicity
        )
        return mg

    def metadata(self) -> Dict[str, Any]:
        return self._metadata
