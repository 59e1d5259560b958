"""
Network ingestion and serialization.

Formats:
  edge-list     CSV with header ``source,target,weight``
  adjacency     square CSV table, labels in the first row and first column
                (row = source, column = target), as exported from ICIO tables
  network-json  {"nodes": [...], "weights": [[...]], "kind": ..., "sentinel": ...}
"""
import csv
import io
import json
import math
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ValidationError

from dowkernet.errors import (
    DomainError,
    DuplicateEdgeError,
    LabelError,
    ParseError,
    ShapeError,
)
from dowkernet.logger import dowker_logger
from dowkernet.network import DirectedNetwork, EffectiveDistanceNetwork, NetworkKind

FORMATS = ("edge-list", "adjacency", "network-json")


class NetworkDocument(BaseModel):
    """JSON shape of a serialized network."""
    nodes: List[str]
    weights: List[List[float]]
    kind: Literal["flow", "dissimilarity"] = "flow"
    sentinel: Optional[float] = None


def _parse_weight(raw: str, line: int) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(f"weight '{raw}' is not a number", line=line) from None
    if math.isnan(value) or math.isinf(value):
        raise ParseError(f"weight '{raw}' is not finite", line=line)
    return value


def _rows(text: str) -> List[Tuple[int, List[str]]]:
    """Non-blank CSV rows with their 1-based line numbers (LF or CRLF).

    Lines starting with ``#`` are metadata and skipped.
    """
    text = text.lstrip("\ufeff")
    reader = csv.reader(io.StringIO(text, newline=""))
    rows = []
    for row in reader:
        if not row or all(not cell.strip() for cell in row):
            continue
        if row[0].lstrip().startswith("#"):
            continue
        rows.append((reader.line_num, [cell.strip() for cell in row]))
    return rows


# ---------------------------------------------------------------------------
# Edge lists
# ---------------------------------------------------------------------------

def parse_edge_list(text: str) -> DirectedNetwork:
    """Parse ``source,target,weight`` rows into a flow network.

    Nodes appear in first-appearance order; pairs without a row get weight 0.
    """
    rows = _rows(text)
    if not rows:
        raise ParseError("empty edge list: expected header 'source,target,weight'", line=1)
    header_line, header = rows[0]
    if [h.lower() for h in header] != ["source", "target", "weight"]:
        raise ParseError(
            f"expected header 'source,target,weight', got '{','.join(header)}'",
            line=header_line,
        )

    order: Dict[str, int] = {}
    edges: Dict[Tuple[str, str], float] = {}
    for line, row in rows[1:]:
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", line=line)
        source, target, raw = row
        if not source or not target:
            raise ParseError("empty node label", line=line)
        weight = _parse_weight(raw, line)
        if weight < 0:
            raise DomainError(f"line {line}: negative weight {raw}")
        if source == target:
            if weight > 0:
                raise DomainError(f"line {line}: self-loop on '{source}'")
        if (source, target) in edges:
            raise DuplicateEdgeError(f"duplicate edge {source} -> {target}", line=line)
        edges[(source, target)] = weight
        for label in (source, target):
            order.setdefault(label, len(order))

    nodes = tuple(order)
    weights = np.zeros((len(nodes), len(nodes)))
    for (source, target), weight in edges.items():
        if source != target:
            weights[order[source], order[target]] = weight
    return DirectedNetwork(nodes, weights, NetworkKind.FLOW)


def write_edge_list(g: DirectedNetwork) -> str:
    """Serialize the real edges of ``g`` as an edge list (weights in repr form)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["source", "target", "weight"])
    mask = g.real_edges()
    for i, source in enumerate(g.nodes):
        for j, target in enumerate(g.nodes):
            if mask[i, j]:
                writer.writerow([source, target, repr(float(g.weights[i, j]))])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Adjacency tables
# ---------------------------------------------------------------------------

def parse_adjacency_csv(text: str) -> DirectedNetwork:
    """Parse a labeled square table; nonzero diagonal entries are zeroed with a warning."""
    rows = _rows(text)
    if not rows:
        raise ShapeError("empty adjacency table", line=1)
    header_line, header = rows[0]
    col_labels = header[1:]
    body = rows[1:]
    if len(body) != len(col_labels):
        raise ShapeError(
            f"table is not square: {len(body)} rows, {len(col_labels)} columns",
            line=header_line,
        )

    row_labels = []
    weights = np.zeros((len(body), len(body)))
    for i, (line, row) in enumerate(body):
        if len(row) != len(col_labels) + 1:
            raise ShapeError(f"expected {len(col_labels) + 1} fields, got {len(row)}", line=line)
        row_labels.append(row[0])
        for j, raw in enumerate(row[1:]):
            weight = _parse_weight(raw, line)
            if weight < 0:
                raise DomainError(f"line {line}: negative weight {raw}")
            weights[i, j] = weight

    if row_labels != col_labels:
        raise LabelError("row labels do not match column labels", line=header_line)

    diagonal = np.diag(weights)
    if (diagonal != 0).any():
        zeroed = [row_labels[k] for k in np.flatnonzero(diagonal)]
        dowker_logger.log_warning(f"adjacency diagonal forced to 0 for: {', '.join(zeroed)}")
        np.fill_diagonal(weights, 0.0)
    return DirectedNetwork(tuple(row_labels), weights, NetworkKind.FLOW)


def write_adjacency_csv(g: DirectedNetwork) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + list(g.nodes))
    for i, label in enumerate(g.nodes):
        writer.writerow([label] + [repr(float(v)) for v in g.weights[i]])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def network_to_document(g: DirectedNetwork) -> NetworkDocument:
    return NetworkDocument(
        nodes=list(g.nodes),
        weights=[[float(v) for v in row] for row in g.weights],
        kind=g.kind.value,
        sentinel=g.sentinel,
    )


def network_from_document(doc: NetworkDocument) -> DirectedNetwork:
    n = len(doc.nodes)
    weights = np.array(doc.weights, dtype=float).reshape(n, n) if n else np.zeros((0, 0))
    if doc.kind == "dissimilarity" and doc.sentinel is not None:
        return EffectiveDistanceNetwork(tuple(doc.nodes), weights, sentinel=doc.sentinel)
    return DirectedNetwork(tuple(doc.nodes), weights, NetworkKind(doc.kind), doc.sentinel)


def network_to_json(g: DirectedNetwork, config: Optional[dict] = None) -> str:
    payload = {"config": config} if config is not None else {}
    payload.update(network_to_document(g).model_dump())
    return json.dumps(payload, indent=2) + "\n"


def network_from_json(text: str) -> DirectedNetwork:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno) from None
    try:
        doc = NetworkDocument.model_validate(data)
    except ValidationError as e:
        raise ParseError(f"invalid network document: {e.errors()[0]['msg']}") from None
    if len(doc.weights) != len(doc.nodes) or any(len(r) != len(doc.nodes) for r in doc.weights):
        raise ShapeError("weights must be a square matrix matching the node list")
    return network_from_document(doc)


# ---------------------------------------------------------------------------
# Files
# ---------------------------------------------------------------------------

_PARSERS = {
    "edge-list": parse_edge_list,
    "adjacency": parse_adjacency_csv,
    "network-json": network_from_json,
}


def detect_format(path: Path) -> str:
    suffix = path.suffix.lower()
    if suffix == ".json":
        return "network-json"
    return "edge-list"


def read_network(path, fmt: Optional[str] = None) -> DirectedNetwork:
    """Read a network file; IO failures surface as ParseError."""
    path = Path(path)
    fmt = fmt or detect_format(path)
    if fmt not in _PARSERS:
        raise ParseError(f"unknown input format '{fmt}' (expected one of {', '.join(FORMATS)})")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror or e}") from None
    g = _PARSERS[fmt](text)
    dowker_logger.log_ingest(str(path), fmt, g.n, g.edge_count())
    return g
