"""CSV ingestion: parse, validate, and clean collaboration data into a Graph.

File formats (all comma-separated, RFC-4180 quoting, UTF-8):
    edge CSV   header `source,target` or `source,target,weight`
    node CSV   header with `label` plus any of `kind`, `location`, `score`
    alias CSV  header `variant,canonical`

Rows that cannot be interpreted are rejected individually and logged, never
silently dropped; files whose header cannot be interpreted are fatal.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import IngestError
from .graph import (
    INSTITUTION_KINDS,
    BuildCounts,
    Graph,
    NodeRecord,
    build_graph,
    canonical_label,
    display_label,
)


@dataclass(frozen=True)
class RawEdgeRow:
    source_label: str
    target_label: str
    weight: float | None
    line_no: int


@dataclass
class CleaningLog:
    """Every cleaning event observed between raw bytes and the finished graph."""

    duplicates_collapsed: int = 0
    self_loops_dropped: int = 0
    labels_merged: list[tuple[str, str]] = field(default_factory=list)
    rows_rejected: list[tuple[int, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def absorb(self, counts: BuildCounts) -> None:
        self.duplicates_collapsed += counts.duplicates_collapsed
        self.self_loops_dropped += counts.self_loops_dropped


def _read_rows(path) -> list[tuple[int, list[str], str | None]]:
    """Decode a CSV file into (row_no, fields, decode_error) tuples.

    Row numbers are logical CSV rows (header = 1). On a clean UTF-8 file the
    csv module handles quoted fields including embedded newlines; if the file
    is not valid UTF-8 we fall back to per-line decoding so that only the
    offending lines are rejected.
    """
    raw = Path(path).read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        rows = []
        for i, line in enumerate(raw.splitlines(), start=1):
            try:
                decoded = line.decode("utf-8")
            except UnicodeDecodeError:
                rows.append((i, [], "invalid UTF-8"))
                continue
            if decoded.strip() == "":
                continue
            rows.append((i, next(csv.reader([decoded])), None))
        return rows
    rows = []
    for i, fields in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not fields or all(f.strip() == "" for f in fields):
            continue
        rows.append((i, fields, None))
    return rows


def parse_edge_csv(path) -> tuple[list[RawEdgeRow], CleaningLog]:
    """Read an edge list; every data row becomes a RawEdgeRow or a rejection."""
    rows = _read_rows(path)
    if not rows:
        raise IngestError(f"{path}: empty file, expected a source,target header")
    header_no, header, err = rows[0]
    if err is not None:
        raise IngestError(f"{path}: header is not valid UTF-8")
    header = [h.strip().casefold() for h in header]
    if header not in (["source", "target"], ["source", "target", "weight"]):
        raise IngestError(f"{path}: expected header source,target[,weight], got {','.join(header)!r}")
    has_weight = len(header) == 3

    log = CleaningLog()
    out: list[RawEdgeRow] = []
    for line_no, fields, err in rows[1:]:
        if err is not None:
            log.rows_rejected.append((line_no, err))
            continue
        if len(fields) != len(header):
            log.rows_rejected.append((line_no, f"expected {len(header)} fields, got {len(fields)}"))
            continue
        source = display_label(fields[0])
        target = display_label(fields[1])
        if not source:
            log.rows_rejected.append((line_no, "empty source"))
            continue
        if not target:
            log.rows_rejected.append((line_no, "empty target"))
            continue
        weight = None
        if has_weight and fields[2].strip():
            try:
                weight = float(fields[2])
            except ValueError:
                log.rows_rejected.append((line_no, f"non-numeric weight {fields[2].strip()!r}"))
                continue
            if not math.isfinite(weight) or weight <= 0:
                log.rows_rejected.append((line_no, f"weight must be positive, got {fields[2].strip()!r}"))
                continue
        out.append(RawEdgeRow(source, target, weight, line_no))
    return out, log


def parse_node_csv(path, log: CleaningLog | None = None) -> list[NodeRecord]:
    """Read node records; unknown kinds fall back to `other` with a warning."""
    rows = _read_rows(path)
    if not rows:
        raise IngestError(f"{path}: empty file, expected a label[,kind][,location][,score] header")
    _, header, err = rows[0]
    if err is not None:
        raise IngestError(f"{path}: header is not valid UTF-8")
    header = [h.strip().casefold() for h in header]
    allowed = {"label", "kind", "location", "score"}
    unknown = [h for h in header if h not in allowed]
    if unknown or "label" not in header or len(set(header)) != len(header):
        raise IngestError(f"{path}: expected header label[,kind][,location][,score], got {','.join(header)!r}")
    col = {name: header.index(name) for name in header}

    records: list[NodeRecord] = []
    seen: dict[str, int] = {}  # canonical label -> line_no
    for line_no, fields, err in rows[1:]:
        if err is not None:
            raise IngestError(f"{path}: line {line_no} is not valid UTF-8")
        if len(fields) != len(header):
            raise IngestError(f"{path}: line {line_no}: expected {len(header)} fields, got {len(fields)}")

        label = display_label(fields[col["label"]])
        if not label:
            raise IngestError(f"{path}: line {line_no}: empty label")
        key = canonical_label(label)
        if key in seen:
            raise IngestError(
                f"{path}: duplicate label {label!r} at lines {seen[key]} and {line_no}"
            )
        seen[key] = line_no

        kind = "other"
        if "kind" in col and fields[col["kind"]].strip():
            raw_kind = fields[col["kind"]].strip().casefold()
            if raw_kind in INSTITUTION_KINDS:
                kind = raw_kind
            elif log is not None:
                log.warnings.append(f"line {line_no}: unknown kind {fields[col['kind']].strip()!r} mapped to 'other'")

        location = None
        if "location" in col and fields[col["location"]].strip():
            location = display_label(fields[col["location"]])

        score = None
        if "score" in col and fields[col["score"]].strip():
            try:
                score = float(fields[col["score"]])
            except ValueError:
                raise IngestError(f"{path}: line {line_no}: non-numeric score {fields[col['score']].strip()!r}") from None
            if not math.isfinite(score) or score < 0:
                raise IngestError(f"{path}: line {line_no}: score must be non-negative")

        records.append(NodeRecord(label=label, kind=kind, location=location, external_score=score))
    return records


def parse_alias_csv(path) -> dict[str, str]:
    """Read variant -> canonical label mappings, keyed by canonical form."""
    rows = _read_rows(path)
    if not rows:
        raise IngestError(f"{path}: empty file, expected a variant,canonical header")
    _, header, err = rows[0]
    if err is not None:
        raise IngestError(f"{path}: header is not valid UTF-8")
    if [h.strip().casefold() for h in header] != ["variant", "canonical"]:
        raise IngestError(f"{path}: expected header variant,canonical")
    aliases: dict[str, str] = {}
    for line_no, fields, err in rows[1:]:
        if err is not None:
            raise IngestError(f"{path}: line {line_no} is not valid UTF-8")
        if len(fields) != 2 or not display_label(fields[0]) or not display_label(fields[1]):
            raise IngestError(f"{path}: line {line_no}: expected variant,canonical")
        key = canonical_label(fields[0])
        target = display_label(fields[1])
        if key in aliases and canonical_label(aliases[key]) != canonical_label(target):
            raise IngestError(f"{path}: line {line_no}: conflicting alias for {fields[0].strip()!r}")
        aliases[key] = target
    return aliases


def load_dataset(edge_path, node_path=None, alias_path=None) -> tuple[Graph, CleaningLog]:
    """Full ingestion: edge CSV plus optional node and alias CSVs into a Graph.

    Nodes appearing only in the edge file are synthesized with kind `other`.
    Node ids are assigned in canonical-label order, so identical input bytes
    always produce the identical graph.
    """
    edge_rows, log = parse_edge_csv(edge_path)
    records = parse_node_csv(node_path, log) if node_path is not None else []
    aliases = parse_alias_csv(alias_path) if alias_path is not None else {}

    registry: dict[str, NodeRecord] = {canonical_label(r.label): r for r in records}
    merged: set[tuple[str, str]] = set()

    def resolve(raw: str) -> str:
        name = display_label(raw)
        key = canonical_label(name)
        if key in aliases:
            target = aliases[key]
            merged.add((name, target))
            name, key = display_label(target), canonical_label(target)
        if key not in registry:
            registry[key] = NodeRecord(label=name, kind="other")
        stored = registry[key].label
        if stored != name:
            merged.add((name, stored))
        return stored

    resolved = [(resolve(r.source_label), resolve(r.target_label), r.weight) for r in edge_rows]

    ordered = sorted(registry.values(), key=lambda r: canonical_label(r.label))
    graph, counts = build_graph(ordered, resolved)
    log.absorb(counts)
    log.labels_merged = sorted(merged)
    return graph, log


def edges_to_csv(g: Graph) -> str:
    """Standard edge CSV for a graph (sorted, weight column always present)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["source", "target", "weight"])
    labels = g.labels
    for u, v, w in g.edges():
        writer.writerow([labels[u], labels[v], format(w, "g")])
    return buf.getvalue()
