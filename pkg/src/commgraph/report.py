"""Analysis pipeline: ingest, metrics, centralities, communities, exports.

The report is a pure function of the input bytes and flags. Serialization is
fully deterministic (sorted keys, no timestamps), so identical runs produce
byte-identical JSON; the input digest ties a report to its source files.
"""

from __future__ import annotations

import hashlib
import json
import logging
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .centrality import MEASURES, CentralityVector, all_centralities, centrality_table_csv, rank_top_k
from .community import GNTrace, girvan_newman, gn_trace_to_csv, louvain, partition_to_csv
from .graph import Graph, NodeRecord, Partition, build_graph
from .ingest import CleaningLog, load_dataset
from .metrics import MetricsReport, global_metrics

logger = logging.getLogger(__name__)

EXPORT_FORMATS = ("gexf", "dot", "json")

GEXF_NS = "http://www.gexf.net/1.2draft"


# ------------------------------------------------------------ correlation


def _pearson(x, y) -> float | None:
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    dx = [a - mx for a in x]
    dy = [b - my for b in y]
    vx = sum(a * a for a in dx)
    vy = sum(b * b for b in dy)
    if vx == 0 or vy == 0:
        return None
    return sum(a * b for a, b in zip(dx, dy)) / (vx * vy) ** 0.5


def _ranks(values) -> list[float]:
    """Average ranks (1-based); ties share the mean of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def pearson_correlation_matrix(vectors: list[CentralityVector], method: str = "pearson"):
    """Symmetric correlation matrix; zero-variance pairs yield None entries.

    `method` is `pearson` or `spearman` (Pearson over average ranks).
    """
    if len({len(v.scores) for v in vectors}) > 1:
        raise ValueError("centrality vectors must have equal length")
    if vectors and len(vectors[0].scores) < 2:
        raise ValueError("correlation needs at least 2 nodes")
    if method not in ("pearson", "spearman"):
        raise ValueError(f"unknown correlation method {method!r}")
    data = [list(v.scores) for v in vectors]
    if method == "spearman":
        data = [_ranks(col) for col in data]
    k = len(data)
    matrix: list[list[float | None]] = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            r = _pearson(data[i], data[j])
            if r is None:
                logger.warning(
                    "zero variance in %s/%s correlation, reporting null",
                    vectors[i].measure,
                    vectors[j].measure,
                )
            matrix[i][j] = r
            matrix[j][i] = r
    return matrix


# ---------------------------------------------------------------- exports


def _node_rows(g: Graph, partition: Partition | None, scores):
    canon = partition.canonical() if partition is not None else None
    for v in range(g.node_count):
        rec = g.records[v]
        row = {"label": rec.label, "kind": rec.kind, "location": rec.location, "score": rec.external_score}
        if canon is not None:
            row["community"] = canon.assignment[v]
        if scores:
            for vec in scores:
                row[vec.measure] = vec.scores[v]
        yield v, row


def export_gexf(g: Graph, partition: Partition | None = None, scores=None) -> str:
    root = ET.Element("gexf", {"xmlns": GEXF_NS, "version": "1.2"})
    graph_el = ET.SubElement(root, "graph", {"mode": "static", "defaultedgetype": "undirected"})
    attrs = ["kind", "location"]
    types = {"kind": "string", "location": "string", "community": "long"}
    if partition is not None:
        attrs.append("community")
    if scores:
        for vec in scores:
            attrs.append(vec.measure)
            types[vec.measure] = "double"
    attr_el = ET.SubElement(graph_el, "attributes", {"class": "node"})
    ids = {}
    for i, name in enumerate(attrs):
        ids[name] = str(i)
        ET.SubElement(attr_el, "attribute", {"id": str(i), "title": name, "type": types[name]})
    nodes_el = ET.SubElement(graph_el, "nodes")
    for v, row in _node_rows(g, partition, scores):
        node_el = ET.SubElement(nodes_el, "node", {"id": str(v), "label": row["label"]})
        values_el = ET.SubElement(node_el, "attvalues")
        for name in attrs:
            value = row.get(name)
            if value is None:
                continue
            if isinstance(value, float):
                value = repr(value)
            ET.SubElement(values_el, "attvalue", {"for": ids[name], "value": str(value)})
    edges_el = ET.SubElement(graph_el, "edges")
    for i, (u, v, w) in enumerate(g.edges()):
        ET.SubElement(
            edges_el,
            "edge",
            {"id": str(i), "source": str(u), "target": str(v), "weight": format(w, "g")},
        )
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def export_dot(g: Graph, partition: Partition | None = None, scores=None) -> str:
    canon = partition.canonical() if partition is not None else None

    def quote(s: str) -> str:
        return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'

    lines = ["graph collaboration {"]
    if canon is not None:
        lines.append("  node [style=filled, colorscheme=set312];")
    for v in range(g.node_count):
        attrs = []
        if canon is not None:
            attrs.append(f"fillcolor={canon.assignment[v] % 12 + 1}")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {quote(g.labels[v])}{suffix};")
    for u, v, w in g.edges():
        weight = f" [weight={format(w, 'g')}]" if w != 1.0 else ""
        lines.append(f"  {quote(g.labels[u])} -- {quote(g.labels[v])}{weight};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_graph_json(g: Graph, partition: Partition | None = None, scores=None) -> str:
    nodes = [row for _, row in _node_rows(g, partition, scores)]
    edges = [
        {"source": g.labels[u], "target": g.labels[v], "weight": w} for u, v, w in g.edges()
    ]
    return json.dumps({"nodes": nodes, "edges": edges}, indent=2, sort_keys=True, allow_nan=False) + "\n"


def import_graph_json(text: str) -> Graph:
    """Rebuild a Graph from `export_graph_json` output (analytics fields ignored)."""
    payload = json.loads(text)
    records = [
        NodeRecord(
            label=n["label"],
            kind=n.get("kind", "other"),
            location=n.get("location"),
            external_score=n.get("score"),
        )
        for n in payload["nodes"]
    ]
    edges = [(e["source"], e["target"], e["weight"]) for e in payload["edges"]]
    g, _ = build_graph(records, edges)
    return g


def export_graph(g: Graph, partition: Partition | None = None, scores=None, fmt: str = "gexf") -> str:
    if fmt == "gexf":
        return export_gexf(g, partition, scores)
    if fmt == "dot":
        return export_dot(g, partition, scores)
    if fmt == "json":
        return export_graph_json(g, partition, scores)
    raise ValueError(f"unknown export format {fmt!r}")


# --------------------------------------------------------------- pipeline


@dataclass(frozen=True)
class AnalysisReport:
    graph: Graph
    metrics: MetricsReport
    vectors: dict[str, CentralityVector]
    top_k: dict[str, list[tuple[str, float]]]
    partition: Partition
    louvain_q: float
    q_per_level: tuple[float, ...]
    gn_trace: GNTrace | None
    correlation: list[list[float | None]]
    correlation_method: str
    cleaning: CleaningLog
    tool_version: str
    input_digest: str
    flags: dict

    @property
    def gn_best_q(self) -> float | None:
        return self.gn_trace.best_q if self.gn_trace is not None else None


def _digest(paths) -> str:
    outer = hashlib.sha256()
    for p in paths:
        if p is None:
            outer.update(b"\x00absent\x00")
        else:
            outer.update(hashlib.sha256(Path(p).read_bytes()).digest())
    return outer.hexdigest()


def run_pipeline(
    edge_path,
    node_path=None,
    alias_path=None,
    *,
    weighted: bool = False,
    validate_gn: bool = False,
    spearman: bool = False,
    top_k: int = 5,
    damping: float = 0.85,
    seed: int | None = None,
    out_dir=None,
    exports=(),
) -> AnalysisReport:
    """Ingest, analyze, and (optionally) write the full output bundle.

    Metrics and centralities always use the unweighted skeleton with hop
    distances; `weighted` opts community detection into the collapsed
    collaboration weights. Every artifact is computed before the first file
    is written, so failures leave no partial outputs.
    """
    for fmt in exports:
        if fmt not in EXPORT_FORMATS:
            raise ValueError(f"unknown export format {fmt!r}")

    loaded, cleaning = load_dataset(edge_path, node_path, alias_path)
    skeleton = loaded.unweighted()
    community_graph = loaded if weighted else skeleton

    metrics = global_metrics(skeleton)
    vectors = all_centralities(skeleton, damping=damping)
    dendrogram = louvain(community_graph)
    gn_trace = girvan_newman(community_graph) if validate_gn else None
    method = "spearman" if spearman else "pearson"
    correlation = pearson_correlation_matrix([vectors[m] for m in MEASURES], method=method)
    rankings = {m: rank_top_k(vectors[m], top_k, loaded.labels) for m in MEASURES}

    report = AnalysisReport(
        graph=loaded,
        metrics=metrics,
        vectors=vectors,
        top_k=rankings,
        partition=dendrogram.final_partition,
        louvain_q=dendrogram.final_q,
        q_per_level=dendrogram.q_per_level,
        gn_trace=gn_trace,
        correlation=correlation,
        correlation_method=method,
        cleaning=cleaning,
        tool_version=__version__,
        input_digest=_digest([edge_path, node_path, alias_path]),
        flags={
            "weighted": weighted,
            "validate_gn": validate_gn,
            "spearman": spearman,
            "top_k": top_k,
            "damping": damping,
            "seed": seed,
        },
    )

    if out_dir is not None:
        write_outputs(report, out_dir, exports)
    return report


def report_to_json(report: AnalysisReport) -> str:
    g = report.graph
    labels = g.labels
    order = sorted(range(g.node_count), key=lambda v: (labels[v].casefold(), labels[v]))
    table = [
        {"label": labels[v], **{m: report.vectors[m].scores[v] for m in MEASURES}}
        for v in order
    ]
    canon = report.partition.canonical()
    payload = {
        "metrics": {
            "node_count": report.metrics.node_count,
            "edge_count": report.metrics.edge_count,
            "average_degree": report.metrics.average_degree,
            "density": report.metrics.density,
            "average_path_length": report.metrics.average_path_length,
            "diameter": report.metrics.diameter,
            "average_clustering": report.metrics.average_clustering,
            "is_connected": report.metrics.is_connected,
            "component_count": report.metrics.component_count,
        },
        "centrality": {
            "table": table,
            "top_k": {m: [[lab, s] for lab, s in report.top_k[m]] for m in MEASURES},
        },
        "communities": {
            "count": canon.community_count,
            "louvain_q": report.louvain_q,
            "q_per_level": list(report.q_per_level),
            "gn_best_q": report.gn_best_q,
            "assignment": {labels[v]: canon.assignment[v] for v in range(g.node_count)},
        },
        "correlation": {
            "measures": list(MEASURES),
            "method": report.correlation_method,
            "matrix": report.correlation,
        },
        "cleaning": {
            "duplicates_collapsed": report.cleaning.duplicates_collapsed,
            "self_loops_dropped": report.cleaning.self_loops_dropped,
            "labels_merged": [list(pair) for pair in report.cleaning.labels_merged],
            "rows_rejected": [[ln, reason] for ln, reason in report.cleaning.rows_rejected],
            "warnings": report.cleaning.warnings,
        },
        "meta": {
            "tool_version": report.tool_version,
            "input_digest": report.input_digest,
            "flags": report.flags,
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_outputs(report: AnalysisReport, out_dir, exports=()) -> list[Path]:
    """Write the report bundle; returns the created paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    g = report.graph
    written = []

    def emit(name: str, text: str):
        path = out / name
        path.write_text(text, encoding="utf-8")
        written.append(path)

    emit("report.json", report_to_json(report))
    emit("centrality.csv", centrality_table_csv(g, report.vectors))
    emit("communities.csv", partition_to_csv(g.labels, report.partition))
    if report.gn_trace is not None:
        emit("gn_trace.csv", gn_trace_to_csv(g.labels, report.gn_trace))
    score_list = [report.vectors[m] for m in MEASURES]
    for fmt in exports:
        emit(f"graph.{fmt}", export_graph(g, report.partition, score_list, fmt))
    return written
