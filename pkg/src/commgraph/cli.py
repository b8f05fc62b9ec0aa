"""Command-line interface.

Exit codes: 0 success, 1 rejected/degenerate input, 2 internal error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .centrality import all_centralities, centrality_table_csv
from .community import girvan_newman, gn_trace_to_csv, louvain, partition_to_csv
from .errors import CommGraphError
from .ingest import edges_to_csv, load_dataset
from .report import EXPORT_FORMATS, export_graph, report_to_json, run_pipeline
from .synth import GENERATOR_KINDS, GeneratorSpec


def _add_input_args(parser):
    parser.add_argument("--edges", required=True, help="edge CSV (source,target[,weight])")
    parser.add_argument("--nodes", help="node CSV (label[,kind][,location][,score])")
    parser.add_argument("--aliases", help="alias CSV (variant,canonical)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="commgraph", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="run the full analysis pipeline")
    _add_input_args(analyze)
    analyze.add_argument("--weighted", action="store_true", help="let community detection use collapsed edge weights")
    analyze.add_argument("--validate-gn", action="store_true", help="also run divisive Girvan-Newman validation")
    analyze.add_argument("--spearman", action="store_true", help="rank-based correlation instead of Pearson")
    analyze.add_argument("--out", help="output directory (report prints to stdout when omitted)")
    analyze.add_argument("--export", default="", help="comma-separated graph formats: gexf,dot,json")
    analyze.add_argument("--top-k", type=int, default=5)
    analyze.add_argument("--damping", type=float, default=0.85)
    analyze.add_argument("--seed", type=int, help="recorded in report metadata")

    synth = sub.add_parser("synth", help="emit a synthetic benchmark graph")
    synth.add_argument("--kind", required=True, choices=GENERATOR_KINDS)
    synth.add_argument("--cliques", type=int, help="ring_of_cliques: number of cliques")
    synth.add_argument("--clique-size", type=int, help="ring_of_cliques: nodes per clique")
    synth.add_argument("--blocks", type=int, help="planted_partition: number of blocks")
    synth.add_argument("--block-size", type=int, help="planted_partition: nodes per block")
    synth.add_argument("--p-in", type=float, help="planted_partition: intra-block edge probability")
    synth.add_argument("--p-out", type=float, help="planted_partition: inter-block edge probability")
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--out", default=".", help="directory for edges.csv and partition.csv")

    export = sub.add_parser("export", help="write the graph in an exchange format")
    _add_input_args(export)
    export.add_argument("--format", required=True, choices=EXPORT_FORMATS)
    export.add_argument("--out", help="output file (stdout when omitted)")
    export.add_argument("--with-analytics", action="store_true", help="embed communities and centralities")
    export.add_argument("--weighted", action="store_true")

    centrality = sub.add_parser("centrality", help="per-node centrality CSV")
    _add_input_args(centrality)
    centrality.add_argument("--damping", type=float, default=0.85)
    centrality.add_argument("--out", help="output file (stdout when omitted)")

    communities = sub.add_parser("communities", help="community assignment CSV")
    _add_input_args(communities)
    communities.add_argument("--weighted", action="store_true")
    communities.add_argument("--validate-gn", action="store_true")
    communities.add_argument("--out", help="partition CSV file (stdout when omitted)")
    communities.add_argument("--gn-out", help="Girvan-Newman trace CSV file")

    return parser


def _write_or_print(text: str, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _require(args, names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise CommGraphError(f"--kind {args.kind} requires --{' --'.join(missing)}")


def _cmd_analyze(args) -> None:
    exports = [f for f in args.export.split(",") if f]
    report = run_pipeline(
        args.edges,
        args.nodes,
        args.aliases,
        weighted=args.weighted,
        validate_gn=args.validate_gn,
        spearman=args.spearman,
        top_k=args.top_k,
        damping=args.damping,
        seed=args.seed,
        out_dir=args.out,
        exports=exports,
    )
    if args.out is None:
        sys.stdout.write(report_to_json(report))


def _cmd_synth(args) -> None:
    if args.kind == "ring_of_cliques":
        _require(args, ["cliques", "clique-size"])
        params = {"cliques": args.cliques, "clique_size": args.clique_size}
    else:
        _require(args, ["blocks", "block-size", "p-in", "p-out"])
        params = {
            "blocks": args.blocks,
            "block_size": args.block_size,
            "p_in": args.p_in,
            "p_out": args.p_out,
        }
    g, truth = GeneratorSpec(args.kind, params, args.seed).generate()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "edges.csv").write_text(edges_to_csv(g), encoding="utf-8")
    (out / "partition.csv").write_text(partition_to_csv(g.labels, truth), encoding="utf-8")


def _cmd_export(args) -> None:
    g, _ = load_dataset(args.edges, args.nodes, args.aliases)
    if not args.weighted:
        g = g.unweighted()
    partition = scores = None
    if args.with_analytics:
        partition = louvain(g).final_partition
        scores = list(all_centralities(g.unweighted()).values())
    _write_or_print(export_graph(g, partition, scores, args.format), args.out)


def _cmd_centrality(args) -> None:
    g, _ = load_dataset(args.edges, args.nodes, args.aliases)
    g = g.unweighted()
    _write_or_print(centrality_table_csv(g, all_centralities(g, damping=args.damping)), args.out)


def _cmd_communities(args) -> None:
    g, _ = load_dataset(args.edges, args.nodes, args.aliases)
    if not args.weighted:
        g = g.unweighted()
    dendrogram = louvain(g)
    _write_or_print(partition_to_csv(g.labels, dendrogram.final_partition), args.out)
    if args.validate_gn:
        trace = girvan_newman(g)
        if args.gn_out is None:
            sys.stdout.write(gn_trace_to_csv(g.labels, trace))
        else:
            Path(args.gn_out).write_text(gn_trace_to_csv(g.labels, trace), encoding="utf-8")


_COMMANDS = {
    "analyze": _cmd_analyze,
    "synth": _cmd_synth,
    "export": _cmd_export,
    "centrality": _cmd_centrality,
    "communities": _cmd_communities,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _COMMANDS[args.command](args)
    except (CommGraphError, OSError, ValueError) as exc:
        print(f"commgraph: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"commgraph: internal error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
