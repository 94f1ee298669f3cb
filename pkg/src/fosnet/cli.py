"""Command-line pipeline: build, analyze, temporal, drill, export.

Every command writes a ``resolved_config.json`` beside its outputs with the
fully resolved parameters (output location excluded), so a run can be
reproduced bit-exactly into any directory. Randomness funnels through one
master seed: ``--seed``, else the FOSNET_SEED environment variable, else 42.

Exit codes: 0 success, 1 configuration error, 2 data or artifact error,
3 unknown edge in drill queries.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path

from . import exports
from .builder import BuildConfig, build_bipartite, mean_edge_weight, project
from .builder import threshold as apply_threshold
from .centrality import graph_fingerprint
from .centrality import centrality_report
from .closeread import (
    keyword_frequencies,
    load_stopwords,
    papers_for_edge,
    subfield_frequencies,
)
from .community import louvain, summarize_communities
from .corpus import Corpus, IngestConfig, load_corpus
from .errors import (
    ArtifactError,
    CapabilityError,
    ConfigError,
    ConvergenceError,
    CorpusError,
    FosnetError,
    GraphStructureError,
    UnknownEdgeError,
)
from .roles import RoleParams, learn_roles, summarize_roles
from .temporal import SplitRule, build_temporal, restrict_post_field, top_k_edges

DEFAULT_SEED = 42
ANALYSES = ("centrality", "communities", "roles")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit(2); config errors are exit 1
        raise ConfigError(message)


def _parse_window(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return (int(lo), int(hi))
    except ValueError as exc:
        raise ConfigError(f"window must look like LO:HI, got {text!r}") from exc


def _parse_threshold(text: str) -> tuple[str, float | None]:
    if text == "none" or text == "mean":
        return text, None
    if text.startswith("fixed:"):
        try:
            return "fixed", float(text.split(":", 1)[1])
        except ValueError as exc:
            raise ConfigError(f"bad fixed threshold {text!r}") from exc
    raise ConfigError(f"threshold must be none, mean, or fixed:VALUE, got {text!r}")


def _parse_k_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return (int(lo), int(hi))
    except ValueError as exc:
        raise ConfigError(f"k range must look like MIN:MAX, got {text!r}") from exc


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("FOSNET_SEED")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"FOSNET_SEED must be an integer, got {env!r}") from exc
    return DEFAULT_SEED


def _load_file_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must contain a JSON object")
    return raw


def _pick(args_value, file_config: dict, key: str, default):
    """Explicit flag > config file > built-in default."""
    if args_value is not None:
        return args_value
    if key in file_config:
        return file_config[key]
    return default


def _write_resolved_config(out_dir: Path, payload: dict) -> None:
    exports.write_json(out_dir / "resolved_config.json", payload)


def _corpus_names(corpus: Corpus) -> dict[str, str]:
    return {fid: ref.name for fid, ref in corpus.fields.items()}


def _load_corpus_for(args_input: str | None, build_dir: Path) -> tuple[Corpus, dict]:
    config_path = build_dir / "resolved_config.json"
    if not config_path.exists():
        raise ArtifactError(f"missing {config_path}")
    with open(config_path, encoding="utf-8") as fh:
        build_config = json.load(fh)
    input_path = args_input or build_config.get("input")
    if not input_path:
        raise ConfigError("corpus path unknown; pass --input")
    ingest = IngestConfig(
        strict=bool(build_config.get("strict", False)),
        level=build_config.get("level"),
        window=tuple(build_config["window"]) if build_config.get("window") else None,
    )
    return load_corpus(input_path, ingest), build_config


def cmd_build(args: argparse.Namespace) -> int:
    file_config = _load_file_config(args.config)
    input_path = _pick(args.input, file_config, "input", None)
    if not input_path:
        raise ConfigError("--input is required")
    level = _pick(args.level, file_config, "level", None)
    window = _pick(
        _parse_window(args.window) if args.window else None, file_config, "window", None
    )
    strict = bool(_pick(args.strict or None, file_config, "strict", False))
    threshold_kind, threshold_value = _parse_threshold(
        _pick(args.threshold, file_config, "threshold", "none")
    )
    build_config = BuildConfig(
        focal_restrict=bool(_pick(args.focal_restrict or None, file_config, "focal_restrict", False)),
        focal_mode=_pick(args.focal_mode, file_config, "focal_mode", "either"),
        threshold_kind=threshold_kind,
        threshold_value=threshold_value,
        drop_isolates=not args.keep_isolates,
        retain_witnesses=not args.no_witnesses,
        workers=args.workers,
    )
    ingest = IngestConfig(strict=strict, level=level, window=tuple(window) if window else None)
    corpus = load_corpus(input_path, ingest)

    projected = project(build_bipartite(corpus), corpus, build_config)
    mean_exact = None
    if projected.edges:
        mean_exact = mean_edge_weight(projected)
    graph = projected
    if build_config.threshold_kind != "none":
        graph = apply_threshold(projected, build_config)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    names = _corpus_names(corpus)
    exports.write_nodes_csv(graph, out_dir / "nodes.csv", names)
    exports.write_edges_csv(graph, out_dir / "edges.csv")
    if build_config.retain_witnesses:
        exports.write_witnesses_jsonl(graph, out_dir / "witnesses.jsonl")
    exports.write_graphml(graph, out_dir / "graph.graphml", names)
    exports.write_dot(graph, out_dir / "graph.dot", names)
    metadata = {
        "kind": "static",
        "graph_meta": graph.meta.to_dict(),
        "nodes": graph.n,
        "edges": graph.m,
        "pre_threshold_nodes": projected.n,
        "pre_threshold_edges": projected.m,
        "mean_edge_weight": float(mean_exact) if mean_exact is not None else None,
        "mean_edge_weight_exact": str(mean_exact) if mean_exact is not None else None,
        "corpus_stats": asdict(corpus.stats),
        "corpus_counts": {
            "papers": len(corpus.papers),
            "authors": len(corpus.authors),
            "fields": len(corpus.fields),
        },
    }
    exports.write_json(out_dir / "metadata.json", metadata)
    _write_resolved_config(
        out_dir,
        {
            "command": "build",
            "input": str(input_path),
            "level": level,
            "window": list(window) if window else None,
            "strict": strict,
            "focal_restrict": build_config.focal_restrict,
            "focal_mode": build_config.focal_mode,
            "threshold": args.threshold or file_config.get("threshold", "none"),
            "drop_isolates": build_config.drop_isolates,
            "retain_witnesses": build_config.retain_witnesses,
            "workers": build_config.workers,
        },
    )
    print(f"built {graph.n} nodes, {graph.m} edges -> {out_dir}")
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    build_dir = Path(args.build)
    graph, names = exports.load_fos_artifacts(build_dir)
    corpus, build_config = _load_corpus_for(args.input, build_dir)
    seed = _resolve_seed(args.seed)
    analyses = tuple(a.strip() for a in args.analysis.split(",") if a.strip())
    for a in analyses:
        if a not in ANALYSES:
            raise ConfigError(f"unknown analysis {a!r}; choose from {ANALYSES}")
    simple = graph.simple()

    out_dir = Path(args.out)
    metadata: dict = {
        "kind": "analysis",
        "seed": seed,
        "analyses": sorted(analyses),
        "graph_id": graph_fingerprint(simple),
    }

    # compute every requested analysis before writing anything
    report = None
    if "centrality" in analyses or "roles" in analyses:
        report = centrality_report(simple, workers=args.workers)
        metadata["centrality_conventions"] = dict(report.params)

    assignment = summary = None
    if "communities" in analyses:
        assignment = louvain(
            simple,
            resolution=args.resolution,
            seed=seed,
            min_community_size=args.min_community_size,
        )
        summary = summarize_communities(
            assignment, simple, corpus, discipline_cutoff=args.discipline_cutoff
        )
        metadata["communities"] = {
            "modularity": assignment.modularity,
            "resolution": assignment.resolution,
            "count": len(set(assignment.membership.values())),
            "unassigned": len(assignment.unassigned),
        }

    model = role_summary = None
    if "roles" in analyses:
        k_min, k_max = _parse_k_range(args.k_range)
        params = RoleParams(
            dim=args.dim,
            walks_per_node=args.walks,
            walk_length=args.walk_length,
            window=args.window_size,
            epochs=args.epochs,
            negative_samples=args.negatives,
            stay_prob=args.stay_prob,
            max_layer=args.max_layer,
            k_min=k_min,
            k_max=k_max,
            restarts=args.restarts,
            elbow=args.elbow,
            pair_policy=args.pair_policy,
            compress=args.compress,
            seed=seed,
        )
        model = learn_roles(simple, params)
        role_summary = summarize_roles(model.labels, report, corpus)
        metadata["roles"] = {
            "k_selected": model.k_selected,
            "hyperparameters": model.params.to_dict(),
        }

    out_dir.mkdir(parents=True, exist_ok=True)
    if "centrality" in analyses:
        exports.write_centrality_csv(report, out_dir / "centrality.csv")
    if assignment is not None:
        exports.write_assignment_csv(assignment, out_dir / "assignment.csv")
        exports.write_json(out_dir / "communities.json",
                           exports.community_summary_payload(summary, assignment))
        (out_dir / "communities.txt").write_text(
            exports.format_community_table(summary), encoding="utf-8"
        )
    if model is not None:
        exports.write_embedding_csv(model, out_dir / "roles_embedding.csv")
        exports.write_role_labels_csv(model, out_dir / "roles_labels.csv")
        exports.write_silhouette_csv(model, out_dir / "silhouette.csv")
        exports.write_stability_csv(model, out_dir / "stability.csv")
        exports.write_json(out_dir / "roles.json", exports.role_summary_payload(role_summary, model))
        (out_dir / "roles.txt").write_text(exports.format_role_table(role_summary), encoding="utf-8")

    exports.write_json(out_dir / "metadata.json", metadata)
    _write_resolved_config(
        out_dir,
        {
            "command": "analyze",
            "build": str(build_dir),
            "input": args.input or build_config.get("input"),
            "analysis": ",".join(sorted(analyses)),
            "seed": seed,
            "resolution": args.resolution,
            "min_community_size": args.min_community_size,
            "discipline_cutoff": args.discipline_cutoff,
            "k_range": args.k_range,
            "dim": args.dim,
            "walks": args.walks,
            "walk_length": args.walk_length,
            "window_size": args.window_size,
            "epochs": args.epochs,
            "negatives": args.negatives,
            "stay_prob": args.stay_prob,
            "max_layer": args.max_layer,
            "restarts": args.restarts,
            "elbow": args.elbow,
            "pair_policy": args.pair_policy,
            "compress": args.compress,
            "workers": args.workers,
        },
    )
    print(f"analyses {', '.join(sorted(analyses))} -> {out_dir}")
    return 0


def cmd_temporal(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    ingest = IngestConfig(
        strict=args.strict,
        level=args.level,
        window=_parse_window(args.window) if args.window else None,
    )
    corpus = load_corpus(args.input, ingest)
    if args.split_kind == "focal":
        split = SplitRule.focal()
    else:
        if not args.pre_window or not args.post_window:
            raise ConfigError("year split needs --pre-window and --post-window")
        split = SplitRule.year(_parse_window(args.pre_window), _parse_window(args.post_window))
    graph = build_temporal(
        corpus, split, retain_witnesses=not args.no_witnesses, workers=args.workers
    )
    if args.restrict_field:
        graph = restrict_post_field(graph, args.restrict_field, mode=args.restrict_mode)
    if args.top_k is not None:
        graph = top_k_edges(graph, args.top_k)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    names = _corpus_names(corpus)
    for csv_name, nodes in (("nodes_pre.csv", graph.pre_nodes), ("nodes_post.csv", graph.post_nodes)):
        with open(out_dir / csv_name, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["field", "name"])
            for node in nodes:
                writer.writerow([node, names.get(node, node)])
    exports.write_temporal_edges_csv(graph, out_dir / "edges.csv")
    exports.write_sankey_csv(graph, out_dir / "sankey.csv")
    exports.write_temporal_dot(graph, out_dir / "graph.dot", names)
    if not args.no_witnesses:
        exports.write_temporal_witnesses_jsonl(graph, out_dir / "witnesses.jsonl")
        if graph.author_post_fields is not None:
            exports.write_json(
                out_dir / "post_profiles.json",
                {a: sorted(fields) for a, fields in sorted(graph.author_post_fields.items())},
            )
    metadata = {
        "kind": "temporal",
        "graph_meta": graph.meta.to_dict(),
        "pre_nodes": list(graph.pre_nodes),
        "post_nodes": list(graph.post_nodes),
        "edges": graph.m,
        "corpus_counts": {
            "papers": len(corpus.papers),
            "authors": len(corpus.authors),
            "fields": len(corpus.fields),
        },
    }
    exports.write_json(out_dir / "metadata.json", metadata)
    _write_resolved_config(
        out_dir,
        {
            "command": "temporal",
            "input": str(args.input),
            "level": args.level,
            "window": args.window,
            "strict": args.strict,
            "split_kind": args.split_kind,
            "pre_window": args.pre_window,
            "post_window": args.post_window,
            "top_k": args.top_k,
            "restrict_field": args.restrict_field,
            "restrict_mode": args.restrict_mode,
            "retain_witnesses": not args.no_witnesses,
            "workers": args.workers,
            "seed": seed,
        },
    )
    print(f"temporal graph: {len(graph.pre_nodes)} pre, {len(graph.post_nodes)} post, {graph.m} edges -> {out_dir}")
    return 0


def cmd_drill(args: argparse.Namespace) -> int:
    build_dir = Path(args.build)
    meta_path = build_dir / "metadata.json"
    if not meta_path.exists():
        raise ArtifactError(f"missing {meta_path}")
    with open(meta_path, encoding="utf-8") as fh:
        kind = json.load(fh).get("kind")
    if kind == "temporal":
        graph, _ = exports.load_temporal_artifacts(build_dir)
    else:
        graph, _ = exports.load_fos_artifacts(build_dir)
    corpus, _ = _load_corpus_for(args.input, build_dir)

    if not args.edge:
        raise ConfigError("--edge SRC,DST is required")
    parts = args.edge.split(",")
    if len(parts) != 2:
        raise ConfigError(f"--edge must look like SRC,DST, got {args.edge!r}")
    provenance = papers_for_edge(graph, (parts[0], parts[1]), corpus)

    result: dict = {
        "edge": list(provenance.edge),
        "directed": provenance.directed,
        "weight": len(provenance.witnesses),
        "witnesses": [w.author for w in provenance.witnesses],
        "papers": list(provenance.papers),
        "focal_papers": list(provenance.focal_papers),
    }
    if args.keywords:
        stop = load_stopwords(args.stopwords) if args.stopwords else None
        result["keywords"] = [
            {"term": term, "count": count}
            for term, count in keyword_frequencies(provenance.papers, corpus, top_n=args.keywords, stopwords=stop)
        ]
    if args.subfields is not None:
        result["subfields"] = [
            {"field": name, "count": count}
            for name, count in subfield_frequencies(provenance.papers, corpus, args.subfields)
        ]
    if args.format == "table":
        text = _drill_table(result)
    else:
        text = json.dumps(result, sort_keys=True, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    print(text)
    return 0


def _drill_table(result: dict) -> str:
    arrow = "->" if result["directed"] else "--"
    lines = [
        f"edge: {result['edge'][0]} {arrow} {result['edge'][1]}  (weight {result['weight']})",
        f"witnesses: {', '.join(result['witnesses'])}",
        f"papers: {', '.join(result['papers'])}",
        f"focal papers: {', '.join(result['focal_papers']) or '(none)'}",
    ]
    if "keywords" in result:
        lines.append("")
        lines.append(f"{'keyword':<24} count")
        for row in result["keywords"]:
            lines.append(f"{row['term']:<24} {row['count']}")
    if "subfields" in result:
        lines.append("")
        lines.append(f"{'subfield':<32} count")
        for row in result["subfields"]:
            lines.append(f"{row['field']:<32} {row['count']}")
    return "\n".join(lines)


def cmd_export(args: argparse.Namespace) -> int:
    build_dir = Path(args.build)
    meta_path = build_dir / "metadata.json"
    if not meta_path.exists():
        raise ArtifactError(f"missing {meta_path}")
    with open(meta_path, encoding="utf-8") as fh:
        kind = json.load(fh).get("kind")
    out = Path(args.out)
    if kind == "temporal":
        graph, names = exports.load_temporal_artifacts(build_dir)
        if args.format == "sankey-csv":
            exports.write_sankey_csv(graph, out)
        elif args.format == "edges-csv":
            exports.write_temporal_edges_csv(graph, out)
        elif args.format == "dot":
            exports.write_temporal_dot(graph, out, names)
        else:
            raise ConfigError(f"format {args.format!r} is not available for temporal builds")
    else:
        graph, names = exports.load_fos_artifacts(build_dir)
        if args.format == "graphml":
            exports.write_graphml(graph, out, names)
        elif args.format == "dot":
            exports.write_dot(graph, out, names)
        elif args.format == "edges-csv":
            exports.write_edges_csv(graph, out)
        else:
            raise ConfigError(f"format {args.format!r} is not available for static builds")
    print(f"wrote {out}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="fosnet", description="Field-of-study network pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build the static field network", parents=[])
    p_build.add_argument("--input", help="corpus JSONL path")
    p_build.add_argument("--config", help="JSON config file; explicit flags win")
    p_build.add_argument("--level", type=int, default=None, help="keep fields at exactly this level")
    p_build.add_argument("--window", default=None, help="inclusive year window LO:HI")
    p_build.add_argument("--strict", action="store_true", help="malformed records abort the load")
    p_build.add_argument("--focal-restrict", action="store_true", dest="focal_restrict")
    p_build.add_argument("--focal-mode", choices=("either", "both"), default=None, dest="focal_mode")
    p_build.add_argument("--threshold", default=None, help="none | mean | fixed:VALUE")
    p_build.add_argument("--keep-isolates", action="store_true", dest="keep_isolates")
    p_build.add_argument("--no-witnesses", action="store_true", dest="no_witnesses")
    p_build.add_argument("--workers", type=int, default=1)
    p_build.add_argument("--out", required=True)
    p_build.set_defaults(func=cmd_build)

    p_an = sub.add_parser("analyze", help="run analyses on built artifacts")
    p_an.add_argument("--build", required=True, help="build artifact directory")
    p_an.add_argument("--input", default=None, help="corpus path override")
    p_an.add_argument("--analysis", default="centrality,communities,roles")
    p_an.add_argument("--seed", type=int, default=None)
    p_an.add_argument("--resolution", type=float, default=1.0)
    p_an.add_argument("--min-community-size", type=int, default=2, dest="min_community_size")
    p_an.add_argument("--discipline-cutoff", type=float, default=0.2, dest="discipline_cutoff")
    p_an.add_argument("--k-range", default="2:25", dest="k_range")
    p_an.add_argument("--dim", type=int, default=128)
    p_an.add_argument("--walks", type=int, default=10)
    p_an.add_argument("--walk-length", type=int, default=80, dest="walk_length")
    p_an.add_argument("--window-size", type=int, default=10, dest="window_size")
    p_an.add_argument("--epochs", type=int, default=5)
    p_an.add_argument("--negatives", type=int, default=5)
    p_an.add_argument("--stay-prob", type=float, default=0.3, dest="stay_prob")
    p_an.add_argument("--max-layer", type=int, default=None, dest="max_layer")
    p_an.add_argument("--restarts", type=int, default=10)
    p_an.add_argument("--elbow", choices=("knee", "max"), default="knee")
    p_an.add_argument("--pair-policy", choices=("all", "degree"), default="all", dest="pair_policy")
    p_an.add_argument("--compress", action="store_true", help="run-length DTW approximation")
    p_an.add_argument("--workers", type=int, default=1)
    p_an.add_argument("--out", required=True)
    p_an.set_defaults(func=cmd_analyze)

    p_tmp = sub.add_parser("temporal", help="build a directed two-step network")
    p_tmp.add_argument("--input", required=True)
    p_tmp.add_argument("--level", type=int, default=None)
    p_tmp.add_argument("--window", default=None, help="ingest year window LO:HI")
    p_tmp.add_argument("--strict", action="store_true")
    p_tmp.add_argument("--split-kind", choices=("year", "focal"), default="focal", dest="split_kind")
    p_tmp.add_argument("--pre-window", default=None, dest="pre_window", help="LO:HI")
    p_tmp.add_argument("--post-window", default=None, dest="post_window", help="LO:HI")
    p_tmp.add_argument("--top-k", type=int, default=None, dest="top_k")
    p_tmp.add_argument("--restrict-field", default=None, dest="restrict_field")
    p_tmp.add_argument("--restrict-mode", choices=("endpoint", "witness"), default="witness", dest="restrict_mode")
    p_tmp.add_argument("--no-witnesses", action="store_true", dest="no_witnesses")
    p_tmp.add_argument("--workers", type=int, default=1)
    p_tmp.add_argument("--seed", type=int, default=None)
    p_tmp.add_argument("--out", required=True)
    p_tmp.set_defaults(func=cmd_temporal)

    p_drill = sub.add_parser("drill", help="edge provenance and close reading")
    p_drill.add_argument("--build", required=True)
    p_drill.add_argument("--input", default=None)
    p_drill.add_argument("--edge", default=None, help="SRC,DST")
    p_drill.add_argument("--keywords", type=int, default=None, help="top-N keywords")
    p_drill.add_argument("--subfields", type=int, default=None, help="field level to tally")
    p_drill.add_argument("--stopwords", default=None, help="stopword file override")
    p_drill.add_argument("--format", choices=("json", "table"), default="json")
    p_drill.add_argument("--out", default=None, help="optionally also write the report here")
    p_drill.set_defaults(func=cmd_drill)

    p_exp = sub.add_parser("export", help="re-export built artifacts")
    p_exp.add_argument("--build", required=True)
    p_exp.add_argument("--format", required=True, choices=("graphml", "dot", "edges-csv", "sankey-csv"))
    p_exp.add_argument("--out", required=True)
    p_exp.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"fosnet: configuration error: {exc}", file=sys.stderr)
        return 1
    except UnknownEdgeError as exc:
        print(f"fosnet: {exc}", file=sys.stderr)
        if exc.suggestions:
            print("nearest edges:", file=sys.stderr)
            for suggestion in exc.suggestions:
                print(f"  {suggestion}", file=sys.stderr)
        return 3
    except (
        CorpusError,
        ArtifactError,
        GraphStructureError,
        CapabilityError,
        ConvergenceError,
        FosnetError,
        OSError,
    ) as exc:
        print(f"fosnet: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
