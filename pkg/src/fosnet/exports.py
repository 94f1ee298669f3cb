"""Deterministic on-disk artifacts: CSV/JSONL dumps, GraphML/DOT exports,
and loaders that reconstruct graphs from a build directory.

All writers sort their rows and keys and never embed timestamps or absolute
paths, so identical runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Mapping
from xml.sax.saxutils import escape

from .builder import EdgeData, FosGraph, FosMeta, Witness
from .centrality import CentralityReport
from .community import CommunityAssignment, CommunitySummary
from .errors import ArtifactError
from .roles.pipeline import RoleModel
from .roles.summary import RoleSummary
from .temporal import TemporalEdgeData, TemporalFosGraph, TemporalMeta, TemporalWitness, SplitRule


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def write_json(path: Path, payload: object) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def write_nodes_csv(graph: FosGraph, path: Path, names: Mapping[str, str] | None = None) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["field", "name"])
        for node in graph.nodes:
            writer.writerow([node, (names or {}).get(node, node)])


def write_edges_csv(graph: FosGraph, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["src_field", "dst_field", "weight", "n_witnesses"])
        for (u, v), data in graph.edges.items():
            n_wit = len(data.witnesses) if data.witnesses is not None else ""
            writer.writerow([u, v, data.weight, n_wit])


def write_witnesses_jsonl(graph: FosGraph, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for (u, v), data in graph.edges.items():
            record = {
                "src": u,
                "dst": v,
                "weight": data.weight,
                "witnesses": [
                    {"author": w.author, "papers": {f: list(p) for f, p in sorted(w.papers.items())}}
                    for w in (data.witnesses or ())
                ],
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def write_graphml(graph: FosGraph, path: Path, names: Mapping[str, str] | None = None) -> None:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="d0" for="node" attr.name="name" attr.type="string"/>',
        '  <key id="d1" for="edge" attr.name="weight" attr.type="int"/>',
        '  <graph id="fos" edgedefault="undirected">',
    ]
    for node in graph.nodes:
        label = escape((names or {}).get(node, node))
        lines.append(f'    <node id="{escape(node)}"><data key="d0">{label}</data></node>')
    for (u, v), data in graph.edges.items():
        lines.append(
            f'    <edge source="{escape(u)}" target="{escape(v)}">'
            f'<data key="d1">{data.weight}</data></edge>'
        )
    lines += ["  </graph>", "</graphml>", ""]
    path.write_text("\n".join(lines), encoding="utf-8")


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def write_dot(graph: FosGraph, path: Path, names: Mapping[str, str] | None = None) -> None:
    lines = ["graph fos {"]
    for node in graph.nodes:
        label = (names or {}).get(node, node)
        lines.append(f"  {_dot_quote(node)} [label={_dot_quote(label)}];")
    for (u, v), data in graph.edges.items():
        lines.append(f"  {_dot_quote(u)} -- {_dot_quote(v)} [weight={data.weight}];")
    lines += ["}", ""]
    path.write_text("\n".join(lines), encoding="utf-8")


def write_temporal_edges_csv(graph: TemporalFosGraph, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["src_field", "dst_field", "weight", "n_witnesses"])
        for (src, dst), data in graph.edges.items():
            n_wit = len(data.witnesses) if data.witnesses is not None else ""
            writer.writerow([src, dst, data.weight, n_wit])


def write_sankey_csv(graph: TemporalFosGraph, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["src_field", "dst_field", "weight"])
        for (src, dst), data in graph.edges.items():
            writer.writerow([src, dst, data.weight])


def write_temporal_dot(graph: TemporalFosGraph, path: Path, names: Mapping[str, str] | None = None) -> None:
    def label(node: str) -> str:
        return (names or {}).get(node, node)

    lines = ["digraph fos_temporal {", "  rankdir=LR;"]
    lines.append("  { rank=same;")
    for node in graph.pre_nodes:
        lines.append(f"    {_dot_quote('pre:' + node)} [label={_dot_quote(label(node))}];")
    lines.append("  }")
    lines.append("  { rank=same;")
    for node in graph.post_nodes:
        lines.append(f"    {_dot_quote('post:' + node)} [label={_dot_quote(label(node))}];")
    lines.append("  }")
    for (src, dst), data in graph.edges.items():
        lines.append(f"  {_dot_quote('pre:' + src)} -> {_dot_quote('post:' + dst)} [weight={data.weight}];")
    lines += ["}", ""]
    path.write_text("\n".join(lines), encoding="utf-8")


def write_temporal_witnesses_jsonl(graph: TemporalFosGraph, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for (src, dst), data in graph.edges.items():
            record = {
                "src": src,
                "dst": dst,
                "weight": data.weight,
                "witnesses": [
                    {"author": w.author, "pre_papers": list(w.pre_papers), "post_papers": list(w.post_papers)}
                    for w in (data.witnesses or ())
                ],
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def write_centrality_csv(report: CentralityReport, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node", "degree", "degree_c", "betweenness", "closeness", "eigenvector"])
        for node in report.nodes:
            writer.writerow(
                [
                    node,
                    report.degree[node],
                    _fmt(report.degree_centrality[node]),
                    _fmt(report.betweenness[node]),
                    _fmt(report.closeness[node]),
                    _fmt(report.eigenvector[node]),
                ]
            )


def write_assignment_csv(assignment: CommunityAssignment, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node", "community"])
        for node in sorted(assignment.membership):
            writer.writerow([node, assignment.membership[node]])


def community_summary_payload(summary: CommunitySummary, assignment: CommunityAssignment) -> dict:
    return {
        "modularity": assignment.modularity,
        "resolution": assignment.resolution,
        "seed": assignment.seed,
        "min_community_size": assignment.min_community_size,
        "discipline_cutoff": summary.discipline_cutoff,
        "unassigned": list(summary.unassigned),
        "communities": [
            {
                "community": row.community,
                "size": row.size,
                "density": row.density,
                "most_central": list(row.central_fields),
                "disciplines": [{"name": name, "fraction": frac} for name, frac in row.disciplines],
            }
            for row in summary.rows
        ],
    }


def format_community_table(summary: CommunitySummary) -> str:
    header = f"{'community':>9}  {'size':>4}  {'density':>7}  {'most central':<40}  disciplines"
    lines = [header, "-" * len(header)]
    for row in summary.rows:
        central = ", ".join(row.central_fields)
        disciplines = ", ".join(f"{name} ({frac:.0%})" for name, frac in row.disciplines)
        lines.append(f"{row.community:>9}  {row.size:>4}  {row.density:>7.2f}  {central:<40}  {disciplines}")
    lines.append(f"unassigned nodes: {len(summary.unassigned)}")
    return "\n".join(lines) + "\n"


def write_embedding_csv(model: RoleModel, path: Path) -> None:
    dim = model.embedding.dim
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node"] + [f"v{i + 1}" for i in range(dim)])
        for node in model.nodes:
            vec = model.embedding.vector(node)
            writer.writerow([node] + [_fmt(float(x)) for x in vec])


def write_role_labels_csv(model: RoleModel, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node", "role"])
        for node in model.nodes:
            writer.writerow([node, model.labels[node]])


def write_silhouette_csv(model: RoleModel, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "mean_silhouette"])
        for k, score in model.silhouette_curve:
            writer.writerow([k, _fmt(score)])


def write_stability_csv(model: RoleModel, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["role", "size", "mean_best_jaccard", "min_best_jaccard"])
        for row in model.stability:
            writer.writerow([row.cluster, row.size, _fmt(row.mean_best_jaccard), _fmt(row.min_best_jaccard)])


def role_summary_payload(summary: RoleSummary, model: RoleModel) -> dict:
    return {
        "k_selected": model.k_selected,
        "hyperparameters": model.params.to_dict(),
        "silhouette_curve": [[k, score] for k, score in model.silhouette_curve],
        "roles": [
            {
                "role": row.role,
                "count": row.count,
                "mean_degree": row.mean_degree,
                "mean_betweenness": row.mean_betweenness,
                "mean_closeness": row.mean_closeness,
                "mean_eigenvector": row.mean_eigenvector,
                "focal_prop": row.focal_prop,
            }
            for row in summary.rows
        ],
    }


def format_role_table(summary: RoleSummary) -> str:
    header = (
        f"{'role':>4}  {'degree':>8}  {'betweenness':>11}  {'closeness':>9}  "
        f"{'eigenvector':>11}  {'focal prop':>10}  {'count':>5}"
    )
    lines = [header, "-" * len(header)]
    for row in summary.rows:
        lines.append(
            f"{row.role:>4}  {row.mean_degree:>8.1f}  {row.mean_betweenness:>11.3f}  "
            f"{row.mean_closeness:>9.3f}  {row.mean_eigenvector:>11.3f}  "
            f"{row.focal_prop:>10.2f}  {row.count:>5}"
        )
    return "\n".join(lines) + "\n"


def load_fos_artifacts(directory: str | Path) -> tuple[FosGraph, dict[str, str]]:
    """Rebuild a FosGraph (and node names) from a build directory."""
    directory = Path(directory)
    nodes_path = directory / "nodes.csv"
    edges_path = directory / "edges.csv"
    meta_path = directory / "metadata.json"
    for required in (nodes_path, edges_path, meta_path):
        if not required.exists():
            raise ArtifactError(f"missing build artifact {required}")
    with open(meta_path, encoding="utf-8") as fh:
        metadata = json.load(fh)
    if metadata.get("kind") != "static":
        raise ArtifactError(f"{meta_path} does not describe a static build")
    graph_meta = FosMeta(**metadata["graph_meta"])

    names: dict[str, str] = {}
    with open(nodes_path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            names[row["field"]] = row["name"]

    witnesses: dict[tuple[str, str], tuple[Witness, ...]] = {}
    witness_path = directory / "witnesses.jsonl"
    if graph_meta.witnesses_retained and witness_path.exists():
        with open(witness_path, encoding="utf-8") as fh:
            for line in fh:
                record = json.loads(line)
                key = (record["src"], record["dst"])
                witnesses[key] = tuple(
                    Witness(author=w["author"], papers={f: tuple(p) for f, p in w["papers"].items()})
                    for w in record["witnesses"]
                )

    edges: dict[tuple[str, str], EdgeData] = {}
    with open(edges_path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            key = (row["src_field"], row["dst_field"])
            edges[key] = EdgeData(weight=int(row["weight"]), witnesses=witnesses.get(key))
    return FosGraph(names.keys(), edges, graph_meta), names


def load_temporal_artifacts(directory: str | Path) -> tuple[TemporalFosGraph, dict[str, str]]:
    """Rebuild a TemporalFosGraph (and node names) from a temporal build directory."""
    directory = Path(directory)
    meta_path = directory / "metadata.json"
    edges_path = directory / "edges.csv"
    for required in (meta_path, edges_path):
        if not required.exists():
            raise ArtifactError(f"missing temporal artifact {required}")
    with open(meta_path, encoding="utf-8") as fh:
        metadata = json.load(fh)
    if metadata.get("kind") != "temporal":
        raise ArtifactError(f"{meta_path} does not describe a temporal build")
    raw_meta = dict(metadata["graph_meta"])
    split_raw = raw_meta.pop("split")
    split = SplitRule(
        kind=split_raw["kind"],
        pre_window=tuple(split_raw["pre_window"]) if split_raw["pre_window"] else None,
        post_window=tuple(split_raw["post_window"]) if split_raw["post_window"] else None,
    )
    graph_meta = TemporalMeta(split=split, **raw_meta)

    names: dict[str, str] = {}
    for csv_name in ("nodes_pre.csv", "nodes_post.csv"):
        node_path = directory / csv_name
        if node_path.exists():
            with open(node_path, newline="", encoding="utf-8") as fh:
                for row in csv.DictReader(fh):
                    names[row["field"]] = row["name"]

    witnesses: dict[tuple[str, str], tuple[TemporalWitness, ...]] = {}
    witness_path = directory / "witnesses.jsonl"
    if graph_meta.witnesses_retained and witness_path.exists():
        with open(witness_path, encoding="utf-8") as fh:
            for line in fh:
                record = json.loads(line)
                witnesses[(record["src"], record["dst"])] = tuple(
                    TemporalWitness(
                        author=w["author"],
                        pre_papers=tuple(w["pre_papers"]),
                        post_papers=tuple(w["post_papers"]),
                    )
                    for w in record["witnesses"]
                )

    edges: dict[tuple[str, str], TemporalEdgeData] = {}
    pre_nodes: set[str] = set(metadata.get("pre_nodes", []))
    post_nodes: set[str] = set(metadata.get("post_nodes", []))
    with open(edges_path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            key = (row["src_field"], row["dst_field"])
            edges[key] = TemporalEdgeData(weight=int(row["weight"]), witnesses=witnesses.get(key))
            pre_nodes.add(key[0])
            post_nodes.add(key[1])

    profiles = None
    profile_path = directory / "post_profiles.json"
    if profile_path.exists():
        with open(profile_path, encoding="utf-8") as fh:
            profiles = {a: frozenset(fields) for a, fields in json.load(fh).items()}
    return TemporalFosGraph(pre_nodes, post_nodes, edges, graph_meta, author_post_fields=profiles), names
