#!/usr/bin/env python3
"""Regenerate tests/data/synthetic_corpus.jsonl.

Fully deterministic: a planted field graph (dense hub core, mid-degree
adjacent ring, bridge fields carrying leaf clusters, and degree-1 leaves)
is expanded into one paper per unit of edge weight. Core-facing papers are
focal (year 2019); leaf papers are background (year 2017), so both the
focal flag and a year window induce the same split.
"""

from __future__ import annotations

import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "synthetic_corpus.jsonl"

DISCIPLINES = {
    "d_methods": "Methods",
    "d_systems": "Systems",
    "d_applications": "Applications",
    "d_society": "Society",
}


def planted_edges() -> list[tuple[str, str, int, bool]]:
    """(u, v, weight, focal) tuples of the planted graph."""
    hubs = [f"hub_{i}" for i in range(5)]
    adjacents = [f"adj_{j}" for j in range(10)]
    bridges = [f"bridge_{b}" for b in range(3)]
    edges: list[tuple[str, str, int, bool]] = []
    for i in range(5):
        for j in range(i + 1, 5):
            edges.append((hubs[i], hubs[j], 3, True))
    for j, adj in enumerate(adjacents):
        edges.append((adj, hubs[j % 5], 2, True))
        edges.append((adj, hubs[(j + 1) % 5], 2, True))
    for b, bridge in enumerate(bridges):
        edges.append((bridge, hubs[2 * b], 2, True))
        for leaf in range(5):
            edges.append((bridge, f"bleaf_{5 * b + leaf}", 1, False))
    for i in range(5):
        for leaf in range(2):
            edges.append((hubs[i], f"hleaf_{2 * i + leaf}", 1, False))
    return edges


def field_ref(fid: str) -> dict:
    group, _, idx = fid.partition("_")
    names = {
        "hub": ("hub topic", "d_methods"),
        "adj": ("adjacent topic", ["d_methods", "d_systems"]),
        "bridge": ("bridging topic", "d_applications"),
        "bleaf": ("background topic", ["d_applications", "d_society"]),
        "hleaf": ("background topic", ["d_systems", "d_society"]),
    }
    label, parent = names[group]
    if isinstance(parent, list):
        parent = parent[int(idx) % len(parent)]
    return {"id": fid, "name": f"{label} {idx}", "level": 1, "parents": [parent]}


def discipline_ref(fid: str) -> dict:
    parent = field_ref(fid)["parents"][0]
    return {"id": parent, "name": DISCIPLINES[parent], "level": 0, "parents": []}


def tagged_fields(*fids: str) -> list[dict]:
    """Level-1 refs plus their parent disciplines, the way curated metadata tags papers."""
    refs = [field_ref(fid) for fid in fids]
    seen = set()
    for fid in fids:
        ref = discipline_ref(fid)
        if ref["id"] not in seen:
            seen.add(ref["id"])
            refs.append(ref)
    return refs


def mover_routes() -> list[tuple[str, str, int]]:
    """(pre_field, post_field, movers) along existing planted edges.

    Movers add temporal flow (background paper, then focal paper) without
    changing the static edge set: each route coincides with a planted edge,
    so only that edge's weight grows.
    """
    routes = [(f"hub_{i}", f"hub_{(i + 1) % 5}", 2) for i in range(5)]
    routes += [(f"bleaf_{5 * b}", f"bridge_{b}", 1) for b in range(3)]
    routes += [(f"adj_{j}", f"hub_{j % 5}", 1) for j in range(0, 10, 3)]
    return routes


def main() -> None:
    records = []
    counter = 0
    for u, v, weight, focal in planted_edges():
        for dup in range(weight):
            counter += 1
            pid = f"sp_{counter:04d}"
            author = f"w_{u}__{v}__{dup}"
            year = 2019 if focal else 2017
            records.append(
                {
                    "id": pid,
                    "title": f"Study {counter} of {u.replace('_', ' ')} and {v.replace('_', ' ')}",
                    "abstract": f"Joint investigation connecting {u.replace('_', ' ')} with {v.replace('_', ' ')}.",
                    "year": year,
                    "authors": [{"id": author, "name": f"Author {counter}"}],
                    "fields": tagged_fields(u, v),
                    "focal": focal,
                }
            )
    for src, dst, movers in mover_routes():
        for dup in range(movers):
            author = f"m_{src}__{dst}__{dup}"
            for side, field, year, focal in (("from", src, 2017, False), ("into", dst, 2019, True)):
                counter += 1
                records.append(
                    {
                        "id": f"sp_{counter:04d}",
                        "title": f"Work {counter} {side} {field.replace('_', ' ')}",
                        "abstract": f"Single-topic report on {field.replace('_', ' ')}.",
                        "year": year,
                        "authors": [{"id": author, "name": f"Mover {counter}"}],
                        "fields": tagged_fields(field),
                        "focal": focal,
                    }
                )
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True) + "\n")
    print(f"wrote {len(records)} papers -> {OUT}")


if __name__ == "__main__":
    main()
