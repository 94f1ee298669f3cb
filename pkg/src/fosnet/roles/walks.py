"""Biased random walks over the multilayer context graph.

Each step keeps the walker in its current layer with probability
``stay_prob``, emitting a move to an intra-layer neighbor drawn
proportionally to the layer weights. Otherwise it switches layers without
emitting: up with probability w_up / (w_up + 1), down otherwise (the only
available direction is taken at the ladder ends). Walks emit node ids only
and start in layer 0. A node absent from every layer emits itself.

Every walk owns an rng seeded from (seed, node index, walk index), so the
corpus is reproducible and walks could be generated in any order.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from .context import ContextGraph

WalkCorpus = tuple[tuple[str, ...], ...]


def _single_walk(ctx: ContextGraph, node: str, walk_length: int, stay_prob: float,
                 rng: np.random.Generator) -> tuple[str, ...]:
    walk = [node]
    layer = 0
    current = node
    while len(walk) < walk_length:
        if rng.random() < stay_prob:
            if ctx.present(layer, current):
                current = ctx.sample_intra(layer, current, rng)
            walk.append(current)
        else:
            up = ctx.up_weight(layer, current)
            down_ok = layer > 0
            if up is not None and down_ok:
                if rng.random() <= up / (up + 1.0):
                    layer += 1
                else:
                    layer -= 1
            elif up is not None:
                layer += 1
            elif down_ok:
                layer -= 1
    return tuple(walk)


def role_walks(
    ctx: ContextGraph,
    walks_per_node: int = 10,
    walk_length: int = 80,
    stay_prob: float = 0.3,
    seed: int = 42,
) -> WalkCorpus:
    """Generate the walk corpus in canonical (node, walk index) order."""
    if walks_per_node < 1:
        raise ConfigError("walks_per_node must be >= 1")
    if walk_length < 1:
        raise ConfigError("walk_length must be >= 1")
    if not (0.0 < stay_prob <= 1.0):
        raise ConfigError("stay_prob must be in (0, 1]")
    corpus: list[tuple[str, ...]] = []
    for node_idx, node in enumerate(ctx.nodes):
        for walk_idx in range(walks_per_node):
            rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, node_idx, walk_idx))))
            corpus.append(_single_walk(ctx, node, walk_length, stay_prob, rng))
    return tuple(corpus)
