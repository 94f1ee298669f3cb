"""Skip-gram with negative sampling over walk corpora.

Deterministic single-worker trainer: one seeded generator drives the input
matrix init and every negative draw, the corpus order is canonical, and
updates are applied position by position (all context pairs of a center are
batched into one update using the pre-update weights). Noise draws follow
the unigram^0.75 distribution; negatives that collide with their positive
context are skipped. The learning rate decays linearly from ``alpha`` to
``min_alpha`` across all (epoch, position) steps. With ``epochs=0`` the
initialization vectors are returned unchanged.

``workers > 1`` opts into hogwild-style training (threads race on the
shared weight matrices); it is NOT deterministic and exists only for large
corpora where throughput beats reproducibility.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..errors import ConfigError


class Embedding:
    """Per-node vectors with stable node order."""

    __slots__ = ("nodes", "vectors", "_index")

    def __init__(self, nodes: tuple[str, ...], vectors: np.ndarray):
        self.nodes = tuple(nodes)
        self.vectors = vectors
        self._index = {node: i for i, node in enumerate(self.nodes)}

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def index(self, node: str) -> int:
        return self._index[node]

    def vector(self, node: str) -> np.ndarray:
        return self.vectors[self._index[node]]

    def cosine(self, u: str, v: str) -> float:
        a = self.vector(u)
        b = self.vector(v)
        na = np.linalg.norm(a)
        nb = np.linalg.norm(b)
        if na == 0.0 or nb == 0.0:
            return 0.0
        return float(a @ b / (na * nb))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Embedding):
            return NotImplemented
        return self.nodes == other.nodes and np.array_equal(self.vectors, other.vectors)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(x, -35.0, 35.0)))


def _train_chunk(
    seqs: list[np.ndarray],
    w_in: np.ndarray,
    w_out: np.ndarray,
    noise_cdf: np.ndarray,
    rng: np.random.Generator,
    window: int,
    epochs: int,
    k: int,
    alpha: float,
    min_alpha: float,
) -> None:
    vocab_size = w_in.shape[0]
    total_steps = epochs * sum(len(seq) for seq in seqs)
    ones_pattern: dict[int, np.ndarray] = {}
    step = 0
    for _ in range(epochs):
        for seq in seqs:
            length = len(seq)
            for pos in range(length):
                frac = step / max(total_steps - 1, 1)
                lr = alpha + (min_alpha - alpha) * frac
                step += 1
                lo = 0 if pos < window else pos - window
                hi = min(length, pos + window + 1)
                ctx = np.concatenate([seq[lo:pos], seq[pos + 1 : hi]])
                n_ctx = len(ctx)
                if n_ctx == 0:
                    continue
                center = seq[pos]
                if k:
                    negs = np.searchsorted(noise_cdf, rng.random((n_ctx, k)))
                    targets = np.concatenate([ctx[:, None], negs], axis=1).ravel()
                else:
                    targets = ctx
                if n_ctx not in ones_pattern:
                    pattern = np.zeros(n_ctx * (k + 1))
                    pattern[:: k + 1] = 1.0
                    ones_pattern[n_ctx] = pattern
                h = w_in[center].copy()
                u_rows = w_out[targets]
                scores = _sigmoid(u_rows @ h)
                g = (ones_pattern[n_ctx] - scores) * lr
                if k:
                    collide = negs == ctx[:, None]  # negative equals its positive: skip
                    if collide.any():
                        g.reshape(n_ctx, k + 1)[:, 1:][collide] = 0.0
                # scatter-add with duplicate targets folded via bincount
                gsum = np.bincount(targets, weights=g, minlength=vocab_size)
                touched = np.nonzero(gsum)[0]
                w_out[touched] += gsum[touched, None] * h
                w_in[center] += u_rows.T @ g


def train_embeddings(
    walks,
    dim: int = 128,
    window: int = 10,
    epochs: int = 5,
    negative_samples: int = 5,
    seed: int = 42,
    alpha: float = 0.025,
    min_alpha: float = 1e-4,
    workers: int = 1,
) -> Embedding:
    """Train node vectors on the walk corpus."""
    if dim < 2:
        raise ConfigError("embedding dimension must be >= 2")
    if window < 1:
        raise ConfigError("window must be >= 1")
    if epochs < 0 or negative_samples < 0:
        raise ConfigError("epochs and negative_samples must be >= 0")
    if workers < 1:
        raise ConfigError("workers must be >= 1")
    walks = tuple(tuple(w) for w in walks)
    if not walks or not any(walks):
        raise ConfigError("walk corpus is empty")

    vocab = tuple(sorted({token for walk in walks for token in walk}))
    lookup = {token: i for i, token in enumerate(vocab)}
    seqs = [np.array([lookup[t] for t in walk], dtype=np.intp) for walk in walks if walk]

    rng = np.random.default_rng(seed)
    w_in = (rng.random((len(vocab), dim)) - 0.5) / dim
    w_out = np.zeros((len(vocab), dim))
    if epochs == 0:
        return Embedding(nodes=vocab, vectors=w_in)

    counts = np.zeros(len(vocab))
    for seq in seqs:
        np.add.at(counts, seq, 1.0)
    noise = counts**0.75
    noise_cdf = np.cumsum(noise / noise.sum())

    args = (window, epochs, negative_samples, alpha, min_alpha)
    if workers == 1:
        _train_chunk(seqs, w_in, w_out, noise_cdf, rng, *args)
    else:
        # hogwild: threads update shared matrices without locking
        size = (len(seqs) + workers - 1) // workers
        chunks = [seqs[i : i + size] for i in range(0, len(seqs), size)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(
                    _train_chunk,
                    chunk,
                    w_in,
                    w_out,
                    noise_cdf,
                    np.random.default_rng(np.random.SeedSequence((seed, 7919 + i))),
                    *args,
                )
                for i, chunk in enumerate(chunks)
            ]
            for future in futures:
                future.result()
    if not np.all(np.isfinite(w_in)):
        raise ConfigError("training produced non-finite vectors; lower alpha")
    return Embedding(nodes=vocab, vectors=w_in)
