"""Shortest-path graph kernel over motif graphs.

The kernel between two motif graphs is the sum, over all pairs of
shortest-path substructures (one per connected node pair), of

    length_sim * position_sim

where ``length_sim = max(0, c - |len1 - len2|)`` and ``position_sim``
compares the two paths positionally: node labels are refined iteratively
(own label + sorted neighbor labels, compressed to shared dense integers),
each node is embedded as the histogram of iteration-h labels over its
radius-h window on the path, and embeddings are compared with a
ridge-regularized Mahalanobis distance whose covariance is estimated from
all nodes of both paths.  Contributions are exp(-1/2 * sum of per-iteration
distances), summed over all cross-path node pairs.

Refinement stops at the first iteration whose label sets are disjoint and
never exceeds min(H, shorter path length).

``KernelEngine`` is the production entry point: it groups equal path label
sequences, memoizes position similarities, and skips pairs whose length
similarity is zero.  All of it is a pure reorganization of the same sum; the
scalar derivation lives in :mod:`mssm.reference`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .motif import MotifGraph

__all__ = [
    "KernelParams",
    "SPEdge",
    "ShortestPathGraph",
    "WLLabeling",
    "MahalanobisContext",
    "WLStats",
    "KernelEngine",
    "floyd_transform",
    "length_sim",
    "wl_refine",
    "mahalanobis_context",
    "mahalanobis_distance",
    "position_sim",
    "position_sim_edit_distance",
    "edge_kernel",
    "mwlsp_kernel",
    "levenshtein",
]

_UNREACHABLE = 1 << 20


@dataclass(frozen=True)
class KernelParams:
    """Kernel hyperparameters.

    ``c`` is the length tolerance, ``wl_iterations`` the refinement cap H,
    ``epsilon`` the covariance ridge, ``position_variant`` either "mwl"
    (refinement + Mahalanobis) or "edit" (Levenshtein ablation).
    """

    c: int = 2
    wl_iterations: int = 3
    epsilon: float = 1e-6
    position_variant: str = "mwl"

    def __post_init__(self):
        if self.c < 0:
            raise ValueError("c must be nonnegative")
        if self.wl_iterations < 0:
            raise ValueError("wl_iterations must be nonnegative")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.position_variant not in ("mwl", "edit"):
            raise ValueError(f"unknown position variant {self.position_variant!r}")


@dataclass(frozen=True)
class SPEdge:
    """One shortest path, recorded as a comparable substructure."""

    u: int
    v: int
    length: int
    path_nodes: tuple[int, ...]
    path_label_ids: tuple[int, ...]


@dataclass(frozen=True)
class ShortestPathGraph:
    """A motif graph transformed into its shortest-path graph."""

    node_count: int
    node_label_ids: tuple[int, ...]
    sp_edges: tuple[SPEdge, ...]


@dataclass(frozen=True, eq=False)
class WLLabeling:
    """Refined labels and window-histogram embeddings for a path pair."""

    h_stop: int
    labels1: tuple[tuple[int, ...], ...]
    labels2: tuple[tuple[int, ...], ...]
    embeddings1: tuple[np.ndarray, ...]
    embeddings2: tuple[np.ndarray, ...]


@dataclass(frozen=True, eq=False)
class MahalanobisContext:
    """Pooled covariance (ridge-regularized) and its inverse."""

    covariance: np.ndarray
    inverse: np.ndarray
    dim: int


@dataclass(frozen=True)
class WLStats:
    """Per-evaluation refinement depth next to its allowed cap."""

    h_stop: int
    iteration_cap: int


# ---------------------------------------------------------------------------
# Shortest-path transformation
# ---------------------------------------------------------------------------


def floyd_transform(g: MotifGraph) -> ShortestPathGraph:
    """All-pairs shortest paths of a motif graph, unreachable pairs omitted.

    Distances come from the all-pairs dynamic program; the recorded path for
    each pair is canonical (every step back from ``v`` goes through the
    smallest-index neighbor one level closer to ``u``), so the output is
    deterministic.
    """
    g.validate()
    n = g.node_count
    dist = np.full((n, n), _UNREACHABLE, dtype=np.int64)
    np.fill_diagonal(dist, 0)
    adj = [[] for _ in range(n)]
    for u, v in g.edges:
        dist[u, v] = dist[v, u] = 1
        adj[u].append(v)
        adj[v].append(u)
    for nbrs in adj:
        nbrs.sort()
    for k in range(n):
        np.minimum(dist, dist[:, k, None] + dist[None, k, :], out=dist)

    edges = []
    for u in range(n):
        du = dist[u]
        for v in range(u + 1, n):
            if du[v] >= _UNREACHABLE:
                continue
            path = [v]
            w = v
            while w != u:
                w = next(x for x in adj[w] if du[x] == du[w] - 1)  # adj sorted
                path.append(w)
            path.reverse()
            edges.append(
                SPEdge(
                    u=u,
                    v=v,
                    length=int(du[v]),
                    path_nodes=tuple(path),
                    path_label_ids=tuple(g.label_ids[i] for i in path),
                )
            )
    return ShortestPathGraph(
        node_count=n, node_label_ids=tuple(g.label_ids), sp_edges=tuple(edges)
    )


# ---------------------------------------------------------------------------
# Length and position similarity
# ---------------------------------------------------------------------------


def length_sim(e1: SPEdge, e2: SPEdge, c: int) -> int:
    """max(0, c - |length difference|), exact integer arithmetic."""
    return max(0, c - abs(e1.length - e2.length))


def levenshtein(seq1, seq2) -> int:
    """Edit distance, rolling single-row dynamic program."""
    if len(seq1) < len(seq2):
        seq1, seq2 = seq2, seq1
    row = list(range(len(seq2) + 1))
    for i, a in enumerate(seq1, start=1):
        prev_diag = row[0]
        row[0] = i
        for j, b in enumerate(seq2, start=1):
            prev_diag, row[j] = row[j], min(
                row[j] + 1, row[j - 1] + 1, prev_diag + (a != b)
            )
    return row[-1]


def _refine_levels(seq1, seq2, h_max):
    """Shared-compression refinement levels for two label sequences."""
    cap = min(h_max, len(seq1) - 1, len(seq2) - 1)
    levels1 = [tuple(seq1)]
    levels2 = [tuple(seq2)]
    while len(levels1) - 1 < cap and set(levels1[-1]) & set(levels2[-1]):
        prev1, prev2 = levels1[-1], levels2[-1]

        def signatures(prev):
            last = len(prev) - 1
            return [
                (
                    prev[i],
                    tuple(sorted(prev[j] for j in (i - 1, i + 1) if 0 <= j <= last)),
                )
                for i in range(len(prev))
            ]

        sigs1 = signatures(prev1)
        sigs2 = signatures(prev2)
        table = {sig: i for i, sig in enumerate(sorted(set(sigs1) | set(sigs2)))}
        levels1.append(tuple(table[s] for s in sigs1))
        levels2.append(tuple(table[s] for s in sigs2))
    return levels1, levels2


def _window_histograms(labels, h, axis):
    n = len(labels)
    onehot = np.zeros((n, len(axis)), dtype=np.int64)
    onehot[np.arange(n), [axis[l] for l in labels]] = 1
    if h == 0:
        return onehot
    prefix = np.zeros((n + 1, len(axis)), dtype=np.int64)
    np.cumsum(onehot, axis=0, out=prefix[1:])
    positions = np.arange(n)
    lo = np.maximum(positions - h, 0)
    hi = np.minimum(positions + h + 1, n)
    return prefix[hi] - prefix[lo]


def wl_refine(e1: SPEdge, e2: SPEdge, h_max: int) -> WLLabeling:
    """Refine both paths' labels jointly and embed every node per iteration."""
    return _wl_refine(e1.path_label_ids, e2.path_label_ids, h_max)


def _wl_refine(seq1, seq2, h_max):
    levels1, levels2 = _refine_levels(seq1, seq2, h_max)
    emb1 = []
    emb2 = []
    for h, (l1, l2) in enumerate(zip(levels1, levels2)):
        axis = {lab: i for i, lab in enumerate(sorted(set(l1) | set(l2)))}
        emb1.append(_window_histograms(l1, h, axis))
        emb2.append(_window_histograms(l2, h, axis))
    return WLLabeling(
        h_stop=len(levels1) - 1,
        labels1=tuple(levels1),
        labels2=tuple(levels2),
        embeddings1=tuple(emb1),
        embeddings2=tuple(emb2),
    )


def mahalanobis_context(rows, epsilon) -> MahalanobisContext:
    """Population covariance of the rows, ridged with epsilon before inversion."""
    rows = np.asarray(rows, dtype=np.float64)
    centered = rows - rows.mean(axis=0)
    cov = centered.T @ centered / rows.shape[0]
    d = cov.shape[0]
    ridged = cov.copy()
    ridged.flat[:: d + 1] += epsilon
    return MahalanobisContext(covariance=cov, inverse=np.linalg.inv(ridged), dim=d)


def mahalanobis_distance(ctx: MahalanobisContext, x, y) -> float:
    diff = np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64)
    return float(np.sqrt(max(float(diff @ ctx.inverse @ diff), 0.0)))


def _position_from_labeling(wl: WLLabeling, epsilon) -> float:
    n1 = len(wl.labels1[0])
    n2 = len(wl.labels2[0])
    acc = np.zeros((n1, n2))
    for h, (x1, x2) in enumerate(zip(wl.embeddings1, wl.embeddings2)):
        ctx = mahalanobis_context(np.concatenate([x1, x2]), epsilon)
        inv = ctx.inverse
        if h == 0:
            # iteration-0 embeddings are one-hot, so the distance depends
            # only on the label pair: (e_a - e_b)' M (e_a - e_b)
            diag = np.diagonal(inv)
            by_label = diag[:, None] + diag[None, :] - inv - inv.T
            qf = by_label[np.ix_(x1.argmax(axis=1), x2.argmax(axis=1))]
        else:
            diff = x1[:, None, :] - x2[None, :, :]
            qf = np.einsum("ijk,kl,ijl->ij", diff, inv, diff)
        acc += np.sqrt(np.maximum(qf, 0.0))
    return float(np.exp(-0.5 * acc).sum())


def position_sim(e1: SPEdge, e2: SPEdge, h_max: int = 3, epsilon: float = 1e-6) -> float:
    """Positional similarity of two shortest paths; symmetric and positive."""
    wl = wl_refine(e1, e2, h_max)
    return _position_from_labeling(wl, epsilon)


def position_sim_edit_distance(e1: SPEdge, e2: SPEdge) -> float:
    """Ablation variant: 1 / (1 + edit distance of the label sequences)."""
    return 1.0 / (1.0 + levenshtein(e1.path_label_ids, e2.path_label_ids))


def edge_kernel(e1: SPEdge, e2: SPEdge, params: KernelParams) -> float:
    """Comparison score of two substructures; zero length similarity short-circuits."""
    sim1 = length_sim(e1, e2, params.c)
    if sim1 == 0:
        return 0.0
    if params.position_variant == "edit":
        sim2 = position_sim_edit_distance(e1, e2)
    else:
        sim2 = position_sim(e1, e2, params.wl_iterations, params.epsilon)
    return float(sim1) * sim2


# ---------------------------------------------------------------------------
# Graph-level kernel
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SPProfile:
    """Shortest-path edges of one graph, grouped by length and label sequence."""

    alphabet_size: int
    # length -> ((label sequence, multiplicity), ...), lengths ascending
    by_length: dict[int, tuple[tuple[tuple[int, ...], int], ...]]


class KernelEngine:
    """Pairwise kernel evaluator with per-run memoization.

    Position similarities depend only on the two label sequences, so equal
    sequences are grouped per graph and results are cached across pairs.
    For the default variant a sequence and its reverse are interchangeable
    and share a cache slot.  With ``collect_stats=True`` every distinct
    refinement records a :class:`WLStats` in ``self.stats``.
    """

    def __init__(self, params: KernelParams, collect_stats: bool = False):
        self.params = params
        self.stats: list[WLStats] | None = [] if collect_stats else None
        self._memo: dict = {}

    def profile(self, g: MotifGraph) -> SPProfile:
        mwl = self.params.position_variant == "mwl"
        counts = Counter()
        for e in floyd_transform(g).sp_edges:
            seq = e.path_label_ids
            if mwl:  # reversal does not change the position similarity
                seq = min(seq, seq[::-1])
            counts[(e.length, seq)] += 1
        by_length: dict[int, list] = {}
        for (length, seq), count in sorted(counts.items()):
            by_length.setdefault(length, []).append((seq, count))
        return SPProfile(
            alphabet_size=g.alphabet_size,
            by_length={length: tuple(groups) for length, groups in by_length.items()},
        )

    def graph_pair(self, p1: SPProfile, p2: SPProfile) -> float:
        if p1.alphabet_size != p2.alphabet_size:
            raise ValueError(
                "motif graphs drawn from different label alphabets "
                f"({p1.alphabet_size} vs {p2.alphabet_size})"
            )
        c = self.params.c
        total = 0.0
        for len1, groups1 in p1.by_length.items():
            for len2 in range(len1 - c + 1, len1 + c):
                groups2 = p2.by_length.get(len2)
                if groups2 is None:
                    continue
                sim1 = c - abs(len1 - len2)
                for seq1, count1 in groups1:
                    for seq2, count2 in groups2:
                        total += count1 * count2 * sim1 * self._position(seq1, seq2)
        return total

    def _position(self, seq1, seq2) -> float:
        # evaluate in key order so the cached value is a pure function of
        # the key, independent of which argument order arrives first
        key = (seq1, seq2) if seq1 <= seq2 else (seq2, seq1)
        value = self._memo.get(key)
        if value is None:
            if self.params.position_variant == "edit":
                value = 1.0 / (1.0 + levenshtein(key[0], key[1]))
            else:
                wl = _wl_refine(key[0], key[1], self.params.wl_iterations)
                if self.stats is not None:
                    self.stats.append(
                        WLStats(
                            h_stop=wl.h_stop,
                            iteration_cap=min(
                                self.params.wl_iterations, len(seq1) - 1, len(seq2) - 1
                            ),
                        )
                    )
                value = _position_from_labeling(wl, self.params.epsilon)
            self._memo[key] = value
        return value


def mwlsp_kernel(g1: MotifGraph, g2: MotifGraph, params: KernelParams) -> float:
    """Kernel score between two motif graphs from one shared alphabet."""
    engine = KernelEngine(params)
    return engine.graph_pair(engine.profile(g1), engine.profile(g2))
