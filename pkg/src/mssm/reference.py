"""Unoptimized scalar implementation of the motif-path kernel.

Everything here is written as plain nested loops over plain tuples, on
purpose: these functions are the independent check against which the
vectorized engine in :mod:`mssm.spkernel` is validated (see
``mssm selftest`` and the test suite).  Do not "optimize" this module or
share code with the engine; its value is that it is a second, boring
derivation of the same quantities.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "ref_shortest_paths",
    "ref_wl_sequences",
    "ref_window_histograms",
    "ref_position_sim",
    "ref_edit_position_sim",
    "ref_length_sim",
    "ref_edge_kernel",
    "ref_graph_kernel",
]


def ref_shortest_paths(node_count, edges, labels):
    """All-pairs shortest paths by the classic triple-loop dynamic program.

    Returns a list of ``(u, v, length, label_sequence)`` for every unordered
    pair ``u < v`` at finite distance.  The recorded path is canonical: each
    step back from ``v`` goes through the smallest-index neighbor that lies
    one level closer to ``u``.
    """
    n = node_count
    dist = [[math.inf] * n for _ in range(n)]
    adj = [[] for _ in range(n)]
    for i in range(n):
        dist[i][i] = 0
    for u, v in edges:
        dist[u][v] = dist[v][u] = 1
        adj[u].append(v)
        adj[v].append(u)
    for nbrs in adj:
        nbrs.sort()
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if dist[i][k] + dist[k][j] < dist[i][j]:
                    dist[i][j] = dist[i][k] + dist[k][j]

    out = []
    for u in range(n):
        for v in range(u + 1, n):
            if math.isinf(dist[u][v]):
                continue
            path = [v]
            w = v
            while w != u:
                w = min(x for x in adj[w] if dist[u][x] == dist[u][w] - 1)
                path.append(w)
            path.reverse()
            out.append((u, v, int(dist[u][v]), tuple(labels[i] for i in path)))
    return out


def ref_wl_sequences(seq1, seq2, h_max):
    """Iterative relabeling of two label sequences along their paths.

    Each sequence is treated as a path graph; a node's refined label is the
    pair (own label, sorted neighbor labels), compressed to a dense integer
    shared across both sequences.  Returns ``(levels, h_stop)`` where
    ``levels[h]`` is the pair of label lists at iteration ``h``.

    Refinement stops at the first iteration whose label sets are disjoint,
    and never exceeds ``min(h_max, len(seq1) - 1, len(seq2) - 1)``.
    """
    cap = min(h_max, len(seq1) - 1, len(seq2) - 1)
    levels = [(list(seq1), list(seq2))]
    h = 0
    while h < cap and set(levels[-1][0]) & set(levels[-1][1]):
        prev1, prev2 = levels[-1]

        def signatures(prev):
            sigs = []
            for i in range(len(prev)):
                nbrs = [prev[j] for j in (i - 1, i + 1) if 0 <= j < len(prev)]
                sigs.append((prev[i], tuple(sorted(nbrs))))
            return sigs

        sigs1 = signatures(prev1)
        sigs2 = signatures(prev2)
        table = {s: i for i, s in enumerate(sorted(set(sigs1) | set(sigs2)))}
        levels.append(([table[s] for s in sigs1], [table[s] for s in sigs2]))
        h += 1
    return levels, len(levels) - 1


def ref_window_histograms(labels1, labels2, h):
    """Per-node histograms of iteration-h labels over radius-h path windows."""
    axis = {lab: i for i, lab in enumerate(sorted(set(labels1) | set(labels2)))}

    def histograms(labels):
        rows = []
        for i in range(len(labels)):
            row = [0] * len(axis)
            for j in range(max(0, i - h), min(len(labels), i + h + 1)):
                row[axis[labels[j]]] += 1
            rows.append(row)
        return rows

    return histograms(labels1), histograms(labels2)


def ref_position_sim(seq1, seq2, h_max, epsilon):
    """Positional similarity of two label sequences.

    Sums, over all cross-sequence node pairs, exp(-1/2 * sum over iterations
    of the covariance-weighted distance between the nodes' window
    histograms).  The covariance is the population covariance of all
    histograms of both sequences at that iteration, ridge-regularized with
    ``epsilon`` before inversion.
    """
    levels, _ = ref_wl_sequences(seq1, seq2, h_max)
    n1, n2 = len(seq1), len(seq2)
    d_sum = [[0.0] * n2 for _ in range(n1)]
    for h, (l1, l2) in enumerate(levels):
        x1, x2 = ref_window_histograms(l1, l2, h)
        pooled = x1 + x2
        d = len(pooled[0])
        mean = [sum(row[a] for row in pooled) / len(pooled) for a in range(d)]
        cov = [
            [
                sum((row[a] - mean[a]) * (row[b] - mean[b]) for row in pooled)
                / len(pooled)
                for b in range(d)
            ]
            for a in range(d)
        ]
        ridged = np.array(cov) + epsilon * np.eye(d)
        inv = np.linalg.inv(ridged)
        for i in range(n1):
            for j in range(n2):
                diff = np.array(x1[i], dtype=float) - np.array(x2[j], dtype=float)
                qf = float(diff @ inv @ diff)
                d_sum[i][j] += math.sqrt(max(qf, 0.0))
    return sum(math.exp(-0.5 * d_sum[i][j]) for i in range(n1) for j in range(n2))


def ref_edit_position_sim(seq1, seq2):
    """1 / (1 + Levenshtein distance), full-matrix dynamic program."""
    n1, n2 = len(seq1), len(seq2)
    table = [[0] * (n2 + 1) for _ in range(n1 + 1)]
    for i in range(n1 + 1):
        table[i][0] = i
    for j in range(n2 + 1):
        table[0][j] = j
    for i in range(1, n1 + 1):
        for j in range(1, n2 + 1):
            cost = 0 if seq1[i - 1] == seq2[j - 1] else 1
            table[i][j] = min(
                table[i - 1][j] + 1,
                table[i][j - 1] + 1,
                table[i - 1][j - 1] + cost,
            )
    return 1.0 / (1.0 + table[n1][n2])


def ref_length_sim(length1, length2, c):
    return max(0, c - abs(length1 - length2))


def ref_edge_kernel(len1, seq1, len2, seq2, c, h_max, epsilon, variant="mwl"):
    sim1 = ref_length_sim(len1, len2, c)
    if variant == "edit":
        sim2 = ref_edit_position_sim(seq1, seq2)
    else:
        sim2 = ref_position_sim(seq1, seq2, h_max, epsilon)
    return sim1 * sim2


def ref_graph_kernel(graph1, graph2, c, h_max, epsilon, variant="mwl"):
    """Kernel between two labeled graphs given as (node_count, edges, labels).

    Quadruple loop over all shortest-path pairs, no caching, no
    short-circuiting: the literal sum of per-pair comparison scores.
    """
    n1, e1, lab1 = graph1
    n2, e2, lab2 = graph2
    paths1 = ref_shortest_paths(n1, e1, lab1)
    paths2 = ref_shortest_paths(n2, e2, lab2)
    total = 0.0
    for _, _, len1, seq1 in paths1:
        for _, _, len2, seq2 in paths2:
            total += ref_edge_kernel(len1, seq1, len2, seq2, c, h_max, epsilon, variant)
    return total
