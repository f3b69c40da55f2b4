"""Built-in oracle checks, runnable as ``mssm selftest``.

Each check recomputes a quantity two independent ways (engine vs the scalar
derivation in :mod:`mssm.reference`, or vs a hand-derived closed form) and
compares.  Kept cheap: the full property suite lives in the tests.
"""

from __future__ import annotations

import math
import random
from collections import deque

import numpy as np

from . import reference as ref
from .fixtures import tiny_dataset
from .motif import MotifGraph, motif_graphs_for_dataset
from .simgraph import KernelMatrix, quantize_scores
from .spkernel import KernelParams, floyd_transform, mwlsp_kernel
from .evaluate import knn_classify

__all__ = ["run_selftest"]


def _random_connected_graph(rng, max_nodes=10):
    n = rng.randint(2, max_nodes)
    edges = {(rng.randint(0, i - 1), i) for i in range(1, n)}  # random spanning tree
    for _ in range(rng.randint(0, n)):
        u, v = rng.sample(range(n), 2)
        edges.add((min(u, v), max(u, v)))
    labels = tuple(rng.randint(0, 2) for _ in range(n))
    return MotifGraph(label_ids=labels, edges=tuple(sorted(edges)), alphabet_size=3)


def _bfs_distances(n, edges, source):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _check_floyd_against_bfs(rng):
    for _ in range(25):
        g = _random_connected_graph(rng)
        sp = {(e.u, e.v): e.length for e in floyd_transform(g).sp_edges}
        for source in range(g.node_count):
            for target, d in _bfs_distances(g.node_count, g.edges, source).items():
                if source < target and sp[(source, target)] != d:
                    return False
    return True


def _check_engine_against_reference(rng):
    params = KernelParams(c=2, wl_iterations=2)
    for _ in range(6):
        g1 = _random_connected_graph(rng, max_nodes=6)
        g2 = _random_connected_graph(rng, max_nodes=6)
        got = mwlsp_kernel(g1, g2, params)
        want = ref.ref_graph_kernel(
            (g1.node_count, g1.edges, g1.label_ids),
            (g2.node_count, g2.edges, g2.label_ids),
            params.c, params.wl_iterations, params.epsilon,
        )
        if abs(got - want) > 1e-9 * max(1.0, abs(want)):
            return False
    return True


def _check_two_node_closed_form():
    eps = 1e-6
    want = 2.0 + 2.0 * math.exp(-1.0 / math.sqrt(1.0 + 2.0 * eps))
    got = ref.ref_position_sim((0, 1), (0, 1), 1, eps)
    return abs(got - want) <= 1e-9 * want


def _check_quantization():
    k = np.array(
        [
            [9.0, 5.0, 0.0],
            [5.0, 9.0, 2.0],
            [0.0, 2.0, 9.0],
        ]
    )
    weights = quantize_scores(KernelMatrix(entries=k))
    # m = 5: 5 -> 3, 2 -> floor(1.2) = 1, 0 -> 0, diagonal forced to 0
    expected = np.array([[0, 3, 0], [3, 0, 1], [0, 1, 0]])
    return (weights == expected).all()


def _check_knn_votes():
    sim = np.array(
        [
            [0.0, 0.9, 0.8, 0.1, 0.0, 0.0],
            [0.9, 0.0, 0.7, 0.2, 0.0, 0.0],
            [0.8, 0.7, 0.0, 0.3, 0.0, 0.0],
            [0.1, 0.2, 0.3, 0.0, 0.6, 0.5],
            [0.0, 0.0, 0.0, 0.6, 0.0, 0.4],
            [0.0, 0.0, 0.0, 0.5, 0.4, 0.0],
        ]
    )
    labels = [0, 0, 0, 1, 1, 1]
    # item 0's top-3 among 1..5 is {1, 2, 3} -> votes {0, 0, 1} -> class 0
    # item 3's top-3 among 0,1,2,4,5 is {4, 5, 2} -> votes {1, 1, 0} -> class 1
    return knn_classify(sim, labels, [0], 3) == [0] and knn_classify(sim, labels, [3], 3) == [1]


def _check_pipeline_smoke():
    dataset = tiny_dataset()
    _, graphs = motif_graphs_for_dataset(dataset)
    params = KernelParams()
    value = mwlsp_kernel(graphs[0], graphs[2], params)
    return value >= 0.0 and mwlsp_kernel(graphs[1], graphs[1], params) == 0.0


def run_selftest(out=print) -> bool:
    rng = random.Random(20240)
    checks = [
        ("shortest-path distances match per-source breadth-first search", lambda: _check_floyd_against_bfs(rng)),
        ("engine kernel matches scalar reference on random graph pairs", lambda: _check_engine_against_reference(rng)),
        ("two-node position similarity matches closed form", _check_two_node_closed_form),
        ("score quantization table", _check_quantization),
        ("knn vote rule on hand-built similarities", _check_knn_votes),
        ("tiny-dataset pipeline smoke", _check_pipeline_smoke),
    ]
    all_ok = True
    for name, check in checks:
        ok = check()
        all_ok &= ok
        out(f"{'ok' if ok else 'FAIL'} - {name}")
    return all_ok
