"""Dataset-level similarity: Gram matrix, score quantization, MSSM graph.

The Gram matrix holds the pairwise kernel of all motif graphs.  Scores are
quantized to integer weights 0..3 against the dataset's maximum off-diagonal
score, and pairs with positive weight become edges of the MSSM graph, whose
nodes are the molecules themselves.
"""

from __future__ import annotations

import os
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .molio import canonical_json
from .motif import MotifGraph
from .spkernel import KernelEngine, KernelParams

__all__ = [
    "KernelMatrix",
    "MSSMNode",
    "MSSMEdge",
    "MSSMGraph",
    "CATEGORY_BY_WEIGHT",
    "compute_kernel_matrix",
    "quantize_scores",
    "build_mssm_graph",
    "export_mssm",
    "load_mssm_json",
    "save_gram",
    "load_gram",
    "GRAM_MAGIC",
]

GRAM_MAGIC = b"MSSMGRAM"

CATEGORY_BY_WEIGHT = {1: "Average", 2: "RelativelyHigh", 3: "VeryHigh"}


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """Symmetric nonnegative matrix of pairwise kernel scores."""

    entries: np.ndarray

    @property
    def n(self):
        return self.entries.shape[0]

    def validate(self):
        k = self.entries
        if k.ndim != 2 or k.shape[0] != k.shape[1]:
            raise ValueError("kernel matrix must be square")
        if (k < 0).any():
            raise ValueError("kernel matrix has negative entries")
        scale = max(float(np.abs(k).max()), 1.0)
        if float(np.abs(k - k.T).max()) > 1e-9 * scale:
            raise ValueError("kernel matrix is not symmetric")
        return self


def _pair_rows(profiles, engine, indices):
    rows = []
    for i in indices:
        rows.append((i, [engine.graph_pair(profiles[i], profiles[j]) for j in range(i, len(profiles))]))
    return rows


_WORKER = {}


def _worker_init(profiles, params):
    _WORKER["profiles"] = profiles
    _WORKER["engine"] = KernelEngine(params)


def _worker_rows(indices):
    return _pair_rows(_WORKER["profiles"], _WORKER["engine"], indices)


def compute_kernel_matrix(motif_graphs, params: KernelParams | None = None,
                          threads: int = 1, engine: KernelEngine | None = None) -> KernelMatrix:
    """Gram matrix of the kernel over a list of motif graphs.

    Each unordered pair is evaluated once and mirrored, so the result is
    exactly symmetric and independent of the worker count.  Pass an
    ``engine`` (serial only) to reuse its cache or collect refinement stats.
    """
    if engine is None:
        if params is None:
            raise ValueError("either params or an engine is required")
        engine = KernelEngine(params)
    elif threads not in (0, 1):
        raise ValueError("a shared engine implies serial computation")
    params = engine.params

    sizes = {g.alphabet_size for g in motif_graphs}
    if len(sizes) > 1:
        raise ValueError(f"motif graphs drawn from different label alphabets: {sorted(sizes)}")

    profiles = [engine.profile(g) for g in motif_graphs]
    n = len(profiles)
    matrix = np.zeros((n, n))

    workers = os.cpu_count() or 1 if threads == 0 else threads
    if workers > 1 and n > 1:
        chunks = [list(range(w, n, workers)) for w in range(workers)]
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_worker_init, initargs=(profiles, params)
        ) as pool:
            row_sets = pool.map(_worker_rows, chunks)
        for rows in row_sets:
            for i, row in rows:
                matrix[i, i:] = row
    else:
        for i, row in _pair_rows(profiles, engine, range(n)):
            matrix[i, i:] = row

    upper = np.triu(matrix, 1)
    matrix = upper + upper.T + np.diag(np.diag(matrix))
    return KernelMatrix(entries=matrix).validate()


def quantize_scores(matrix: KernelMatrix) -> np.ndarray:
    """Integer weights floor(3 * score / max off-diagonal score), diagonal 0."""
    matrix.validate()
    k = matrix.entries
    n = matrix.n
    off_diag = ~np.eye(n, dtype=bool)
    m = float(k[off_diag].max()) if n > 1 else 0.0
    if m == 0.0:
        return np.zeros((n, n), dtype=np.int64)
    # dividing first keeps the maximizing pair exactly at ratio 1.0
    weights = np.floor(3.0 * (k / m)).astype(np.int64)
    weights[np.eye(n, dtype=bool)] = 0
    return weights


@dataclass(frozen=True)
class MSSMNode:
    molecule_index: int
    class_label: int | None
    motif_graph: MotifGraph | None = None


@dataclass(frozen=True)
class MSSMEdge:
    u: int
    v: int
    weight: int
    category: str


@dataclass(frozen=True)
class MSSMGraph:
    nodes: tuple[MSSMNode, ...]
    edges: tuple[MSSMEdge, ...]


def build_mssm_graph(weights: np.ndarray, motif_graphs) -> MSSMGraph:
    """Similarity graph over molecules from an integer weight matrix."""
    weights = np.asarray(weights)
    n = weights.shape[0]
    if weights.shape != (n, n) or (weights != weights.T).any():
        raise ValueError("weight matrix must be square and symmetric")
    if np.diag(weights).any():
        raise ValueError("weight matrix must have a zero diagonal")
    if weights.min() < 0 or weights.max() > 3:
        raise ValueError("weights must lie in 0..3")
    if len(motif_graphs) != n:
        raise ValueError("weight matrix size does not match molecule count")

    nodes = tuple(
        MSSMNode(molecule_index=i, class_label=g.class_label, motif_graph=g)
        for i, g in enumerate(motif_graphs)
    )
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            w = int(weights[i, j])
            if w > 0:
                edges.append(MSSMEdge(u=i, v=j, weight=w, category=CATEGORY_BY_WEIGHT[w]))
    return MSSMGraph(nodes=nodes, edges=tuple(edges))


def mssm_to_json_dict(graph: MSSMGraph) -> dict:
    return {
        "nodes": [
            {"id": node.molecule_index, "class": node.class_label}
            for node in graph.nodes
        ],
        "edges": [
            {"u": e.u, "v": e.v, "weight": e.weight, "category": e.category}
            for e in graph.edges
        ],
    }


def export_mssm(graph: MSSMGraph, fmt: str, path) -> None:
    """Write the similarity graph as JSON or TSV (one edge per line)."""
    path = Path(path)
    if fmt == "json":
        path.write_text(canonical_json(mssm_to_json_dict(graph)), encoding="utf-8")
    elif fmt == "tsv":
        lines = ["# mssm v1"]
        lines.extend(f"{e.u}\t{e.v}\t{e.weight}" for e in graph.edges)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        raise ValueError(f"unknown export format {fmt!r}")


def load_mssm_json(path) -> MSSMGraph:
    """Re-import an exported similarity graph (motif graph payloads are not restored)."""
    import json

    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    nodes = tuple(
        MSSMNode(molecule_index=int(n["id"]), class_label=n["class"])
        for n in payload["nodes"]
    )
    edges = tuple(
        MSSMEdge(u=int(e["u"]), v=int(e["v"]), weight=int(e["weight"]), category=str(e["category"]))
        for e in payload["edges"]
    )
    return MSSMGraph(nodes=nodes, edges=edges)


def save_gram(matrix: KernelMatrix, path) -> None:
    """Cache a Gram matrix: 8-byte magic, uint64 size, row-major float64."""
    payload = GRAM_MAGIC + struct.pack("<Q", matrix.n)
    payload += np.ascontiguousarray(matrix.entries, dtype=np.float64).tobytes()
    Path(path).write_bytes(payload)


def load_gram(path) -> KernelMatrix:
    raw = Path(path).read_bytes()
    if len(raw) < 16 or raw[:8] != GRAM_MAGIC:
        raise ValueError(f"{path}: not a Gram cache file (bad magic)")
    (n,) = struct.unpack("<Q", raw[8:16])
    expected = 16 + 8 * n * n
    if len(raw) != expected:
        raise ValueError(f"{path}: truncated Gram cache ({len(raw)} bytes, expected {expected})")
    entries = np.frombuffer(raw[16:], dtype=np.float64).reshape(n, n).copy()
    return KernelMatrix(entries=entries).validate()
