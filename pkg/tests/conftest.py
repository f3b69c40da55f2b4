import random

import pytest

from mssm.motif import MotifGraph


def random_connected_motif_graph(rng, max_nodes=10, alphabet=3, uniform_labels=False):
    """Random spanning tree plus extra edges; labels drawn from a small alphabet."""
    n = rng.randint(2, max_nodes)
    edges = set()
    for i in range(1, n):
        parent = rng.randint(0, i - 1)
        edges.add((parent, i))
    for _ in range(rng.randint(0, n)):
        u, v = rng.sample(range(n), 2)
        edges.add((min(u, v), max(u, v)))
    if uniform_labels:
        labels = tuple(0 for _ in range(n))
    else:
        labels = tuple(rng.randint(0, alphabet - 1) for _ in range(n))
    return MotifGraph(label_ids=labels, edges=tuple(sorted(edges)), alphabet_size=alphabet)


def random_tree_motif_graph(rng, max_nodes=8, alphabet=3):
    """Random labeled tree: shortest paths are unique, so the kernel is
    exactly invariant under renumbering."""
    n = rng.randint(2, max_nodes)
    edges = set()
    for i in range(1, n):
        parent = rng.randint(0, i - 1)
        edges.add((parent, i))
    labels = tuple(rng.randint(0, alphabet - 1) for _ in range(n))
    return MotifGraph(label_ids=labels, edges=tuple(sorted(edges)), alphabet_size=alphabet)


def permute_motif_graph(g, perm):
    """Renumber nodes by perm (perm[i] = new index of node i), labels carried."""
    n = g.node_count
    labels = [0] * n
    for i, lab in enumerate(g.label_ids):
        labels[perm[i]] = lab
    edges = sorted(
        (min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in g.edges
    )
    return MotifGraph(
        label_ids=tuple(labels),
        edges=tuple(edges),
        alphabet_size=g.alphabet_size,
        source_molecule=g.source_molecule,
        class_label=g.class_label,
    )


@pytest.fixture
def rng():
    return random.Random(1234)


def write_tu_files(directory, indicator, edges, graph_labels, node_labels=None):
    """Write raw TU text files; `edges` are 1-based directed pairs as in the format."""
    directory.mkdir(parents=True, exist_ok=True)
    name = directory.name
    (directory / f"{name}_graph_indicator.txt").write_text(
        "\n".join(str(i) for i in indicator) + "\n"
    )
    (directory / f"{name}_A.txt").write_text(
        ("\n".join(f"{a}, {b}" for a, b in edges) + "\n") if edges else ""
    )
    (directory / f"{name}_graph_labels.txt").write_text(
        "\n".join(str(l) for l in graph_labels) + "\n"
    )
    if node_labels is not None:
        (directory / f"{name}_node_labels.txt").write_text(
            "\n".join(str(l) for l in node_labels) + "\n"
        )
    return directory
