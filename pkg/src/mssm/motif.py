"""Motif extraction and motif-graph re-representation of molecules.

A molecule is decomposed into overlapping motifs of four kinds:

* ``Ring`` — the cycles of a minimum cycle basis (one shortest cycle per
  non-tree edge, kept when independent over GF(2));
* ``FunctionalGroup`` — maximal matches of a configurable pattern table;
* ``Bond`` — every edge not inside any ring or group match;
* ``Atom`` — isolated nodes, so coverage is total.

Each motif carries a canonical label built from its kind, size and the
sorted label/degree profile of its induced subgraph, which is invariant
under renumbering of the parent graph.  Motif labels over a whole dataset
are interned into a dense alphabet, and every molecule is re-represented as
a graph whose nodes are its motifs and whose edges join motifs that share
an atom or are joined by a bond.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum

from .molio import GraphDataset, MolecularGraph
from .patterns import find_group_matches

__all__ = [
    "MotifKind",
    "Motif",
    "MotifDictionary",
    "MotifGraph",
    "extract_motifs",
    "canonical_label",
    "build_motif_dictionary",
    "build_motif_graph",
    "motif_graphs_for_dataset",
    "minimum_cycle_basis",
]

log = logging.getLogger(__name__)


class MotifKind(str, Enum):
    RING = "Ring"
    BOND = "Bond"
    FUNCTIONAL_GROUP = "FunctionalGroup"
    ATOM = "Atom"


@dataclass(frozen=True)
class Motif:
    """A subgraph of one molecule: node set, kind, canonical label."""

    node_indices: frozenset[int]
    kind: MotifKind
    canonical_label: str


@dataclass(frozen=True)
class MotifDictionary:
    """Per-molecule motif labels plus the dataset-wide label alphabet.

    ``per_molecule[i][kind]`` lists the canonical labels of molecule ``i``'s
    motifs of that kind, in extraction order, duplicates kept.  Alphabet ids
    are dense and assigned in first-seen order over molecules.
    """

    per_molecule: tuple[dict[MotifKind, tuple[str, ...]], ...]
    label_alphabet: dict[str, int]


@dataclass(frozen=True)
class MotifGraph:
    """A molecule re-represented with one node per motif."""

    label_ids: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    alphabet_size: int
    motifs: tuple[Motif, ...] = ()
    source_molecule: int = 0
    class_label: int | None = None

    @property
    def node_count(self):
        return len(self.label_ids)

    def validate(self):
        n = self.node_count
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at motif node {u}")
            if not (0 <= u < v < n):
                raise ValueError(f"motif edge ({u},{v}) out of range")
            if (u, v) in seen:
                raise ValueError(f"duplicate motif edge ({u},{v})")
            seen.add((u, v))
        if any(not 0 <= i < self.alphabet_size for i in self.label_ids):
            raise ValueError("motif label id outside alphabet")
        return self


# ---------------------------------------------------------------------------
# Cycle basis
# ---------------------------------------------------------------------------


def _adjacency(node_count, edges):
    adj = [[] for _ in range(node_count)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    for nbrs in adj:
        nbrs.sort()
    return adj


def _bfs_dist(adj, source, skip_edge=None):
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if skip_edge is not None and {u, w} == set(skip_edge):
                continue
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _canonical_path(adj, dist, source, target, skip_edge=None):
    """Walk back from target through smallest-index nodes one level closer."""
    path = [target]
    w = target
    while w != source:
        w = min(
            x
            for x in adj[w]
            if dist.get(x) == dist[w] - 1
            and (skip_edge is None or {x, w} != set(skip_edge))
        )
        path.append(w)
    path.reverse()
    return path


def _canonical_cycle(nodes):
    """Rotate/reflect a cycle node sequence to a canonical tuple."""
    k = len(nodes)
    start = nodes.index(min(nodes))
    forward = tuple(nodes[(start + i) % k] for i in range(k))
    backward = tuple(nodes[(start - i) % k] for i in range(k))
    return min(forward, backward)


def minimum_cycle_basis(node_count, edges):
    """Cycle basis with one shortest cycle per non-tree edge.

    For each non-tree edge of a BFS spanning forest, the shortest cycle
    through it is computed (smallest-index tie-breaks throughout); cycles are
    then accepted greedily, shortest first, when independent over GF(2).  In
    the rare case the candidates do not span the cycle space, fundamental
    cycles complete the basis and any chorded cycle among them is split
    along its chords.  Returns canonical node tuples sorted by (length,
    nodes).
    """
    adj = _adjacency(node_count, edges)
    edge_index = {tuple(sorted(e)): i for i, e in enumerate(edges)}

    tree_edges = set()
    visited = set()
    tree_parent = {}
    for root in range(node_count):
        if root in visited:
            continue
        visited.add(root)
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in visited:
                    visited.add(w)
                    tree_parent[w] = u
                    tree_edges.add(tuple(sorted((u, w))))
                    queue.append(w)

    non_tree = sorted(e for e in edge_index if e not in tree_edges)
    rank_target = len(non_tree)
    if rank_target == 0:
        return []

    def cycle_mask(cycle):
        mask = 0
        k = len(cycle)
        for i in range(k):
            mask |= 1 << edge_index[tuple(sorted((cycle[i], cycle[(i + 1) % k])))]
        return mask

    candidates = []
    for u, v in non_tree:
        dist = _bfs_dist(adj, u, skip_edge=(u, v))
        if v not in dist:  # bridge edge cannot happen for a non-tree edge
            continue
        path = _canonical_path(adj, dist, u, v, skip_edge=(u, v))
        candidates.append(_canonical_cycle(path))

    def fundamental_cycles():
        cycles = []
        for u, v in non_tree:
            up, vp = [u], [v]
            while tree_parent.get(up[-1]) is not None:
                up.append(tree_parent[up[-1]])
            while tree_parent.get(vp[-1]) is not None:
                vp.append(tree_parent[vp[-1]])
            common = (set(up) & set(vp))
            meet = next(x for x in up if x in common)
            cyc = up[: up.index(meet) + 1] + list(reversed(vp[: vp.index(meet)]))
            cycles.append(_canonical_cycle(cyc))
        return cycles

    basis = []
    pivots = []  # (pivot bit, mask) rows of the GF(2) elimination

    def try_add(cycle):
        mask = cycle_mask(cycle)
        for pivot, row in pivots:
            if mask & pivot:
                mask ^= row
        if mask:
            pivots.append((mask & -mask, mask))
            basis.append(cycle)

    for cycle in sorted(candidates, key=lambda c: (len(c), c)):
        if len(basis) == rank_target:
            break
        try_add(cycle)

    if len(basis) < rank_target:
        log.info("shortest-cycle candidates rank deficient; completing with fundamental cycles")
        for cycle in sorted(fundamental_cycles(), key=lambda c: (len(c), c)):
            if len(basis) == rank_target:
                break
            try_add(cycle)

    full_edges = {tuple(sorted(e)) for e in edges}
    chordless = []
    for cycle in basis:
        chordless.extend(_split_chords(cycle, full_edges))
    return sorted(set(chordless), key=lambda c: (len(c), c))


def _split_chords(cycle, edge_set):
    """Split a cycle along chords until every piece is chordless."""
    k = len(cycle)
    if k == 3:
        return [cycle]
    for i in range(k):
        for j in range(i + 2, k):
            if i == 0 and j == k - 1:
                continue
            if tuple(sorted((cycle[i], cycle[j]))) in edge_set:
                first = cycle[i : j + 1]
                second = cycle[j:] + cycle[: i + 1]
                return _split_chords(_canonical_cycle(list(first)), edge_set) + _split_chords(
                    _canonical_cycle(list(second)), edge_set
                )
    return [cycle]


# ---------------------------------------------------------------------------
# Motif extraction
# ---------------------------------------------------------------------------


def _induced_edges(mol, nodes):
    return [e for e in mol.edges if e[0] in nodes and e[1] in nodes]


def _label(kind, nodes, mol, atom_names):
    node_list = sorted(nodes)
    induced = _induced_edges(mol, set(node_list))
    degree = {i: 0 for i in node_list}
    for u, v in induced:
        degree[u] += 1
        degree[v] += 1
    names = sorted(
        str(mol.atom_labels[i]) if atom_names is None else atom_names[mol.atom_labels[i]]
        for i in node_list
    )
    degrees = sorted(degree.values())
    return "|".join(
        [
            kind.value,
            str(len(node_list)),
            str(len(induced)),
            ",".join(names),
            ",".join(str(d) for d in degrees),
        ]
    )


def canonical_label(motif, parent, atom_names=None):
    """Recompute a motif's canonical label from its parent molecule.

    The label is the kind tag, node count, induced edge count, sorted atom
    label multiset and sorted induced degree sequence, "|"-joined; it does
    not depend on how the parent's nodes are numbered.
    """
    return _label(motif.kind, motif.node_indices, parent, atom_names)


def extract_motifs(mol, patterns=(), atom_names=None, bond_names=None):
    """Decompose a molecule into ring/group/bond/atom motifs.

    Every edge of the molecule ends up inside at least one motif and every
    node in at least one motif.  Extraction order (rings, groups, bonds,
    atoms, each sorted) is deterministic and defines dictionary id order.
    """
    mol.validate()
    motifs = []

    rings = minimum_cycle_basis(mol.node_count, mol.edges)
    covered = set()
    for cycle in rings:
        nodes = frozenset(cycle)
        covered.update(_induced_edges(mol, nodes))
        motifs.append(Motif(nodes, MotifKind.RING, _label(MotifKind.RING, nodes, mol, atom_names)))

    for _, nodes in find_group_matches(mol, patterns, _resolved_names(mol, atom_names), bond_names):
        covered.update(_induced_edges(mol, nodes))
        motifs.append(
            Motif(nodes, MotifKind.FUNCTIONAL_GROUP, _label(MotifKind.FUNCTIONAL_GROUP, nodes, mol, atom_names))
        )

    for edge in mol.edges:
        if edge not in covered:
            nodes = frozenset(edge)
            motifs.append(Motif(nodes, MotifKind.BOND, _label(MotifKind.BOND, nodes, mol, atom_names)))

    in_motif = set().union(*(m.node_indices for m in motifs)) if motifs else set()
    for i in range(mol.node_count):
        if i not in in_motif:
            nodes = frozenset([i])
            motifs.append(Motif(nodes, MotifKind.ATOM, _label(MotifKind.ATOM, nodes, mol, atom_names)))
    return motifs


def _resolved_names(mol, atom_names):
    if atom_names is not None:
        return atom_names
    return [str(i) for i in range(max(mol.atom_labels) + 1)]


# ---------------------------------------------------------------------------
# Dictionary and motif graph
# ---------------------------------------------------------------------------


def build_motif_dictionary(dataset: GraphDataset, patterns=()):
    """Extract motifs for every molecule and intern their labels.

    Alphabet ids are assigned in first-seen order scanning molecules in
    dataset order and motifs in extraction order, so two runs over the same
    dataset produce identical dictionaries.
    """
    atom_names = dataset.atom_names()
    bond_names = dataset.bond_names() or None
    per_molecule = []
    alphabet = {}
    label_kinds = {}
    for mol in dataset.graphs:
        by_kind = {}
        for motif in extract_motifs(mol, patterns, atom_names, bond_names):
            by_kind.setdefault(motif.kind, []).append(motif.canonical_label)
            if motif.canonical_label not in alphabet:
                alphabet[motif.canonical_label] = len(alphabet)
                label_kinds[motif.canonical_label] = motif.kind
            elif label_kinds[motif.canonical_label] != motif.kind:
                log.debug(
                    "canonical label collision across kinds: %s", motif.canonical_label
                )
        per_molecule.append({k: tuple(v) for k, v in by_kind.items()})
    return MotifDictionary(per_molecule=tuple(per_molecule), label_alphabet=alphabet)


def build_motif_graph(mol, dictionary, patterns=(), atom_names=None, bond_names=None,
                      molecule_index=0):
    """Re-represent one molecule as a graph over its motifs.

    Two motifs are adjacent when they share an atom, or when a bond that
    lies inside no motif joins an atom of one to an atom of the other.  A
    bond that is itself a motif (or sits inside one) links its neighbors
    through that motif node rather than by a shortcut edge, so a bridged
    ring pair comes out as a ring-bond-ring path.  Raises ``ValueError``
    when a motif label is missing from the dictionary alphabet (molecule
    not from the dictionary's dataset).
    """
    motifs = extract_motifs(mol, patterns, atom_names, bond_names)
    label_ids = []
    for motif in motifs:
        if motif.canonical_label not in dictionary.label_alphabet:
            raise ValueError(
                f"motif label {motif.canonical_label!r} missing from dictionary alphabet"
            )
        label_ids.append(dictionary.label_alphabet[motif.canonical_label])

    motifs_of_node = [[] for _ in range(mol.node_count)]
    for mi, motif in enumerate(motifs):
        for node in motif.node_indices:
            motifs_of_node[node].append(mi)

    edges = set()
    for groups in motifs_of_node:  # shared atom
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                edges.add((groups[a], groups[b]))
    for u, v in mol.edges:
        # connecting bond; vacuous while extraction covers every edge,
        # kept so connectivity survives a partial-coverage extraction
        covered = any(
            u in motifs[mi].node_indices and v in motifs[mi].node_indices
            for mi in motifs_of_node[u]
        )
        if covered:
            continue
        for a in motifs_of_node[u]:
            for b in motifs_of_node[v]:
                if a != b:
                    edges.add((min(a, b), max(a, b)))

    return MotifGraph(
        label_ids=tuple(label_ids),
        edges=tuple(sorted(edges)),
        alphabet_size=len(dictionary.label_alphabet),
        motifs=tuple(motifs),
        source_molecule=molecule_index,
        class_label=mol.class_label,
    ).validate()


def motif_graphs_for_dataset(dataset: GraphDataset, patterns=()):
    """Dictionary plus one motif graph per molecule, in dataset order."""
    dictionary = build_motif_dictionary(dataset, patterns)
    atom_names = dataset.atom_names()
    bond_names = dataset.bond_names() or None
    graphs = [
        build_motif_graph(mol, dictionary, patterns, atom_names, bond_names, i)
        for i, mol in enumerate(dataset.graphs)
    ]
    return dictionary, graphs
