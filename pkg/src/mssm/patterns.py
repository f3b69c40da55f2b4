"""Functional-group pattern tables and subgraph matching.

A pattern is a tiny connected labeled graph (star or edge shaped in the
defaults).  Matching is label-exact on atoms, optional on bonds (a pattern
without bond labels matches any bond), and monomorphic: the molecule may
contain extra bonds among the matched atoms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

__all__ = ["GroupPattern", "DEFAULT_PATTERN_TABLE", "load_pattern_table", "find_group_matches"]


@dataclass(frozen=True)
class GroupPattern:
    name: str
    atom_labels: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    bond_labels: tuple[str, ...] | None = None

    def validate(self):
        n = len(self.atom_labels)
        if n == 0:
            raise ValueError(f"pattern {self.name!r} has no atoms")
        adj = {i: set() for i in range(n)}
        for u, v in self.edges:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"pattern {self.name!r}: bad edge ({u},{v})")
            adj[u].add(v)
            adj[v].add(u)
        if self.bond_labels is not None and len(self.bond_labels) != len(self.edges):
            raise ValueError(f"pattern {self.name!r}: bond_labels not parallel to edges")
        # connectivity check; disconnected patterns make no sense as motifs
        if n > 1:
            seen = {0}
            stack = [0]
            while stack:
                for w in adj[stack.pop()]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != n:
                raise ValueError(f"pattern {self.name!r} is not connected")
        return self


# Star/edge patterns over element-symbol atom labels.  Hydroxyl and amine
# only fire on datasets with explicit hydrogens; heavy-atom-only datasets
# match carbonyl/nitro/carboxyl.  Datasets with numeric label alphabets need
# a user-supplied table.
DEFAULT_PATTERN_TABLE = (
    GroupPattern("carboxyl", ("C", "O", "O"), ((0, 1), (0, 2))),
    GroupPattern("nitro", ("N", "O", "O"), ((0, 1), (0, 2))),
    GroupPattern("carbonyl", ("C", "O"), ((0, 1),)),
    GroupPattern("hydroxyl", ("O", "H"), ((0, 1),)),
    GroupPattern("amine", ("N", "H"), ((0, 1),)),
)


def load_pattern_table(file_path):
    """Load a pattern table from a JSON list of pattern objects."""
    path = Path(file_path)
    payload = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(payload, list):
        raise ValueError(f"{path}: pattern table must be a JSON list")
    table = []
    for i, entry in enumerate(payload):
        if not isinstance(entry, dict):
            raise ValueError(f"{path}: pattern #{i} is not an object")
        try:
            pattern = GroupPattern(
                name=str(entry.get("name", f"pattern{i}")),
                atom_labels=tuple(str(s) for s in entry["atom_labels"]),
                edges=tuple((int(u), int(v)) for u, v in entry.get("edges", [])),
                bond_labels=(
                    tuple(str(s) for s in entry["bond_labels"])
                    if entry.get("bond_labels") is not None
                    else None
                ),
            )
        except KeyError as exc:
            raise ValueError(f"{path}: pattern #{i} missing field {exc}") from None
        table.append(pattern.validate())
    return tuple(table)


def find_group_matches(mol, table, atom_names, bond_names=None):
    """All maximal pattern matches in a molecule.

    Returns ``[(pattern_index, frozenset_of_mol_nodes), ...]`` sorted by
    pattern index then node set.  A match whose node set is strictly
    contained in another match is dropped; of two matches with the same node
    set the earlier pattern wins.
    """
    matches = []
    for pi, pattern in enumerate(table):
        for nodes in _pattern_embeddings(mol, pattern, atom_names, bond_names):
            matches.append((pi, nodes))

    matches.sort(key=lambda m: (m[0], sorted(m[1])))
    kept = []
    seen_sets = set()
    for pi, nodes in matches:
        if nodes in seen_sets:
            continue
        if any(nodes < other for _, other in matches):
            continue
        seen_sets.add(nodes)
        kept.append((pi, nodes))
    return kept


def _pattern_embeddings(mol, pattern, atom_names, bond_names):
    """Distinct node sets of monomorphic embeddings of a pattern."""
    n = mol.node_count
    adj = {i: {} for i in range(n)}  # neighbor -> bond label string or None
    for ei, (u, v) in enumerate(mol.edges):
        lab = None
        if mol.bond_labels is not None and bond_names is not None:
            lab = bond_names[mol.bond_labels[ei]]
        adj[u][v] = lab
        adj[v][u] = lab

    p_n = len(pattern.atom_labels)
    p_adj = {i: {} for i in range(p_n)}
    for ei, (u, v) in enumerate(pattern.edges):
        lab = None if pattern.bond_labels is None else pattern.bond_labels[ei]
        p_adj[u][v] = lab
        p_adj[v][u] = lab

    results = set()
    assignment = [None] * p_n

    def atom_ok(p_node, m_node):
        return atom_names[mol.atom_labels[m_node]] == pattern.atom_labels[p_node]

    def bonds_ok(p_node, m_node):
        for p_nbr, p_lab in p_adj[p_node].items():
            m_nbr = assignment[p_nbr]
            if m_nbr is None:
                continue
            if m_nbr not in adj[m_node]:
                return False
            if p_lab is not None and adj[m_node][m_nbr] != p_lab:
                return False
        return True

    def extend(p_node):
        if p_node == p_n:
            results.add(frozenset(assignment))
            return
        for m_node in range(n):
            if m_node in assignment:
                continue
            if atom_ok(p_node, m_node) and bonds_ok(p_node, m_node):
                assignment[p_node] = m_node
                extend(p_node + 1)
                assignment[p_node] = None

    extend(0)
    return sorted(results, key=sorted)
