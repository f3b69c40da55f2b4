#!/usr/bin/env python3
"""Walk through the motif re-representation of a few small molecules.

Molecules are decomposed into ring / functional-group / bond / atom motifs,
motif labels are interned into a dataset-wide alphabet, and each molecule
becomes a graph whose nodes are its motifs.
"""

from mssm import (
    DEFAULT_PATTERN_TABLE,
    build_motif_dictionary,
    dataset_from_records,
    motif_graphs_for_dataset,
)

# benzene-like ring with a carboxyl tail, an ether chain, and a two-ring compound
records = [
    (
        ["C", "C", "C", "C", "C", "C", "C", "O", "O"],
        [[0, 1], [1, 2], [2, 3], [3, 4], [4, 5], [0, 5], [0, 6], [6, 7], [6, 8]],
        None,
        1,
        "ring+carboxyl",
    ),
    (["C", "O", "C", "C"], [[0, 1], [1, 2], [2, 3]], None, 0, "ether chain"),
    (
        ["C", "C", "C", "C", "C", "C"],
        [[0, 1], [0, 2], [1, 2], [2, 3], [3, 4], [3, 5], [4, 5]],
        None,
        0,
        "two rings, bridged",
    ),
]

dataset = dataset_from_records(records)
print(f"dataset: {len(dataset)} molecules, atom alphabet {list(dataset.atom_label_alphabet)}")

dictionary = build_motif_dictionary(dataset, DEFAULT_PATTERN_TABLE)
print(f"\nmotif label alphabet ({len(dictionary.label_alphabet)} entries):")
for label, label_id in dictionary.label_alphabet.items():
    print(f"  [{label_id}] {label}")

print("\nper-molecule motif inventory:")
for i, by_kind in enumerate(dictionary.per_molecule):
    print(f"  molecule {i}:")
    for kind, labels in by_kind.items():
        print(f"    {kind.value}: {len(labels)} motif(s)")

_, motif_graphs = motif_graphs_for_dataset(dataset, DEFAULT_PATTERN_TABLE)
print("\nmotif graphs (one node per motif, edges join motifs sharing atoms):")
for g in motif_graphs:
    print(f"  molecule {g.source_molecule}: {g.node_count} motif nodes, edges {list(g.edges)}")
    for i, motif in enumerate(g.motifs):
        print(f"    node {i}: {motif.kind.value:>15} atoms {sorted(motif.node_indices)}")

print("\nNote the bridged pair: its motif graph is a ring-bond-ring path, the")
print("bridge bond links the rings through its own motif node.")
