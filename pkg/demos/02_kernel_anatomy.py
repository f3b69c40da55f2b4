#!/usr/bin/env python3
"""Dissect one kernel evaluation between two motif graphs.

Shows the shortest-path transform, the per-pair length and position
similarities, and how the graph kernel sums them; then compares the
refinement-based position similarity with the edit-distance ablation.
"""

from mssm import (
    KernelParams,
    MotifGraph,
    edge_kernel,
    floyd_transform,
    length_sim,
    mwlsp_kernel,
    position_sim,
    position_sim_edit_distance,
    wl_refine,
)

# two small motif graphs over a shared 3-label alphabet
g1 = MotifGraph(label_ids=(0, 1, 2, 1), edges=((0, 1), (1, 2), (2, 3)), alphabet_size=3)
g2 = MotifGraph(label_ids=(0, 1, 2), edges=((0, 1), (1, 2)), alphabet_size=3)

print("motif graph 1: labels", g1.label_ids, "edges", g1.edges)
print("motif graph 2: labels", g2.label_ids, "edges", g2.edges)

sp1 = floyd_transform(g1)
sp2 = floyd_transform(g2)
print(f"\nshortest-path substructures ({len(sp1.sp_edges)} vs {len(sp2.sp_edges)}):")
for e in sp1.sp_edges:
    print(f"  g1 ({e.u},{e.v}) length {e.length} label sequence {e.path_label_ids}")

params = KernelParams(c=2, wl_iterations=3)
e1 = sp1.sp_edges[0]
print(f"\ncomparing g1({e1.u},{e1.v}) against every substructure of g2 (c={params.c}):")
total = 0.0
for e2 in sp2.sp_edges:
    s1 = length_sim(e1, e2, params.c)
    if s1 == 0:
        print(f"  vs ({e2.u},{e2.v}) len {e2.length}: length similarity 0, skipped")
        continue
    s2 = position_sim(e1, e2, params.wl_iterations, params.epsilon)
    wl = wl_refine(e1, e2, params.wl_iterations)
    k = edge_kernel(e1, e2, params)
    total += k
    print(
        f"  vs ({e2.u},{e2.v}) len {e2.length}: length sim {s1}, "
        f"refinement stopped at h={wl.h_stop}, position sim {s2:.4f}, product {k:.4f}"
    )

value = mwlsp_kernel(g1, g2, params)
print(f"\nfull kernel over all substructure pairs: {value:.4f}")

print("\nedit-distance ablation on the same first pair:")
for e2 in sp2.sp_edges[:3]:
    mwl = position_sim(e1, e2, params.wl_iterations, params.epsilon)
    edit = position_sim_edit_distance(e1, e2)
    print(
        f"  {e1.path_label_ids} vs {e2.path_label_ids}: "
        f"refinement {mwl:.4f}, edit-distance {edit:.4f}"
    )

edit_value = mwlsp_kernel(g1, g2, KernelParams(c=2, position_variant="edit"))
print(f"\nfull kernel with the edit-distance variant: {edit_value:.4f}")
