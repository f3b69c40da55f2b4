"""Motif re-representation of molecules, a shortest-path graph kernel with
positional refinement, and molecular similarity graphs with a kernel-kNN
evaluation harness."""

from .evaluate import EvalConfig, EvalReport, cross_validate, knn_classify, report_json, stratified_folds
from .fixtures import separable_dataset, tiny_dataset
from .molio import (
    GraphDataset,
    MissingInputError,
    MolecularGraph,
    ParseError,
    dataset_from_records,
    load_json_graphs,
    load_tudataset,
    write_json_graphs,
    write_tudataset,
)
from .motif import (
    Motif,
    MotifDictionary,
    MotifGraph,
    MotifKind,
    build_motif_dictionary,
    build_motif_graph,
    canonical_label,
    extract_motifs,
    minimum_cycle_basis,
    motif_graphs_for_dataset,
)
from .patterns import DEFAULT_PATTERN_TABLE, GroupPattern, find_group_matches, load_pattern_table
from .simgraph import (
    KernelMatrix,
    MSSMEdge,
    MSSMGraph,
    MSSMNode,
    build_mssm_graph,
    compute_kernel_matrix,
    export_mssm,
    load_gram,
    load_mssm_json,
    quantize_scores,
    save_gram,
)
from .spkernel import (
    KernelEngine,
    KernelParams,
    MahalanobisContext,
    ShortestPathGraph,
    SPEdge,
    WLLabeling,
    edge_kernel,
    floyd_transform,
    length_sim,
    mwlsp_kernel,
    position_sim,
    position_sim_edit_distance,
    wl_refine,
)

__version__ = "0.1.0"
