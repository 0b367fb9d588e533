"""Monoidal width for glued graphs.

Graphs compose by identifying marked boundary vertices; a decomposition
term records how a graph was assembled from pieces by tensor and by
composition along cut boundaries.  The width of the cheapest term, with
and without shape restrictions, matches branch width, tree width (within
a factor of two) and path width (exactly), and this package makes those
correspondences executable: exact brute-force oracles, validity checkers
for six decomposition formats, and width-bounded translations in both
directions.

Width convention: tree and path widths count the largest bag with NO "-1"
adjustment, so a single edge has tree width 2.
"""

from .graph import (
    FiniteMap,
    Graph,
    GraphError,
    GraphMorphism,
    GraphParseError,
    SourcedGraph,
    canonical_key,
    ends_of_edge_set,
    format_graph_text,
    graph_coproduct,
    graph_isomorphic,
    graph_pushout,
    image_intersection,
    image_union,
    is_epimorphism,
    is_subcubic_tree,
    parse_graph_text,
)
from .cospan import (
    Cospan,
    CospanError,
    boundary_weight,
    compose,
    copy,
    cospan_from_json,
    cospan_iso_eq,
    cospan_to_json,
    create,
    delete,
    edge,
    from_sourced,
    generator,
    identity,
    merge,
    of_graph,
    permutation,
    spider,
    swap,
    tensor,
    weight,
    wiring,
)
from .terms import (
    Atom,
    Compose,
    DecompTree,
    Leaf,
    SearchResult,
    Signature,
    SymbolicSignature,
    Tensor,
    TermError,
    bounded_mwd_search,
    evaluate,
    is_left_tree,
    is_path,
    is_right_tree,
    node_weights,
    signature_from_json,
    signature_to_json,
    tree_from_json,
    tree_to_json,
    width,
)
from .decomp import (
    BoundViolation,
    BranchDec,
    Check,
    DecompositionError,
    PathDec,
    RecBranchDec,
    RecBranchEmpty,
    RecBranchLeaf,
    RecBranchNode,
    RecPathCons,
    RecPathDec,
    RecPathEmpty,
    RecTreeDec,
    RecTreeEmpty,
    RecTreeNode,
    REC_BRANCH_EMPTY,
    REC_PATH_EMPTY,
    REC_TREE_EMPTY,
    TreeDec,
    boundary_global,
    branch_dec_width,
    branch_from_recursive,
    branch_to_recursive,
    decomposition_from_json,
    decomposition_to_dot,
    decomposition_to_json,
    edge_order,
    path_dec_width,
    path_from_recursive,
    path_to_recursive,
    rec_branch_width,
    rec_path_width,
    rec_tree_width,
    tree_dec_width,
    tree_from_recursive,
    tree_to_recursive,
    validate_branch_dec,
    validate_path_dec,
    validate_rec_branch_dec,
    validate_rec_path_dec,
    validate_rec_tree_dec,
    validate_tree_dec,
)
from .oracles import (
    OracleError,
    WidthCache,
    enumerate_graphs,
    exact_branchwidth,
    exact_pathwidth,
    exact_treewidth,
    optimal_rec_path_dec,
    optimal_rec_tree_dec,
)
from .translate import (
    EpiWitness,
    TheoremReport,
    TranslationError,
    b_to_mdec,
    check_glueing,
    check_theorems,
    copy_mdec,
    epi_to_dec_path,
    epi_to_dec_tree,
    epis_from_composition,
    m_to_bdec,
    m_to_pdec,
    m_to_tdec,
    p_to_mdec,
    t_to_mdec,
)

__version__ = "0.1.0"
