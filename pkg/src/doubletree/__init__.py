"""Partial double trees: recognition, factorization, and distance oracles.

A *partial double tree* is a graph that embeds isometrically into the
Cartesian product of two trees.  This package recognizes them in linear
time, extracts the two tree factors as a coordinatization, answers exact
distance and median queries in constant time per query, and extends the
queries to continuous points of rectilinear polygons under the l1 metric.
"""

from .errors import (
    DoubletreeError,
    InternalDefectError,
    NotATreeError,
    NotConnectedError,
    NotConvexError,
    NotMedianError,
    NotPartialDoubleTreeError,
    OddClassCycleError,
    ParseError,
    PointOutsideError,
    TooLargeError,
    WeightMismatchError,
)
from .graph import (
    Graph,
    bfs_distances,
    connected_components,
    cut_vertices,
    format_graph,
    is_bipartite,
    is_connected,
    is_tree,
    parse_graph,
    parse_graph_with_map,
)
from .lexbfs import LexBFSOrder, bfs_order, lexbfs
from .recognition import (
    BadLabelIntersection,
    ConsecutiveEqualLabels,
    LabelTooLarge,
    LinkGraph,
    NotBipartite,
    NotConnected,
    OddLinkCycle,
    RecognitionReport,
    Square,
    build_links,
    check_labels,
    links_all_connected,
    list_squares,
    recognize,
    verify_witness,
)
from .factorization import (
    ClassGraph,
    ThetaPartition,
    TwoTreeEmbedding,
    class_graph,
    embed,
    embed_from_report,
    extract_tree,
    format_coords_file,
    format_tree_file,
    theta_classes,
    two_color_classes,
    verify_isometry,
)
from .oracle import (
    ComplexPoint,
    DendronPosition,
    DistanceOracle,
    LcaStructure,
    build_oracle,
    dendron_dist,
    point_coords,
    point_dist,
)
from .polygon import (
    Cell,
    CellComplex,
    GridArrangement,
    PolygonDistanceOracle,
    RectPolygon,
    build_polygon_oracle,
    check_ramified,
    complex_from_network,
    expanded_network,
    format_polygon,
    geodesic_dist,
    grid_network,
    locate_point,
    parse_polygon,
)
from .generators import (
    asymmetric_tree7,
    cogwheel,
    disjoint_union,
    gen_cycle,
    gen_grid,
    gen_hypercube,
    gen_path,
    gen_random_tree,
    gen_staircase_polygon,
    iterated_simplex,
    peripheral_expansion,
    relabel,
    simplex_graph,
)
from . import reference

__version__ = "0.1.0"
