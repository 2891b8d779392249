"""Two-tree factorization of recognized graphs.

Edges fall into classes (the transitive closure of "opposite in a listed
square"); classes crossing in a square must get different colors, and the
class graph of an accepted instance is always 2-colorable.  Contracting all
edges of one color yields a tree; a vertex's pair of contraction images is
its coordinate pair, and graph distance splits exactly into the sum of the
two tree distances.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    NotATreeError,
    NotPartialDoubleTreeError,
    OddClassCycleError,
    InternalDefectError,
    WeightMismatchError,
)
from .graph import Graph, bfs_distances, is_tree
from .recognition import RecognitionReport, recognize


@dataclass
class ThetaPartition:
    """Edge classes: finest partition with opposite square edges together.

    `edge_class[e]` is the class of edge e; classes are numbered by their
    smallest edge id, whose edge is the class representative.  All edges of
    a class share one length.
    """

    edge_class: list[int]
    class_count: int
    representatives: list[int]
    lengths: list[int]

    def members(self):
        out = [[] for _ in range(self.class_count)]
        for e, c in enumerate(self.edge_class):
            out[c].append(e)
        return out


@dataclass
class ClassGraph:
    """Edge classes with one edge per listed square joining its two classes."""

    class_count: int
    edges: set[tuple[int, int]]

    def adjacency(self):
        adj = [[] for _ in range(self.class_count)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj


@dataclass
class TwoTreeEmbedding:
    """Two weighted trees plus coordinate maps realizing the graph metric.

    For all u, v: d_G(u, v) = d_T1(coord1[u], coord1[v]) +
    d_T2(coord2[u], coord2[v]), and the coordinate pairs are distinct.
    """

    tree1: Graph
    tree2: Graph
    coord1: list[int]
    coord2: list[int]
    lookup: dict[tuple[int, int], int] = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.coord1)

    def vertex_at(self, c1: int, c2: int):
        return self.lookup.get((c1, c2))

    def edge_color(self, u: int, v: int) -> int:
        """1 when the edge separates coord1 values, else 2."""
        return 1 if self.coord1[u] != self.coord1[v] else 2


def theta_classes(g: Graph, squares) -> ThetaPartition:
    """Classes as connected components of the opposite-edge relation.

    Uses a disjoint-set structure over edge ids.  Weighted inputs must give
    every class a single length (WeightMismatchError otherwise).
    """
    m = g.m
    ids = g.edge_ids()
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for sq in squares:
        e_al, e_lw, e_wr, e_ra = (ids[e] for e in sq.edges())
        union(e_al, e_wr)  # apex-left opposite across-right
        union(e_ra, e_lw)  # apex-right opposite across-left
    edge_class = [0] * m
    reps = []
    lengths = []
    for e in range(m):
        r = find(e)
        if r == e:
            edge_class[e] = len(reps)
            reps.append(e)
            lengths.append(g.weight(e))
        else:
            c = edge_class[r]
            edge_class[e] = c
            if g.weight(e) != lengths[c]:
                raise WeightMismatchError(
                    f"edges {g.edges[reps[c]]} and {g.edges[e]} share a class "
                    f"but have lengths {lengths[c]} and {g.weight(e)}"
                )
    return ThetaPartition(edge_class, len(reps), reps, lengths)


def class_graph(g: Graph, partition: ThetaPartition, squares) -> ClassGraph:
    """One class-graph edge per square, joining the square's two classes."""
    ids = g.edge_ids()
    cls = partition.edge_class
    out = set()
    for sq in squares:
        e_al, e_lw, _, _ = (ids[e] for e in sq.edges())
        c1, c2 = cls[e_al], cls[e_lw]
        if c1 == c2:
            raise OddClassCycleError(
                f"square at apex {sq.apex} is monochromatic (class {c1})"
            )
        out.add((c1, c2) if c1 < c2 else (c2, c1))
    return ClassGraph(partition.class_count, out)


def two_color_classes(cg: ClassGraph):
    """Proper 2-coloring of the class graph with colors 1 and 2.

    Breadth-first propagation; in every component the lowest-numbered class
    gets color 1, and isolated classes therefore all get color 1.  Failure
    is an internal defect (recognition must have accepted first).
    """
    adj = cg.adjacency()
    colors = [0] * cg.class_count
    for seed in range(cg.class_count):
        if colors[seed]:
            continue
        colors[seed] = 1
        queue = [seed]
        while queue:
            a = queue.pop()
            for b in adj[a]:
                if colors[b] == 0:
                    colors[b] = 3 - colors[a]
                    queue.append(b)
                elif colors[b] == colors[a]:
                    raise OddClassCycleError(
                        f"classes {a} and {b} conflict: class graph has an odd cycle"
                    )
    return colors


def edge_colors(partition: ThetaPartition, class_colors) -> list[int]:
    return [class_colors[c] for c in partition.edge_class]


def extract_tree(g: Graph, edge_color: list[int], color: int,
                 partition: ThetaPartition) -> tuple[Graph, list[int]]:
    """Contract every edge not of `color`; returns the tree and vertex map.

    Tree vertices are the components of the opposite-color subgraph,
    numbered by smallest contained vertex id.  Any cycle or parallel edge
    after contraction is an internal defect.
    """
    n = g.n
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e, (u, v) in enumerate(g.edges):
        if edge_color[e] != color:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
    comp = [-1] * n
    count = 0
    for v in range(n):
        r = find(v)
        if comp[r] == -1:
            comp[r] = count
            count += 1
        comp[v] = comp[r]

    tedges = {}
    for c in range(partition.class_count):
        rep = partition.representatives[c]
        if edge_color[rep] != color:
            continue
        u, v = g.edges[rep]
        a, b = comp[u], comp[v]
        if a == b:
            raise NotATreeError(f"class {c} collapses into one component")
        key = (a, b) if a < b else (b, a)
        if key in tedges:
            raise NotATreeError(f"classes {tedges[key]} and {c} join the same components")
        tedges[key] = c
    pairs = sorted(tedges)
    tree = Graph(count, pairs, [partition.lengths[tedges[k]] for k in pairs])
    if not is_tree(tree):
        raise NotATreeError(
            f"contraction left {count} components and {len(pairs)} connecting classes"
        )
    return tree, comp


def embed(g: Graph, *, order_mode: str = "lexbfs") -> TwoTreeEmbedding:
    """Full pipeline: recognize, classify edges, 2-color, contract twice.

    Raises NotPartialDoubleTreeError (with the witness) on rejection.  Both
    projections are onto their trees.
    """
    report = recognize(g, order_mode=order_mode)
    return embed_from_report(g, report)


def embed_from_report(g: Graph, report: RecognitionReport) -> TwoTreeEmbedding:
    """Build the embedding from an existing recognition report."""
    if not report.accepted:
        raise NotPartialDoubleTreeError(report.witness)
    partition = theta_classes(g, report.squares)
    colors = two_color_classes(class_graph(g, partition, report.squares))
    ecol = edge_colors(partition, colors)
    tree1, coord1 = extract_tree(g, ecol, 1, partition)
    tree2, coord2 = extract_tree(g, ecol, 2, partition)
    lookup = {}
    for v in range(g.n):
        key = (coord1[v], coord2[v])
        if key in lookup:
            raise InternalDefectError(
                f"vertices {lookup[key]} and {v} received equal coordinates {key}"
            )
        lookup[key] = v
    return TwoTreeEmbedding(tree1, tree2, coord1, coord2, lookup)


def verify_isometry(e: TwoTreeEmbedding, g: Graph, pairs=None) -> bool:
    """Check d_G = d_T1 + d_T2 exactly, on `pairs` or on all vertex pairs."""
    if pairs is None:
        pairs = [(u, v) for u in range(g.n) for v in range(u, g.n)]
    by_source = {}
    for u, v in pairs:
        by_source.setdefault(u, []).append(v)
    t1_cache = {}
    t2_cache = {}
    for u, targets in by_source.items():
        dg = bfs_distances(g, u)
        c1u, c2u = e.coord1[u], e.coord2[u]
        if c1u not in t1_cache:
            t1_cache[c1u] = bfs_distances(e.tree1, c1u)
        if c2u not in t2_cache:
            t2_cache[c2u] = bfs_distances(e.tree2, c2u)
        d1 = t1_cache[c1u]
        d2 = t2_cache[c2u]
        for v in targets:
            if dg[v] != d1[e.coord1[v]] + d2[e.coord2[v]]:
                return False
    return True


# ---------------------------------------------------------------------------
# File formats


def format_tree_file(tree: Graph) -> str:
    """Tree output: the graph file format under a `tree` header."""
    from .graph import format_graph

    return format_graph(tree, tree=True)


def format_coords_file(e: TwoTreeEmbedding) -> str:
    """Coordinate lines `v t1 t2` for every vertex."""
    lines = [f"{v} {e.coord1[v]} {e.coord2[v]}" for v in range(e.n)]
    return "\n".join(lines) + "\n" if lines else ""
