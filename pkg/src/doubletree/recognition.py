"""Linear-time recognition of partial double trees.

A connected graph embeds isometrically into the Cartesian product of two
trees iff a LexBFS order passes three local label checks (every label has
size at most two, the two entries of a size-two label share exactly one
earlier neighbor, no two consecutive vertices repeat a size-two label) and
every vertex link — incident edges joined when they span a common listed
4-cycle — is bipartite.

The pipeline aborts at the first violated check (connectivity, then
bipartiteness, labels, links) and reports a witness that can be re-checked
against the input graph in linear time.  Hot paths work on flat arrays:
squares become rows of apex/left/right/across columns, an incident edge of
a vertex becomes an *arc* (``2*edge_id + side``), and link bipartiteness is
decided by a parity union-find over one flat list of arc pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from .errors import NotConnectedError
from .graph import Graph, is_bipartite
from .lexbfs import LexBFSOrder, bfs_order, lexbfs

_NIL = -1


# ---------------------------------------------------------------------------
# Witnesses


@dataclass(frozen=True)
class NotConnected:
    kind = "NotConnected"


@dataclass(frozen=True)
class NotBipartite:
    kind = "NotBipartite"
    walk: tuple[int, ...]  # odd closed walk, first == last


@dataclass(frozen=True)
class LabelTooLarge:
    kind = "LabelTooLarge"
    vertex: int  # has at least three earlier-numbered neighbors


@dataclass(frozen=True)
class BadLabelIntersection:
    kind = "BadLabelIntersection"
    vertex: int
    y: int
    z: int
    size: int  # |L(y) ∩ L(z)|, which must be 1


@dataclass(frozen=True)
class ConsecutiveEqualLabels:
    kind = "ConsecutiveEqualLabels"
    first: int
    second: int


@dataclass(frozen=True)
class OddLinkCycle:
    kind = "OddLinkCycle"
    vertex: int
    # Link vertices are edges (vertex, cycle[i]); consecutive ones lie in the
    # 4-cycle vertex - cycle[i] - joins[i] - cycle[i+1].
    cycle: tuple[int, ...]
    joins: tuple[int, ...]


Witness = Union[
    NotConnected,
    NotBipartite,
    LabelTooLarge,
    BadLabelIntersection,
    ConsecutiveEqualLabels,
    OddLinkCycle,
]


# ---------------------------------------------------------------------------
# Squares


class Square(NamedTuple):
    """A listed 4-cycle apex-left-across-right, apex numbered last.

    `left`/`right` are the two label entries of `apex`; `across` is the one
    common earlier neighbor of those two.
    """

    apex: int
    left: int
    right: int
    across: int

    def vertices(self) -> tuple[int, int, int, int]:
        return (self.apex, self.left, self.across, self.right)

    def edges(self):
        """The four cycle edges as normalized pairs."""
        a, l, r, w = self
        return (
            (a, l) if a < l else (l, a),
            (l, w) if l < w else (w, l),
            (w, r) if w < r else (r, w),
            (r, a) if r < a else (a, r),
        )

    def neighbors_of(self, corner: int) -> tuple[int, int]:
        """The two cycle-neighbors of `corner` inside the square."""
        if corner == self.apex or corner == self.across:
            return (self.left, self.right)
        if corner == self.left or corner == self.right:
            return (self.apex, self.across)
        raise ValueError(f"{corner} is not a corner of {self}")

    def opposite(self, corner: int) -> int:
        if corner == self.apex:
            return self.across
        if corner == self.across:
            return self.apex
        if corner == self.left:
            return self.right
        if corner == self.right:
            return self.left
        raise ValueError(f"{corner} is not a corner of {self}")


# ---------------------------------------------------------------------------
# Label checks (one or two earlier neighbors, unique 4-cycle completion)


def _check_labels_core(order: LexBFSOrder, global_equal_labels: bool):
    """Vectorized label checks; returns (witness | None, square columns).

    On success the second element is an (S, 4) int64 array with one row
    (apex, left, right, across) per size-two label, rows in numbering order
    of the apex.  On failure it is None and the witness is the earliest
    violation in numbering order (checked per vertex as: label size, equal
    labels, label intersection).
    """
    arrs = order.arrays()
    seq = arrs["order"]
    labn = arrs["label_count"]
    lab0 = arrs["label_first"]
    lab1 = arrs["label_second"]
    n = len(seq)
    sentinel = n + 1

    labn_seq = labn[seq]
    big = np.nonzero(labn_seq >= 3)[0]
    pos_size = int(big[0]) if len(big) else sentinel

    pos_equal = sentinel
    equal_partner = _NIL
    if global_equal_labels:
        pos2 = np.nonzero(labn_seq == 2)[0]
        apex = seq[pos2]
        keys = lab0[apex] * n + lab1[apex]
        perm = np.lexsort((pos2, keys))
        ks = keys[perm]
        ps = pos2[perm]
        dup = np.nonzero(ks[1:] == ks[:-1])[0]
        if len(dup):
            at = dup[np.argmin(ps[dup + 1])]
            pos_equal = int(ps[at + 1])
            equal_partner = int(seq[ps[at]])
    elif n >= 2:
        a = seq[:-1]
        b = seq[1:]
        eq = (
            (labn_seq[:-1] == 2)
            & (labn_seq[1:] == 2)
            & (lab0[a] == lab0[b])
            & (lab1[a] == lab1[b])
        )
        hits = np.nonzero(eq)[0]
        if len(hits):
            pos_equal = int(hits[0]) + 1
            equal_partner = int(seq[pos_equal - 1])

    pos2 = np.nonzero(labn_seq == 2)[0]
    apex = seq[pos2]
    ys = lab0[apex]
    zs = lab1[apex]
    ky = labn[ys]
    kz = labn[zs]
    a0 = lab0[ys]
    a1 = lab1[ys]
    b0 = lab0[zs]
    b1 = lab1[zs]
    vy0 = ky >= 1
    vy1 = ky >= 2
    vz0 = kz >= 1
    vz1 = kz >= 2
    # Labels are strictly increasing, so each entry of one matches at most
    # one entry of the other and the match flags sum to the intersection
    # size (valid wherever both labels already passed the size check).
    hit_a0 = (vy0 & vz0 & (a0 == b0)) | (vy0 & vz1 & (a0 == b1))
    hit_a1 = (vy1 & vz0 & (a1 == b0)) | (vy1 & vz1 & (a1 == b1))
    counts = hit_a0.astype(np.int8) + hit_a1.astype(np.int8)
    bad = np.nonzero(counts != 1)[0]
    pos_meet = int(pos2[bad[0]]) if len(bad) else sentinel

    first = min(pos_size, pos_equal, pos_meet)
    if first < sentinel:
        if first == pos_size:
            return LabelTooLarge(int(seq[first])), None
        if first == pos_equal:
            return ConsecutiveEqualLabels(equal_partner, int(seq[first])), None
        at = bad[0]
        return (
            BadLabelIntersection(
                int(apex[at]), int(ys[at]), int(zs[at]), int(counts[at])
            ),
            None,
        )
    meets = np.where(hit_a0, a0, a1)
    if len(apex):
        cols = np.stack([apex, ys, zs, meets], axis=1)
    else:
        cols = np.empty((0, 4), dtype=np.int64)
    return None, cols


def check_labels(g: Graph, order: LexBFSOrder, *, global_equal_labels: bool = False
                 ) -> Optional[Witness]:
    """Check the three label conditions; None means all hold.

    Reports the earliest violation in numbering order.  With
    `global_equal_labels` (required for BFS orders) equal size-two labels
    anywhere are rejected, not just on consecutive vertices.
    """
    witness, _ = _check_labels_core(order, global_equal_labels)
    return witness


def list_squares(g: Graph, order: LexBFSOrder) -> list[Square]:
    """One square per size-two label, in numbering order of the apex.

    Requires `check_labels` to have passed; the returned list then contains
    every 4-cycle of the graph.
    """
    witness, cols = _check_labels_core(order, False)
    if witness is not None:
        raise ValueError(f"label checks must pass before listing squares: {witness}")
    return _materialize_squares(cols)


def _materialize_squares(cols) -> list[Square]:
    return list(map(Square._make, zip(
        cols[:, 0].tolist(), cols[:, 1].tolist(),
        cols[:, 2].tolist(), cols[:, 3].tolist(),
    )))


# ---------------------------------------------------------------------------
# Flat link machinery


def _edge_endpoint_arrays(g: Graph):
    if g.m == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    arr = np.asarray(g.edges, dtype=np.int64)
    return arr[:, 0], arr[:, 1]


def _edges_by_child_slot(g: Graph, order: LexBFSOrder, eu, ev):
    """Arrays mapping (later endpoint, label slot) -> edge id.

    Valid once labels have size <= 2: every edge is then recorded in the
    label of its later-numbered endpoint.
    """
    n = g.n
    number = np.asarray(order.number, dtype=np.int64)
    lab0 = np.asarray(order.label_first, dtype=np.int64)
    lab1 = np.asarray(order.label_second, dtype=np.int64)
    u_later = number[eu] > number[ev]
    child = np.where(u_later, eu, ev)
    other = np.where(u_later, ev, eu)
    eids = np.arange(g.m, dtype=np.int64)
    in_first = lab0[child] == other
    rest = ~in_first
    if not np.array_equal(lab1[child[rest]], other[rest]):
        raise ValueError("label checks must pass before building links")
    e0 = np.full(n, _NIL, dtype=np.int64)
    e1 = np.full(n, _NIL, dtype=np.int64)
    e0[child[in_first]] = eids[in_first]
    e1[child[rest]] = eids[rest]
    return e0, e1, lab0


def _link_pairs(g: Graph, order: LexBFSOrder, sq_cols):
    """Arc pairs (one per square corner) plus each pair's opposite corner.

    The arc of edge e at endpoint x is ``2*e`` when x is the smaller
    endpoint and ``2*e + 1`` otherwise.
    """
    eu, ev = _edge_endpoint_arrays(g)
    e0, e1, lab0 = _edges_by_child_slot(g, order, eu, ev)
    vs, ys, zs, ws = sq_cols[:, 0], sq_cols[:, 1], sq_cols[:, 2], sq_cols[:, 3]
    e_al = e0[vs]
    e_ar = e1[vs]
    e_lw = np.where(lab0[ys] == ws, e0[ys], e1[ys])
    e_rw = np.where(lab0[zs] == ws, e0[zs], e1[zs])

    def arc(e, x):
        return 2 * e + (x == ev[e])

    pa = np.concatenate([arc(e_al, vs), arc(e_al, ys), arc(e_ar, zs), arc(e_lw, ws)])
    pb = np.concatenate([arc(e_ar, vs), arc(e_lw, ys), arc(e_rw, zs), arc(e_rw, ws)])
    opp = np.concatenate([ws, zs, ys, vs])
    return pa, pb, opp


class LinkSystem:
    """All vertex links of one graph, as flat arrays of arc pairs.

    `pa`/`pb` hold one arc pair per square corner and `opp` that corner's
    opposite in the square; links of individual vertices are materialized
    on demand.  `ok` reports bipartiteness of every link; `witness` carries
    the odd cycle otherwise.
    """

    __slots__ = ("graph", "squares", "pa", "pb", "opp", "ok", "witness", "_by_owner")

    def __init__(self, graph, squares, pa, pb, opp, ok, witness):
        self.graph = graph
        self.squares = squares
        self.pa = pa
        self.pb = pb
        self.opp = opp
        self.ok = ok
        self.witness = witness
        self._by_owner = None

    def _arc_owner(self, arc: int) -> int:
        return self.graph.edges[arc >> 1][arc & 1]

    def _pairs_of(self, v: int):
        if self._by_owner is None:
            grouped = {}
            for a, b, opp in zip(self.pa.tolist(), self.pb.tolist(), self.opp.tolist()):
                grouped.setdefault(self._arc_owner(a), []).append((a, b, opp))
            self._by_owner = grouped
        return self._by_owner.get(v, ())

    def link_of(self, v: int) -> "LinkGraph":
        arcs = []
        verts = []
        for w, eid in self.graph.incidence()[v]:
            arcs.append(2 * eid + (v > w))
            verts.append(self.graph.edges[eid])
        local = {a: i for i, a in enumerate(arcs)}
        link_edges = sorted(
            {(min(local[a], local[b]), max(local[a], local[b]))
             for a, b, _ in self._pairs_of(v)}
        )
        colors, odd = _color_link(len(verts), link_edges)
        if odd is not None:
            witness = self.witness if (
                self.witness is not None and self.witness.vertex == v
            ) else _odd_cycle_witness(self.graph, v, verts, self._pairs_of(v), local)
            return LinkGraph(v, verts, link_edges, None, witness)
        return LinkGraph(v, verts, link_edges, colors, None)

    def bipartition_of(self, v: int):
        """Colors of the incident edges of v, keyed by normalized edge pair."""
        link = self.link_of(v)
        if link.bipartition is None:
            return None
        return dict(zip(link.vertices, link.bipartition))


def _color_link(k, link_edges):
    adj = [[] for _ in range(k)]
    for a, b in link_edges:
        adj[a].append(b)
        adj[b].append(a)
    colors = [-1] * k
    for s in range(k):
        if colors[s] != -1:
            continue
        colors[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if colors[y] == -1:
                    colors[y] = colors[x] ^ 1
                    stack.append(y)
                elif colors[y] == colors[x]:
                    return None, (x, y)
    return colors, None


def _odd_cycle_witness(g, owner, verts, vertex_pairs, local):
    """BFS with parents inside one link; rebuild the odd cycle of edges."""
    k = len(verts)
    adj = [[] for _ in range(k)]
    for a, b, opp in vertex_pairs:
        ia, ib = local[a], local[b]
        adj[ia].append((ib, opp))
        adj[ib].append((ia, opp))
    color = [-1] * k
    parent = [-1] * k
    parent_opp = [-1] * k
    for seed in range(k):
        if color[seed] != -1:
            continue
        color[seed] = 0
        queue = [seed]
        qi = 0
        while qi < len(queue):
            x = queue[qi]
            qi += 1
            for y, opp in adj[x]:
                if color[y] == -1:
                    color[y] = color[x] ^ 1
                    parent[y] = x
                    parent_opp[y] = opp
                    queue.append(y)
                elif color[y] == color[x]:
                    return _assemble_cycle(
                        g, owner, verts, parent, parent_opp, x, y, opp
                    )
    raise AssertionError("no odd cycle found in a link reported non-bipartite")


def _assemble_cycle(g, owner, verts, parent, parent_opp, s, t, closing_opp):
    path_s = [s]
    while parent[path_s[-1]] != -1:
        path_s.append(parent[path_s[-1]])
    pos = {x: i for i, x in enumerate(path_s)}
    path_t = [t]
    while path_t[-1] not in pos:
        path_t.append(parent[path_t[-1]])
    meet = pos[path_t[-1]]
    nodes = list(reversed(path_s[: meet + 1])) + path_t[:-1]

    def endpoint(i):
        u, v = verts[i]
        return v if u == owner else u

    cycle = [endpoint(i) for i in nodes]
    joins = []
    k = len(nodes)
    for i in range(k):
        a, b = nodes[i], nodes[(i + 1) % k]
        if parent[b] == a:
            joins.append(parent_opp[b])
        elif parent[a] == b:
            joins.append(parent_opp[a])
        else:
            joins.append(closing_opp)
    return OddLinkCycle(owner, tuple(cycle), tuple(joins))


def _build_link_system(g: Graph, order: LexBFSOrder, squares, sq_cols=None) -> LinkSystem:
    """Check bipartiteness of every link at once.

    Doubled-node reduction: each arc becomes two nodes (one per color), each
    arc pair wires the four cross combinations, and a link has an odd cycle
    exactly when some arc's two nodes fall into one connected component.
    Components are computed by scipy's compiled search; the odd cycle behind
    a failure is reconstructed locally at the offending vertex.
    """
    empty = np.empty(0, dtype=np.int64)
    if not squares:
        return LinkSystem(g, squares, empty, empty, empty, True, None)
    if sq_cols is None:
        sq_cols = np.asarray(squares, dtype=np.int64).reshape(len(squares), 4)
    pa, pb, opp = _link_pairs(g, order, sq_cols)
    from scipy import sparse
    from scipy.sparse.csgraph import connected_components

    nodes = 4 * g.m
    src = np.concatenate([2 * pa, 2 * pa + 1])
    dst = np.concatenate([2 * pb + 1, 2 * pb])
    matrix = sparse.coo_matrix(
        (np.ones(len(src), dtype=np.int8), (src, dst)), shape=(nodes, nodes)
    )
    _, labels = connected_components(matrix, directed=False)
    conflicts = np.nonzero(labels[0::2] == labels[1::2])[0]
    if len(conflicts) == 0:
        return LinkSystem(g, squares, pa, pb, opp, True, None)
    arc = int(conflicts[0])
    owner = g.edges[arc >> 1][arc & 1]
    witness = _rebuild_conflicted_link(g, owner, pa, pb, opp)
    return LinkSystem(g, squares, pa, pb, opp, False, witness)


def _rebuild_conflicted_link(g, owner, pa, pb, opp):
    verts = []
    local = {}
    for w, eid in g.incidence()[owner]:
        arc = 2 * eid + (owner > w)
        local[arc] = len(verts)
        verts.append(g.edges[eid])
    eu, ev = _edge_endpoint_arrays(g)
    owners = np.where(pa & 1, ev[pa >> 1], eu[pa >> 1])
    keep = np.nonzero(owners == owner)[0]
    mine = [(int(pa[i]), int(pb[i]), int(opp[i])) for i in keep]
    return _odd_cycle_witness(g, owner, verts, mine, local)


def build_links(g: Graph, squares) -> list["LinkGraph"]:
    """Materialized per-vertex links with bipartition attempts.

    Convenience view over the flat link system, intended for inspection at
    small scale; `recognize` uses the flat system directly.
    """
    order = lexbfs(g)
    system = _build_link_system(g, order, squares)
    return [system.link_of(v) for v in range(g.n)]


@dataclass
class LinkGraph:
    """The link of one vertex: its incident edges, joined via listed squares.

    `vertices` are the incident edges of `owner` as normalized pairs;
    `edges` are index pairs into `vertices` (each from one listed square);
    `bipartition` is a color per link vertex, or None when an odd cycle
    exists, in which case `odd_cycle` carries the witness.
    """

    owner: int
    vertices: list[tuple[int, int]]
    edges: list[tuple[int, int]]
    bipartition: Optional[list[int]]
    odd_cycle: Optional[OddLinkCycle]

    def is_bipartite(self) -> bool:
        return self.bipartition is not None

    def is_connected(self) -> bool:
        k = len(self.vertices)
        if k <= 1:
            return True
        adj = [[] for _ in range(k)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        seen = [False] * k
        seen[0] = True
        stack = [0]
        count = 1
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    count += 1
                    stack.append(y)
        return count == k


def links_all_connected(links) -> bool:
    """True when every per-vertex link is connected.

    Accepts a list of LinkGraph or a LinkSystem.  For accepted graphs on at
    least three vertices this coincides with 2-connectivity.
    """
    if isinstance(links, LinkSystem):
        links = [links.link_of(v) for v in range(links.graph.n)]
    return all(link.is_connected() for link in links)


# ---------------------------------------------------------------------------
# Reports and the recognizer


@dataclass
class RecognitionReport:
    """Outcome of recognition: a verdict plus certificate or witness.

    On acceptance `order`, `squares` and `links` are populated for
    downstream factorization; on rejection `witness` explains the failure.
    """

    accepted: bool
    order: Optional[LexBFSOrder] = None
    squares: Optional[list[Square]] = None
    links: Optional[LinkSystem] = None
    witness: Optional[Witness] = None

    def __bool__(self):
        return self.accepted


def _bipartite_by_depth(g: Graph, order: LexBFSOrder) -> bool:
    """Every edge must join consecutive search layers.

    The order carries breadth-first layer depths; an edge with even depth
    sum joins vertices of one layer and closes an odd cycle.
    """
    if g.m == 0:
        return True
    d = np.asarray(order.depth, dtype=np.int64)
    eu, ev = _edge_endpoint_arrays(g)
    return bool((((d[eu] ^ d[ev]) & 1) == 1).all())


def recognize(g: Graph, *, order_mode: str = "lexbfs") -> RecognitionReport:
    """Decide whether `g` embeds isometrically into a product of two trees.

    Runs in O(n + m).  `order_mode` selects the vertex ordering: "lexbfs"
    (default) or the "bfs" fallback with the global equal-label test.
    Weights are ignored; recognition is purely combinatorial.
    """
    if order_mode not in ("lexbfs", "bfs"):
        raise ValueError(f"unknown order mode {order_mode!r}")
    if g.n == 0:
        return RecognitionReport(False, witness=NotConnected())
    try:
        order = lexbfs(g, 0) if order_mode == "lexbfs" else bfs_order(g, 0)
    except NotConnectedError:
        return RecognitionReport(False, witness=NotConnected())
    if not _bipartite_by_depth(g, order):
        _, walk = is_bipartite(g)
        return RecognitionReport(False, witness=NotBipartite(walk))
    witness, meets = _check_labels_core(order, order_mode == "bfs")
    if witness is not None:
        return RecognitionReport(False, order=order, witness=witness)
    squares, sq_cols = _squares_from_meets(order, meets)
    system = _build_link_system(g, order, squares, sq_cols)
    if not system.ok:
        return RecognitionReport(False, order=order, squares=squares,
                                 witness=system.witness)
    return RecognitionReport(True, order=order, squares=squares, links=system)


# ---------------------------------------------------------------------------
# Witness validation


def verify_witness(g: Graph, witness: Witness, *, order_mode: str = "lexbfs") -> bool:
    """Re-check a rejection witness against the input graph in linear time.

    Label witnesses are relative to the canonical ordering, so `order_mode`
    must match the mode that produced the witness.
    """
    if isinstance(witness, NotConnected):
        from .graph import is_connected

        return not is_connected(g)
    if isinstance(witness, NotBipartite):
        walk = witness.walk
        if len(walk) < 2 or walk[0] != walk[-1] or len(walk) % 2 == 0:
            return False
        ids = g.edge_ids()
        return all(
            ((a, b) if a < b else (b, a)) in ids for a, b in zip(walk, walk[1:])
        )
    if isinstance(witness, (LabelTooLarge, BadLabelIntersection, ConsecutiveEqualLabels)):
        try:
            order = lexbfs(g, 0) if order_mode == "lexbfs" else bfs_order(g, 0)
        except NotConnectedError:
            return False
        if isinstance(witness, LabelTooLarge):
            return order.label_size(witness.vertex) >= 3
        if isinstance(witness, BadLabelIntersection):
            v = witness.vertex
            if order.label(v) != (witness.y, witness.z):
                return False
            common = set(order.label(witness.y)) & set(order.label(witness.z))
            return len(common) == witness.size and witness.size != 1
        a, b = witness.first, witness.second
        if order_mode == "lexbfs" and order.number[b] != order.number[a] + 1:
            return False
        return order.label_size(a) == 2 and order.label(a) == order.label(b)
    if isinstance(witness, OddLinkCycle):
        x = witness.vertex
        cycle, joins = witness.cycle, witness.joins
        if len(cycle) != len(joins) or len(cycle) % 2 == 0:
            return False
        ids = g.edge_ids()

        def edge(a, b):
            return ((a, b) if a < b else (b, a)) in ids

        k = len(cycle)
        for i in range(k):
            a = cycle[i]
            b = cycle[(i + 1) % k]
            w = joins[i]
            if len({x, a, b, w}) != 4:
                return False
            if not (edge(x, a) and edge(x, b) and edge(a, w) and edge(b, w)):
                return False
        return True
    raise TypeError(f"unknown witness {witness!r}")
