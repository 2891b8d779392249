"""Constant-time distance and median queries over a two-tree embedding.

Each tree factor gets an Euler-tour sparse table (O(n log n) preprocessing,
O(1) range-minimum lowest-common-ancestor queries); a graph distance is the
sum of the two weighted tree distances at the endpoints' coordinates, and a
median is the pair of per-tree medians pulled back through the coordinate
lookup.  Continuous points inside the square complex lift to positions on
tree edges, so the same machinery answers exact l1 geodesic queries.

Oracles are immutable after construction and safe for concurrent reads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InternalDefectError
from .factorization import TwoTreeEmbedding
from .graph import Graph


class LcaStructure:
    """Rooted tree with O(1) lowest-common-ancestor and distance queries."""

    __slots__ = ("tree", "root", "first", "tour", "tour_depth", "tour_wdepth",
                 "depth", "wdepth", "log", "table", "_np")

    def __init__(self, tree: Graph, root: int = 0):
        n = tree.n
        if n == 0:
            raise ValueError("tree must be nonempty")
        inc = tree.incidence()
        parent = [-1] * n
        depth = [0] * n
        wdepth = [0] * n
        first = [-1] * n
        tour = [root]
        tour_depth = [0]
        tour_wdepth = [0]
        first[root] = 0
        cursor = [0] * n
        stack = [root]
        while stack:
            v = stack[-1]
            i = cursor[v]
            if i < len(inc[v]):
                cursor[v] = i + 1
                w, eid = inc[v][i]
                if w == parent[v]:
                    continue
                parent[w] = v
                depth[w] = depth[v] + 1
                wdepth[w] = wdepth[v] + tree.weight(eid)
                first[w] = len(tour)
                tour.append(w)
                tour_depth.append(depth[w])
                tour_wdepth.append(wdepth[w])
                stack.append(w)
            else:
                stack.pop()
                if stack:
                    u = stack[-1]
                    tour.append(u)
                    tour_depth.append(depth[u])
                    tour_wdepth.append(wdepth[u])
        if len(tour) != 2 * n - 1:
            raise ValueError("input is not a connected tree")

        length = len(tour)
        log = [0] * (length + 1)
        for i in range(2, length + 1):
            log[i] = log[i >> 1] + 1
        dp = np.array(tour_depth, dtype=np.int64)
        levels = [np.arange(length, dtype=np.int64)]
        k = 1
        while (1 << k) <= length:
            half = 1 << (k - 1)
            prev = levels[-1]
            width = length - (1 << k) + 1
            a = prev[:width]
            b = prev[half : half + width]
            levels.append(np.where(dp[a] <= dp[b], a, b))
            k += 1
        self.tree = tree
        self.root = root
        self.first = first
        self.tour = tour
        self.tour_depth = tour_depth
        self.tour_wdepth = tour_wdepth
        self.depth = depth
        self.wdepth = wdepth
        self.log = log
        self.table = [lvl.tolist() for lvl in levels]
        self._np = None

    def _lca_pos(self, u: int, v: int) -> int:
        """Tour position of lca(u, v)."""
        i = self.first[u]
        j = self.first[v]
        if i > j:
            i, j = j, i
        k = self.log[j - i + 1]
        row = self.table[k]
        x = row[i]
        y = row[j - (1 << k) + 1]
        return x if self.tour_depth[x] <= self.tour_depth[y] else y

    def lca(self, u: int, v: int) -> int:
        return self.tour[self._lca_pos(u, v)]

    def distance(self, u: int, v: int) -> int:
        """Weighted tree distance."""
        if u == v:
            return 0
        return self.wdepth[u] + self.wdepth[v] - 2 * self.tour_wdepth[self._lca_pos(u, v)]

    def median(self, x: int, y: int, z: int) -> int:
        """The meeting vertex of the three pairwise tree paths."""
        a = self._lca_pos(x, y)
        b = self._lca_pos(y, z)
        c = self._lca_pos(x, z)
        dps = self.tour_depth
        best = a
        if dps[b] > dps[best]:
            best = b
        if dps[c] > dps[best]:
            best = c
        return self.tour[best]

    def numpy_views(self):
        """Arrays for vectorized batch queries (built lazily)."""
        if self._np is None:
            length = len(self.tour)
            table = np.zeros((len(self.table), length), dtype=np.int64)
            for k, row in enumerate(self.table):
                table[k, : len(row)] = row
            self._np = {
                "first": np.array(self.first, dtype=np.int64),
                "tour_depth": np.array(self.tour_depth, dtype=np.int64),
                "tour_wdepth": np.array(self.tour_wdepth, dtype=np.int64),
                "wdepth": np.array(self.wdepth, dtype=np.int64),
                "log": np.array(self.log, dtype=np.int64),
                "table": table,
            }
        return self._np


def _make_dist(n, c1, c2, s1: LcaStructure, s2: LcaStructure):
    # Hot path: bind every array as a closure local.
    f1, d1, wp1, w1, log1, t1 = (s1.first, s1.tour_depth, s1.tour_wdepth,
                                 s1.wdepth, s1.log, s1.table)
    f2, d2, wp2, w2, log2, t2 = (s2.first, s2.tour_depth, s2.tour_wdepth,
                                 s2.wdepth, s2.log, s2.table)

    def dist(u: int, v: int) -> int:
        if u < 0 or v < 0 or u >= n or v >= n:
            raise ValueError(f"vertex pair ({u}, {v}) out of range")
        total = 0
        a = c1[u]
        b = c1[v]
        if a != b:
            i = f1[a]
            j = f1[b]
            if i > j:
                i, j = j, i
            k = log1[j - i + 1]
            row = t1[k]
            x = row[i]
            y = row[j - (1 << k) + 1]
            m = x if d1[x] <= d1[y] else y
            total = w1[a] + w1[b] - 2 * wp1[m]
        a = c2[u]
        b = c2[v]
        if a != b:
            i = f2[a]
            j = f2[b]
            if i > j:
                i, j = j, i
            k = log2[j - i + 1]
            row = t2[k]
            x = row[i]
            y = row[j - (1 << k) + 1]
            m = x if d2[x] <= d2[y] else y
            total += w2[a] + w2[b] - 2 * wp2[m]
        return total

    return dist


class DistanceOracle:
    """O(1) exact distance and median queries for an embedded graph."""

    __slots__ = ("embedding", "lca1", "lca2", "_lookup", "_size2", "dist")

    def __init__(self, embedding: TwoTreeEmbedding):
        self.embedding = embedding
        self.lca1 = LcaStructure(embedding.tree1)
        self.lca2 = LcaStructure(embedding.tree2)
        size2 = embedding.tree2.n
        self._size2 = size2
        self._lookup = {
            c1 * size2 + c2: v for (c1, c2), v in embedding.lookup.items()
        }
        self.dist = _make_dist(
            embedding.n, embedding.coord1, embedding.coord2, self.lca1, self.lca2
        )

    @property
    def n(self) -> int:
        return self.embedding.n

    def median(self, x: int, y: int, z: int) -> int:
        """The unique vertex on shortest paths between each pair of x, y, z."""
        n = self.n
        if not (0 <= x < n and 0 <= y < n and 0 <= z < n):
            raise ValueError(f"vertex triple ({x}, {y}, {z}) out of range")
        e = self.embedding
        m1 = self.lca1.median(e.coord1[x], e.coord1[y], e.coord1[z])
        m2 = self.lca2.median(e.coord2[x], e.coord2[y], e.coord2[z])
        v = self._lookup.get(m1 * self._size2 + m2)
        if v is None:
            raise InternalDefectError(
                f"median coordinates ({m1}, {m2}) have no preimage vertex"
            )
        return v

    def dist_batch(self, us, vs):
        """Vectorized distances for parallel index arrays."""
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        if us.size and (us.min() < 0 or vs.min() < 0 or
                        us.max() >= self.n or vs.max() >= self.n):
            raise ValueError("vertex index out of range")
        e = self.embedding
        total = np.zeros(us.shape, dtype=np.int64)
        for coords, lca in ((e.coord1, self.lca1), (e.coord2, self.lca2)):
            views = lca.numpy_views()
            cs = np.asarray(coords, dtype=np.int64)
            a = cs[us]
            b = cs[vs]
            i = views["first"][a]
            j = views["first"][b]
            lo = np.minimum(i, j)
            hi = np.maximum(i, j)
            k = views["log"][hi - lo + 1]
            x = views["table"][k, lo]
            y = views["table"][k, hi - (1 << k.astype(np.int64)) + 1]
            dp = views["tour_depth"]
            m = np.where(dp[x] <= dp[y], x, y)
            total += views["wdepth"][a] + views["wdepth"][b] - 2 * views["tour_wdepth"][m]
        return total


def build_oracle(embedding: TwoTreeEmbedding) -> DistanceOracle:
    """Preprocess an embedding for constant-time queries."""
    return DistanceOracle(embedding)


# ---------------------------------------------------------------------------
# Continuous positions


@dataclass(frozen=True)
class DendronPosition:
    """A point of a metric tree: a vertex, or an interior point of an edge.

    Edge positions store the normalized edge (smaller endpoint first) and
    the integer offset from that smaller endpoint, strictly between 0 and
    the edge length.
    """

    vertex: int | None = None
    edge: tuple[int, int] | None = None
    offset: int = 0

    @classmethod
    def at_vertex(cls, v: int) -> "DendronPosition":
        return cls(vertex=v)

    @classmethod
    def on_edge(cls, u: int, v: int, offset: int, length: int) -> "DendronPosition":
        """Position at `offset` from u along an edge of `length`; snaps endpoints."""
        if not 0 <= offset <= length:
            raise ValueError(f"offset {offset} outside edge of length {length}")
        if offset == 0:
            return cls(vertex=u)
        if offset == length:
            return cls(vertex=v)
        if u < v:
            return cls(edge=(u, v), offset=offset)
        return cls(edge=(v, u), offset=length - offset)

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None


def dendron_dist(lca: LcaStructure, p: DendronPosition, q: DendronPosition) -> int:
    """Exact geodesic distance between two positions in a metric tree."""
    if p.is_vertex and q.is_vertex:
        return lca.distance(p.vertex, q.vertex)
    if not p.is_vertex and not q.is_vertex and p.edge == q.edge:
        return abs(p.offset - q.offset)
    tree = lca.tree

    def exits(pos):
        if pos.is_vertex:
            return ((pos.vertex, 0),)
        u, v = pos.edge
        length = tree.weight(tree.edge_id(u, v))
        return ((u, pos.offset), (v, length - pos.offset))

    return min(
        cp + lca.distance(x, y) + cq
        for x, cp in exits(p)
        for y, cq in exits(q)
    )


@dataclass(frozen=True)
class ComplexPoint:
    """A point of the square complex: a vertex, an edge point, or a cell point.

    Edge points carry the integer offset from the edge's smaller endpoint;
    cell points carry offsets (a, b) from the square's base corner (its
    smallest vertex id) along its color-1 and color-2 sides, in that order.
    """

    kind: str
    index: int
    a: int = 0
    b: int = 0

    @classmethod
    def at_vertex(cls, v: int) -> "ComplexPoint":
        return cls("vertex", v)

    @classmethod
    def on_edge(cls, edge_id: int, offset: int) -> "ComplexPoint":
        return cls("edge", edge_id, offset)

    @classmethod
    def in_square(cls, square_index: int, a: int, b: int) -> "ComplexPoint":
        return cls("square", square_index, a, b)


def point_coords(e: TwoTreeEmbedding, complex_, p: ComplexPoint):
    """Lift a complex point to its pair of tree positions.

    Cell points advance by `a` along the tree edge of the square's color-1
    side, oriented away from the base corner's component, and by `b` along
    the color-2 side; edge points move in one tree only.
    """
    if p.kind == "vertex":
        v = p.index
        return (
            DendronPosition.at_vertex(e.coord1[v]),
            DendronPosition.at_vertex(e.coord2[v]),
        )
    if p.kind == "edge":
        u, v = complex_.edges[p.index]
        length = complex_.weights[p.index]
        if not 0 <= p.a <= length:
            raise ValueError(f"offset {p.a} outside edge of length {length}")
        if e.edge_color(u, v) == 1:
            return (
                DendronPosition.on_edge(e.coord1[u], e.coord1[v], p.a, length),
                DendronPosition.at_vertex(e.coord2[u]),
            )
        return (
            DendronPosition.at_vertex(e.coord1[u]),
            DendronPosition.on_edge(e.coord2[u], e.coord2[v], p.a, length),
        )
    if p.kind == "square":
        sq = complex_.squares[p.index]
        base = min(sq.vertices())
        n1, n2 = sq.neighbors_of(base)
        if e.edge_color(base, n1) == 1:
            side1, side2 = n1, n2
        else:
            side1, side2 = n2, n1
        len1 = complex_.edge_weight(base, side1)
        len2 = complex_.edge_weight(base, side2)
        if not (0 <= p.a <= len1 and 0 <= p.b <= len2):
            raise ValueError(
                f"offsets ({p.a}, {p.b}) outside cell sides ({len1}, {len2})"
            )
        return (
            DendronPosition.on_edge(e.coord1[base], e.coord1[side1], p.a, len1),
            DendronPosition.on_edge(e.coord2[base], e.coord2[side2], p.b, len2),
        )
    raise ValueError(f"unknown complex point kind {p.kind!r}")


def point_dist(o: DistanceOracle, e: TwoTreeEmbedding, complex_,
               p: ComplexPoint, q: ComplexPoint) -> int:
    """Exact l1 geodesic distance between two points of the complex."""
    p1, p2 = point_coords(e, complex_, p)
    q1, q2 = point_coords(e, complex_, q)
    return dendron_dist(o.lca1, p1, q1) + dendron_dist(o.lca2, p2, q2)
