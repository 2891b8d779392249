"""Slow, obviously-correct oracles used to validate every fast path.

Everything here works from first definitions: intervals from an all-pairs
distance matrix, medians as triple interval intersections, edge classes from
the distance quadrangle test, convex splits and their crossings, and exact
automorphism/isomorphism search by backtracking.  All routines treat graphs
combinatorially (unit lengths) and are guarded for small inputs only.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import NotMedianError, TooLargeError
from .graph import Graph, bfs_distances, is_connected

MAX_REFERENCE_VERTICES = 250
MAX_AUTOMORPHISM_VERTICES = 24
MAX_ISOMORPHISM_VERTICES = 16


def _unit(g: Graph) -> Graph:
    return Graph(g.n, g.edges) if g.weighted else g


def distance_matrix(g: Graph):
    """All-pairs hop distances (weights ignored)."""
    gu = _unit(g)
    return [bfs_distances(gu, s) for s in range(g.n)]


def _interval_masks(g: Graph, dist=None):
    """interval(u, v) for all pairs, as vertex bitmasks."""
    n = g.n
    if dist is None:
        dist = distance_matrix(g)
    masks = [[0] * n for _ in range(n)]
    for u in range(n):
        du = dist[u]
        for v in range(u, n):
            dv = dist[v]
            duv = du[v]
            mask = 0
            for z in range(n):
                if du[z] + dv[z] == duv:
                    mask |= 1 << z
            masks[u][v] = mask
            masks[v][u] = mask
    return masks


def interval(g: Graph, u: int, v: int) -> set[int]:
    """Vertices on shortest u-v paths: {z : d(u,v) = d(u,z) + d(z,v)}."""
    gu = _unit(g)
    du = bfs_distances(gu, u)
    dv = bfs_distances(gu, v)
    duv = du[v]
    return {z for z in range(g.n) if du[z] + dv[z] == duv}


def is_median_graph(g: Graph):
    """Whether every vertex triple has exactly one median.

    Returns ``(True, None)`` or ``(False, (x, y, z))`` with a violating
    triple.  Requires a connected graph.
    """
    n = g.n
    if n > MAX_REFERENCE_VERTICES:
        raise TooLargeError(f"{n} vertices exceeds the reference limit")
    if not is_connected(g):
        raise ValueError("median check requires a connected graph")
    masks = _interval_masks(g)
    for x in range(n):
        mx = masks[x]
        for y in range(x + 1, n):
            mxy = mx[y]
            my = masks[y]
            for z in range(y + 1, n):
                inter = mxy & my[z] & mx[z]
                if inter == 0 or inter & (inter - 1):
                    return False, (x, y, z)
    return True, None


def median_vertex(g: Graph, x: int, y: int, z: int) -> int:
    """The unique vertex in I(x,y) ∩ I(y,z) ∩ I(z,x); raises if not unique."""
    masks = _interval_masks(g)
    inter = masks[x][y] & masks[y][z] & masks[x][z]
    if inter == 0 or inter & (inter - 1):
        raise NotMedianError(f"triple ({x}, {y}, {z}) has no unique median")
    return inter.bit_length() - 1


def theta_by_distance(g: Graph):
    """Edge partition from the distance quadrangle test, transitively closed.

    Edges uv, wx are related when d(u,w) + d(v,x) != d(u,x) + d(v,w).
    Returns one class id per edge, classes numbered by smallest edge id.
    """
    if g.n > MAX_REFERENCE_VERTICES:
        raise TooLargeError(f"{g.n} vertices exceeds the reference limit")
    dist = distance_matrix(g)
    m = g.m
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in combinations(range(m), 2):
        u, v = g.edges[i]
        w, x = g.edges[j]
        if dist[u][w] + dist[v][x] != dist[u][x] + dist[v][w]:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    classes = [-1] * m
    count = 0
    for e in range(m):
        r = find(e)
        if classes[r] == -1:
            classes[r] = count
            count += 1
        classes[e] = classes[r]
    return classes


@dataclass(frozen=True)
class ConvexSplit:
    """Complementary half-spaces {x : d(u,x) < d(v,x)} and its mirror."""

    edge: tuple[int, int]
    side_u: frozenset[int]
    side_v: frozenset[int]


@dataclass
class IncGraph:
    """Convex splits (one per edge class) with crossing pairs as edges."""

    splits: list[ConvexSplit]
    edges: set[tuple[int, int]]

    @property
    def n(self) -> int:
        return len(self.splits)

    def adjacency(self):
        adj = [[] for _ in range(self.n)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def is_bipartite(self) -> bool:
        adj = self.adjacency()
        color = [-1] * self.n
        for s in range(self.n):
            if color[s] != -1:
                continue
            color[s] = 0
            stack = [s]
            while stack:
                a = stack.pop()
                for b in adj[a]:
                    if color[b] == -1:
                        color[b] = color[a] ^ 1
                        stack.append(b)
                    elif color[b] == color[a]:
                        return False
        return True

    def to_graph(self) -> Graph:
        return Graph(self.n, sorted(self.edges))


def inc_graph(g: Graph) -> IncGraph:
    """Split-crossing graph of a median graph.

    One split per edge class, via the half-spaces of a representative edge;
    two splits cross when all four side intersections are nonempty.
    """
    ok, bad = is_median_graph(g)
    if not ok:
        raise NotMedianError(f"not median, witness triple {bad}")
    dist = distance_matrix(g)
    classes = theta_by_distance(g)
    count = max(classes) + 1 if classes else 0
    rep = [-1] * count
    for e in range(g.m - 1, -1, -1):
        rep[classes[e]] = e
    full = (1 << g.n) - 1
    splits = []
    masks = []
    for c in range(count):
        u, v = g.edges[rep[c]]
        side = 0
        for x in range(g.n):
            if dist[u][x] < dist[v][x]:
                side |= 1 << x
        splits.append(
            ConvexSplit(
                (u, v),
                frozenset(i for i in range(g.n) if side >> i & 1),
                frozenset(i for i in range(g.n) if not side >> i & 1),
            )
        )
        masks.append(side)
    edges = set()
    for a, b in combinations(range(count), 2):
        ma, mb = masks[a], masks[b]
        if ma & mb and ma & ~mb & full and ~ma & mb & full and ~ma & ~mb & full:
            edges.add((a, b))
    return IncGraph(splits, edges)


def reference_recognizer(g: Graph) -> bool:
    """Definitional recognizer: median graph with bipartite split-crossing graph.

    Disconnected inputs are rejected outright.
    """
    if g.n == 0 or not is_connected(g):
        return False
    ok, _ = is_median_graph(g)
    if not ok:
        return False
    return inc_graph(g).is_bipartite()


# ---------------------------------------------------------------------------
# Exact symmetry search


def _refine_profiles(g: Graph, dist):
    """Per-vertex invariants: distance multiset, refined once over neighborhoods."""
    n = g.n
    base = [tuple(sorted(dist[v])) for v in range(n)]
    adj = g.neighbors()
    return [
        (base[v], tuple(sorted(base[w] for w in adj[v])))
        for v in range(n)
    ]


def _search_maps(gsrc: Graph, gdst: Graph, count_all: bool):
    """Backtracking injections preserving adjacency both ways.

    Returns the number of complete maps when `count_all`, else 1 as soon as
    one exists (0 otherwise).
    """
    n = gsrc.n
    if n != gdst.n or gsrc.m != gdst.m:
        return 0
    dsrc = distance_matrix(gsrc)
    ddst = distance_matrix(gdst)
    psrc = _refine_profiles(gsrc, dsrc)
    pdst = _refine_profiles(gdst, ddst)
    if sorted(psrc) != sorted(pdst):
        return 0
    candidates = [[w for w in range(n) if pdst[w] == psrc[v]] for v in range(n)]
    order = sorted(range(n), key=lambda v: (len(candidates[v]), v))
    src_adj = [set(ns) for ns in gsrc.neighbors()]
    dst_adj = [set(ns) for ns in gdst.neighbors()]
    image = [-1] * n
    used = [False] * n
    found = 0

    def place(i):
        nonlocal found
        if i == n:
            found += 1
            return not count_all
        v = order[i]
        for w in candidates[v]:
            if used[w]:
                continue
            ok = True
            for j in range(i):
                u = order[j]
                if (u in src_adj[v]) != (image[u] in dst_adj[w]):
                    ok = False
                    break
            if not ok:
                continue
            image[v] = w
            used[w] = True
            if place(i + 1):
                return True
            used[w] = False
            image[v] = -1
        return False

    place(0)
    return found


def automorphism_count(g: Graph) -> int:
    """|aut(g)| by exact backtracking with distance-profile pruning."""
    if g.n > MAX_AUTOMORPHISM_VERTICES:
        raise TooLargeError(f"{g.n} vertices exceeds the automorphism limit")
    if g.n == 0:
        return 1
    return _search_maps(g, g, count_all=True)


def graphs_isomorphic(g: Graph, h: Graph) -> bool:
    """Exact isomorphism test for small graphs."""
    if max(g.n, h.n) > MAX_ISOMORPHISM_VERTICES:
        raise TooLargeError("inputs exceed the isomorphism limit")
    if g.n != h.n or g.m != h.m:
        return False
    if g.n == 0:
        return True
    return _search_maps(g, h, count_all=False) > 0
