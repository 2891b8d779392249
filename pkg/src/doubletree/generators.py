"""Constructors for named graph families and random test instances.

Covers the standard families (paths, cycles, grids, hypercubes, random
trees), simplex graphs and cogwheels, convex expansions of median graphs,
and random staircase polygons.  All randomized generators take explicit
seeds and are deterministic under them.
"""

from __future__ import annotations

import random

from .errors import NotConvexError, NotMedianError
from .graph import Graph
from .polygon import RectPolygon


def gen_path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs at least one vertex")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least three vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def gen_grid(rows: int, cols: int) -> Graph:
    """Grid graph (path product); vertex (r, c) has id r*cols + c."""
    if rows < 1 or cols < 1:
        raise ValueError("grid needs positive dimensions")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges)


def gen_hypercube(d: int) -> Graph:
    """d-cube on vertex set {0..2^d - 1}, edges between ids differing in one bit."""
    if d < 1:
        raise ValueError("hypercube needs positive dimension")
    n = 1 << d
    edges = []
    for v in range(n):
        for b in range(d):
            w = v ^ (1 << b)
            if v < w:
                edges.append((v, w))
    return Graph(n, edges)


def gen_random_tree(n: int, seed: int) -> Graph:
    """Random recursive tree: vertex i attaches to a uniform earlier vertex."""
    if n < 1:
        raise ValueError("tree needs at least one vertex")
    rng = random.Random(seed)
    return Graph(n, [(rng.randrange(i), i) for i in range(1, n)])


def disjoint_union(g: Graph, h: Graph) -> Graph:
    """g plus a shifted copy of h (h's vertex v becomes g.n + v)."""
    edges = list(g.edges) + [(u + g.n, v + g.n) for u, v in h.edges]
    if g.weighted or h.weighted:
        weights = [g.weight(i) for i in range(g.m)] + [h.weight(i) for i in range(h.m)]
        return Graph(g.n + h.n, edges, weights)
    return Graph(g.n + h.n, edges)


def relabel(g: Graph, perm) -> Graph:
    """Image of g under the vertex permutation ``perm`` (old id -> new id)."""
    weights = list(g.weights) if g.weighted else None
    return Graph(g.n, [(perm[u], perm[v]) for u, v in g.edges], weights)


# ---------------------------------------------------------------------------
# Simplex graphs


def _all_cliques(g: Graph):
    """Every complete subgraph (including the empty one), by recursive extension."""
    adj = [set(ns) for ns in g.neighbors()]
    out = [frozenset()]

    def extend(base, candidates):
        for i, v in enumerate(candidates):
            nxt = base | {v}
            out.append(frozenset(nxt))
            extend(nxt, [u for u in candidates[i + 1:] if u in adj[v]])

    extend(frozenset(), list(range(g.n)))
    return out


def simplex_graph(f: Graph) -> tuple[Graph, list[frozenset[int]]]:
    """Graph on the cliques of f, adjacent when they differ by one vertex.

    Returns the graph and the clique behind each vertex.  Vertex ids are
    assigned by (clique size, sorted members), so the empty clique is 0.
    Clique enumeration is exponential in the clique number; keep f small.
    """
    cliques = sorted(_all_cliques(f), key=lambda c: (len(c), sorted(c)))
    index = {c: i for i, c in enumerate(cliques)}
    edges = []
    for i, c in enumerate(cliques):
        for v in c:
            edges.append((index[c - {v}], i))
    return Graph(len(cliques), sorted(set(edges))), cliques


def cogwheel(n: int) -> Graph:
    """Simplex graph of the n-cycle: a hub joined to an alternating 2n-rim."""
    if n < 3:
        raise ValueError("cogwheel needs a cycle of length at least 3")
    return simplex_graph(gen_cycle(n))[0]


def iterated_simplex(f: Graph) -> Graph:
    """Simplex graph applied twice."""
    return simplex_graph(simplex_graph(f)[0])[0]


# ---------------------------------------------------------------------------
# Convex expansion


def peripheral_expansion(g: Graph, u_set) -> Graph:
    """Expand a median graph along a convex vertex set.

    Adds a matched copy of `u_set` with its induced adjacency; the result is
    again median (asserted on small outputs).  Inputs must be unweighted.
    """
    from .reference import interval, is_median_graph

    if g.weighted:
        raise ValueError("expansion is defined for unweighted graphs")
    u_set = sorted(set(u_set))
    if not u_set:
        raise NotConvexError("expansion set must be nonempty")
    for v in u_set:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
    ok, bad = is_median_graph(g)
    if not ok:
        raise NotMedianError(f"host graph is not median, witness triple {bad}")
    members = set(u_set)
    for a in u_set:
        for b in u_set:
            if a < b and not interval(g, a, b) <= members:
                raise NotConvexError(f"interval of ({a}, {b}) leaves the set")
    copy_id = {v: g.n + i for i, v in enumerate(u_set)}
    edges = list(g.edges)
    edges.extend((v, copy_id[v]) for v in u_set)
    adj = g.neighbors()
    for v in u_set:
        for w in adj[v]:
            if w in members and v < w:
                edges.append((copy_id[v], copy_id[w]))
    out = Graph(g.n + len(u_set), edges)
    if out.n <= 100:
        ok, bad = is_median_graph(out)
        if not ok:
            raise NotMedianError(f"expansion produced a non-median graph at {bad}")
    return out


# ---------------------------------------------------------------------------
# Polygons and special trees


def gen_staircase_polygon(steps: int, seed: int, min_step: int = 1,
                          max_step: int = 6) -> RectPolygon:
    """Monotone staircase with `steps` steps and random integer step sizes."""
    if steps < 1:
        raise ValueError("staircase needs at least one step")
    if not 1 <= min_step <= max_step:
        raise ValueError("need 1 <= min_step <= max_step")
    rng = random.Random(seed)
    widths = [rng.randint(min_step, max_step) for _ in range(steps)]
    drops = [rng.randint(min_step, max_step) for _ in range(steps)]
    xs = [0]
    for w in widths:
        xs.append(xs[-1] + w)
    heights = [sum(drops[i:]) for i in range(steps)]  # column i spans y in [0, heights[i]]
    corners = [(0, 0), (xs[steps], 0), (xs[steps], heights[steps - 1])]
    for i in range(steps - 1, 0, -1):
        corners.append((xs[i], heights[i]))
        corners.append((xs[i], heights[i - 1]))
    corners.append((0, heights[0]))
    return RectPolygon(corners)


def asymmetric_tree7() -> Graph:
    """Seven-vertex tree with trivial symmetry: legs of lengths 1, 2, 3."""
    return Graph(7, [(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6)])
