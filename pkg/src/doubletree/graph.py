"""Graph and network primitives: the input type, parsing, and basic traversals.

Everything downstream (recognition, factorization, oracles, polygons) consumes
the `Graph` defined here.  Vertices are always the integers ``0..n-1``; edges
are unordered pairs with optional positive integer lengths ("networks").
"""

from __future__ import annotations

import math
from collections import deque
from heapq import heappop, heappush

from .errors import ParseError

INF = math.inf


class Graph:
    """A finite simple undirected graph with optional integer edge lengths.

    Edges are normalized to ``(min, max)`` pairs and kept in construction
    order; `weights` is a parallel list of positive integers, or None for
    unit lengths.  Instances are treated as immutable after construction.
    """

    __slots__ = ("n", "edges", "weights", "_neighbors", "_incidence", "_edge_ids",
                 "_edge_np")

    def __init__(self, n: int, edges, weights=None):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        norm = []
        seen = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for {n} vertices")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            norm.append(e)
        if weights is not None:
            weights = list(weights)
            if len(weights) != len(norm):
                raise ValueError("weights must be parallel to edges")
            for w in weights:
                if not isinstance(w, int) or isinstance(w, bool) or w <= 0:
                    raise ValueError(f"edge length must be a positive integer, got {w!r}")
        self.n = n
        self.edges = norm
        self.weights = weights
        self._neighbors = None
        self._incidence = None
        self._edge_ids = None
        self._edge_np = None

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def weighted(self) -> bool:
        return self.weights is not None

    def weight(self, eid: int) -> int:
        return 1 if self.weights is None else self.weights[eid]

    def neighbors(self):
        """Adjacency lists with each list sorted ascending (cached)."""
        if self._neighbors is None:
            adj = [[] for _ in range(self.n)]
            for u, v in self.edges:
                adj[u].append(v)
                adj[v].append(u)
            for lst in adj:
                lst.sort()
            self._neighbors = adj
        return self._neighbors

    def incidence(self):
        """Per-vertex lists of ``(neighbor, edge_id)`` sorted by neighbor (cached)."""
        if self._incidence is None:
            buckets = [[] for _ in range(self.n)]
            for eid, (u, v) in enumerate(self.edges):
                buckets[v].append((u, eid))
                buckets[u].append((v, eid))
            inc = [[] for _ in range(self.n)]
            for t in range(self.n):
                for s, eid in buckets[t]:
                    inc[s].append((t, eid))
            self._incidence = inc
        return self._incidence

    def edge_ids(self):
        """Mapping from normalized vertex pair to edge id (cached)."""
        if self._edge_ids is None:
            self._edge_ids = {e: i for i, e in enumerate(self.edges)}
        return self._edge_ids

    def edge_arrays(self):
        """Edge endpoints as a pair of int64 numpy arrays (cached)."""
        if self._edge_np is None:
            import numpy as np

            if self.m == 0:
                self._edge_np = (np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64))
            else:
                arr = np.asarray(self.edges, dtype=np.int64)
                self._edge_np = (arr[:, 0].copy(), arr[:, 1].copy())
        return self._edge_np

    def edge_id(self, u: int, v: int) -> int:
        return self.edge_ids()[(u, v) if u < v else (v, u)]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edge_ids()

    def degree(self, v: int) -> int:
        return len(self.neighbors()[v])

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        if self.n != other.n or set(self.edges) != set(other.edges):
            return False
        mine = {e: self.weight(i) for i, e in enumerate(self.edges)}
        theirs = {e: other.weight(i) for i, e in enumerate(other.edges)}
        return mine == theirs

    __hash__ = None

    def __repr__(self):
        tag = "network" if self.weighted else "graph"
        return f"<{tag} n={self.n} m={self.m}>"


_HEADER_WORDS = {"weighted", "tree"}


def _parse(text) -> tuple[Graph, dict[int, int]]:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    weighted = False
    tree = False
    seen_content = False
    raw_edges = []  # (u, v, w, line_no)
    raw_vertices = []  # (u, line_no)
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if not seen_content and all(t in _HEADER_WORDS for t in tokens):
            weighted = "weighted" in tokens
            tree = "tree" in tokens
            seen_content = True
            continue
        seen_content = True
        if tokens[0] == "vertex":
            if len(tokens) != 2:
                raise ParseError("vertex line must be 'vertex <id>'", line_no)
            try:
                u = int(tokens[1])
            except ValueError:
                raise ParseError(f"bad vertex id {tokens[1]!r}", line_no) from None
            if u < 0:
                raise ParseError(f"negative vertex id {u}", line_no)
            raw_vertices.append((u, line_no))
            continue
        want = 3 if weighted else 2
        if len(tokens) != want:
            raise ParseError(
                f"expected {want} fields on an edge line, got {len(tokens)}", line_no
            )
        try:
            nums = [int(t) for t in tokens]
        except ValueError:
            raise ParseError(f"non-integer field in {line!r}", line_no) from None
        u, v = nums[0], nums[1]
        if u < 0 or v < 0:
            raise ParseError("negative vertex id", line_no)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", line_no)
        w = nums[2] if weighted else 1
        if w <= 0:
            raise ParseError(f"nonpositive edge length {w}", line_no)
        raw_edges.append((u, v, w, line_no))

    ids = sorted({u for u, _ in raw_vertices} | {x for u, v, _, _ in raw_edges for x in (u, v)})
    mapping = {orig: i for i, orig in enumerate(ids)}
    seen_pairs = {}
    edges = []
    weights = []
    for u, v, w, line_no in raw_edges:
        a, b = mapping[u], mapping[v]
        e = (a, b) if a < b else (b, a)
        if e in seen_pairs:
            raise ParseError(f"duplicate edge {u} {v} (first seen on line {seen_pairs[e]})", line_no)
        seen_pairs[e] = line_no
        edges.append(e)
        weights.append(w)
    g = Graph(len(ids), edges, weights if weighted else None)
    if tree and not is_tree(g):
        raise ParseError("header declares a tree but the graph is not a tree")
    return g, mapping


def parse_graph(text) -> Graph:
    """Parse the graph file format (see README); vertex ids are compacted to 0..n-1."""
    return _parse(text)[0]


def parse_graph_with_map(text) -> tuple[Graph, dict[int, int]]:
    """Like `parse_graph` but also returns the original-id -> compact-id map."""
    return _parse(text)


def format_graph(g: Graph, *, tree: bool = False) -> str:
    """Serialize `g` in the graph file format; deterministic for equal inputs."""
    lines = []
    header = []
    if tree:
        header.append("tree")
    if g.weighted:
        header.append("weighted")
    if header:
        lines.append(" ".join(header))
    touched = [False] * g.n
    for u, v in g.edges:
        touched[u] = touched[v] = True
    for v in range(g.n):
        if not touched[v]:
            lines.append(f"vertex {v}")
    for eid, (u, v) in enumerate(g.edges):
        if g.weighted:
            lines.append(f"{u} {v} {g.weights[eid]}")
        else:
            lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n" if lines else ""


def bfs_distances(g: Graph, source: int):
    """Exact shortest-path distances from `source`; `math.inf` marks unreachable.

    Unit lengths use breadth-first search; weighted graphs use Dijkstra
    (lengths are positive by construction).
    """
    if not 0 <= source < g.n:
        raise ValueError(f"source {source} out of range")
    if not g.weighted:
        dist = [INF] * g.n
        dist[source] = 0
        q = deque([source])
        adj = g.neighbors()
        while q:
            v = q.popleft()
            d = dist[v] + 1
            for w in adj[v]:
                if dist[w] is INF:
                    dist[w] = d
                    q.append(w)
        return dist
    dist = [INF] * g.n
    dist[source] = 0
    inc = g.incidence()
    weights = g.weights
    heap = [(0, source)]
    while heap:
        d, v = heappop(heap)
        if d > dist[v]:
            continue
        for w, eid in inc[v]:
            nd = d + weights[eid]
            if nd < dist[w]:
                dist[w] = nd
                heappush(heap, (nd, w))
    return dist


def connected_components(g: Graph):
    """Components as lists of vertices; each component sorted, in order of smallest member."""
    adj = g.neighbors()
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        q = deque([s])
        while q:
            v = q.popleft()
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    q.append(w)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    """True when `g` has exactly one connected component (empty graphs fail)."""
    if g.n == 0:
        return False
    adj = g.neighbors()
    seen = [False] * g.n
    seen[0] = True
    q = deque([0])
    count = 1
    while q:
        v = q.popleft()
        for w in adj[v]:
            if not seen[w]:
                seen[w] = True
                count += 1
                q.append(w)
    return count == g.n


def is_tree(g: Graph) -> bool:
    return g.n > 0 and g.m == g.n - 1 and is_connected(g)


def is_bipartite(g: Graph):
    """Two-coloring certificate, or an odd closed walk.

    Returns ``(colors, None)`` with ``colors[v]`` in {0, 1}, or
    ``(None, walk)`` where `walk` is a vertex tuple with equal endpoints,
    consecutive entries adjacent, and an odd number of steps.
    """
    adj = g.neighbors()
    color = [-1] * g.n
    parent = [-1] * g.n
    for s in range(g.n):
        if color[s] != -1:
            continue
        color[s] = 0
        q = deque([s])
        while q:
            v = q.popleft()
            for w in adj[v]:
                if color[w] == -1:
                    color[w] = color[v] ^ 1
                    parent[w] = v
                    q.append(w)
                elif color[w] == color[v]:
                    return None, _odd_walk(parent, v, w)
    return color, None


def _odd_walk(parent, u, v):
    # Concatenate tree paths from u and v up to their meeting point, close with uv.
    up, vp = [u], [v]
    seen = {u: 0}
    x = u
    while parent[x] != -1:
        x = parent[x]
        seen[x] = len(up)
        up.append(x)
    x = v
    while x not in seen:
        x = parent[x]
        vp.append(x)
    up = up[: seen[x] + 1]
    walk = list(reversed(up)) + vp[:-1]
    walk.append(walk[0])
    return tuple(walk)


def cut_vertices(g: Graph):
    """Articulation points via iterative depth-first lowpoints."""
    n = g.n
    adj = g.neighbors()
    disc = [-1] * n
    low = [0] * n
    parent = [-1] * n
    out = set()
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        stack = [(root, 0)]
        while stack:
            v, i = stack[-1]
            if i < len(adj[v]):
                stack[-1] = (v, i + 1)
                w = adj[v][i]
                if disc[w] == -1:
                    parent[w] = v
                    if v == root:
                        root_children += 1
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, 0))
                elif w != parent[v] and disc[w] < low[v]:
                    low[v] = disc[w]
            else:
                stack.pop()
                p = parent[v]
                if p != -1:
                    if low[v] < low[p]:
                        low[p] = low[v]
                    if p != root and low[v] >= disc[p]:
                        out.add(p)
        if root_children >= 2:
            out.add(root)
    return out
