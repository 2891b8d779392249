"""Simple rectilinear polygons, their grid networks, and exact l1 geodesics.

A polygon's *grid lines* are the maximal axis-parallel segments inside it
that pass through a corner.  Their crossings form the weighted *grid
network*; the rectangles between adjacent grid lines are the cells of the
induced rectangular complex.  Geodesic queries between arbitrary points go
through the *expanded network*, rebuilt after adding the lines through the
two query points; the two-tree route (see `build_polygon_oracle`) answers
the same queries in constant time after preprocessing.

All coordinates are integers; rational data must be pre-scaled.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass

import numpy as np

from .errors import (
    NotPartialDoubleTreeError,
    ParseError,
    PointOutsideError,
    WeightMismatchError,
)
from .graph import Graph, bfs_distances

Point = tuple[int, int]


# ---------------------------------------------------------------------------
# Polygons


class RectPolygon:
    """A simple rectilinear polygon given by its corners in boundary order.

    Consecutive corners differ in exactly one coordinate and sides alternate
    between horizontal and vertical; the boundary must be a simple closed
    curve.  Polygons are topologically closed: the boundary belongs to the
    polygon.
    """

    __slots__ = ("corners",)

    def __init__(self, corners):
        corners = [(int(x), int(y)) for x, y in corners]
        k = len(corners)
        if k < 4:
            raise ValueError("polygon needs at least four corners")
        if k % 2 != 0:
            raise ValueError("rectilinear polygon must have an even corner count")
        if len(set(corners)) != k:
            raise ValueError("corners must be distinct")
        horizontal = []
        for i, (x0, y0) in enumerate(corners):
            x1, y1 = corners[(i + 1) % k]
            if (x0 == x1) == (y0 == y1):
                raise ValueError(
                    f"side {i} from ({x0}, {y0}) to ({x1}, {y1}) is not axis-parallel"
                )
            horizontal.append(y0 == y1)
        for i in range(k):
            if horizontal[i] == horizontal[(i + 1) % k]:
                raise ValueError(f"sides {i} and {(i + 1) % k} do not alternate")
        self.corners = tuple(corners)
        self._check_simple()

    @property
    def k(self) -> int:
        return len(self.corners)

    def sides(self):
        """Boundary segments as ((x0, y0), (x1, y1)) in order."""
        cs = self.corners
        return [(cs[i], cs[(i + 1) % self.k]) for i in range(self.k)]

    def _check_simple(self):
        # Vectorized pairwise tests: same-orientation sides may not touch at
        # all; perpendicular sides may only cross when adjacent on the
        # boundary (where they share exactly the common corner).
        k = self.k
        hy, hlo, hhi, hidx = [], [], [], []
        vx, vlo, vhi, vidx = [], [], [], []
        for i, ((x0, y0), (x1, y1)) in enumerate(self.sides()):
            if y0 == y1:
                hy.append(y0)
                hlo.append(min(x0, x1))
                hhi.append(max(x0, x1))
                hidx.append(i)
            else:
                vx.append(x0)
                vlo.append(min(y0, y1))
                vhi.append(max(y0, y1))
                vidx.append(i)
        hy, hlo, hhi = np.array(hy), np.array(hlo), np.array(hhi)
        vx, vlo, vhi = np.array(vx), np.array(vlo), np.array(vhi)
        same_y = np.equal.outer(hy, hy)
        overlap = (hlo[:, None] <= hhi[None, :]) & (hlo[None, :] <= hhi[:, None])
        bad = same_y & overlap
        np.fill_diagonal(bad, False)
        if bad.any():
            a, b = np.argwhere(bad)[0]
            raise ValueError(
                f"horizontal sides {hidx[a]} and {hidx[b]} touch: boundary is not simple"
            )
        same_x = np.equal.outer(vx, vx)
        overlap = (vlo[:, None] <= vhi[None, :]) & (vlo[None, :] <= vhi[:, None])
        bad = same_x & overlap
        np.fill_diagonal(bad, False)
        if bad.any():
            a, b = np.argwhere(bad)[0]
            raise ValueError(
                f"vertical sides {vidx[a]} and {vidx[b]} touch: boundary is not simple"
            )
        cross = (
            (hlo[:, None] <= vx[None, :])
            & (vx[None, :] <= hhi[:, None])
            & (vlo[None, :] <= hy[:, None])
            & (hy[:, None] <= vhi[None, :])
        )
        hi = np.array(hidx)[:, None]
        vi = np.array(vidx)[None, :]
        gap = np.abs(hi - vi)
        adjacent = (gap == 1) | (gap == k - 1)
        bad = cross & ~adjacent
        if bad.any():
            a, b = np.argwhere(bad)[0]
            raise ValueError(
                f"sides {hidx[a]} and {vidx[b]} cross: boundary is not simple"
            )

    def contains_point(self, p: Point) -> bool:
        """Membership including the boundary."""
        px, py = p
        for (x0, y0), (x1, y1) in self.sides():
            if y0 == y1:
                if py == y0 and min(x0, x1) <= px <= max(x0, x1):
                    return True
            else:
                if px == x0 and min(y0, y1) <= py <= max(y0, y1):
                    return True
        crossings = 0
        for (x0, y0), (x1, y1) in self.sides():
            if x0 == x1 and x0 > px and min(y0, y1) <= py < max(y0, y1):
                crossings += 1
        return crossings % 2 == 1

    def area(self) -> int:
        """Enclosed area by the shoelace formula."""
        total = 0
        cs = self.corners
        for i, (x0, y0) in enumerate(cs):
            x1, y1 = cs[(i + 1) % self.k]
            total += x0 * y1 - x1 * y0
        return abs(total) // 2

    def scaled(self, factor: int) -> "RectPolygon":
        if factor < 1:
            raise ValueError("scale factor must be a positive integer")
        return RectPolygon([(x * factor, y * factor) for x, y in self.corners])

    def __eq__(self, other):
        return isinstance(other, RectPolygon) and self.corners == other.corners

    __hash__ = None

    def __repr__(self):
        return f"<polygon k={self.k}>"


def parse_polygon(text) -> RectPolygon:
    """Parse the polygon file format: `polygon k` then k lines `x y`."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((line_no, line))
    if not lines:
        raise ParseError("empty polygon file")
    line_no, head = lines[0]
    tokens = head.split()
    if len(tokens) != 2 or tokens[0] != "polygon":
        raise ParseError("first line must be 'polygon <corner count>'", line_no)
    try:
        k = int(tokens[1])
    except ValueError:
        raise ParseError(f"bad corner count {tokens[1]!r}", line_no) from None
    if len(lines) - 1 != k:
        raise ParseError(f"expected {k} corner lines, found {len(lines) - 1}", line_no)
    corners = []
    for line_no, line in lines[1:]:
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError("corner line must be 'x y'", line_no)
        try:
            corners.append((int(tokens[0]), int(tokens[1])))
        except ValueError:
            raise ParseError(f"non-integer corner in {line!r}", line_no) from None
    try:
        return RectPolygon(corners)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_polygon(p: RectPolygon) -> str:
    lines = [f"polygon {p.k}"]
    lines.extend(f"{x} {y}" for x, y in p.corners)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Grid arrangements


@dataclass(frozen=True)
class Cell:
    """One rectangle between adjacent grid lines, with its corner vertex ids."""

    x1: int
    y1: int
    x2: int
    y2: int
    lower_left: int
    lower_right: int
    upper_left: int
    upper_right: int

    def corner_ids(self):
        return (self.lower_left, self.lower_right, self.upper_left, self.upper_right)

    def contains(self, p: Point) -> bool:
        return self.x1 <= p[0] <= self.x2 and self.y1 <= p[1] <= self.y2


@dataclass
class GridArrangement:
    """Grid lines of a polygon, their crossing network, and its cells.

    `network` vertex ids follow (x, y) lexicographic order of the crossing
    coordinates; `coords` maps ids back to points.
    """

    polygon: RectPolygon
    vlines: list[tuple[int, int, int]]  # (x, ylo, yhi)
    hlines: list[tuple[int, int, int]]  # (y, xlo, xhi)
    network: Graph
    coords: list[Point]
    cells: list[Cell]

    def vertex_at(self, p: Point):
        if not hasattr(self, "_vertex_index"):
            self._vertex_index = {c: i for i, c in enumerate(self.coords)}
        return self._vertex_index.get((p[0], p[1]))


def _segments_of(cov, anchor_lists, coords_along):
    """Maximal True-runs per line, filtered to runs containing an anchor.

    `cov[i]` covers the cell-intervals along line i; a run [j1, j2] spans the
    coordinate interval [coords_along[j1], coords_along[j2 + 1]].  Returns a
    list of (line_index, j1, j2).
    """
    padded = np.zeros((cov.shape[0], cov.shape[1] + 2), dtype=np.int8)
    padded[:, 1:-1] = cov
    diff = np.diff(padded, axis=1)
    out = []
    for i in range(cov.shape[0]):
        anchors = anchor_lists[i]
        if not anchors:
            continue
        starts = np.nonzero(diff[i] == 1)[0]
        ends = np.nonzero(diff[i] == -1)[0]
        for j1, j2 in zip(starts, ends):
            lo = coords_along[j1]
            hi = coords_along[j2]
            pos = bisect_left(anchors, lo)
            if pos < len(anchors) and anchors[pos] <= hi:
                out.append((i, int(j1), int(j2 - 1)))
    return out


def _arrangement(polygon: RectPolygon, extra_points=()) -> GridArrangement:
    anchors = list(polygon.corners) + [(int(x), int(y)) for x, y in extra_points]
    xs = sorted({x for x, _ in anchors})
    ys = sorted({y for _, y in anchors})
    xi = {x: i for i, x in enumerate(xs)}
    yi = {y: j for j, y in enumerate(ys)}
    ncol, nrow = len(xs), len(ys)

    # Parity of vertical boundary sides left of (or on the left edge of) each
    # unit cell of the compressed grid decides insideness.
    toggles = np.zeros((ncol, max(nrow - 1, 1)), dtype=np.int8)
    for (x0, y0), (x1, y1) in polygon.sides():
        if x0 == x1:
            jlo, jhi = yi[min(y0, y1)], yi[max(y0, y1)]
            toggles[xi[x0], jlo:jhi] ^= 1
    inside = (np.cumsum(toggles, axis=0) & 1).astype(bool)
    if ncol >= 1 and inside[ncol - 1].any():
        raise AssertionError("parity sweep leaked outside the polygon")
    cells_inside = inside[: ncol - 1, :]

    vcov = np.zeros((ncol, max(nrow - 1, 1)), dtype=bool)
    vcov[:-1] |= cells_inside
    vcov[1:] |= cells_inside
    hcov = np.zeros((nrow, max(ncol - 1, 1)), dtype=bool)
    hcov[:-1] |= cells_inside.T
    hcov[1:] |= cells_inside.T

    anchors_at_x = {x: [] for x in xs}
    anchors_at_y = {y: [] for y in ys}
    for x, y in sorted(set(anchors)):
        anchors_at_x[x].append(y)
        anchors_at_y[y].append(x)
    for lst in anchors_at_x.values():
        lst.sort()
    for lst in anchors_at_y.values():
        lst.sort()

    vsegs = _segments_of(vcov, [anchors_at_x[x] for x in xs], ys)
    hsegs = _segments_of(hcov, [anchors_at_y[y] for y in ys], xs)

    vmask = np.zeros((ncol, nrow), dtype=bool)
    for i, j1, j2 in vsegs:
        vmask[i, j1 : j2 + 2] = True
    hmask = np.zeros((ncol, nrow), dtype=bool)
    for j, i1, i2 in hsegs:
        hmask[i1 : i2 + 2, j] = True
    mask = vmask & hmask
    ids = np.cumsum(mask.ravel()).reshape(mask.shape) - 1  # valid where mask

    nv = int(mask.sum())
    coords: list[Point] = [None] * nv
    for i, j in np.argwhere(mask):
        coords[ids[i, j]] = (xs[i], ys[j])

    edges = []
    weights = []
    up_id = [-1] * nv
    right_id = [-1] * nv
    for i, j1, j2 in vsegs:
        js = np.nonzero(mask[i, j1 : j2 + 2])[0]
        col = ids[i]
        for a, b in zip(js, js[1:]):
            u = int(col[j1 + a])
            v = int(col[j1 + b])
            edges.append((u, v) if u < v else (v, u))
            weights.append(int(ys[j1 + b] - ys[j1 + a]))
            up_id[u] = v
    for j, i1, i2 in hsegs:
        is_ = np.nonzero(mask[i1 : i2 + 2, j])[0]
        row = ids[:, j]
        for a, b in zip(is_, is_[1:]):
            u = int(row[i1 + a])
            v = int(row[i1 + b])
            edges.append((u, v) if u < v else (v, u))
            weights.append(int(xs[i1 + b] - xs[i1 + a]))
            right_id[u] = v

    network = Graph(nv, edges, weights)

    cells = []
    for v in range(nv):
        r = right_id[v]
        u = up_id[v]
        if r < 0 or u < 0:
            continue
        ur = up_id[r]
        if ur >= 0 and ur == right_id[u]:
            (x1, y1), (x2, y2) = coords[v], coords[ur]
            cells.append(Cell(x1, y1, x2, y2, v, r, u, ur))

    vlines = [(xs[i], ys[j1], ys[j2 + 1]) for i, j1, j2 in vsegs]
    hlines = [(ys[j], xs[i1], xs[i2 + 1]) for j, i1, i2 in hsegs]
    return GridArrangement(polygon, vlines, hlines, network, coords, cells)


def grid_network(polygon: RectPolygon) -> GridArrangement:
    """Grid lines through the corners, their crossing network, and cells."""
    return _arrangement(polygon)


def expanded_network(polygon: RectPolygon, s: Point, t: Point):
    """Arrangement rebuilt with the lines through `s` and `t` added.

    Returns (arrangement, id of s, id of t).  Raises PointOutsideError when
    a query point is not in the (closed) polygon.
    """
    for p in (s, t):
        if not polygon.contains_point(p):
            raise PointOutsideError(p)
    arr = _arrangement(polygon, (s, t))
    sid = arr.vertex_at(s)
    tid = arr.vertex_at(t)
    if sid is None or tid is None:
        raise AssertionError("query points must appear in their own expanded network")
    return arr, sid, tid


def geodesic_dist(polygon: RectPolygon, s: Point, t: Point) -> int:
    """Exact l1 geodesic distance between two points of the polygon."""
    s = (int(s[0]), int(s[1]))
    t = (int(t[0]), int(t[1]))
    if s == t:
        if not polygon.contains_point(s):
            raise PointOutsideError(s)
        return 0
    arr, sid, tid = expanded_network(polygon, s, t)
    d = bfs_distances(arr.network, sid)[tid]
    return int(d)


# ---------------------------------------------------------------------------
# Cell complexes over recognized networks


@dataclass
class CellComplex:
    """Vertices, weighted edges, and square cells of a recognized network."""

    n: int
    edges: list[tuple[int, int]]
    weights: list[int]
    squares: list  # recognition.Square

    def edge_index(self):
        if not hasattr(self, "_edge_index"):
            self._edge_index = {e: i for i, e in enumerate(self.edges)}
        return self._edge_index

    def edge_weight(self, u: int, v: int) -> int:
        return self.weights[self.edge_index()[(u, v) if u < v else (v, u)]]


def complex_from_network(g: Graph) -> CellComplex:
    """Derive the square complex of a network whose label checks pass.

    The squares are the listed 4-cycles; opposite sides of each square must
    carry equal lengths (WeightMismatchError otherwise).
    """
    from .graph import is_bipartite
    from .lexbfs import lexbfs
    from .recognition import NotBipartite, check_labels, list_squares

    colors, walk = is_bipartite(g)
    if colors is None:
        raise NotPartialDoubleTreeError(NotBipartite(walk))
    order = lexbfs(g, 0)
    bad = check_labels(g, order)
    if bad is not None:
        raise NotPartialDoubleTreeError(bad)
    squares = list_squares(g, order)
    weights = [g.weight(i) for i in range(g.m)]
    ids = g.edge_ids()

    def w(a, b):
        return weights[ids[(a, b) if a < b else (b, a)]]

    for sq in squares:
        if w(sq.apex, sq.left) != w(sq.right, sq.across) or w(
            sq.apex, sq.right
        ) != w(sq.left, sq.across):
            raise WeightMismatchError(
                f"square at apex {sq.apex} has unequal opposite side lengths"
            )
    return CellComplex(g.n, list(g.edges), weights, squares)


def check_ramified(complex_: CellComplex):
    """Whether the underlying network is a valid two-tree-embeddable complex.

    Returns (verdict, RecognitionReport); the report carries the per-vertex
    link bipartitions on acceptance and the witness otherwise.
    """
    from .recognition import recognize

    g = Graph(complex_.n, complex_.edges, list(complex_.weights))
    report = recognize(g)
    return report.accepted, report


# ---------------------------------------------------------------------------
# Locating continuous points


def locate_point(arr: GridArrangement, emb, complex_: CellComplex, p: Point):
    """Resolve a polygon point to a combinatorial position in the complex.

    Preference order: network vertex, then edge interior, then cell interior
    (points on shared boundaries always resolve to the lower-dimensional
    face, so the choice is unambiguous).
    """
    from .oracle import ComplexPoint

    p = (int(p[0]), int(p[1]))
    if not arr.polygon.contains_point(p):
        raise PointOutsideError(p)
    vid = arr.vertex_at(p)
    if vid is not None:
        return ComplexPoint.at_vertex(vid)
    px, py = p
    for eid, (u, v) in enumerate(arr.network.edges):
        (x0, y0), (x1, y1) = arr.coords[u], arr.coords[v]
        if x0 == x1 == px and min(y0, y1) < py < max(y0, y1):
            return ComplexPoint.on_edge(eid, py - min(y0, y1))
        if y0 == y1 == py and min(x0, x1) < px < max(x0, x1):
            return ComplexPoint.on_edge(eid, px - min(x0, x1))
    cell = next((c for c in arr.cells if c.contains(p)), None)
    if cell is None:
        raise AssertionError(f"point {p} is inside the polygon but in no cell")
    square_index = _square_of_cell(arr, complex_, cell)
    sq = complex_.squares[square_index]
    base = min(sq.vertices())
    n1, n2 = sq.neighbors_of(base)
    if emb.coord1[n1] != emb.coord1[base]:
        color1_nbr, color2_nbr = n1, n2
    else:
        color1_nbr, color2_nbr = n2, n1
    bx, by = arr.coords[base]
    a = abs(px - bx) if arr.coords[color1_nbr][0] != bx else abs(py - by)
    b = abs(px - bx) if arr.coords[color2_nbr][0] != bx else abs(py - by)
    return ComplexPoint.in_square(square_index, a, b)


def _square_of_cell(arr, complex_, cell):
    if not hasattr(arr, "_square_by_corners"):
        arr._square_by_corners = {
            frozenset(sq.vertices()): i for i, sq in enumerate(complex_.squares)
        }
    return arr._square_by_corners[frozenset(cell.corner_ids())]


# ---------------------------------------------------------------------------
# End-to-end polygon oracle


class PolygonDistanceOracle:
    """Constant-time geodesic queries between points of a polygon.

    Wraps the full pipeline: grid network, two-tree embedding, LCA oracle,
    and the cell complex used to lift continuous points.
    """

    def __init__(self, polygon: RectPolygon):
        from .factorization import embed
        from .oracle import build_oracle

        self.polygon = polygon
        self.arrangement = grid_network(polygon)
        self.embedding = embed(self.arrangement.network)
        self.oracle = build_oracle(self.embedding)
        self.complex = complex_from_network(self.arrangement.network)

    def locate(self, p: Point):
        return locate_point(self.arrangement, self.embedding, self.complex, p)

    def dist(self, p: Point, q: Point) -> int:
        from .oracle import point_dist

        return point_dist(
            self.oracle, self.embedding, self.complex, self.locate(p), self.locate(q)
        )


def build_polygon_oracle(polygon: RectPolygon) -> PolygonDistanceOracle:
    return PolygonDistanceOracle(polygon)
