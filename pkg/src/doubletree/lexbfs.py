"""Lexicographic breadth-first search with truncated labels.

The ordering engine for recognition.  Runs in O(n + m) via partition
refinement over a queue of vertex sets: numbering a vertex v splits each
pending set S into S∩N(v) followed by S∖N(v).  Sets are intrusive doubly
linked lists kept in ascending vertex order, so "pop the smallest-index
vertex of the first set" is a head removal and the whole traversal is
deterministic.

Each vertex keeps a *label*: its earlier-numbered neighbors in numbering
order, truncated after three entries (consumers only distinguish label
sizes 0/1/2/>=3, and truncation keeps label storage linear).

The refinement loop is compiled with numba over a CSR adjacency view; the
first call per environment pays a one-off JIT cost that is cached on disk.
"""

from __future__ import annotations

from collections import deque

import numba
import numpy as np

from .errors import NotConnectedError
from .graph import Graph

_NIL = -1


_FIELDS = ("order", "number", "depth", "label_count", "label_first",
           "label_second", "label_third")


class LexBFSOrder:
    """A vertex numbering plus per-vertex truncated labels and parents.

    `order[i]` is the vertex numbered i; `number` is its inverse; `depth`
    is the breadth-first layer.  The label of v is exposed through
    :meth:`label`; ``parent(v)`` is the first label entry (None for the
    root).  `strategy` records whether the order came from LexBFS or the
    plain-BFS fallback.

    Data is held both as numpy arrays (for the vectorized recognition
    pipeline, see :meth:`arrays`) and as plain lists (the public fields);
    each view is materialized from the other on first use.
    """

    __slots__ = ("root", "strategy", "_np", "_py")

    def __init__(self, root: int, *, arrays=None, lists=None, strategy: str = "lexbfs"):
        if arrays is None and lists is None:
            raise ValueError("need arrays or lists")
        self.root = root
        self.strategy = strategy
        self._np = arrays
        self._py = lists

    def arrays(self):
        """The order data as a dict of int64 numpy arrays."""
        if self._np is None:
            self._np = {k: np.asarray(v, dtype=np.int64) for k, v in self._py.items()}
        return self._np

    def _lists(self):
        if self._py is None:
            self._py = {k: v.tolist() for k, v in self._np.items()}
        return self._py

    @property
    def order(self) -> list[int]:
        return self._lists()["order"]

    @property
    def number(self) -> list[int]:
        return self._lists()["number"]

    @property
    def depth(self) -> list[int]:
        return self._lists()["depth"]

    @property
    def label_count(self) -> list[int]:
        return self._lists()["label_count"]

    @property
    def label_first(self) -> list[int]:
        return self._lists()["label_first"]

    @property
    def label_second(self) -> list[int]:
        return self._lists()["label_second"]

    @property
    def label_third(self) -> list[int]:
        return self._lists()["label_third"]

    @property
    def n(self) -> int:
        data = self._py if self._py is not None else self._np
        return len(data["order"])

    def label(self, v: int) -> tuple[int, ...]:
        """Up to three earliest-numbered neighbors of v, in numbering order."""
        k = self.label_count[v]
        if k == 0:
            return ()
        if k == 1:
            return (self.label_first[v],)
        if k == 2:
            return (self.label_first[v], self.label_second[v])
        return (self.label_first[v], self.label_second[v], self.label_third[v])

    def label_size(self, v: int) -> int:
        """min(3, number of earlier-numbered neighbors of v)."""
        return self.label_count[v]

    def parent(self, v: int):
        return self.label_first[v] if self.label_count[v] else None

    def __repr__(self):
        return f"<{self.strategy} order n={self.n} root={self.root}>"


@numba.njit(cache=True)
def _csr_kernel(n, eu, ev):  # pragma: no cover - exercised via lexbfs
    """CSR adjacency with each block sorted ascending (two counting passes)."""
    m = eu.shape[0]
    cnt = np.zeros(n + 1, dtype=np.int64)
    for i in range(m):
        cnt[eu[i] + 1] += 1
        cnt[ev[i] + 1] += 1
    for i in range(n):
        cnt[i + 1] += cnt[i]
    # Arcs grouped by target; reading them back in target order makes the
    # second bucketing produce ascending neighbor lists.
    fill = cnt[:n].copy()
    src_by_dst = np.empty(2 * m, dtype=np.int64)
    dst_by_dst = np.empty(2 * m, dtype=np.int64)
    for i in range(m):
        u = eu[i]
        v = ev[i]
        p = fill[v]
        fill[v] = p + 1
        src_by_dst[p] = u
        dst_by_dst[p] = v
        p = fill[u]
        fill[u] = p + 1
        src_by_dst[p] = v
        dst_by_dst[p] = u
    indptr = np.zeros(n + 1, dtype=np.int64)
    for i in range(2 * m):
        indptr[src_by_dst[i] + 1] += 1
    for i in range(n):
        indptr[i + 1] += indptr[i]
    fill2 = indptr[:n].copy()
    indices = np.empty(2 * m, dtype=np.int64)
    for i in range(2 * m):
        s = src_by_dst[i]
        indices[fill2[s]] = dst_by_dst[i]
        fill2[s] += 1
    return indptr, indices


def _csr(g: Graph):
    if g.m == 0:
        return np.zeros(g.n + 1, dtype=np.int64), np.empty(0, dtype=np.int64)
    eu, ev = g.edge_arrays()
    return _csr_kernel(g.n, eu, ev)


@numba.njit(cache=True)
def _lexbfs_kernel(n, indptr, indices, root):  # pragma: no cover - via lexbfs
    NIL = -1
    narcs = indptr[n]
    maxc = n + narcs + 2  # every arc can split off at most one new set
    nxt = np.full(n, NIL, dtype=np.int64)
    prv = np.full(n, NIL, dtype=np.int64)
    vcls = np.zeros(n, dtype=np.int64)
    chead = np.full(maxc, NIL, dtype=np.int64)
    ctail = np.full(maxc, NIL, dtype=np.int64)
    csize = np.zeros(maxc, dtype=np.int64)
    cnext = np.full(maxc, NIL, dtype=np.int64)
    cprev = np.full(maxc, NIL, dtype=np.int64)
    twin = np.full(maxc, NIL, dtype=np.int64)
    twin_stamp = np.full(maxc, NIL, dtype=np.int64)
    chead[0] = root
    ctail[0] = root
    csize[0] = 1
    nclasses = 1
    if n > 1:
        prev = NIL
        for v in range(n):
            if v == root:
                continue
            if prev == NIL:
                chead[1] = v
            else:
                nxt[prev] = v
                prv[v] = prev
            vcls[v] = 1
            prev = v
        ctail[1] = prev
        csize[1] = n - 1
        cnext[0] = 1
        cprev[1] = 0
        nclasses = 2
    number = np.full(n, NIL, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    depth = np.zeros(n, dtype=np.int64)
    labn = np.zeros(n, dtype=np.int64)
    lab0 = np.full(n, NIL, dtype=np.int64)
    lab1 = np.full(n, NIL, dtype=np.int64)
    lab2 = np.full(n, NIL, dtype=np.int64)
    first = 0
    count = 0
    while first != NIL:
        # emptied sets stay in the chain; drop them when they surface
        if chead[first] == NIL:
            first = cnext[first]
            continue
        v = chead[first]
        h = nxt[v]
        if h == NIL:
            chead[first] = NIL
            first = cnext[first]
        else:
            prv[h] = NIL
            chead[first] = h
            csize[first] -= 1
        number[v] = count
        order[count] = v
        count += 1
        for ii in range(indptr[v], indptr[v + 1]):
            w = indices[ii]
            if number[w] != NIL:
                continue
            k = labn[w]
            if k == 0:
                lab0[w] = v
                labn[w] = 1
                depth[w] = depth[v] + 1
            elif k == 1:
                lab1[w] = v
                labn[w] = 2
            elif k == 2:
                lab2[w] = v
                labn[w] = 3
            c = vcls[w]
            if csize[c] == 1:
                continue  # S∩N(v) == S: nothing to split, position unchanged
            if twin_stamp[c] == v:
                t = twin[c]
            else:
                t = nclasses
                nclasses += 1
                twin[c] = t
                twin_stamp[c] = v
                p = cprev[c]
                cprev[t] = p
                cnext[t] = c
                cprev[c] = t
                if p != NIL:
                    cnext[p] = t
                if c == first:
                    first = t
            # Unlink w from c (neighbors arrive in ascending order, so both
            # c's remainder and t stay sorted).
            pw = prv[w]
            nw = nxt[w]
            if pw != NIL:
                nxt[pw] = nw
            else:
                chead[c] = nw
            if nw != NIL:
                prv[nw] = pw
            else:
                ctail[c] = pw
            csize[c] -= 1
            tw = ctail[t]
            if tw == NIL:
                chead[t] = w
                prv[w] = NIL
            else:
                nxt[tw] = w
                prv[w] = tw
            nxt[w] = NIL
            ctail[t] = w
            vcls[w] = t
            csize[t] += 1
    return order, number, depth, labn, lab0, lab1, lab2, count


def lexbfs(g: Graph, root: int = 0) -> LexBFSOrder:
    """Deterministic LexBFS order of a connected graph from `root`.

    Ties inside the first queue set are always broken toward the smallest
    vertex index.  Raises NotConnectedError when some vertex is unreachable.
    """
    n = g.n
    if n == 0:
        raise NotConnectedError("empty graph")
    if not 0 <= root < n:
        raise ValueError(f"root {root} out of range")
    indptr, indices = _csr(g)
    order, number, depth, labn, lab0, lab1, lab2, count = _lexbfs_kernel(
        n, indptr, indices, root
    )
    if count < n:
        raise NotConnectedError(f"only {count} of {n} vertices reachable from {root}")
    return LexBFSOrder(root, arrays={
        "order": order,
        "number": number,
        "depth": depth,
        "label_count": labn,
        "label_first": lab0,
        "label_second": lab1,
        "label_third": lab2,
    })


def bfs_order(g: Graph, root: int = 0) -> LexBFSOrder:
    """Plain breadth-first numbering with the same label bookkeeping.

    Fallback strategy for recognition: a BFS order supports the same checks
    as LexBFS provided the equal-label test is applied globally instead of
    to consecutive vertices only.
    """
    n = g.n
    if n == 0:
        raise NotConnectedError("empty graph")
    if not 0 <= root < n:
        raise ValueError(f"root {root} out of range")
    adj = g.neighbors()
    number = [_NIL] * n
    depth = [0] * n
    order = [root]
    number[root] = 0
    q = deque([root])
    while q:
        v = q.popleft()
        for w in adj[v]:
            if number[w] == _NIL:
                number[w] = len(order)
                depth[w] = depth[v] + 1
                order.append(w)
                q.append(w)
    if len(order) < n:
        raise NotConnectedError(f"only {len(order)} of {n} vertices reachable from {root}")
    labn = [0] * n
    lab0 = [_NIL] * n
    lab1 = [_NIL] * n
    lab2 = [_NIL] * n
    # Walk vertices by number and push each to its later neighbors, so labels
    # collect earlier neighbors in numbering order, as in lexbfs().
    for v in order:
        nv = number[v]
        for w in adj[v]:
            if number[w] > nv:
                k = labn[w]
                if k == 0:
                    lab0[w] = v
                    labn[w] = 1
                elif k == 1:
                    lab1[w] = v
                    labn[w] = 2
                elif k == 2:
                    lab2[w] = v
                    labn[w] = 3
    return LexBFSOrder(root, lists={
        "order": order,
        "number": number,
        "depth": depth,
        "label_count": labn,
        "label_first": lab0,
        "label_second": lab1,
        "label_third": lab2,
    }, strategy="bfs")
