"""Simple undirected graphs on at most 64 vertices, stored as adjacency bit masks.

Vertices are ``0 .. n-1``.  ``adj[i]`` has bit ``j`` set iff ``i`` and ``j``
are adjacent.  Graphs are immutable; every operation returns a new value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Tuple

MAX_ORDER = 64

Edge = Tuple[int, int]


class GraphError(ValueError):
    """Invalid graph construction or parameters."""


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _check_order(n: int) -> None:
    if not 1 <= n <= MAX_ORDER:
        raise GraphError(f"order must lie in [1, {MAX_ORDER}], got {n}")


@dataclass(frozen=True)
class Graph:
    n: int
    adj: Tuple[int, ...]

    def __post_init__(self) -> None:
        _check_order(self.n)
        if len(self.adj) != self.n:
            raise GraphError("adjacency length does not match order")
        full = (1 << self.n) - 1
        for i, row in enumerate(self.adj):
            if row & ~full:
                raise GraphError(f"row {i} references a vertex >= n")
            if row >> i & 1:
                raise GraphError(f"self-loop at vertex {i}")
            for j in bits(row):
                if not self.adj[j] >> i & 1:
                    raise GraphError(f"asymmetric adjacency between {i} and {j}")

    # -- basic queries -------------------------------------------------

    @property
    def size(self) -> int:
        """Number of edges, written ε(G) in the literature."""
        return sum(popcount(r) for r in self.adj) // 2

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def degrees(self) -> list[int]:
        return [popcount(r) for r in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[Edge]:
        """Edges ``(u, v)`` with ``u < v``, sorted."""
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    def non_edges(self) -> list[Edge]:
        full = (1 << self.n) - 1
        out = []
        for u in range(self.n):
            miss = full & ~self.adj[u] & ~((1 << (u + 1)) - 1)
            out.extend((u, v) for v in bits(miss))
        return out

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def is_complete(self) -> bool:
        full = self.full_mask
        return all(r | (1 << i) == full for i, r in enumerate(self.adj))

    def is_null(self) -> bool:
        return not any(self.adj)

    def is_connected(self) -> bool:
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= self.adj[v]
            frontier = nxt & ~seen
            seen |= nxt
        return seen == self.full_mask

    def isolated_vertices(self) -> list[int]:
        return [v for v in range(self.n) if not self.adj[v]]

    def pendant_vertices(self) -> list[int]:
        return [v for v in range(self.n) if popcount(self.adj[v]) == 1]

    def full_degree_vertices(self) -> list[int]:
        return [v for v in range(self.n) if popcount(self.adj[v]) == self.n - 1]

    # -- derived graphs ------------------------------------------------

    def add_edges(self, edges: Iterable[Edge]) -> "Graph":
        adj = list(self.adj)
        for u, v in edges:
            _check_pair(self.n, u, v)
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return Graph(self.n, tuple(adj))

    def remove_edge(self, u: int, v: int) -> "Graph":
        adj = list(self.adj)
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
        return Graph(self.n, tuple(adj))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("relabeling must be a permutation of range(n)")
        adj = [0] * self.n
        for v, row in enumerate(self.adj):
            m = 0
            for u in bits(row):
                m |= 1 << perm[u]
            adj[perm[v]] = m
        return Graph(self.n, tuple(adj))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph on ``vertices``, renumbered in the given order."""
        index = {v: i for i, v in enumerate(vertices)}
        adj = [0] * len(vertices)
        for v, i in index.items():
            for u in bits(self.adj[v]):
                if u in index:
                    adj[i] |= 1 << index[u]
        return Graph(len(vertices), tuple(adj))

    def is_spanning_subgraph_of(self, other: "Graph") -> bool:
        return self.n == other.n and all(a & ~b == 0 for a, b in zip(self.adj, other.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


def _check_pair(n: int, u: int, v: int) -> None:
    if not (0 <= u < n and 0 <= v < n):
        raise GraphError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
    if u == v:
        raise GraphError(f"self-loop ({u}, {u}) is not allowed")


def graph_from_edges(n: int, edges: Iterable[Edge]) -> Graph:
    """Build a graph of order ``n`` from vertex pairs; duplicates collapse."""
    _check_order(n)
    adj = [0] * n
    for u, v in edges:
        _check_pair(n, u, v)
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, tuple(adj))


def complement(g: Graph) -> Graph:
    full = g.full_mask
    return Graph(g.n, tuple(full & ~r & ~(1 << i) for i, r in enumerate(g.adj)))


def disjoint_union(a: Graph, b: Graph) -> Graph:
    n = a.n + b.n
    _check_order(n)
    return Graph(n, a.adj + tuple(r << a.n for r in b.adj))


def join(a: Graph, b: Graph) -> Graph:
    """Disjoint union plus every edge between the two parts."""
    n = a.n + b.n
    _check_order(n)
    a_all = (1 << a.n) - 1
    b_all = ((1 << b.n) - 1) << a.n
    return Graph(n, tuple(r | b_all for r in a.adj) + tuple((r << a.n) | a_all for r in b.adj))


def pearl(parts: Sequence[Graph], links: Sequence[Edge] | None = None) -> Graph:
    """Chain ``parts`` by one edge between each consecutive pair.

    By default part ``i``'s last vertex is joined to part ``i+1``'s first
    vertex.  ``links`` may instead give, per consecutive pair, the local
    vertex ``(x, y)`` with ``x`` in part ``i`` and ``y`` in part ``i+1``.
    """
    if len(parts) < 2:
        raise GraphError("pearl needs at least two parts")
    if links is not None and len(links) != len(parts) - 1:
        raise GraphError("need exactly one link per consecutive pair of parts")
    offsets = [0]
    for p in parts:
        offsets.append(offsets[-1] + p.n)
    _check_order(offsets[-1])
    extra = []
    for i in range(len(parts) - 1):
        x, y = (parts[i].n - 1, 0) if links is None else links[i]
        if not (0 <= x < parts[i].n and 0 <= y < parts[i + 1].n):
            raise GraphError(f"link {i} endpoint outside its part")
        extra.append((offsets[i] + x, offsets[i + 1] + y))
    g = parts[0]
    for p in parts[1:]:
        g = disjoint_union(g, p)
    return g.add_edges(extra)


# -- families ----------------------------------------------------------


def path(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs order >= 1")
    return graph_from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs order >= 3")
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    _check_order(n)
    return complement(Graph(n, (0,) * n))


def null(n: int) -> Graph:
    _check_order(n)
    return Graph(n, (0,) * n)


def complete_bipartite(m: int, n: int) -> Graph:
    if m < 1 or n < 1:
        raise GraphError("complete bipartite parts must be non-empty")
    return join(null(m), null(n))


def star(n: int) -> Graph:
    """S_{1,n}: centre 0 joined to ``n`` leaves."""
    if n < 1:
        raise GraphError("star needs at least one leaf")
    return complete_bipartite(1, n)


def wheel(n: int) -> Graph:
    """W_{1,n}: hub 0 joined to every vertex of a rim C_n."""
    return join(complete(1), cycle(n))


def petersen() -> Graph:
    """Outer cycle v1..v5 on 0..4, inner u1..u5 on 5..9 (u_i ~ u_{i+2}), spokes v_i u_i."""
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    return graph_from_edges(10, outer + inner + spokes)


FAMILIES = {
    "path": (path, 1),
    "cycle": (cycle, 1),
    "complete": (complete, 1),
    "null": (null, 1),
    "complete_bipartite": (complete_bipartite, 2),
    "star": (star, 1),
    "wheel": (wheel, 1),
    "petersen": (petersen, 0),
}


@dataclass(frozen=True)
class GraphFamily:
    tag: str
    params: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.tag not in FAMILIES:
            raise GraphError(f"unknown family {self.tag!r}")
        arity = FAMILIES[self.tag][1]
        if len(self.params) != arity:
            raise GraphError(f"{self.tag} takes {arity} parameter(s), got {len(self.params)}")


def generate(family: GraphFamily) -> Graph:
    ctor = FAMILIES[family.tag][0]
    return ctor(*family.params)
