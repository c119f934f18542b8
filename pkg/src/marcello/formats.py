"""Text formats: graph6, DOT, edge lists."""

from __future__ import annotations

from typing import Iterable

from .graph import Edge, Graph, GraphError, graph_from_edges

HEADER = ">>graph6<<"


class Graph6Error(ValueError):
    """Base class for graph6 decoding errors."""


class Graph6HeaderError(Graph6Error):
    """The order prefix is malformed."""


class Graph6TruncatedError(Graph6Error):
    """The input ends before the adjacency bits do."""


class Graph6TrailingDataError(Graph6Error):
    """Bytes remain after the adjacency bits."""


class Graph6CharError(Graph6Error):
    """A data byte lies outside the printable range 63..126."""


def _encode_order(n: int) -> str:
    if n <= 62:
        return chr(63 + n)
    return "~" + "".join(chr(63 + ((n >> s) & 63)) for s in (12, 6, 0))


def emit_graph6(g: Graph) -> str:
    """Encode ``g`` as graph6 (no header, no newline)."""
    out = [_encode_order(g.n)]
    acc = 0
    nbits = 0
    for j in range(1, g.n):
        row = g.adj[j]
        for i in range(j):
            acc = (acc << 1) | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(63 + acc))
                acc = nbits = 0
    if nbits:
        out.append(chr(63 + (acc << (6 - nbits))))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 string.  A leading ``>>graph6<<`` and surrounding
    whitespace are tolerated."""
    s = text.strip()
    if s.startswith(HEADER):
        s = s[len(HEADER):]
    if not s:
        raise Graph6TruncatedError("empty graph6 input")
    codes = [ord(c) - 63 for c in s]
    for pos, c in enumerate(codes):
        if not 0 <= c <= 63:
            raise Graph6CharError(f"byte {pos} ({s[pos]!r}) is outside the graph6 range")
    if codes[0] == 63:
        if len(codes) >= 2 and codes[1] == 63:
            raise Graph6HeaderError("orders above 258047 are not supported")
        if len(codes) < 4:
            raise Graph6TruncatedError("long-form order prefix is incomplete")
        n = (codes[1] << 12) | (codes[2] << 6) | codes[3]
        if n <= 62:
            raise Graph6HeaderError(f"long-form prefix used for small order {n}")
        body = codes[4:]
    else:
        n = codes[0]
        body = codes[1:]
    if n == 0:
        raise Graph6HeaderError("graphs of order 0 are not supported")
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(body) < need:
        raise Graph6TruncatedError(f"expected {need} data bytes, got {len(body)}")
    if len(body) > need:
        raise Graph6TrailingDataError(f"{len(body) - need} unexpected trailing byte(s)")
    pad = need * 6 - nbits
    if pad and body[-1] & ((1 << pad) - 1):
        raise Graph6TrailingDataError("non-zero padding bits")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if body[k // 6] >> (5 - k % 6) & 1:
                edges.append((i, j))
            k += 1
    try:
        return graph_from_edges(n, edges)
    except GraphError as exc:
        raise Graph6HeaderError(str(exc)) from exc


def emit_dot(g: Graph, marcello_edges: Iterable[Edge] = ()) -> str:
    """DOT text with ``marcello_edges`` dashed and all other edges solid."""
    dashed = set()
    for u, v in marcello_edges:
        if not (0 <= u < g.n and 0 <= v < g.n) or not g.has_edge(u, v):
            raise GraphError(f"Marcello edge ({u}, {v}) is not an edge of the graph")
        dashed.add((min(u, v), max(u, v)))
    lines = ["graph G {"]
    lines.extend(f"  {v};" for v in range(g.n))
    for u, v in g.edges():
        style = " [style=dashed]" if (u, v) in dashed else ""
        lines.append(f"  {u} -- {v}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_edge_list(g: Graph) -> str:
    edges = g.edges()
    return "".join([f"{g.n} {len(edges)}\n"] + [f"{u} {v}\n" for u, v in edges])


def parse_edge_list(text: str) -> Graph:
    """Parse ``"n m"`` followed by ``m`` lines ``"u v"`` (0-indexed)."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise GraphError("edge list must start with a line 'n m'")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise GraphError(f"malformed edge list: {exc}") from exc
    if len(edges) != m:
        raise GraphError(f"header announces {m} edges, found {len(edges)}")
    return graph_from_edges(n, edges)
