"""Canonical forms, isomorphism tests and enumeration of isomorphism classes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from . import kernels
from .formats import emit_graph6, parse_graph6
from .graph import Graph, GraphError, complete

MAX_ENUM_ORDER = 8


@dataclass(frozen=True, order=True)
class CanonicalForm:
    """Isomorphism-class fingerprint: graph6 of the canonically relabeled graph."""

    graph6: str

    def graph(self) -> Graph:
        return parse_graph6(self.graph6)

    def __str__(self) -> str:
        return self.graph6


def canonical_labeling(g: Graph) -> list[int]:
    """Permutation ``perm`` with ``g.relabel(perm)`` the canonical representative."""
    lab = kernels.canonical_labeling(g.n, g.adj)
    perm = [0] * g.n
    for k, v in enumerate(lab):
        perm[v] = k
    return perm


def canonical_graph(g: Graph) -> Graph:
    return g.relabel(canonical_labeling(g))


def canonical_form(g: Graph) -> CanonicalForm:
    return CanonicalForm(emit_graph6(canonical_graph(g)))


def isomorphic(a: Graph, b: Graph) -> bool:
    return a.n == b.n and a.size == b.size and canonical_form(a) == canonical_form(b)


def brute_force_form(g: Graph) -> tuple:
    """Lexicographically largest relabeled row tuple over all n! permutations.

    Independent of the refinement search; used as a test oracle for n <= 7.
    """
    if g.n > 8:
        raise GraphError("brute-force canonical form is limited to order 8")
    best = None
    for perm in itertools.permutations(range(g.n)):
        rows = g.relabel(perm).adj
        if best is None or rows > best:
            best = rows
    return best


def automorphisms(g: Graph) -> list[tuple[int, ...]]:
    """All automorphisms of ``g`` (as permutations), by extension of partial maps."""
    n = g.n
    deg = g.degrees()
    out = []
    image = [-1] * n
    used = [False] * n

    def extend(v: int) -> None:
        if v == n:
            out.append(tuple(image))
            return
        for w in range(n):
            if used[w] or deg[w] != deg[v]:
                continue
            if any((g.adj[v] >> u & 1) != (g.adj[w] >> image[u] & 1) for u in range(v)):
                continue
            image[v] = w
            used[w] = True
            extend(v + 1)
            used[w] = False
        image[v] = -1

    extend(0)
    return out


@lru_cache(maxsize=None)
def _classes(n: int) -> tuple[Graph, ...]:
    """Canonical representatives of all graphs of order ``n``, sorted by form.

    Every graph of order n arises from one of order n-1 by adding vertex
    n-1 with some neighbourhood, so extending each smaller class by every
    neighbour subset and deduplicating canonically is exhaustive.
    """
    if n == 1:
        return (complete(1),)
    seen: dict[CanonicalForm, Graph] = {}
    for h in _classes(n - 1):
        for nbrs in range(1 << (n - 1)):
            adj = [row | ((nbrs >> i & 1) << (n - 1)) for i, row in enumerate(h.adj)]
            adj.append(nbrs)
            g = Graph(n, tuple(adj))
            cf = canonical_form(g)
            if cf not in seen:
                seen[cf] = cf.graph()
    return tuple(seen[k] for k in sorted(seen))


def enumerate_graph_classes(n: int, predicate: Optional[Callable[[Graph], bool]] = None) -> list[Graph]:
    """One canonical representative per isomorphism class of order ``n``."""
    if not 1 <= n <= MAX_ENUM_ORDER:
        raise GraphError(f"class enumeration supports orders 1..{MAX_ENUM_ORDER}, got {n}")
    reps = _classes(n)
    if predicate is None:
        return list(reps)
    return [g for g in reps if predicate(g)]


def proper_classes(n: int) -> list[Graph]:
    """Classes of order ``n`` that are neither complete nor edgeless."""
    return enumerate_graph_classes(n, lambda g: not g.is_complete() and not g.is_null())
