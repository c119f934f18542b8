"""Pure-Python hot kernels.

The compiled module ``_ckernels`` implements the same two functions with the
same iteration order, so both backends return identical values.
"""

from __future__ import annotations


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _refine(adj, cells):
    while True:
        restart = False
        for w in cells:
            wmask = 0
            for v in w:
                wmask |= 1 << v
            out = []
            split = False
            for cell in cells:
                if len(cell) == 1:
                    out.append(cell)
                    continue
                counts = [_popcount(adj[v] & wmask) for v in cell]
                if min(counts) == max(counts):
                    out.append(cell)
                    continue
                split = True
                for c in sorted(set(counts)):
                    out.append([v for v, k in zip(cell, counts) if k == c])
            if split:
                cells = out
                restart = True
                break
        if not restart:
            return cells


def canonical_labeling(n: int, adj) -> list[int]:
    """Return ``lab`` with ``lab[k]`` the vertex that receives canonical label ``k``.

    Equitable refinement plus backtracking over the first non-singleton
    cell; the leaf with the lexicographically largest relabeled row tuple
    wins.  Branches on a vertex twin of an already tried one in the same
    cell are skipped, since the transposition is an automorphism fixing the
    current partition.
    """
    adj = list(adj)
    best_rows = None
    best_lab = None

    def is_twin(u, v):
        return (adj[u] & ~(1 << v)) == (adj[v] & ~(1 << u))

    def search(cells):
        nonlocal best_rows, best_lab
        cells = _refine(adj, cells)
        for ci, cell in enumerate(cells):
            if len(cell) > 1:
                break
        else:
            lab = [c[0] for c in cells]
            pos = [0] * n
            for k, v in enumerate(lab):
                pos[v] = k
            rows = []
            for v in lab:
                m = 0
                r = adj[v]
                while r:
                    low = r & -r
                    m |= 1 << pos[low.bit_length() - 1]
                    r ^= low
                rows.append(m)
            if best_rows is None or rows > best_rows:
                best_rows = rows
                best_lab = lab
            return
        tried = []
        for v in cell:
            if any(is_twin(u, v) for u in tried):
                continue
            tried.append(v)
            rest = [u for u in cell if u != v]
            search(cells[:ci] + [[v], rest] + cells[ci + 1:])

    search([list(range(n))])
    return best_lab


def enumerate_outcomes(n: int, adj, budgets, xmask: int, saturated: bool):
    """All graphs reachable by one global iteration.

    Returns ``(outcomes, states)`` where ``outcomes`` maps each labeled result
    (tuple of rows) to the first plan found reaching it, as a list of
    ``(initiator, target_mask)``, and ``states`` counts visited
    ``(graph, remaining initiators)`` states.
    """
    full = (1 << n) - 1
    seen = set()
    out = {}
    plan = []

    def record(rows):
        key = tuple(rows)
        if key not in out:
            out[key] = list(plan)

    def rec(rows, remaining):
        key = (tuple(rows), remaining)
        if key in seen:
            return
        seen.add(key)
        live = 0
        complete = True
        for v in range(n):
            if (rows[v] | (1 << v)) != full:
                complete = False
                if remaining >> v & 1:
                    live |= 1 << v
        if complete or not live:
            record(rows)
            return
        for v in range(n):
            if not live >> v & 1:
                continue
            nn = full & ~rows[v] & ~(1 << v)
            cap = min(budgets[v], _popcount(nn))
            s = nn
            while True:
                pc = _popcount(s)
                if pc == cap or (not saturated and pc < cap):
                    new = list(rows)
                    new[v] |= s
                    t = s
                    while t:
                        low = t & -t
                        new[low.bit_length() - 1] |= 1 << v
                        t ^= low
                    plan.append((v, s))
                    rec(new, remaining & ~(1 << v))
                    plan.pop()
                if s == 0:
                    break
                s = (s - 1) & nn

    rec(list(adj), xmask)
    return out, len(seen)
