"""Reference computations written independently of the package internals.

They trade speed for obviousness: brute-force enumeration, explicit balls of
the covering tree built with networkx, and determinantal divisors.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from math import gcd

import networkx as nx


def adjacency(g):
    """Multiset adjacency: counts[u][v] = number of edges joining u and v."""
    idx = {name: i for i, name in enumerate(g.vertices)}
    counts = [[0] * g.n0 for _ in range(g.n0)]
    for _, u, v in g.edges:
        a, b = idx[u], idx[v]
        counts[a][b] += 1
        if a != b:
            counts[b][a] += 1
    return counts


def dart_ends(g, d: int) -> tuple[str, str]:
    """Endpoint names of dart ``d`` read straight off the edge list."""
    _, u, v = g.edges[d // 2]
    return (u, v) if d % 2 == 0 else (v, u)


def feasible_completion(g, base: int, p1, p2, c1, c2) -> bool:
    """Whether ``(c1, c2)`` solves the completion problem for ``(p1, p2)``.

    Walks the edge list directly: both cycles start and end at ``base``, extend
    their prefixes, have equal length, and never immediately reverse a dart.
    """
    start = g.vertices[base]
    if len(c1) != len(c2) or tuple(c1[:len(p1)]) != tuple(p1) or tuple(c2[:len(p2)]) != tuple(p2):
        return False
    for c in (c1, c2):
        at = start
        for i, d in enumerate(c):
            a, b = dart_ends(g, d)
            if a != at or (i and c[i - 1] // 2 == d // 2 and c[i - 1] != d):
                return False
            at = b
        if at != start:
            return False
    return True


def max_circuit_bruteforce(g) -> int:
    """Longest vertex-simple cycle by trying every cyclic vertex sequence."""
    adj = adjacency(g)
    best = 0
    if any(adj[v][v] for v in range(g.n0)):
        best = 1
    if any(adj[u][v] >= 2 for u in range(g.n0) for v in range(u + 1, g.n0)):
        best = max(best, 2)
    for k in range(3, g.n0 + 1):
        for seq in permutations(range(g.n0), k):
            if seq[0] != min(seq):
                continue
            if all(adj[seq[i]][seq[(i + 1) % k]] for i in range(k)):
                best = max(best, k)
                break
    return best


def has_odd_cycle_bruteforce(g) -> bool:
    """A graph has an odd closed walk iff it has an odd vertex-simple cycle."""
    adj = adjacency(g)
    if any(adj[v][v] for v in range(g.n0)):
        return True
    for k in range(3, g.n0 + 1, 2):
        for seq in permutations(range(g.n0), k):
            if all(adj[seq[i]][seq[(i + 1) % k]] for i in range(k)):
                return True
    return False


def tree_ball(g, root: int, radius: int) -> nx.Graph:
    """Ball of the universal covering tree, nodes named by proper dart paths."""
    ball = nx.Graph()
    ball.add_node(())
    frontier = [()]
    for _ in range(radius):
        nxt = []
        for p in frontier:
            end = g.terminus(p[-1]) if p else root
            for d in g.out_darts(end):
                if p and d == p[-1] ^ 1:
                    continue
                child = p + (d,)
                ball.add_edge(p, child)
                nxt.append(child)
        frontier = nxt
    return ball


def min_completion_excess(g, base: int, p1, p2, limit: int) -> int | None:
    """Least ``k`` such that both paths extend by ``k`` darts to proper cycles at base.

    Depth-first enumeration of proper extensions; no matrices.
    """
    def lengths(path):
        found = set()
        stack = [(path[-1], 0)] if path else []
        if not path:
            return {0}
        seen = set()
        while stack:
            last, m = stack.pop()
            if (last, m) in seen:
                continue
            seen.add((last, m))
            if g.terminus(last) == base:
                found.add(m)
            if m == limit:
                continue
            for d in g.out_darts(g.terminus(last)):
                if d != last ^ 1:
                    stack.append((d, m + 1))
        return found

    common = lengths(tuple(p1)) & lengths(tuple(p2))
    return min(common) if common else None


def shortest_loop_avoiding(g, e: int, limit: int = 12) -> int | None:
    """Length of the shortest proper closed walk at t(e) not using e's edge."""
    w = g.terminus(e)
    banned = e >> 1
    layer = [(d,) for d in g.out_darts(w) if d >> 1 != banned]
    for length in range(1, limit + 1):
        if any(g.terminus(p[-1]) == w for p in layer):
            return length
        layer = [p + (d,) for p in layer for d in g.out_darts(g.terminus(p[-1]))
                 if d != p[-1] ^ 1 and d >> 1 != banned]
    return None


def determinant(m) -> int:
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return int(det)


def determinantal_divisors(m) -> list[int]:
    """``d_k`` = gcd of all ``k x k`` minors, for k up to the rank."""
    rows, cols = len(m), len(m[0])
    out = []
    for k in range(1, min(rows, cols) + 1):
        g_k = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g_k = gcd(g_k, determinant([[m[r][c] for c in cs] for r in rs]))
        if g_k == 0:
            break
        out.append(g_k)
    return out


def invariant_factors_oracle(m) -> list[int]:
    """Nonzero invariant factors ``d_k / d_{k-1}`` from determinantal divisors."""
    divs = determinantal_divisors(m)
    prev = 1
    out = []
    for d in divs:
        out.append(d // prev)
        prev = d
    return out
