"""Completion of two equal-length proper paths to equal-length proper cycles.

The construction runs in three stages:

1. If the endpoints ``p1, p2`` differ, both paths are carried to the vertex
   ``p0`` near the middle of a shortest ``[p1, p2]``. Each one goes across
   that path and back, with loops attached at ``p1`` and ``p2`` so that no
   concatenation backtracks.
2. A return route from ``p0`` to the base vertex is appended to both. If the
   geodesic route would backtrack, it is replaced by a detour around a loop.
3. If ``d(p1, p2)`` is odd, the cycles now differ in length by one. Both are
   closed off through an odd circuit, traversed the short way on one side and
   the long way on the other.

Any junction that still backtracks gets the same edge-loop-edge detour in both
cycles, so their lengths stay equal.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .covering import is_proper, reverse_path
from .graph import Graph, InvariantReport, Path, graph_invariants, odd_circuit, shortest_path


class CompletionError(RuntimeError):
    pass


class _RepairFailed(Exception):
    pass


def excess_bound(diam: int, max_circuit: int) -> int:
    return 10 + 10 * diam + 6 * max_circuit


def check_proper(g: Graph, start: int, path) -> bool:
    if not g.is_consecutive(start, path):
        raise ValueError("darts are not consecutive")
    return is_proper(path)


def attach_loop(g: Graph, e: int) -> Path:
    """Shortest proper cycle based at ``t(e)`` that uses neither ``e`` nor its reverse."""
    w = g.terminus(e)
    banned = e >> 1
    parent: dict[int, int | None] = {}
    queue: deque[int] = deque()
    for d in g.out_darts(w):
        if d >> 1 != banned:
            parent[d] = None
            queue.append(d)
    while queue:
        d = queue.popleft()
        if g.terminus(d) == w:
            out = [d]
            while parent[out[-1]] is not None:
                out.append(parent[out[-1]])
            return tuple(reversed(out))
        for x in g.out_darts(g.terminus(d)):
            if x >> 1 != banned and x != d ^ 1 and x not in parent:
                parent[x] = d
                queue.append(x)
    raise CompletionError(f"no proper cycle at the end of dart {e} avoids it")


@dataclass
class CompletionCertificate:
    n: int
    k: int
    K: int
    case: str
    s: int | None = None
    p0: int | None = None
    path12: Path = ()
    e1: int | None = None
    e2: int | None = None
    L1: Path = ()
    L2: Path = ()
    route: Path = ()
    e0: int | None = None
    L0: Path = ()
    C0: Path = ()
    S1: Path = ()
    S2: Path = ()
    repairs: list[tuple[int, int, Path]] = field(default_factory=list)
    search_fallback: bool = False

    def to_json(self, g: Graph) -> dict:
        fmt = g.format_path

        def dart(d):
            return None if d is None else g.dart_label(d)
        return {
            "n": self.n, "k": self.k, "K": self.K, "case": self.case, "s": self.s,
            "p0": None if self.p0 is None else g.vertices[self.p0],
            "path12": fmt(self.path12), "e1": dart(self.e1), "e2": dart(self.e2),
            "L1": fmt(self.L1), "L2": fmt(self.L2), "route": fmt(self.route),
            "e0": dart(self.e0), "L0": fmt(self.L0), "C0": fmt(self.C0),
            "S1": fmt(self.S1), "S2": fmt(self.S2),
            "repairs": [{"vertex": g.vertices[v], "edge": g.dart_label(e), "loop": fmt(lp)}
                        for v, e, lp in self.repairs],
            "search_fallback": self.search_fallback,
        }


class CycleCompleter:
    """Holds the per-graph data (diameter, circuit bound, odd circuit) for repeated calls."""

    def __init__(self, g: Graph, base: int = 0, inv: InvariantReport | None = None):
        self.graph = g
        self.base = base
        self.inv = inv or graph_invariants(g)
        self.K = excess_bound(self.inv.diam, self.inv.max_circuit)
        self._loops: dict[int, Path] = {}
        self._odd = odd_circuit(g)
        self._nb = None

    def loop(self, e: int) -> Path:
        if e not in self._loops:
            self._loops[e] = attach_loop(self.graph, e)
        return self._loops[e]

    def detour(self, e: int) -> Path:
        return (e,) + self.loop(e) + (e ^ 1,)

    def _first_dart(self, v: int, forbidden) -> int | None:
        return next((d for d in self.graph.out_darts(v) if d not in forbidden), None)

    # -- return routes ----------------------------------------------------------

    def _admissible_route(self, p0: int, forbidden) -> Path | None:
        """Shortest proper path ``p0 -> base`` whose first dart avoids ``forbidden``."""
        g = self.graph
        parent: dict[int, int | None] = {}
        queue: deque[int] = deque()
        for d in g.out_darts(p0):
            if d not in forbidden:
                parent[d] = None
                queue.append(d)
        while queue:
            d = queue.popleft()
            if g.terminus(d) == self.base:
                out = [d]
                while parent[out[-1]] is not None:
                    out.append(parent[out[-1]])
                return tuple(reversed(out))
            for x in g.out_darts(g.terminus(d)):
                if x != d ^ 1 and x not in parent:
                    parent[x] = d
                    queue.append(x)
        return None

    def route(self, p0: int, forbidden, cert: CompletionCertificate) -> Path:
        if p0 == self.base:
            return ()
        r = shortest_path(self.graph, p0, self.base)
        if r[0] not in forbidden:
            return r
        e0 = self._first_dart(p0, set(forbidden) | {r[0]})
        detoured = self.detour(e0) + r
        alt = self._admissible_route(p0, forbidden)
        if alt is not None and len(alt) < len(detoured):
            return alt
        cert.e0, cert.L0 = e0, self.loop(e0)
        return detoured

    # -- main entry ---------------------------------------------------------------

    def complete(self, p1_path, p2_path) -> tuple[Path, Path, CompletionCertificate]:
        g = self.graph
        P1, P2 = tuple(p1_path), tuple(p2_path)
        for p in (P1, P2):
            if not check_proper(g, self.base, p):
                raise ValueError("input path backtracks")
        if len(P1) != len(P2):
            raise ValueError("paths must have equal length")
        n = len(P1)
        if n == 0:
            return (), (), CompletionCertificate(n=0, k=0, K=self.K, case="trivial")
        p1, p2 = g.path_end(self.base, P1), g.path_end(self.base, P2)
        D = shortest_path(g, p1, p2)
        dist = len(D)
        s = dist // 2
        cert = CompletionCertificate(n=n, k=0, K=self.K,
                                     case="even" if dist % 2 == 0 else "odd", s=s, path12=D)
        try:
            if dist == 0:
                cert.p0 = p1
                tail = self.route(p1, {P1[-1] ^ 1, P2[-1] ^ 1}, cert)
                cert.route = tail
                C1, C2 = P1 + tail, P2 + tail
            else:
                C1, C2 = self._through_midpoint(P1, P2, D, s, cert)
                if dist % 2:
                    C1, C2 = self._balance(C1, C2, cert)
        except _RepairFailed:
            C1 = C2 = None
        if C1 is None or not self._valid(P1, P2, C1, C2) or len(C1) - n > self.K:
            C1, C2 = self._search(P1, P2)
            cert = CompletionCertificate(n=n, k=0, K=self.K, case=cert.case, s=s,
                                         search_fallback=True)
        cert.k = len(C1) - n
        return C1, C2, cert

    def _through_midpoint(self, P1, P2, D, s, cert):
        g = self.graph
        p1, p2 = g.origin(D[0]), g.terminus(D[-1])
        dist = len(D)
        Drev = reverse_path(D)
        e1 = self._first_dart(p1, {D[0], P1[-1] ^ 1})
        e2 = self._first_dart(p2, {Drev[0], P2[-1] ^ 1})
        A1 = P1 + self.detour(e1) + D + self.detour(e2) + Drev[:dist - s]
        A2 = P2 + self.detour(e2) + Drev + self.detour(e1) + D[:s]
        p0 = g.terminus(D[s - 1]) if s else p1
        f1 = D[s]
        f2 = D[s - 1] ^ 1 if s else e1
        tail = self.route(p0, {f1, f2}, cert)
        cert.p0, cert.e1, cert.e2 = p0, e1, e2
        cert.L1, cert.L2, cert.route = self.loop(e1), self.loop(e2), tail
        return A1 + tail, A2 + tail

    def _balance(self, C1, C2, cert):
        """Equalise ``len(C1) == len(C2) + 1`` through the odd circuit."""
        g = self.graph
        if self._odd is None:
            raise CompletionError("odd endpoint distance in a bipartite graph")
        circ = self._odd
        on_circ = {g.origin(d) for d in circ}
        # nearest circuit vertex from the base
        S1 = min((shortest_path(g, self.base, v) for v in sorted(on_circ)),
                 key=len)
        v1 = g.path_end(self.base, S1)
        i = next(j for j, d in enumerate(circ) if g.origin(d) == v1)
        rotated = circ[i:] + circ[:i]
        t = len(circ) // 2
        last_error = None
        for orient in (rotated, reverse_path(rotated)):
            plus = orient[:t + 1]
            minus = reverse_path(orient[t + 1:])
            v2 = g.path_end(v1, plus)
            S2 = shortest_path(g, v2, self.base)
            try:
                repairs: list = []
                out1, out2 = self._assemble([C1, S1, minus, S2], [C2, S1, plus, S2], repairs)
            except _RepairFailed as exc:
                last_error = exc
                continue
            cert.C0, cert.S1, cert.S2 = orient, S1, S2
            cert.repairs = repairs
            return out1, out2
        raise last_error or _RepairFailed()

    def _assemble(self, seq1, seq2, repairs):
        g = self.graph
        b1, b2 = list(seq1[0]), list(seq2[0])
        for j in range(1, len(seq1)):
            rest1 = sum((tuple(x) for x in seq1[j:]), ())
            rest2 = sum((tuple(x) for x in seq2[j:]), ())
            bad1 = b1 and rest1 and rest1[0] == b1[-1] ^ 1
            bad2 = b2 and rest2 and rest2[0] == b2[-1] ^ 1
            if bad1 or bad2:
                w = g.path_end(self.base, b1)
                forbidden = set()
                if b1:
                    forbidden.add(b1[-1] ^ 1)
                if b2:
                    forbidden.add(b2[-1] ^ 1)
                if rest1:
                    forbidden.add(rest1[0])
                if rest2:
                    forbidden.add(rest2[0])
                e = self._first_dart(w, forbidden)
                if e is None:
                    raise _RepairFailed(f"no detour edge at vertex {w}")
                det = self.detour(e)
                b1.extend(det)
                b2.extend(det)
                repairs.append((w, e, self.loop(e)))
            b1.extend(seq1[j])
            b2.extend(seq2[j])
        return tuple(b1), tuple(b2)

    def _valid(self, P1, P2, C1, C2) -> bool:
        g = self.graph
        return (len(C1) == len(C2)
                and C1[:len(P1)] == P1 and C2[:len(P2)] == P2
                and all(g.is_consecutive(self.base, c) and is_proper(c)
                        and g.path_end(self.base, c) == self.base for c in (C1, C2)))

    # -- exact search (fallback) ------------------------------------------------

    def _nb_matrix(self):
        if self._nb is None:
            origin = np.array([self.graph.origin(d) for d in range(self.graph.num_darts)])
            self._nb = _kernels.nonbacktracking_matrix(origin)
        return self._nb

    def shortest(self, p1_path, p2_path) -> tuple[Path, Path, CompletionCertificate]:
        """Completion with the least possible excess.

        Among minimal completions the two tails are chosen to agree on as long
        a final stretch as possible.
        """
        P1, P2 = tuple(p1_path), tuple(p2_path)
        if len(P1) != len(P2):
            raise ValueError("paths must have equal length")
        if not P1:
            return (), (), CompletionCertificate(n=0, k=0, K=self.K, case="trivial")
        for p in (P1, P2):
            if not check_proper(self.graph, self.base, p):
                raise ValueError("input path backtracks")
        C1, C2 = self._search(P1, P2)
        cert = CompletionCertificate(n=len(P1), k=len(C1) - len(P1), K=self.K,
                                     case="shortest")
        return C1, C2, cert

    def _search(self, P1, P2):
        """Minimal-excess completion by layered reachability over darts."""
        g = self.graph
        b = self._nb_matrix()
        nd = g.num_darts
        ends = np.array([g.terminus(d) == self.base for d in range(nd)])
        layers = []
        for P in (P1, P2):
            start = np.zeros(nd, dtype=bool)
            start[P[-1]] = True
            layers.append(_kernels.reachable_layers(b, start, self.K))
        for m in range(self.K + 1):
            if all((lay[m] & ends).any() for lay in layers):
                break
        else:
            raise CompletionError("no completion within the excess bound")
        # walk both tails backwards together, sharing darts while both can
        lay1, lay2 = layers
        cur = []
        for lay in layers:
            opts = lay[m] & ends
            both = opts & lay1[m] & lay2[m] & ends
            cur.append(both if both.any() else opts)
        d1 = int(np.flatnonzero(cur[0])[0])
        d2 = d1 if cur[1][d1] else int(np.flatnonzero(cur[1])[0])
        walks = [[d1], [d2]]
        for step in range(m - 1, -1, -1):
            c1 = lay1[step] & b[:, walks[0][-1]]
            c2 = lay2[step] & b[:, walks[1][-1]]
            common = c1 & c2 if walks[0][-1] == walks[1][-1] else np.zeros(nd, dtype=bool)
            if common.any():
                x = int(np.flatnonzero(common)[0])
                walks[0].append(x)
                walks[1].append(x)
            else:
                walks[0].append(int(np.flatnonzero(c1)[0]))
                walks[1].append(int(np.flatnonzero(c2)[0]))
        out = []
        for P, walk in zip((P1, P2), walks):
            walk.reverse()
            out.append(P + tuple(walk[1:]))
        return out[0], out[1]


def complete_to_equal_cycles(g: Graph, P1, P2, base: int = 0,
                             inv: InvariantReport | None = None):
    return CycleCompleter(g, base, inv).complete(P1, P2)
