"""Finite multigraphs in dart (half-edge) form and their combinatorial invariants.

Edge ``i`` contributes dart ``2*i`` (its positive orientation, from the first
listed endpoint to the second) and dart ``2*i + 1`` (the reversal).  The
involution is therefore ``d ^ 1``.  A loop contributes two distinct darts at
the same vertex, so it counts twice towards the degree.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from math import gcd

DEFAULT_CIRCUIT_BUDGET = 10**7

Path = tuple[int, ...]


class GraphError(ValueError):
    """Base class for graph input problems."""


class ParseError(GraphError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class InapplicableError(GraphError):
    """Raised when an operation needs a hypothesis the graph does not meet."""


class CircuitBudgetExceeded(RuntimeError):
    def __init__(self, budget: int):
        super().__init__(f"circuit search exceeded budget of {budget} steps")
        self.budget = budget


def natural_key(token: str):
    return tuple(int(p) if p.isdigit() else p for p in re.split(r"(\d+)", token))


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]
    """``(edge_id, origin, terminus)`` for the positive dart of each edge."""

    _origin: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _out: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {v: i for i, v in enumerate(self.vertices)}
        origin = []
        for _, u, v in self.edges:
            origin.append(index[u])
            origin.append(index[v])
        out: list[list[int]] = [[] for _ in self.vertices]
        for d, o in enumerate(origin):
            out[o].append(d)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_origin", tuple(origin))
        object.__setattr__(self, "_out", tuple(tuple(x) for x in out))

    @classmethod
    def from_edges(cls, edges) -> Graph:
        """Build a graph from ``(edge_id, u, v)`` triples, sorting ids naturally."""
        edges = sorted(((str(e), str(u), str(v)) for e, u, v in edges),
                       key=lambda t: natural_key(t[0]))
        ids = [e for e, _, _ in edges]
        if len(set(ids)) != len(ids):
            raise GraphError("duplicate edge id")
        verts = sorted({x for _, u, v in edges for x in (u, v)}, key=natural_key)
        return cls(tuple(verts), tuple(edges))

    # -- dart model ---------------------------------------------------------

    @property
    def n0(self) -> int:
        return len(self.vertices)

    @property
    def n1(self) -> int:
        return len(self.edges)

    @property
    def num_darts(self) -> int:
        return 2 * len(self.edges)

    @staticmethod
    def partner(d: int) -> int:
        return d ^ 1

    @staticmethod
    def edge_of(d: int) -> int:
        return d >> 1

    @staticmethod
    def is_positive(d: int) -> bool:
        return d % 2 == 0

    def origin(self, d: int) -> int:
        return self._origin[d]

    def terminus(self, d: int) -> int:
        return self._origin[d ^ 1]

    def out_darts(self, v: int) -> tuple[int, ...]:
        return self._out[v]

    def degree(self, v: int) -> int:
        return len(self._out[v])

    def vertex_index(self, name: str) -> int:
        return self._index[name]

    def is_loop(self, d: int) -> bool:
        return self._origin[d] == self._origin[d ^ 1]

    def dart_label(self, d: int) -> str:
        eid = self.edges[d >> 1][0]
        return eid if d % 2 == 0 else eid + "^-1"

    def parse_dart(self, token: str) -> int:
        token = token.strip()
        inverse = token.endswith("^-1")
        eid = token[:-3] if inverse else token
        for i, (e, _, _) in enumerate(self.edges):
            if e == eid:
                return 2 * i + int(inverse)
        raise GraphError(f"unknown edge {eid!r}")

    def parse_path(self, text: str) -> Path:
        return tuple(self.parse_dart(t) for t in re.split(r"[\s,]+", text.strip()) if t)

    def format_path(self, path) -> str:
        return " ".join(self.dart_label(d) for d in path)

    def path_end(self, start: int, path) -> int:
        return self.terminus(path[-1]) if path else start

    def is_consecutive(self, start: int, path) -> bool:
        v = start
        for d in path:
            if self._origin[d] != v:
                return False
            v = self.terminus(d)
        return True

    def is_regular(self) -> bool:
        return len({self.degree(v) for v in range(self.n0)}) == 1

    def regular_degree(self) -> int | None:
        degs = {self.degree(v) for v in range(self.n0)}
        return degs.pop() if len(degs) == 1 else None

    def branching(self) -> int:
        """``q`` for a graph regular of degree ``q + 1``."""
        deg = self.regular_degree()
        if deg is None:
            raise InapplicableError("graph is not regular; boundary measure is undefined")
        return deg - 1


# -- parsing ----------------------------------------------------------------

def parse_graph(text: str) -> Graph:
    """Parse the ``vertices``/``edge`` text format."""
    declared = None
    edges: list[tuple[str, str, str]] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "vertices":
            if declared is not None:
                raise ParseError(lineno, "repeated vertices header")
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise ParseError(lineno, "expected 'vertices <count>'")
            declared = (int(tokens[1]), lineno)
        elif tokens[0] == "edge":
            if declared is None:
                raise ParseError(lineno, "edge before vertices header")
            if len(tokens) != 4:
                raise ParseError(lineno, "expected 'edge <id> <u> <v>'")
            _, eid, u, v = tokens
            if eid in seen:
                raise ParseError(lineno, f"duplicate edge id {eid!r}")
            seen.add(eid)
            edges.append((eid, u, v))
        else:
            raise ParseError(lineno, f"unrecognised directive {tokens[0]!r}")
    if declared is None:
        raise ParseError(1, "missing vertices header")
    if not edges:
        raise ParseError(declared[1], "no edges")
    count, lineno = declared
    names = {x for _, u, v in edges for x in (u, v)}
    if len(names) != count:
        raise ParseError(lineno, f"header declares {count} vertices but edges use {len(names)}")
    return Graph.from_edges(edges)


def format_graph(g: Graph) -> str:
    lines = [f"vertices {g.n0}"]
    lines += [f"edge {e} {u} {v}" for e, u, v in g.edges]
    return "\n".join(lines) + "\n"


# -- validation and invariants ----------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    connected: bool
    degrees: dict[str, int]
    violations: tuple[str, ...]

    def to_json(self) -> dict:
        return {"ok": self.ok, "connected": self.connected,
                "degrees": dict(self.degrees), "violations": list(self.violations)}


def components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n0
    comps = []
    for s in range(g.n0):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [], deque([s])
        while queue:
            v = queue.popleft()
            comp.append(v)
            for d in g.out_darts(v):
                w = g.terminus(d)
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def validate_lattice_input(g: Graph) -> ValidationReport:
    violations = []
    comps = components(g)
    if len(comps) > 1:
        violations.append(f"graph is disconnected ({len(comps)} components)")
    degrees = {g.vertices[v]: g.degree(v) for v in range(g.n0)}
    for name, deg in degrees.items():
        if deg < 3:
            violations.append(f"vertex {name} has degree {deg} < 3")
    return ValidationReport(not violations, len(comps) == 1, degrees, tuple(violations))


def bfs_distances(g: Graph, source: int) -> list[int]:
    dist = [-1] * g.n0
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for d in g.out_darts(v):
            w = g.terminus(d)
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def diameter(g: Graph) -> int:
    return max(max(bfs_distances(g, s)) for s in range(g.n0))


def shortest_path(g: Graph, source: int, target: int) -> Path:
    """A shortest dart path, ties broken towards lower dart ids."""
    parent: dict[int, int | None] = {source: None}
    queue = deque([source])
    while queue and target not in parent:
        v = queue.popleft()
        for d in g.out_darts(v):
            w = g.terminus(d)
            if w not in parent:
                parent[w] = d
                queue.append(w)
    path = []
    v = target
    while parent[v] is not None:
        d = parent[v]
        path.append(d)
        v = g.origin(d)
    return tuple(reversed(path))


def two_coloring(g: Graph) -> tuple[list[int], tuple[int, int] | None]:
    """BFS 2-coloring; returns colors and the first conflicting dart pair, if any.

    The conflict is reported as ``(dart, -1)`` for a loop and ``(dart, 0)`` for a
    non-tree edge joining equal colours.
    """
    color = [-1] * g.n0
    conflict = None
    for s in range(g.n0):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for d in g.out_darts(v):
                w = g.terminus(d)
                if color[w] < 0:
                    color[w] = 1 - color[v]
                    queue.append(w)
    for d in range(0, g.num_darts, 2):
        if g.is_loop(d):
            return color, (d, -1)
    for d in range(0, g.num_darts, 2):
        if color[g.origin(d)] == color[g.terminus(d)]:
            conflict = (d, 0)
            break
    return color, conflict


def is_bipartite(g: Graph) -> bool:
    return two_coloring(g)[1] is None


def odd_circuit(g: Graph) -> Path | None:
    """A vertex-simple closed dart path of odd length, or ``None`` if bipartite."""
    _, conflict = two_coloring(g)
    if conflict is None:
        return None
    d, kind = conflict
    if kind == -1:
        return (d,)
    # BFS tree from the lowest vertex of the component; close the cycle at the LCA.
    root = 0
    parent: dict[int, int | None] = {root: None}
    depth = {root: 0}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e in g.out_darts(v):
            w = g.terminus(e)
            if w not in parent:
                parent[w] = e
                depth[w] = depth[v] + 1
                queue.append(w)

    def up(v):
        chain = []
        while parent[v] is not None:
            chain.append(parent[v])
            v = g.origin(parent[v])
        return chain  # darts leading into v, from v upwards

    u, w = g.origin(d), g.terminus(d)
    up_u, up_w = up(u), up(w)
    # strip the common part above the LCA
    while up_u and up_w and up_u[-1] == up_w[-1]:
        up_u.pop()
        up_w.pop()
    lca_to_u = tuple(reversed(up_u))
    w_to_lca = tuple(e ^ 1 for e in up_w)
    return lca_to_u + (d,) + w_to_lca


def longest_circuit(g: Graph, budget: int = DEFAULT_CIRCUIT_BUDGET) -> int:
    """Maximum length of a circuit (loops have length 1, parallel pairs length 2).

    Exhaustive backtracking over vertex-simple cycles; raises
    :class:`CircuitBudgetExceeded` rather than returning a lower bound.
    """
    n = g.n0
    mult = [[0] * n for _ in range(n)]
    best = 0
    for d in range(0, g.num_darts, 2):
        u, v = g.origin(d), g.terminus(d)
        if u == v:
            best = max(best, 1)
        else:
            mult[u][v] += 1
            mult[v][u] += 1
    nbrs = [[w for w in range(n) if mult[v][w]] for v in range(n)]
    if any(mult[u][v] >= 2 for u in range(n) for v in range(n)):
        best = max(best, 2)
    steps = 0
    on_path = [False] * n

    for s in range(n):
        # cycles whose smallest vertex is s
        stack = [(s, iter([w for w in nbrs[s] if w > s]), 1)]
        on_path[s] = True
        while stack:
            v, it, length = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                on_path[v] = False
                stack.pop()
                continue
            steps += 1
            if steps > budget:
                raise CircuitBudgetExceeded(budget)
            if on_path[nxt]:
                continue
            if length + 1 >= 3 and mult[nxt][s]:
                best = max(best, length + 1)
            if length + 1 < n:
                on_path[nxt] = True
                stack.append((nxt, iter([w for w in nbrs[nxt] if w > s]), length + 1))
        on_path[s] = False
    return best


@dataclass(frozen=True)
class InvariantReport:
    n0: int
    n1: int
    chi: int
    gamma: int
    bipartite: bool
    coloring: tuple[int, ...] | None
    odd_circuit: Path | None
    diam: int
    max_circuit: int
    regular_degree: int | None

    @property
    def q(self) -> int | None:
        return None if self.regular_degree is None else self.regular_degree - 1

    def to_json(self, g: Graph) -> dict:
        return {
            "n0": self.n0, "n1": self.n1, "chi": self.chi, "gamma": self.gamma,
            "bipartite": self.bipartite,
            "coloring": None if self.coloring is None else
            {g.vertices[v]: c for v, c in enumerate(self.coloring)},
            "odd_circuit": None if self.odd_circuit is None else
            [g.dart_label(d) for d in self.odd_circuit],
            "diam": self.diam, "max_circuit": self.max_circuit,
            "regular_degree": self.regular_degree, "q": self.q,
        }


def graph_invariants(g: Graph, budget: int = DEFAULT_CIRCUIT_BUDGET) -> InvariantReport:
    color, conflict = two_coloring(g)
    bip = conflict is None
    chi = g.n0 - g.n1
    return InvariantReport(
        n0=g.n0, n1=g.n1, chi=chi, gamma=1 - chi, bipartite=bip,
        coloring=tuple(color) if bip else None,
        odd_circuit=None if bip else odd_circuit(g),
        diam=diameter(g), max_circuit=longest_circuit(g, budget),
        regular_degree=g.regular_degree(),
    )


@dataclass(frozen=True)
class CovolumeReport:
    q: int
    n0: int
    gamma: int
    lhs: int
    rhs_twice: int

    @property
    def holds(self) -> bool:
        return 2 * self.lhs == self.rhs_twice

    def to_json(self) -> dict:
        return {"q": self.q, "n0": self.n0, "gamma": self.gamma,
                "gamma_minus_1": self.lhs, "rhs": f"{self.rhs_twice}/2"
                if self.rhs_twice % 2 else str(self.rhs_twice // 2),
                "holds": self.holds}


def covolume_identity_check(g: Graph) -> CovolumeReport:
    """Check gamma - 1 = (q - 1) * n0 / 2 for a (q+1)-regular graph."""
    q = g.branching()
    gamma = g.n1 - g.n0 + 1
    return CovolumeReport(q=q, n0=g.n0, gamma=gamma, lhs=gamma - 1, rhs_twice=(q - 1) * g.n0)


def gcd_all(values) -> int:
    out = 0
    for v in values:
        out = gcd(out, v)
    return out
