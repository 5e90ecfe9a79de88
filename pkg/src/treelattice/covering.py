"""Universal covering tree coordinates for the free group of a graph.

A vertex of the covering tree is named by the projection of the geodesic from
the base vertex ``O`` to it: a proper (non-backtracking) dart path in the
quotient graph starting at ``v0``.  Group elements are reduced words in the
generators attached to the non-tree positive darts of a BFS spanning tree.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import Graph, GraphError, Path

Word = tuple[int, ...]
"""Letters are ``+i`` for generator ``i`` (1-based) and ``-i`` for its inverse."""


class WordError(ValueError):
    pass


class ImproperPathError(ValueError):
    pass


def reduce_word(w) -> Word:
    out: list[int] = []
    for a in w:
        if a == 0:
            raise WordError("0 is not a letter")
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def inverse_word(w) -> Word:
    return tuple(-a for a in reversed(w))


def multiply(*words) -> Word:
    out: Word = ()
    for w in words:
        out = reduce_word(out + tuple(w))
    return out


def cyclic_core(w: Word) -> tuple[Word, Word]:
    """Split a reduced word as ``u * core * u^-1`` with ``core`` cyclically reduced."""
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[:i], w[i:j + 1]


def reduced_words(rank: int, max_len: int, min_len: int = 0):
    """All reduced words of length in ``[min_len, max_len]``, shortlex order."""
    letters = [a for i in range(1, rank + 1) for a in (i, -i)]
    level: list[Word] = [()]
    for n in range(max_len + 1):
        if n >= min_len:
            yield from level
        level = [w + (a,) for w in level for a in letters if not w or w[-1] != -a]


def reduce_darts(path) -> Path:
    """Cancel adjacent ``d, d^1`` pairs (projection of geodesic straightening)."""
    out: list[int] = []
    for d in path:
        if out and out[-1] == d ^ 1:
            out.pop()
        else:
            out.append(d)
    return tuple(out)


def is_proper(path) -> bool:
    return all(path[i + 1] != path[i] ^ 1 for i in range(len(path) - 1))


def reverse_path(path) -> Path:
    return tuple(d ^ 1 for d in reversed(path))


def lcp(a, b) -> int:
    k = 0
    for x, y in zip(a, b):
        if x != y:
            break
        k += 1
    return k


@dataclass(frozen=True, order=True)
class TreeVertex:
    path: Path

    @property
    def depth(self) -> int:
        return len(self.path)


ORIGIN = TreeVertex(())


def tree_distance(u: TreeVertex, v: TreeVertex) -> int:
    return u.depth + v.depth - 2 * lcp(u.path, v.path)


@dataclass(frozen=True, order=True)
class Ray:
    """The boundary point ``prefix . period . period . ...`` seen from ``O``."""

    prefix: Path
    period: Path

    def darts(self, n: int) -> Path:
        out = list(self.prefix[:n])
        while len(out) < n:
            out.extend(self.period)
        return tuple(out[:n])


def _primitive(period: Path) -> Path:
    n = len(period)
    for k in range(1, n):
        if n % k == 0 and period[:k] * (n // k) == period:
            return period[:k]
    return period


class SpanningData:
    """Spanning tree of representatives, free generators and dart action."""

    def __init__(self, g: Graph, root: int = 0):
        self.graph = g
        self.root = root
        tree_darts: dict[int, int] = {}  # vertex -> dart entering it
        seen = {root}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for d in g.out_darts(v):
                w = g.terminus(d)
                if w not in seen:
                    seen.add(w)
                    tree_darts[w] = d
                    queue.append(w)
        if len(seen) != g.n0:
            raise GraphError("graph is disconnected")
        self.tree_edges = tuple(sorted(d >> 1 for d in tree_darts.values()))
        tree_set = set(self.tree_edges)
        action = [0] * g.num_darts
        gens = []
        for d in range(0, g.num_darts, 2):
            if d >> 1 not in tree_set:
                gens.append(d)
                action[d] = len(gens)
                action[d ^ 1] = -len(gens)
        self.generator_darts = tuple(gens)
        self.dart_action = tuple(action)
        self._parent = tree_darts
        self.labels = tuple(_generator_label(g.edges[d >> 1][0]) for d in gens)

    @property
    def rank(self) -> int:
        return len(self.generator_darts)

    # -- tree paths -----------------------------------------------------------

    def tree_path_from_root(self, v: int) -> Path:
        out = []
        while v != self.root:
            d = self._parent[v]
            out.append(d)
            v = self.graph.origin(d)
        return tuple(reversed(out))

    def tree_path(self, u: int, v: int) -> Path:
        return reduce_darts(reverse_path(self.tree_path_from_root(u)) + self.tree_path_from_root(v))

    # -- words ------------------------------------------------------------------

    def word_of_path(self, path) -> Word:
        return reduce_word(a for a in (self.dart_action[d] for d in path) if a)

    def letter_cycle(self, a: int) -> Path:
        d = self.generator_darts[abs(a) - 1]
        if a < 0:
            d ^= 1
        g = self.graph
        return self.tree_path_from_root(g.origin(d)) + (d,) + reverse_path(
            self.tree_path_from_root(g.terminus(d)))

    def cycle_of_word(self, w) -> Path:
        """Proper cycle at ``v0`` projecting ``[O, gO]``."""
        out: Path = ()
        for a in w:
            out = reduce_darts(out + self.letter_cycle(a))
        return out

    def vertex_of_word(self, w) -> TreeVertex:
        return TreeVertex(self.cycle_of_word(reduce_word(w)))

    def lift_path(self, path) -> TreeVertex:
        path = tuple(path)
        if not self.graph.is_consecutive(self.root, path):
            raise ImproperPathError("path is not consecutive from the base vertex")
        if not is_proper(path):
            raise ImproperPathError("path backtracks")
        return TreeVertex(path)

    def act(self, w, v: TreeVertex) -> TreeVertex:
        return TreeVertex(reduce_darts(self.cycle_of_word(w) + v.path))

    def format_word(self, w) -> str:
        if not w:
            return "1"
        return " ".join(self.labels[abs(a) - 1] + ("" if a > 0 else "^-1") for a in w)

    def parse_word(self, text: str) -> Word:
        text = text.strip()
        if text in ("", "1", "e"):
            return ()
        out = []
        for tok in re.split(r"[\s,*]+", text):
            if not tok:
                continue
            inv = tok.endswith("^-1")
            name = tok[:-3] if inv else tok
            if name not in self.labels:
                raise WordError(f"unknown generator {name!r}")
            i = self.labels.index(name) + 1
            out.append(-i if inv else i)
        return reduce_word(out)

    # -- rays -----------------------------------------------------------------

    def make_ray(self, prefix, period) -> Ray:
        """Validate and canonicalise an eventually periodic ray."""
        g = self.graph
        prefix, period = tuple(prefix), tuple(period)
        if not period:
            raise ImproperPathError("ray period must be nonempty")
        if not g.is_consecutive(self.root, prefix):
            raise ImproperPathError("ray prefix does not start at the base vertex")
        start = g.path_end(self.root, prefix)
        if not g.is_consecutive(start, period) or g.path_end(start, period) != start:
            raise ImproperPathError("ray period is not a cycle at the end of the prefix")
        if not is_proper(prefix + period + period[:1]):
            raise ImproperPathError("ray backtracks")
        return canonical_ray(prefix, period)

    def act_ray(self, w, ray: Ray) -> Ray:
        c = self.cycle_of_word(w)
        m = len(c) // len(ray.period) + 2
        r = reduce_darts(c + ray.prefix + ray.period * m)
        return canonical_ray(r[:len(r) - len(ray.period)], ray.period)

    def busemann(self, w, ray: Ray) -> int:
        """``d(O, v) - d(gO, v)`` for ``v`` far along ``[O, ray)``."""
        c = self.cycle_of_word(w)
        return 2 * lcp(c, ray.darts(len(c) + 1)) - len(c)

    def translation_length(self, w) -> int:
        return len(self._axis(w)[1])

    def _axis(self, w) -> tuple[Path, Path]:
        w = reduce_word(w)
        if not w:
            raise WordError("the identity has no axis")
        c = self.cycle_of_word(w)
        i, j = 0, len(c) - 1
        while i < j and c[i] == c[j] ^ 1:
            i += 1
            j -= 1
        return c[:i], c[i:j + 1]

    def fixed_ends(self, w) -> tuple[Ray, Ray]:
        """(attracting, repelling) ends of the axis of ``w``."""
        tail, core = self._axis(w)
        return canonical_ray(tail, core), canonical_ray(tail, reverse_path(core))

    def ray_catalog(self, max_prefix: int = 3, max_period: int = 4) -> tuple[Ray, ...]:
        """Every ray ``prefix . period^inf`` within the given bounds, deduplicated."""
        g = self.graph
        found = set()
        for prefix in proper_paths(g, self.root, max_prefix, exact=False):
            start = g.path_end(self.root, prefix)
            for period in proper_paths(g, start, max_period, exact=False, closed=True):
                if not period:
                    continue
                if prefix and period[0] == prefix[-1] ^ 1:
                    continue
                if period[0] == period[-1] ^ 1:
                    continue
                found.add(canonical_ray(prefix, period))
        return tuple(sorted(found, key=lambda r: (len(r.prefix) + len(r.period), r)))

    def word_cycle_matrix(self, words) -> tuple[np.ndarray, np.ndarray]:
        return _kernels.pack_paths([self.cycle_of_word(w) for w in words])


def canonical_ray(prefix, period) -> Ray:
    prefix, period = list(prefix), tuple(period)
    while prefix and prefix[-1] == period[-1]:
        prefix.pop()
        period = period[-1:] + period[:-1]
    return Ray(tuple(prefix), _primitive(period))


def proper_paths(g: Graph, start: int, max_len: int, exact: bool = True, closed: bool = False):
    """Enumerate proper dart paths from ``start`` (depth-first, dart-id order)."""
    stack: list[Path] = [()]
    while stack:
        p = stack.pop()
        end = g.path_end(start, p)
        if (not exact or len(p) == max_len) and (not closed or end == start):
            yield p
        if len(p) < max_len:
            nxt = [d for d in g.out_darts(end) if not p or d != p[-1] ^ 1]
            stack.extend(p + (d,) for d in reversed(nxt))


def _generator_label(edge_id: str) -> str:
    m = re.fullmatch(r"e(\d+)", edge_id)
    return "x" + m.group(1) if m else edge_id


def busemann_table(sd: SpanningData, words, rays, use_numba: bool | None = None) -> np.ndarray:
    """Matrix of Busemann values ``delta(w_i, ray_j)``."""
    cycles, lengths = sd.word_cycle_matrix(list(words))
    width = int(lengths.max(initial=0)) + 1
    ray_mat, _ = _kernels.pack_paths([r.darts(width) for r in rays], width)
    return _kernels.busemann_grid(cycles, lengths, ray_mat, use_numba)

