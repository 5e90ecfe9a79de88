"""Clopen subsets of the tree boundary as finite unions of cylinders.

A cylinder ``Omega_v`` is named by the tree vertex ``v`` (its dart path from
``O``); the empty path names the whole boundary.  Sets are stored as the
coarsest antichain: no member is a prefix of another and no complete family of
siblings survives unmerged, so equality of sets is equality of the stored
tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .covering import SpanningData, TreeVertex, reduce_darts
from .graph import Graph, Path


def children(g: Graph, root: int, path: Path) -> list[Path]:
    end = g.path_end(root, path)
    return [path + (d,) for d in g.out_darts(end) if not path or d != path[-1] ^ 1]


@dataclass(frozen=True)
class CylinderSet:
    paths: tuple[Path, ...]

    def __bool__(self):
        return bool(self.paths)

    def __len__(self):
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)


class CylinderAlgebra:
    """Boolean operations on cylinder sets of one covering tree."""

    def __init__(self, g: Graph, root: int = 0):
        self.graph = g
        self.root = root

    @property
    def empty(self) -> CylinderSet:
        return CylinderSet(())

    @property
    def full(self) -> CylinderSet:
        return CylinderSet(((),))

    def cylinder(self, v) -> CylinderSet:
        return CylinderSet((tuple(v.path if isinstance(v, TreeVertex) else v),))

    def canonical(self, paths) -> CylinderSet:
        items = sorted(set(tuple(p) for p in paths), key=lambda p: (len(p), p))
        kept: set[Path] = set()
        for p in items:
            if not any(p[:i] in kept for i in range(len(p))):
                kept.add(p)
        # merge complete sibling families, deepest first
        changed = True
        while changed:
            changed = False
            for p in sorted(kept, key=len, reverse=True):
                if not p or p not in kept:
                    continue
                parent = p[:-1]
                sibs = children(self.graph, self.root, parent)
                if all(s in kept for s in sibs):
                    kept.difference_update(sibs)
                    kept.add(parent)
                    changed = True
        return CylinderSet(tuple(sorted(kept)))

    def _refine(self, a: CylinderSet, b: CylinderSet):
        """Split both antichains so every pair of members is nested-free or equal."""
        return self._split(a.paths, b.paths), self._split(b.paths, a.paths)

    def _split(self, mine, other) -> list[Path]:
        out: list[Path] = []
        stack = list(mine)
        while stack:
            p = stack.pop()
            if any(len(q) > len(p) and q[:len(p)] == p for q in other):
                stack.extend(children(self.graph, self.root, p))
            else:
                out.append(p)
        return out

    def contains(self, a: CylinderSet, path: Path) -> bool:
        return any(path[:len(p)] == p for p in a.paths)

    def union(self, *sets: CylinderSet) -> CylinderSet:
        return self.canonical(p for s in sets for p in s.paths)

    def intersection(self, a: CylinderSet, b: CylinderSet) -> CylinderSet:
        ra, rb = self._refine(a, b)
        rb_set = set(rb)
        keep = [p for p in ra if p in rb_set or any(p[:len(q)] == q for q in rb)]
        return self.canonical(keep)

    def complement(self, a: CylinderSet) -> CylinderSet:
        out: list[Path] = []
        members = set(a.paths)
        stack: list[Path] = [()]
        while stack:
            p = stack.pop()
            if p in members:
                continue
            if any(len(q) > len(p) and q[:len(p)] == p for q in members):
                stack.extend(children(self.graph, self.root, p))
            else:
                out.append(p)
        return self.canonical(out)

    def difference(self, a: CylinderSet, b: CylinderSet) -> CylinderSet:
        return self.intersection(a, self.complement(b))

    def disjoint(self, a: CylinderSet, b: CylinderSet) -> bool:
        return not any(p[:len(q)] == q or q[:len(p)] == p for p in a.paths for q in b.paths)

    def translate(self, sd: SpanningData, w, a: CylinderSet) -> CylinderSet:
        """Image ``g . A`` of a cylinder set under the group element ``w``."""
        c = sd.cycle_of_word(w)
        pieces = []
        for p in a.paths:
            if not p:
                return self.full
            x = reduce_darts(c + p)
            if x and x[-1] == p[-1]:
                pieces.append(self.cylinder(x))
            else:
                # gO lies beyond gv: the image is everything except the branch behind gv
                pieces.append(self.complement(self.cylinder(x + (p[-1] ^ 1,))))
        return self.union(*pieces)

    # -- measure --------------------------------------------------------------

    def measure(self, a: CylinderSet) -> Fraction:
        return sum((cylinder_measure(self.graph, p) for p in a.paths), Fraction(0))


def cylinder_measure(g: Graph, v) -> Fraction:
    """``q^(1-n)`` for a cylinder at depth ``n >= 1``; ``q + 1`` for the whole boundary."""
    q = g.branching()
    n = v.depth if isinstance(v, TreeVertex) else len(v)
    if n == 0:
        return Fraction(q + 1)
    return Fraction(1, q ** (n - 1))


def pi_vertex(sd: SpanningData, w) -> TreeVertex:
    """Vertex of ``gT`` nearest ``O``: the geodesic up to its last non-tree dart."""
    c = sd.cycle_of_word(w)
    last = max((i for i, d in enumerate(c) if sd.dart_action[d]), default=-1)
    return TreeVertex(c[:last + 1])
