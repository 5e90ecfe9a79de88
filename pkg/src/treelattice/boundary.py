"""Boundary measure, Radon-Nikodym cocycle, ratio-set type and full-group pairing."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .completion import CycleCompleter
from .covering import Ray, SpanningData, TreeVertex, inverse_word, multiply, reduced_words
from .cylinders import CylinderAlgebra, cylinder_measure
from .graph import Graph, InvariantReport, gcd_all, graph_invariants

__all__ = [
    "ConsistencyError", "DeltaSpectrum", "PairingTable", "PairingTriple", "RatioSetReport",
    "cylinder_measure", "default_word_bound", "delta_spectrum", "full_group_pairing",
    "measure_additivity_holds", "radon_nikodym", "ratio_set_classification",
]


class ConsistencyError(AssertionError):
    """Internal cross-check failed; indicates a bug rather than bad input."""


def radon_nikodym(sd: SpanningData, w, ray: Ray) -> Fraction:
    """``d(mu o g)/d(mu)`` at ``ray``, i.e. ``q ** busemann``."""
    q = sd.graph.branching()
    return Fraction(q) ** sd.busemann(w, ray)


def default_word_bound(inv: InvariantReport) -> int:
    return max(6, inv.diam + inv.max_circuit + 2)


@dataclass
class DeltaSpectrum:
    values: list[int]
    gcd: int
    witnesses: dict[int, tuple]
    """value -> (word, ray, cylinder vertex on which the value is constant)."""
    words: int
    rays: int


def delta_spectrum(sd: SpanningData, max_word: int, catalog=None, *,
                   use_numba: bool | None = None, chunk: int = 2048) -> DeltaSpectrum:
    from .covering import busemann_table

    rays = tuple(catalog) if catalog is not None else sd.ray_catalog()
    words = list(reduced_words(sd.rank, max_word))
    seen: dict[int, tuple] = {}
    for start in range(0, len(words), chunk):
        block = words[start:start + chunk]
        grid = busemann_table(sd, block, rays, use_numba)
        for value in np.unique(grid):
            if int(value) in seen:
                continue
            i, j = map(int, np.argwhere(grid == value)[0])
            w, r = block[i], rays[j]
            depth = len(sd.cycle_of_word(w)) + 1
            seen[int(value)] = (w, r, TreeVertex(r.darts(depth)))
    values = sorted(seen)
    return DeltaSpectrum(values, gcd_all(values), {v: seen[v] for v in values},
                         len(words), len(rays))


@dataclass
class RatioSetReport:
    q: int
    bipartite: bool
    lam: Fraction
    generator_gcd: int
    word_bound: int
    spectrum: DeltaSpectrum

    @property
    def classification(self) -> str:
        return f"III_{{{self.lam.numerator}/{self.lam.denominator}}}"

    def to_json(self, sd: SpanningData) -> dict:
        from .report import rational, ray_json
        g = sd.graph
        wit = [{"delta": v, "word": sd.format_word(w), "ray": ray_json(g, r),
                "cylinder": g.format_path(c.path)}
               for v, (w, r, c) in sorted(self.spectrum.witnesses.items())
               if abs(v) <= 2 * self.generator_gcd]
        return {"q": self.q, "bipartite": self.bipartite, "lambda": rational(self.lam),
                "generator_gcd": self.generator_gcd, "classification": self.classification,
                "factor": f"hyperfinite type {self.classification}",
                "word_bound": self.word_bound, "delta_values": self.spectrum.values,
                "words": self.spectrum.words, "rays": self.spectrum.rays,
                "witnesses": wit}


def ratio_set_classification(g: Graph, sd: SpanningData | None = None, *,
                             word_bound: int | None = None, catalog=None,
                             inv: InvariantReport | None = None,
                             use_numba: bool | None = None) -> RatioSetReport:
    q = g.branching()
    sd = sd or SpanningData(g)
    inv = inv or graph_invariants(g)
    L = word_bound if word_bound is not None else default_word_bound(inv)
    spectrum = delta_spectrum(sd, L, catalog, use_numba=use_numba)
    expected = 2 if inv.bipartite else 1
    if spectrum.gcd != expected:
        raise ConsistencyError(f"delta gcd {spectrum.gcd} but bipartite={inv.bipartite}")
    lam = Fraction(1, q * q) if inv.bipartite else Fraction(1, q)
    return RatioSetReport(q, inv.bipartite, lam, spectrum.gcd, L, spectrum)


# -- full-group pairing ---------------------------------------------------------

@dataclass(frozen=True)
class PairingTriple:
    source: TreeVertex
    target: TreeVertex
    word: tuple[int, ...]
    measure: Fraction
    k: int


@dataclass
class PairingTable:
    u: TreeVertex
    v: TreeVertex
    rounds: int
    q: int
    K: int
    triples: list[PairingTriple] = field(default_factory=list)
    uncovered: list[Fraction] = field(default_factory=list)
    """Uncovered measure of ``Omega_u`` after each round."""

    @property
    def total(self) -> Fraction:
        return cylinder_measure_q(self.q, self.u.depth)

    def bound(self, j: int) -> Fraction:
        return (1 - Fraction(1, self.q ** (self.K + 1))) ** j * self.total

    def to_json(self, sd: SpanningData) -> dict:
        from .report import rational
        g = sd.graph
        return {
            "u": g.format_path(self.u.path), "v": g.format_path(self.v.path),
            "rounds": self.rounds, "q": self.q, "K": self.K,
            "measure_u": rational(self.total),
            "uncovered": [rational(x) for x in self.uncovered],
            "bounds": [rational(self.bound(j)) for j in range(1, len(self.uncovered) + 1)],
            "triples": [{"source": g.format_path(t.source.path),
                         "target": g.format_path(t.target.path),
                         "word": sd.format_word(t.word), "measure": rational(t.measure),
                         "k": t.k} for t in self.triples],
        }


def cylinder_measure_q(q: int, depth: int) -> Fraction:
    return Fraction(q + 1) if depth == 0 else Fraction(1, q ** (depth - 1))


def _off_path_siblings(g: Graph, base: int, start: tuple, end: tuple) -> list[list[tuple]]:
    """Cylinders partitioning ``Omega_start - Omega_end``, grouped by depth."""
    from .cylinders import children
    out = []
    for i in range(len(start), len(end)):
        node = end[:i]
        out.append([c for c in children(g, base, node) if c != end[:i + 1]])
    return out


def _by_last(path):
    return path[-1], path


def _continuation(g: Graph, base: int, ca, cb):
    e = next(d for d in g.out_darts(base) if d not in (ca[-1] ^ 1, cb[-1] ^ 1))
    return ca + (e,), cb + (e,)


def _mapped_piece(g: Graph, base: int, ca, cb, n: int):
    """Largest pair of cylinders ``g`` carries onto each other.

    ``g = word(cb) word(ca)^-1`` sends the vertex ``ca[:i]`` to ``cb[:i]`` with
    matching arrival edge whenever ``ca[i-1:] == cb[i-1:]``; without a common
    suffix fall back to one child beyond the cycle ends, through a dart at the
    base vertex that backtracks on neither cycle.
    """
    m = 0
    while m < len(ca) and ca[-1 - m] == cb[-1 - m]:
        m += 1
    if m:
        i = max(n, len(ca) - m + 1)
        return ca[:i], cb[:i]
    return _continuation(g, base, ca, cb)


def full_group_pairing(g: Graph, u: TreeVertex, v: TreeVertex, rounds: int,
                       sd: SpanningData | None = None,
                       completer: CycleCompleter | None = None,
                       verify: bool = True, strategy: str = "shortest") -> PairingTable:
    """Pair ``Omega_u`` with ``Omega_v`` piece by piece through group elements.

    Each round completes the projected paths of every still-unmatched pair to
    equal-length proper cycles and maps a cylinder beyond the lifted cycles
    across. The leftover sibling cylinders are paired by depth and queued for
    the next round, ordered by final dart and then lexicographically.

    ``strategy="construction"`` uses the constructive completion and maps the
    single child through a continuation dart at the base vertex.
    ``strategy="shortest"`` (default) uses a least-excess completion and maps the
    largest cylinder on which the two cycles agree to the end, which is never
    smaller and keeps the number of pieces manageable.
    """
    if strategy not in ("shortest", "construction"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if u.depth != v.depth:
        raise ValueError("cylinders must have equal depth")
    if u.depth == 0:
        raise ValueError("depth must be at least 1")
    q = g.branching()
    sd = sd or SpanningData(g)
    completer = completer or CycleCompleter(g, sd.root)
    alg = CylinderAlgebra(g, sd.root) if verify else None
    table = PairingTable(u, v, rounds, q, completer.K)
    pending = [(u.path, v.path)]
    for _ in range(rounds):
        nxt = []
        for a, b in pending:
            if a == b:
                table.triples.append(PairingTriple(TreeVertex(a), TreeVertex(a), (),
                                                   cylinder_measure_q(q, len(a)), 0))
                continue
            if strategy == "shortest":
                ca, cb, cert = completer.shortest(a, b)
                a1, b1 = _mapped_piece(g, sd.root, ca, cb, len(a))
            else:
                ca, cb, cert = completer.complete(a, b)
                a1, b1 = _continuation(g, sd.root, ca, cb)
            w = multiply(sd.word_of_path(cb), inverse_word(sd.word_of_path(ca)))
            if verify:
                image = alg.translate(sd, w, alg.cylinder(a1))
                if image != alg.cylinder(b1):
                    raise ConsistencyError("pairing element does not carry source to target")
            table.triples.append(PairingTriple(TreeVertex(a1), TreeVertex(b1), w,
                                               cylinder_measure_q(q, len(a1)), cert.k))
            left_a = _off_path_siblings(g, sd.root, a, a1)
            left_b = _off_path_siblings(g, sd.root, b, b1)
            for la, lb in zip(left_a, left_b):
                if len(la) != len(lb):
                    raise ConsistencyError("unequal sibling counts in a regular tree")
                nxt.extend(zip(sorted(la, key=_by_last), sorted(lb, key=_by_last)))
        pending = nxt
        table.uncovered.append(sum((cylinder_measure_q(q, len(a)) for a, _ in pending),
                                   Fraction(0)))
    return table


def measure_additivity_holds(g: Graph, v: TreeVertex, base: int = 0) -> bool:
    from .cylinders import children
    kids = children(g, base, v.path)
    return cylinder_measure(g, v) == sum((cylinder_measure(g, c) for c in kids), Fraction(0))
