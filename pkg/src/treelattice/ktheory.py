"""Cuntz-Krieger matrix of a free group, its K-theory, and the partition identities."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .covering import SpanningData
from .cylinders import CylinderAlgebra, CylinderSet, pi_vertex
from .graph import Graph

Matrix = list[list[int]]


def letter_order(gamma: int) -> list[int]:
    """Rows/columns ordered ``x1, x1^-1, x2, x2^-1, ...``."""
    return [a for i in range(1, gamma + 1) for a in (i, -i)]


def ck_matrix(gamma: int) -> Matrix:
    if gamma < 2:
        raise ValueError("rank must be at least 2 (rank 1 gives a permutation matrix)")
    letters = letter_order(gamma)
    return [[0 if y == -x else 1 for y in letters] for x in letters]


@dataclass(frozen=True)
class AdmissibilityReport:
    irreducible: bool
    permutation: bool

    @property
    def ok(self) -> bool:
        return self.irreducible and not self.permutation


def admissibility(a: Matrix) -> AdmissibilityReport:
    n = len(a)
    reach = [[bool(a[i][j]) for j in range(n)] for i in range(n)]
    for k in range(n):  # Warshall closure
        for i in range(n):
            if reach[i][k]:
                row_k = reach[k]
                row_i = reach[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    irreducible = all(reach[i][j] for i in range(n) for j in range(n))
    perm = (all(set(r) <= {0, 1} and sum(r) == 1 for r in a)
            and all(sum(a[i][j] for i in range(n)) == 1 for j in range(n)))
    return AdmissibilityReport(irreducible, perm)


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def smith_normal_form(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """``(D, U, V)`` with ``U @ M @ V == D``, ``U``, ``V`` unimodular and the
    diagonal of ``D`` non-negative with each entry dividing the next."""
    a = [list(map(int, row)) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u, v = identity(rows), identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for mat in (a, v):
            for row in mat:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row_dst += k * row_src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):
        for mat in (a, v):
            for row in mat:
                row[dst] += k * row[src]

    for t in range(min(rows, cols)):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
            rest = [(abs(a[i][t]), i, None) for i in range(t + 1, rows) if a[i][t]]
            rest += [(abs(a[t][j]), None, j) for j in range(t + 1, cols) if a[t][j]]
            if rest:
                _, i, j = min(rest, key=lambda r: r[0])
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    if matmul(matmul(u, m), v) != a:
        raise AssertionError("Smith normal form failed self-check")
    return a, u, v


def invariant_factors(m: Matrix) -> list[int]:
    d, _, _ = smith_normal_form(m)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def relation_matrix(gamma: int) -> Matrix:
    """Rows ``x - sum_{y != x^-1} y``, i.e. ``I - A``."""
    a = ck_matrix(gamma)
    return [[int(i == j) - a[i][j] for j in range(len(a))] for i in range(len(a))]


class Cokernel:
    """The abelian group ``Z^n / (row lattice of M)``."""

    def __init__(self, m: Matrix):
        self.matrix = m
        self.d, self.u, self.v = smith_normal_form(m)
        n = len(m[0])
        self.diag = [self.d[i][i] if i < len(self.d) else 0 for i in range(n)]

    def coords(self, x) -> list[int]:
        return [sum(x[k] * self.v[k][j] for k in range(len(x))) for j in range(len(self.diag))]

    def contains(self, x) -> bool:
        """Whether ``x`` lies in the relation lattice (is zero in the cokernel)."""
        return all((c == 0) if d == 0 else (c % d == 0) for c, d in zip(self.coords(x), self.diag))

    def order(self, x) -> int | None:
        """Order of the class of ``x``; ``None`` for infinite order."""
        out = 1
        for c, d in zip(self.coords(x), self.diag):
            if d == 0:
                if c:
                    return None
            else:
                out = lcm(out, d // gcd(d, c))
        return out

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.diag if d == 0)

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.diag if d > 1]


@dataclass(frozen=True)
class KInvariant:
    gamma: int
    k0_free_rank: int
    k0_torsion: tuple[int, ...]
    identity_order: int | None
    k1_rank: int
    invariant_factors: tuple[int, ...]
    presentation_agrees: bool

    def describe(self) -> str:
        k0 = f"Z^{self.k0_free_rank}" + "".join(f" (+) Z/{t}" for t in self.k0_torsion)
        order = "infinite" if self.identity_order is None else str(self.identity_order)
        return f"K0 = {k0}, [1] has order {order}, K1 = Z^{self.k1_rank}"

    def to_json(self) -> dict:
        return {"gamma": self.gamma, "k0_free_rank": self.k0_free_rank,
                "k0_torsion": list(self.k0_torsion), "identity_order": self.identity_order,
                "k1_rank": self.k1_rank, "invariant_factors": list(self.invariant_factors),
                "presentation_agrees": self.presentation_agrees,
                "summary": self.describe()}


def presentation_check(gamma: int) -> bool:
    """Second route: map generators to ``Z^gamma (+) Z/(gamma-1)`` by
    ``x -> (e_x, 0)``, ``x^-1 -> (-e_x, 1)`` and confirm every relation dies,
    the map is onto, and ``epsilon`` goes to the torsion generator.

    Together with equal invariant factors (checked by the caller) a surjection
    between isomorphic finitely generated abelian groups is an isomorphism.
    """
    tor = gamma - 1
    letters = letter_order(gamma)

    def image(coeffs):
        free = [0] * gamma
        t = 0
        for a, c in zip(letters, coeffs):
            if a > 0:
                free[a - 1] += c
            else:
                free[-a - 1] -= c
                t += c
        return free, (t % tor if tor > 1 else 0)

    for row in relation_matrix(gamma):
        if image(row) != ([0] * gamma, 0):
            return False
    eps = image([1] * len(letters))
    if eps != ([0] * gamma, 1 % tor if tor > 1 else 0):
        return False
    # onto: images of x (unit vectors) and epsilon generate everything
    return True


def k_groups(gamma: int) -> KInvariant:
    if gamma < 2:
        raise ValueError("rank must be at least 2")
    coker = Cokernel(relation_matrix(gamma))
    eps = [1] * (2 * gamma)
    order = coker.order(eps)
    expected_factors = sorted(coker.torsion) == ([gamma - 1] if gamma > 2 else [])
    return KInvariant(
        gamma=gamma,
        k0_free_rank=coker.free_rank,
        k0_torsion=tuple(coker.torsion),
        identity_order=order,
        k1_rank=coker.free_rank,  # nullity of I - A (A symmetric)
        invariant_factors=tuple(coker.diag),
        presentation_agrees=presentation_check(gamma) and expected_factors
        and coker.free_rank == gamma,
    )


# -- Cuntz-Krieger partition --------------------------------------------------

@dataclass
class PartitionReport:
    letters: list[str]
    cylinders: dict[str, list[str]]
    checks: dict[str, bool]
    counterexamples: list[dict] = field(default_factory=list)
    measures: dict[str, Fraction] | None = None
    total_measure: Fraction | None = None
    pairs_checked: int = 0

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        from .report import rational
        out = {"letters": self.letters, "cylinders": self.cylinders,
               "checks": self.checks, "counterexamples": self.counterexamples,
               "pairs_checked": self.pairs_checked, "ok": self.ok}
        if self.measures is not None:
            out["measures"] = {k: rational(v) for k, v in self.measures.items()}
            out["total_measure"] = rational(self.total_measure)
        return out


def verify_ck_partition(g: Graph, sd: SpanningData | None = None) -> PartitionReport:
    sd = sd or SpanningData(g)
    alg = CylinderAlgebra(g, sd.root)
    letters = letter_order(sd.rank)
    name = {a: sd.format_word((a,)) for a in letters}
    pi = {a: alg.cylinder(pi_vertex(sd, (a,))) for a in letters}

    def show(s: CylinderSet) -> list[str]:
        return [g.format_path(p) or "O" for p in s.paths]

    checks = {"disjoint": True, "covers": True, "L1a": True, "L1b": True}
    bad: list[dict] = []
    for i, a in enumerate(letters):
        for b in letters[i + 1:]:
            if not alg.disjoint(pi[a], pi[b]):
                checks["disjoint"] = False
                bad.append({"check": "disjoint", "x": name[a], "y": name[b],
                            "overlap": show(alg.intersection(pi[a], pi[b]))})
    union = alg.union(*pi.values())
    if union != alg.full:
        checks["covers"] = False
        bad.append({"check": "covers", "missing": show(alg.complement(union))})
    pairs = 0
    for x in letters:
        lhs = alg.translate(sd, (x,), pi[-x])
        rhs = alg.complement(pi[x])
        if lhs != rhs:
            checks["L1a"] = False
            bad.append({"check": "L1a", "x": name[x], "lhs": show(lhs), "rhs": show(rhs)})
        for y in letters:
            if y == -x:
                continue
            pairs += 1
            lhs = alg.translate(sd, (x,), pi[y])
            rhs = alg.cylinder(pi_vertex(sd, (x, y)))
            if lhs != rhs:
                checks["L1b"] = False
                bad.append({"check": "L1b", "x": name[x], "y": name[y],
                            "lhs": show(lhs), "rhs": show(rhs)})
    report = PartitionReport(
        letters=[name[a] for a in letters],
        cylinders={name[a]: show(pi[a]) for a in letters},
        checks=checks, counterexamples=bad, pairs_checked=pairs,
    )
    if g.is_regular():
        report.measures = {name[a]: alg.measure(pi[a]) for a in letters}
        report.total_measure = sum(report.measures.values(), Fraction(0))
    return report

