from __future__ import annotations

from fractions import Fraction
from math import gcd

import pytest

from conftest import FIXTURES, bundle
from treelattice.boundary import (ConsistencyError, delta_spectrum, full_group_pairing,
                                  measure_additivity_holds, radon_nikodym,
                                  ratio_set_classification)
from treelattice.completion import CycleCompleter
from treelattice.covering import TreeVertex, busemann_table, proper_paths, reduced_words
from treelattice.cylinders import CylinderAlgebra
from treelattice.graph import InapplicableError, parse_graph


def test_radon_nikodym_examples():
    g, sd, _ = bundle("theta")
    r = sd.ray_catalog(1, 2)[0]
    assert radon_nikodym(sd, (), r) == 1
    w = sd.parse_word("x2")
    att, rep = sd.fixed_ends(w)
    assert radon_nikodym(sd, w, att) == 2 ** 2
    assert radon_nikodym(sd, w, rep) == Fraction(1, 4)


@pytest.mark.parametrize("name", FIXTURES)
def test_radon_nikodym_is_power_of_q(name):
    g, sd, inv = bundle(name)
    q = g.branching()
    for w in reduced_words(sd.rank, 2):
        for r in sd.ray_catalog(2, 2):
            x = radon_nikodym(sd, w, r)
            e = sd.busemann(w, r)
            assert x == Fraction(q) ** e
            if inv.bipartite:
                assert e % 2 == 0


def test_busemann_table_matches_scalar():
    g, sd, _ = bundle("k4")
    words = list(reduced_words(sd.rank, 2))
    rays = sd.ray_catalog(2, 3)
    table = busemann_table(sd, words, rays)
    for i, w in enumerate(words):
        for j, r in enumerate(rays):
            assert table[i, j] == sd.busemann(w, r)


@pytest.mark.parametrize("name, lam, classification", [
    ("theta", Fraction(1, 4), "III_{1/4}"),
    ("double_theta", Fraction(1, 4), "III_{1/4}"),
    ("dumbbell", Fraction(1, 2), "III_{1/2}"),
    ("k4", Fraction(1, 2), "III_{1/2}"),
    ("bouquet", Fraction(1, 3), "III_{1/3}"),
])
def test_ratio_set(name, lam, classification):
    g, sd, inv = bundle(name)
    rep = ratio_set_classification(g, sd, inv=inv, word_bound=4)
    assert rep.lam == lam and rep.classification == classification
    assert rep.generator_gcd == (2 if inv.bipartite else 1)
    assert 0 in rep.spectrum.values


def test_delta_spectrum_parities():
    sd = bundle("dumbbell")[1]
    spectrum = delta_spectrum(sd, 4)
    assert spectrum.gcd == 1
    assert any(v % 2 for v in spectrum.values) and any(v % 2 == 0 and v for v in spectrum.values)
    sd = bundle("theta")[1]
    spectrum = delta_spectrum(sd, 4)
    assert spectrum.gcd == 2 and all(v % 2 == 0 for v in spectrum.values)
    values = spectrum.values
    assert values == sorted(values) and values == [-v for v in reversed(values)]


@pytest.mark.parametrize("name", FIXTURES)
def test_witness_cylinders_carry_constant_delta(name):
    g, sd, _ = bundle(name)
    spectrum = delta_spectrum(sd, 3)
    catalog = sd.ray_catalog()
    for value, (w, r, c) in spectrum.witnesses.items():
        assert sd.busemann(w, r) == value
        through = [s for s in catalog if s.darts(c.depth) == c.path]
        assert r in through
        assert all(sd.busemann(w, s) == value for s in through)


def test_spectrum_gcd_over_all_values(fixture_name):
    sd = bundle(fixture_name)[1]
    spectrum = delta_spectrum(sd, 3)
    g = 0
    for v in spectrum.values:
        g = gcd(g, v)
    assert g == spectrum.gcd


def test_ratio_set_refuses_non_regular():
    g = parse_graph("vertices 2\nedge e1 a b\nedge e2 a b\nedge e3 a b\nedge l a a\n")
    with pytest.raises(InapplicableError):
        ratio_set_classification(g)


def test_measure_additivity(fixture_name):
    g = bundle(fixture_name)[0]
    for p in proper_paths(g, 0, 3, exact=False):
        assert measure_additivity_holds(g, TreeVertex(p))


# -- pairing --------------------------------------------------------------------

def _check_pairing(g, sd, table):
    alg = CylinderAlgebra(g)
    sources = alg.canonical([])
    targets = alg.canonical([])
    for t in table.triples:
        s, d = alg.cylinder(t.source.path), alg.cylinder(t.target.path)
        assert t.source.path[:table.u.depth] == table.u.path
        assert t.target.path[:table.v.depth] == table.v.path
        assert alg.disjoint(sources, s) and alg.disjoint(targets, d)
        assert alg.measure(s) == alg.measure(d) == t.measure
        assert alg.translate(sd, t.word, s) == d
        sources, targets = alg.union(sources, s), alg.union(targets, d)
    covered = alg.measure(sources)
    assert covered + table.uncovered[-1] == table.total


def test_pairing_identity():
    g, sd, _ = bundle("theta")
    u = TreeVertex(g.parse_path("e1"))
    table = full_group_pairing(g, u, u, 3, sd)
    assert len(table.triples) == 1 and table.triples[0].word == ()
    assert table.uncovered == [0, 0, 0]


@pytest.mark.parametrize("strategy", ["shortest", "construction"])
def test_pairing_theta_example(strategy):
    g, sd, _ = bundle("theta")
    u, v = TreeVertex(g.parse_path("e1")), TreeVertex(g.parse_path("e2"))
    table = full_group_pairing(g, u, v, 3, sd, strategy=strategy)
    assert table.total == 1
    prev = table.total
    for j, x in enumerate(table.uncovered, 1):
        assert x < prev and x <= table.bound(j)
        prev = x
    _check_pairing(g, sd, table)


@pytest.mark.parametrize("name", FIXTURES)
def test_pairing_depth_two(name):
    g, sd, _ = bundle(name)
    cc = CycleCompleter(g, 0)
    paths = list(proper_paths(g, 0, 2))
    for a in paths[:3]:
        for b in paths[-3:]:
            table = full_group_pairing(g, TreeVertex(a), TreeVertex(b), 3, sd, cc)
            assert all(table.uncovered[j - 1] <= table.bound(j) for j in (1, 2, 3))
            assert list(table.uncovered) == sorted(table.uncovered, reverse=True)
            _check_pairing(g, sd, table)


def test_pairing_json():
    g, sd, _ = bundle("dumbbell")
    u, v = TreeVertex(g.parse_path("bridge")), TreeVertex(g.parse_path("loop_a"))
    data = full_group_pairing(g, u, v, 2, sd).to_json(sd)
    assert data["u"] == "bridge" and data["v"] == "loop_a"
    assert len(data["uncovered"]) == len(data["bounds"]) == 2
    assert data["measure_u"] == {"num": 1, "den": 1}


def test_pairing_rejects():
    g, sd, _ = bundle("theta")
    p = g.parse_path
    with pytest.raises(ValueError):
        full_group_pairing(g, TreeVertex(p("e1")), TreeVertex(p("e1 e2^-1")), 2, sd)
    with pytest.raises(ValueError):
        full_group_pairing(g, TreeVertex(()), TreeVertex(()), 2, sd)
    with pytest.raises(ValueError):
        full_group_pairing(g, TreeVertex(p("e1")), TreeVertex(p("e2")), 2, sd, strategy="x")
    bad = parse_graph("vertices 2\nedge e1 a b\nedge e2 a b\nedge e3 a b\nedge l a a\n")
    with pytest.raises(InapplicableError):
        full_group_pairing(bad, TreeVertex((0,)), TreeVertex((2,)), 1)


def test_consistency_error_is_assertion():
    assert issubclass(ConsistencyError, AssertionError)
