from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIXTURES, bundle
from treelattice.covering import ORIGIN, TreeVertex, inverse_word, proper_paths, reduced_words
from treelattice.cylinders import CylinderAlgebra, children, cylinder_measure, pi_vertex
from treelattice.graph import InapplicableError, parse_graph

DEPTH = 3


def _paths(name, depth=DEPTH):
    g = bundle(name)[0]
    return [p for p in proper_paths(g, 0, depth, exact=False) if p]


def _random_set(name):
    return st.lists(st.sampled_from(_paths(name)), max_size=6)


def _count_measure(alg, s, depth):
    """Measure by counting depth-``depth`` vertices inside ``s``."""
    g = alg.graph
    q = g.branching()
    inside = sum(1 for p in proper_paths(g, 0, depth) if alg.contains(s, p))
    return Fraction(inside, q ** (depth - 1))


@pytest.mark.parametrize("name", FIXTURES)
def test_set_algebra_laws(name):
    g = bundle(name)[0]
    alg = CylinderAlgebra(g)

    @given(_random_set(name), _random_set(name))
    def check(xs, ys):
        a, b = alg.canonical(xs), alg.canonical(ys)
        assert alg.canonical(a.paths) == a
        assert alg.complement(alg.complement(a)) == a
        assert alg.union(a, alg.complement(a)) == alg.full
        assert not alg.intersection(a, alg.complement(a))
        assert alg.union(a, b) == alg.union(b, a)
        assert alg.intersection(a, b) == alg.intersection(b, a)
        assert alg.complement(alg.union(a, b)) == alg.intersection(
            alg.complement(a), alg.complement(b))
        assert alg.measure(alg.union(a, b)) + alg.measure(alg.intersection(a, b)) == (
            alg.measure(a) + alg.measure(b))
        assert alg.measure(a) == _count_measure(alg, a, DEPTH + 1)
        for p in proper_paths(g, 0, DEPTH + 1):
            assert alg.contains(alg.union(a, b), p) == (alg.contains(a, p) or alg.contains(b, p))
            assert alg.contains(alg.difference(a, b), p) == (
                alg.contains(a, p) and not alg.contains(b, p))
        assert alg.disjoint(a, b) == (not alg.intersection(a, b))

    check()


def test_merging_complete_sibling_families():
    g, sd, _ = bundle("theta")
    alg = CylinderAlgebra(g)
    kids = children(g, 0, g.parse_path("e1"))
    assert alg.canonical(kids) == alg.cylinder(g.parse_path("e1"))
    assert alg.canonical([(d,) for d in g.out_darts(0)]) == alg.full


@pytest.mark.parametrize("name", FIXTURES)
def test_translate_matches_pointwise_action(name):
    g, sd, _ = bundle(name)
    alg = CylinderAlgebra(g)
    rays = sd.ray_catalog(2, 3)
    sets = [alg.cylinder(p) for p in _paths(name, 2)]
    sets.append(alg.union(*sets[:3]))
    for w in reduced_words(sd.rank, 2):
        inv = inverse_word(w)
        n = len(sd.cycle_of_word(w)) + DEPTH + 4
        for s in sets:
            image = alg.translate(sd, w, s)
            assert alg.measure(image) > 0
            for r in rays:
                pulled = sd.act_ray(inv, r)
                assert alg.contains(image, r.darts(n)) == alg.contains(s, pulled.darts(n))


def test_measure_examples():
    g = bundle("theta")[0]
    p = g.parse_path
    assert cylinder_measure(g, TreeVertex(p("e1"))) == 1
    assert cylinder_measure(g, TreeVertex(p("e1 e2^-1 e3"))) == Fraction(1, 4)
    assert cylinder_measure(g, ORIGIN) == 3
    assert cylinder_measure(bundle("bouquet")[0], ORIGIN) == 4


def test_measure_refuses_non_regular():
    g = parse_graph("vertices 2\nedge e1 a b\nedge e2 a b\nedge e3 a b\nedge l a a\n")
    with pytest.raises(InapplicableError):
        cylinder_measure(g, TreeVertex((0,)))


@pytest.mark.parametrize("name", FIXTURES)
def test_measure_additivity_to_depth_six(name):
    g = bundle(name)[0]
    for p in proper_paths(g, 0, 5, exact=False):
        kids = children(g, 0, p)
        assert cylinder_measure(g, p) == sum(cylinder_measure(g, c) for c in kids)


def test_pi_identity_is_everything():
    g, sd, _ = bundle("theta")
    assert pi_vertex(sd, ()) == ORIGIN


def test_pi_of_generators_theta():
    g, sd, _ = bundle("theta")
    fmt = g.format_path
    assert fmt(pi_vertex(sd, sd.parse_word("x2")).path) == "e2"
    assert fmt(pi_vertex(sd, sd.parse_word("x2^-1")).path) == "e1 e2^-1"
    assert fmt(pi_vertex(sd, sd.parse_word("x3^-1")).path) == "e1 e3^-1"


@pytest.mark.parametrize("name", FIXTURES)
def test_pi_vertex_is_nearest_point_of_translate(name):
    """``gT`` is the set of vertices whose geodesic ends with ``g``'s last non-tree dart."""
    g, sd, _ = bundle(name)
    tree = set(sd.tree_edges)
    for w in reduced_words(sd.rank, 3, min_len=1):
        v = pi_vertex(sd, w).path
        assert sd.word_of_path(v) == w
        # every strict prefix lies outside gT
        assert all(sd.word_of_path(v[:i]) != w for i in range(len(v)))
        assert v[-1] >> 1 not in tree
