"""Grid-graph oracle: frozen instances, witnesses, generators, round trips."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zcl.gridgraph import (
    GridGraphError,
    GridGraphInstance,
    adjacency,
    gen_connected_grid_graph,
    gen_grid_graph,
    hampath_witness,
    induced_instance,
    is_connected,
    oracle_hampath,
    parse_grid_graph,
    serialize_grid_graph,
)


def g_of(vertices, s, t):
    return induced_instance(frozenset(vertices), s, t)


RING = [(0, 0), (1, 0), (0, 1), (1, 1)]
L_SHAPE = [(0, 0), (1, 0), (0, 1)]
COL_2X3 = [(x, y) for x in (0, 1) for y in (0, 1, 2)]


def test_singleton_has_trivial_path():
    g = g_of([(0, 0)], (0, 0), (0, 0))
    assert oracle_hampath(g, mode="path")
    assert hampath_witness(g, mode="path") == [(0, 0)]


def test_l_shape_path_through_corner():
    g = g_of(L_SHAPE, (1, 0), (0, 1))
    assert hampath_witness(g, mode="path") == [(1, 0), (0, 0), (0, 1)]


def test_l_shape_no_path_between_wrong_endpoints():
    # the corner is a cut vertex, so corner-to-leaf misses the other leaf
    g = g_of(L_SHAPE, (0, 0), (0, 1))
    assert not oracle_hampath(g, mode="path")


def test_2x3_grid_snake_path():
    g = g_of(COL_2X3, (0, 0), (1, 0))
    w = hampath_witness(g, mode="path")
    assert w is not None and len(w) == 6
    assert w[0] == (0, 0) and w[-1] == (1, 0)
    assert all(u in adjacency(g)[v] for u, v in zip(w, w[1:]))


def test_disconnected_graph_unsolvable():
    g = GridGraphInstance(
        vertices=((0, 0), (2, 0)), edges=(), s=(0, 0), t=(2, 0)
    )
    g.validate()
    assert not is_connected(g)
    assert not oracle_hampath(g, mode="path")


def test_ring_cycle_witness():
    g = g_of(RING, (0, 0), (0, 0))
    w = hampath_witness(g, mode="cycle")
    assert w is not None and len(w) == 4
    assert w[0] in adjacency(g)[w[-1]]


def test_path_from_start_ignores_t():
    g = g_of(L_SHAPE, (1, 0), (1, 0))
    w = hampath_witness(g, mode="path-from-start")
    assert w == [(1, 0), (0, 0), (0, 1)]
    # from the cut vertex no single walk covers both leaves
    assert hampath_witness(g_of(L_SHAPE, (0, 0), (0, 0)), mode="path-from-start") is None


def test_properties_on_frozen_instances():
    g = g_of(COL_2X3, (0, 0), (1, 0))
    assert g.max_degree3
    assert g.boundary_endpoints
    assert g.induced
    full_3x3 = g_of([(x, y) for x in range(3) for y in range(3)], (0, 0), (2, 2))
    assert not full_3x3.max_degree3  # centre has degree 4
    centred = g_of(
        [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)], (1, 1), (1, 0)
    )
    assert not centred.boundary_endpoints  # s is interior to the hull


def test_non_induced_instance_flagged():
    g = GridGraphInstance(
        vertices=tuple(RING),
        edges=(((0, 0), (1, 0)), ((0, 0), (0, 1))),
        s=(0, 0),
        t=(1, 1),
    )
    g.validate()
    assert not g.induced


def test_serialize_parse_round_trip():
    g = gen_grid_graph(7, 8)
    text = serialize_grid_graph(g)
    assert parse_grid_graph(text) == g
    assert serialize_grid_graph(parse_grid_graph(text)) == text


def test_parse_rejects_garbage():
    with pytest.raises(GridGraphError):
        parse_grid_graph("what even is this\n")
    with pytest.raises(GridGraphError):
        parse_grid_graph("v 0 0\ne 0 0 5 5\ns 0 0\nt 0 0\n")  # non-adjacent edge


@given(st.integers(0, 400), st.integers(2, 9))
@settings(max_examples=60, deadline=None)
def test_generator_yields_legal_instances(seed, n):
    g = gen_grid_graph(seed, n)
    assert len(g.vertices) == n
    assert g.max_degree3 and g.boundary_endpoints and g.induced
    assert gen_grid_graph(seed, n) == g


@given(st.integers(0, 400), st.integers(2, 9))
@settings(max_examples=60, deadline=None)
def test_connected_generator_is_connected(seed, n):
    g = gen_connected_grid_graph(seed, n)
    assert len(g.vertices) == n
    assert is_connected(g) and g.induced
    assert gen_connected_grid_graph(seed, n) == g


def test_witness_paths_are_hamiltonian():
    rng = random.Random(11)
    for _ in range(40):
        g = gen_grid_graph(rng.randrange(10**6), rng.randrange(2, 9))
        w = hampath_witness(g, mode="path")
        if w is None:
            continue
        assert w[0] == g.s and w[-1] == g.t
        assert set(w) == set(g.vertices) and len(w) == len(g.vertices)
        adj = adjacency(g)
        assert all(b in adj[a] for a, b in zip(w, w[1:]))
