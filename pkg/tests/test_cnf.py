"""CNF oracle: frozen formulas, DIMACS round trips, solver cross-checks."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zcl.cnf import (
    CnfError,
    CnfInstance,
    evaluate,
    gen_cnf,
    oracle_sat,
    oracle_sat_dpll,
    parse_dimacs,
    sat_witness,
    serialize_dimacs,
)

EMPTY = CnfInstance(num_vars=0, clauses=())
UNIT = CnfInstance(num_vars=1, clauses=((1,),))
CONTRADICTION = CnfInstance(num_vars=1, clauses=((1,), (-1,)))
THREE_SAT = CnfInstance(num_vars=3, clauses=((1, 2, -3), (-1, -2, 3), (-1, 2, 3)))
PIGEON = CnfInstance(
    num_vars=2, clauses=((1, 2), (-1, -2), (1, -2), (-1, 2))
)


def test_empty_formula_satisfiable():
    assert oracle_sat(EMPTY)
    assert sat_witness(EMPTY) == {}


def test_unit_clause():
    assert sat_witness(UNIT) == {1: True}


def test_contradiction_unsatisfiable():
    assert not oracle_sat(CONTRADICTION)
    assert sat_witness(CONTRADICTION) is None


def test_frozen_three_var_instance():
    w = sat_witness(THREE_SAT)
    assert w is not None and evaluate(THREE_SAT, w)


def test_all_sign_patterns_on_two_vars_unsat():
    assert not oracle_sat(PIGEON)


def test_evaluate_frozen():
    assert evaluate(THREE_SAT, {1: True, 2: False, 3: True})
    assert not evaluate(THREE_SAT, {1: True, 2: True, 3: False})


def test_dimacs_round_trip_frozen():
    text = serialize_dimacs(THREE_SAT)
    assert text == "p cnf 3 3\n1 2 -3 0\n-1 -2 3 0\n-1 2 3 0\n"
    assert parse_dimacs(text) == THREE_SAT


def test_dimacs_parse_comments_and_errors():
    assert parse_dimacs("c hi\np cnf 1 1\n1 0\n") == UNIT
    with pytest.raises(CnfError):
        parse_dimacs("1 0\n")  # missing header
    with pytest.raises(CnfError):
        parse_dimacs("p cnf 1 1\n2 0\n")  # variable out of range
    with pytest.raises(CnfError):
        parse_dimacs("p cnf 1 2\n1 0\n")  # clause count mismatch


@given(st.integers(0, 300), st.integers(1, 5), st.integers(1, 8))
@settings(max_examples=80, deadline=None)
def test_generator_shape_and_determinism(seed, num_vars, num_clauses):
    f = gen_cnf(seed, num_vars, num_clauses)
    assert f.num_vars == num_vars and len(f.clauses) == num_clauses
    for clause in f.clauses:
        assert len(clause) == min(3, num_vars)
        names = {abs(lit) for lit in clause}
        assert len(names) == len(clause)
        assert all(1 <= v <= num_vars for v in names)
    assert gen_cnf(seed, num_vars, num_clauses) == f


@given(st.integers(0, 300), st.integers(1, 4), st.integers(1, 8))
@settings(max_examples=80, deadline=None)
def test_dpll_agrees_with_enumeration(seed, num_vars, num_clauses):
    f = gen_cnf(seed, num_vars, num_clauses)
    assert oracle_sat_dpll(f) == oracle_sat(f)
    w = sat_witness(f)
    if w is not None:
        assert evaluate(f, w)


def test_round_trip_on_generated():
    for seed in range(25):
        f = gen_cnf(seed, 4, 6)
        assert parse_dimacs(serialize_dimacs(f)) == f
