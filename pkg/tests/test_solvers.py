"""Solver suite: brute-force search, per-family polynomial solvers, limits."""

from __future__ import annotations

import pytest

from conftest import make_dungeon, platform_visits
from zcl.dungeon import initial_state
from zcl.engine import is_goal, replay
from zcl.randgen import MECHANIC_SETS, gen_dungeon
from zcl.solvers import (
    LIMIT,
    Verdict,
    max_states_limit,
    solve_bruteforce,
    solve_crystal,
    solve_hookshot,
    solve_switchhook,
)


def check_plan(spec, verdict):
    assert verdict.solvable and verdict.plan is not None
    final = replay(spec, initial_state(spec), verdict.plan)
    assert final.alive and is_goal(spec, final)


# --- brute force ---------------------------------------------------------


def test_brute_corridor():
    spec = make_dungeon(["#####", "#@.G#", "#####"])
    check_plan(spec, solve_bruteforce(spec))


def test_brute_walled_off():
    spec = make_dungeon(["#####", "#@#G#", "#####"])
    assert solve_bruteforce(spec).status == "Unsolvable"


def test_brute_lethal_path_is_not_a_solution():
    spec = make_dungeon(["#####", "#@~G#", "#####"], "pits")
    assert solve_bruteforce(spec).status == "Unsolvable"


def test_brute_finds_key_ordering():
    spec = make_dungeon(
        ["######", "#@.LG#", "######"],
        "pots, keys",
        objects=["pot 2 1 key"],
    )
    check_plan(spec, solve_bruteforce(spec))


def test_brute_state_budget():
    spec = make_dungeon(["#####", "#@.G#", "#####"])
    verdict = solve_bruteforce(spec, max_states=1)
    assert verdict.status == LIMIT
    assert not verdict.solvable


def test_env_budget(monkeypatch):
    monkeypatch.setenv("ZCL_MAX_STATES", "2")
    assert max_states_limit() == 2
    spec = make_dungeon(["######", "#@..G#", "######"])
    assert solve_bruteforce(spec).status == LIMIT
    monkeypatch.setenv("ZCL_MAX_STATES", "nope")
    with pytest.raises(ValueError):
        max_states_limit()
    monkeypatch.setenv("ZCL_MAX_STATES", "-4")
    with pytest.raises(ValueError):
        max_states_limit()


# --- grapple solvers ------------------------------------------------------


def test_hookshot_crossing():
    spec = make_dungeon(
        ["#######", "#@~..G#", "#######"],
        "hookshot, pots, pits",
        objects=["pot 4 1"],
    )
    check_plan(spec, solve_hookshot(spec))
    check_plan(spec, solve_bruteforce(spec))


def test_hookshot_no_anchor():
    spec = make_dungeon(["######", "#@~~G#", "######"], "hookshot, pots, pits")
    assert solve_hookshot(spec).status == "Unsolvable"
    assert solve_bruteforce(spec).status == "Unsolvable"


def test_switchhook_crossing():
    spec = make_dungeon(
        ["######", "#@~.G#", "######"],
        "switchhook, pits",
        objects=["diamond 3 1"],
    )
    check_plan(spec, solve_switchhook(spec))
    check_plan(spec, solve_bruteforce(spec))


def test_grapple_plan_never_revisits_a_platform():
    spec = make_dungeon(
        ["##########", "#@~..~..G#", "##########"],
        "hookshot, pots, pits",
        objects=["pot 4 1", "pot 7 1"],
    )
    verdict = solve_hookshot(spec)
    check_plan(spec, verdict)
    seq = platform_visits(spec, verdict.plan, "hookshot")
    assert len(seq) == len(set(seq))


# --- crystal solver -------------------------------------------------------


def test_crystal_phase_flip_route():
    spec = make_dungeon(
        ["######", "#@.RG#", "#.C###", "######"],
        "crystal, sword",
    )
    check_plan(spec, solve_crystal(spec))
    check_plan(spec, solve_bruteforce(spec))


def test_crystal_unreachable_phase():
    spec = make_dungeon(["######", "#@.RG#", "######"], "crystal, sword")
    assert solve_crystal(spec).status == "Unsolvable"
    assert solve_bruteforce(spec).status == "Unsolvable"


# --- polynomial solvers agree with search on random instances --------------


POLY = {
    "hookshot": solve_hookshot,
    "switchhook": solve_switchhook,
    "crystal": solve_crystal,
}


@pytest.mark.parametrize("family", sorted(MECHANIC_SETS))
def test_poly_matches_brute_on_small_instances(family):
    solver = POLY[family]
    for seed in range(25):
        spec = gen_dungeon(seed, family, size=6)
        fast = solver(spec)
        slow = solve_bruteforce(spec)
        assert fast.status == slow.status, f"seed {seed}"
        if fast.solvable:
            check_plan(spec, fast)


def test_verdict_flags():
    assert Verdict("Solvable").solvable
    assert not Verdict("Unsolvable").solvable
    assert not Verdict(LIMIT).solvable
