"""Engine semantics: one focused scenario per rule."""

from __future__ import annotations

import pytest

from conftest import make_dungeon
from zcl.dungeon import Action, initial_state, state_key
from zcl.engine import StepRejected, is_goal, legal_actions, replay, step
from zcl.tiles import ObjectKind, TileKind

M = Action


def start(spec):
    return initial_state(spec)


def run(spec, *actions):
    return replay(spec, initial_state(spec), actions)


# --- walking, facing, purity ---------------------------------------------


def test_move_onto_floor_and_face():
    spec = make_dungeon(["###", "#@#", "#.#", "###"])
    s1 = run(spec, M("move", "S"))
    assert s1.link_pos == (1, 2) and s1.facing == "S"
    s2 = step(spec, s1, M("face", "E"))
    assert s2.facing == "E" and s2.link_pos == (1, 2)


def test_wall_rejects_and_state_is_untouched():
    spec = make_dungeon(["###", "#@#", "###"])
    s0 = start(spec)
    key0 = state_key(s0)
    with pytest.raises(StepRejected):
        step(spec, s0, M("move", "N"))
    assert state_key(s0) == key0


def test_step_copies_state():
    spec = make_dungeon(["####", "#@.#", "####"])
    s0 = start(spec)
    s1 = step(spec, s0, M("move", "E"))
    assert s0.link_pos == (1, 1) and s1.link_pos == (2, 1)
    assert s1 is not s0 and s1.objects is not s0.objects


def test_replay_deterministic():
    spec = make_dungeon(["#####", "#@..#", "#...#", "#####"])
    plan = [M("move", "E"), M("move", "S"), M("move", "W"), M("face", "N")]
    assert state_key(run(spec, *plan)) == state_key(run(spec, *plan))


# --- pits, goal ------------------------------------------------------------


def test_pit_is_a_successful_lethal_step():
    spec = make_dungeon(["####", "#@~#", "####"], "pits")
    s1 = run(spec, M("move", "E"))
    assert not s1.alive and s1.link_pos == (2, 1)
    with pytest.raises(StepRejected):
        step(spec, s1, M("move", "W"))
    assert not is_goal(spec, s1)


def test_reach_goal():
    spec = make_dungeon(["####", "#@G#", "####"])
    assert is_goal(spec, run(spec, M("move", "E")))


# --- keys and locked doors ---------------------------------------------


def test_locked_door_needs_key_and_consumes_it():
    spec = make_dungeon(
        ["#####", "#@.L#", "#####"],
        "pots, keys",
        objects=["pot 2 1 key"],
    )
    s0 = start(spec)
    with pytest.raises(StepRejected) as err:
        run(spec, M("lift", "E"), M("move", "E"), M("move", "E"), M("move", "E"))
    assert "wall" in str(err.value)  # door opened, far side is wall
    s1 = step(spec, s0, M("lift", "E"))
    assert s1.keys == 1 and (2, 1) not in s1.objects
    s2 = replay(spec, s1, [M("move", "E"), M("move", "E")])
    assert s2.keys == 0 and s2.link_pos == (3, 1)
    assert s2.overrides[(3, 1)] is TileKind.FLOOR


def test_locked_door_blocks_without_key():
    spec = make_dungeon(["####", "#@L#", "####"], "keys")
    with pytest.raises(StepRejected) as err:
        run(spec, M("move", "E"))
    assert "locked" in str(err.value)


def test_key_pickup_collected_by_walking():
    spec = make_dungeon(["####", "#@.#", "####"], "keys", objects=["key 2 1"])
    s1 = run(spec, M("move", "E"))
    assert s1.keys == 1 and (2, 1) not in s1.objects


# --- heights: ledges and stairs ---------------------------------------


def test_ledge_drops_exactly_one_level_one_way():
    spec = make_dungeon(
        ["#####", "#.>.#", "#####"],
        heights=["00000", "01100", "00000"],
        link=(1, 1),
    )
    s1 = run(spec, M("move", "E"), M("move", "E"))
    assert s1.link_pos == (3, 1)
    # no climbing back up the lip
    with pytest.raises(StepRejected):
        step(spec, s1, M("move", "W"))


def test_stairs_allow_one_level_change():
    spec = make_dungeon(
        ["#####", "#@S.#", "#####"],
        heights=["00000", "00110", "00000"],
    )
    s1 = run(spec, M("move", "E"), M("move", "E"))
    assert s1.link_pos == (3, 1)
    bare = make_dungeon(
        ["####", "#@.#", "####"], heights=["0000", "0010", "0000"]
    )
    with pytest.raises(StepRejected):
        run(bare, M("move", "E"))


# --- grapples ---------------------------------------------------------


def test_hookshot_pulls_to_tile_before_pot():
    spec = make_dungeon(
        ["#######", "#@~~..#", "#######"],
        "hookshot, pots, pits",
        objects=["pot 5 1"],
    )
    s1 = run(spec, M("hookshot", "E"))
    assert s1.link_pos == (4, 1) and s1.alive
    with pytest.raises(StepRejected):
        step(spec, s1, M("hookshot", "E"))  # adjacent already


def test_hookshot_landing_on_pit_is_lethal():
    spec = make_dungeon(
        ["#######", "#@~~~.#", "#######"],
        "hookshot, pots, pits",
        objects=["pot 5 1"],
    )
    s1 = run(spec, M("hookshot", "E"))
    assert s1.link_pos == (4, 1) and not s1.alive


def test_hookshot_needs_anchor_in_range():
    spec = make_dungeon(
        ["############", "#@~~~~~~~~.#", "############"],
        "hookshot, pots, pits",
        objects=["pot 10 1"],
        hookshot_range=5,
    )
    with pytest.raises(StepRejected):
        run(spec, M("hookshot", "E"))
    walls = make_dungeon(["####", "#@.#", "####"], "hookshot")
    with pytest.raises(StepRejected):
        run(walls, M("hookshot", "E"))


def test_switchhook_swaps_with_diamond():
    spec = make_dungeon(
        ["######", "#@~~.#", "######"],
        "switchhook, pits",
        objects=["diamond 4 1"],
    )
    s1 = run(spec, M("switchhook", "E"))
    assert s1.link_pos == (4, 1)
    obj = s1.objects[(1, 1)]
    assert obj.kind is ObjectKind.DIAMOND_BLOCK
    # and back again
    s2 = step(spec, s1, M("switchhook", "W"))
    assert s2.link_pos == (1, 1) and (4, 1) in s2.objects


# --- pots: lift and push ---------------------------------------------


def test_lift_smashes_pot_and_push_rolls_it():
    spec = make_dungeon(
        ["######", "#@...#", "######"],
        "pots",
        objects=["pot 2 1"],
    )
    lifted = run(spec, M("lift", "E"))
    assert (2, 1) not in lifted.objects and lifted.keys == 0
    pushed = run(spec, M("move", "E"))
    assert pushed.link_pos == (2, 1)
    assert pushed.objects[(3, 1)].kind is ObjectKind.POT
    again = step(spec, pushed, M("move", "E"))
    assert again.objects[(4, 1)].kind is ObjectKind.POT
    with pytest.raises(StepRejected):
        step(spec, again, M("move", "E"))  # next push target is the wall


# --- crystal switches, barriers, sword --------------------------------


def test_sword_flips_crystal_switch():
    spec = make_dungeon(["####", "#@C#", "####"], "crystal, sword")
    s0 = start(spec)
    assert s0.crystal == "B"
    with pytest.raises(StepRejected):
        step(spec, s0, M("move", "E"))  # switch tile is a fixture
    s1 = step(spec, s0, M("sword", "E"))
    assert s1.crystal == "R"
    assert step(spec, s1, M("sword", "E")).crystal == "B"


def test_barrier_walkable_only_in_phase():
    spec = make_dungeon(["####", "#@B#", "####"], "crystal")
    s1 = run(spec, M("move", "E"))  # crystal starts B, blue barrier is down
    assert s1.link_pos == (2, 1)
    red = make_dungeon(["####", "#@R#", "####"], "crystal")
    with pytest.raises(StepRejected):
        run(red, M("move", "E"))


def test_sword_reaches_switch_past_low_wall():
    spec = make_dungeon(["#####", "#@,C#", "#####"], "crystal, sword")
    s1 = run(spec, M("sword", "E"))
    assert s1.crystal == "R"


def test_bomb_toggles_first_switch_in_range():
    spec = make_dungeon(
        ["######", "#@.,C#", "######"],
        "bombs, crystal",
        objects=["bombs 2 1 2"],
    )
    s0 = run(spec, M("move", "E"))
    assert s0.bombs == 2 and (2, 1) not in s0.objects
    s1 = step(spec, s0, M("bomb", "E"))
    assert s1.crystal == "R" and s1.bombs == 1
    s2 = step(spec, s1, M("bomb", "E"))
    assert s2.crystal == "B" and s2.bombs == 0
    with pytest.raises(StepRejected):
        step(spec, s2, M("bomb", "E"))


# --- kodongos ---------------------------------------------------------


def test_kodongo_blocks_until_sworded():
    spec = make_dungeon(
        ["#####", "#@..#", "#####"],
        "enemies, sword",
        objects=["kodongo 2 1 E"],
    )
    s0 = start(spec)
    assert s0.alive  # beast faces away; its line does not cover us
    with pytest.raises(StepRejected):
        step(spec, s0, M("move", "E"))  # solid
    s1 = step(spec, s0, M("sword", "E"))
    assert (2, 1) not in s1.objects
    s2 = step(spec, s1, M("move", "E"))
    assert s2.link_pos == (2, 1) and s2.alive


def test_walking_into_kodongo_line_is_lethal():
    spec = make_dungeon(
        ["#####", "#@..#", "#...#", "#####"],
        "enemies, sword",
        objects=["kodongo 2 2 W"],
    )
    s1 = run(spec, M("move", "S"))
    assert not s1.alive and s1.link_pos == (1, 2)


def test_lethal_line_extends_past_crossover_but_slide_crosses_it():
    spec = make_dungeon(
        ["#####", "#.@.#", "#.X.#", "#...#", "#####"],
        "enemies, sword",
        objects=["kodongo 3 2 W"],
    )
    crossed = run(spec, M("move", "S"))
    assert crossed.alive and crossed.link_pos == (2, 3)
    dead = run(spec, M("move", "W"), M("move", "S"))
    assert not dead.alive and dead.link_pos == (1, 2)


# --- magnet glove -------------------------------------------------------


def test_magnet_attract_rolls_orb_one_tile_closer():
    spec = make_dungeon(
        ["######", "#@...#", "######"],
        "magnet",
        objects=["orb 4 1"],
    )
    pull = M("magnet", "E", polarity="attract")
    s1 = run(spec, pull)
    assert s1.objects[(3, 1)].kind is ObjectKind.METAL_ORB
    s2 = step(spec, s1, pull)
    assert s2.objects[(2, 1)].kind is ObjectKind.METAL_ORB
    with pytest.raises(StepRejected):
        step(spec, s2, pull)  # adjacent orb has nowhere to go


def test_magnet_repel_rolls_orb_one_tile_away():
    spec = make_dungeon(
        ["######", "#@...#", "######"],
        "magnet",
        objects=["orb 2 1"],
    )
    push = M("magnet", "E", polarity="repel")
    s1 = run(spec, push, push)
    assert s1.objects[(4, 1)].kind is ObjectKind.METAL_ORB


def test_magnet_reaches_through_walls():
    # the glove ray ignores terrain; only range limits it
    spec = make_dungeon(
        ["######", "#@#..#", "######"],
        "magnet",
        objects=["orb 4 1"],
    )
    s1 = run(spec, M("magnet", "E", polarity="attract"))
    assert s1.objects[(3, 1)].kind is ObjectKind.METAL_ORB


def test_magnet_range_limits_ray():
    spec = make_dungeon(
        ["#######", "#@....#", "#######"],
        "magnet",
        objects=["orb 5 1"],
        magnet_range=2,
    )
    with pytest.raises(StepRejected):
        run(spec, M("magnet", "E", polarity="attract"))


def test_orb_drops_off_ledge_only_forward():
    spec = make_dungeon(
        ["#####", "#@>.#", "#####"],
        "magnet",
        heights=["00000", "01100", "00000"],
        objects=["orb 2 1 ledge"],
    )
    s0 = start(spec)
    assert s0.objects[(2, 1)].on_ledge
    s1 = step(spec, s0, M("magnet", "E", polarity="repel"))
    dropped = s1.objects[(3, 1)]
    assert dropped.kind is ObjectKind.METAL_ORB and not dropped.on_ledge
    # pulling it back up the lip is impossible: heights differ
    with pytest.raises(StepRejected):
        step(spec, s1, M("magnet", "W", polarity="attract"))


# --- crossovers ---------------------------------------------------------


def test_crossover_slide_is_atomic():
    spec = make_dungeon(["#####", "#@X.#", "#####"])
    s1 = run(spec, M("move", "E"))
    assert s1.link_pos == (3, 1)
    blocked = make_dungeon(["#####", "#@X,#", "#####"])
    with pytest.raises(StepRejected):
        run(blocked, M("move", "E"))


# --- minecarts ----------------------------------------------------------


CART_GRID = [
    "#######",
    "#@....#",
    "#s---s#",
    "#######",
]


def test_board_and_ride_to_next_stop():
    spec = make_dungeon(CART_GRID, "minecarts", objects=["cart 1 2"])
    s1 = run(spec, M("board", "S"))
    assert s1.link_pos == (5, 2)
    assert s1.objects[(5, 2)].kind is ObjectKind.MINECART
    with pytest.raises(StepRejected):
        step(spec, s1, M("move", "S"))  # wall
    s2 = step(spec, s1, M("move", "N"))
    assert s2.link_pos == (5, 1)


def test_occupied_line_rejects_without_bounce():
    spec = make_dungeon(
        CART_GRID, "minecarts", objects=["cart 1 2", "cart 5 2"]
    )
    with pytest.raises(StepRejected) as err:
        run(spec, M("board", "S"))
    assert "occupied" in str(err.value)


def test_occupied_line_bounces_with_bounce_rule():
    spec = make_dungeon(
        CART_GRID,
        "minecarts",
        objects=["cart 1 2", "cart 5 2"],
        minecart_bounce="true",
    )
    s1 = run(spec, M("board", "S"))
    assert s1.link_pos == (1, 2)  # bounced home
    assert s1.objects[(1, 2)].kind is ObjectKind.MINECART


def test_lever_flips_adjacent_junction():
    spec = make_dungeon(
        [
            "#####",
            "#!@.#",
            "#-T-#",
            "##|##",
            "##s##",
            "#####",
        ],
        "minecarts",
        tracks=["junction J 2 2 sw se 0", "lever 1 1 J"],
    )
    s0 = start(spec)
    assert s0.junctions["J"] == 0
    s1 = step(spec, s0, M("lever"))
    assert s1.junctions["J"] == 1
    s2 = step(spec, s1, M("lever", target=(1, 1)))
    assert s2.junctions["J"] == 0
    with pytest.raises(StepRejected):
        step(spec, s0, M("lever", target=(3, 3)))


# --- statues, plates, shutters -----------------------------------------


STATUE_GRID = [
    "########",
    "#@...H.#",
    "#......#",
    "########",
]


def statue_spec():
    return make_dungeon(
        STATUE_GRID,
        "statues",
        objects=["statue 2 1", "plate p1 3 1"],
        shutters=["shutter 5 1 p1"],
    )


def test_shutter_blocked_while_plate_empty():
    spec = statue_spec()
    detour = [M("move", "S"), M("move", "E"), M("move", "E"),
              M("move", "E"), M("move", "N")]
    s1 = run(spec, *detour)
    assert s1.link_pos == (4, 1)
    with pytest.raises(StepRejected) as err:
        step(spec, s1, M("move", "E"))
    assert "shut" in str(err.value)


def test_statue_on_plate_opens_shutter():
    spec = statue_spec()
    s1 = run(spec, M("move", "E"))  # push statue onto the plate
    assert s1.objects[(3, 1)].kind is ObjectKind.STATUE
    detour = [M("move", "S"), M("move", "E"), M("move", "E"),
              M("move", "N"), M("move", "E")]
    s2 = replay(spec, s1, detour)
    assert s2.link_pos == (5, 1)


# --- pacci bolt and holes ----------------------------------------------


def test_bolt_primes_hole_and_launch_lands_on_ledge():
    spec = make_dungeon(
        ["######", "#@o<.#", "######"],
        "pacci",
        heights=["000000", "000110", "000000"],
    )
    s0 = start(spec)
    with pytest.raises(StepRejected):
        step(spec, s0, M("move", "E"))  # open hole
    s1 = step(spec, s0, M("bolt", "E"))
    assert (2, 1) in s1.enchanted
    s2 = step(spec, s1, M("move", "E"))
    assert s2.link_pos == (3, 1)  # flung up onto the lip
    assert (2, 1) not in s2.enchanted


def test_bolt_stops_at_wall():
    spec = make_dungeon(["####", "#@##", "####"], "pacci")
    with pytest.raises(StepRejected):
        run(spec, M("bolt", "E"))


# --- floor puzzles -------------------------------------------------------


def test_block_variant_disables_walking():
    spec = make_dungeon(
        ["#####", "#@.~#", "#####"],
        "floorpuzzle-block",
        objects=["flashing 2 1"],
        goal_condition="pits-filled",
    )
    s0 = start(spec)
    with pytest.raises(StepRejected):
        step(spec, s0, M("move", "E"))
    s1 = step(spec, s0, M("block", "E"))
    assert s1.overrides[(3, 1)] is TileKind.FLOOR
    assert is_goal(spec, s1)


def test_color_variant_walks_blue_leaves_red():
    spec = make_dungeon(
        ["#####", "#ybb#", "#####"],
        "floorpuzzle-color",
        link=(1, 1),
        goal_condition="no-blue",
    )
    s1 = run(spec, M("move", "E"))
    assert s1.overrides[(1, 1)] is TileKind.RED_TILE
    assert s1.overrides[(2, 1)] is TileKind.YELLOW_TILE
    assert not is_goal(spec, s1)
    s2 = step(spec, s1, M("move", "E"))
    assert is_goal(spec, s2)
    with pytest.raises(StepRejected):
        step(spec, s2, M("move", "W"))  # red is forbidden ground


# --- legal actions helper ------------------------------------------------


def test_legal_actions_prunes_noops_and_rejections():
    spec = make_dungeon(["####", "#@.#", "####"])
    acts = legal_actions(spec, start(spec))
    assert [a.kind for a in acts] == ["move"]
    assert acts[0].direction == "E"
