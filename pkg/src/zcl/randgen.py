"""Seeded random dungeons and gadget networks for differential testing."""

from __future__ import annotations

import random

from .dungeon import DungeonSpec, MechanicConfig
from .gadgets import GADGET_TYPES, NetworkSpec
from .tiles import Obj, ObjectKind, Tile, TileKind

FLOOR = Tile(TileKind.FLOOR)
WALL = Tile(TileKind.WALL)
PIT = Tile(TileKind.PIT)
GOAL = Tile(TileKind.GOAL)

MECHANIC_SETS = {
    "hookshot": ("hookshot", "pots", "pits"),
    "switchhook": ("switchhook", "pits"),
    "crystal": ("crystal", "sword"),
}


def _exclusive_positions(rng, candidates, count):
    """Sample positions so no two share a row or a column."""
    chosen = []
    rows, cols = set(), set()
    pool = list(candidates)
    rng.shuffle(pool)
    for pos in pool:
        if len(chosen) == count:
            break
        if pos[0] in cols or pos[1] in rows:
            continue
        chosen.append(pos)
        cols.add(pos[0])
        rows.add(pos[1])
    return chosen


def _gen_grapple(rng, size, mode) -> DungeonSpec:
    w = rng.randint(5, size)
    h = rng.randint(5, size)
    tiles = {}
    floors = []
    for y in range(h):
        for x in range(w):
            if rng.random() < 0.55:
                tiles[(x, y)] = FLOOR
                floors.append((x, y))
            else:
                tiles[(x, y)] = PIT
    if len(floors) < 4:
        for pos in [(0, 0), (1, 0), (0, 1), (w - 1, h - 1)]:
            if tiles[pos].kind is not TileKind.FLOOR:
                tiles[pos] = FLOOR
                floors.append(pos)
    rng.shuffle(floors)
    start = floors[0]
    goal = floors[1]
    tiles[goal] = GOAL

    kind = ObjectKind.POT if mode == "hookshot" else ObjectKind.DIAMOND_BLOCK
    spots = [p for p in floors[2:] if p not in (start, goal)]
    objects = {}
    for pos in _exclusive_positions(rng, spots, rng.randint(2, 4)):
        objects[pos] = Obj(kind)

    mechanics = MECHANIC_SETS["hookshot" if mode == "hookshot" else "switchhook"]
    spec = DungeonSpec(
        width=w,
        height=h,
        tiles=tiles,
        objects=objects,
        link_start=start,
        link_facing="S",
        config=MechanicConfig(
            mechanics=frozenset(mechanics),
            hookshot_range=rng.randint(4, 10),
        ),
    )
    spec.finalize()
    spec.validate()
    return spec


def _gen_crystal(rng, size) -> DungeonSpec:
    w = rng.randint(5, size)
    h = rng.randint(5, size)
    tiles = {}
    floors = []
    for y in range(h):
        for x in range(w):
            r = rng.random()
            if r < 0.55:
                tiles[(x, y)] = FLOOR
                floors.append((x, y))
            elif r < 0.72:
                tiles[(x, y)] = WALL
            elif r < 0.86:
                tiles[(x, y)] = Tile(TileKind.BARRIER, color="B")
            else:
                tiles[(x, y)] = Tile(TileKind.BARRIER, color="R")
    if len(floors) < 3:
        for pos in [(0, 0), (w - 1, h - 1), (0, h - 1)]:
            if tiles[pos].kind is not TileKind.FLOOR:
                tiles[pos] = FLOOR
                floors.append(pos)
    rng.shuffle(floors)
    start = floors[0]
    goal = floors[1]
    tiles[goal] = GOAL
    for pos in floors[2 : 2 + rng.randint(1, 3)]:
        tiles[pos] = Tile(TileKind.CRYSTAL_SWITCH)

    spec = DungeonSpec(
        width=w,
        height=h,
        tiles=tiles,
        link_start=start,
        link_facing="S",
        config=MechanicConfig(mechanics=frozenset(MECHANIC_SETS["crystal"])),
    )
    spec.finalize()
    spec.validate()
    return spec


def gen_dungeon(seed: int, family: str, size: int = 8) -> DungeonSpec:
    """Deterministic random dungeon from one of the solver families."""
    if family not in MECHANIC_SETS:
        raise ValueError(f"unknown dungeon family {family!r}")
    rng = random.Random(repr(("dungeon", family, seed, size)))
    if family == "crystal":
        return _gen_crystal(rng, size)
    return _gen_grapple(rng, size, family)


# ---------------------------------------------------------------------------
# Random gadget networks.

NETWORK_KINDS = {
    "magnet": ("Door",),
    "pacci": ("SelfClosingDoor", "Crossover"),
    "minecarts": ("OneToggle", "Diode", "TwoToOneToggle"),
    "statues": ("OneSwitchTwoDoors",),
}

# Port pairs a backbone traversal can enter and leave through.
_PORT_PAIRS = {
    "Door": (("Oin", "Oout"), ("Tin", "Tout"), ("Cin", "Cout")),
    "SelfClosingDoor": (("Oin", "Oout"), ("Tin", "Tout")),
    "OneToggle": (("A", "B"),),
    "Diode": (("A", "B"),),
    "TwoToOneToggle": (("L1", "M"), ("R1", "M"), ("M", "L1"), ("M", "R1")),
    "OneSwitchTwoDoors": (("Sin", "Sout"), ("D1in", "D1out"), ("D2in", "D2out")),
    "Crossover": (("N", "S"), ("E", "W"), ("W", "E"), ("S", "N")),
}


def gen_network(seed: int, mechanic: str, max_gadgets: int = 4) -> NetworkSpec:
    """Deterministic random network wired as a start-to-goal backbone.

    Every gadget sits on the backbone through one of its port pairs;
    leftover ports are sometimes linked to side nodes so the solver must
    consider detours and state changes.
    """
    if mechanic not in NETWORK_KINDS:
        raise ValueError(f"unknown network mechanic {mechanic!r}")
    rng = random.Random(repr(("network", mechanic, seed, max_gadgets)))
    kinds = NETWORK_KINDS[mechanic]
    count = rng.randint(1, max_gadgets)

    net = NetworkSpec()
    net.nodes = ["n_start", "n_goal"]
    net.start = "n_start"
    net.goal = "n_goal"

    used_ports: set[tuple[str, str]] = set()
    prev = ("node", "n_start")
    order = []
    for i in range(count):
        kind = rng.choice(kinds)
        gid = f"g{i}"
        gtype = GADGET_TYPES[kind]
        states = gtype.states
        if kind == "SelfClosingDoor":
            # an already-open one cannot be built as a cold room
            states = ("closed",)
        state = rng.choice(states)
        net.gadgets[gid] = (kind, state)
        pin, pout = rng.choice(_PORT_PAIRS[kind])
        net.links.append((prev, ("port", gid, pin)))
        used_ports.add((gid, pin))
        used_ports.add((gid, pout))
        prev = ("port", gid, pout)
        order.append(gid)
    net.links.append((prev, ("node", "n_goal")))

    side = 0
    for gid in order:
        kind = net.gadgets[gid][0]
        for port in GADGET_TYPES[kind].ports:
            if (gid, port) in used_ports:
                continue
            roll = rng.random()
            if roll < 0.4:
                continue
            if roll < 0.7:
                name = f"n_side{side}"
                side += 1
                net.nodes.append(name)
                net.links.append((("node", name), ("port", gid, port)))
            else:
                anchor = rng.choice(net.nodes)
                net.links.append((("node", anchor), ("port", gid, port)))
            used_ports.add((gid, port))
    net.validate()
    return net
