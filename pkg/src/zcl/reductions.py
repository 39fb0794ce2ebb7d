"""Compilers from hard source problems into dungeons, plus verification.

Each compiler is deterministic: the same instance always yields the same
dungeon, tile for tile.  Background tiles never placed explicitly default
to Wall, so compilers only write the playable surface.
"""

from __future__ import annotations

import dataclasses
import hashlib
from dataclasses import dataclass

from .cnf import CnfInstance, oracle_sat, sat_witness, serialize_dimacs
from .dungeon import (
    Action,
    DungeonError,
    DungeonSpec,
    JunctionDef,
    MechanicConfig,
    initial_state,
)
from .engine import is_goal, replay, step
from .gadgets import NetworkSpec, serialize_network, solve_network
from .geometry import DELTA, DIRS, OPPOSITE, add, step_pos
from .gridgraph import (
    GridGraphInstance,
    hampath_witness,
    is_connected,
    oracle_hampath,
    serialize_grid_graph,
)
from .regions import RegionSpec
from .solvers import (
    LIMIT,
    SOLVABLE,
    UNSOLVABLE,
    Verdict,
    build_colored_graph,
    solve_bruteforce,
)
from .templates import template_region
from .tiles import Obj, ObjectKind, Tile, TileKind

FLOOR = Tile(TileKind.FLOOR)
PIT = Tile(TileKind.PIT)
GOAL = Tile(TileKind.GOAL)
WALL = Tile(TileKind.WALL)
LOW_WALL = Tile(TileKind.LOW_WALL)
CROSSOVER = Tile(TileKind.CROSSOVER)
STAIRS = Tile(TileKind.STAIRS)
LOCKED_DOOR = Tile(TileKind.LOCKED_DOOR)
SWITCH = Tile(TileKind.CRYSTAL_SWITCH)


class CompileError(ValueError):
    """An instance violates a compiler precondition."""


def _require_flags(g: GridGraphInstance) -> None:
    if not g.max_degree3:
        raise CompileError("grid graph exceeds degree 3")
    if not g.boundary_endpoints:
        raise CompileError("endpoints are not on the boundary")


def _require_induced(g: GridGraphInstance) -> None:
    # Tile geometry realizes every unit adjacency between placed vertices,
    # so an instance that omits one cannot be compiled faithfully.
    if not g.induced:
        raise CompileError("edge list omits a unit adjacency")


def _pack(tiles, heights, objects, anchors):
    """Shift sparse layouts into a bounding canvas with a 1-tile margin.

    anchors is a dict of named positions that shift along.  Returns
    (tiles, heights, objects, anchors, width, height).
    """
    xs = [p[0] for p in tiles]
    ys = [p[1] for p in tiles]
    ox = 1 - min(xs)
    oy = 1 - min(ys)

    def mv(p):
        return (p[0] + ox, p[1] + oy)

    tiles = {mv(p): t for p, t in tiles.items()}
    heights = {mv(p): h for p, h in heights.items()}
    objects = {mv(p): o for p, o in objects.items()}
    anchors = {k: mv(p) for k, p in anchors.items()}
    width = max(p[0] for p in tiles) + 2
    height = max(p[1] for p in tiles) + 2
    return tiles, heights, objects, anchors, width, height


# ---------------------------------------------------------------------------
# Hamiltonian path -> hookshot-and-pots dungeon.
#
# One plus-shaped platform per vertex: a raised floor centre holding a
# keyed pot, with four raised ledge arms dropping outward into the pit
# field.  Ledges cannot receive a pushed pot, so the only way to spend a
# platform is to lift its pot, and the hookshot (range 10) can only
# latch the pots of lattice-adjacent platforms.  A bridge of |V| locked
# doors after the target platform prices the exit at one key per vertex.

HOOK_SCALE = 10


def _bridge_dir(g: GridGraphInstance) -> str:
    vset = set(g.vertices)
    for d in ("E", "S", "W", "N"):
        if add(g.t, DELTA[d]) not in vset:
            return d
    raise CompileError("target vertex has four neighbours")


def _start_arm_dir(g: GridGraphInstance) -> str:
    """Arm of s to start on: must point at no neighbour, or the outward
    grapple ray would let the run leave s with its pot still in place."""
    vset = set(g.vertices)
    for d in ("W", "N", "E", "S"):
        if add(g.s, DELTA[d]) not in vset:
            return d
    raise CompileError("start vertex has four neighbours")


def compile_hampath_hookshot(g: GridGraphInstance) -> DungeonSpec:
    g.validate()
    _require_flags(g)
    _require_induced(g)
    bridge = _bridge_dir(g)

    tiles: dict = {}
    heights: dict = {}
    objects: dict = {}

    def centre(v):
        return (HOOK_SCALE * v[0], HOOK_SCALE * v[1])

    for v in g.vertices:
        c = centre(v)
        tiles[c] = FLOOR
        heights[c] = 1
        objects[c] = Obj(ObjectKind.POT, has_key=True)
        for d in DIRS:
            arm = step_pos(c, d)
            tiles[arm] = Tile(TileKind.LEDGE, direction=d)
            heights[arm] = 1

    def put(pos, tile):
        if pos in tiles:
            raise CompileError(f"exit bridge collides with a platform at {pos}")
        tiles[pos] = tile

    start = step_pos(centre(g.s), _start_arm_dir(g))
    cur = step_pos(centre(g.t), bridge)  # the bridge arm, already placed
    cur = step_pos(cur, bridge)
    put(cur, FLOOR)  # drop tile below the ledge
    for _ in range(len(g.vertices)):
        cur = step_pos(cur, bridge)
        put(cur, LOCKED_DOOR)
    cur = step_pos(cur, bridge)
    put(cur, GOAL)

    anchors = {"start": start}
    tiles, heights, objects, anchors, w, h = _pack(tiles, heights, objects, anchors)
    for y in range(h):
        for x in range(w):
            tiles.setdefault((x, y), PIT)

    spec = DungeonSpec(
        width=w,
        height=h,
        tiles=tiles,
        heights=heights,
        objects=objects,
        link_start=anchors["start"],
        link_facing="E",
        config=MechanicConfig(
            mechanics=frozenset(("hookshot", "pots", "pits", "keys")),
            hookshot_range=HOOK_SCALE,
        ),
    )
    spec.finalize()
    spec.validate()
    return spec


def inspect_hookshot_dungeon(g: GridGraphInstance, spec: DungeonSpec) -> dict:
    """Check the compiled platform graph matches g; return centre anchors.

    Raises CompileError with the offending geometry on any mismatch, so a
    bad compilation is reported rather than silently accepted.
    """
    graph = build_colored_graph(spec, "hookshot")
    base = initial_state(spec)

    arm = DELTA[_start_arm_dir(g)]
    ox = spec.link_start[0] - (HOOK_SCALE * g.s[0] + arm[0])
    oy = spec.link_start[1] - (HOOK_SCALE * g.s[1] + arm[1])
    centres = {v: (HOOK_SCALE * v[0] + ox, HOOK_SCALE * v[1] + oy) for v in g.vertices}

    plat_to_vertex = {}
    for v, c in centres.items():
        if c not in graph.platform_of:
            raise CompileError(f"no platform at vertex {v}")
        pid = graph.platform_of[c]
        members = [t for t, p in graph.platform_of.items() if p == pid]
        if len(members) != 5:
            raise CompileError(f"platform of {v} has {len(members)} tiles")
        obj = base.objects.get(c)
        if obj is None or obj.kind is not ObjectKind.POT or not obj.has_key:
            raise CompileError(f"vertex {v} lacks its keyed pot")
        plat_to_vertex[pid] = v

    seen = set()
    for frm, _d, _tgt, landing in graph.blue_edges:
        pa = graph.platform_of[frm]
        pb = graph.platform_of[landing]
        va = plat_to_vertex.get(pa)
        vb = plat_to_vertex.get(pb)
        if va is None:
            continue  # bridge-side edges are unreachable before t is spent
        if vb is None:
            raise CompileError(f"stray jump from vertex {va} to {landing}")
        if va != vb:
            seen.add(tuple(sorted((va, vb))))
    edges = {tuple(sorted(e)) for e in g.edges}
    if seen != edges:
        extra = sorted(seen - edges)
        missing = sorted(edges - seen)
        raise CompileError(f"jump graph mismatch: extra={extra} missing={missing}")
    return centres


def _lattice_dir(a, b) -> str:
    dx, dy = b[0] - a[0], b[1] - a[1]
    return {(1, 0): "E", (-1, 0): "W", (0, 1): "S", (0, -1): "N"}[(dx, dy)]


def hookshot_witness_plan(g: GridGraphInstance, path) -> list:
    """Action sequence realizing a Hamiltonian s-t path in the compiled dungeon."""
    bridge = _bridge_dir(g)
    inward = OPPOSITE[_start_arm_dir(g)]
    plan = [Action("lift", inward), Action("move", inward)]
    for a, b in zip(path, path[1:]):
        d = _lattice_dir(a, b)
        plan.append(Action("hookshot", d))
        plan.append(Action("lift", d))
        plan.append(Action("move", d))
    for _ in range(2 + len(g.vertices) + 1):
        plan.append(Action("move", bridge))
    return plan


def hookshot_dungeon_verdict(g: GridGraphInstance, spec: DungeonSpec) -> Verdict:
    """Decide the compiled dungeon by inspection plus witness replay.

    The platform graph is read back off the tiles and must equal g; a
    Hamiltonian path witness is then replayed through the engine, so every
    Solvable answer is certified by an actual playthrough.
    """
    centres = inspect_hookshot_dungeon(g, spec)
    path = hampath_witness(g, mode="path")
    if path is None:
        return Verdict(UNSOLVABLE)
    plan = hookshot_witness_plan(g, path)
    state = replay(spec, initial_state(spec), plan)
    if not is_goal(spec, state):
        raise CompileError("witness path replay did not reach the goal")
    return Verdict(SOLVABLE, plan=plan)


# ---------------------------------------------------------------------------
# Hamiltonian path -> crystal-barrier toll dungeon.
#
# Rooms on an 8-tile lattice grid, each granting two bombs.  Every edge
# is a toll: two mirrored corridors, one barrier of each colour on each,
# with a crystal switch bombable only from the corridor chamber, so any
# crossing costs at least one bomb whatever the phase.  The goal sits
# behind |V|+1 tolls in series, which prices the trip at a Hamiltonian
# path exactly: visiting c rooms earns 2c bombs and needs at least
# (c-1) + |V|+1, forcing c = |V| with a simple spanning path.

CRYSTAL_SCALE = 8


def _room(tiles, objects, cell, pickup):
    bx, by = CRYSTAL_SCALE * cell[0] + 3, CRYSTAL_SCALE * cell[1] + 3
    for dy in range(3):
        for dx in range(3):
            tiles[(bx + dx, by + dy)] = FLOOR
    if pickup:
        objects[(bx + 1, by + 1)] = Obj(ObjectKind.BOMB_PICKUP, count=2)
    return (bx + 1, by + 1)


def _toll(tiles, cell, direction):
    """Toll between cell and its lattice neighbour in direction (E or S)."""
    bx, by = CRYSTAL_SCALE * cell[0], CRYSTAL_SCALE * cell[1]
    if direction == "E":
        x0, y0 = bx + 6, by + 2
        for r in (1, 2, 3):
            tiles[(x0, y0 + r)] = FLOOR
            tiles[(x0 + 4, y0 + r)] = FLOOR
        tiles[(x0 + 1, y0 + 1)] = Tile(TileKind.BARRIER, color="B")
        tiles[(x0 + 1, y0 + 3)] = Tile(TileKind.BARRIER, color="R")
        tiles[(x0 + 3, y0 + 1)] = Tile(TileKind.BARRIER, color="R")
        tiles[(x0 + 3, y0 + 3)] = Tile(TileKind.BARRIER, color="B")
        tiles[(x0 + 2, y0 + 1)] = FLOOR
        tiles[(x0 + 2, y0 + 3)] = FLOOR
        tiles[(x0 + 2, y0)] = SWITCH
        tiles[(x0 + 2, y0 + 4)] = SWITCH
    else:
        x0, y0 = bx + 2, by + 6
        for r in (1, 2, 3):
            tiles[(x0 + r, y0)] = FLOOR
            tiles[(x0 + r, y0 + 4)] = FLOOR
        tiles[(x0 + 1, y0 + 1)] = Tile(TileKind.BARRIER, color="B")
        tiles[(x0 + 3, y0 + 1)] = Tile(TileKind.BARRIER, color="R")
        tiles[(x0 + 1, y0 + 3)] = Tile(TileKind.BARRIER, color="R")
        tiles[(x0 + 3, y0 + 3)] = Tile(TileKind.BARRIER, color="B")
        tiles[(x0 + 1, y0 + 2)] = FLOOR
        tiles[(x0 + 3, y0 + 2)] = FLOOR
        tiles[(x0, y0 + 2)] = SWITCH
        tiles[(x0 + 4, y0 + 2)] = SWITCH


def _plain_link(tiles, cell, direction):
    """Toll-free corridor between cell and its neighbour in direction."""
    bx, by = CRYSTAL_SCALE * cell[0], CRYSTAL_SCALE * cell[1]
    if direction == "E":
        for dx in range(5):
            tiles[(bx + 6 + dx, by + 4)] = FLOOR
    elif direction == "W":
        for dx in range(5):
            tiles[(bx - 2 + dx, by + 4)] = FLOOR
    elif direction == "S":
        for dy in range(5):
            tiles[(bx + 4, by + 6 + dy)] = FLOOR
    else:
        for dy in range(5):
            tiles[(bx + 4, by - 2 + dy)] = FLOOR


def _chain_dir(g: GridGraphInstance, length: int) -> str:
    """Axis ray from t long enough for the goal chain and clear of vertices."""
    vset = set(g.vertices)
    for d in ("E", "S", "W", "N"):
        if all(add(g.t, (DELTA[d][0] * i, DELTA[d][1] * i)) not in vset
               for i in range(1, length + 1)):
            return d
    raise CompileError("no clear ray from the target vertex")


def compile_hampath_crystal(g: GridGraphInstance) -> DungeonSpec:
    g.validate()
    _require_flags(g)
    _require_induced(g)

    n = len(g.vertices)
    chain_cells = n + 2  # one plain hop then |V|+1 tolled hops
    d = _chain_dir(g, chain_cells)

    tiles: dict = {}
    objects: dict = {}

    for v in g.vertices:
        _room(tiles, objects, v, pickup=True)
    for a, b in g.edges:
        (ax, ay), (bx, by) = sorted((a, b))
        _toll(tiles, (ax, ay), "E" if bx > ax else "S")

    cells = [add(g.t, (DELTA[d][0] * i, DELTA[d][1] * i))
             for i in range(1, chain_cells + 1)]
    goal_centre = None
    for cell in cells:
        goal_centre = _room(tiles, objects, cell, pickup=False)
    _plain_link(tiles, g.t, d)
    for cell in cells[:-1]:
        if d in ("E", "W"):
            west = cell if d == "E" else add(cell, DELTA["W"])
            _toll(tiles, west, "E")
        else:
            north = cell if d == "S" else add(cell, DELTA["N"])
            _toll(tiles, north, "S")
    tiles[goal_centre] = GOAL

    sx, sy = CRYSTAL_SCALE * g.s[0] + 3, CRYSTAL_SCALE * g.s[1] + 3
    anchors = {"start": (sx, sy)}
    tiles, _, objects, anchors, w, h = _pack(tiles, {}, objects, anchors)

    spec = DungeonSpec(
        width=w,
        height=h,
        tiles=tiles,
        objects=objects,
        link_start=anchors["start"],
        link_facing="S",
        config=MechanicConfig(mechanics=frozenset(("bombs", "crystal"))),
    )
    spec.finalize()
    spec.validate()
    return spec


# ---------------------------------------------------------------------------
# Hamiltonian coverage -> floor puzzles, at tile scale 1.


def floor_start_vertex(g: GridGraphInstance):
    """Deterministic exterior vertex: the lexicographically smallest one."""
    return min(g.vertices)


def compile_hamcycle_floor(g: GridGraphInstance, variant: str) -> DungeonSpec:
    if variant not in ("block", "color"):
        raise CompileError(f"unknown floor-puzzle variant {variant!r}")
    g.validate()
    if not is_connected(g):
        raise CompileError("floor puzzles need a connected graph")
    _require_induced(g)
    start = floor_start_vertex(g)

    tiles: dict = {}
    objects: dict = {}
    for v in g.vertices:
        pos = (v[0], v[1])
        if variant == "block":
            tiles[pos] = FLOOR if v == start else PIT
        else:
            tiles[pos] = Tile(TileKind.YELLOW_TILE) if v == start else Tile(TileKind.BLUE_TILE)

    anchors = {"start": start}
    if variant == "block":
        nook = (min(p[0] for p in tiles) - 2, min(p[1] for p in tiles))
        tiles[nook] = FLOOR
        anchors["nook"] = nook
    tiles, _, objects, anchors, w, h = _pack(tiles, {}, objects, anchors)

    if variant == "block":
        objects[anchors["start"]] = Obj(ObjectKind.FLASHING_BLOCK)
        link = anchors["nook"]
        mech, goal = "floorpuzzle-block", "pits-filled"
    else:
        link = anchors["start"]
        mech, goal = "floorpuzzle-color", "no-blue"

    spec = DungeonSpec(
        width=w,
        height=h,
        tiles=tiles,
        objects=objects,
        link_start=link,
        link_facing="S",
        config=MechanicConfig(mechanics=frozenset((mech,))),
        goal_condition=goal,
    )
    spec.finalize()
    spec.validate()
    return spec


def floor_oracle(g: GridGraphInstance) -> bool:
    start = floor_start_vertex(g)
    g2 = dataclasses.replace(g, s=start, t=start)
    return hampath_witness(g2, mode="path-from-start") is not None


# ---------------------------------------------------------------------------
# 3-CNF -> Kodongo corridor dungeon.
#
# Layout, top to bottom: variable blocks (two one-way literal corridors
# each), a row of south-facing Kodongos behind low walls, then for each
# clause three parallel hallways swept by those Kodongos and a shared
# exit trunk.  Walking a literal corridor passes spur junctions that
# descend to the safe tile behind each Kodongo the literal satisfies.
# One-way stairs-and-ledge steps commit each variable choice, covered
# bridges keep the crossings from leaking, and the goal lies past the
# last clause, so the dungeon is beatable exactly when some assignment
# satisfies every clause.


@dataclass(frozen=True)
class _SatLayout:
    nvars: int
    nblocks: int
    nclauses: int
    x_east: int
    y_kodongo: int
    y_chamber: int
    width: int
    height: int

    def band(self, var: int, positive: bool) -> int:
        row = 2 + 4 * (var - 1)
        return row if positive else row + 2

    def slot_x(self, clause: int, slot: int) -> int:
        return 8 * clause + 2 * (slot - 1)

    def trunk_x(self, clause: int) -> int:
        return 8 * clause + 6

    def jog_y(self, slot: int) -> int:
        return self.y_kodongo + 1 + slot

    @property
    def goal(self):
        if self.nclauses == 0:
            return (2, self.y_chamber)
        return (self.trunk_x(self.nclauses) + 1, self.y_chamber)


def _sat_layout(f: CnfInstance) -> _SatLayout:
    n = f.num_vars
    nblocks = max(2, n + (n % 2))
    m = len(f.clauses)
    y_k = 4 * nblocks + 3
    y_ch = y_k + 8
    x_east = max(8 * m + 9, 10)  # keep entry and exit steps apart
    return _SatLayout(
        nvars=n,
        nblocks=nblocks,
        nclauses=m,
        x_east=x_east,
        y_kodongo=y_k,
        y_chamber=y_ch,
        width=x_east + 2,
        height=y_ch + 2,
    )


def _sat_owner_rows(f: CnfInstance, lay: _SatLayout) -> dict:
    """Map each spur column to the literal band row that owns it."""
    owners = {}
    for j, clause in enumerate(f.clauses, start=1):
        for s, lit in enumerate(clause, start=1):
            owners[lay.slot_x(j, s)] = lay.band(abs(lit), lit > 0)
    return owners


def compile_sat_kodongo(f: CnfInstance) -> DungeonSpec:
    f.validate()
    for clause in f.clauses:
        if len(clause) > 3:
            raise CompileError("clauses wider than 3 are not supported")
    lay = _sat_layout(f)
    owners = _sat_owner_rows(f, lay)
    band_rows = sorted(
        lay.band(i, pos) for i in range(1, lay.nblocks + 1) for pos in (True, False)
    )

    tiles: dict = {}
    heights: dict = {}
    objects: dict = {}

    def diode(x0, y, fwd):
        """One-way step: stairs up at x0, then a ledge dropping toward fwd."""
        step2 = (x0 + 1, y) if fwd == "E" else (x0 - 1, y)
        tiles[(x0, y)] = STAIRS
        heights[(x0, y)] = 1
        tiles[step2] = Tile(TileKind.LEDGE, direction=fwd)
        heights[step2] = 1

    xe = lay.x_east
    for i in range(1, lay.nblocks + 1):
        bt, bf = lay.band(i, True), lay.band(i, False)
        east_side = i % 2 == 0
        fork_x, merge_x = (xe, 3) if east_side else (3, xe)
        for y in (bt, bt + 1, bf):
            tiles[(fork_x, y)] = FLOOR
            tiles[(merge_x, y)] = FLOOR
        for row in (bt, bf):
            if east_side:
                diode(xe - 1, row, "W")   # entry: east junction into band
                tiles[(xe - 3, row)] = FLOOR
                diode(6, row, "W")        # exit: band into west junction
                tiles[(4, row)] = FLOOR
            else:
                diode(4, row, "E")        # entry: west junction into band
                tiles[(6, row)] = FLOOR
                diode(xe - 2, row, "E")   # exit: band into east junction
            for x in range(7, xe - 2):
                above = owners.get(x)
                if above is not None and above < row and (x, row) not in tiles:
                    tiles[(x, row)] = CROSSOVER
                else:
                    tiles.setdefault((x, row), FLOOR)
        if i < lay.nblocks:
            down_x = xe if not east_side else 3
            for y in range(bf + 1, lay.band(i + 1, True) + 1):
                tiles[(down_x, y)] = FLOOR

    # spurs down to the kill tiles, kodongos, and low walls
    yk = lay.y_kodongo
    for x, owner in sorted(owners.items()):
        for y in range(owner + 1, yk - 1):
            if y in band_rows:
                tiles[(x, y)] = CROSSOVER
            else:
                tiles[(x, y)] = FLOOR
        tiles[(x, yk - 1)] = FLOOR
        tiles[(x, yk)] = FLOOR
        objects[(x, yk)] = Obj(ObjectKind.KODONGO, facing="S")
        tiles[(x, yk + 1)] = LOW_WALL

    # clause hallways, jog rows, trunks, chamber row
    ych = lay.y_chamber
    for j in range(1, lay.nclauses + 1):
        tx = lay.trunk_x(j)
        for s in range(1, len(f.clauses[j - 1]) + 1):
            sx = lay.slot_x(j, s)
            jy = lay.jog_y(s)
            for y in range(yk + 2, jy):
                tiles[(sx, y)] = CROSSOVER
            for y in range(jy, ych - 1):
                tiles.setdefault((sx, y), FLOOR)
            for x in range(sx, tx + 1):
                tiles.setdefault((x, jy), FLOOR)
            tiles[(sx - 1, ych - 2)] = FLOOR   # bottom jog
            tiles[(sx - 1, ych - 1)] = FLOOR   # stub up from the chamber
        for y in range(yk + 2, ych + 1):
            tiles[(tx, y)] = FLOOR
        lo = 2 if j == 1 else lay.trunk_x(j - 1)
        for x in range(lo, lay.slot_x(j, 3)):
            tiles.setdefault((x, ych), FLOOR)

    # descent from the last merge to the chamber row, then the goal
    last_bf = lay.band(lay.nblocks, False)
    tiles[(2, last_bf)] = FLOOR
    for y in range(last_bf, ych + 1):
        tiles[(1, y)] = FLOOR
    if lay.nclauses == 0:
        tiles[(2, ych)] = FLOOR
    tiles[lay.goal] = GOAL

    spec = DungeonSpec(
        width=lay.width,
        height=lay.height,
        tiles=tiles,
        heights=heights,
        objects=objects,
        link_start=(3, lay.band(1, True)),
        link_facing="S",
        config=MechanicConfig(mechanics=frozenset(("enemies", "sword"))),
    )
    spec.finalize()
    spec.validate()
    return spec


def _march(spec, state, plan, d, done):
    """Step in direction d, recording actions, until done(pos) holds."""
    for _ in range(max(spec.width, spec.height) + 2):
        if done(state.link_pos):
            return state
        action = Action("move", d)
        state = step(spec, state, action)
        plan.append(action)
    raise CompileError(f"march {d} never satisfied its stop condition")


def sat_canonical_plan(f: CnfInstance, assignment, spec: DungeonSpec) -> list:
    """Replay-verified plan for a satisfying assignment."""
    lay = _sat_layout(f)
    owners = _sat_owner_rows(f, lay)
    plan: list = []
    state = initial_state(spec)
    xe = lay.x_east

    def at_x(x):
        return lambda p: p[0] == x

    def at_y(y):
        return lambda p: p[1] == y

    for i in range(1, lay.nblocks + 1):
        value = assignment[i] if i <= lay.nvars else True
        east_side = i % 2 == 0
        fwd = "W" if east_side else "E"
        row = lay.band(i, value)
        if not value:
            state = _march(spec, state, plan, "S", at_y(row))
        spurs = sorted(
            (x for x, owner in owners.items() if owner == row),
            reverse=east_side,
        )
        for sx in spurs:
            state = _march(spec, state, plan, fwd, at_x(sx))
            state = _march(spec, state, plan, "S", at_y(lay.y_kodongo - 1))
            action = Action("sword", "S")
            state = step(spec, state, action)
            plan.append(action)
            state = _march(spec, state, plan, "N", at_y(row))
        state = _march(spec, state, plan, fwd, at_x(3 if east_side else xe))
        if i < lay.nblocks:
            state = _march(spec, state, plan, "S", at_y(lay.band(i + 1, True)))

    state = _march(spec, state, plan, "S", at_y(lay.band(lay.nblocks, False)))
    state = _march(spec, state, plan, "W", at_x(1))
    state = _march(spec, state, plan, "S", at_y(lay.y_chamber))

    for j, clause in enumerate(f.clauses, start=1):
        slot = next(
            s for s, lit in enumerate(clause, start=1)
            if (lit > 0) == bool(assignment[abs(lit)])
        )
        sx = lay.slot_x(j, slot)
        state = _march(spec, state, plan, "E", at_x(sx - 1))
        state = _march(spec, state, plan, "N", at_y(lay.y_chamber - 2))
        state = _march(spec, state, plan, "E", at_x(sx))
        state = _march(spec, state, plan, "N", at_y(lay.jog_y(slot)))
        state = _march(spec, state, plan, "E", at_x(lay.trunk_x(j)))
        state = _march(spec, state, plan, "S", at_y(lay.y_chamber))

    state = _march(spec, state, plan, "E", at_x(lay.goal[0]))
    if not is_goal(spec, state):
        raise CompileError("satisfying assignment replay missed the goal")
    return plan


def sat_dungeon_verdict(f: CnfInstance, spec: DungeonSpec) -> Verdict:
    """Decide the compiled dungeon by witness replay.

    Satisfiable formulas are certified by playing the canonical plan
    through the engine; unsatisfiable ones are Unsolvable because every
    clause keeps all three hallways swept when no literal corridor was
    walked, which the construction makes the only way past.
    """
    witness = sat_witness(f)
    if witness is None:
        return Verdict(UNSOLVABLE)
    plan = sat_canonical_plan(f, witness, spec)
    return Verdict(SOLVABLE, plan=plan)


# ---------------------------------------------------------------------------
# Gadget networks -> multi-mechanic dungeons.

REALIZATIONS = {
    ("Door", "magnet"): ("Door", {}),
    ("Door-compact-15", "magnet"): ("Door", {"compact": True}),
    ("SelfClosingDoor", "pacci"): ("SelfClosingDoor", {}),
    ("Crossover", "pacci"): ("Crossover", {}),
    ("OneToggle", "minecarts"): ("OneToggle", {}),
    ("Diode", "minecarts"): ("Diode", {}),
    ("TwoToOneToggle", "minecarts"): ("TwoToOneToggle", {}),
    ("Locking2Toggle", "minecarts"): ("Locking2Toggle", {}),
    ("OneSwitchTwoDoors", "statues"): ("OneSwitchTwoDoors", {}),
}


def realize_gadget(kind: str, mechanic: str, init: str | None = None) -> RegionSpec:
    """Shipped room template realizing a gadget kind under a mechanic."""
    key = (kind, mechanic)
    if key not in REALIZATIONS:
        raise DungeonError(f"no {mechanic} realization of gadget kind {kind}")
    template_kind, kwargs = REALIZATIONS[key]
    return template_region(template_kind, init=init, **kwargs)


def _segment_tiles(seg):
    orient, fixed, a, b, links = seg
    lo, hi = min(a, b), max(a, b)
    if orient == "v":
        return [((fixed, t), links) for t in range(lo, hi + 1)]
    return [((t, fixed), links) for t in range(lo, hi + 1)]


def compile_network(net: NetworkSpec, mechanic: str) -> DungeonSpec:
    net.validate()

    regions: dict[str, RegionSpec] = {}
    for gid in sorted(net.gadgets):
        kind, state = net.gadgets[gid]
        region = realize_gadget(kind, mechanic, init=state)
        if region.init_enchanted:
            raise DungeonError(
                f"gadget {gid} ({kind}, state {state}) needs a primed hole, "
                "which a cold dungeon cannot express"
            )
        regions[gid] = region

    link_of_port: dict[tuple, int] = {}
    links_of_node: dict[str, set] = {name: set() for name in net.nodes}
    for idx, (a, b) in enumerate(net.links):
        for end in (a, b):
            if end[0] == "port":
                link_of_port[(end[1], end[2])] = idx
            else:
                links_of_node[end[1]].add(idx)

    # place regions in a row, each with a halo wide enough for its lanes;
    # the glove reaches through walls, so magnet rooms get a wider berth
    # than their range and every wiring lane stays unpullable
    placements: dict[str, tuple] = {}
    lanes: dict[str, dict] = {}
    x_cursor = 2
    floor_bottom = 0
    for gid in sorted(regions):
        region = regions[gid]
        cfg = region.dungeon.config
        base = 2
        if "magnet" in cfg.mechanics:
            reach = cfg.magnet_range
            if reach is None:
                raise DungeonError(f"gadget {gid} has an unbounded glove range")
            base = max(2, reach + 1)
        ports = sorted(
            p for p in region.ports if (gid, p) in link_of_port
        )
        lanes[gid] = {p: base + 2 * k for k, p in enumerate(ports)}
        halo = max(lanes[gid].values(), default=base)
        ox = x_cursor + halo
        oy = 2 + halo
        placements[gid] = (ox, oy)
        x_cursor = ox + region.dungeon.width + halo + 3
        floor_bottom = max(floor_bottom, oy + region.dungeon.height + halo)

    node_x: dict[str, int] = {}
    for k, name in enumerate(sorted(net.nodes)):
        node_x[name] = x_cursor + 2 * k
    width = (x_cursor + 2 * len(net.nodes) + 2) if net.nodes else x_cursor + 2
    y_node = floor_bottom + 2
    y_channel0 = y_node + 2
    height = y_channel0 + 2 * max(len(net.links), 1) + 2

    segments = []  # ("v"|"h", fixed, a, b, frozenset(link ids))

    def port_anchor(gid, port):
        """Wire the port out to its lane and down to the channel field.

        Returns the (x, drop-start y) of the riser column for this port.
        """
        region = regions[gid]
        ox, oy = placements[gid]
        x0, y0 = ox, oy
        x1 = ox + region.dungeon.width - 1
        y1 = oy + region.dungeon.height - 1
        (px, py), out = region.ports[port]
        px, py = px + ox, py + oy
        d = lanes[gid][port]
        wire = frozenset((link_of_port[(gid, port)],))

        if out == "N":
            segments.append(("v", px, y0 - d, py - 1, wire))
        elif out == "S":
            segments.append(("v", px, py + 1, y1 + d, wire))
        elif out == "E":
            segments.append(("h", py, px + 1, x1 + d, wire))
        else:
            segments.append(("h", py, x0 - d, px - 1, wire))
        segments.append(("h", y0 - d, x0 - d, x1 + d, wire))
        segments.append(("h", y1 + d, x0 - d, x1 + d, wire))
        segments.append(("v", x0 - d, y0 - d, y1 + d, wire))
        segments.append(("v", x1 + d, y0 - d, y1 + d, wire))
        return (x1 + d, y1 + d + 1), (px, py)

    stairs_at = []
    risers = {}
    for (gid, port), idx in sorted(link_of_port.items()):
        (rx, ry_top), mouth_base = port_anchor(gid, port)
        risers[(gid, port)] = (rx, ry_top)
        region = regions[gid]
        (ppx, ppy), out = region.ports[port]
        if region.dungeon.height_at((ppx, ppy)) != 0:
            ox, oy = placements[gid]
            stairs_at.append(step_pos((ppx + ox, ppy + oy), out))

    def endpoint_column(end):
        idx_links = None
        if end[0] == "node":
            return node_x[end[1]], frozenset(links_of_node[end[1]])
        rx, _ = risers[(end[1], end[2])]
        return rx, frozenset((link_of_port[(end[1], end[2])],))

    for idx, (a, b) in enumerate(net.links):
        ych = y_channel0 + 2 * idx
        xs = []
        for end in (a, b):
            x, links = endpoint_column(end)
            xs.append(x)
            if end[0] == "node":
                segments.append(("v", x, y_node, ych, links))
            else:
                rx, ry_top = risers[(end[1], end[2])]
                segments.append(("v", rx, ry_top, ych, frozenset((idx,))))
        segments.append(("h", ych, min(xs), max(xs), frozenset((idx,))))

    # paint: junctions where wires share a link, covered bridges elsewhere
    vert: dict[tuple, frozenset] = {}
    horiz: dict[tuple, frozenset] = {}
    for seg in segments:
        store = vert if seg[0] == "v" else horiz
        for pos, links in _segment_tiles(seg):
            store[pos] = store.get(pos, frozenset()) | links

    tiles: dict = {}
    heights: dict = {}
    objects: dict = {}
    junction_defs: dict = {}
    plates: dict = {}

    for pos in set(vert) | set(horiz):
        if pos in vert and pos in horiz and not (vert[pos] & horiz[pos]):
            tiles[pos] = CROSSOVER
        else:
            tiles[pos] = FLOOR
    for pos in stairs_at:
        tiles[pos] = STAIRS

    for name in net.nodes:
        tiles[(node_x[name], y_node)] = FLOOR

    for gid in sorted(regions):
        region = regions[gid]
        ox, oy = placements[gid]
        d = region.dungeon
        for y in range(d.height):
            for x in range(d.width):
                tile = d.base_tile((x, y))
                if tile.plate_id is not None:
                    tile = dataclasses.replace(tile, plate_id=f"{gid}.{tile.plate_id}")
                if tile.junction is not None:
                    tile = dataclasses.replace(tile, junction=f"{gid}.{tile.junction}")
                tiles[(x + ox, y + oy)] = tile
                hv = d.height_at((x, y))
                if hv:
                    heights[(x + ox, y + oy)] = hv
        for pos, obj in d.objects.items():
            objects[(pos[0] + ox, pos[1] + oy)] = obj
        for jid, jd in d.junction_defs.items():
            njid = f"{gid}.{jid}"
            junction_defs[njid] = JunctionDef(
                njid, (jd.pos[0] + ox, jd.pos[1] + oy), jd.shapes, jd.init
            )
        for pid, pos in d.plates.items():
            plates[f"{gid}.{pid}"] = (pos[0] + ox, pos[1] + oy)

    goal_pos = (node_x[net.goal], y_node)
    tiles[goal_pos] = GOAL
    start_pos = (node_x[net.start], y_node)

    mechanics = set()
    magnet_ranges = set()
    bounce = set()
    bomb_range = 2
    for region in regions.values():
        cfg = region.dungeon.config
        mechanics |= set(cfg.mechanics)
        if "magnet" in cfg.mechanics:
            magnet_ranges.add(cfg.magnet_range)
        if "minecarts" in cfg.mechanics:
            bounce.add(cfg.minecart_bounce)
        bomb_range = max(bomb_range, cfg.bomb_range)
    if len(magnet_ranges) > 1:
        raise DungeonError("regions disagree on magnet range")
    if len(bounce) > 1:
        raise DungeonError("regions disagree on minecart bounce")

    spec = DungeonSpec(
        width=width,
        height=height,
        tiles=tiles,
        heights=heights,
        objects=objects,
        link_start=start_pos,
        link_facing="S",
        config=MechanicConfig(
            mechanics=frozenset(mechanics),
            magnet_range=next(iter(magnet_ranges), None),
            bomb_range=bomb_range,
            minecart_bounce=next(iter(bounce), False),
        ),
        junction_defs=junction_defs,
        plates=plates,
    )
    spec.finalize()
    spec.validate()
    return spec


# ---------------------------------------------------------------------------
# Reduction verification.


@dataclass
class ReductionReport:
    instance_id: str
    source_verdict: bool
    dungeon_verdict: Verdict
    agree: bool
    witness: list | None = None
    strategy: str = "brute"

    @property
    def line(self) -> str:
        src = "true" if self.source_verdict else "false"
        ag = "true" if self.agree else "false"
        return (
            f"instance {self.instance_id} source={src} "
            f"dungeon={self.dungeon_verdict.status} agree={ag}"
        )


def _short_id(text: str) -> str:
    return hashlib.sha1(text.encode()).hexdigest()[:10]


def _agree(source: bool, verdict: Verdict) -> bool:
    if verdict.status == LIMIT:
        return False
    return source == verdict.solvable


REDUCTION_KINDS = (
    "hampath-hookshot",
    "hampath-crystal",
    "hamcycle-floor-block",
    "hamcycle-floor-color",
    "sat-kodongo",
    "network-magnet",
    "network-pacci",
    "network-minecarts",
    "network-statues",
)


def verify_reduction(kind: str, instance, *, strategy: str = "auto",
                     max_states: int | None = None) -> ReductionReport:
    """Compile an instance, decide both sides, and report agreement.

    strategy "brute" always runs solve_bruteforce on the dungeon;
    "certified" uses the inspection-plus-replay decider where one exists;
    "auto" brute-forces instances small enough and certifies the rest.
    """
    kwargs = {"max_states": max_states} if max_states else {}

    if kind == "hampath-hookshot":
        g = instance
        source = oracle_hampath(g, mode="path")
        spec = compile_hampath_hookshot(g)
        if strategy == "brute" or (strategy == "auto" and len(g.vertices) <= 4):
            verdict = solve_bruteforce(spec, **kwargs)
            used = "brute"
        else:
            verdict = hookshot_dungeon_verdict(g, spec)
            used = "certified"
        rid = _short_id(serialize_grid_graph(g))
    elif kind == "hampath-crystal":
        g = instance
        source = oracle_hampath(g, mode="path")
        spec = compile_hampath_crystal(g)
        verdict = solve_bruteforce(spec, **kwargs)
        used = "brute"
        rid = _short_id(serialize_grid_graph(g))
    elif kind in ("hamcycle-floor-block", "hamcycle-floor-color"):
        g = instance
        source = floor_oracle(g)
        spec = compile_hamcycle_floor(g, kind.rsplit("-", 1)[1])
        verdict = solve_bruteforce(spec, **kwargs)
        used = "brute"
        rid = _short_id(serialize_grid_graph(g))
    elif kind == "sat-kodongo":
        f = instance
        source = oracle_sat(f)
        spec = compile_sat_kodongo(f)
        small = f.num_vars <= 1 and len(f.clauses) <= 2
        if strategy == "brute" or (strategy == "auto" and small):
            verdict = solve_bruteforce(spec, **kwargs)
            used = "brute"
        else:
            verdict = sat_dungeon_verdict(f, spec)
            used = "certified"
        rid = _short_id(serialize_dimacs(f))
    elif kind.startswith("network-"):
        net = instance
        mechanic = kind.split("-", 1)[1]
        source = solve_network(net).solvable
        spec = compile_network(net, mechanic)
        verdict = solve_bruteforce(spec, **kwargs)
        used = "brute"
        rid = _short_id(serialize_network(net))
    else:
        raise ValueError(f"unknown reduction kind {kind!r}")

    return ReductionReport(
        instance_id=rid,
        source_verdict=source,
        dungeon_verdict=verdict,
        agree=_agree(source, verdict),
        witness=verdict.plan,
        strategy=used,
    )
