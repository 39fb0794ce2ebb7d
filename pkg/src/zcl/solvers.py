"""Dungeon solvers.

Three structured polynomial solvers (grapple over pits, swap-hook over
pits, crystal-phase barriers) plus an exhaustive breadth-first baseline.
All solvers return a Verdict whose plan, when present, replays through the
engine from the initial state to a goal state.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field

from .dungeon import Action, DungeonSpec, GameState, initial_state, state_key
from .engine import StepRejected, is_goal, legal_actions, step
from .geometry import DELTA, DIRS, OPPOSITE, step_pos
from .tiles import ObjectKind, TileKind

SOLVABLE = "Solvable"
UNSOLVABLE = "Unsolvable"
LIMIT = "LimitExceeded"

DEFAULT_MAX_STATES = 5_000_000
MAX_PLAN_DEPTH = 10_000


def max_states_limit() -> int:
    raw = os.environ.get("ZCL_MAX_STATES")
    if raw is None:
        return DEFAULT_MAX_STATES
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"ZCL_MAX_STATES must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ValueError("ZCL_MAX_STATES must be positive")
    return value


@dataclass
class Verdict:
    status: str
    plan: list[Action] | None = None
    states_explored: int = 0

    @property
    def solvable(self) -> bool:
        return self.status == SOLVABLE


# ---------------------------------------------------------------------------
# Colored tile graph: red edges are free walking moves (removable obstacles
# count as floor), blue edges are ranged jumps between platforms.


@dataclass
class ColoredGraph:
    mode: str
    standable: set[tuple[int, int]]
    platform_of: dict[tuple[int, int], int]
    platform_count: int
    # (from_tile, direction, target_object_tile, landing_tile)
    blue_edges: list[tuple[tuple[int, int], str, tuple[int, int], tuple[int, int]]]
    red_adj: dict[tuple[int, int], list[tuple[int, int]]] = field(default_factory=dict)


def _grapple_target_kind(mode: str) -> ObjectKind:
    return ObjectKind.POT if mode == "hookshot" else ObjectKind.DIAMOND_BLOCK


def build_colored_graph(spec: DungeonSpec, mode: str) -> ColoredGraph:
    """Construct the two-colored traversal graph for a grapple dungeon.

    Tiles holding the grapple object are treated as walkable for red edges
    because the agent can always remove the obstacle in passing (lifting a
    pot, swapping with a diamond block).  Blue edges are computed against
    the initial object placement.
    """
    if mode not in ("hookshot", "switchhook"):
        raise ValueError(f"unknown grapple mode {mode!r}")
    target_kind = _grapple_target_kind(mode)
    base = initial_state(spec)

    walk_kinds = (TileKind.FLOOR, TileKind.GOAL, TileKind.LEDGE, TileKind.STAIRS)
    standable: set[tuple[int, int]] = set()
    for y in range(spec.height):
        for x in range(spec.width):
            if spec.base_tile((x, y)).kind in walk_kinds:
                standable.add((x, y))

    red_adj: dict[tuple[int, int], list[tuple[int, int]]] = {t: [] for t in standable}
    for tile in standable:
        for d in DIRS:
            nxt = step_pos(tile, d)
            if nxt in standable and spec.height_at(nxt) == spec.height_at(tile):
                red_adj[tile].append(nxt)

    platform_of: dict[tuple[int, int], int] = {}
    count = 0
    for tile in sorted(standable):
        if tile in platform_of:
            continue
        queue = deque([tile])
        platform_of[tile] = count
        while queue:
            cur = queue.popleft()
            for nxt in red_adj[cur]:
                if nxt not in platform_of:
                    platform_of[nxt] = count
                    queue.append(nxt)
        count += 1

    rng = spec.config.hookshot_range
    blue: list[tuple[tuple[int, int], str, tuple[int, int], tuple[int, int]]] = []
    for tile in sorted(standable):
        if base.objects.get(tile) is not None:
            continue
        for d in DIRS:
            prev = tile
            cur = tile
            for _ in range(rng):
                cur = step_pos(cur, d)
                if not spec.in_bounds(cur):
                    break
                kind = spec.base_tile(cur).kind
                if kind is TileKind.WALL:
                    break
                obj = base.objects.get(cur)
                if obj is not None:
                    if obj.kind is target_kind:
                        landing = cur if mode == "switchhook" else prev
                        if (
                            landing in standable
                            and landing != tile
                            and platform_of[landing] != platform_of[tile]
                        ):
                            blue.append((tile, d, cur, landing))
                    break
                prev = cur
    return ColoredGraph(
        mode=mode,
        standable=standable,
        platform_of=platform_of,
        platform_count=count,
        blue_edges=blue,
        red_adj=red_adj,
    )


def _red_path(
    graph: ColoredGraph,
    state: GameState,
    goal_pred,
) -> list[tuple[int, int]] | None:
    """Shortest in-platform tile path from the agent to a satisfying tile.

    Routing treats current grapple-object tiles as walkable; emission deals
    with removing them.
    """
    start = state.link_pos
    platform = graph.platform_of[start]
    if goal_pred(start):
        return [start]
    prev: dict[tuple[int, int], tuple[int, int]] = {start: start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for nxt in graph.red_adj[cur]:
            if graph.platform_of[nxt] != platform or nxt in prev:
                continue
            prev[nxt] = cur
            if goal_pred(nxt):
                path = [nxt]
                while path[-1] != start:
                    path.append(prev[path[-1]])
                path.reverse()
                return path
            queue.append(nxt)
    return None


def _emit_walk(
    spec: DungeonSpec,
    state: GameState,
    path: list[tuple[int, int]],
    plan: list[Action],
    mode: str,
) -> GameState:
    """Walk along a tile path, removing grapple objects in the way."""
    for nxt in path[1:]:
        d = _dir_between(state.link_pos, nxt)
        obj = state.objects.get(nxt)
        if obj is not None:
            if mode == "hookshot" and obj.kind is ObjectKind.POT:
                act = Action("lift", direction=d)
                state = step(spec, state, act)
                plan.append(act)
            elif mode == "switchhook" and obj.kind is ObjectKind.DIAMOND_BLOCK:
                act = Action("switchhook", direction=d)
                state = step(spec, state, act)
                plan.append(act)
                continue
        act = Action("move", direction=d)
        state = step(spec, state, act)
        plan.append(act)
    return state


def _dir_between(a: tuple[int, int], b: tuple[int, int]) -> str:
    for d, (dx, dy) in DELTA.items():
        if (a[0] + dx, a[1] + dy) == b:
            return d
    raise ValueError(f"tiles {a} and {b} are not adjacent")


def _solve_grapple(spec: DungeonSpec, mode: str) -> Verdict:
    graph = build_colored_graph(spec, mode)
    start = spec.link_start
    if start not in graph.standable:
        return Verdict(UNSOLVABLE)
    goals = {
        (x, y)
        for y in range(spec.height)
        for x in range(spec.width)
        if spec.base_tile((x, y)).kind is TileKind.GOAL
    }
    if not goals:
        return Verdict(UNSOLVABLE)
    goal_platforms = {graph.platform_of[g] for g in goals}

    # Breadth-first search over platforms along blue edges.
    edges_from: dict[int, list] = {}
    for edge in graph.blue_edges:
        tile, _d, _target, landing = edge
        p1 = graph.platform_of[tile]
        p2 = graph.platform_of[landing]
        edges_from.setdefault(p1, []).append(edge)

    start_platform = graph.platform_of[start]
    came: dict[int, tuple] = {start_platform: None}
    order = deque([start_platform])
    reached_goal = None
    if start_platform in goal_platforms:
        reached_goal = start_platform
    while order and reached_goal is None:
        p = order.popleft()
        for edge in edges_from.get(p, []):
            p2 = graph.platform_of[edge[3]]
            if p2 in came:
                continue
            came[p2] = (p, edge)
            if p2 in goal_platforms:
                reached_goal = p2
                break
            order.append(p2)

    if reached_goal is None:
        return Verdict(UNSOLVABLE)

    hops = []
    p = reached_goal
    while came[p] is not None:
        prev_p, edge = came[p]
        hops.append(edge)
        p = prev_p
    hops.reverse()

    plan: list[Action] = []
    state = initial_state(spec)
    for (tile, d, _target, _landing) in hops:
        path = _red_path(graph, state, lambda t, ft=tile: t == ft)
        if path is None:
            raise RuntimeError("platform routing failed")
        state = _emit_walk(spec, state, path, plan, mode)
        act = Action(mode, direction=d)
        state = step(spec, state, act)
        plan.append(act)
    path = _red_path(graph, state, lambda t: t in goals)
    if path is None:
        raise RuntimeError("goal routing failed")
    state = _emit_walk(spec, state, path, plan, mode)
    if not is_goal(spec, state):
        raise RuntimeError("emitted plan does not reach the goal")
    return Verdict(SOLVABLE, plan=plan, states_explored=graph.platform_count)


def solve_hookshot(spec: DungeonSpec) -> Verdict:
    """Polynomial solver for grapple/pot/pit dungeons."""
    return _solve_grapple(spec, "hookshot")


def solve_switchhook(spec: DungeonSpec) -> Verdict:
    """Polynomial solver for swap-hook/diamond/pit dungeons."""
    return _solve_grapple(spec, "switchhook")


# ---------------------------------------------------------------------------
# Crystal-phase solver: breadth-first search over (tile, phase).


def _sword_hits_switch(spec: DungeonSpec, pos: tuple[int, int], d: str) -> bool:
    one = step_pos(pos, d)
    if not spec.in_bounds(one):
        return False
    k1 = spec.base_tile(one).kind
    if k1 is TileKind.CRYSTAL_SWITCH:
        return True
    if k1 is TileKind.LOW_WALL:
        two = step_pos(one, d)
        if spec.in_bounds(two) and spec.base_tile(two).kind is TileKind.CRYSTAL_SWITCH:
            return True
    return False


def _phase_standable(spec: DungeonSpec, pos: tuple[int, int], phase: str) -> bool:
    tile = spec.base_tile(pos)
    if tile.kind in (TileKind.FLOOR, TileKind.GOAL):
        return True
    if tile.kind is TileKind.BARRIER:
        return tile.color == phase
    return False


def solve_crystal(spec: DungeonSpec) -> Verdict:
    """Structured solver for crystal switches and phased barriers.

    The agent's world collapses to (tile, phase) because barrier walls are
    the only phase-dependent terrain and the crystal is the only mutable
    state.  Walk edges check the destination tile alone, mirroring the
    engine; sword edges flip the phase in place.
    """
    start = (spec.link_start, "B")
    goals = {
        (x, y)
        for y in range(spec.height)
        for x in range(spec.width)
        if spec.base_tile((x, y)).kind is TileKind.GOAL
    }
    if not goals:
        return Verdict(UNSOLVABLE)

    came: dict[tuple, tuple] = {start: None}
    queue = deque([start])
    hit = None
    if start[0] in goals:
        hit = start
    while queue and hit is None:
        node = queue.popleft()
        pos, phase = node
        moves: list[tuple[tuple, Action]] = []
        for d in DIRS:
            nxt = step_pos(pos, d)
            if spec.in_bounds(nxt) and _phase_standable(spec, nxt, phase):
                moves.append(((nxt, phase), Action("move", direction=d)))
        for d in DIRS:
            if _sword_hits_switch(spec, pos, d):
                flipped = "R" if phase == "B" else "B"
                moves.append(((pos, flipped), Action("sword", direction=d)))
                break
        for nxt_node, act in moves:
            if nxt_node in came:
                continue
            came[nxt_node] = (node, act)
            if nxt_node[0] in goals:
                hit = nxt_node
                break
            queue.append(nxt_node)

    if hit is None:
        return Verdict(UNSOLVABLE, states_explored=len(came))

    plan: list[Action] = []
    node = hit
    while came[node] is not None:
        node, act = came[node]
        plan.append(act)
    plan.reverse()

    state = initial_state(spec)
    for act in plan:
        state = step(spec, state, act)
    if not is_goal(spec, state):
        raise RuntimeError("crystal plan does not reach the goal")
    return Verdict(SOLVABLE, plan=plan, states_explored=len(came))


# ---------------------------------------------------------------------------
# Exhaustive baseline.


def solve_bruteforce(spec: DungeonSpec, max_states: int | None = None) -> Verdict:
    """Breadth-first search over full engine states."""
    if max_states is None:
        max_states = max_states_limit()
    start = initial_state(spec)
    if is_goal(spec, start):
        return Verdict(SOLVABLE, plan=[], states_explored=1)
    seen = {state_key(start)}
    queue = deque([(start, 0)])
    parents: dict[bytes, tuple[bytes | None, Action | None]] = {
        state_key(start): (None, None)
    }
    explored = 0
    while queue:
        state, depth = queue.popleft()
        explored += 1
        if depth >= MAX_PLAN_DEPTH:
            return Verdict(LIMIT, states_explored=explored)
        for act in legal_actions(spec, state):
            try:
                nxt = step(spec, state, act)
            except StepRejected:
                continue
            key = state_key(nxt)
            if key in seen:
                continue
            seen.add(key)
            if len(seen) > max_states:
                return Verdict(LIMIT, states_explored=len(seen))
            parents[key] = (state_key(state), act)
            if is_goal(spec, nxt):
                plan = []
                cur: bytes | None = key
                while cur is not None:
                    prev, act2 = parents[cur]
                    if act2 is not None:
                        plan.append(act2)
                    cur = prev
                plan.reverse()
                return Verdict(SOLVABLE, plan=plan, states_explored=len(seen))
            queue.append((nxt, depth + 1))
    return Verdict(UNSOLVABLE, states_explored=len(seen))
