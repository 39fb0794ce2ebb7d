"""Region behavior extraction and gadget realization checking.

A region is a dungeon fragment with named boundary ports.  This module
explores every way an agent can pass through the region, collapses the
observed behavior into a quotient automaton over internal configurations,
and checks that automaton against an abstract gadget's transition table.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from itertools import permutations

from .dungeon import (
    Action,
    DungeonError,
    DungeonSpec,
    GameState,
    initial_state,
    state_key,
)
from .engine import StepRejected, is_goal, legal_actions, step
from .geometry import OPPOSITE, step_pos
from .tiles import TileKind, is_solid_obj


class RegionError(DungeonError):
    pass


class RegionLimitExceeded(RegionError):
    """Raised when exploration exceeds its state or time budget."""


Port = tuple[tuple[int, int], str]


@dataclass
class RegionSpec:
    """A dungeon fragment plus named boundary ports.

    Each port is a boundary tile together with the outward direction,
    i.e. the direction in which stepping off the tile leaves the region.
    """

    dungeon: DungeonSpec
    ports: dict[str, Port]
    init_name: str | None = None
    init_enchanted: frozenset = frozenset()

    def validate(self) -> None:
        self.dungeon.validate()
        for pos in self.init_enchanted:
            if self.dungeon.base_tile(pos).kind is not TileKind.HOLE:
                raise RegionError(f"primed tile {pos} is not a hole")
        seen: dict[tuple[int, int], str] = {}
        for name, (pos, out_dir) in self.ports.items():
            if not self.dungeon.in_bounds(pos):
                raise RegionError(f"port {name} out of bounds")
            if self.dungeon.in_bounds(step_pos(pos, out_dir)):
                raise RegionError(f"port {name} does not face off the grid")
            if self.dungeon.base_tile(pos).kind is TileKind.WALL:
                raise RegionError(f"port {name} sits on a wall")
            if pos in seen:
                raise RegionError(f"ports {seen[pos]} and {name} share a tile")
            seen[pos] = name


# A configuration freezes everything about a region that persists between
# visits: objects, tile overrides, junction settings, enchantments, and the
# crystal phase.  The agent itself (position, facing, inventory) is not part
# of it.
Config = tuple


def freeze_config(state: GameState) -> Config:
    return (
        tuple(sorted(state.objects.items())),
        tuple(sorted(state.overrides.items())),
        tuple(sorted(state.junctions.items())),
        tuple(sorted(state.enchanted)),
        state.crystal,
    )


def _entry_state(region: RegionSpec, config: Config, port_name: str) -> GameState | None:
    """Build the state for an agent stepping into the region at a port.

    Returns None when the port tile is occupied by a solid object, which
    means the doorway is physically blocked from outside.
    """
    pos, out_dir = region.ports[port_name]
    objects, overrides, junctions, enchanted, crystal = config
    state = GameState(
        link_pos=pos,
        facing=OPPOSITE[out_dir],
        keys=0,
        bombs=0,
        alive=True,
        crystal=crystal,
        objects=dict(objects),
        overrides=dict(overrides),
        junctions=dict(junctions),
        enchanted=set(enchanted),
    )
    obj = state.objects.get(pos)
    if obj is not None and is_solid_obj(obj):
        return None
    return state


Transition = tuple[Config, str, str, Config]


@dataclass
class RegionBehavior:
    """Everything observable about a region from outside."""

    region: RegionSpec
    init_config: Config
    configs: list[Config]
    transitions: set[Transition]
    enterable: set[tuple[Config, str]]
    explored_states: int = 0
    # Filled in by quotient():
    blocks: dict[Config, int] = field(default_factory=dict)
    block_count: int = 0
    quotient_transitions: set[tuple[int, str, str, int]] = field(default_factory=set)

    def port_names(self) -> list[str]:
        return sorted(self.region.ports)


def region_behavior(
    region: RegionSpec,
    max_states: int = 500_000,
    max_configs: int = 4_000,
    time_budget: float | None = 60.0,
) -> RegionBehavior:
    """Explore a region from every port in every reachable configuration."""
    deadline = None if time_budget is None else time.monotonic() + time_budget
    base = initial_state(region.dungeon)
    base.enchanted |= set(region.init_enchanted)
    init_config = freeze_config(base)
    port_at: dict[tuple[int, int], str] = {
        pos: name for name, (pos, _d) in region.ports.items()
    }

    configs: list[Config] = [init_config]
    seen_configs = {init_config}
    transitions: set[Transition] = set()
    enterable: set[tuple[Config, str]] = set()
    explored = 0

    ci = 0
    while ci < len(configs):
        config = configs[ci]
        ci += 1
        for pname in sorted(region.ports):
            entry = _entry_state(region, config, pname)
            if entry is None:
                continue
            enterable.add((config, pname))
            frontier = deque([entry])
            visited = {state_key(entry)}
            while frontier:
                if deadline is not None and time.monotonic() > deadline:
                    raise RegionLimitExceeded("region exploration time budget")
                state = frontier.popleft()
                explored += 1
                if explored > max_states:
                    raise RegionLimitExceeded("region exploration state budget")
                out_name = port_at.get(state.link_pos)
                if out_name is not None and state.alive:
                    out_config = freeze_config(state)
                    if not (out_name == pname and out_config == config):
                        transitions.add((config, pname, out_name, out_config))
                    if out_config not in seen_configs:
                        seen_configs.add(out_config)
                        configs.append(out_config)
                        if len(configs) > max_configs:
                            raise RegionLimitExceeded("region configuration budget")
                for action in legal_actions(region.dungeon, state):
                    try:
                        nxt = step(region.dungeon, state, action)
                    except StepRejected:
                        continue
                    key = state_key(nxt)
                    if key in visited:
                        continue
                    visited.add(key)
                    frontier.append(nxt)

    behavior = RegionBehavior(
        region=region,
        init_config=init_config,
        configs=configs,
        transitions=transitions,
        enterable=enterable,
        explored_states=explored,
    )
    quotient(behavior)
    return behavior


def quotient(behavior: RegionBehavior) -> None:
    """Collapse configurations that behave identically at the ports.

    Standard partition refinement.  For the purpose of comparing
    configurations, every enterable port also contributes an implicit
    stay-put transition, so a configuration that can only be perturbed in
    unobservable ways (flip a junction nobody can see) merges with its
    perturbed twin.
    """
    configs = behavior.configs
    outgoing: dict[Config, list[Transition]] = {c: [] for c in configs}
    for tr in behavior.transitions:
        outgoing[tr[0]].append(tr)

    block: dict[Config, int] = {c: 0 for c in configs}
    while True:
        signatures: dict[Config, frozenset] = {}
        for c in configs:
            sig = {(p, q, block[c2]) for (_c, p, q, c2) in outgoing[c]}
            for pname in behavior.port_names():
                if (c, pname) in behavior.enterable:
                    sig.add((pname, pname, block[c]))
            signatures[c] = frozenset(sig)
        remap: dict[tuple[int, frozenset], int] = {}
        new_block: dict[Config, int] = {}
        for c in configs:
            key = (block[c], signatures[c])
            if key not in remap:
                remap[key] = len(remap)
            new_block[c] = remap[key]
        if len(remap) == len(set(block.values())):
            break
        block = new_block

    behavior.blocks = block
    behavior.block_count = len(set(block.values()))
    qt: set[tuple[int, str, str, int]] = set()
    for (c, p, q, c2) in behavior.transitions:
        b, b2 = block[c], block[c2]
        if p == q and b == b2:
            continue
        qt.add((b, p, q, b2))
    behavior.quotient_transitions = qt


@dataclass
class VerifyResult:
    verified: bool
    reason: str
    assignment: dict[str, int] | None = None
    missing: tuple | None = None
    offending: tuple | None = None
    behavior: RegionBehavior | None = None

    def __bool__(self) -> bool:
        return self.verified


def _table_effective(gadget) -> set[tuple[str, str, str, str]]:
    return {
        (s, p, q, s2)
        for (s, p, q, s2) in gadget.transitions
        if not (p == q and s == s2)
    }


def _complete(behavior: RegionBehavior, gadget, init_state: str):
    """Find an injective embedding of gadget states into behavior blocks.

    Every effective table transition must be witnessed by a quotient
    transition between the corresponding blocks.
    """
    states = sorted(gadget.states)
    table = _table_effective(gadget)
    init_block = behavior.blocks[behavior.init_config]
    blocks = sorted(set(behavior.blocks.values()))
    others = [s for s in states if s != init_state]
    qt = behavior.quotient_transitions

    for combo in permutations(blocks, len(others)):
        phi = {init_state: init_block}
        phi.update(zip(others, combo))
        if len(set(phi.values())) != len(phi):
            continue
        missing = None
        for (s, p, q, s2) in table:
            if (phi[s], p, q, phi[s2]) not in qt:
                missing = (s, p, q, s2)
                break
        if missing is None:
            return phi, None
    # Report against the identity-order assignment for diagnostics.
    phi = {init_state: init_block}
    for s, b in zip(others, blocks):
        phi[s] = b
    missing = tuple(
        (s, p, q, s2)
        for (s, p, q, s2) in sorted(table)
        if (phi.get(s), p, q, phi.get(s2)) not in qt
    )
    return None, missing or None


def _sound(behavior: RegionBehavior, gadget, init_state: str):
    """Check every quotient transition is allowed by the table.

    A block is judged against the set of table states that could plausibly
    describe it.  Each region transition must keep at least one plausible
    state alive; staying put at a port is always plausible.  Greatest
    fixpoint over (block, state-set) pairs.
    """
    table = _table_effective(gadget)
    qt_from: dict[int, list[tuple[str, str, int]]] = {}
    for (b, p, q, b2) in behavior.quotient_transitions:
        qt_from.setdefault(b, []).append((p, q, b2))

    def successors(aset: frozenset, p: str, q: str) -> frozenset:
        out = {s2 for s in aset for (s1, pp, qq, s2) in table
               if s1 == s and pp == p and qq == q}
        if p == q:
            out |= set(aset)
        return frozenset(out)

    init_block = behavior.blocks[behavior.init_config]
    root = (init_block, frozenset([init_state]))
    alive: set = set()
    pending = [root]
    seen = set()
    while pending:
        node = pending.pop()
        if node in seen:
            continue
        seen.add(node)
        alive.add(node)
        b, aset = node
        for (p, q, b2) in qt_from.get(b, []):
            pending.append((b2, successors(aset, p, q)))

    killer: dict = {}
    changed = True
    while changed:
        changed = False
        for node in sorted(alive, key=repr):
            b, aset = node
            if not aset:
                killer.setdefault(node, ("empty", None))
                alive.discard(node)
                changed = True
                continue
            for (p, q, b2) in qt_from.get(b, []):
                nxt = (b2, successors(aset, p, q))
                if nxt not in alive:
                    killer.setdefault(node, ("step", (p, q, nxt)))
                    alive.discard(node)
                    changed = True
                    break

    if root in alive:
        return None

    # Reconstruct one offending transition chain for the report.
    chain = []
    node = root
    while node is not None and node in killer:
        kind, info = killer[node]
        if kind == "empty" or info is None:
            break
        p, q, nxt = info
        chain.append((node[0], p, q, nxt[0]))
        node = nxt
    return chain or [(root[0], "?", "?", root[0])]


def verify_realization(
    region: RegionSpec,
    gadget,
    init_state: str | None = None,
    max_states: int = 500_000,
    max_configs: int = 4_000,
    time_budget: float | None = 60.0,
    behavior: RegionBehavior | None = None,
) -> VerifyResult:
    """Decide whether a region realizes an abstract gadget.

    Realization demands two inclusions on the quotient automaton: every
    effective table transition has a region counterpart (completeness), and
    every region transition is explainable by the table (soundness).
    """
    if init_state is None:
        init_state = region.init_name or gadget.init_state
    if init_state not in gadget.states:
        return VerifyResult(False, f"unknown initial state {init_state!r}")
    missing_ports = set()
    for (_s, p, q, _s2) in gadget.transitions:
        missing_ports.update({p, q} - set(region.ports))
    if missing_ports:
        return VerifyResult(
            False, "region lacks ports: " + ", ".join(sorted(missing_ports))
        )

    if behavior is None:
        behavior = region_behavior(
            region,
            max_states=max_states,
            max_configs=max_configs,
            time_budget=time_budget,
        )

    phi, missing = _complete(behavior, gadget, init_state)
    if phi is None:
        return VerifyResult(
            False,
            "incomplete: no embedding realizes the table",
            missing=missing,
            behavior=behavior,
        )

    offending = _sound(behavior, gadget, init_state)
    if offending is not None:
        return VerifyResult(
            False,
            "unsound: region admits behavior outside the table",
            assignment=phi,
            offending=tuple(offending),
            behavior=behavior,
        )

    return VerifyResult(True, "verified", assignment=phi, behavior=behavior)


def region_goal_reachable(region: RegionSpec, max_states: int = 500_000) -> bool:
    """Utility used by tests: can the agent reach a goal tile from start."""
    spec = region.dungeon
    start = initial_state(spec)
    frontier = deque([start])
    visited = {state_key(start)}
    while frontier:
        state = frontier.popleft()
        if is_goal(spec, state):
            return True
        if len(visited) > max_states:
            raise RegionLimitExceeded("goal search budget")
        for action in legal_actions(spec, state):
            try:
                nxt = step(spec, state, action)
            except StepRejected:
                continue
            key = state_key(nxt)
            if key not in visited:
                visited.add(key)
                frontier.append(nxt)
    return False
