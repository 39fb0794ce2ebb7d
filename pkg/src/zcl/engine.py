"""Single-step dynamics: action applicability and effects.

step() never mutates its input state.  An inapplicable action raises
StepRejected; a lethal but well-formed action (walking into a pit)
succeeds and returns a dead state.  Dead states accept no actions.
"""

from __future__ import annotations

import dataclasses

from .dungeon import Action, DungeonSpec, GameState, effective_tile, state_key
from .geometry import DIRS, OPPOSITE, neighbors4, step_pos
from .tiles import ObjectKind, TileKind, TRACK_SHAPES, is_solid_obj


class StepRejected(Exception):
    """The action cannot be taken in the current state."""


# Tile kinds Link can stand on after a flight (hookshot landing, launch).
STANDABLE = frozenset(
    (
        TileKind.FLOOR,
        TileKind.GOAL,
        TileKind.STAIRS,
        TileKind.MINECART_STOP,
        TileKind.LEDGE,
        TileKind.BLUE_TILE,
        TileKind.RED_TILE,
        TileKind.YELLOW_TILE,
    )
)

# Tile kinds a pushed pot may land on.  Statues additionally may not be
# pushed onto stairs, which is how layouts pen them in.
POT_PUSH_DEST = frozenset((TileKind.FLOOR, TileKind.GOAL, TileKind.STAIRS))
STATUE_PUSH_DEST = frozenset((TileKind.FLOOR, TileKind.GOAL))

# Tile kinds a metal orb may rest on.
ORB_DEST = frozenset((TileKind.FLOOR, TileKind.GOAL, TileKind.LEDGE))


def _reject(msg: str):
    raise StepRejected(msg)


def _solid_at(state: GameState, pos) -> bool:
    return is_solid_obj(state.objects.get(pos))


def _plate_pressed(spec: DungeonSpec, state: GameState, plate_id) -> bool:
    pos = spec.plates.get(plate_id)
    if pos is None:
        return False
    obj = state.objects.get(pos)
    return obj is not None and obj.kind is ObjectKind.STATUE


def _rail_ports(spec, state, pos) -> frozenset:
    """Open rail sides of the tile at pos in the current state."""
    tile = effective_tile(spec, state, pos)
    if tile.kind is TileKind.TRACK:
        return TRACK_SHAPES[tile.shape]
    if tile.kind is TileKind.MINECART_DOOR:
        return TRACK_SHAPES[tile.shape]
    if tile.kind is TileKind.MINECART_STOP:
        return frozenset((tile.direction,))
    return frozenset()


def _consume_pickup(state: GameState, pos) -> None:
    obj = state.objects.get(pos)
    if obj is None:
        return
    if obj.kind is ObjectKind.KEY_PICKUP:
        state.keys += 1
        del state.objects[pos]
    elif obj.kind is ObjectKind.BOMB_PICKUP:
        state.bombs += obj.count
        del state.objects[pos]


def _kodongo_lethal_tiles(spec: DungeonSpec, state: GameState) -> set:
    """Tiles currently covered by some live kodongo's line of fire.

    The line passes over low walls and crossovers (crossover tiles are
    covered bridges, so they shield whoever is on them) and stops at
    walls, door frames, and solid objects.
    """
    lethal = set()
    blockers = (
        TileKind.WALL,
        TileKind.LOCKED_DOOR,
        TileKind.SHUTTER_DOOR,
        TileKind.MINECART_DOOR,
    )
    for pos, obj in state.objects.items():
        if obj.kind is not ObjectKind.KODONGO:
            continue
        cur = pos
        while True:
            cur = step_pos(cur, obj.facing)
            if not spec.in_bounds(cur):
                break
            tile = effective_tile(spec, state, cur)
            if tile.kind in blockers:
                break
            if _solid_at(state, cur):
                break
            if tile.kind not in (TileKind.LOW_WALL, TileKind.CROSSOVER):
                lethal.add(cur)
    return lethal


def _check_kodongo(spec: DungeonSpec, state: GameState) -> None:
    if not spec.config.has("enemies"):
        return
    if state.link_pos in _kodongo_lethal_tiles(spec, state):
        state.alive = False


def _enter_tile(spec, state, dest, came_from) -> None:
    """Put Link on dest, resolving pits, launches, and pickups.

    came_from is the tile Link moved from; an enchanted-hole launch never
    returns Link to it.  Raises StepRejected if the entry is impossible.
    Assumes blocking checks for the tile kind were already done.
    """
    tile = effective_tile(spec, state, dest)
    if tile.kind is TileKind.PIT:
        state.link_pos = dest
        state.alive = False
        return
    if tile.kind is TileKind.HOLE:
        if dest not in state.enchanted:
            _reject("open hole")
        candidates = []
        for npos in neighbors4(dest):
            if npos == came_from:
                continue
            ntile = effective_tile(spec, state, npos)
            if ntile.kind is TileKind.LEDGE and step_pos(npos, ntile.direction) == dest:
                candidates.append(npos)
        if len(candidates) != 1:
            _reject("launch target not unique")
        target = candidates[0]
        if _solid_at(state, target):
            _reject("launch target occupied")
        state.enchanted.discard(dest)
        state.link_pos = target
        _consume_pickup(state, target)
        return
    state.link_pos = dest
    _consume_pickup(state, dest)


def _height_change_ok(spec, state, frm, dest, direction) -> bool:
    dh = spec.height_at(dest) - spec.height_at(frm)
    if dh == 0:
        return True
    cur_tile = effective_tile(spec, state, frm)
    if cur_tile.kind is TileKind.LEDGE and direction == cur_tile.direction and dh == -1:
        return True
    dest_tile = effective_tile(spec, state, dest)
    if TileKind.STAIRS in (cur_tile.kind, dest_tile.kind) and abs(dh) <= 1:
        return True
    return False


def _tile_blocks_walk(spec, state, tile, pos, direction) -> str | None:
    """Reason the tile cannot be walked onto, or None.  Pits, enchanted
    holes, and pushable solids are handled by the caller."""
    kind = tile.kind
    if kind is TileKind.WALL:
        return "wall"
    if kind is TileKind.LOW_WALL:
        return "low wall"
    if kind is TileKind.BARRIER:
        if tile.color != state.crystal:
            return "raised barrier"
        return None
    if kind is TileKind.LOCKED_DOOR:
        if state.keys < 1:
            return "locked door"
        return None
    if kind is TileKind.SHUTTER_DOOR:
        if not _plate_pressed(spec, state, tile.plate_id):
            return "shut door"
        return None
    if kind is TileKind.MINECART_DOOR:
        return "cart door"
    if kind is TileKind.TRACK:
        return "rails"
    if kind in (TileKind.CRYSTAL_SWITCH, TileKind.LEVER):
        return "fixture"
    if kind is TileKind.LEDGE:
        # climbing onto the lip from the drop side is the +1 height move
        # rejected by the height rule; from level ground it is fine
        return None
    return None


def _try_push(spec, state, dest, direction) -> bool:
    """Push the pot or statue at dest one tile onward.  Returns True if the
    object moved, False if it is not pushable here."""
    obj = state.objects.get(dest)
    if obj is None:
        return False
    cfg = spec.config
    if obj.kind is ObjectKind.POT and cfg.has("pots"):
        allowed = POT_PUSH_DEST
    elif obj.kind is ObjectKind.STATUE and cfg.has("statues"):
        allowed = STATUE_PUSH_DEST
    else:
        return False
    dest2 = step_pos(dest, direction)
    if not spec.in_bounds(dest2):
        return False
    if state.objects.get(dest2) is not None:
        return False
    if dest2 == state.link_pos:
        return False
    tile2 = effective_tile(spec, state, dest2)
    if tile2.kind not in allowed:
        return False
    if spec.height_at(dest2) != spec.height_at(dest):
        return False
    del state.objects[dest]
    state.objects[dest2] = obj
    return True


def _do_move_color(spec, state, direction) -> None:
    dest = step_pos(state.link_pos, direction)
    tile = effective_tile(spec, state, dest)
    if tile.kind is not TileKind.BLUE_TILE:
        _reject("can only step onto blue")
    if _solid_at(state, dest):
        _reject("blocked")
    state.overrides[state.link_pos] = TileKind.RED_TILE
    state.overrides[dest] = TileKind.YELLOW_TILE
    state.link_pos = dest


def _do_move(spec, state, direction) -> None:
    cfg = spec.config
    state.facing = direction
    if cfg.has("floorpuzzle-block"):
        _reject("walking disabled")
    if cfg.has("floorpuzzle-color"):
        _do_move_color(spec, state, direction)
        _check_kodongo(spec, state)
        return

    frm = state.link_pos
    dest = step_pos(frm, direction)
    if not spec.in_bounds(dest):
        _reject("edge of dungeon")
    if not _height_change_ok(spec, state, frm, dest, direction):
        _reject("cliff")
    tile = effective_tile(spec, state, dest)
    reason = _tile_blocks_walk(spec, state, tile, dest, direction)
    if reason is not None:
        _reject(reason)

    # slide across covered bridges: keep going until open ground
    while tile.kind is TileKind.CROSSOVER:
        if _solid_at(state, dest):
            _reject("blocked bridge")
        nxt = step_pos(dest, direction)
        if not spec.in_bounds(nxt):
            _reject("bridge to nowhere")
        if spec.height_at(nxt) != spec.height_at(dest):
            _reject("cliff")
        dest = nxt
        tile = effective_tile(spec, state, dest)
        reason = _tile_blocks_walk(spec, state, tile, dest, direction)
        if reason is not None:
            _reject(reason)

    if _solid_at(state, dest):
        if not _try_push(spec, state, dest, direction):
            _reject("blocked")
    if tile.kind is TileKind.LOCKED_DOOR:
        state.keys -= 1
        state.overrides[dest] = TileKind.FLOOR

    _enter_tile(spec, state, dest, frm)
    if state.alive:
        _check_kodongo(spec, state)


def _first_obstruction(spec, state, start, direction, max_range):
    """(pos, tile, obj) for the first ray blocker, or None in range."""
    cur = start
    for _ in range(max_range):
        cur = step_pos(cur, direction)
        obj = state.objects.get(cur)
        if is_solid_obj(obj):
            return cur, effective_tile(spec, state, cur), obj
        tile = effective_tile(spec, state, cur)
        if tile.kind is TileKind.WALL:
            return cur, tile, None
    return None


def _do_hookshot(spec, state, direction) -> None:
    if not spec.config.has("hookshot"):
        _reject("no hookshot")
    state.facing = direction
    hit = _first_obstruction(spec, state, state.link_pos, direction,
                             spec.config.hookshot_range)
    if hit is None:
        _reject("nothing in range")
    pos, tile, obj = hit
    if obj is None or obj.kind is not ObjectKind.POT:
        _reject("no anchor")
    landing = step_pos(pos, OPPOSITE[direction])
    if landing == state.link_pos:
        _reject("already there")
    ltile = effective_tile(spec, state, landing)
    if ltile.kind is TileKind.PIT:
        state.link_pos = landing
        state.alive = False
        return
    if ltile.kind not in STANDABLE:
        _reject("bad landing")
    if _solid_at(state, landing):
        _reject("landing occupied")
    state.link_pos = landing
    _consume_pickup(state, landing)


def _do_switchhook(spec, state, direction) -> None:
    if not spec.config.has("switchhook"):
        _reject("no switch hook")
    state.facing = direction
    hit = _first_obstruction(spec, state, state.link_pos, direction,
                             spec.config.hookshot_range)
    if hit is None:
        _reject("nothing in range")
    pos, tile, obj = hit
    if obj is None or obj.kind is not ObjectKind.DIAMOND_BLOCK:
        _reject("no swap target")
    old = state.link_pos
    del state.objects[pos]
    state.objects[old] = obj
    state.link_pos = pos
    _consume_pickup(state, pos)


def _do_lift(spec, state, direction) -> None:
    if not spec.config.has("pots"):
        _reject("cannot lift")
    state.facing = direction
    target = step_pos(state.link_pos, direction)
    obj = state.objects.get(target)
    if obj is None or obj.kind is not ObjectKind.POT:
        _reject("nothing to lift")
    del state.objects[target]
    if obj.has_key:
        state.keys += 1


def _do_sword(spec, state, direction) -> None:
    if not spec.config.has("sword"):
        _reject("no sword")
    state.facing = direction
    t1 = step_pos(state.link_pos, direction)
    affected = [t1]
    if effective_tile(spec, state, t1).kind is TileKind.LOW_WALL:
        affected.append(step_pos(t1, direction))
    hit_switch = False
    hit_enemy = False
    for pos in affected:
        if effective_tile(spec, state, pos).kind is TileKind.CRYSTAL_SWITCH:
            hit_switch = True
        obj = state.objects.get(pos)
        if obj is not None and obj.kind is ObjectKind.KODONGO:
            del state.objects[pos]
            hit_enemy = True
    if not hit_switch and not hit_enemy:
        _reject("swung at air")
    if hit_switch:
        state.crystal = "R" if state.crystal == "B" else "B"


def _do_bomb(spec, state, direction) -> None:
    if not spec.config.has("bombs"):
        _reject("no bombs")
    if state.bombs < 1:
        _reject("out of bombs")
    state.facing = direction
    state.bombs -= 1
    cur = state.link_pos
    for _ in range(spec.config.bomb_range):
        cur = step_pos(cur, direction)
        tile = effective_tile(spec, state, cur)
        if tile.kind is TileKind.WALL:
            break
        if tile.kind is TileKind.CRYSTAL_SWITCH:
            state.crystal = "R" if state.crystal == "B" else "B"
            break
        if _solid_at(state, cur):
            break


def _move_orb(spec, state, pos, direction) -> bool:
    """Try to roll the orb at pos one tile.  Returns True if it moved."""
    obj = state.objects[pos]
    target = step_pos(pos, direction)
    if not spec.in_bounds(target):
        return False
    if target == state.link_pos:
        return False
    if state.objects.get(target) is not None:
        return False
    tile = effective_tile(spec, state, pos)
    ttile = effective_tile(spec, state, target)
    drop = tile.kind is TileKind.LEDGE and direction == tile.direction
    if drop:
        if ttile.kind not in (TileKind.FLOOR, TileKind.GOAL):
            return False
        on_ledge = False
    else:
        if spec.height_at(target) != spec.height_at(pos):
            return False
        if ttile.kind not in ORB_DEST:
            return False
        on_ledge = ttile.kind is TileKind.LEDGE
    del state.objects[pos]
    state.objects[target] = dataclasses.replace(obj, on_ledge=on_ledge)
    return True


def _do_magnet(spec, state, direction, polarity) -> None:
    if not spec.config.has("magnet"):
        _reject("no magnet glove")
    if polarity not in ("repel", "attract"):
        _reject("bad polarity")
    state.facing = direction
    reach = spec.config.magnet_range
    if reach is None:
        reach = max(spec.width, spec.height)
    orbs = []
    cur = state.link_pos
    for _ in range(reach):
        cur = step_pos(cur, direction)
        if not spec.in_bounds(cur):
            break
        obj = state.objects.get(cur)
        if obj is not None and obj.kind is ObjectKind.METAL_ORB:
            orbs.append(cur)
    if polarity == "repel":
        orbs.reverse()
        move_dir = direction
    else:
        move_dir = OPPOSITE[direction]
    moved = False
    for pos in orbs:
        if _move_orb(spec, state, pos, move_dir):
            moved = True
    if not moved:
        _reject("no orb moved")


def _do_bolt(spec, state, direction) -> None:
    if not spec.config.has("pacci"):
        _reject("no cane")
    state.facing = direction
    hb = spec.height_at(state.link_pos)
    cur = state.link_pos
    while True:
        cur = step_pos(cur, direction)
        if not spec.in_bounds(cur):
            _reject("bolt flew off")
        tile = effective_tile(spec, state, cur)
        if tile.kind is TileKind.WALL:
            _reject("bolt hit wall")
        if tile.kind is TileKind.LOW_WALL:
            continue
        if spec.height_at(cur) > hb:
            _reject("bolt hit cliff")
        if _solid_at(state, cur):
            _reject("bolt blocked")
        if tile.kind is TileKind.HOLE and spec.height_at(cur) == hb:
            if cur not in state.enchanted:
                state.enchanted.add(cur)
                return


def _do_lever(spec, state, target) -> None:
    if not spec.config.has("minecarts"):
        _reject("no levers here")
    if target is not None:
        candidates = [target]
    else:
        candidates = neighbors4(state.link_pos)
    flipped = False
    for pos in candidates:
        tile = effective_tile(spec, state, pos)
        if tile.kind is not TileKind.LEVER:
            continue
        if target is not None and pos not in neighbors4(state.link_pos):
            _reject("lever out of reach")
        state.junctions[tile.junction] ^= 1
        flipped = True
    if not flipped:
        _reject("no lever in reach")


def _ride(spec, state, start_stop) -> None:
    """Run the cart from start_stop until it rests at a stop again."""
    cart = state.objects.pop(start_stop)
    pos = start_stop
    direction = effective_tile(spec, state, start_stop).direction
    seen = set()
    bounced = False
    while True:
        if (pos, direction) in seen:
            state.objects[start_stop] = cart
            _reject("ride never ends")
        seen.add((pos, direction))
        nxt = step_pos(pos, direction)
        entry = OPPOSITE[direction]
        ports = _rail_ports(spec, state, nxt) if spec.in_bounds(nxt) else frozenset()
        rail_ok = entry in ports
        occupied = is_solid_obj(state.objects.get(nxt))
        if rail_ok and occupied and not spec.config.minecart_bounce:
            state.objects[start_stop] = cart
            _reject("line occupied")
        if not rail_ok or occupied:
            direction = OPPOSITE[direction]
            bounced = True
            if effective_tile(spec, state, pos).kind is TileKind.MINECART_STOP:
                break
            continue
        pos = nxt
        tile = effective_tile(spec, state, pos)
        if tile.kind is TileKind.MINECART_STOP:
            break
        if tile.kind is TileKind.MINECART_DOOR:
            continue
        exits = TRACK_SHAPES[tile.shape] - {entry}
        if len(exits) == 1:
            direction = next(iter(exits))
        else:
            # four-way crossing: straight through
            pass
    state.objects[pos] = cart
    state.link_pos = pos
    state.facing = direction if not bounced or pos != start_stop else state.facing


def _do_board(spec, state, direction) -> None:
    if not spec.config.has("minecarts"):
        _reject("no carts")
    state.facing = direction
    here = state.objects.get(state.link_pos)
    if here is not None and here.kind is ObjectKind.MINECART:
        stop_tile = effective_tile(spec, state, state.link_pos)
        if stop_tile.kind is not TileKind.MINECART_STOP:
            _reject("cart is not at a stop")
        if direction != stop_tile.direction:
            _reject("cart departs the other way")
        _ride(spec, state, state.link_pos)
        return
    target = step_pos(state.link_pos, direction)
    obj = state.objects.get(target)
    if obj is None or obj.kind is not ObjectKind.MINECART:
        _reject("no cart there")
    if effective_tile(spec, state, target).kind is not TileKind.MINECART_STOP:
        _reject("cart is not at a stop")
    _ride(spec, state, target)


def _do_block(spec, state, direction) -> None:
    if not spec.config.has("floorpuzzle-block"):
        _reject("no remote block")
    state.facing = direction
    blocks = [
        pos
        for pos, obj in state.objects.items()
        if obj.kind is ObjectKind.FLASHING_BLOCK
    ]
    if len(blocks) != 1:
        _reject("need exactly one block")
    pos = blocks[0]
    target = step_pos(pos, direction)
    if effective_tile(spec, state, target).kind is not TileKind.PIT:
        _reject("block only rolls into pits")
    obj = state.objects.pop(pos)
    state.objects[target] = obj
    state.overrides[target] = TileKind.FLOOR


def step(spec: DungeonSpec, state: GameState, action: Action) -> GameState:
    """Apply one action, returning the successor state."""
    if not state.alive:
        _reject("game over")
    out = state.copy()
    kind = action.kind
    if kind in ("move", "face", "hookshot", "switchhook", "lift", "sword",
                "bomb", "magnet", "bolt", "board", "block"):
        if action.direction not in DIRS:
            _reject("bad direction")
    if kind == "face":
        out.facing = action.direction
    elif kind == "move":
        _do_move(spec, out, action.direction)
    elif kind == "hookshot":
        _do_hookshot(spec, out, action.direction)
    elif kind == "switchhook":
        _do_switchhook(spec, out, action.direction)
    elif kind == "lift":
        _do_lift(spec, out, action.direction)
    elif kind == "sword":
        _do_sword(spec, out, action.direction)
    elif kind == "bomb":
        _do_bomb(spec, out, action.direction)
    elif kind == "magnet":
        _do_magnet(spec, out, action.direction, action.polarity)
    elif kind == "bolt":
        _do_bolt(spec, out, action.direction)
    elif kind == "lever":
        _do_lever(spec, out, action.target)
    elif kind == "board":
        _do_board(spec, out, action.direction)
    elif kind == "block":
        _do_block(spec, out, action.direction)
    else:
        _reject("unknown action %r" % kind)
    return out


def action_candidates(spec: DungeonSpec) -> list:
    """Every action shape worth trying under this mechanic set."""
    cfg = spec.config
    out = []
    for d in DIRS:
        out.append(Action("move", d))
    if cfg.has("floorpuzzle-block"):
        for d in DIRS:
            out.append(Action("block", d))
    if cfg.has("hookshot"):
        for d in DIRS:
            out.append(Action("hookshot", d))
    if cfg.has("switchhook"):
        for d in DIRS:
            out.append(Action("switchhook", d))
    if cfg.has("pots"):
        for d in DIRS:
            out.append(Action("lift", d))
    if cfg.has("sword"):
        for d in DIRS:
            out.append(Action("sword", d))
    if cfg.has("bombs"):
        for d in DIRS:
            out.append(Action("bomb", d))
    if cfg.has("magnet"):
        for d in DIRS:
            for pol in ("repel", "attract"):
                out.append(Action("magnet", d, polarity=pol))
    if cfg.has("pacci"):
        for d in DIRS:
            out.append(Action("bolt", d))
    if cfg.has("minecarts"):
        for d in DIRS:
            out.append(Action("board", d))
        out.append(Action("lever"))
    return out


def legal_actions(spec: DungeonSpec, state: GameState) -> list:
    """Applicable actions that change the state.  Facing turns excluded."""
    out = []
    base = state_key(state)
    for action in action_candidates(spec):
        try:
            nxt = step(spec, state, action)
        except StepRejected:
            continue
        if state_key(nxt) != base:
            out.append(action)
    return out


def replay(spec: DungeonSpec, state: GameState, actions) -> GameState:
    cur = state
    for action in actions:
        cur = step(spec, cur, action)
    return cur


def is_goal(spec: DungeonSpec, state: GameState) -> bool:
    if not state.alive:
        return False
    cond = spec.goal_condition
    if cond == "reach":
        return effective_tile(spec, state, state.link_pos).kind is TileKind.GOAL
    if cond == "pits-filled":
        for pos, tile in spec.tiles.items():
            if tile.kind is TileKind.PIT:
                if state.overrides.get(pos) is not TileKind.FLOOR:
                    return False
        return True
    if cond == "no-blue":
        for pos, tile in spec.tiles.items():
            if tile.kind is TileKind.BLUE_TILE and pos not in state.overrides:
                return False
        return True
    return False
