"""Dungeon specification, mechanic configuration, and game state."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from .geometry import DIRS, OPPOSITE, step_pos
from .tiles import (
    CURVE_SHAPES,
    Obj,
    ObjectKind,
    STRAIGHT_SHAPES,
    TRACK_SHAPES,
    Tile,
    TileKind,
    WALL,
)


class DungeonError(Exception):
    """Raised for semantically invalid dungeon specifications."""


KNOWN_MECHANICS = frozenset(
    (
        "hookshot",
        "switchhook",
        "pots",
        "pits",
        "keys",
        "crystal",
        "sword",
        "bombs",
        "floorpuzzle-block",
        "floorpuzzle-color",
        "statues",
        "minecarts",
        "magnet",
        "pacci",
        "enemies",
    )
)

GOAL_CONDITIONS = ("reach", "pits-filled", "no-blue")


@dataclass(frozen=True)
class MechanicConfig:
    """Which mechanics are active and their numeric parameters.

    magnet_range of None means unlimited reach.
    """

    mechanics: frozenset = frozenset()
    hookshot_range: int = 10
    magnet_range: int | None = None
    bomb_range: int = 2
    minecart_bounce: bool = False

    def has(self, name: str) -> bool:
        return name in self.mechanics


@dataclass(frozen=True)
class Action:
    """One agent action.

    kind is one of: move, face, hookshot, switchhook, lift, sword, bomb,
    magnet, bolt, lever, board, block.  Directional kinds carry direction;
    magnet also carries polarity ("repel" or "attract"); lever may carry an
    explicit target tile.
    """

    kind: str
    direction: str | None = None
    polarity: str | None = None
    target: tuple | None = None

    def describe(self) -> str:
        parts = [self.kind]
        if self.kind == "magnet":
            parts.append(self.polarity or "?")
        if self.direction is not None:
            parts.append(self.direction)
        if self.target is not None:
            parts.append("%d %d" % self.target)
        return " ".join(parts)


DIRECTIONAL_KINDS = (
    "move",
    "face",
    "hookshot",
    "switchhook",
    "lift",
    "sword",
    "bomb",
    "bolt",
    "board",
    "block",
)


@dataclass
class JunctionDef:
    jid: str
    pos: tuple
    shapes: tuple
    init: int


@dataclass
class DungeonSpec:
    """Immutable-by-convention description of one dungeon."""

    width: int
    height: int
    tiles: dict
    heights: dict = field(default_factory=dict)
    objects: dict = field(default_factory=dict)
    link_start: tuple = (0, 0)
    link_facing: str = "S"
    config: MechanicConfig = field(default_factory=MechanicConfig)
    goal_condition: str = "reach"
    junction_defs: dict = field(default_factory=dict)
    plates: dict = field(default_factory=dict)

    def in_bounds(self, pos) -> bool:
        return 0 <= pos[0] < self.width and 0 <= pos[1] < self.height

    def base_tile(self, pos) -> Tile:
        if not self.in_bounds(pos):
            return WALL
        return self.tiles.get(pos, WALL)

    def height_at(self, pos) -> int:
        return self.heights.get(pos, 0)

    def finalize(self) -> None:
        """Infer derived tile attributes (door axes, stop connections)."""
        for pos, tile in list(self.tiles.items()):
            if tile.kind is TileKind.MINECART_DOOR and tile.shape is None:
                axis = self._infer_door_axis(pos)
                self.tiles[pos] = dataclasses.replace(tile, shape=axis)
        for pos, tile in list(self.tiles.items()):
            if tile.kind is TileKind.MINECART_STOP and tile.direction is None:
                conn = self._infer_stop_connection(pos)
                self.tiles[pos] = dataclasses.replace(tile, direction=conn)

    def _rail_sides(self, pos) -> frozenset:
        """Sides of a tile that carry rail, considering every junction leg."""
        tile = self.base_tile(pos)
        if tile.kind is TileKind.TRACK:
            if tile.junction is not None:
                sides = set()
                for shape in tile.jshapes:
                    sides |= TRACK_SHAPES[shape]
                return frozenset(sides)
            return TRACK_SHAPES[tile.shape]
        if tile.kind is TileKind.MINECART_DOOR:
            if tile.shape is not None:
                return TRACK_SHAPES[tile.shape]
            return frozenset(DIRS)
        if tile.kind is TileKind.MINECART_STOP:
            return frozenset(DIRS)
        return frozenset()

    def _infer_door_axis(self, pos) -> str:
        axes = []
        for axis, (a, b) in (("ns", ("N", "S")), ("ew", ("E", "W"))):
            ok = True
            for d in (a, b):
                npos = step_pos(pos, d)
                if OPPOSITE[d] not in self._rail_sides(npos):
                    ok = False
            if ok:
                axes.append(axis)
        if len(axes) != 1:
            raise DungeonError(
                "minecart door at %r needs exactly one collinear rail axis" % (pos,)
            )
        return axes[0]

    def _infer_stop_connection(self, pos) -> str:
        conns = []
        for d in DIRS:
            npos = step_pos(pos, d)
            tile = self.base_tile(npos)
            if tile.kind is TileKind.MINECART_STOP:
                continue
            if OPPOSITE[d] in self._rail_sides(npos):
                conns.append(d)
        if len(conns) != 1:
            raise DungeonError(
                "minecart stop at %r needs exactly one rail connection, found %d"
                % (pos, len(conns))
            )
        return conns[0]

    def validate(self) -> None:
        self.finalize()
        cfg = self.config
        unknown = cfg.mechanics - KNOWN_MECHANICS
        if unknown:
            raise DungeonError("unknown mechanics: %s" % ", ".join(sorted(unknown)))
        if self.goal_condition not in GOAL_CONDITIONS:
            raise DungeonError("unknown goal condition %r" % self.goal_condition)
        if not self.in_bounds(self.link_start):
            raise DungeonError("start position out of bounds")
        start_tile = self.base_tile(self.link_start)
        if start_tile.kind is TileKind.WALL:
            raise DungeonError("start position is a wall")
        start_obj = self.objects.get(self.link_start)
        if start_obj is not None and start_obj.kind not in (
            ObjectKind.KEY_PICKUP,
            ObjectKind.BOMB_PICKUP,
        ):
            raise DungeonError("start position occupied by a solid object")
        if self.link_facing not in DIRS:
            raise DungeonError("bad start facing %r" % self.link_facing)

        for pid, pos in self.plates.items():
            if not self.in_bounds(pos):
                raise DungeonError("plate %s out of bounds" % pid)
            if self.base_tile(pos).kind is not TileKind.FLOOR:
                raise DungeonError("plate %s must sit on floor" % pid)
        for pos, tile in self.tiles.items():
            self._validate_tile(pos, tile, self.plates)
        for pos, obj in self.objects.items():
            self._validate_obj(pos, obj)
        for jid, jd in self.junction_defs.items():
            tile = self.base_tile(jd.pos)
            if tile.kind is not TileKind.TRACK or tile.junction != jid:
                raise DungeonError("junction %s not anchored on its track tile" % jid)

    def _validate_tile(self, pos, tile, plates) -> None:
        if tile.kind is TileKind.LEDGE:
            if tile.direction not in DIRS:
                raise DungeonError("ledge at %r needs a drop direction" % (pos,))
            drop = step_pos(pos, tile.direction)
            if not self.in_bounds(drop):
                raise DungeonError("ledge at %r drops off-grid" % (pos,))
            if self.height_at(drop) != self.height_at(pos) - 1:
                raise DungeonError(
                    "ledge at %r must drop exactly one height level" % (pos,)
                )
        elif tile.kind is TileKind.BARRIER:
            if tile.color not in ("B", "R"):
                raise DungeonError("barrier at %r needs color B or R" % (pos,))
        elif tile.kind is TileKind.TRACK:
            if tile.junction is not None:
                jd = self.junction_defs.get(tile.junction)
                if jd is None:
                    raise DungeonError("track at %r references unknown junction" % (pos,))
                if len(tile.jshapes) != 2:
                    raise DungeonError("junction at %r needs two shapes" % (pos,))
                for shape in tile.jshapes:
                    if shape not in CURVE_SHAPES + STRAIGHT_SHAPES:
                        raise DungeonError("bad junction shape %r at %r" % (shape, pos))
                if jd.init not in (0, 1):
                    raise DungeonError("junction at %r init must be 0 or 1" % (pos,))
            elif tile.shape not in TRACK_SHAPES:
                raise DungeonError("bad track shape %r at %r" % (tile.shape, pos))
        elif tile.kind is TileKind.SHUTTER_DOOR:
            if tile.plate_id not in plates:
                raise DungeonError(
                    "shutter at %r listens to missing plate %r" % (pos, tile.plate_id)
                )
        elif tile.kind is TileKind.LEVER:
            if tile.junction not in self.junction_defs:
                raise DungeonError("lever at %r toggles unknown junction" % (pos,))

    def _validate_obj(self, pos, obj) -> None:
        if not self.in_bounds(pos):
            raise DungeonError("object at %r out of bounds" % (pos,))
        tile = self.base_tile(pos)
        if obj.kind is ObjectKind.METAL_ORB and obj.on_ledge:
            if tile.kind is not TileKind.LEDGE:
                raise DungeonError("raised orb at %r must sit on a ledge" % (pos,))
        if obj.kind is ObjectKind.KODONGO and obj.facing not in DIRS:
            raise DungeonError("kodongo at %r needs a facing" % (pos,))
        if obj.kind is ObjectKind.MINECART:
            if tile.kind is not TileKind.MINECART_STOP:
                raise DungeonError("minecart at %r must start on a stop" % (pos,))


@dataclass
class GameState:
    """Everything that changes during play.

    overrides maps positions to replacement tile kinds (filled pits,
    opened locked doors, colored-floor progress).  enchanted is the set
    of hole positions currently primed for a launch.
    """

    link_pos: tuple
    facing: str
    keys: int = 0
    bombs: int = 0
    alive: bool = True
    crystal: str = "B"
    objects: dict = field(default_factory=dict)
    overrides: dict = field(default_factory=dict)
    junctions: dict = field(default_factory=dict)
    enchanted: set = field(default_factory=set)

    def copy(self) -> "GameState":
        return GameState(
            link_pos=self.link_pos,
            facing=self.facing,
            keys=self.keys,
            bombs=self.bombs,
            alive=self.alive,
            crystal=self.crystal,
            objects=dict(self.objects),
            overrides=dict(self.overrides),
            junctions=dict(self.junctions),
            enchanted=set(self.enchanted),
        )


def initial_state(spec: DungeonSpec) -> GameState:
    junctions = {jid: jd.init for jid, jd in spec.junction_defs.items()}
    return GameState(
        link_pos=spec.link_start,
        facing=spec.link_facing,
        objects=dict(spec.objects),
        junctions=junctions,
    )


def _obj_key(obj: Obj):
    return (
        obj.kind.value,
        obj.has_key,
        obj.on_ledge,
        obj.facing or "",
        obj.count,
    )


def state_key(state: GameState) -> bytes:
    parts = (
        state.link_pos,
        state.facing,
        state.keys,
        state.bombs,
        state.alive,
        state.crystal,
        tuple(sorted((pos, _obj_key(o)) for pos, o in state.objects.items())),
        tuple(sorted((pos, kind.value) for pos, kind in state.overrides.items())),
        tuple(sorted(state.junctions.items())),
        tuple(sorted(state.enchanted)),
    )
    return repr(parts).encode()


def effective_tile(spec: DungeonSpec, state: GameState, pos) -> Tile:
    """Tile as it currently behaves, after overrides and junction settings."""
    if not spec.in_bounds(pos):
        return WALL
    override = state.overrides.get(pos)
    if override is not None:
        return Tile(override)
    tile = spec.base_tile(pos)
    if tile.kind is TileKind.TRACK and tile.junction is not None:
        setting = state.junctions.get(tile.junction, 0)
        return dataclasses.replace(tile, shape=tile.jshapes[setting])
    return tile
