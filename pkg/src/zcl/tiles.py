"""Tile and object vocabulary for the dungeon model."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class TileKind(enum.Enum):
    FLOOR = "floor"
    WALL = "wall"
    LOW_WALL = "lowWall"
    PIT = "pit"
    LEDGE = "ledge"
    STAIRS = "stairs"
    LOCKED_DOOR = "lockedDoor"
    SHUTTER_DOOR = "shutterDoor"
    BARRIER = "barrier"
    CRYSTAL_SWITCH = "crystalSwitch"
    HOLE = "hole"
    TRACK = "track"
    MINECART_STOP = "minecartStop"
    MINECART_DOOR = "minecartDoor"
    LEVER = "lever"
    CROSSOVER = "crossover"
    BLUE_TILE = "blueTile"
    RED_TILE = "redTile"
    YELLOW_TILE = "yellowTile"
    GOAL = "goal"


# Track shapes: the set of sides of the tile that rails connect to.
TRACK_SHAPES = {
    "ns": frozenset(("N", "S")),
    "ew": frozenset(("E", "W")),
    "ne": frozenset(("N", "E")),
    "nw": frozenset(("N", "W")),
    "se": frozenset(("S", "E")),
    "sw": frozenset(("S", "W")),
    "cross": frozenset(("N", "E", "S", "W")),
}

CURVE_SHAPES = ("ne", "nw", "se", "sw")
STRAIGHT_SHAPES = ("ns", "ew")


@dataclass(frozen=True)
class Tile:
    """Static tile description.

    kind        what the tile is
    direction   ledge drop direction
    color       barrier color, "B" or "R"
    plate_id    pressure plate id a shutter door listens to
    shape       track shape key from TRACK_SHAPES
    junction    junction id for movable-connector tracks and levers
    jshapes     the two shapes a movable connector alternates between
    """

    kind: TileKind
    direction: str | None = None
    color: str | None = None
    plate_id: str | None = None
    shape: str | None = None
    junction: str | None = None
    jshapes: tuple = ()


FLOOR = Tile(TileKind.FLOOR)
WALL = Tile(TileKind.WALL)


class ObjectKind(enum.Enum):
    POT = "pot"
    DIAMOND_BLOCK = "diamondBlock"
    STATUE = "statue"
    METAL_ORB = "metalOrb"
    MINECART = "minecart"
    FLASHING_BLOCK = "flashingBlock"
    KODONGO = "kodongo"
    KEY_PICKUP = "keyPickup"
    BOMB_PICKUP = "bombPickup"


# Object kinds that occupy the tile and block movement and thrown rays.
SOLID_OBJECTS = frozenset(
    (
        ObjectKind.POT,
        ObjectKind.DIAMOND_BLOCK,
        ObjectKind.STATUE,
        ObjectKind.METAL_ORB,
        ObjectKind.MINECART,
        ObjectKind.FLASHING_BLOCK,
        ObjectKind.KODONGO,
    )
)


@dataclass(frozen=True)
class Obj:
    """Dynamic object resting on a tile.

    has_key   pot contains a small key
    on_ledge  orb sits on the raised lip of a ledge tile
    facing    kodongo facing direction
    count     bomb pickup size
    """

    kind: ObjectKind
    has_key: bool = False
    on_ledge: bool = False
    facing: str | None = None
    count: int = 0


def is_solid_obj(obj) -> bool:
    return obj is not None and obj.kind in SOLID_OBJECTS
