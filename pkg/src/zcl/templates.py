"""Concrete room layouts realizing the canonical gadget tables.

Each builder returns a RegionSpec whose ports line up with the port
names of the matching gadget table in zcl.gadgets, parametrized by the
abstract state the room should start in.  verify_realization checks the
pairing.
"""

from __future__ import annotations

from .dungeon import DungeonSpec, JunctionDef, MechanicConfig
from .regions import RegionSpec
from .tiles import FLOOR, Obj, ObjectKind, Tile, TileKind


class _Builder:
    """Sparse grid builder: every unset tile stays a wall."""

    def __init__(self, width, height):
        self.width = width
        self.height = height
        self.tiles = {}
        self.heights = {}
        self.objects = {}
        self.junction_defs = {}
        self.plates = {}

    def put(self, x, y, tile, h=0):
        self.tiles[(x, y)] = tile
        if h:
            self.heights[(x, y)] = h

    def floor(self, x, y, h=0):
        self.put(x, y, FLOOR, h)

    def floor_run(self, y, x0, x1, h=0):
        for x in range(x0, x1 + 1):
            self.floor(x, y, h)

    def track(self, x, y, shape):
        self.put(x, y, Tile(TileKind.TRACK, shape=shape))

    def stop(self, x, y, cart=False):
        self.put(x, y, Tile(TileKind.MINECART_STOP))
        if cart:
            self.objects[(x, y)] = Obj(ObjectKind.MINECART)

    def ledge(self, x, y, drop_dir, h=1):
        self.put(x, y, Tile(TileKind.LEDGE, direction=drop_dir), h)

    def stairs(self, x, y, h=0):
        self.put(x, y, Tile(TileKind.STAIRS), h)

    def spec(self, link, mechanics, **cfg_kw):
        config = MechanicConfig(mechanics=frozenset(mechanics), **cfg_kw)
        spec = DungeonSpec(
            width=self.width,
            height=self.height,
            tiles=self.tiles,
            heights=self.heights,
            objects=self.objects,
            link_start=link,
            link_facing="E",
            config=config,
            junction_defs=self.junction_defs,
            plates=self.plates,
        )
        spec.validate()
        return spec


def make_magnet_door(init="closed", compact=False):
    """Door room driven by a magnetic glove.

    A two-orb shuttle sits in a vertical shaft.  Pushed down it clears
    the toggle corridor (open); pushed up it clears the one-shot exit
    row (closed).  Stairs flank every shaft mouth so the orbs can never
    leave the three shaft cells, and the close corridor approaches over
    a one-way ledge so a visitor cannot back out without restoring the
    door.  The compact variant trims one column per side and relies on
    a finite glove range that still spans the whole room.
    """
    width = 11 if compact else 13
    cx = width // 2
    last = width - 1
    b = _Builder(width, 9)

    b.floor_run(1, 0, last, h=1)          # operating corridor, raised
    b.floor_run(3, 0, last)               # toggle corridor
    b.stairs(cx - 1, 3)
    b.stairs(cx + 1, 3)
    b.floor(cx, 4)                        # middle shaft cell
    b.floor_run(5, cx, last)              # one-shot exit row
    b.stairs(cx + 1, 5)
    b.stairs(cx, 6)                       # lower shaft mouth
    b.floor_run(7, 0, cx - 2, h=1)        # one-shot approach, raised
    b.ledge(cx - 1, 7, "E", h=1)
    b.floor(cx, 7)                        # landing pocket

    shaft = {
        "closed": ((cx, 3), (cx, 4)),
        "open": ((cx, 4), (cx, 5)),
    }
    for pos in shaft[init]:
        b.objects[pos] = Obj(ObjectKind.METAL_ORB)

    # The glove range must stay finite so the room can be fenced off at a
    # distance; 15 still spans the whole room in either variant.
    spec = b.spec((0, 1), ("magnet",), magnet_range=15)
    ports = {
        "Oin": ((0, 1), "W"),
        "Oout": ((last, 1), "E"),
        "Tin": ((0, 3), "W"),
        "Tout": ((last, 3), "E"),
        "Cin": ((0, 7), "W"),
        "Cout": ((last, 5), "E"),
    }
    return RegionSpec(spec, ports, init_name=init)


def make_pacci_door(init="closed"):
    """Self-closing door built around one launchable hole.

    The opening corridor fires a charge over a low wall to prime the
    hole.  The toggle path drops onto the primed hole from one side,
    gets launched to the far ledge, and the launch consumes the charge,
    so every toggle crossing shuts the door behind itself.
    """
    b = _Builder(7, 7)

    b.floor(4, 1)
    b.floor(5, 1)
    b.floor(6, 1)                         # toggle exit
    b.ledge(4, 2, "N", h=1)
    b.floor(0, 3, h=1)                    # toggle entry
    b.floor(1, 3, h=1)
    b.ledge(2, 3, "E", h=1)
    b.put(3, 3, Tile(TileKind.HOLE))
    b.ledge(4, 3, "W", h=1)
    b.put(3, 4, Tile(TileKind.LOW_WALL))
    b.floor_run(5, 0, 6)                  # opening corridor

    spec = b.spec((0, 5), ("pacci",))
    primed = frozenset(((3, 3),)) if init == "open" else frozenset()
    return RegionSpec(
        spec,
        {
            "Tin": ((0, 3), "W"),
            "Tout": ((6, 1), "E"),
            "Oin": ((0, 5), "W"),
            "Oout": ((6, 5), "E"),
        },
        init_name=init,
        init_enchanted=primed,
    )


def make_pacci_crossover():
    """Two crossing lanes over a covered bridge tile."""
    b = _Builder(3, 3)
    b.floor(1, 0)
    b.floor(0, 1)
    b.floor(2, 1)
    b.floor(1, 2)
    b.put(1, 1, Tile(TileKind.CROSSOVER))
    spec = b.spec((1, 0), ())
    return RegionSpec(
        spec,
        {
            "N": ((1, 0), "N"),
            "S": ((1, 2), "S"),
            "E": ((2, 1), "E"),
            "W": ((0, 1), "W"),
        },
        init_name="on",
    )


def make_cart_one_toggle(init="fwd"):
    """Single rail line with a cart door in the middle.

    The cart rests at one end stop; riding it to the other end is the
    only way past the door, and it leaves the line primed in the other
    direction only.
    """
    b = _Builder(9, 3)
    b.floor(0, 1)
    b.floor(1, 1)
    b.stop(2, 1, cart=(init == "fwd"))
    b.track(3, 1, "ew")
    b.put(4, 1, Tile(TileKind.MINECART_DOOR))
    b.track(5, 1, "ew")
    b.stop(6, 1, cart=(init == "rev"))
    b.floor(7, 1)
    b.floor(8, 1)
    spec = b.spec((0, 1), ("minecarts",), minecart_bounce=True)
    return RegionSpec(
        spec,
        {"A": ((0, 1), "W"), "B": ((8, 1), "E")},
        init_name=init,
    )


def make_ledge_diode(init="on"):
    """One-way corridor: a ledge drop that cannot be climbed back."""
    b = _Builder(5, 3)
    b.floor(0, 1, h=1)
    b.floor(1, 1, h=1)
    b.ledge(2, 1, "E", h=1)
    b.floor(3, 1)
    b.floor(4, 1)
    spec = b.spec((0, 1), ())
    return RegionSpec(
        spec,
        {"A": ((0, 1), "W"), "B": ((4, 1), "E")},
        init_name=init,
    )


def make_cart_merge_toggle(init="up"):
    """Two rail lines merging through a movable junction into one stem.

    Entering from a side sends that cart down to the stem stop; the
    parked cart then makes the other side's ride bounce home, so only
    the matching return from the stem can reset the room.  The junction
    lever is reachable from every chamber, which keeps the junction
    setting behaviorally irrelevant.
    """
    b = _Builder(13, 9)

    b.floor(0, 3)
    b.floor(1, 3)
    b.stop(2, 3, cart=(init in ("up", "Rdown")))
    for x in (3, 4, 5):
        b.track(x, 3, "ew")
    b.put(6, 3, Tile(TileKind.TRACK, junction="J", jshapes=("sw", "se")))
    b.junction_defs["J"] = JunctionDef("J", (6, 3), ("sw", "se"), 0)
    for x in (7, 8, 9):
        b.track(x, 3, "ew")
    b.stop(10, 3, cart=(init in ("up", "Ldown")))
    b.floor(11, 3)
    b.floor(12, 3)

    # side walk chambers, separated by the lever fixture
    b.floor(1, 2)
    b.floor_run(1, 1, 5)
    b.put(6, 1, Tile(TileKind.LEVER, junction="J"))
    b.floor_run(1, 7, 11)
    b.floor(11, 2)

    # stem down to the shared stop
    b.track(6, 4, "ns")
    b.track(6, 5, "ns")
    b.stop(6, 6, cart=(init in ("Ldown", "Rdown")))
    b.floor(6, 7)
    b.put(5, 7, Tile(TileKind.LEVER, junction="J"))
    b.floor(6, 8)

    spec = b.spec((0, 3), ("minecarts",), minecart_bounce=True)
    return RegionSpec(
        spec,
        {"L1": ((0, 3), "W"), "R1": ((12, 3), "E"), "M": ((6, 8), "S")},
        init_name=init,
    )


def make_cart_locking_toggle(init="up"):
    """Best-effort locking pair of toggle lines over one shared stem.

    Both lines park their cart on the same stem stop, which locks the
    other line out (its ride bounces off the occupied stop).  The room
    reproduces the locking core but not the full table: the stem
    chamber joins both bottom corridors, and a dismounting rider picks
    either side of a vacated stop, so extra crossings exist that the
    table forbids.  Verification reports them honestly.
    """
    b = _Builder(15, 11)

    b.stop(2, 5, cart=(init in ("up", "Rdown")))
    for x in (3, 4, 5, 6):
        b.track(x, 5, "ew")
    b.put(7, 5, Tile(TileKind.TRACK, junction="J", jshapes=("sw", "se")))
    b.junction_defs["J"] = JunctionDef("J", (7, 5), ("sw", "se"), 0)
    for x in (8, 9, 10, 11):
        b.track(x, 5, "ew")
    b.stop(12, 5, cart=(init in ("up", "Ldown")))

    b.track(7, 6, "ns")
    b.track(7, 7, "ns")
    b.stop(7, 8, cart=(init in ("Ldown", "Rdown")))

    for y in range(1, 5):
        b.floor(2, y)
        b.floor(12, y)
    b.floor(2, 0)
    b.floor(12, 0)
    for y in range(6, 10):
        b.floor(2, y)
        b.floor(12, y)
    b.floor(2, 10)
    b.floor(12, 10)
    b.floor_run(9, 3, 11)

    b.put(1, 4, Tile(TileKind.LEVER, junction="J"))
    b.put(13, 4, Tile(TileKind.LEVER, junction="J"))
    b.put(6, 10, Tile(TileKind.LEVER, junction="J"))

    spec = b.spec((2, 0), ("minecarts",), minecart_bounce=True)
    return RegionSpec(
        spec,
        {
            "L1": ((2, 10), "S"),
            "L2": ((2, 0), "N"),
            "R1": ((12, 10), "S"),
            "R2": ((12, 0), "N"),
        },
        init_name=init,
    )


def make_statue_switch_doors(init="1open"):
    """One statue on two plates, each plate holding one door open.

    The statue garage sits off the switch corridor between two stairs
    cells, so the statue can only ever swap between the two plates.
    """
    b = _Builder(9, 6)

    b.floor_run(0, 0, 3)
    b.put(4, 0, Tile(TileKind.SHUTTER_DOOR, plate_id="p1"))
    b.floor_run(0, 5, 8)
    b.floor_run(2, 0, 8)
    b.stairs(2, 3)
    b.floor(3, 3)
    b.floor(4, 3)
    b.stairs(5, 3)
    b.floor_run(5, 0, 3)
    b.put(4, 5, Tile(TileKind.SHUTTER_DOOR, plate_id="p2"))
    b.floor_run(5, 5, 8)

    b.plates["p1"] = (3, 3)
    b.plates["p2"] = (4, 3)
    statue_pos = (3, 3) if init == "1open" else (4, 3)
    b.objects[statue_pos] = Obj(ObjectKind.STATUE)

    spec = b.spec((0, 2), ("statues",))
    return RegionSpec(
        spec,
        {
            "Sin": ((0, 2), "W"),
            "Sout": ((8, 2), "E"),
            "D1in": ((0, 0), "W"),
            "D1out": ((8, 0), "E"),
            "D2in": ((0, 5), "W"),
            "D2out": ((8, 5), "E"),
        },
        init_name=init,
    )


TEMPLATES = {
    "Door": make_magnet_door,
    "SelfClosingDoor": make_pacci_door,
    "Crossover": lambda init="on": make_pacci_crossover(),
    "OneToggle": make_cart_one_toggle,
    "Diode": make_ledge_diode,
    "TwoToOneToggle": make_cart_merge_toggle,
    "Locking2Toggle": make_cart_locking_toggle,
    "OneSwitchTwoDoors": make_statue_switch_doors,
}


def template_region(kind, init=None, **kwargs):
    """Build the shipped room for a gadget kind in a given state."""
    if kind not in TEMPLATES:
        raise KeyError("no room template for gadget kind %r" % kind)
    if init is None:
        return TEMPLATES[kind](**kwargs)
    return TEMPLATES[kind](init, **kwargs)
