"""Plain-text formats for dungeons, gadget regions, and action plans."""

from __future__ import annotations

from .dungeon import (
    Action,
    DungeonSpec,
    JunctionDef,
    MechanicConfig,
    effective_tile,
)
from .geometry import DIRS
from .regions import RegionSpec
from .tiles import CURVE_SHAPES, Obj, ObjectKind, Tile, TileKind


class ParseError(Exception):
    """Raised for malformed input files."""


_LEDGE_GLYPHS = {">": "E", "<": "W", "^": "N", "v": "S"}
_LEDGE_FOR_DIR = {v: k for k, v in _LEDGE_GLYPHS.items()}

_SIMPLE_GLYPHS = {
    "#": Tile(TileKind.WALL),
    ".": Tile(TileKind.FLOOR),
    ",": Tile(TileKind.LOW_WALL),
    "~": Tile(TileKind.PIT),
    "S": Tile(TileKind.STAIRS),
    "L": Tile(TileKind.LOCKED_DOOR),
    "B": Tile(TileKind.BARRIER, color="B"),
    "R": Tile(TileKind.BARRIER, color="R"),
    "C": Tile(TileKind.CRYSTAL_SWITCH),
    "o": Tile(TileKind.HOLE),
    "-": Tile(TileKind.TRACK, shape="ew"),
    "|": Tile(TileKind.TRACK, shape="ns"),
    "+": Tile(TileKind.TRACK, shape="cross"),
    "X": Tile(TileKind.CROSSOVER),
    "b": Tile(TileKind.BLUE_TILE),
    "r": Tile(TileKind.RED_TILE),
    "y": Tile(TileKind.YELLOW_TILE),
    "G": Tile(TileKind.GOAL),
    "s": Tile(TileKind.MINECART_STOP),
    "D": Tile(TileKind.MINECART_DOOR),
}


def _split_sections(text):
    """Yield (name, header_args, body_lines) per bracketed section."""
    sections = []
    current = None
    for raw in text.splitlines():
        line = raw.rstrip()
        stripped = line.strip()
        if stripped.startswith("["):
            close = stripped.find("]")
            if close < 0:
                raise ParseError("unterminated section header: %r" % stripped)
            name = stripped[1:close].strip()
            args = stripped[close + 1 :].strip()
            current = (name, args, [])
            sections.append(current)
        elif current is not None:
            current[2].append(line)
        elif stripped:
            raise ParseError("content before first section: %r" % stripped)
    return sections


def _parse_meta(lines):
    cfg = {}
    for line in lines:
        if not line.strip():
            continue
        if "=" not in line:
            raise ParseError("bad meta line: %r" % line)
        key, _, value = line.partition("=")
        cfg[key.strip()] = value.strip()
    mechanics = frozenset(
        m.strip() for m in cfg.pop("mechanics", "").split(",") if m.strip()
    )
    try:
        hookshot_range = int(cfg.pop("hookshot_range", "10"))
        bomb_range = int(cfg.pop("bomb_range", "2"))
        raw_mag = cfg.pop("magnet_range", "inf")
        magnet_range = None if raw_mag == "inf" else int(raw_mag)
    except ValueError as exc:
        raise ParseError("bad numeric meta value: %s" % exc) from None
    raw_bounce = cfg.pop("minecart_bounce", "false").lower()
    if raw_bounce not in ("true", "false"):
        raise ParseError("minecart_bounce must be true or false")
    goal_condition = cfg.pop("goal_condition", "reach")
    if cfg:
        raise ParseError("unknown meta keys: %s" % ", ".join(sorted(cfg)))
    config = MechanicConfig(
        mechanics=mechanics,
        hookshot_range=hookshot_range,
        magnet_range=magnet_range,
        bomb_range=bomb_range,
        minecart_bounce=raw_bounce == "true",
    )
    return config, goal_condition


def _int_pair(xs, ys, context):
    try:
        return int(xs), int(ys)
    except ValueError:
        raise ParseError("bad coordinates in %s" % context) from None


def parse_dungeon(text: str, *, allow_region=False):
    """Parse dungeon text.  Returns a validated DungeonSpec, or a
    RegionSpec when allow_region is set and port declarations appear."""
    sections = _split_sections(text)
    names = [s[0] for s in sections]
    for required in ("meta", "grid", "link"):
        if required not in names:
            raise ParseError("missing [%s] section" % required)

    config = None
    goal_condition = "reach"
    grid_lines = []
    height_lines = []
    track_lines = []
    shutter_lines = []
    object_lines = []
    port_lines = []
    init_name = None
    link_args = None
    seen = set()
    for name, args, body in sections:
        if name in seen:
            raise ParseError("duplicate [%s] section" % name)
        seen.add(name)
        if name == "meta":
            config, goal_condition = _parse_meta(body)
        elif name == "grid":
            grid_lines = [l for l in body if l.strip()]
        elif name == "heights":
            height_lines = [l for l in body if l.strip()]
        elif name == "tracks":
            track_lines = [l for l in body if l.strip()]
        elif name == "shutters":
            shutter_lines = [l for l in body if l.strip()]
        elif name == "objects":
            object_lines = [l for l in body if l.strip()]
        elif name == "link":
            link_args = args
        elif name == "ports":
            if not allow_region:
                raise ParseError("port declarations only belong in region files")
            port_lines = [l for l in body if l.strip()]
        elif name == "init":
            if not allow_region:
                raise ParseError("init declarations only belong in region files")
            init_name = args
        else:
            raise ParseError("unknown section [%s]" % name)

    if not grid_lines:
        raise ParseError("empty grid")
    width = len(grid_lines[0])
    height = len(grid_lines)
    for row in grid_lines:
        if len(row) != width:
            raise ParseError("ragged grid rows")

    # second-pass attributes referenced by placeholder glyphs
    curves = {}
    junction_defs = {}
    junction_at = {}
    levers = {}
    for line in track_lines:
        parts = line.split()
        if parts[0] == "curve" and len(parts) == 4:
            x, y = _int_pair(parts[1], parts[2], "curve")
            if parts[3] not in CURVE_SHAPES:
                raise ParseError("bad curve shape %r" % parts[3])
            curves[(x, y)] = parts[3]
        elif parts[0] == "junction" and len(parts) == 7:
            jid = parts[1]
            x, y = _int_pair(parts[2], parts[3], "junction")
            try:
                init = int(parts[6])
            except ValueError:
                raise ParseError("junction init must be 0 or 1") from None
            junction_defs[jid] = JunctionDef(
                jid=jid, pos=(x, y), shapes=(parts[4], parts[5]), init=init
            )
            junction_at[(x, y)] = jid
        elif parts[0] == "lever" and len(parts) == 4:
            x, y = _int_pair(parts[1], parts[2], "lever")
            levers[(x, y)] = parts[3]
        else:
            raise ParseError("bad tracks line: %r" % line)

    shutters = {}
    for line in shutter_lines:
        parts = line.split()
        if parts[0] != "shutter" or len(parts) != 4:
            raise ParseError("bad shutters line: %r" % line)
        x, y = _int_pair(parts[1], parts[2], "shutter")
        shutters[(x, y)] = parts[3]

    tiles = {}
    for y, row in enumerate(grid_lines):
        for x, glyph in enumerate(row):
            pos = (x, y)
            if glyph in _SIMPLE_GLYPHS:
                tiles[pos] = _SIMPLE_GLYPHS[glyph]
            elif glyph in _LEDGE_GLYPHS:
                tiles[pos] = Tile(TileKind.LEDGE, direction=_LEDGE_GLYPHS[glyph])
            elif glyph == "*":
                shape = curves.get(pos)
                if shape is None:
                    raise ParseError("curve glyph at %r has no shape line" % (pos,))
                tiles[pos] = Tile(TileKind.TRACK, shape=shape)
            elif glyph == "T":
                jid = junction_at.get(pos)
                if jid is None:
                    raise ParseError("junction glyph at %r has no def line" % (pos,))
                jd = junction_defs[jid]
                tiles[pos] = Tile(TileKind.TRACK, junction=jid, jshapes=jd.shapes)
            elif glyph == "!":
                jid = levers.get(pos)
                if jid is None:
                    raise ParseError("lever glyph at %r has no junction line" % (pos,))
                tiles[pos] = Tile(TileKind.LEVER, junction=jid)
            elif glyph == "H":
                pid = shutters.get(pos)
                if pid is None:
                    raise ParseError("shutter glyph at %r has no plate line" % (pos,))
                tiles[pos] = Tile(TileKind.SHUTTER_DOOR, plate_id=pid)
            else:
                raise ParseError("unknown glyph %r at %r" % (glyph, pos))

    heights = {}
    if height_lines:
        if len(height_lines) != height or any(len(r) != width for r in height_lines):
            raise ParseError("height grid must match tile grid size")
        for y, row in enumerate(height_lines):
            for x, ch in enumerate(row):
                if not ch.isdigit():
                    raise ParseError("height grid must be digits")
                if ch != "0":
                    heights[(x, y)] = int(ch)

    objects = {}
    plates = {}
    for line in object_lines:
        parts = line.split()
        verb = parts[0]
        if verb == "plate":
            if len(parts) != 4:
                raise ParseError("bad plate line: %r" % line)
            x, y = _int_pair(parts[2], parts[3], "plate")
            plates[parts[1]] = (x, y)
            continue
        obj, rest = None, parts[3:]
        x, y = _int_pair(parts[1], parts[2], verb)
        if verb == "pot":
            obj = Obj(ObjectKind.POT, has_key=rest == ["key"])
        elif verb == "statue":
            obj = Obj(ObjectKind.STATUE)
        elif verb == "orb":
            obj = Obj(ObjectKind.METAL_ORB, on_ledge=rest == ["ledge"])
        elif verb == "cart":
            obj = Obj(ObjectKind.MINECART)
        elif verb == "kodongo":
            if rest and rest[0] in DIRS:
                obj = Obj(ObjectKind.KODONGO, facing=rest[0])
            else:
                raise ParseError("kodongo needs a facing: %r" % line)
        elif verb == "diamond":
            obj = Obj(ObjectKind.DIAMOND_BLOCK)
        elif verb == "flashing":
            obj = Obj(ObjectKind.FLASHING_BLOCK)
        elif verb == "key":
            obj = Obj(ObjectKind.KEY_PICKUP)
        elif verb == "bombs":
            try:
                obj = Obj(ObjectKind.BOMB_PICKUP, count=int(rest[0]))
            except (IndexError, ValueError):
                raise ParseError("bombs needs a count: %r" % line) from None
        else:
            raise ParseError("unknown object %r" % verb)
        if (x, y) in objects:
            raise ParseError("two objects on tile (%d, %d)" % (x, y))
        objects[(x, y)] = obj

    parts = (link_args or "").split()
    if len(parts) != 3 or parts[2] not in DIRS:
        raise ParseError("[link] needs X Y DIR")
    lx, ly = _int_pair(parts[0], parts[1], "link")

    spec = DungeonSpec(
        width=width,
        height=height,
        tiles=tiles,
        heights=heights,
        objects=objects,
        link_start=(lx, ly),
        link_facing=parts[2],
        config=config,
        goal_condition=goal_condition,
        junction_defs=junction_defs,
        plates=plates,
    )
    spec.validate()

    if not allow_region:
        return spec
    ports = {}
    for line in port_lines:
        pp = line.split()
        if len(pp) != 5 or pp[0] != "port" or pp[4] not in DIRS:
            raise ParseError("bad port line: %r" % line)
        x, y = _int_pair(pp[2], pp[3], "port")
        if pp[1] in ports:
            raise ParseError("duplicate port %r" % pp[1])
        ports[pp[1]] = ((x, y), pp[4])
    return spec, ports, init_name


def parse_region(text: str) -> RegionSpec:
    spec, ports, init_name = parse_dungeon(text, allow_region=True)
    if not ports:
        raise ParseError("region file needs a [ports] section")
    region = RegionSpec(dungeon=spec, ports=ports, init_name=init_name)
    region.validate()
    return region


def _tile_glyph(tile: Tile) -> str:
    kind = tile.kind
    if kind is TileKind.LEDGE:
        return _LEDGE_FOR_DIR[tile.direction]
    if kind is TileKind.BARRIER:
        return "B" if tile.color == "B" else "R"
    if kind is TileKind.TRACK:
        if tile.junction is not None:
            return "T"
        return {"ew": "-", "ns": "|", "cross": "+"}.get(tile.shape, "*")
    if kind is TileKind.LEVER:
        return "!"
    if kind is TileKind.SHUTTER_DOOR:
        return "H"
    for glyph, t in _SIMPLE_GLYPHS.items():
        if t.kind is kind:
            return glyph
    raise ValueError("unserializable tile %r" % (tile,))


def _glyph_for(spec: DungeonSpec, pos) -> str:
    return _tile_glyph(spec.base_tile(pos))


_OBJECT_GLYPHS = {
    ObjectKind.POT: "P",
    ObjectKind.STATUE: "U",
    ObjectKind.METAL_ORB: "O",
    ObjectKind.MINECART: "M",
    ObjectKind.KODONGO: "K",
    ObjectKind.DIAMOND_BLOCK: "Q",
    ObjectKind.FLASHING_BLOCK: "F",
    ObjectKind.KEY_PICKUP: "k",
    ObjectKind.BOMB_PICKUP: "g",
}


def render_state(spec: DungeonSpec, state) -> str:
    """ASCII snapshot of a live game: agent and objects over effective tiles.

    Debugging aid for simulation traces; the tile legend matches the
    [grid] section, with @ for the agent and letters for objects.
    """
    rows = []
    for y in range(spec.height):
        row = []
        for x in range(spec.width):
            pos = (x, y)
            if pos == state.link_pos:
                row.append("@")
            elif pos in state.objects:
                row.append(_OBJECT_GLYPHS[state.objects[pos].kind])
            else:
                row.append(_tile_glyph(effective_tile(spec, state, pos)))
        rows.append("".join(row))
    return "\n".join(rows)


def serialize_dungeon(spec: DungeonSpec, *, region: RegionSpec | None = None) -> str:
    cfg = spec.config
    out = []
    out.append("[meta]")
    out.append("mechanics = %s" % ", ".join(sorted(cfg.mechanics)))
    out.append("hookshot_range = %d" % cfg.hookshot_range)
    out.append(
        "magnet_range = %s"
        % ("inf" if cfg.magnet_range is None else cfg.magnet_range)
    )
    out.append("bomb_range = %d" % cfg.bomb_range)
    out.append("minecart_bounce = %s" % ("true" if cfg.minecart_bounce else "false"))
    out.append("goal_condition = %s" % spec.goal_condition)
    out.append("")
    out.append("[grid]")
    for y in range(spec.height):
        out.append("".join(_glyph_for(spec, (x, y)) for x in range(spec.width)))
    if spec.heights:
        out.append("")
        out.append("[heights]")
        for y in range(spec.height):
            out.append(
                "".join(str(spec.height_at((x, y))) for x in range(spec.width))
            )

    track_lines = []
    shutter_lines = []
    for pos in sorted(spec.tiles, key=lambda p: (p[1], p[0])):
        tile = spec.tiles[pos]
        if tile.kind is TileKind.TRACK and tile.junction is None:
            if tile.shape in CURVE_SHAPES:
                track_lines.append("curve %d %d %s" % (pos[0], pos[1], tile.shape))
        elif tile.kind is TileKind.LEVER:
            track_lines.append("lever %d %d %s" % (pos[0], pos[1], tile.junction))
        elif tile.kind is TileKind.SHUTTER_DOOR:
            shutter_lines.append("shutter %d %d %s" % (pos[0], pos[1], tile.plate_id))
    for jid in sorted(spec.junction_defs):
        jd = spec.junction_defs[jid]
        track_lines.append(
            "junction %s %d %d %s %s %d"
            % (jid, jd.pos[0], jd.pos[1], jd.shapes[0], jd.shapes[1], jd.init)
        )
    if track_lines:
        out.append("")
        out.append("[tracks]")
        out.extend(sorted(track_lines))
    if shutter_lines:
        out.append("")
        out.append("[shutters]")
        out.extend(shutter_lines)

    obj_lines = []
    for pid in sorted(spec.plates):
        pos = spec.plates[pid]
        obj_lines.append("plate %s %d %d" % (pid, pos[0], pos[1]))
    for pos in sorted(spec.objects, key=lambda p: (p[1], p[0])):
        obj = spec.objects[pos]
        x, y = pos
        if obj.kind is ObjectKind.POT:
            obj_lines.append("pot %d %d%s" % (x, y, " key" if obj.has_key else ""))
        elif obj.kind is ObjectKind.STATUE:
            obj_lines.append("statue %d %d" % (x, y))
        elif obj.kind is ObjectKind.METAL_ORB:
            obj_lines.append("orb %d %d%s" % (x, y, " ledge" if obj.on_ledge else ""))
        elif obj.kind is ObjectKind.MINECART:
            obj_lines.append("cart %d %d" % (x, y))
        elif obj.kind is ObjectKind.KODONGO:
            obj_lines.append("kodongo %d %d %s" % (x, y, obj.facing))
        elif obj.kind is ObjectKind.DIAMOND_BLOCK:
            obj_lines.append("diamond %d %d" % (x, y))
        elif obj.kind is ObjectKind.FLASHING_BLOCK:
            obj_lines.append("flashing %d %d" % (x, y))
        elif obj.kind is ObjectKind.KEY_PICKUP:
            obj_lines.append("key %d %d" % (x, y))
        elif obj.kind is ObjectKind.BOMB_PICKUP:
            obj_lines.append("bombs %d %d %d" % (x, y, obj.count))
    if obj_lines:
        out.append("")
        out.append("[objects]")
        out.extend(obj_lines)

    out.append("")
    out.append(
        "[link] %d %d %s" % (spec.link_start[0], spec.link_start[1], spec.link_facing)
    )
    if region is not None:
        out.append("")
        out.append("[ports]")
        for name in sorted(region.ports):
            (x, y), d = region.ports[name]
            out.append("port %s %d %d %s" % (name, x, y, d))
        if region.init_name is not None:
            out.append("")
            out.append("[init] %s" % region.init_name)
    out.append("")
    return "\n".join(out)


def serialize_region(region: RegionSpec) -> str:
    return serialize_dungeon(region.dungeon, region=region)


_PLAN_VERBS = (
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


def parse_plan(text: str) -> list:
    actions = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        verb = parts[0]
        try:
            if verb in _PLAN_VERBS:
                if len(parts) != 2 or parts[1] not in DIRS:
                    raise ParseError("%s needs a direction" % verb)
                actions.append(Action(verb, parts[1]))
            elif verb == "magnet":
                if len(parts) != 3 or parts[1] not in ("repel", "attract") \
                        or parts[2] not in DIRS:
                    raise ParseError("magnet needs polarity and direction")
                actions.append(Action("magnet", parts[2], polarity=parts[1]))
            elif verb == "lever":
                if len(parts) == 1:
                    actions.append(Action("lever"))
                elif len(parts) == 3:
                    x, y = _int_pair(parts[1], parts[2], "lever")
                    actions.append(Action("lever", target=(x, y)))
                else:
                    raise ParseError("lever takes no args or X Y")
            else:
                raise ParseError("unknown action %r" % verb)
        except ParseError as exc:
            raise ParseError("line %d: %s" % (lineno, exc)) from None
    return actions


def serialize_plan(actions) -> str:
    return "\n".join(a.describe() for a in actions) + ("\n" if actions else "")
