"""Shared test helpers: compact ASCII dungeon construction."""

from __future__ import annotations

from zcl.dungeon_text import parse_dungeon


def dungeon_text(
    grid,
    mechanics="",
    *,
    heights=None,
    objects=(),
    tracks=(),
    shutters=(),
    link=None,
    facing="S",
    goal_condition=None,
    **meta,
):
    """Assemble dungeon file text from pieces.

    grid is a list of glyph rows; a single '@' cell marks the agent start
    and is replaced by floor.  objects and tracks are raw section lines.
    """
    rows = [list(r) for r in grid]
    for y, row in enumerate(rows):
        for x, ch in enumerate(row):
            if ch == "@":
                link = (x, y)
                row[x] = "."
    if link is None:
        raise ValueError("no agent start given")

    lines = ["[meta]"]
    if mechanics:
        lines.append("mechanics = %s" % mechanics)
    for key, value in meta.items():
        lines.append("%s = %s" % (key, value))
    if goal_condition is not None:
        lines.append("goal_condition = %s" % goal_condition)
    lines += ["", "[grid]"]
    lines += ["".join(row) for row in rows]
    if heights is not None:
        lines += ["", "[heights]"]
        lines += list(heights)
    if tracks:
        lines += ["", "[tracks]"]
        lines += list(tracks)
    if shutters:
        lines += ["", "[shutters]"]
        lines += list(shutters)
    if objects:
        lines += ["", "[objects]"]
        lines += list(objects)
    lines += ["", "[link] %d %d %s" % (link[0], link[1], facing), ""]
    return "\n".join(lines)


def make_dungeon(grid, mechanics="", **kwargs):
    return parse_dungeon(dungeon_text(grid, mechanics, **kwargs))


def platform_visits(spec, plan, mode):
    """Distinct-platform sequence the agent occupies while running a plan."""
    from zcl.dungeon import initial_state
    from zcl.engine import step
    from zcl.solvers import build_colored_graph

    graph = build_colored_graph(spec, mode)
    state = initial_state(spec)
    seq = [graph.platform_of[state.link_pos]]
    for act in plan:
        state = step(spec, state, act)
        pid = graph.platform_of.get(state.link_pos)
        if pid is not None and pid != seq[-1]:
            seq.append(pid)
    return seq
