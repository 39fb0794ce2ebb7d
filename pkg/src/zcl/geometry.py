"""Grid geometry helpers.

Positions are (x, y) tuples with x growing east and y growing south,
matching text-grid row order. Directions are single-letter strings.
"""

from __future__ import annotations

DIRS = ("N", "E", "S", "W")

DELTA = {
    "N": (0, -1),
    "E": (1, 0),
    "S": (0, 1),
    "W": (-1, 0),
}

OPPOSITE = {"N": "S", "S": "N", "E": "W", "W": "E"}

Pos = tuple


def step_pos(pos, direction):
    dx, dy = DELTA[direction]
    return (pos[0] + dx, pos[1] + dy)


def add(pos, other):
    return (pos[0] + other[0], pos[1] + other[1])


def manhattan(a, b):
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def neighbors4(pos):
    return [step_pos(pos, d) for d in DIRS]


def direction_between(a, b):
    """Direction from a to b when they are axis-aligned, else None."""
    dx = b[0] - a[0]
    dy = b[1] - a[1]
    if dx == 0 and dy == 0:
        return None
    if dx != 0 and dy != 0:
        return None
    if dx > 0:
        return "E"
    if dx < 0:
        return "W"
    if dy > 0:
        return "S"
    return "N"


def ray(pos, direction, length):
    """Tiles strictly ahead of pos in the given direction, nearest first."""
    out = []
    cur = pos
    for _ in range(length):
        cur = step_pos(cur, direction)
        out.append(cur)
    return out
