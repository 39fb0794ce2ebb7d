"""Grid graphs on the integer lattice: instances, oracles, generators.

A grid graph is an induced subgraph of the unit lattice: vertices are
lattice points and every unit-distance pair of vertices is an edge.  The
Hamiltonicity oracles are exhaustive backtracking searches, kept honest by
a hard vertex-count limit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

Point = tuple[int, int]

ORACLE_VERTEX_LIMIT = 12

_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))


class GridGraphError(ValueError):
    """The instance text or structure is malformed."""


class OracleLimit(Exception):
    """The instance is too large for the exhaustive oracle."""


def _norm_edge(a: Point, b: Point) -> tuple[Point, Point]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class GridGraphInstance:
    """Lattice vertices with explicit unit edges and two marked endpoints."""

    vertices: tuple[Point, ...]
    edges: tuple[tuple[Point, Point], ...]
    s: Point
    t: Point

    def validate(self) -> None:
        vs = set(self.vertices)
        if not vs:
            raise GridGraphError("no vertices")
        if len(vs) != len(self.vertices):
            raise GridGraphError("duplicate vertices")
        seen = set()
        for a, b in self.edges:
            if a not in vs or b not in vs:
                raise GridGraphError(f"edge {a}-{b} uses unknown vertex")
            if abs(a[0] - b[0]) + abs(a[1] - b[1]) != 1:
                raise GridGraphError(f"edge {a}-{b} is not unit length")
            key = _norm_edge(a, b)
            if key in seen:
                raise GridGraphError(f"duplicate edge {a}-{b}")
            seen.add(key)
        for name, v in (("s", self.s), ("t", self.t)):
            if v not in vs:
                raise GridGraphError(f"endpoint {name}={v} is not a vertex")

    @property
    def max_degree3(self) -> bool:
        adj = adjacency(self)
        return all(len(ns) <= 3 for ns in adj.values())

    @property
    def boundary_endpoints(self) -> bool:
        hull_pts = _hull_boundary_vertices(self.vertices)
        return self.s in hull_pts and self.t in hull_pts

    @property
    def induced(self) -> bool:
        """Every unit-distance vertex pair is present as an edge."""
        vs = set(self.vertices)
        have = {_norm_edge(a, b) for a, b in self.edges}
        for v in self.vertices:
            for dx, dy in ((1, 0), (0, 1)):
                w = (v[0] + dx, v[1] + dy)
                if w in vs and _norm_edge(v, w) not in have:
                    return False
        return True


def adjacency(g: GridGraphInstance) -> dict[Point, list[Point]]:
    adj: dict[Point, list[Point]] = {v: [] for v in g.vertices}
    for a, b in g.edges:
        adj[a].append(b)
        adj[b].append(a)
    for v in adj:
        adj[v].sort()
    return adj


def is_connected(g: GridGraphInstance) -> bool:
    adj = adjacency(g)
    seen = {g.vertices[0]}
    stack = [g.vertices[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(g.vertices)


def induced_instance(vertices, s: Point, t: Point) -> GridGraphInstance:
    """Build the induced grid graph on a vertex set."""
    vs = sorted(set(vertices))
    vset = set(vs)
    edges = []
    for v in vs:
        for dx, dy in ((1, 0), (0, 1)):
            w = (v[0] + dx, v[1] + dy)
            if w in vset:
                edges.append((v, w))
    g = GridGraphInstance(tuple(vs), tuple(sorted(edges)), s, t)
    g.validate()
    return g


# ---------------------------------------------------------------------------
# Boundary face membership via the convex hull.


def _cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _convex_hull(points) -> list[Point]:
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    if _cross(a, b, p) != 0:
        return False
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def _hull_boundary_vertices(vertices) -> set[Point]:
    """Vertices lying on the convex hull outline (corners or hull edges)."""
    pts = list(vertices)
    hull = _convex_hull(pts)
    if len(hull) == 1:
        return {hull[0]}
    out = set()
    segs = (
        [(hull[0], hull[1])]
        if len(hull) == 2
        else [(hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull))]
    )
    for v in pts:
        if any(_on_segment(v, a, b) for a, b in segs):
            out.add(v)
    return out


def boundary_vertices(g: GridGraphInstance) -> list[Point]:
    return sorted(_hull_boundary_vertices(g.vertices))


# ---------------------------------------------------------------------------
# Hamiltonicity oracles.

ORACLE_MODES = ("path", "cycle", "path-from-start")


def hampath_witness(
    g: GridGraphInstance, mode: str = "path", limit: int = ORACLE_VERTEX_LIMIT
) -> list[Point] | None:
    """A Hamiltonian vertex order for the requested mode, or None.

    path:             starts at s, ends at t, covers every vertex once.
    path-from-start:  starts at s, ends anywhere.
    cycle:            covers every vertex once and returns to the start
                      (endpoints ignored; a single vertex counts).
    """
    if mode not in ORACLE_MODES:
        raise GridGraphError(f"unknown oracle mode {mode!r}")
    n = len(g.vertices)
    if n > limit:
        raise OracleLimit(f"{n} vertices exceeds the oracle limit of {limit}")
    adj = adjacency(g)

    if n == 1:
        only = g.vertices[0]
        if mode == "path" and g.s != g.t:
            return None
        return [only]

    if mode == "cycle":
        start = g.vertices[0]
        want_end = set(adj[start])
    else:
        start = g.s
        want_end = {g.t} if mode == "path" else set(g.vertices)

    visited = {start}
    order = [start]

    def extend() -> bool:
        if len(order) == n:
            return order[-1] in want_end
        cur = order[-1]
        for nxt in adj[cur]:
            if nxt in visited:
                continue
            visited.add(nxt)
            order.append(nxt)
            if extend():
                return True
            order.pop()
            visited.remove(nxt)
        return False

    if extend():
        return order
    return None


def oracle_hampath(
    g: GridGraphInstance, mode: str = "path", limit: int = ORACLE_VERTEX_LIMIT
) -> bool:
    return hampath_witness(g, mode, limit) is not None


# ---------------------------------------------------------------------------
# Generators.


def _grow_lattice(rng: random.Random, n: int, degree_cap: int | None) -> list[Point]:
    """Random connected lattice growth, optionally capping induced degree."""
    cells = {(0, 0)}
    while len(cells) < n:
        frontier = set()
        for x, y in cells:
            for dx, dy in _STEPS:
                c = (x + dx, y + dy)
                if c not in cells:
                    frontier.add(c)
        candidates = sorted(frontier)
        rng.shuffle(candidates)
        placed = False
        for c in candidates:
            neighbors = [
                (c[0] + dx, c[1] + dy)
                for dx, dy in _STEPS
                if (c[0] + dx, c[1] + dy) in cells
            ]
            if degree_cap is not None:
                if len(neighbors) > degree_cap:
                    continue
                degs = {
                    v: sum(
                        (v[0] + dx, v[1] + dy) in cells for dx, dy in _STEPS
                    )
                    for v in neighbors
                }
                if any(d >= degree_cap for d in degs.values()):
                    continue
            cells.add(c)
            placed = True
            break
        if not placed:
            raise RuntimeError("growth got stuck")
    return sorted(cells)


def gen_grid_graph(seed: int, n: int) -> GridGraphInstance:
    """Deterministic random instance with degree <= 3 and hull endpoints."""
    if n < 1:
        raise GridGraphError("need at least one vertex")
    for attempt in range(64):
        rng = random.Random(repr((seed, n, attempt)))
        try:
            cells = _grow_lattice(rng, n, degree_cap=3)
        except RuntimeError:
            continue
        hull = sorted(_hull_boundary_vertices(cells))
        if n == 1:
            s = t = cells[0]
        else:
            if len(hull) < 2:
                continue
            s, t = rng.sample(hull, 2)
        g = induced_instance(cells, s, t)
        if g.max_degree3 and g.boundary_endpoints:
            return g
    raise RuntimeError(f"no admissible instance for seed={seed} n={n}")


def gen_connected_grid_graph(seed: int, n: int) -> GridGraphInstance:
    """Deterministic random connected instance with no degree cap."""
    if n < 1:
        raise GridGraphError("need at least one vertex")
    rng = random.Random(repr(("free", seed, n)))
    cells = _grow_lattice(rng, n, degree_cap=None)
    anchor = cells[0]
    return induced_instance(cells, anchor, anchor)


# ---------------------------------------------------------------------------
# Text format: `v X Y`, `e X1 Y1 X2 Y2`, `s X Y`, `t X Y`.


def parse_grid_graph(text: str) -> GridGraphInstance:
    vertices: list[Point] = []
    edges: list[tuple[Point, Point]] = []
    s: Point | None = None
    t: Point | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "v" and len(parts) == 3:
                vertices.append((int(parts[1]), int(parts[2])))
            elif parts[0] == "e" and len(parts) == 5:
                a = (int(parts[1]), int(parts[2]))
                b = (int(parts[3]), int(parts[4]))
                edges.append(_norm_edge(a, b))
            elif parts[0] == "s" and len(parts) == 3:
                s = (int(parts[1]), int(parts[2]))
            elif parts[0] == "t" and len(parts) == 3:
                t = (int(parts[1]), int(parts[2]))
            else:
                raise GridGraphError(f"line {lineno}: unknown directive {parts[0]!r}")
        except ValueError as exc:
            raise GridGraphError(f"line {lineno}: bad integer") from exc
    if s is None or t is None:
        raise GridGraphError("missing s or t line")
    g = GridGraphInstance(
        tuple(sorted(set(vertices))), tuple(sorted(set(edges))), s, t
    )
    g.validate()
    return g


def serialize_grid_graph(g: GridGraphInstance) -> str:
    lines = [f"v {x} {y}" for x, y in sorted(g.vertices)]
    lines += [
        f"e {a[0]} {a[1]} {b[0]} {b[1]}"
        for a, b in sorted(_norm_edge(a, b) for a, b in g.edges)
    ]
    lines.append(f"s {g.s[0]} {g.s[1]}")
    lines.append(f"t {g.t[0]} {g.t[1]}")
    return "\n".join(lines) + "\n"
