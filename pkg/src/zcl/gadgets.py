"""Abstract gadgets and gadget networks.

A gadget is a finite-state device with named ports.  Its transition table
lists tuples (state, port_in, port_out, state'): an agent entering at
port_in while the gadget is in state may leave at port_out, changing the
state to state'.  Networks wire gadget ports and plain junction nodes
together with undirected links.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .dungeon import DungeonError


@dataclass(frozen=True)
class GadgetType:
    name: str
    states: tuple[str, ...]
    init_state: str
    ports: tuple[str, ...]
    transitions: frozenset

    def validate(self) -> None:
        if self.init_state not in self.states:
            raise DungeonError(f"{self.name}: unknown init state")
        for (s, p, q, s2) in self.transitions:
            if s not in self.states or s2 not in self.states:
                raise DungeonError(f"{self.name}: transition uses unknown state")
            if p not in self.ports or q not in self.ports:
                raise DungeonError(f"{self.name}: transition uses unknown port")


def _door_like(name: str, with_close: bool, traverse_closes: bool) -> GadgetType:
    states = ("closed", "open")
    ports = ["Oin", "Oout", "Tin", "Tout"]
    trans = set()
    for s in states:
        trans |= {
            (s, "Oin", "Oout", "open"),
            (s, "Oin", "Oout", s),
            (s, "Oout", "Oin", "open"),
            (s, "Oout", "Oin", s),
            (s, "Oin", "Oin", "open"),
            (s, "Oout", "Oout", "open"),
        }
    if traverse_closes:
        trans.add(("open", "Tin", "Tout", "closed"))
    else:
        trans.add(("open", "Tin", "Tout", "open"))
        trans.add(("open", "Tout", "Tin", "open"))
    if with_close:
        ports += ["Cin", "Cout"]
        for s in states:
            trans.add((s, "Cin", "Cout", "closed"))
    return GadgetType(name, states, "closed", tuple(ports), frozenset(trans))


DOOR = _door_like("Door", with_close=True, traverse_closes=False)
SELF_CLOSING_DOOR = _door_like("SelfClosingDoor", with_close=False, traverse_closes=True)

ONE_TOGGLE = GadgetType(
    "OneToggle",
    states=("fwd", "rev"),
    init_state="fwd",
    ports=("A", "B"),
    transitions=frozenset({("fwd", "A", "B", "rev"), ("rev", "B", "A", "fwd")}),
)

DIODE = GadgetType(
    "Diode",
    states=("on",),
    init_state="on",
    ports=("A", "B"),
    transitions=frozenset({("on", "A", "B", "on")}),
)

TWO_TO_ONE_TOGGLE = GadgetType(
    "TwoToOneToggle",
    states=("up", "Ldown", "Rdown"),
    init_state="up",
    ports=("L1", "R1", "M"),
    transitions=frozenset(
        {
            ("up", "L1", "M", "Ldown"),
            ("up", "R1", "M", "Rdown"),
            ("Ldown", "M", "L1", "up"),
            ("Rdown", "M", "R1", "up"),
        }
    ),
)

LOCKING_2_TOGGLE = GadgetType(
    "Locking2Toggle",
    states=("up", "Ldown", "Rdown"),
    init_state="up",
    ports=("L1", "L2", "R1", "R2"),
    transitions=frozenset(
        {
            ("up", "L1", "L2", "Ldown"),
            ("Ldown", "L2", "L1", "up"),
            ("up", "R1", "R2", "Rdown"),
            ("Rdown", "R2", "R1", "up"),
        }
    ),
)


def _switch_two_doors() -> GadgetType:
    states = ("1open", "2open")
    swap = {"1open": "2open", "2open": "1open"}
    trans = set()
    for s in states:
        trans |= {
            (s, "Sin", "Sout", s),
            (s, "Sin", "Sout", swap[s]),
            (s, "Sout", "Sin", s),
            (s, "Sout", "Sin", swap[s]),
            (s, "Sin", "Sin", swap[s]),
            (s, "Sout", "Sout", swap[s]),
        }
    trans |= {
        ("1open", "D1in", "D1out", "1open"),
        ("1open", "D1out", "D1in", "1open"),
        ("2open", "D2in", "D2out", "2open"),
        ("2open", "D2out", "D2in", "2open"),
    }
    return GadgetType(
        "OneSwitchTwoDoors",
        states,
        "1open",
        ("Sin", "Sout", "D1in", "D1out", "D2in", "D2out"),
        frozenset(trans),
    )


ONE_SWITCH_TWO_DOORS = _switch_two_doors()

CROSSOVER = GadgetType(
    "Crossover",
    states=("on",),
    init_state="on",
    ports=("N", "S", "E", "W"),
    transitions=frozenset(
        {
            ("on", "N", "S", "on"),
            ("on", "S", "N", "on"),
            ("on", "E", "W", "on"),
            ("on", "W", "E", "on"),
        }
    ),
)

GADGET_TYPES: dict[str, GadgetType] = {
    g.name: g
    for g in (
        DOOR,
        SELF_CLOSING_DOOR,
        ONE_TOGGLE,
        DIODE,
        TWO_TO_ONE_TOGGLE,
        LOCKING_2_TOGGLE,
        ONE_SWITCH_TWO_DOORS,
        CROSSOVER,
    )
}
for _g in GADGET_TYPES.values():
    _g.validate()


# ---------------------------------------------------------------------------
# Networks.

Endpoint = tuple  # ("node", name) or ("port", gadget_id, port_name)


@dataclass
class NetworkSpec:
    gadgets: dict[str, tuple[str, str]] = field(default_factory=dict)
    nodes: list[str] = field(default_factory=list)
    links: list[tuple[Endpoint, Endpoint]] = field(default_factory=list)
    start: str | None = None
    goal: str | None = None

    def validate(self) -> None:
        names = set(self.nodes)
        if len(names) != len(self.nodes):
            raise DungeonError("duplicate node names")
        for gid, (kind, state) in self.gadgets.items():
            if kind not in GADGET_TYPES:
                raise DungeonError(f"unknown gadget kind {kind!r}")
            if state not in GADGET_TYPES[kind].states:
                raise DungeonError(f"gadget {gid}: unknown state {state!r}")
            if gid in names:
                raise DungeonError(f"name {gid!r} used for node and gadget")
        used_ports = set()
        for a, b in self.links:
            for ep in (a, b):
                if ep[0] == "node":
                    if ep[1] not in names:
                        raise DungeonError(f"link references unknown node {ep[1]!r}")
                else:
                    _tag, gid, port = ep
                    if gid not in self.gadgets:
                        raise DungeonError(f"link references unknown gadget {gid!r}")
                    kind = self.gadgets[gid][0]
                    if port not in GADGET_TYPES[kind].ports:
                        raise DungeonError(f"gadget {gid} has no port {port!r}")
                    if (gid, port) in used_ports:
                        raise DungeonError(f"port {gid}.{port} linked twice")
                    used_ports.add((gid, port))
        if self.start is None or self.start not in names:
            raise DungeonError("network needs a start node")
        if self.goal is None or self.goal not in names:
            raise DungeonError("network needs a goal node")


def parse_network(text: str) -> NetworkSpec:
    net = NetworkSpec()

    def endpoint(token: str) -> Endpoint:
        if "." in token:
            gid, port = token.split(".", 1)
            return ("port", gid, port)
        return ("node", token)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "gadget":
                gid, kind = parts[1], parts[2]
                state = GADGET_TYPES[kind].init_state if kind in GADGET_TYPES else ""
                for extra in parts[3:]:
                    if extra.startswith("state="):
                        state = extra[len("state="):]
                net.gadgets[gid] = (kind, state)
            elif parts[0] == "node":
                net.nodes.append(parts[1])
            elif parts[0] == "link":
                net.links.append((endpoint(parts[1]), endpoint(parts[2])))
            elif parts[0] == "start":
                net.start = parts[1]
            elif parts[0] == "goal":
                net.goal = parts[1]
            else:
                raise DungeonError(f"unknown directive {parts[0]!r}")
        except IndexError as exc:
            raise DungeonError(f"line {lineno}: malformed directive") from exc
    net.validate()
    return net


def serialize_network(net: NetworkSpec) -> str:
    def ep_str(ep: Endpoint) -> str:
        if ep[0] == "node":
            return ep[1]
        return f"{ep[1]}.{ep[2]}"

    lines = []
    for gid in sorted(net.gadgets):
        kind, state = net.gadgets[gid]
        lines.append(f"gadget {gid} {kind} state={state}")
    for name in net.nodes:
        lines.append(f"node {name}")
    for a, b in net.links:
        lines.append(f"link {ep_str(a)} {ep_str(b)}")
    lines.append(f"start {net.start}")
    lines.append(f"goal {net.goal}")
    return "\n".join(lines) + "\n"


def solve_network(net: NetworkSpec, max_states: int = 2_000_000):
    """Breadth-first search over (position, gadget states).

    Returns (status, plan) where the plan lists visited endpoints and
    gadget transitions in order.
    """
    from .solvers import LIMIT, SOLVABLE, UNSOLVABLE, Verdict

    gids = sorted(net.gadgets)
    gidx = {g: i for i, g in enumerate(gids)}
    init_states = tuple(net.gadgets[g][1] for g in gids)

    adjacency: dict[Endpoint, list[Endpoint]] = {}
    for a, b in net.links:
        adjacency.setdefault(a, []).append(b)
        adjacency.setdefault(b, []).append(a)

    tables = {}
    for g in gids:
        kind = net.gadgets[g][0]
        gt = GADGET_TYPES[kind]
        per_port: dict[str, list] = {}
        for (s, p, q, s2) in gt.transitions:
            per_port.setdefault(p, []).append((s, q, s2))
        tables[g] = per_port

    start: tuple[Endpoint, tuple] = (("node", net.start), init_states)
    goal_pos: Endpoint = ("node", net.goal)
    came: dict[tuple, tuple] = {start: None}
    queue = deque([start])
    hit = start if start[0] == goal_pos else None
    while queue and hit is None:
        node = queue.popleft()
        if len(came) > max_states:
            return Verdict(LIMIT, states_explored=len(came))
        pos, states = node
        succ: list[tuple[tuple, str]] = []
        for nxt in adjacency.get(pos, []):
            succ.append(((nxt, states), f"walk to {_ep_name(nxt)}"))
        if pos[0] == "port":
            _tag, gid, port = pos
            cur = states[gidx[gid]]
            for (s, q, s2) in tables[gid].get(port, []):
                if s != cur:
                    continue
                new_states = list(states)
                new_states[gidx[gid]] = s2
                succ.append(
                    (
                        (("port", gid, q), tuple(new_states)),
                        f"traverse {gid} {port}->{q} [{cur}->{s2}]",
                    )
                )
        for nxt_node, label in succ:
            if nxt_node in came:
                continue
            came[nxt_node] = (node, label)
            if nxt_node[0] == goal_pos:
                hit = nxt_node
                break
            queue.append(nxt_node)

    if hit is None:
        return Verdict(UNSOLVABLE, states_explored=len(came))
    moves = []
    node = hit
    while came[node] is not None:
        node, label = came[node]
        moves.append(label)
    moves.reverse()
    verdict = Verdict(SOLVABLE, states_explored=len(came))
    verdict.moves = moves
    return verdict


def _ep_name(ep: Endpoint) -> str:
    return ep[1] if ep[0] == "node" else f"{ep[1]}.{ep[2]}"
