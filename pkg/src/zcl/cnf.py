"""CNF formulas: DIMACS round-trip, exhaustive oracle, random generator."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

ORACLE_VAR_LIMIT = 20


class CnfError(ValueError):
    """The formula text or structure is malformed."""


class OracleLimit(Exception):
    """The formula is too large for the exhaustive oracle."""


@dataclass(frozen=True)
class CnfInstance:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def validate(self) -> None:
        if self.num_vars < 0:
            raise CnfError("negative variable count")
        for clause in self.clauses:
            if not clause:
                raise CnfError("empty clause")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise CnfError(f"literal {lit} out of range")


def evaluate(f: CnfInstance, assignment: dict[int, bool]) -> bool:
    for clause in f.clauses:
        if not any(
            assignment[abs(lit)] if lit > 0 else not assignment[abs(lit)]
            for lit in clause
        ):
            return False
    return True


def sat_witness(
    f: CnfInstance, limit: int = ORACLE_VAR_LIMIT
) -> dict[int, bool] | None:
    """A satisfying assignment from exhaustive enumeration, or None."""
    f.validate()
    if f.num_vars > limit:
        raise OracleLimit(f"{f.num_vars} variables exceeds the limit of {limit}")
    for bits in itertools.product((False, True), repeat=f.num_vars):
        assignment = {i + 1: bits[i] for i in range(f.num_vars)}
        if evaluate(f, assignment):
            return assignment
    return None


def oracle_sat(f: CnfInstance, limit: int = ORACLE_VAR_LIMIT) -> bool:
    return sat_witness(f, limit) is not None


def oracle_sat_dpll(f: CnfInstance) -> bool:
    """Independent recursive check with unit propagation."""
    f.validate()

    def solve(clauses: tuple[tuple[int, ...], ...]) -> bool:
        clauses = tuple(c for c in clauses if c)
        while True:
            unit = next((c[0] for c in clauses if len(c) == 1), None)
            if unit is None:
                break
            next_clauses = []
            for c in clauses:
                if unit in c:
                    continue
                reduced = tuple(lit for lit in c if lit != -unit)
                if not reduced:
                    return False
                next_clauses.append(reduced)
            clauses = tuple(next_clauses)
        if not clauses:
            return True
        pick = clauses[0][0]
        return solve(clauses + ((pick,),)) or solve(clauses + ((-pick,),))

    return solve(f.clauses)


def gen_cnf(seed: int, num_vars: int, num_clauses: int, width: int = 3) -> CnfInstance:
    """Deterministic random formula with distinct variables per clause."""
    if num_vars < 1:
        raise CnfError("need at least one variable")
    if width > num_vars:
        width = num_vars
    rng = random.Random(repr(("cnf", seed, num_vars, num_clauses)))
    clauses = []
    for _ in range(num_clauses):
        chosen = rng.sample(range(1, num_vars + 1), width)
        clauses.append(
            tuple(v if rng.random() < 0.5 else -v for v in sorted(chosen))
        )
    f = CnfInstance(num_vars, tuple(clauses))
    f.validate()
    return f


# ---------------------------------------------------------------------------
# DIMACS text format.


def parse_dimacs(text: str) -> CnfInstance:
    num_vars: int | None = None
    declared_clauses: int | None = None
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"line {lineno}: malformed problem line")
            try:
                num_vars, declared_clauses = int(parts[2]), int(parts[3])
            except ValueError as exc:
                raise CnfError(f"line {lineno}: bad problem counts") from exc
            continue
        try:
            lits = [int(tok) for tok in line.split()]
        except ValueError as exc:
            raise CnfError(f"line {lineno}: bad literal") from exc
        for lit in lits:
            if lit == 0:
                if not pending:
                    raise CnfError(f"line {lineno}: empty clause")
                clauses.append(tuple(pending))
                pending.clear()
            else:
                pending.append(lit)
    if pending:
        raise CnfError("unterminated clause")
    if num_vars is None:
        raise CnfError("missing problem line")
    if declared_clauses is not None and declared_clauses != len(clauses):
        raise CnfError(
            f"problem line declares {declared_clauses} clauses, found {len(clauses)}"
        )
    f = CnfInstance(num_vars, tuple(clauses))
    f.validate()
    return f


def serialize_dimacs(f: CnfInstance) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    for clause in f.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"
