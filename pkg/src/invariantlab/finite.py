"""Exact finite market systems: states, one-step transitions, and the induced orders.

A finite market system is an ordered list of pairwise-distinct state vectors with
rational coordinates plus a set of directed index pairs (one transaction each).
Everything here is exact arithmetic; floating-point systems live in the catalog
and only enter this module after discretization snaps them to rationals.

The derived objects are the reflexive-transitive reachability relation, its
mutual-reachability equivalence classes with the acyclic order between them,
and the structural predicates built on top (completeness, reversibility,
giftability).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Iterator, Sequence

from .errors import SpecError

if TYPE_CHECKING:  # pragma: no cover
    from .dominance import DominanceOracle

State = tuple[Fraction, ...]


def as_fraction(value) -> Fraction:
    """Convert a JSON-ish number to an exact Fraction.

    Floats go through their shortest repr, so a literal 0.1 in an input file
    means exactly 1/10 rather than the nearest binary double. Strings may be
    decimal ("1.7"), rational ("17/10"), or scientific ("1e-3").
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise SpecError(f"booleans are not valid coordinates: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"cannot parse coordinate {value!r}") from exc
    raise SpecError(f"cannot parse coordinate {value!r}")


def fraction_to_json(q: Fraction):
    """Emit a Fraction as an int, an exact decimal string, or a "p/q" string."""
    if q.denominator == 1:
        return int(q)
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den == 1:
        shift = max(twos, fives)
        scaled = q.numerator * 10**shift // q.denominator
        sign = "-" if scaled < 0 else ""
        digits = str(abs(scaled)).rjust(shift + 1, "0")
        return f"{sign}{digits[:-shift]}.{digits[-shift:]}"
    return f"{q.numerator}/{q.denominator}"


def _parse_state(raw: Sequence) -> State:
    return tuple(as_fraction(v) for v in raw)


@dataclass(frozen=True)
class FiniteMarketSystem:
    """An explicit state list plus a one-step transition relation on indices."""

    states: tuple[State, ...]
    transitions: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.states:
            raise SpecError("a market system needs at least one state")
        dim = len(self.states[0])
        if dim < 1:
            raise SpecError("state dimension must be >= 1")
        seen = set()
        for s in self.states:
            if len(s) != dim:
                raise SpecError("all states must share one dimension")
            if s in seen:
                raise SpecError(f"duplicate state {s}")
            seen.add(s)
        n = len(self.states)
        for i, j in self.transitions:
            if not (0 <= i < n and 0 <= j < n):
                raise SpecError(f"transition ({i}, {j}) out of range")

    @classmethod
    def build(cls, states: Iterable[Sequence], transitions: Iterable[Sequence[int]]) -> "FiniteMarketSystem":
        sts = tuple(_parse_state(s) for s in states)
        edges = tuple(sorted({(int(i), int(j)) for i, j in transitions}))
        return cls(sts, edges)

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def dimension(self) -> int:
        return len(self.states[0])

    def index_of(self, state: Sequence) -> int:
        target = _parse_state(state)
        for i, s in enumerate(self.states):
            if s == target:
                return i
        raise KeyError(f"state {state} not in system")

    def successors(self, i: int) -> list[int]:
        return sorted(j for a, j in self.transitions if a == i)

    def to_json(self) -> dict:
        return {
            "states": [[fraction_to_json(v) for v in s] for s in self.states],
            "transitions": [list(t) for t in self.transitions],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteMarketSystem":
        if not isinstance(obj, dict) or "states" not in obj:
            raise SpecError("finite-system JSON must have 'states' and 'transitions'")
        return cls.build(obj["states"], obj.get("transitions", []))

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "FiniteMarketSystem":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


@dataclass(frozen=True)
class ReachabilityClosure:
    """Reflexive-transitive closure of one-step transitions, as bitmask rows.

    ``masks[i]`` has bit j set iff state j is reachable from state i by zero
    or more transactions.
    """

    states: tuple[State, ...]
    masks: tuple[int, ...]

    def reaches(self, i: int, j: int) -> bool:
        return bool(self.masks[i] >> j & 1)

    @property
    def n_states(self) -> int:
        return len(self.states)

    def pairs(self) -> Iterator[tuple[int, int]]:
        """All ordered pairs (i, j) with j reachable from i."""
        for i, mask in enumerate(self.masks):
            rest = mask
            while rest:
                low = rest & -rest
                rest ^= low
                yield i, low.bit_length() - 1

    def as_bool_matrix(self) -> list[list[bool]]:
        n = self.n_states
        return [[self.reaches(i, j) for j in range(n)] for i in range(n)]


class PairOrder(Enum):
    EQUIVALENT = "equivalent"
    STRICTLY_BELOW = "strictly_below"
    STRICTLY_ABOVE = "strictly_above"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class Condensation:
    """Mutual-reachability classes and the strict acyclic order between them.

    ``class_dag`` is the full strict reachability relation between distinct
    class ids: (A, B) present iff every state of A reaches every state of B
    and B does not reach back. Class ids are ordered by their lowest contained
    state index.
    """

    states: tuple[State, ...]
    class_of: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    class_dag: frozenset[tuple[int, int]]

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def class_reaches(self, a: int, b: int) -> bool:
        return a == b or (a, b) in self.class_dag

    def min_index(self, class_id: int) -> int:
        return self.classes[class_id][0]


def reachable_closure(system: FiniteMarketSystem) -> ReachabilityClosure:
    """Reflexive-transitive closure of the one-step relation."""
    n = system.n_states
    step = [1 << i for i in range(n)]
    for i, j in system.transitions:
        step[i] |= 1 << j
    masks = []
    for i in range(n):
        reach = 1 << i
        frontier = 1 << i
        while frontier:
            nxt = 0
            rest = frontier
            while rest:
                low = rest & -rest
                rest ^= low
                nxt |= step[low.bit_length() - 1]
            frontier = nxt & ~reach
            reach |= frontier
        masks.append(reach)
    return ReachabilityClosure(system.states, tuple(masks))


def condense(closure: ReachabilityClosure) -> Condensation:
    """Partition states into mutual-reachability classes; order the classes."""
    n = closure.n_states
    class_of = [-1] * n
    classes: list[tuple[int, ...]] = []
    for i in range(n):
        if class_of[i] >= 0:
            continue
        cid = len(classes)
        members = [j for j in range(n) if closure.reaches(i, j) and closure.reaches(j, i)]
        for j in members:
            class_of[j] = cid
        classes.append(tuple(members))
    dag = set()
    for a, members_a in enumerate(classes):
        rep_a = members_a[0]
        for b, members_b in enumerate(classes):
            if a != b and closure.reaches(rep_a, members_b[0]):
                dag.add((a, b))
    return Condensation(closure.states, tuple(class_of), tuple(classes), frozenset(dag))


def classify_pair(closure: ReachabilityClosure, i: int, j: int) -> PairOrder:
    """Place one ordered pair of states into exactly one of the four relations."""
    fwd = closure.reaches(i, j)
    back = closure.reaches(j, i)
    if fwd and back:
        return PairOrder.EQUIVALENT
    if fwd:
        return PairOrder.STRICTLY_BELOW
    if back:
        return PairOrder.STRICTLY_ABOVE
    return PairOrder.INCOMPARABLE


def is_complete(closure: ReachabilityClosure) -> bool:
    """True iff every pair of states is reachable in at least one direction."""
    n = closure.n_states
    for i in range(n):
        for j in range(i + 1, n):
            if not (closure.reaches(i, j) or closure.reaches(j, i)):
                return False
    return True


def is_remm(closure: ReachabilityClosure) -> bool:
    """True iff reachability is symmetric (every transformation is reversible)."""
    n = closure.n_states
    for i in range(n):
        for j in range(i + 1, n):
            if closure.reaches(i, j) != closure.reaches(j, i):
                return False
    return True


def is_giftable(closure: ReachabilityClosure, dominance: "DominanceOracle") -> bool:
    """True iff every dominated state can reach the state dominating it.

    If state y dominates state x, a giftable system lets x be topped up to y,
    so reach(x, y) must hold.
    """
    n = closure.n_states
    for i in range(n):
        for j in range(n):
            if i == j or closure.reaches(i, j):
                continue
            if dominance.dominates(closure.states[j], closure.states[i]):
                return False
    return True


def shortest_path(system: FiniteMarketSystem, start: int, goal: int) -> list[int] | None:
    """BFS shortest path over one-step transitions, inclusive of endpoints."""
    if start == goal:
        return [start]
    adj: dict[int, list[int]] = {}
    for i, j in system.transitions:
        adj.setdefault(i, []).append(j)
    for nbrs in adj.values():
        nbrs.sort()
    parent = {start: -1}
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj.get(u, ()):
                if v in parent:
                    continue
                parent[v] = u
                if v == goal:
                    path = [v]
                    while path[-1] != start:
                        path.append(parent[path[-1]])
                    return path[::-1]
                nxt.append(v)
        frontier = nxt
    return None
