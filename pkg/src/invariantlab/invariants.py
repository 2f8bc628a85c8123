"""Invariant construction and verification on finite systems.

An invariant assigns every state a number that is equal across mutually
reachable states and strictly larger along irreversible transformations. On a
finite system one always exists (rank the condensation classes); an invariant
that is additionally strictly increasing for a dominance order exists iff the
combined constraint digraph is acyclic, and a shortest contradiction cycle is
the certificate of impossibility. Uniqueness of the invariant (modulo strictly
increasing transformations) is decided structurally: it holds iff the class
order is total, and for incomplete systems a second, order-inequivalent
invariant is constructed by the split trick. Multi-invariants (families of
up-set indicators) recover reachability exactly on every system.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .errors import PreconditionError
from .finite import (
    Condensation,
    FiniteMarketSystem,
    ReachabilityClosure,
    State,
    fraction_to_json,
)

REACH = "reach"
DOMINANCE = "dominance"


@dataclass(frozen=True)
class InvariantCertificate:
    """A per-state rational rank together with the construction that produced it."""

    values: tuple[Fraction, ...]
    provenance: str  # topological-rank | increasing-rank | split | external

    def value_of(self, i: int) -> Fraction:
        return self.values[i]

    def to_json(self) -> dict:
        return {
            "values": {str(i): fraction_to_json(v) for i, v in enumerate(self.values)},
            "provenance": self.provenance,
        }


@dataclass(frozen=True)
class CycleStep:
    """One edge of a contradiction cycle: a constraint from this state to the next."""

    index: int
    state: State
    constraint: str  # REACH: K(here) <= K(next); DOMINANCE: K(here) < K(next)


@dataclass(frozen=True)
class CycleWitness:
    """A closed chain of constraints forcing K(s0) < K(s0); no increasing invariant exists.

    Reach steps assert K cannot decrease (strictly, unless the next state
    reaches back); dominance steps assert K must strictly increase because the
    next state dominates this one. The chain closes on its first state.
    """

    steps: tuple[CycleStep, ...]

    def __len__(self):
        return len(self.steps)

    def to_json(self) -> dict:
        return {
            "cycle": [
                {"state": [fraction_to_json(v) for v in s.state], "constraint": s.constraint}
                for s in self.steps
            ]
        }


@dataclass(frozen=True)
class MultiInvariant:
    """Up-set indicator family: member z maps state x to 1 iff x is reachable from z."""

    states: tuple[State, ...]
    family: tuple[tuple[int, ...], ...]  # family[z][x]

    def leq(self, x: int, y: int) -> bool:
        return all(row[x] <= row[y] for row in self.family)

    def lt(self, x: int, y: int) -> bool:
        return self.leq(x, y) and any(row[x] < row[y] for row in self.family)

    def to_json(self) -> dict:
        return {"family": [list(row) for row in self.family]}


@dataclass(frozen=True)
class NotRemm:
    """Witness that a system is not reversible: a strictly one-way reachable pair."""

    pair: tuple[int, int]
    states: tuple[State, State]

    def to_json(self) -> dict:
        return {
            "remm": False,
            "witness": [[fraction_to_json(v) for v in s] for s in self.states],
        }


@dataclass
class VerificationReport:
    """Outcome of checking a candidate state function against a system.

    ``closure_ok`` is the invariant property proper (equal on equivalent
    states, strictly increasing along irreversible reachability).
    ``one_step_ok`` is the stronger sufficient condition evaluated on raw
    transitions only; it implies closure validity but not conversely.
    """

    closure_ok: bool = True
    one_step_ok: bool = True
    closure_violations: list = field(default_factory=list)
    one_step_violations: list = field(default_factory=list)
    increasing_ok: bool | None = None
    increasing_violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.closure_ok

    def to_json(self) -> dict:
        out = {
            "closure_ok": self.closure_ok,
            "one_step_ok": self.one_step_ok,
            "closure_violations": self.closure_violations[:20],
            "one_step_violations": self.one_step_violations[:20],
        }
        if self.increasing_ok is not None:
            out["increasing_ok"] = self.increasing_ok
            out["increasing_violations"] = self.increasing_violations[:20]
        return out


StateFunction = Callable | Mapping | Sequence | InvariantCertificate


def resolve_values(states: Sequence[State], K: StateFunction) -> list:
    """Normalize a state function (callable, map, sequence, certificate) to a value list."""
    if isinstance(K, InvariantCertificate):
        return list(K.values)
    if callable(K):
        return [K(s) for s in states]
    if isinstance(K, Mapping):
        return [K[i] for i in range(len(states))]
    return list(K)


def _topological_ranks(cond: Condensation, extra_edges: frozenset[tuple[int, int]] = frozenset()):
    """Ranks from a deterministic topological order; None if the digraph has a cycle.

    Ties are broken by the lowest state index contained in a class, so reruns
    and golden tests see identical certificates.
    """
    m = cond.class_count
    succ: list[set[int]] = [set() for _ in range(m)]
    indeg = [0] * m
    for a, b in sorted(cond.class_dag | extra_edges):
        if b not in succ[a]:
            succ[a].add(b)
            indeg[b] += 1
    heap = [(cond.min_index(c), c) for c in range(m) if indeg[c] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, c = heapq.heappop(heap)
        order.append(c)
        for b in sorted(succ[c]):
            indeg[b] -= 1
            if indeg[b] == 0:
                heapq.heappush(heap, (cond.min_index(b), b))
    if len(order) != m:
        return None
    rank = [0] * m
    for pos, c in enumerate(order):
        rank[c] = pos
    return rank


def find_invariant(cond: Condensation) -> InvariantCertificate:
    """Construct an invariant; on a finite system one always exists."""
    rank = _topological_ranks(cond)
    assert rank is not None, "class order is acyclic by construction"
    values = tuple(Fraction(rank[cond.class_of[i]]) for i in range(len(cond.states)))
    return InvariantCertificate(values, "topological-rank")


def _shortest_class_cycle(m: int, edges: dict[tuple[int, int], tuple]) -> list[int]:
    """Shortest directed cycle in the class constraint digraph, deterministic."""
    succ: list[list[int]] = [[] for _ in range(m)]
    for a, b in sorted(edges):
        succ[a].append(b)
    best: list[int] | None = None
    for s in range(m):
        parent = {s: -1}
        frontier = [s]
        found = None
        while frontier and found is None:
            nxt = []
            for u in frontier:
                for v in succ[u]:
                    if v == s:
                        found = u
                        break
                    if v not in parent:
                        parent[v] = u
                        nxt.append(v)
                if found is not None:
                    break
            frontier = nxt
        if found is None:
            continue
        path = [found]
        while path[-1] != s:
            path.append(parent[path[-1]])
        cycle = path[::-1]
        if best is None or len(cycle) < len(best):
            best = cycle
    assert best is not None, "cycle search called on an acyclic digraph"
    return best


def _realize_cycle(cond: Condensation, cycle: list[int], edges: dict) -> CycleWitness:
    """Expand a class-level cycle to concrete states.

    Dominance edges pin their endpoint states; when a class is entered and
    exited at different pinned states, the hop between them is a (non-strict)
    reach step, valid because class members are mutually reachable.
    """
    m = len(cycle)
    kinds = []
    pins_out: list[int | None] = [None] * m
    pins_in: list[int | None] = [None] * m
    for pos in range(m):
        a, b = cycle[pos], cycle[(pos + 1) % m]
        kind, witness = edges[(a, b)]
        kinds.append(kind)
        if kind == DOMINANCE:
            pins_out[pos] = witness[0]
            pins_in[(pos + 1) % m] = witness[1]
    nodes: list[int] = []
    step_kinds: list[str] = []
    for pos in range(m):
        entry = pins_in[pos]
        exit_ = pins_out[pos]
        if entry is None:
            entry = exit_ if exit_ is not None else cond.min_index(cycle[pos])
        if exit_ is None:
            exit_ = entry
        nodes.append(entry)
        if exit_ != entry:
            step_kinds.append(REACH)
            nodes.append(exit_)
        step_kinds.append(kinds[pos])
    # Rotate so the chain starts at its smallest state index.
    start = nodes.index(min(nodes))
    nodes = nodes[start:] + nodes[:start]
    step_kinds = step_kinds[start:] + step_kinds[:start]
    steps = tuple(
        CycleStep(i, cond.states[i], kind) for i, kind in zip(nodes, step_kinds)
    )
    return CycleWitness(steps)


def find_increasing_invariant(
    cond: Condensation, dominance
) -> InvariantCertificate | CycleWitness:
    """An invariant that also strictly increases against the dominance order.

    Builds one strict constraint per irreversible class pair and one per
    dominating state pair; topological ranks satisfy them all when the digraph
    is acyclic, and otherwise a shortest contradiction cycle is returned.
    """
    states = cond.states
    n = len(states)
    # A dominance pair inside one class is already contradictory.
    for members in cond.classes:
        for a in members:
            for b in members:
                if a != b and dominance.dominates(states[a], states[b]):
                    return CycleWitness(
                        (
                            CycleStep(b, states[b], DOMINANCE),
                            CycleStep(a, states[a], REACH),
                        )
                    )
    edges: dict[tuple[int, int], tuple] = {}
    for a, b in cond.class_dag:
        edges[(a, b)] = (REACH, None)
    for i in range(n):
        for j in range(n):
            if i == j or cond.class_of[i] == cond.class_of[j]:
                continue
            if dominance.dominates(states[i], states[j]):
                key = (cond.class_of[j], cond.class_of[i])
                if key not in edges:
                    edges[key] = (DOMINANCE, (j, i))
    dominance_only = frozenset(k for k, v in edges.items() if v[0] == DOMINANCE)
    rank = _topological_ranks(cond, dominance_only)
    if rank is not None:
        values = tuple(Fraction(rank[cond.class_of[i]]) for i in range(n))
        return InvariantCertificate(values, "increasing-rank")
    cycle = _shortest_class_cycle(cond.class_count, edges)
    return _realize_cycle(cond, cycle, edges)


def verify_invariant(
    system: FiniteMarketSystem,
    closure: ReachabilityClosure,
    K: StateFunction,
    dominance=None,
) -> VerificationReport:
    """Check a candidate invariant, in both closure and one-step form.

    The closure check is the defining property. The one-step check evaluates
    the sufficient condition on raw transitions: strict increase whenever the
    reverse transition is not itself offered, equality when it is.
    """
    values = resolve_values(system.states, K)
    report = VerificationReport()
    n = system.n_states
    for i in range(n):
        for j in range(n):
            if i == j or not closure.reaches(i, j):
                continue
            if closure.reaches(j, i):
                if values[i] != values[j]:
                    report.closure_violations.append(
                        {"pair": [i, j], "required": "equal", "values": [str(values[i]), str(values[j])]}
                    )
            elif not values[i] < values[j]:
                report.closure_violations.append(
                    {"pair": [i, j], "required": "strictly_less", "values": [str(values[i]), str(values[j])]}
                )
    one_step = set(system.transitions)
    for i, j in system.transitions:
        if i == j:
            continue
        if (j, i) in one_step:
            if values[i] != values[j]:
                report.one_step_violations.append(
                    {"pair": [i, j], "required": "equal", "values": [str(values[i]), str(values[j])]}
                )
        elif not values[i] < values[j]:
            report.one_step_violations.append(
                {"pair": [i, j], "required": "strictly_less", "values": [str(values[i]), str(values[j])]}
            )
    report.closure_ok = not report.closure_violations
    report.one_step_ok = not report.one_step_violations
    if dominance is not None:
        for i in range(n):
            for j in range(n):
                if i != j and dominance.dominates(system.states[i], system.states[j]):
                    if not values[i] > values[j]:
                        report.increasing_violations.append(
                            {"pair": [i, j], "required": "strictly_greater",
                             "values": [str(values[i]), str(values[j])]}
                        )
        report.increasing_ok = not report.increasing_violations
    return report


def is_weak_invariant(closure: ReachabilityClosure, W: StateFunction) -> bool:
    """True iff W never decreases along reachability (no strictness required)."""
    values = resolve_values(closure.states, W)
    return all(values[i] <= values[j] for i, j in closure.pairs())


def is_unique_invariant(cond: Condensation) -> bool:
    """True iff the class order is total, i.e. the system is complete.

    A complete system pins the invariant down to order-equivalence; an
    incomparable class pair admits the split construction and hence a second,
    genuinely different invariant.
    """
    m = cond.class_count
    for a in range(m):
        for b in range(a + 1, m):
            if (a, b) not in cond.class_dag and (b, a) not in cond.class_dag:
                return False
    return True


def split_invariant(
    cond: Condensation, K: InvariantCertificate, u: int, v: int
) -> InvariantCertificate:
    """A second invariant disagreeing with K on an incomparable pair (u, v).

    Adds c = K(u) - K(v) + 1 to every state that does not reach u; the result
    still verifies and ranks v above u, so it is not an increasing transform
    of K.
    """
    cu, cv = cond.class_of[u], cond.class_of[v]
    if cu == cv or (cu, cv) in cond.class_dag or (cv, cu) in cond.class_dag:
        raise PreconditionError("split requires an incomparable pair of states")
    ku, kv = K.values[u], K.values[v]
    if ku < kv:
        u, v = v, u
        ku, kv = kv, ku
        cu, cv = cv, cu
    c = ku - kv + 1
    values = tuple(
        K.values[i] if cond.class_reaches(cond.class_of[i], cu) else K.values[i] + c
        for i in range(len(cond.states))
    )
    return InvariantCertificate(values, "split")


def order_equivalent(a: InvariantCertificate, b: InvariantCertificate) -> bool:
    """Whether two certificates induce the same total preorder on states."""
    n = len(a.values)
    for i in range(n):
        for j in range(i + 1, n):
            da = (a.values[i] > a.values[j]) - (a.values[i] < a.values[j])
            db = (b.values[i] > b.values[j]) - (b.values[i] < b.values[j])
            if da != db:
                return False
    return True


def multi_invariant(closure: ReachabilityClosure) -> MultiInvariant:
    """The up-set indicator family; recovers reachability exactly."""
    n = closure.n_states
    family = tuple(
        tuple(1 if closure.reaches(z, x) else 0 for x in range(n)) for z in range(n)
    )
    return MultiInvariant(closure.states, family)


def multi_invariant_recovers(closure: ReachabilityClosure, multi: MultiInvariant) -> bool:
    """Exact recovery check: reach(x, y) iff the whole family is <= at (x, y)."""
    n = closure.n_states
    return all(
        closure.reaches(i, j) == multi.leq(i, j) for i in range(n) for j in range(n)
    )


def is_increasing_multi_invariant(multi: MultiInvariant, dominance) -> bool:
    """True iff every dominated pair is strictly separated by the family."""
    n = len(multi.states)
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            if dominance.dominates(multi.states[y], multi.states[x]) and not multi.lt(x, y):
                return False
    return True


def sequal_invariant(cond: Condensation) -> InvariantCertificate | NotRemm:
    """Distinct constant labels per class, equal across every transition.

    Such a labeling exists iff the system is reversible (no strict class
    edges); otherwise the first strictly one-way pair is returned as witness.
    """
    if not cond.class_dag:
        return find_invariant(cond)
    n = len(cond.states)
    for i in range(n):
        for j in range(n):
            if i != j and (cond.class_of[i], cond.class_of[j]) in cond.class_dag:
                return NotRemm((i, j), (cond.states[i], cond.states[j]))
    raise AssertionError("nonempty class dag must have a realizing pair")


def remm_class_comparability(cond: Condensation, dominance) -> bool:
    """For a reversible system: no equivalence class contains a dominated pair.

    Equivalent to arbitrage-freedom, since the reachable set from any state is
    exactly its class.
    """
    if cond.class_dag:
        raise PreconditionError("system is not a REMM")
    for members in cond.classes:
        for a in members:
            for b in members:
                if a != b and dominance.dominates(cond.states[a], cond.states[b]):
                    return False
    return True
