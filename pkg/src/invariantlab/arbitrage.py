"""Arbitrage search: exact on finite systems, seeded fuzzing on oracles.

A witness is a replayable transaction path from a state to a state it
dominates. Finite search is exhaustive and therefore a proof either way;
fuzzing of continuous oracles only gathers evidence, and reports label it as
such. Transition membership is checked with a relative tolerance while
domination uses exact comparisons on the computed coordinates, so roundoff
cannot manufacture arbitrage.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .catalog import TransitionOracle
from .dominance import DominanceOracle
from .errors import GridError
from .finite import (
    FiniteMarketSystem,
    fraction_to_json,
    reachable_closure,
    shortest_path,
)


def _state_to_json(state: Sequence) -> list:
    return [fraction_to_json(v) if isinstance(v, Fraction) else v for v in state]


@dataclass(frozen=True)
class ArbitrageWitness:
    """A start state, a one-step path, and an end state the start dominates."""

    start: tuple
    path: tuple
    end: tuple
    kind: dict

    def __post_init__(self):
        assert len(self.path) >= 2
        assert self.path[0] == self.start and self.path[-1] == self.end

    def to_json(self) -> dict:
        return {
            "start": _state_to_json(self.start),
            "path": [_state_to_json(s) for s in self.path],
            "end": _state_to_json(self.end),
            "dominance": self.kind,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ArbitrageWitness":
        path = tuple(tuple(v) for v in obj["path"])
        return cls(path[0], path, path[-1], obj.get("dominance", {}))


def find_arbitrage_finite(
    system: FiniteMarketSystem, dominance: DominanceOracle
) -> ArbitrageWitness | None:
    """Exhaustive scan of all reachable-and-dominated pairs; shortest witness or None."""
    closure = reachable_closure(system)
    n = system.n_states
    best: tuple[int, int, int, list[int]] | None = None
    for i in range(n):
        for j in range(n):
            if i == j or not closure.reaches(i, j):
                continue
            if not dominance.dominates(system.states[i], system.states[j]):
                continue
            path = shortest_path(system, i, j)
            assert path is not None
            key = (len(path), i, j)
            if best is None or key < best[:3]:
                best = (*key, path)
    if best is None:
        return None
    path_states = tuple(system.states[k] for k in best[3])
    return ArbitrageWitness(path_states[0], path_states, path_states[-1], dominance.to_json())


@dataclass(frozen=True)
class FuzzConfig:
    trials: int = 1000
    steps: int = 20
    seed: int = 0
    start: tuple | None = None
    tolerance: float = 1e-9
    max_recorded: int = 50  # cap on stored violation/event payloads; counts are exact

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "steps": self.steps,
            "seed": self.seed,
            "start": None if self.start is None else _state_to_json(self.start),
            "tolerance": self.tolerance,
            "max_recorded": self.max_recorded,
        }


@dataclass
class FuzzReport:
    """Outcome of seeded random walks over one oracle.

    Every recorded event carries its trial index; replaying the same seed
    reproduces it. Fuzzing gathers evidence only: zero events is not a proof
    of arbitrage-freedom.
    """

    oracle_spec: dict
    dominance_spec: dict
    config: FuzzConfig
    start: tuple
    invariant_name: str | None
    violation_count: int = 0
    violations: list = field(default_factory=list)
    event_count: int = 0
    events: list = field(default_factory=list)
    trials_with_events: int = 0
    wall_clock: float = 0.0

    @property
    def clean(self) -> bool:
        return self.violation_count == 0 and self.event_count == 0

    def to_json(self, include_timing: bool = False) -> dict:
        out = {
            "mode": "fuzz",
            "system": self.oracle_spec,
            "dominance": self.dominance_spec,
            "config": self.config.to_json(),
            "start": _state_to_json(self.start),
            "candidate_invariant": self.invariant_name,
            "results": {
                "violation_count": self.violation_count,
                "violations": self.violations,
                "event_count": self.event_count,
                "events": [
                    {"trial": t, "witness": w.to_json()} for t, w in self.events
                ],
                "trials_with_events": self.trials_with_events,
                "evidence_note": "fuzzing is evidence, not proof, of absence",
            },
        }
        if include_timing:
            out["wall_clock_s"] = self.wall_clock
        return out


def _template_for_trial(oracle: TransitionOracle, trial: int, start, tolerance: float):
    """Every 100th trial replays a registered guided path whose start matches."""
    if not oracle.templates or trial % 100 != 0:
        return None
    path = oracle.templates[(trial // 100) % len(oracle.templates)]
    s0 = path[0]
    if len(s0) != len(start):
        return None
    if all(abs(a - b) <= tolerance * max(1.0, abs(a), abs(b)) for a, b in zip(s0, start)):
        return list(path[1:])
    return None


def fuzz_trajectories(
    oracle: TransitionOracle,
    dominance: DominanceOracle,
    candidate_invariant=None,
    config: FuzzConfig = FuzzConfig(),
) -> FuzzReport:
    """Seeded random walks; check invariant monotonicity and scan for dominated states.

    Each visited state is compared against every earlier state of the same
    walk. Per-trial seeds derive from the root seed and the trial index, so
    trials are independent and the report is reproducible byte for byte.
    """
    K = candidate_invariant if candidate_invariant is not None else oracle.candidate_invariant
    start = tuple(config.start) if config.start is not None else oracle.default_start
    report = FuzzReport(
        oracle_spec=oracle.spec,
        dominance_spec=dominance.to_json(),
        config=config,
        start=start,
        invariant_name=oracle.candidate_invariant_name if K is oracle.candidate_invariant else None,
    )
    began = time.perf_counter()
    tol = config.tolerance
    for trial in range(config.trials):
        rng = random.Random(f"{config.seed}:{trial}")
        scripted = _template_for_trial(oracle, trial, start, tol)
        visited = [start]
        k_prev = K(start) if K is not None else None
        trial_hit = False
        for _ in range(config.steps):
            if scripted:
                nxt = scripted.pop(0)
            else:
                nxt = oracle.sample_transition(visited[-1], rng)
            if nxt is None:
                break
            if K is not None:
                k_next = K(nxt)
                if k_next - k_prev < -tol * max(abs(k_prev), abs(k_next)):
                    report.violation_count += 1
                    if len(report.violations) < config.max_recorded:
                        report.violations.append(
                            {
                                "trial": trial,
                                "step": len(visited),
                                "from": _state_to_json(visited[-1]),
                                "to": _state_to_json(nxt),
                                "values": [k_prev, k_next],
                            }
                        )
                k_prev = k_next
            for back, earlier in enumerate(visited):
                if dominance.dominates(earlier, nxt):
                    report.event_count += 1
                    trial_hit = True
                    if len(report.events) < config.max_recorded:
                        path = tuple(visited[back:]) + (nxt,)
                        report.events.append(
                            (
                                trial,
                                ArbitrageWitness(path[0], path, nxt, dominance.to_json()),
                            )
                        )
            visited.append(nxt)
        if trial_hit:
            report.trials_with_events += 1
    report.wall_clock = time.perf_counter() - began
    return report


def verify_witness(
    target: TransitionOracle | FiniteMarketSystem,
    witness: ArbitrageWitness,
    dominance: DominanceOracle,
) -> bool:
    """Re-check every step of a witness and the start-dominates-end claim."""
    path = witness.path
    if len(path) < 2 or path[0] != witness.start or path[-1] != witness.end:
        return False
    if isinstance(target, FiniteMarketSystem):
        try:
            idx = [target.index_of(s) for s in path]
        except KeyError:
            return False
        edges = set(target.transitions)
        if any((a, b) not in edges for a, b in zip(idx, idx[1:])):
            return False
        return dominance.dominates(target.states[idx[0]], target.states[idx[-1]])
    for a, b in zip(path, path[1:]):
        if not target.contains(a, b):
            return False
    return dominance.dominates(path[0], path[-1])


def discretize(
    oracle: TransitionOracle,
    grid,
    transition_budget: int = 0,
    seed: int = 0,
) -> FiniteMarketSystem:
    """Snap an oracle to a finite system over a grid of states.

    Takes either explicit states or per-axis values (their product). Edges are
    the grid pairs accepted by the membership predicate, plus up to
    transition_budget sampled transitions snapped to their nearest grid point.
    The result under-approximates the oracle: no false transitions beyond the
    membership tolerance, but transitions may be missed.
    """
    if isinstance(grid, dict):
        if "states" in grid:
            states = [tuple(float(v) for v in s) for s in grid["states"]]
        elif "axes" in grid:
            states = [()]
            for axis in grid["axes"]:
                if not axis:
                    raise GridError("empty axis in grid")
                states = [(*s, float(v)) for s in states for v in axis]
        else:
            raise GridError("grid must have 'states' or 'axes'")
    else:
        states = [tuple(float(v) for v in s) for s in grid]
    states = sorted(set(states))
    if not states:
        raise GridError("grid is empty")
    bad = [s for s in states if not oracle.domain(s)]
    if bad:
        raise GridError(f"grid states outside the oracle domain: {bad[:3]}")
    edges = set()
    n = len(states)
    for i in range(n):
        for j in range(n):
            if i != j and oracle.contains(states[i], states[j]):
                edges.add((i, j))
    if transition_budget > 0:
        rng = random.Random(f"{seed}:discretize")
        for _ in range(transition_budget):
            i = rng.randrange(n)
            y = oracle.sample_transition(states[i], rng)
            if y is None:
                continue
            snapped = min(
                range(n),
                key=lambda k: sum((a - b) ** 2 for a, b in zip(states[k], y)),
            )
            if snapped != i and oracle.contains(states[i], states[snapped]):
                edges.add((i, snapped))
    return FiniteMarketSystem.build(states, sorted(edges))
