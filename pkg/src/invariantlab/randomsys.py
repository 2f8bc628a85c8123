"""Random finite systems for the theorem property suites.

States are small integer points in the plane so that dominance comparisons are
frequent; the gift-closed generator adds a transition from every dominated
state up to its dominator, which makes giftability hold by construction.
"""

from __future__ import annotations

import random

from .dominance import DominanceOracle, Pareto
from .finite import FiniteMarketSystem


def _random_points(rng: random.Random, max_states: int, coord_max: int = 6) -> list[tuple[int, int]]:
    count = rng.randint(1, max_states)
    points: set[tuple[int, int]] = set()
    while len(points) < count:
        points.add((rng.randint(0, coord_max), rng.randint(0, coord_max)))
    return sorted(points)


def random_system(rng: random.Random, max_states: int = 8) -> FiniteMarketSystem:
    """Random states in the integer quadrant with Bernoulli transitions."""
    points = _random_points(rng, max_states)
    n = len(points)
    density = rng.uniform(0.0, 0.45)
    edges = [
        (i, j)
        for i in range(n)
        for j in range(n)
        if i != j and rng.random() < density
    ]
    return FiniteMarketSystem.build(points, edges)


def random_giftable_system(
    rng: random.Random, max_states: int = 8, dominance: DominanceOracle | None = None
) -> FiniteMarketSystem:
    """Random system closed under gifting: every dominated pair gets an upward edge."""
    dom = dominance if dominance is not None else Pareto()
    base = random_system(rng, max_states)
    n = base.n_states
    edges = set(base.transitions)
    for i in range(n):
        for j in range(n):
            if i != j and dom.dominates(base.states[j], base.states[i]):
                edges.add((i, j))
    return FiniteMarketSystem(base.states, tuple(sorted(edges)))


def random_remm_system(rng: random.Random, max_states: int = 8) -> FiniteMarketSystem:
    """Random system with a symmetrized transition set, hence reversible."""
    base = random_system(rng, max_states)
    edges = set(base.transitions) | {(j, i) for i, j in base.transitions}
    return FiniteMarketSystem(base.states, tuple(sorted(edges)))
