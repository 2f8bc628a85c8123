"""Dominance orders: the strict partial orders that define "worse" states.

Arbitrage means transforming a state into a dominated one, so each order here
is the exact specification of one notion of bleeding. Comparisons are exact on
whatever number types the states carry (no epsilons); continuous-system fuzzing
applies its tolerance on the transition side instead. Ratio comparisons use
cross-multiplication so integer and Fraction states stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import DomainError, SpecError

Vec = Sequence


def _clamp(r, lo, hi):
    return lo if r < lo else hi if r > hi else r


def weighted_lp_sums(w: Vec, L: Vec, R, ticks: Vec) -> tuple[float, float]:
    """Aggregate (asset-1, asset-2) holdings of a range-weighted LP position.

    After the per-range liquidity cancels, the sums depend on the root-price R
    alone: sum of w_j * (1/clamp_j(R) - 1/r_j) and w_j * (clamp_j(R) - r_{j-1}).
    L is still required so that a positive weight on an empty range can be
    rejected.
    """
    ticks = tuple(ticks)
    w = tuple(w)
    L = tuple(L)
    if len(ticks) < 2 or any(ticks[k] <= ticks[k - 1] for k in range(1, len(ticks))) or ticks[0] <= 0:
        raise DomainError(f"ticks must be strictly increasing and positive: {ticks}")
    if len(w) != len(ticks) - 1 or len(L) != len(w):
        raise DomainError("weights and liquidity must have one entry per tick range")
    if any(wj < 0 for wj in w) or not any(wj > 0 for wj in w):
        raise DomainError("weights must be nonnegative and not all zero")
    if not ticks[0] <= R <= ticks[-1]:
        raise DomainError(f"root-price {R} outside [{ticks[0]}, {ticks[-1]}]")
    x_sum = 0.0
    y_sum = 0.0
    for j, wj in enumerate(w):
        if wj == 0:
            continue
        if L[j] <= 0:
            raise DomainError(f"positive weight on empty range {j}")
        c = _clamp(R, ticks[j], ticks[j + 1])
        x_sum += wj * (1 / c - 1 / ticks[j + 1])
        y_sum += wj * (c - ticks[j])
    return x_sum, y_sum


class DominanceOracle:
    """Base interface: a strict partial order given by a ``dominates`` predicate."""

    kind: str = ""

    def dominates(self, x: Vec, y: Vec) -> bool:
        raise NotImplementedError

    def params(self) -> dict:
        return {}

    def to_json(self) -> dict:
        spec = {"kind": self.kind}
        p = self.params()
        if p:
            spec["params"] = p
        return spec

    def __repr__(self):
        return f"{type(self).__name__}({self.params()})"


class Pareto(DominanceOracle):
    """Componentwise >= with at least one coordinate different."""

    kind = "pareto"

    def dominates(self, x, y):
        if len(x) != len(y):
            raise DomainError("states of different dimension are incomparable")
        return all(a >= b for a, b in zip(x, y)) and tuple(x) != tuple(y)


class ParetoPerShare(DominanceOracle):
    """Componentwise >= of balances per unit of the last (share-supply) coordinate."""

    kind = "pareto_per_share"

    def dominates(self, x, y):
        if len(x) != len(y) or len(x) < 2:
            raise DomainError("per-share comparison needs equal dimensions >= 2")
        xl, yl = x[-1], y[-1]
        if xl <= 0 or yl <= 0:
            raise DomainError("share supply must be positive")
        # x_i/xl >= y_i/yl via cross-multiplication (denominators positive).
        geq = all(a * yl >= b * xl for a, b in zip(x[:-1], y[:-1]))
        neq = any(a * yl != b * xl for a, b in zip(x[:-1], y[:-1]))
        return geq and neq


class SumOfPairs(DominanceOracle):
    """Groupwise sums >= with at least one group strictly larger.

    Default groups model two pools holding the same two assets: coordinates
    (0, 2) are one asset's balances across pools, (1, 3) the other's.
    """

    kind = "sum_of_pairs"

    def __init__(self, groups: Sequence[Sequence[int]] = ((0, 2), (1, 3))):
        groups = tuple(tuple(int(i) for i in g) for g in groups)
        if not groups or any(not g for g in groups):
            raise SpecError("groups must be nonempty index tuples")
        self.groups = groups

    def params(self):
        return {"groups": [list(g) for g in self.groups]}

    def dominates(self, x, y):
        dim = max(i for g in self.groups for i in g) + 1
        if len(x) < dim or len(y) < dim:
            raise DomainError(f"states must have dimension >= {dim}")
        strict = False
        for g in self.groups:
            sx = sum(x[i] for i in g)
            sy = sum(y[i] for i in g)
            if sx < sy:
                return False
            if sx > sy:
                strict = True
        return strict


class ComponentPair(DominanceOracle):
    """>= on two chosen coordinates with at least one strict."""

    kind = "component_pair"

    def __init__(self, i: int, j: int):
        if i == j or i < 0 or j < 0:
            raise SpecError("component indices must be distinct and nonnegative")
        self.i = int(i)
        self.j = int(j)

    def params(self):
        return {"i": self.i, "j": self.j}

    def dominates(self, x, y):
        if len(x) <= max(self.i, self.j) or len(y) <= max(self.i, self.j):
            raise DomainError("state dimension too small for the chosen components")
        a = (x[self.i], x[self.j])
        b = (y[self.i], y[self.j])
        return a[0] >= b[0] and a[1] >= b[1] and a != b


class WeightedLP(DominanceOracle):
    """Order on range-liquidity states (L_1..L_J, R) via weighted LP holdings.

    Both aggregate holdings must be >= with at least one strict. Every
    positively weighted range must be nonempty in both states; otherwise the
    defining sums are undefined and the comparison is a domain error.
    """

    kind = "weighted_lp"

    def __init__(self, w: Sequence, ticks: Sequence):
        ticks = tuple(float(t) for t in ticks)
        w = tuple(float(v) for v in w)
        if len(ticks) < 2 or ticks[0] <= 0 or any(ticks[k] <= ticks[k - 1] for k in range(1, len(ticks))):
            raise SpecError(f"ticks must be strictly increasing and positive: {ticks}")
        if len(w) != len(ticks) - 1:
            raise SpecError("need one weight per tick range")
        if any(v < 0 for v in w) or not any(v > 0 for v in w):
            raise SpecError("weights must be nonnegative and not all zero")
        self.w = w
        self.ticks = ticks
        self._sums: dict[tuple, tuple[float, float]] = {}

    def params(self):
        return {"w": list(self.w), "ticks": list(self.ticks)}

    def _holdings(self, state: Vec) -> tuple[float, float]:
        key = tuple(state)
        cached = self._sums.get(key)
        if cached is not None:
            return cached
        J = len(self.w)
        if len(key) != J + 1:
            raise DomainError(f"expected a (L_1..L_{J}, R) state, got dimension {len(key)}")
        L, R = key[:J], key[J]
        if any(l < 0 for l in L) or not any(l > 0 for l in L):
            raise DomainError("liquidity must be nonnegative and not all zero")
        sums = weighted_lp_sums(self.w, L, R, self.ticks)
        self._sums[key] = sums
        return sums

    def dominates(self, x, y):
        ax, ay = self._holdings(x)
        bx, by = self._holdings(y)
        return ax >= bx and ay >= by and (ax > bx or ay > by)


_KINDS = {
    "pareto": Pareto,
    "pareto_per_share": ParetoPerShare,
    "sum_of_pairs": SumOfPairs,
    "component_pair": ComponentPair,
    "weighted_lp": WeightedLP,
}


def make_dominance(spec: dict | str) -> DominanceOracle:
    """Build an order from {"kind": ..., "params": {...}} (or a bare kind name)."""
    if isinstance(spec, str):
        spec = {"kind": spec}
    kind = str(spec.get("kind", "")).replace("-", "_")
    cls = _KINDS.get(kind)
    if cls is None:
        raise SpecError(f"unknown dominance kind {spec.get('kind')!r}; known: {sorted(_KINDS)}")
    return cls(**spec.get("params", {}))


@dataclass
class PropertyReport:
    """Result of sampling-based strict-partial-order checks, with witnesses."""

    kind: str
    sample_size: int
    irreflexive: list = field(default_factory=list)
    asymmetric: list = field(default_factory=list)
    transitive: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.irreflexive or self.asymmetric or self.transitive)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "sample_size": self.sample_size,
            "ok": self.ok,
            "irreflexivity_violations": [list(map(list, v)) for v in self.irreflexive],
            "asymmetry_violations": [list(map(list, v)) for v in self.asymmetric],
            "transitivity_violations": [list(map(list, v)) for v in self.transitive],
        }


def check_strict_partial_order(order: DominanceOracle, states: Sequence[Vec]) -> PropertyReport:
    """Exhaustively check irreflexivity, asymmetry, and transitivity on a sample."""
    pts = [tuple(s) for s in states]
    report = PropertyReport(kind=order.kind, sample_size=len(pts))
    for x in pts:
        if order.dominates(x, x):
            report.irreflexive.append((x,))
    rel = {}
    for x in pts:
        for y in pts:
            rel[(x, y)] = order.dominates(x, y)
    for x in pts:
        for y in pts:
            if rel[(x, y)] and rel[(y, x)]:
                report.asymmetric.append((x, y))
    for x in pts:
        for y in pts:
            if not rel[(x, y)]:
                continue
            for z in pts:
                if rel[(y, z)] and not rel[(x, z)]:
                    report.transitive.append((x, y, z))
    return report
