"""Concrete market systems as parametric transition oracles.

Each oracle carries its state dimension, a one-step membership predicate with
a relative tolerance on its defining equation, a seeded transition sampler
that generates exactly-on-curve points (tolerance only absorbs roundoff), an
optional closed-form candidate invariant, and a default dominance order.

The catalog covers constant-product pools with and without fees, the
share-supply variants with pool fees and dilutive admin fees, the StableSwap
pool with its root-solved invariant, an uncoordinated two-pool system, a
range-liquidity (tick) pool network, a nonhomogeneous square-root pool, the
proper and naive ways of adding liquidity operations to a pool, and several
small counterexample systems.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .dominance import (
    DominanceOracle,
    Pareto,
    ParetoPerShare,
    SumOfPairs,
    WeightedLP,
)
from .errors import ConvergenceError, DomainError, SpecError, TickMismatchError
from .finite import FiniteMarketSystem

FState = tuple[float, ...]


def rel_eq(a, b, tol=1e-9) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def rel_ge(a, b, tol=1e-9) -> bool:
    return a >= b - tol * max(1.0, abs(a), abs(b))


def _log_uniform(rng: random.Random, lo: float, hi: float) -> float:
    return math.exp(rng.uniform(math.log(lo), math.log(hi)))


@dataclass(frozen=True)
class FeeSchedule:
    """Per-asset fee: a fraction of any balance increase, zero on decreases."""

    rate: float = 0.003

    def __post_init__(self):
        if not 0 <= self.rate < 1:
            raise SpecError(f"fee rate must be in [0, 1): {self.rate}")

    def charge(self, x: Sequence, y: Sequence) -> tuple:
        return tuple(self.rate * max(b - a, 0) for a, b in zip(x, y))


@dataclass(frozen=True)
class TransitionOracle:
    """A parametric continuous market system."""

    name: str
    dimension: int
    spec: dict
    domain: Callable[[FState], bool]
    contains: Callable[[FState, FState], bool]
    sample_transition: Callable[[FState, random.Random], FState | None]
    default_dominance: DominanceOracle
    default_start: FState
    candidate_invariant: Callable[[FState], float] | None = None
    candidate_invariant_name: str | None = None
    templates: tuple[tuple[FState, ...], ...] = ()
    notes: str = ""
    tolerance: float = 1e-9
    finite_system: FiniteMarketSystem | None = None

    def sample_transitions(self, x: FState, seed, count: int) -> list[FState]:
        rng = random.Random(f"{seed}")
        out = []
        for _ in range(count):
            y = self.sample_transition(x, rng)
            if y is not None:
                out.append(y)
        return out


# ---------------------------------------------------------------------------
# constant-product pools


def cpmm_quote(x: Sequence, asset_in: int, amount_in, fee) -> tuple:
    """The unique post-swap state on the fee-adjusted constant-product curve.

    The incoming balance rises by amount_in; the fee applies to that increase
    only, so the outgoing balance solves
    (y_in - rate * amount_in) * y_out = x_in * x_out.
    """
    if asset_in not in (0, 1):
        raise DomainError(f"asset_in must be 0 or 1: {asset_in}")
    if x[0] <= 0 or x[1] <= 0:
        raise DomainError(f"balances must be positive: {tuple(x)}")
    if amount_in <= 0:
        raise DomainError(f"amount_in must be positive: {amount_in}")
    rate = fee.rate if isinstance(fee, FeeSchedule) else fee
    out = 1 - asset_in
    y_out = x[asset_in] * x[out] / (x[asset_in] + (1 - rate) * amount_in)
    y = [0, 0]
    y[asset_in] = x[asset_in] + amount_in
    y[out] = y_out
    return tuple(y)


def _positive(x: Sequence, dim: int) -> bool:
    return len(x) == dim and all(v > 0 for v in x)


def _swap_sample(x, rng, fee_rate):
    asset = rng.randrange(2)
    amount = x[asset] * _log_uniform(rng, 1e-3, 1.0)
    return cpmm_quote(x, asset, amount, fee_rate)


def make_cpmm_fee(fee: float = 0.003, tolerance: float = 1e-9) -> TransitionOracle:
    """Two-asset constant-product pool charging a fraction of the incoming leg."""
    schedule = FeeSchedule(fee)

    def contains(x, y):
        if not (_positive(x, 2) and _positive(y, 2)):
            return False
        p1, p2 = schedule.charge(x, y)
        return rel_eq((y[0] - p1) * (y[1] - p2), x[0] * x[1], tolerance)

    def sample(x, rng):
        return _swap_sample(x, rng, fee)

    return TransitionOracle(
        name="cpmm_fee",
        dimension=2,
        spec={"system": "cpmm_fee", "params": {"fee": fee}},
        domain=lambda x: _positive(x, 2),
        contains=contains,
        sample_transition=sample,
        default_dominance=Pareto(),
        default_start=(100.0, 100.0),
        candidate_invariant=lambda x: x[0] * x[1],
        candidate_invariant_name="x1*x2",
        tolerance=tolerance,
    )


def _is_scaling(x, y, tol) -> bool:
    """Whether y = alpha * x for some alpha > 0, via cross-products."""
    if len(x) != len(y) or any(v <= 0 for v in x) or any(v <= 0 for v in y):
        return False
    return all(
        rel_eq(y[i] * x[0], x[i] * y[0], tol) for i in range(1, len(x))
    )


def make_uniswap_v2_full(fee: float = 0.003, tolerance: float = 1e-9) -> TransitionOracle:
    """Pool with separate swap, share-scaling, and single-asset donation steps."""
    schedule = FeeSchedule(fee)

    def contains(x, y):
        if not (_positive(x, 3) and _positive(y, 3)):
            return False
        if _is_scaling(x, y, tolerance):
            return True
        if rel_eq(y[2], x[2], tolerance):
            p1, p2 = schedule.charge(x[:2], y[:2])
            if rel_eq((y[0] - p1) * (y[1] - p2), x[0] * x[1], tolerance):
                return True
            if rel_eq(y[1], x[1], tolerance) and y[0] > x[0]:
                return True
            if rel_eq(y[0], x[0], tolerance) and y[1] > x[1]:
                return True
        return False

    def sample(x, rng):
        r = rng.random()
        if r < 0.5:
            return (*_swap_sample(x[:2], rng, fee), x[2])
        if r < 0.75:
            alpha = _log_uniform(rng, 0.5, 2.0)
            return (alpha * x[0], alpha * x[1], alpha * x[2])
        asset = rng.randrange(2)
        gift = x[asset] * _log_uniform(rng, 1e-3, 0.1)
        y = list(x)
        y[asset] += gift
        return tuple(y)

    return TransitionOracle(
        name="uniswap_v2_full",
        dimension=3,
        spec={"system": "uniswap_v2_full", "params": {"fee": fee}},
        domain=lambda x: _positive(x, 3),
        contains=contains,
        sample_transition=sample,
        default_dominance=ParetoPerShare(),
        default_start=(100.0, 100.0, 10.0),
        candidate_invariant=lambda x: x[0] * x[1] / x[2] ** 2,
        candidate_invariant_name="x1*x2/xl^2",
        tolerance=tolerance,
    )


def make_uniswap_v2_mprime(fee: float = 0.003, tolerance: float = 1e-9) -> TransitionOracle:
    """Pool allowing combined swap-and-donate steps: fee-adjusted product may rise."""
    schedule = FeeSchedule(fee)

    def contains(x, y):
        if not (_positive(x, 3) and _positive(y, 3)):
            return False
        if _is_scaling(x, y, tolerance):
            return True
        if not rel_eq(y[2], x[2], tolerance):
            return False
        p1, p2 = schedule.charge(x[:2], y[:2])
        return rel_ge((y[0] - p1) * (y[1] - p2), x[0] * x[1], tolerance)

    def sample(x, rng):
        r = rng.random()
        if r < 0.45:
            return (*_swap_sample(x[:2], rng, fee), x[2])
        if r < 0.7:
            alpha = _log_uniform(rng, 0.5, 2.0)
            return (alpha * x[0], alpha * x[1], alpha * x[2])
        if r < 0.85:
            asset = rng.randrange(2)
            gift = x[asset] * _log_uniform(rng, 1e-3, 0.1)
            y = list(x)
            y[asset] += gift
            return tuple(y)
        pool = _swap_sample(x[:2], rng, fee)
        gift = pool[0] * _log_uniform(rng, 1e-3, 0.01)
        return (pool[0] + gift, pool[1], x[2])

    return TransitionOracle(
        name="uniswap_v2_mprime",
        dimension=3,
        spec={"system": "uniswap_v2_mprime", "params": {"fee": fee}},
        domain=lambda x: _positive(x, 3),
        contains=contains,
        sample_transition=sample,
        default_dominance=ParetoPerShare(),
        default_start=(100.0, 100.0, 10.0),
        candidate_invariant=lambda x: x[0] * x[1] / x[2] ** 2,
        candidate_invariant_name="x1*x2/xl^2",
        tolerance=tolerance,
    )


def sushi_mint(x: Sequence, xl, y: Sequence):
    """Post-trade share supply under dilutive admin-fee minting.

    Supply grows by the factor 6*k(y) / (5*k(y) + k(x)) with k the square root
    of the balance product; one-sixth of the pool's growth accrues to newly
    minted shares.
    """
    if any(v <= 0 for v in (*x, xl, *y)):
        raise DomainError("balances and share supply must be positive")
    kx = math.sqrt(x[0] * x[1])
    ky = math.sqrt(y[0] * y[1])
    return 6 * ky / (5 * ky + kx) * xl


def make_sushi_admin_fee(fee: float = 0.003, tolerance: float = 1e-9) -> TransitionOracle:
    """Pool-fee pool whose share supply dilutes on every trade (admin fee)."""
    schedule = FeeSchedule(fee)

    def contains(x, y):
        if not (_positive(x, 3) and _positive(y, 3)):
            return False
        if _is_scaling(x, y, tolerance):
            return True
        p1, p2 = schedule.charge(x[:2], y[:2])
        if not rel_ge((y[0] - p1) * (y[1] - p2), x[0] * x[1], tolerance):
            return False
        return rel_eq(y[2], sushi_mint(x[:2], x[2], y[:2]), tolerance)

    def sample(x, rng):
        r = rng.random()
        if r < 0.3:
            alpha = _log_uniform(rng, 0.5, 2.0)
            return (alpha * x[0], alpha * x[1], alpha * x[2])
        if r < 0.8:
            pool = _swap_sample(x[:2], rng, fee)
        else:
            asset = rng.randrange(2)
            gift = x[asset] * _log_uniform(rng, 1e-3, 0.1)
            pool = list(x[:2])
            pool[asset] += gift
            pool = tuple(pool)
        return (*pool, sushi_mint(x[:2], x[2], pool))

    return TransitionOracle(
        name="sushi_admin_fee",
        dimension=3,
        spec={"system": "sushi_admin_fee", "params": {"fee": fee}},
        domain=lambda x: _positive(x, 3),
        contains=contains,
        sample_transition=sample,
        default_dominance=ParetoPerShare(),
        default_start=(100.0, 100.0, 10.0),
        candidate_invariant=lambda x: math.sqrt(x[0] * x[1]) / x[2],
        candidate_invariant_name="sqrt(x1*x2)/xl",
        tolerance=tolerance,
    )


# ---------------------------------------------------------------------------
# StableSwap


def stableswap_f(D, x: Sequence, A):
    """The defining function whose unique positive root is the pool value."""
    n = len(x)
    ann = A * n**n
    return ann * sum(x) + D - A * D * n**n - D ** (n + 1) / (n**n * math.prod(x))


def stableswap_kappa(x: Sequence, A, max_iter: int = 128) -> float:
    """Unique positive root of the StableSwap equation, by safeguarded Newton.

    f(., x) is strictly decreasing and concave for A > n**-n, so Newton from
    the balance sum converges monotonically once past the root; any iterate
    leaving the sign-bracketing interval falls back to its midpoint. Residual
    target is 1e-10 relative to the dominant coefficient.
    """
    n = len(x)
    if n < 2:
        raise SpecError("StableSwap needs at least two assets")
    if any(v <= 0 for v in x):
        raise DomainError(f"balances must be positive: {tuple(x)}")
    if A <= n ** (-n):
        raise SpecError(f"amplification must exceed n**-n = {n ** (-n)}: {A}")
    ann = A * n**n
    s = float(sum(x))
    p = math.prod(float(v) for v in x)

    def f(d):
        return ann * s + d - A * d * n**n - d ** (n + 1) / (n**n * p)

    def fprime(d):
        return 1 - ann - (n + 1) * d**n / (n**n * p)

    scale = max(1.0, ann * s)
    lo = 0.0
    hi = ann * s + s
    grow = 0
    while f(hi) > 0:
        hi *= 2
        grow += 1
        if grow > 200:
            raise ConvergenceError(f"could not bracket the root above {hi}")
    d = s
    for _ in range(max_iter):
        fd = f(d)
        if abs(fd) <= 1e-10 * scale:
            return d
        if fd > 0:
            lo = d
        else:
            hi = d
        nd = d - fd / fprime(d)
        if not lo < nd < hi:
            nd = 0.5 * (lo + hi)
        d = nd
    raise ConvergenceError(
        f"no convergence after {max_iter} iterations; bracket [{lo}, {hi}], f(lo)={f(lo)}, f(hi)={f(hi)}"
    )


def _stableswap_solve_rebalance(x: Sequence, i: int, j: int, amount: float, A) -> tuple:
    """Post-swap balances: coordinate i rises by amount, j solves back to the same root."""
    d = stableswap_kappa(x, A)
    y = list(x)
    y[i] = x[i] + amount
    # f(d, .) is increasing in y[j]; f(d, y) >= 0 means the pool value of y is >= d.
    lo = 1e-300
    hi = x[j]
    y[j] = hi
    while stableswap_f(d, y, A) < 0:
        hi *= 2
        y[j] = hi
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        y[j] = mid
        if stableswap_f(d, y, A) < 0:
            lo = mid
        else:
            hi = mid
    y[j] = hi  # the side whose pool value is >= the original
    return tuple(y)


def make_stableswap(A: float = 10.0, n: int = 2, tolerance: float = 1e-9) -> TransitionOracle:
    """Stylized StableSwap: any move that does not decrease the pool value."""
    n = int(n)
    if n < 2:
        raise SpecError("StableSwap needs at least two assets")
    if A <= n ** (-n):
        raise SpecError(f"amplification must exceed n**-n = {n ** (-n)}: {A}")

    def kappa(x):
        return stableswap_kappa(x, A)

    def contains(x, y):
        if not (_positive(x, n) and _positive(y, n)):
            return False
        return rel_ge(kappa(y), kappa(x), tolerance)

    def sample(x, rng):
        if rng.random() < 0.8:
            i = rng.randrange(n)
            j = (i + 1 + rng.randrange(n - 1)) % n
            amount = x[i] * _log_uniform(rng, 1e-3, 1.0)
            return _stableswap_solve_rebalance(x, i, j, amount, A)
        i = rng.randrange(n)
        y = list(x)
        y[i] += x[i] * _log_uniform(rng, 1e-3, 0.1)
        return tuple(y)

    return TransitionOracle(
        name="stableswap",
        dimension=n,
        spec={"system": "stableswap", "params": {"A": A, "n": n}},
        domain=lambda x: _positive(x, n),
        contains=contains,
        sample_transition=sample,
        default_dominance=Pareto(),
        default_start=tuple(100.0 for _ in range(n)),
        candidate_invariant=kappa,
        candidate_invariant_name="stableswap root",
        tolerance=tolerance,
    )


# ---------------------------------------------------------------------------
# two uncoordinated pools on the same assets


def _common_price_move(x: FState) -> FState:
    """Move both pools to one price; shrinks both aggregate balances when prices differ."""
    k1 = x[0] * x[1]
    k2 = x[2] * x[3]
    q = (x[1] + x[3]) / (x[0] + x[2])
    return (
        math.sqrt(k1 / q),
        math.sqrt(k1 * q),
        math.sqrt(k2 / q),
        math.sqrt(k2 * q),
    )


def make_two_pool_cpmm(tolerance: float = 1e-9) -> TransitionOracle:
    """Two independent no-fee constant-product pools holding the same two assets."""

    def contains(x, y):
        if not (_positive(x, 4) and _positive(y, 4)):
            return False
        return rel_eq(y[0] * y[1], x[0] * x[1], tolerance) and rel_eq(
            y[2] * y[3], x[2] * x[3], tolerance
        )

    def sample(x, rng):
        y = list(x)
        which = rng.randrange(3)  # pool 1, pool 2, or both
        for base in ([0] if which == 0 else [2] if which == 1 else [0, 2]):
            k = x[base] * x[base + 1]
            y[base] = x[base] * math.exp(rng.uniform(-0.7, 0.7))
            y[base + 1] = k / y[base]
        return tuple(y)

    start = (8.0, 2.0, 1.0, 9.0)
    return TransitionOracle(
        name="two_pool_cpmm",
        dimension=4,
        spec={"system": "two_pool_cpmm", "params": {}},
        domain=lambda x: _positive(x, 4),
        contains=contains,
        sample_transition=sample,
        default_dominance=SumOfPairs(),
        default_start=start,
        templates=((start, _common_price_move(start)),),
        tolerance=tolerance,
    )


# ---------------------------------------------------------------------------
# range liquidity (tick) pools


@dataclass(frozen=True)
class V3State:
    """Per-range liquidity plus the square-root price, on a fixed tick grid."""

    liquidity: tuple[float, ...]
    root_price: float
    ticks: tuple[float, ...]

    def __post_init__(self):
        ticks = self.ticks
        if len(ticks) < 2 or ticks[0] <= 0 or any(
            ticks[k] <= ticks[k - 1] for k in range(1, len(ticks))
        ):
            raise SpecError(f"ticks must be strictly increasing and positive: {ticks}")
        if len(self.liquidity) != len(ticks) - 1:
            raise DomainError("need one liquidity entry per tick range")
        if any(l < 0 for l in self.liquidity) or not any(l > 0 for l in self.liquidity):
            raise DomainError("liquidity must be nonnegative and not all zero")
        if not ticks[0] <= self.root_price <= ticks[-1]:
            raise DomainError(
                f"root price {self.root_price} outside [{ticks[0]}, {ticks[-1]}]"
            )

    def as_tuple(self) -> FState:
        return (*self.liquidity, self.root_price)

    @classmethod
    def from_tuple(cls, t: Sequence, ticks: Sequence) -> "V3State":
        t = tuple(t)
        return cls(t[:-1], t[-1], tuple(ticks))


def v3_balances(s: V3State) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Per-range balances of the two assets implied by (liquidity, root price)."""
    xs = []
    ys = []
    for j, l in enumerate(s.liquidity):
        lo, hi = s.ticks[j], s.ticks[j + 1]
        c = lo if s.root_price < lo else hi if s.root_price > hi else s.root_price
        xs.append(l * (1 / c - 1 / hi))
        ys.append(l * (c - lo))
    return tuple(xs), tuple(ys)


def v3_contains(s: V3State, t: V3State, tolerance: float = 1e-9) -> bool:
    """One step: a swap (same liquidity) or a liquidity operation (same price)."""
    if s.ticks != t.ticks:
        raise TickMismatchError(f"tick grids differ: {s.ticks} vs {t.ticks}")
    same_l = all(rel_eq(a, b, tolerance) for a, b in zip(s.liquidity, t.liquidity))
    same_r = rel_eq(s.root_price, t.root_price, tolerance)
    return same_l or same_r


def make_uniswap_v3(ticks: Sequence = (1.0, 2.0, 3.0), tolerance: float = 1e-9) -> TransitionOracle:
    """Network of per-range pools sharing one price; swaps move the price, liquidity ops scale ranges."""
    ticks = tuple(float(t) for t in ticks)
    probe = V3State(tuple(1.0 for _ in range(len(ticks) - 1)), ticks[0], ticks)  # validates ticks
    J = len(ticks) - 1

    def domain(x):
        try:
            V3State.from_tuple(x, ticks)
            return True
        except (DomainError, SpecError):
            return False

    def contains(x, y):
        return v3_contains(
            V3State.from_tuple(x, ticks), V3State.from_tuple(y, ticks), tolerance
        )

    def sample(x, rng):
        s = V3State.from_tuple(x, ticks)
        if rng.random() < 0.5:
            if rng.random() < 0.5:
                r = rng.uniform(ticks[0], ticks[-1])
            else:
                r = s.root_price * math.exp(rng.uniform(-0.1, 0.1))
                r = min(max(r, ticks[0]), ticks[-1])
            return (*s.liquidity, r)
        scaled = tuple(l * _log_uniform(rng, 0.5, 2.0) for l in s.liquidity)
        return (*scaled, s.root_price)

    start = probe  # all-ones liquidity
    mid = 0.5 * (ticks[0] + ticks[-1])
    return TransitionOracle(
        name="uniswap_v3",
        dimension=J + 1,
        spec={"system": "uniswap_v3", "params": {"ticks": list(ticks)}},
        domain=domain,
        contains=contains,
        sample_transition=sample,
        default_dominance=WeightedLP(tuple(1.0 for _ in range(J)), ticks),
        default_start=(*start.liquidity, mid),
        tolerance=tolerance,
    )


# ---------------------------------------------------------------------------
# square-root pool and liquidity lifts


def make_sqrt_cfmm(fee: float = 0.0, tolerance: float = 1e-9) -> TransitionOracle:
    """Nonhomogeneous pool: fee-adjusted x1 + sqrt(x2) may not decrease."""
    schedule = FeeSchedule(fee)

    def level(x):
        return x[0] + math.sqrt(x[1])

    def contains(x, y):
        if not (_positive(x, 2) and _positive(y, 2)):
            return False
        p1, p2 = schedule.charge(x, y)
        return rel_ge(y[0] - p1 + math.sqrt(y[1] - p2), level(x), tolerance)

    def sample(x, rng):
        r = rng.random()
        if r < 0.15:
            asset = rng.randrange(2)
            y = list(x)
            y[asset] += x[asset] * _log_uniform(rng, 1e-3, 0.1)
            return tuple(y)
        keep = 1 - fee
        if rng.random() < 0.5:
            # asset 1 in, asset 2 out: sqrt(y2) = sqrt(x2) - keep * a
            cap = math.sqrt(x[1]) / keep
            a = min(x[0], cap) * _log_uniform(rng, 1e-3, 0.9)
            root = math.sqrt(x[1]) - keep * a
            return (x[0] + a, root * root)
        # asset 2 in, asset 1 out: y1 = x1 + sqrt(x2) - sqrt(x2 + keep * a)
        cap = ((x[0] + math.sqrt(x[1])) ** 2 - x[1]) / keep
        a = min(x[1], cap) * _log_uniform(rng, 1e-3, 0.9)
        y1 = x[0] + math.sqrt(x[1]) - math.sqrt(x[1] + keep * a)
        if y1 <= 0:
            return (x[0], x[1] + a)  # degenerate draw; fall back to a gift
        return (y1, x[1] + a)

    return TransitionOracle(
        name="sqrt_cfmm",
        dimension=2,
        spec={"system": "sqrt_cfmm", "params": {"fee": fee}},
        domain=lambda x: _positive(x, 2),
        contains=contains,
        sample_transition=sample,
        default_dominance=Pareto(),
        default_start=(1.8, 1.0),
        candidate_invariant=level,
        candidate_invariant_name="x1+sqrt(x2)",
        tolerance=tolerance,
    )


def _validate_template(contains, path) -> bool:
    return all(contains(a, b) for a, b in zip(path, path[1:]))


def naive_lift(base: TransitionOracle, tolerance: float = 1e-9) -> TransitionOracle:
    """Add share scaling to a two-asset pool the broken way.

    Swap legs keep the share supply and apply the base rule to raw balances,
    ignoring the per-share rescaling. Without a homogeneous base invariant
    this admits per-share arbitrage across scales.
    """
    if base.dimension != 2:
        raise SpecError("naive lift is defined for two-asset bases")

    def contains(x, y):
        if not (_positive(x, 3) and _positive(y, 3)):
            return False
        if _is_scaling(x, y, tolerance):
            return True
        return rel_eq(y[2], x[2], tolerance) and base.contains(x[:2], y[:2])

    def sample(x, rng):
        if rng.random() < 0.35:
            alpha = _log_uniform(rng, 0.5, 2.0)
            return tuple(alpha * v for v in x)
        pool = base.sample_transition(x[:2], rng)
        if pool is None:
            return None
        return (*pool, x[2])

    templates = []
    ladder = ((1.8, 1.0, 1.0), (1.0, 4.0, 1.0), (4.0, 16.0, 4.0), (6.8, 4.0, 4.0), (1.7, 1.0, 1.0))
    if _validate_template(contains, ladder):
        templates.append(ladder)

    return TransitionOracle(
        name=f"naive_lift({base.name})",
        dimension=3,
        spec={"system": "naive_lift", "params": {"base": base.spec}},
        domain=lambda x: _positive(x, 3),
        contains=contains,
        sample_transition=sample,
        default_dominance=ParetoPerShare(),
        default_start=(*base.default_start, 1.0),
        templates=tuple(templates),
        tolerance=tolerance,
    )


def lift_with_liquidity(
    base: TransitionOracle | Callable,
    xi: float = 1.0,
    mode: str = "exact",
    dimension: int | None = None,
    tolerance: float = 1e-9,
) -> TransitionOracle:
    """Add share scaling to a pool the arbitrage-safe way.

    Exact mode: swap legs keep the share supply and apply the base rule to
    per-share balances rescaled by xi; requires a base oracle whose candidate
    function is an invariant. Inequality mode: any step that strictly raises
    the rescaled per-share value function is allowed (gifts, dilutive fees);
    requires a strictly coordinatewise-increasing value function, given either
    as the base oracle's candidate or as a bare callable. Either way the
    augmented system inherits kappa(xi * x / x_l) as a per-share candidate
    invariant.
    """
    if xi <= 0:
        raise SpecError(f"share normalization xi must be positive: {xi}")
    if mode not in ("exact", "inequality"):
        raise SpecError(f"mode must be 'exact' or 'inequality': {mode}")
    if callable(base) and not isinstance(base, TransitionOracle):
        if mode == "exact":
            raise SpecError("exact mode needs a base oracle, not a bare value function")
        kappa = base
        n = 2 if dimension is None else int(dimension)
        base_oracle = None
        base_spec = {"system": "custom_kappa", "params": {}}
        base_name = "kappa"
        base_start = tuple(1.0 for _ in range(n))
    else:
        base_oracle = base
        if base_oracle.candidate_invariant is None:
            raise SpecError(f"base {base_oracle.name} ships no candidate invariant to lift")
        kappa = base_oracle.candidate_invariant
        n = base_oracle.dimension
        base_spec = base_oracle.spec
        base_name = base_oracle.name
        base_start = base_oracle.default_start
    dim = n + 1

    def per_share(x):
        return tuple(xi * v / x[-1] for v in x[:-1])

    def lifted_k(x):
        return kappa(per_share(x))

    def contains(x, y):
        if not (_positive(x, dim) and _positive(y, dim)):
            return False
        if _is_scaling(x, y, tolerance):
            return True
        if mode == "exact":
            return rel_eq(y[-1], x[-1], tolerance) and base_oracle.contains(
                per_share(x), per_share(y)
            )
        return rel_ge(lifted_k(y), lifted_k(x), tolerance)

    def sample(x, rng):
        r = rng.random()
        if r < 0.35:
            alpha = _log_uniform(rng, 0.5, 2.0)
            return tuple(alpha * v for v in x)
        if mode == "inequality" and (base_oracle is None or r < 0.5):
            i = rng.randrange(n)
            y = list(x)
            y[i] += x[i] * _log_uniform(rng, 1e-3, 0.1)
            return tuple(y)
        z = base_oracle.sample_transition(per_share(x), rng)
        if z is None:
            return None
        back = x[-1] / xi
        return (*(back * v for v in z), x[-1])

    return TransitionOracle(
        name=f"proper_lift({base_name},{mode})",
        dimension=dim,
        spec={"system": "proper_lift", "params": {"base": base_spec, "xi": xi, "mode": mode}},
        domain=lambda x: _positive(x, dim),
        contains=contains,
        sample_transition=sample,
        default_dominance=ParetoPerShare(),
        default_start=(*base_start, 1.0),
        candidate_invariant=lifted_k,
        candidate_invariant_name=f"kappa({xi}*x/xl)",
        tolerance=tolerance,
    )


# ---------------------------------------------------------------------------
# counterexample systems


def make_lexicographic(tolerance: float = 1e-9) -> TransitionOracle:
    """Strictly lexicographic upward moves on the unit square.

    At full continuum scale this system is arbitrage-free yet admits no
    real-valued invariant; finite discretizations of it do admit invariants,
    so analyses of snapped grids are expected to find one.
    """

    def domain(x):
        return len(x) == 2 and all(-tolerance <= v <= 1 + tolerance for v in x)

    def contains(x, y):
        if not (domain(x) and domain(y)):
            return False
        return y[1] > x[1] or (y[1] == x[1] and y[0] > x[0])

    def sample(x, rng):
        if rng.random() < 0.8 and x[1] < 1:
            y2 = x[1] + (1 - x[1]) * rng.random()
            if y2 > x[1]:
                return (rng.random(), y2)
        if x[0] < 1:
            y1 = x[0] + (1 - x[0]) * rng.random()
            if y1 > x[0]:
                return (y1, x[1])
        return None

    return TransitionOracle(
        name="lexicographic",
        dimension=2,
        spec={"system": "lexicographic", "params": {}},
        domain=domain,
        contains=contains,
        sample_transition=sample,
        default_dominance=Pareto(),
        default_start=(0.5, 0.5),
        notes="no invariant at continuum scale; finite discretizations admit invariants",
        tolerance=tolerance,
    )


_FOUR_STATES = ((1.0, 3.0), (1.0, 4.0), (2.0, 1.0), (2.0, 2.0))
_FOUR_EDGES = ((1, 2), (3, 0))  # (1,4) -> (2,1) and (2,2) -> (1,3)


def four_state_system() -> FiniteMarketSystem:
    """The four-point system that is arbitrage-free but has no increasing invariant."""
    return FiniteMarketSystem.build([(1, 3), (1, 4), (2, 1), (2, 2)], _FOUR_EDGES)


def make_four_state_counterexample(tolerance: float = 1e-9) -> TransitionOracle:
    edges = {(_FOUR_STATES[i], _FOUR_STATES[j]) for i, j in _FOUR_EDGES}

    def contains(x, y):
        return (tuple(x), tuple(y)) in edges

    def sample(x, rng):
        nxt = [b for a, b in edges if a == tuple(x)]
        return nxt[0] if nxt else None

    return TransitionOracle(
        name="four_state_counterexample",
        dimension=2,
        spec={"system": "four_state_counterexample", "params": {}},
        domain=lambda x: tuple(x) in _FOUR_STATES,
        contains=contains,
        sample_transition=sample,
        default_dominance=Pareto(),
        default_start=(1.0, 4.0),
        tolerance=tolerance,
        finite_system=four_state_system(),
    )


def make_simplex(tolerance: float = 1e-9) -> TransitionOracle:
    """Moves along the unit simplex that strictly raise the first coordinate."""

    def domain(x):
        return len(x) == 2 and all(v >= -tolerance for v in x) and rel_eq(x[0] + x[1], 1.0, tolerance)

    def contains(x, y):
        return domain(x) and domain(y) and y[0] > x[0]

    def sample(x, rng):
        if x[0] >= 1:
            return None
        y1 = x[0] + (1 - x[0]) * rng.random()
        if y1 <= x[0]:
            return None
        return (y1, 1 - y1)

    return TransitionOracle(
        name="simplex",
        dimension=2,
        spec={"system": "simplex", "params": {}},
        domain=domain,
        contains=contains,
        sample_transition=sample,
        default_dominance=Pareto(),
        default_start=(0.5, 0.5),
        candidate_invariant=lambda x: x[0],
        candidate_invariant_name="x1",
        tolerance=tolerance,
    )


# ---------------------------------------------------------------------------
# registry


def _build_naive_lift(params: dict, tolerance: float) -> TransitionOracle:
    base_spec = params.get("base", {"system": "sqrt_cfmm", "params": {"fee": 0.2}})
    return naive_lift(make_system(base_spec, tolerance=tolerance), tolerance=tolerance)


def _build_proper_lift(params: dict, tolerance: float) -> TransitionOracle:
    base_spec = params.get("base", {"system": "sqrt_cfmm", "params": {"fee": 0.2}})
    return lift_with_liquidity(
        make_system(base_spec, tolerance=tolerance),
        xi=float(params.get("xi", 1.0)),
        mode=params.get("mode", "exact"),
        tolerance=tolerance,
    )


_REGISTRY: dict[str, tuple[Callable, dict, str]] = {
    "cpmm_fee": (
        lambda p, tol: make_cpmm_fee(float(p.get("fee", 0.003)), tol),
        {"fee": 0.003},
        "constant-product pool, fee on the incoming leg",
    ),
    "uniswap_v2_full": (
        lambda p, tol: make_uniswap_v2_full(float(p.get("fee", 0.003)), tol),
        {"fee": 0.003},
        "constant-product with shares: swaps, scalings, donations as separate steps",
    ),
    "uniswap_v2_mprime": (
        lambda p, tol: make_uniswap_v2_mprime(float(p.get("fee", 0.003)), tol),
        {"fee": 0.003},
        "constant-product with shares, combined swap-and-donate steps",
    ),
    "sushi_admin_fee": (
        lambda p, tol: make_sushi_admin_fee(float(p.get("fee", 0.003)), tol),
        {"fee": 0.003},
        "pool fee plus dilutive admin-fee minting of shares",
    ),
    "stableswap": (
        lambda p, tol: make_stableswap(float(p.get("A", 10.0)), int(p.get("n", 2)), tol),
        {"A": 10.0, "n": 2},
        "StableSwap pool; value function is the solved root",
    ),
    "two_pool_cpmm": (
        lambda p, tol: make_two_pool_cpmm(tol),
        {},
        "two uncoordinated constant-product pools on the same assets",
    ),
    "uniswap_v3": (
        lambda p, tol: make_uniswap_v3(tuple(p.get("ticks", (1.0, 2.0, 3.0))), tol),
        {"ticks": [1.0, 2.0, 3.0]},
        "range-liquidity pool network on a tick grid",
    ),
    "sqrt_cfmm": (
        lambda p, tol: make_sqrt_cfmm(float(p.get("fee", 0.0)), tol),
        {"fee": 0.0},
        "nonhomogeneous x1 + sqrt(x2) pool, optional fee",
    ),
    "naive_lift": (
        _build_naive_lift,
        {"base": {"system": "sqrt_cfmm", "params": {"fee": 0.2}}},
        "share scaling bolted onto a base pool without per-share rescaling",
    ),
    "proper_lift": (
        _build_proper_lift,
        {"base": {"system": "sqrt_cfmm", "params": {"fee": 0.2}}, "xi": 1.0, "mode": "exact"},
        "share scaling added via per-share rescaling of the base rule",
    ),
    "lexicographic": (
        lambda p, tol: make_lexicographic(tol),
        {},
        "lexicographic upward moves on the unit square",
    ),
    "four_state_counterexample": (
        lambda p, tol: make_four_state_counterexample(tol),
        {},
        "four states, two trades; arbitrage-free but no increasing invariant",
    ),
    "simplex": (
        lambda p, tol: make_simplex(tol),
        {},
        "unit-simplex system with strictly increasing first coordinate",
    ),
}


def make_system(spec: dict | str, tolerance: float = 1e-9) -> TransitionOracle:
    """Build a catalog oracle from {"system": name, "params": {...}}."""
    if isinstance(spec, str):
        spec = {"system": spec}
    name = spec.get("system")
    if name not in _REGISTRY:
        raise SpecError(f"unknown system {name!r}; known: {sorted(_REGISTRY)}")
    builder, _, _ = _REGISTRY[name]
    return builder(spec.get("params", {}), tolerance)


def catalog_entries() -> list[dict]:
    """Metadata for every registered system, for listings and reports."""
    out = []
    for name in sorted(_REGISTRY):
        _, defaults, summary = _REGISTRY[name]
        oracle = make_system({"system": name, "params": defaults})
        out.append(
            {
                "system": name,
                "summary": summary,
                "default_params": defaults,
                "dimension": oracle.dimension,
                "candidate_invariant": oracle.candidate_invariant_name,
                "default_dominance": oracle.default_dominance.to_json(),
                "notes": oracle.notes,
            }
        )
    return out
