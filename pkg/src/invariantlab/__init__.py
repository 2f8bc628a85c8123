"""Verification toolkit for market systems given as state-transition rules.

Finite systems are analyzed exactly: reachability closure, equivalence-class
condensation, completeness/reversibility/giftability, invariant construction
and verification, increasing invariants or contradiction cycles, split
invariants, multi-invariants, and exhaustive arbitrage search. A catalog of
concrete AMM designs provides continuous transition oracles for seeded fuzz
harnesses.
"""

__version__ = "0.1.0"

from .arbitrage import (
    ArbitrageWitness,
    FuzzConfig,
    FuzzReport,
    discretize,
    find_arbitrage_finite,
    fuzz_trajectories,
    verify_witness,
)
from .catalog import (
    FeeSchedule,
    TransitionOracle,
    V3State,
    catalog_entries,
    cpmm_quote,
    four_state_system,
    lift_with_liquidity,
    make_system,
    naive_lift,
    stableswap_f,
    stableswap_kappa,
    sushi_mint,
    v3_balances,
    v3_contains,
)
from .dominance import (
    ComponentPair,
    DominanceOracle,
    Pareto,
    ParetoPerShare,
    SumOfPairs,
    WeightedLP,
    check_strict_partial_order,
    make_dominance,
    weighted_lp_sums,
)
from .errors import (
    ConvergenceError,
    DomainError,
    GridError,
    InvariantLabError,
    PreconditionError,
    SpecError,
    TickMismatchError,
)
from .finite import (
    Condensation,
    FiniteMarketSystem,
    PairOrder,
    ReachabilityClosure,
    classify_pair,
    condense,
    is_complete,
    is_giftable,
    is_remm,
    reachable_closure,
)
from .invariants import (
    CycleWitness,
    InvariantCertificate,
    MultiInvariant,
    NotRemm,
    VerificationReport,
    find_increasing_invariant,
    find_invariant,
    is_increasing_multi_invariant,
    is_unique_invariant,
    is_weak_invariant,
    multi_invariant,
    multi_invariant_recovers,
    order_equivalent,
    remm_class_comparability,
    sequal_invariant,
    split_invariant,
    verify_invariant,
)
from .randomsys import random_giftable_system, random_remm_system, random_system
from .theorems import SUITES, SuiteResult, run_all_suites
