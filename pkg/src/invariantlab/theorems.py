"""Property suites over random finite systems.

Each suite replays one theorem-level equivalence across many randomly
generated systems, comparing two independently computed sides (for example
exhaustive arbitrage search against constraint-digraph feasibility). Per-trial
seeds derive from the root seed, the suite name, and the trial index, so
trials are order-independent and suites are reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .arbitrage import find_arbitrage_finite, verify_witness
from .dominance import Pareto
from .finite import condense, is_complete, is_giftable, is_remm, reachable_closure
from .invariants import (
    InvariantCertificate,
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


@dataclass
class SuiteResult:
    name: str
    trials: int
    seed: int
    passed: int = 0
    failed: int = 0
    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)  # first few failing trials, for triage

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, trial: int, ok: bool, detail: str = ""):
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < 5:
                self.failures.append({"trial": trial, "detail": detail})

    def bump(self, key: str):
        self.counts[key] = self.counts.get(key, 0) + 1

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "seed": self.seed,
            "passed": self.passed,
            "failed": self.failed,
            "ok": self.ok,
            "counts": {k: self.counts[k] for k in sorted(self.counts)},
            "failures": self.failures,
        }


def _trial_rng(seed: int, suite: str, trial: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{trial}")


def suite_existence(trials: int = 1000, seed: int = 0) -> SuiteResult:
    """Every finite system admits a verified invariant; one-step validity implies closure validity."""
    res = SuiteResult("existence", trials, seed)
    for t in range(trials):
        rng = _trial_rng(seed, "existence", t)
        system = random_system(rng)
        closure = reachable_closure(system)
        cond = condense(closure)
        cert = find_invariant(cond)
        report = verify_invariant(system, closure, cert)
        ok = report.closure_ok
        if not ok:
            res.record(t, False, "constructed invariant failed verification")
            continue
        # Random labelings: whenever the one-step conditions hold, the closure
        # conditions must hold as well.
        values = [Fraction(rng.randint(0, 4)) for _ in range(system.n_states)]
        rnd = verify_invariant(system, closure, values)
        if rnd.one_step_ok:
            res.bump("one_step_valid_random_labelings")
            ok = rnd.closure_ok
        res.record(t, ok, "one-step validity did not imply closure validity")
    return res


def suite_first_fundamental(trials: int = 1000, seed: int = 0) -> SuiteResult:
    """On giftable systems: arbitrage-freedom iff an increasing invariant exists."""
    dom = Pareto()
    res = SuiteResult("first_fundamental", trials, seed)
    for t in range(trials):
        rng = _trial_rng(seed, "first", t)
        system = random_giftable_system(rng, dominance=dom)
        closure = reachable_closure(system)
        if not is_giftable(closure, dom):
            res.record(t, False, "generator produced a non-giftable system")
            continue
        witness = find_arbitrage_finite(system, dom)
        outcome = find_increasing_invariant(condense(closure), dom)
        has_certificate = isinstance(outcome, InvariantCertificate)
        if witness is not None:
            res.bump("arbitrage_found")
            if not verify_witness(system, witness, dom):
                res.record(t, False, "search returned an unverifiable witness")
                continue
            res.record(t, not has_certificate, "witness and increasing invariant coexist")
        else:
            res.bump("arbitrage_free")
            if not has_certificate:
                res.record(t, False, "arbitrage-free but no increasing invariant")
                continue
            report = verify_invariant(system, closure, outcome, dominance=dom)
            weak = is_weak_invariant(closure, outcome)
            res.record(
                t,
                report.closure_ok and report.increasing_ok and weak,
                "increasing certificate failed verification or weak-invariant check",
            )
    return res


def suite_second_fundamental(trials: int = 1000, seed: int = 0) -> SuiteResult:
    """Uniqueness iff completeness; incomplete systems split into a second invariant."""
    res = SuiteResult("second_fundamental", trials, seed)
    for t in range(trials):
        rng = _trial_rng(seed, "second", t)
        system = random_system(rng)
        closure = reachable_closure(system)
        cond = condense(closure)
        unique = is_unique_invariant(cond)
        complete = is_complete(closure)
        if unique != complete:
            res.record(t, False, f"unique={unique} but complete={complete}")
            continue
        cert = find_invariant(cond)
        if complete:
            res.bump("complete")
            # Recovery, plus order-equivalence of any increasing relabeling.
            recovered = all(
                (cert.values[i] <= cert.values[j]) == closure.reaches(i, j)
                for i in range(system.n_states)
                for j in range(system.n_states)
            )
            ladder = sorted(set(cert.values))
            relabel = {v: Fraction(rng.randint(1, 3) + 5 * k) for k, v in enumerate(ladder)}
            other = InvariantCertificate(
                tuple(relabel[v] for v in cert.values), "external"
            )
            same_order = order_equivalent(cert, other)
            res.record(t, recovered and same_order, "complete system failed recovery/uniqueness")
        else:
            res.bump("incomplete")
            pair = None
            for i in range(system.n_states):
                for j in range(i + 1, system.n_states):
                    if not closure.reaches(i, j) and not closure.reaches(j, i):
                        pair = (i, j)
                        break
                if pair:
                    break
            assert pair is not None
            second = split_invariant(cond, cert, *pair)
            ok = (
                verify_invariant(system, closure, second).closure_ok
                and not order_equivalent(cert, second)
            )
            res.record(t, ok, "split invariant invalid or order-equivalent")
    return res


def suite_multi_invariant(trials: int = 1000, seed: int = 0) -> SuiteResult:
    """Up-set families recover every system; on giftable systems increasing iff arbitrage-free."""
    dom = Pareto()
    res = SuiteResult("multi_invariant", trials, seed)
    for t in range(trials):
        rng = _trial_rng(seed, "multi", t)
        system = random_system(rng)
        closure = reachable_closure(system)
        multi = multi_invariant(closure)
        ok = multi_invariant_recovers(closure, multi)
        if not ok:
            res.record(t, False, "recovery failed")
            continue
        if is_giftable(closure, dom):
            res.bump("giftable_random")
            inc = is_increasing_multi_invariant(multi, dom)
            free = find_arbitrage_finite(system, dom) is None
            ok = inc == free
        # A guaranteed-giftable companion system keeps the equivalence non-vacuous.
        gift = random_giftable_system(rng, dominance=dom)
        gclosure = reachable_closure(gift)
        gmulti = multi_invariant(gclosure)
        ginc = is_increasing_multi_invariant(gmulti, dom)
        gfree = find_arbitrage_finite(gift, dom) is None
        res.bump("giftable_agree" if ginc == gfree else "giftable_disagree")
        res.record(
            t,
            ok and multi_invariant_recovers(gclosure, gmulti) and ginc == gfree,
            "multi-invariant recovery or increasing/arbitrage agreement failed",
        )
    return res


def suite_remm(trials: int = 1000, seed: int = 0) -> SuiteResult:
    """Equal-invariant labelings exist iff reversible; reversible arbitrage-freedom iff antichain classes."""
    dom = Pareto()
    res = SuiteResult("remm", trials, seed)
    for t in range(trials):
        rng = _trial_rng(seed, "remm", t)
        system = random_system(rng)
        closure = reachable_closure(system)
        cond = condense(closure)
        remm = is_remm(closure)
        labeling = sequal_invariant(cond)
        got_labels = isinstance(labeling, InvariantCertificate)
        ok = got_labels == remm
        if ok and got_labels:
            res.bump("remm_random")
            ok = all(
                (labeling.values[i] == labeling.values[j]) == closure.reaches(i, j)
                for i in range(system.n_states)
                for j in range(system.n_states)
                if i != j
            )
        if not ok:
            res.record(t, False, "equal-labeling existence disagreed with reversibility")
            continue
        rsys = random_remm_system(rng)
        rclosure = reachable_closure(rsys)
        rcond = condense(rclosure)
        antichain = True
        for members in rcond.classes:
            for a in members:
                for b in members:
                    if a != b and dom.dominates(rsys.states[a], rsys.states[b]):
                        antichain = False
        free = find_arbitrage_finite(rsys, dom) is None
        res.bump("remm_arb_free" if free else "remm_arb_found")
        res.record(
            t,
            antichain == free == remm_class_comparability(rcond, dom),
            "reversible arbitrage-freedom disagreed with the antichain test",
        )
    return res


SUITES = {
    "existence": suite_existence,
    "first_fundamental": suite_first_fundamental,
    "second_fundamental": suite_second_fundamental,
    "multi_invariant": suite_multi_invariant,
    "remm": suite_remm,
}


def run_all_suites(trials: int = 1000, seed: int = 0) -> dict[str, SuiteResult]:
    return {name: fn(trials, seed) for name, fn in SUITES.items()}
