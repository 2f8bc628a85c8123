"""Command-line entry point: reproducible analyses emitting JSON reports.

Exit codes: 0 for a clean analysis, 2 when an arbitrage witness or an
invariant violation is found (machine-readable), 1 on usage or spec errors.
Reports echo their inputs, seeds, and tolerance defaults; identical inputs and
seeds reproduce reports byte for byte (timings are opt-in via --timings for
that reason).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .arbitrage import (
    ArbitrageWitness,
    FuzzConfig,
    discretize,
    find_arbitrage_finite,
    fuzz_trajectories,
    verify_witness,
)
from .catalog import catalog_entries, make_system, stableswap_f, stableswap_kappa
from .dominance import WeightedLP, make_dominance
from .errors import InvariantLabError
from .finite import (
    FiniteMarketSystem,
    condense,
    is_complete,
    is_giftable,
    is_remm,
    reachable_closure,
)
from .invariants import (
    InvariantCertificate,
    find_increasing_invariant,
    find_invariant,
    is_increasing_multi_invariant,
    is_unique_invariant,
    multi_invariant,
    multi_invariant_recovers,
    order_equivalent,
    sequal_invariant,
    split_invariant,
    verify_invariant,
)
from .theorems import run_all_suites


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; our contract reserves 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


def emit_report(report: dict, output: str | None = None) -> str:
    """Serialize a report with stable field order; write to stdout or a file."""
    text = json.dumps(report, indent=2) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return text


def _base_report(mode: str, seed: int, tolerance: float) -> dict:
    return {
        "schema_version": 1,
        "tool": {"name": "invariantlab", "version": __version__},
        "mode": mode,
        "defaults": {"seed": seed, "tolerance": tolerance},
    }


def _parse_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip() != "")
    except ValueError as exc:
        raise _UsageError(f"cannot parse number list {text!r}") from exc


def _parse_axes(text: str) -> list[list[float]]:
    return [list(_parse_floats(axis)) for axis in text.split(";") if axis.strip()]


def _oracle_from_args(args, tolerance: float):
    params = {}
    if args.fee is not None:
        params["fee"] = args.fee
    if args.amp is not None:
        params["A"] = args.amp
    if args.n is not None:
        params["n"] = args.n
    if args.ticks is not None:
        params["ticks"] = list(_parse_floats(args.ticks))
    if getattr(args, "xi", None) is not None:
        params["xi"] = args.xi
    if getattr(args, "mode", None) is not None:
        params["mode"] = args.mode
    if args.base is not None:
        base_params = {}
        if args.fee is not None:
            base_params["fee"] = args.fee
            params.pop("fee", None)
        if args.amp is not None:
            base_params["A"] = args.amp
            params.pop("A", None)
        params["base"] = {"system": args.base, "params": base_params}
    return make_system({"system": args.system, "params": params}, tolerance=tolerance)


def _dominance_from_args(args, oracle=None):
    if args.dominance is None or args.dominance == "default":
        if oracle is None:
            return make_dominance("pareto")
        return oracle.default_dominance
    kind = args.dominance.replace("-", "_")
    params = {}
    if kind == "sum_of_pairs" and getattr(args, "groups", None):
        params["groups"] = [list(map(int, g.split(","))) for g in args.groups.split(";")]
    if kind == "component_pair":
        pair = getattr(args, "components", None) or "0,1"
        i, j = (int(v) for v in pair.split(","))
        params = {"i": i, "j": j}
    if kind == "weighted_lp":
        weights = getattr(args, "weights", None)
        ticks = getattr(args, "ticks", None)
        if ticks is None and oracle is not None and isinstance(oracle.default_dominance, WeightedLP):
            tick_values = oracle.default_dominance.ticks
        elif ticks is not None:
            tick_values = _parse_floats(ticks)
        else:
            raise _UsageError("weighted-lp dominance needs --ticks")
        w = _parse_floats(weights) if weights else tuple(1.0 for _ in range(len(tick_values) - 1))
        params = {"w": list(w), "ticks": list(tick_values)}
    return make_dominance({"kind": kind, "params": params})


def _add_common(parser):
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tolerance", type=float, default=1e-9)
    parser.add_argument("--output", default=None)


def _add_system_args(parser):
    parser.add_argument("--system", default=None, help="catalog system name")
    parser.add_argument("--base", default=None, help="base system for lifted designs")
    parser.add_argument("--fee", type=float, default=None)
    parser.add_argument("--amp", "--A", dest="amp", type=float, default=None)
    parser.add_argument("--n", type=int, default=None)
    parser.add_argument("--ticks", default=None, help="comma-separated tick grid")
    parser.add_argument("--xi", type=float, default=None)
    parser.add_argument("--mode", choices=["exact", "inequality"], default=None)


def _add_dominance_args(parser):
    parser.add_argument(
        "--dominance",
        default=None,
        help="pareto | pareto-per-share | sum-of-pairs | component-pair | weighted-lp | default",
    )
    parser.add_argument("--groups", default=None, help="e.g. '0,2;1,3' for sum-of-pairs")
    parser.add_argument("--components", default=None, help="e.g. '0,1' for component-pair")
    parser.add_argument("--weights", default=None, help="weights for weighted-lp")


def build_parser() -> _Parser:
    parser = _Parser(prog="invariantlab", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list the built-in market systems")
    _add_common(p)

    p = sub.add_parser("analyze", help="full analysis of a finite system")
    p.add_argument("file", nargs="?", default=None, help="finite-system JSON file")
    _add_system_args(p)
    p.add_argument("--grid", default=None, help="per-axis values, e.g. '1,2,3;1,2,3'")
    p.add_argument("--transition-budget", type=int, default=0)
    _add_dominance_args(p)
    _add_common(p)

    p = sub.add_parser("fuzz", help="seeded random walks over a catalog system")
    _add_system_args(p)
    _add_dominance_args(p)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--start", default=None, help="comma-separated start state")
    p.add_argument("--max-recorded", type=int, default=50)
    p.add_argument("--timings", action="store_true")
    _add_common(p)

    p = sub.add_parser("solve-stableswap", help="solve the StableSwap pool value")
    p.add_argument("--balances", required=True)
    p.add_argument("--amp", "--A", dest="amp", type=float, required=True)
    p.add_argument("--n", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("verify-witness", help="replay a witness file against a system")
    p.add_argument("file", help="witness JSON file")
    p.add_argument("--finite", default=None, help="finite-system JSON file to check against")
    _add_system_args(p)
    _add_dominance_args(p)
    _add_common(p)

    p = sub.add_parser("theorems", help="run the finite property suites")
    p.add_argument("--trials", type=int, default=1000)
    _add_common(p)
    return parser


def _cmd_catalog(args) -> int:
    report = _base_report("catalog", args.seed, args.tolerance)
    report["systems"] = catalog_entries()
    emit_report(report, args.output)
    return 0


def _analyze_finite(system: FiniteMarketSystem, dominance, report: dict) -> int:
    closure = reachable_closure(system)
    cond = condense(closure)
    invariant = find_invariant(cond)
    inv_report = verify_invariant(system, closure, invariant)
    outcome = find_increasing_invariant(cond, dominance)
    increasing: dict = {"exists": isinstance(outcome, InvariantCertificate)}
    if isinstance(outcome, InvariantCertificate):
        increasing["certificate"] = outcome.to_json()
    else:
        increasing.update(outcome.to_json())
    unique = is_unique_invariant(cond)
    results = {
        "state_count": system.n_states,
        "transition_count": len(system.transitions),
        "class_count": cond.class_count,
        "complete": is_complete(closure),
        "remm": is_remm(closure),
        "giftable": is_giftable(closure, dominance),
        "invariant": {**invariant.to_json(), "verified": inv_report.closure_ok},
        "increasing_invariant": increasing,
        "unique_invariant": unique,
    }
    if not unique:
        pair = None
        for i in range(system.n_states):
            for j in range(i + 1, system.n_states):
                if not closure.reaches(i, j) and not closure.reaches(j, i):
                    pair = (i, j)
                    break
            if pair:
                break
        second = split_invariant(cond, invariant, *pair)
        results["split_invariant"] = {
            **second.to_json(),
            "verified": verify_invariant(system, closure, second).closure_ok,
            "order_equivalent_to_first": order_equivalent(invariant, second),
        }
    labeling = sequal_invariant(cond)
    if isinstance(labeling, InvariantCertificate):
        results["sequal"] = {"remm": True, **labeling.to_json()}
    else:
        results["sequal"] = labeling.to_json()
    multi = multi_invariant(closure)
    results["multi_invariant"] = {
        "family_size": len(multi.family),
        "recovery": multi_invariant_recovers(closure, multi),
        "increasing": is_increasing_multi_invariant(multi, dominance),
    }
    witness = find_arbitrage_finite(system, dominance)
    results["arbitrage"] = {"witness": witness.to_json() if witness else None}
    report["results"] = results
    return 2 if witness is not None else 0


def _cmd_analyze(args) -> int:
    report = _base_report("analyze", args.seed, args.tolerance)
    if args.file is not None:
        system = FiniteMarketSystem.load(args.file)
        report["input"] = {"path": args.file, "spec": system.to_json()}
        oracle = None
    elif args.system is not None:
        if args.grid is None:
            raise _UsageError("analyzing a catalog system needs --grid")
        oracle = _oracle_from_args(args, args.tolerance)
        axes = _parse_axes(args.grid)
        system = discretize(
            oracle, {"axes": axes}, transition_budget=args.transition_budget, seed=args.seed
        )
        report["input"] = {
            "system": oracle.spec,
            "grid": axes,
            "transition_budget": args.transition_budget,
            "snapped": system.to_json(),
        }
    else:
        raise _UsageError("analyze needs a finite-system file or --system with --grid")
    dominance = _dominance_from_args(args, oracle)
    report["dominance"] = dominance.to_json()
    code = _analyze_finite(system, dominance, report)
    emit_report(report, args.output)
    return code


def _cmd_fuzz(args) -> int:
    if args.system is None:
        raise _UsageError("fuzz needs --system")
    oracle = _oracle_from_args(args, args.tolerance)
    dominance = _dominance_from_args(args, oracle)
    config = FuzzConfig(
        trials=args.trials,
        steps=args.steps,
        seed=args.seed,
        start=_parse_floats(args.start) if args.start else None,
        tolerance=args.tolerance,
        max_recorded=args.max_recorded,
    )
    fuzz = fuzz_trajectories(oracle, dominance, config=config)
    report = _base_report("fuzz", args.seed, args.tolerance)
    report.update(fuzz.to_json(include_timing=args.timings))
    emit_report(report, args.output)
    return 0 if fuzz.clean else 2


def _cmd_solve_stableswap(args) -> int:
    balances = _parse_floats(args.balances)
    n = args.n if args.n is not None else len(balances)
    if n != len(balances):
        raise _UsageError(f"--n {n} does not match {len(balances)} balances")
    value = stableswap_kappa(balances, args.amp)
    report = _base_report("solve_stableswap", args.seed, args.tolerance)
    report["input"] = {"balances": list(balances), "A": args.amp, "n": n}
    report["results"] = {
        "kappa": value,
        "residual": stableswap_f(value, balances, args.amp),
    }
    emit_report(report, args.output)
    return 0


def _cmd_verify_witness(args) -> int:
    with open(args.file) as fh:
        witness = ArbitrageWitness.from_json(json.load(fh))
    if args.finite is not None:
        target = FiniteMarketSystem.load(args.finite)
        oracle = None
    elif args.system is not None:
        oracle = _oracle_from_args(args, args.tolerance)
        target = oracle
    else:
        raise _UsageError("verify-witness needs --finite FILE or --system NAME")
    if args.dominance is None and witness.kind:
        dominance = make_dominance(witness.kind)
    else:
        dominance = _dominance_from_args(args, oracle)
    valid = verify_witness(target, witness, dominance)
    report = _base_report("verify_witness", args.seed, args.tolerance)
    report["input"] = {"path": args.file, "witness": witness.to_json()}
    report["dominance"] = dominance.to_json()
    report["results"] = {"verified": valid}
    emit_report(report, args.output)
    return 2 if valid else 0


def _cmd_theorems(args) -> int:
    suites = run_all_suites(trials=args.trials, seed=args.seed)
    report = _base_report("theorems", args.seed, args.tolerance)
    report["trials"] = args.trials
    report["suites"] = {name: res.to_json() for name, res in suites.items()}
    report["all_ok"] = all(res.ok for res in suites.values())
    for name, res in suites.items():
        print(f"{name}: {'PASS' if res.ok else 'FAIL'} ({res.passed}/{res.trials})", file=sys.stderr)
    emit_report(report, args.output)
    return 0 if report["all_ok"] else 2


_COMMANDS = {
    "catalog": _cmd_catalog,
    "analyze": _cmd_analyze,
    "fuzz": _cmd_fuzz,
    "solve-stableswap": _cmd_solve_stableswap,
    "verify-witness": _cmd_verify_witness,
    "theorems": _cmd_theorems,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError:
        return 1
    except InvariantLabError as exc:
        print(f"invariantlab: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"invariantlab: io error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
