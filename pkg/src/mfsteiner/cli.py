"""Command-line interface.

Subcommands: gen, steiner, wkl, ballgrow, check (lemma2|flemma|coupling|mgf),
experiment.  Global flags: --seed, --threads, --out, --format.  Exit codes:
0 success, 2 configuration error, 3 systemic per-trial failure (more than
half of all trials failed).
"""

from __future__ import annotations

import argparse
import math
import sys

from . import ballgrow, harness, maximal, steiner, theory
from .errors import CapabilityError, ConfigError
from .instance import Seed, gen_instance


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {exc}")


def build_parser() -> argparse.ArgumentParser:
    # the global flags are accepted both before and after the subcommand;
    # the SUPPRESS defaults keep a post-subcommand parse from clobbering a
    # pre-subcommand value
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="master seed (default 0)")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="worker processes")
    common.add_argument("--out", default=argparse.SUPPRESS,
                        help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"),
                        default=argparse.SUPPRESS)

    top = argparse.ArgumentParser(
        prog="mfsteiner",
        description="Steiner trees and ball growth on complete graphs with "
        "Exp(1) edge weights",
        parents=[common],
    )
    sub = top.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[common], help="sample an instance and dump it")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--trial", type=int, default=0)
    gen.add_argument("--purpose", default="gen")
    gen.add_argument("--binary", action="store_true", help="write .npy instead")

    st = sub.add_parser("steiner", parents=[common], help="exact Steiner tree for a terminal set")
    st.add_argument("--n", type=int, required=True)
    st.add_argument("--terminals", type=_int_list, required=True,
                    help="comma-separated vertices, e.g. 1,2,5")
    st.add_argument("--trial", type=int, default=0)

    wk = sub.add_parser("wkl", parents=[common], help="worst-case Steiner weight W_{k,l}")
    wk.add_argument("--n", type=int, required=True)
    wk.add_argument("--k", type=int, required=True)
    wk.add_argument("--l", type=int, required=True)
    wk.add_argument("--trial", type=int, default=0)

    bg = sub.add_parser("ballgrow", parents=[common], help="run the staged ball-growth construction")
    bg.add_argument("--n", type=int, required=True)
    bg.add_argument("--k", type=int, required=True)
    bg.add_argument("--m", type=int, default=None, help="ball size override")
    bg.add_argument("--trial", type=int, default=0)
    bg.add_argument("--trace", action="store_true", help="include the full trace")

    ck = sub.add_parser("check", parents=[common], help="run a distributional or analytic check")
    ck.add_argument("what", choices=("lemma2", "flemma", "coupling", "mgf"))
    ck.add_argument("--n", type=int, default=100)
    ck.add_argument("--m", type=int, default=10, help="subset size (lemma2)")
    ck.add_argument("--k", type=int, default=2)
    ck.add_argument("--trials", type=int, default=10**4)
    ck.add_argument("--samples", type=int, default=10**5)
    ck.add_argument("--mu", type=float, default=1.0)
    ck.add_argument("--b", type=float, default=1.0)
    ck.add_argument("--alpha", type=float, default=None,
                    help="run the tail bound at this alpha (flemma)")
    ck.add_argument("--epsilon", type=float, default=None,
                    help="partition/tilt parameter (default: 0.5 for "
                    "coupling, 0.1 for mgf)")

    ex = sub.add_parser("experiment", parents=[common], help="Monte Carlo convergence experiment")
    ex.add_argument("--quantity", required=True, choices=harness.QUANTITIES)
    ex.add_argument("--k", type=int, default=0)
    ex.add_argument("--l", type=int, default=0)
    ex.add_argument("--n-grid", type=_int_list, required=True)
    ex.add_argument("--trials", type=int, required=True)
    ex.add_argument("--retain-trials", action="store_true")
    ex.add_argument("--compare-exact", action="store_true",
                    help="record ball-growth / exact Steiner ratios")
    return top


def _emit(args, payload: dict) -> None:
    text = harness.dumps_canonical(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args) -> int:
    inst = gen_instance(args.n, Seed(args.seed, args.purpose, args.trial))
    if args.out is None:
        raise ConfigError("gen requires --out")
    harness.save_instance(inst, args.out, "npy" if args.binary else "json")
    return 0


def _cmd_steiner(args) -> int:
    inst = gen_instance(args.n, Seed(args.seed, "steiner", args.trial))
    res = steiner.steiner_exact(inst, args.terminals)
    _emit(args, {
        "n": args.n,
        "terminals": list(res.terminals),
        "weight": res.weight,
        "edges": [list(e) for e in res.edges],
    })
    return 0


def _cmd_wkl(args) -> int:
    inst = gen_instance(args.n, Seed(args.seed, f"wkl:k={args.k}:l={args.l}",
                                     args.trial))
    weight, witness = maximal.w_max(inst, args.k, args.l)
    payload = {
        "n": args.n,
        "k": args.k,
        "l": args.l,
        "weight": weight,
        "witness": list(witness),
        "normalized": args.n * weight / math.log(args.n),
    }
    if args.k + args.l >= 2:
        payload["limit_constant"] = harness.limit_constant(args.k, args.l)
    _emit(args, payload)
    return 0


def _cmd_ballgrow(args) -> int:
    inst = gen_instance(args.n, Seed(args.seed, f"ballgrow:k={args.k}", args.trial))
    outcome = ballgrow.ball_growth_tree(inst, args.k, args.m)
    payload = harness.serialize_trace(outcome)
    if not args.trace:
        payload.pop("balls")
        payload.pop("annuli")
    _emit(args, payload)
    return 0


def _cmd_check(args) -> int:
    seed = Seed(args.seed, f"check:{args.what}", 0)
    rng = seed.generator()
    if args.epsilon is None:
        args.epsilon = 0.1 if args.what == "mgf" else 0.5
    if args.what == "lemma2":
        freq = theory.subset_intersection_empty_freq(
            args.n, args.m, args.k, args.trials, rng)
        bound = theory.lemma2_bound(args.n, args.m, args.k)
        rows = [{"check": "lemma2", "n": args.n, "m": args.m, "k": args.k,
                 "trials": args.trials, "freq": freq, "bound": bound,
                 "passed": freq <= bound + 3 * math.sqrt(bound * (1 - bound) / args.trials)}]
    elif args.what == "flemma":
        if args.alpha is None:
            from .stats import dkw_epsilon
            stat = theory.check_f_conditional_law(args.mu, args.b, args.samples, rng)
            thr = dkw_epsilon(args.samples, 0.01)
            rows = [{"check": "flemma_conditional", "mu": args.mu, "b": args.b,
                     "samples": args.samples, "statistic": stat,
                     "dkw_threshold": thr, "passed": stat <= thr}]
        else:
            freq, bound = theory.check_f_tail_bound(
                args.mu, args.b, args.alpha, args.samples, rng)
            rows = [{"check": "flemma_tail", "mu": args.mu, "b": args.b,
                     "alpha": args.alpha, "samples": args.samples,
                     "freq": freq, "bound": bound, "passed": True}]
    elif args.what == "coupling":
        from .stats import dkw_epsilon
        stat = theory.coupling_law_check(args.n, args.epsilon, args.k,
                                         args.trials, rng)
        thr = 2 * dkw_epsilon(args.trials, 0.01)
        rows = [{"check": "coupling", "n": args.n, "epsilon": args.epsilon,
                 "k": args.k, "trials": args.trials, "statistic": stat,
                 "threshold": thr, "passed": stat <= thr}]
    else:  # mgf
        t = (1 - 1 / math.log(args.n)) * (1 - args.epsilon)
        value = ballgrow.mgf_exact(args.n, args.k, t)
        rows = [{"check": "mgf", "n": args.n, "k": args.k, "t": t,
                 "value": value, "c_kn": ballgrow.c_kn(args.n, args.k),
                 "ratio": value / ballgrow.c_kn(args.n, args.k)}]
    _emit(args, {"version": harness.SCHEMA_VERSION,
                 "config": {"check": args.what, "seed": args.seed},
                 "rows": rows})
    return 0


def _cmd_experiment(args) -> int:
    cfg = harness.ExperimentConfig(
        quantity=args.quantity,
        k=args.k,
        l=args.l,
        n_grid=tuple(args.n_grid),
        trials=args.trials,
        master_seed=args.seed,
        workers=args.threads,
        retain_trials=args.retain_trials,
        compare_exact=args.compare_exact,
    )
    cfg.validate()
    report = (harness.compare_ballgrow_exact(cfg) if args.compare_exact
              else harness.run_experiment(cfg))
    if args.out:
        harness.emit_report(report, args.format, args.out)
    else:
        sys.stdout.write(harness.dumps_canonical(harness.report_payload(report)))
    if harness.systemic_failure(report):
        print(
            f"error: {report.total_failures}/{report.total_trials} trials failed",
            file=sys.stderr,
        )
        return 3
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "steiner": _cmd_steiner,
    "wkl": _cmd_wkl,
    "ballgrow": _cmd_ballgrow,
    "check": _cmd_check,
    "experiment": _cmd_experiment,
}


_GLOBAL_DEFAULTS = {"seed": 0, "threads": 1, "out": None, "format": "json"}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    # global flags carry SUPPRESS defaults (set_defaults would leak through
    # the shared parent actions into every subparser); fill them here
    for key, value in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, CapabilityError) as exc:
        # ConfigError and InfeasibleSizeError are ValueError subclasses
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        # a self-checking operation (e.g. the tail bound) failed its own check
        print(f"check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
