"""Monte Carlo experiment orchestration, reporting, and serialization.

Experiments are pure functions of their configuration: every (n, trial) cell
derives its own random substream from the master seed, trials are reduced in
trial-index order, and the emitters render numbers with 17 significant digits
in a canonical key order.  Reports are therefore byte-identical across runs
and across worker counts.  Wall-clock time is kept on the in-memory report
only and never serialized.

Normalized statistics are n * w / ln n (natural log), the scale on which the
limit constants live.  MST weights are reported raw.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from time import perf_counter

import numpy as np

from . import ballgrow, maximal, steiner, theory
from .errors import CapabilityError, ConfigError, InfeasibleSizeError
from .instance import Instance, Seed, gen_instance

__all__ = [
    "ExperimentConfig",
    "ExperimentReport",
    "limit_constant",
    "run_experiment",
    "compare_ballgrow_exact",
    "emit_report",
    "dumps_canonical",
    "serialize_trace",
    "save_instance",
    "load_instance",
    "QUANTITIES",
]

SCHEMA_VERSION = 1
ROW_FIELDS = (
    "quantity",
    "k",
    "l",
    "n",
    "trials",
    "mean",
    "sd",
    "q05",
    "q50",
    "q95",
    "limit_constant",
    "failures",
)
QUANTITIES = ("W", "ball_growth", "mst", "lemma2", "f_lemma", "coupling", "mgf")


def limit_constant(k: int, l: int) -> int:
    """Limit of n*W_{k,l}/ln n: k + 2l - 1.

    Specializes to k - 1 for l = 0 and 2l - 1 for k = 0.  Undefined for
    k + l <= 1 (the weight is identically zero).
    """
    if k < 0 or l < 0 or k + l <= 1:
        raise ValueError("limit constant needs k, l >= 0 with k + l >= 2")
    return k + 2 * l - 1


@dataclass(frozen=True)
class ExperimentConfig:
    quantity: str
    n_grid: tuple[int, ...]
    trials: int
    master_seed: int
    k: int = 0
    l: int = 0
    workers: int = 1
    retain_trials: bool = False
    compare_exact: bool = False
    params: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.quantity not in QUANTITIES:
            raise ConfigError(
                f"unknown quantity {self.quantity!r}; expected one of {QUANTITIES}"
            )
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if not self.n_grid or any(n < 2 for n in self.n_grid):
            raise ConfigError("n_grid must be nonempty with entries >= 2")
        if list(self.n_grid) != sorted(set(self.n_grid)):
            raise ConfigError("n_grid must be strictly increasing")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.k < 0 or self.l < 0:
            raise ConfigError("k and l must be nonnegative")
        if self.quantity == "W" and self.k + self.l < 1:
            raise ConfigError("quantity W needs k + l >= 1")
        if self.quantity == "ball_growth" and self.k < 1:
            raise ConfigError("ball_growth needs k >= 1")
        if self.compare_exact and (self.quantity != "ball_growth" or self.k < 2):
            raise ConfigError(
                "the ball-growth/exact ratio needs quantity ball_growth with "
                "k >= 2 (for k = 1 both weights are identically 0)"
            )
        # feasibility is deterministic per grid point, so reject before any work
        if self.quantity == "ball_growth" and self.k >= 2:
            for n in self.n_grid:
                m = math.ceil(ballgrow.c_kn(n, self.k))
                if 2 * self.k * m > n:
                    raise ConfigError(
                        f"ball growth infeasible at n={n}: 2*k*m = "
                        f"{2 * self.k * m} exceeds n"
                    )
        if self.quantity == "W":
            if self.k + self.l > steiner.KMAX_DEFAULT:
                raise ConfigError(
                    f"k + l = {self.k + self.l} exceeds the Steiner terminal cap"
                )
            if self.l >= 2:
                for n in self.n_grid:
                    count = math.comb(n - self.k, self.l)
                    if count > maximal.DEFAULT_BUDGET:
                        raise ConfigError(
                            f"W({self.k},{self.l}) at n={n} needs {count} subset "
                            f"evaluations, over the budget of {maximal.DEFAULT_BUDGET}"
                        )

    def limit(self) -> int | None:
        if self.quantity == "W" and self.k + self.l >= 2:
            return limit_constant(self.k, self.l)
        if self.quantity == "ball_growth" and self.k >= 2:
            # asymptotic weight of the constructed tree: k balls of radius
            # (2 - 1/k) ln n / n
            return 2 * self.k - 1
        return None

    def to_dict(self) -> dict:
        # the worker count is execution machinery, not experiment identity,
        # and is deliberately absent so reports are byte-identical across
        # worker counts
        return {
            "quantity": self.quantity,
            "k": self.k,
            "l": self.l,
            "n_grid": list(self.n_grid),
            "trials": self.trials,
            "master_seed": self.master_seed,
            "retain_trials": self.retain_trials,
            "compare_exact": self.compare_exact,
            "params": dict(self.params),
        }


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list[dict]
    trial_values: dict[int, list] = field(default_factory=dict)
    wall_clock: float = 0.0

    @property
    def total_trials(self) -> int:
        return sum(r["trials"] for r in self.rows)

    @property
    def total_failures(self) -> int:
        return sum(r["failures"] for r in self.rows)


def systemic_failure(report: ExperimentReport) -> bool:
    """More than half of all trials failed (CLI exit code 3)."""
    return report.total_failures * 2 > report.total_trials


def _seed_for(cfg: ExperimentConfig, n: int, trial: int) -> Seed:
    purpose = f"{cfg.quantity}:k={cfg.k}:l={cfg.l}:n={n}"
    return Seed(cfg.master_seed, purpose, trial)


def _trial_value(cfg: ExperimentConfig, n: int, trial: int):
    """One Monte Carlo cell.  Returns (value, failed); capability and
    feasibility shortfalls are per-trial data, not aborts."""
    seed = _seed_for(cfg, n, trial)
    p = cfg.params
    try:
        if cfg.quantity == "W":
            inst = gen_instance(n, seed)
            weight, _ = maximal.w_max(inst, cfg.k, cfg.l)
            return n * weight / math.log(n), 0
        if cfg.quantity == "ball_growth":
            inst = gen_instance(n, seed)
            out = ballgrow.ball_growth_tree(inst, cfg.k)
            if out.status != "success":
                return None, 1
            if cfg.compare_exact:
                exact = steiner.steiner_exact(inst, range(1, cfg.k + 1)).weight
                return out.weight / exact, 0
            return n * out.weight / math.log(n), 0
        if cfg.quantity == "mst":
            inst = gen_instance(n, seed)
            return steiner.mst(inst), 0
        if cfg.quantity == "lemma2":
            freq = theory.subset_intersection_empty_freq(
                n, int(p.get("m", 10)), cfg.k or 2, int(p.get("inner", 1000)),
                seed.generator(),
            )
            return freq, 0
        if cfg.quantity == "f_lemma":
            stat = theory.check_f_conditional_law(
                float(p.get("mu", 1.0)), float(p.get("b", 1.0)),
                int(p.get("samples", 10**4)), seed.generator(),
            )
            return stat, 0
        if cfg.quantity == "coupling":
            stat = theory.coupling_law_check(
                n, float(p.get("epsilon", 0.5)), cfg.k or 1,
                int(p.get("inner", 1000)), seed.generator(),
            )
            return stat, 0
        if cfg.quantity == "mgf":
            eps = float(p.get("epsilon", 0.1))
            t = (1.0 - 1.0 / math.log(n)) * (1.0 - eps)
            return ballgrow.mgf_exact(n, cfg.k or 2, t) / ballgrow.c_kn(n, cfg.k or 2), 0
    except (CapabilityError, InfeasibleSizeError):
        return None, 1
    raise ConfigError(f"unknown quantity {cfg.quantity!r}")


def _row(cfg: ExperimentConfig, n: int, values: list, failures: int) -> dict:
    ok = np.array([v for v in values if v is not None], dtype=np.float64)
    if ok.size:
        q05, q50, q95 = np.quantile(ok, [0.05, 0.5, 0.95], method="linear")
        stats = {
            "mean": float(np.mean(ok)),
            "sd": float(np.std(ok, ddof=1)) if ok.size > 1 else 0.0,
            "min": float(np.min(ok)),
            "max": float(np.max(ok)),
            "q05": float(q05),
            "q50": float(q50),
            "q95": float(q95),
        }
    else:
        stats = {k: None for k in ("mean", "sd", "min", "max", "q05", "q50", "q95")}
    return {
        "quantity": cfg.quantity,
        "k": cfg.k,
        "l": cfg.l,
        "n": n,
        "trials": len(values),
        "failures": failures,
        "limit_constant": cfg.limit(),
        **stats,
    }


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Run every (n, trial) cell and aggregate deterministically.

    With ``workers > 1`` the trials are distributed over a process pool;
    results are still reduced in trial order, so the report does not depend
    on the worker count.
    """
    cfg.validate()
    start = perf_counter()
    rows = []
    trial_values: dict[int, list] = {}
    for n in cfg.n_grid:
        args = [(cfg, n, t) for t in range(cfg.trials)]
        if cfg.workers == 1:
            results = [_trial_value(*a) for a in args]
        else:
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                results = list(pool.map(_trial_value_star, args, chunksize=16))
        values = [v for v, _ in results]
        failures = sum(f for _, f in results)
        rows.append(_row(cfg, n, values, failures))
        if cfg.retain_trials:
            trial_values[n] = values
    return ExperimentReport(
        config=cfg,
        rows=rows,
        trial_values=trial_values,
        wall_clock=perf_counter() - start,
    )


def _trial_value_star(args):
    return _trial_value(*args)


def compare_ballgrow_exact(cfg: ExperimentConfig) -> ExperimentReport:
    """Ball-growth tree weight over exact Steiner weight, per trial.

    Ratios are >= 1 by Steiner minimality.  The failure column counts
    intersection failures; the config echo carries the reference failure
    bound n^-(k+1) per grid point.
    """
    if not cfg.compare_exact:
        from dataclasses import replace

        cfg = replace(cfg, compare_exact=True)
    cfg.validate()
    report = run_experiment(cfg)
    cfg.params["failure_bound"] = {
        str(n): float(n) ** -(cfg.k + 1) for n in cfg.n_grid
    }
    return report


# --------------------------------------------------------------------------
# canonical serialization


def _render(obj, out: list) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError("reports must not contain NaN or infinity")
        out.append(format(obj + 0.0, ".17g"))
    elif isinstance(obj, str):
        out.append('"' + obj.translate(_STR_ESCAPES) + '"')
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if i:
                out.append(",")
            if not isinstance(key, str):
                raise TypeError("object keys must be strings")
            _render(key, out)
            out.append(":")
            _render(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _render(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


_STR_ESCAPES = {
    ord("\\"): "\\\\",
    ord('"'): '\\"',
    **{c: f"\\u{c:04x}" for c in range(0x20)},
}
_STR_ESCAPES[ord("\n")] = "\\n"
_STR_ESCAPES[ord("\t")] = "\\t"
_STR_ESCAPES[ord("\r")] = "\\r"


def dumps_canonical(obj) -> str:
    """Compact JSON with sorted keys and 17-significant-digit floats.

    Round-trip stable: parsing the output and re-rendering it reproduces the
    bytes (floats re-read to the same double; -0.0 is normalized to 0).
    """
    out: list[str] = []
    _render(obj, out)
    out.append("\n")
    return "".join(out)


def report_payload(report: ExperimentReport) -> dict:
    payload = {
        "version": SCHEMA_VERSION,
        "config": report.config.to_dict(),
        "rows": [{k: row[k] for k in ROW_FIELDS} for row in report.rows],
    }
    if report.config.retain_trials:
        payload["trial_records"] = {
            str(n): vals for n, vals in report.trial_values.items()
        }
    return payload


def _fmt_csv(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def emit_report(report: ExperimentReport, fmt: str, path: str) -> None:
    """Write the report as canonical JSON or CSV (UTF-8, LF line endings)."""
    if fmt == "json":
        text = dumps_canonical(report_payload(report))
    elif fmt == "csv":
        lines = [",".join(ROW_FIELDS)]
        for row in report.rows:
            lines.append(",".join(_fmt_csv(row[k]) for k in ROW_FIELDS))
        text = "\n".join(lines) + "\n"
    else:
        raise ConfigError(f"unknown report format {fmt!r}")
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path!r}: {exc}") from exc


def serialize_trace(outcome: ballgrow.BallGrowthOutcome) -> dict:
    """JSON-ready dict of a ball-growth outcome and its full trace."""
    trace = outcome.trace
    return {
        "status": outcome.status,
        "meeting_vertex": outcome.meeting_vertex,
        "weight": outcome.weight,
        "certificate": outcome.certificate,
        "edges": [list(e) for e in outcome.edges],
        "m": trace.m,
        "balls": [
            {
                "root": b.root,
                "vertices": b.vertices.tolist(),
                "arrivals": b.arrivals.tolist(),
                "parents": b.parents.tolist(),
                "z1": b.duration,
            }
            for b in trace.balls
        ],
        "annuli": [
            {
                "vertices": a.vertices.tolist(),
                "arrivals": a.arrivals.tolist(),
                "parents": a.parents.tolist(),
                "z2": a.duration,
            }
            for a in trace.annuli
        ],
    }


def save_instance(inst: Instance, path: str, fmt: str = "json") -> None:
    """Dump an instance: canonical JSON or .npy binary of the packed weights."""
    if fmt == "json":
        seed = inst.seed
        payload = {
            "version": SCHEMA_VERSION,
            "n": inst.n,
            "seed": None
            if seed is None
            else {"master": seed.master, "purpose": seed.purpose, "trial": seed.trial},
            "weights": inst.tri.tolist(),
        }
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dumps_canonical(payload))
    elif fmt == "npy":
        np.save(path, inst.tri)
    else:
        raise ConfigError(f"unknown instance format {fmt!r}")


def load_instance(path: str) -> Instance:
    import json

    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    seed = payload.get("seed")
    return Instance(
        payload["n"],
        np.array(payload["weights"], dtype=np.float64),
        None if seed is None else Seed(seed["master"], seed["purpose"], seed["trial"]),
    )
