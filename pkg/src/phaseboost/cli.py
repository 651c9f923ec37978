"""Command-line experiment harness.

Every subcommand plants an instance per seed, runs one pipeline, and emits one
JSON line per seed (stable field order, so reruns are byte-identical apart
from wallclock), an optional CSV aggregate next to it, and a short summary
table on stdout. Per-seed failures are recorded in the per-seed record; they
do not abort the batch.

Exit codes: 0 on success, 2 for invalid parameters or configuration, 3 for
any other library error raised outside a per-seed run.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import csv
import dataclasses
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .access import CopySource, swap_test_estimate
from .analysis import (
    bond_profile,
    hard_dnf_instance,
    random_product_distribution,
    verify_discriminator,
)
from .boosting import agnostic_boost
from .concepts import (
    concept_to_text,
    fourier_spectrum,
    random_concept,
    random_tac,
    spectral_concentration,
)
from .distributional import LabelFunction, distributional_learn
from .errors import ConfigurationError, ParameterError, PhaseboostError
from .learners import (
    LearningOutcome,
    agnostic_learn_dnf,
    agnostic_learn_dt,
    agnostic_learn_junta,
    agnostic_learn_junta_noboost,
    pac_learn_depth3,
)
from .statevec import (
    StateVector,
    dump_state,
    make_corrupted_state,
    parity_state,
    phase_state_of,
)
from .weak import agnostic_parity_learner, parity_weak_learner, wal_decision_tree, wal_dnf

SCHEMA = "phaseboost.result.v1"


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run depends on; echoed verbatim into each record."""

    task: str
    n: int
    seeds: tuple[int, ...]
    eps: float
    delta: float
    mode: str
    opt_lb: float | None = None
    out: str | None = None
    workers: int = 1
    params: dict = field(default_factory=dict)

    def echo(self) -> dict:
        d = dataclasses.asdict(self)
        d.pop("seeds")
        d.pop("out")
        d.pop("workers")
        return d


@dataclass
class ResultRecord:
    task: str
    seed: int
    ok: bool
    outcome: dict
    error: str | None
    wallclock_s: float

    def as_dict(self, config: ExperimentConfig) -> dict:
        return {
            "schema": SCHEMA,
            "version": __version__,
            "task": self.task,
            "seed": self.seed,
            "config": config.echo(),
            "ok": self.ok,
            "error": self.error,
            "outcome": self.outcome,
            "wallclock_s": self.wallclock_s,
        }


def _plant_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng([seed, 7])


def _source_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng([seed, 11])


def _planted_source(
    cfg: ExperimentConfig, seed: int, concept
) -> tuple[CopySource, StateVector]:
    state = phase_state_of(concept)
    if cfg.opt_lb is not None and cfg.opt_lb < 1.0:
        state = make_corrupted_state(state, cfg.opt_lb, _plant_rng(seed))
    src = CopySource.root(state, mode=cfg.mode, rng=_source_rng(seed))
    return src, state


def _learning_outcome_dict(out: LearningOutcome) -> dict:
    d = {
        "achieved_fidelity": float(out.achieved_fidelity),
        "opt_lb": out.opt_lower_bound,
        "ledger": {k: int(v) for k, v in out.ledger.items()},
    }
    for key in ("kappa", "stop_reason", "degenerate_sieve", "samples"):
        if key in out.extras:
            val = out.extras[key]
            d[key] = val if isinstance(val, (str, bool)) else int(val)
    if out.boost is not None:
        d["labels"] = [int(m) for m in out.boost.decomposition.labels]
    elif hasattr(out.hypothesis, "labels"):
        d["labels"] = [int(m) for m in out.hypothesis.labels]
    return d


# ---------------------------------------------------------------------------
# Per-seed task runners


def _run_boost(cfg: ExperimentConfig, seed: int) -> dict:
    p = cfg.params
    concept = random_concept(p["kind"], cfg.n, seed, **p.get("kind_params", {}))
    src, _ = _planted_source(cfg, seed, concept)
    if p.get("dump_state"):
        dump_state(src.hidden, p["dump_state"] + f".seed{seed}")
    learner_kind = p.get("learner", "dt")
    if learner_kind == "dt":
        learner = wal_decision_tree(p["learner_s"])
    elif learner_kind == "dnf":
        learner = wal_dnf(p["learner_s"], p.get("mansour_c1", 1.0), p.get("mansour_c2", 8.0))
    elif learner_kind == "parity":
        learner = parity_weak_learner()
    else:
        raise ParameterError(f"unknown weak learner {learner_kind!r}")
    result = agnostic_boost(src, learner, cfg.eps, cfg.delta)
    achieved = (
        float(result.decomposition.fidelity_with(src.hidden)) if result.kappa else 0.0
    )
    return {
        "concept": concept_to_text(concept),
        "kappa": int(result.kappa),
        "stop_reason": result.stop_reason,
        "achieved_fidelity": achieved,
        "labels": [int(m) for m in result.decomposition.labels],
        "ledger": {k: int(v) for k, v in result.ledger.items()},
        "success": bool(achieved >= (cfg.opt_lb or 1.0) - cfg.eps - 1e-9),
    }


def _run_learn_parity(cfg: ExperimentConfig, seed: int) -> dict:
    tau = cfg.params.get("tau", 0.5)
    concept = random_concept("parity", cfg.n, seed)
    src, _ = _planted_source(cfg, seed, concept)
    mask = agnostic_parity_learner(src, tau, cfg.eps, cfg.delta)
    true_sq = float(np.abs(src.fourier[mask]) ** 2)
    return {
        "concept": concept_to_text(concept),
        "mask": int(mask),
        "true_overlap_sq": true_sq,
        "ledger": src.ledger.as_dict(),
        "success": bool(true_sq >= tau - cfg.eps - 1e-9),
    }


def _fidelity_success(out: LearningOutcome, cfg: ExperimentConfig) -> bool:
    target = cfg.opt_lb if cfg.opt_lb is not None else 1.0
    return bool(out.achieved_fidelity >= target - cfg.eps - 1e-9)


def _run_learn_dt(cfg: ExperimentConfig, seed: int) -> dict:
    s = cfg.params["s"]
    plant = cfg.params.get("plant_size", s if s % 2 == 1 else s - 1)
    concept = random_concept("dt", cfg.n, seed, size=plant)
    src, _ = _planted_source(cfg, seed, concept)
    out = agnostic_learn_dt(src, s, cfg.eps, cfg.delta, opt_lb=cfg.opt_lb, seed=seed)
    d = _learning_outcome_dict(out)
    d["concept"] = concept_to_text(concept)
    d["success"] = _fidelity_success(out, cfg)
    return d


def _run_learn_junta(cfg: ExperimentConfig, seed: int) -> dict:
    k = cfg.params["k"]
    concept = random_concept("junta", cfg.n, seed, k=k)
    src, _ = _planted_source(cfg, seed, concept)
    out = agnostic_learn_junta(src, k, cfg.eps, cfg.delta, opt_lb=cfg.opt_lb, seed=seed)
    d = _learning_outcome_dict(out)
    d["concept"] = concept_to_text(concept)
    d["success"] = _fidelity_success(out, cfg)
    return d


def _run_learn_junta_noboost(cfg: ExperimentConfig, seed: int) -> dict:
    k = cfg.params["k"]
    concept = random_concept("junta", cfg.n, seed, k=k)
    src, _ = _planted_source(cfg, seed, concept)
    out = agnostic_learn_junta_noboost(
        src, k, cfg.eps, cfg.delta, opt_lb=cfg.opt_lb, seed=seed
    )
    d = _learning_outcome_dict(out)
    d["concept"] = concept_to_text(concept)
    d["survivors"] = [int(y) for y in out.extras["sieve"].survivors]
    d["success"] = _fidelity_success(out, cfg)
    return d


def _run_learn_dnf(cfg: ExperimentConfig, seed: int) -> dict:
    p = cfg.params
    concept = random_concept(
        "dnf", cfg.n, seed, s=p["s"], max_width=p.get("width", 3)
    )
    src, _ = _planted_source(cfg, seed, concept)
    out = agnostic_learn_dnf(
        src,
        p["s"],
        cfg.eps,
        cfg.delta,
        opt_lb=cfg.opt_lb,
        seed=seed,
        mansour_c1=p.get("mansour_c1", 1.0),
        mansour_c2=p.get("mansour_c2", 8.0),
    )
    d = _learning_outcome_dict(out)
    d["concept"] = concept_to_text(concept)
    d["success"] = _fidelity_success(out, cfg)
    return d


def _run_pac_depth3(cfg: ExperimentConfig, seed: int) -> dict:
    p = cfg.params
    rng = _plant_rng(seed)
    concept = random_tac(
        cfg.n,
        p["m"],
        p.get("thresh"),
        rng,
        dnf_terms=p.get("dnf_terms", 2),
        dnf_width=p.get("dnf_width", 3),
    )
    src, _ = _planted_source(cfg, seed, concept)
    out = pac_learn_depth3(
        src,
        p["s"],
        p["m"],
        cfg.eps,
        cfg.delta,
        seed=seed,
        mansour_c1=p.get("mansour_c1", 1.0),
        mansour_c2=p.get("mansour_c2", 8.0),
    )
    agreement = float(
        np.mean(out.hypothesis.truth_table() == concept.truth_table())
    )
    d = _learning_outcome_dict(out)
    d["concept"] = concept_to_text(concept)
    d["agreement"] = agreement
    d["success"] = bool(agreement >= 1.0 - cfg.eps)
    return d


def _run_bonddim(cfg: ExperimentConfig, seed: int) -> dict:
    p = cfg.params
    if p["kind"] == "hard-dnf":
        concept = hard_dnf_instance(p["kind_params"]["s"])
    else:
        concept = random_concept(p["kind"], cfg.n, seed, **p.get("kind_params", {}))
    profile = bond_profile(phase_state_of(concept))
    return {
        "concept": concept_to_text(concept),
        "profile": [[int(c), int(r)] for c, r in profile],
        "max_rank": int(max(r for _, r in profile)),
        "success": True,
    }


def _run_discriminator(cfg: ExperimentConfig, seed: int) -> dict:
    p = cfg.params
    rng = _plant_rng(seed)
    f = random_tac(
        cfg.n,
        p["m"],
        p.get("thresh"),
        rng,
        dnf_terms=p.get("dnf_terms", 2),
        dnf_width=p.get("dnf_width", 3),
    )
    weights = random_product_distribution(cfg.n, rng)
    report = verify_discriminator(f, weights)
    return {
        "concept": concept_to_text(f),
        "index": int(report.index),
        "correlation": float(report.correlation),
        "bound": float(report.bound),
        "success": bool(abs(report.correlation) >= report.bound - 1e-12),
    }


def _run_distrib(cfg: ExperimentConfig, seed: int) -> dict:
    p = cfg.params
    rng = _plant_rng(seed)
    kind = p.get("phi", "uniform")
    if kind == "uniform":
        values = rng.uniform(-1.0, 1.0, 1 << cfg.n)
    elif kind == "parity":
        concept = random_concept("parity", cfg.n, seed)
        values = 0.8 * concept.signs().astype(np.float64)
    else:
        raise ParameterError(f"unknown label model {kind!r}")
    lf = LabelFunction(cfg.n, values)
    delta = cfg.delta

    def inner(src: CopySource, eps: float):
        return agnostic_boost(src, parity_weak_learner(), eps, delta).decomposition

    result = distributional_learn(
        lf,
        inner,
        cfg.eps,
        mode=cfg.mode,
        seed=_source_rng(seed),
        gamma_floor=p.get("gamma_floor", 1e-3),
    )
    return {
        "phi": kind,
        "gamma": float(lf.gamma),
        "success_prob": float(result.success_prob),
        "margin": float(result.margin),
        "flipped": bool(result.flipped),
        "ledger": result.ledger.as_dict(),
        "success": bool(result.margin >= 0.0),
    }


def _run_spectrum(cfg: ExperimentConfig, seed: int) -> dict:
    p = cfg.params
    concept = random_concept(p["kind"], cfg.n, seed, **p.get("kind_params", {}))
    spec = fourier_spectrum(concept)
    weights = np.abs(spec.coeffs) ** 2
    order = np.lexsort((np.arange(weights.shape[0]), -weights))
    top = [[int(m), float(weights[m])] for m in order[:16]]
    budget = p.get("budget", 16)
    return {
        "concept": concept_to_text(concept),
        "top": top,
        "concentration": float(spectral_concentration(spec, budget)),
        "budget": int(budget),
        "success": True,
    }


def _run_calibrate_swap(cfg: ExperimentConfig, seed: int) -> dict:
    p = cfg.params
    overlaps = p.get("overlaps", (0.0, 0.25, 0.5, 0.75, 1.0))
    trials = p.get("trials", 1000)
    rng = _source_rng(seed)
    n = cfg.n
    a = parity_state(n, 1)
    other = parity_state(n, 2)  # orthogonal companion direction
    rows = []
    total_fail = 0
    for v in overlaps:
        # Companion state with squared overlap exactly v against a.
        if v == 1.0:
            b = a
        else:
            b = StateVector.normalized(
                n, np.sqrt(v) * a.amps + np.sqrt(1.0 - v) * other.amps
            )
        fails = 0
        for _ in range(trials):
            src = CopySource.root(a, mode=cfg.mode, rng=rng)
            est = swap_test_estimate(src, b, cfg.eps, cfg.delta)
            if abs(est - v) > cfg.eps:
                fails += 1
        total_fail += fails
        rows.append([float(v), int(fails), int(trials)])
    rate = total_fail / (len(overlaps) * trials)
    return {
        "rows": rows,
        "failure_rate": float(rate),
        "success": bool(rate <= 2.0 * cfg.delta),
    }


_TASKS = {
    "boost": _run_boost,
    "learn-parity": _run_learn_parity,
    "learn-dt": _run_learn_dt,
    "learn-junta": _run_learn_junta,
    "learn-junta-noboost": _run_learn_junta_noboost,
    "learn-dnf": _run_learn_dnf,
    "pac-depth3": _run_pac_depth3,
    "bonddim": _run_bonddim,
    "discriminator": _run_discriminator,
    "distrib": _run_distrib,
    "spectrum": _run_spectrum,
    "calibrate-swap": _run_calibrate_swap,
}


def _run_one(cfg: ExperimentConfig, seed: int) -> ResultRecord:
    start = time.monotonic()
    try:
        outcome = _TASKS[cfg.task](cfg, seed)
        return ResultRecord(cfg.task, seed, True, outcome, None, time.monotonic() - start)
    except Exception as exc:  # noqa: BLE001 - isolate the seed, record the cause
        return ResultRecord(
            cfg.task,
            seed,
            False,
            {},
            f"{type(exc).__name__}: {exc}",
            time.monotonic() - start,
        )


def run_experiment(config: ExperimentConfig) -> list[ResultRecord]:
    """Run every seed, isolating per-seed failures; results are seed-ordered."""
    if config.task not in _TASKS:
        raise ParameterError(f"unknown task {config.task!r}")
    if config.workers > 1 and len(config.seeds) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(_run_one, [config] * len(config.seeds), config.seeds))
    else:
        records = [_run_one(config, seed) for seed in config.seeds]
    records.sort(key=lambda r: r.seed)
    return records


# ---------------------------------------------------------------------------
# Output


def _write_jsonl(config: ExperimentConfig, records: list[ResultRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.as_dict(config), sort_keys=True) + "\n")


def _csv_rows(config: ExperimentConfig, records: list[ResultRecord]):
    if config.task == "bonddim":
        header = ["seed", "cut", "rank"]
        rows = [
            [r.seed, c, k]
            for r in records
            if r.ok
            for c, k in r.outcome["profile"]
        ]
    elif config.task == "spectrum":
        header = ["seed", "mask", "weight"]
        rows = [
            [r.seed, m, w] for r in records if r.ok for m, w in r.outcome["top"]
        ]
    elif config.task == "calibrate-swap":
        header = ["seed", "overlap", "failures", "trials"]
        rows = [
            [r.seed, v, f, t] for r in records if r.ok for v, f, t in r.outcome["rows"]
        ]
    else:
        keys = sorted(
            {
                key
                for r in records
                if r.ok
                for key, val in r.outcome.items()
                if isinstance(val, (int, float, bool, str)) and key != "concept"
            }
        )
        header = ["seed", "ok"] + keys
        rows = [
            [r.seed, int(r.ok)] + [r.outcome.get(k, "") for k in keys] for r in records
        ]
    return header, rows


def _write_csv(config: ExperimentConfig, records: list[ResultRecord], path: str) -> None:
    header, rows = _csv_rows(config, records)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _summarize(config: ExperimentConfig, records: list[ResultRecord]) -> str:
    total = len(records)
    ok = sum(1 for r in records if r.ok)
    succ = sum(1 for r in records if r.ok and r.outcome.get("success", False))
    lines = [
        f"task {config.task}  n={config.n}  mode={config.mode}  eps={config.eps}  "
        f"delta={config.delta}",
        f"seeds {total}  completed {ok}  success {succ}/{total}",
    ]
    kappas = [r.outcome["kappa"] for r in records if r.ok and "kappa" in r.outcome]
    if kappas:
        lines.append(f"mean kappa {float(np.mean(kappas)):.2f}")
    copies = [
        r.outcome["ledger"]["copies_consumed"]
        for r in records
        if r.ok and "ledger" in r.outcome
    ]
    if copies:
        lines.append(f"mean copies consumed {float(np.mean(copies)):.4g}")
    wall = float(np.mean([r.wallclock_s for r in records])) if records else 0.0
    lines.append(f"mean wallclock {wall:.3f}s")
    for r in records:
        if not r.ok:
            lines.append(f"seed {r.seed} failed: {r.error}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Argument parsing


def _parse_seeds(args) -> tuple[int, ...]:
    if args.seeds is not None:
        spec = args.seeds
        try:
            if ":" in spec:
                lo, hi = spec.split(":", 1)
                return tuple(range(int(lo), int(hi)))
            return tuple(int(tok) for tok in spec.split(","))
        except ValueError as exc:
            raise ParameterError(f"bad --seeds spec {spec!r}: {exc}") from exc
    return (args.seed,)


def _common_flags(p: argparse.ArgumentParser, n_default: int = 8) -> None:
    p.add_argument("--n", type=int, default=n_default, help="qubit count")
    p.add_argument("--seed", type=int, default=0, help="single seed")
    p.add_argument("--seeds", type=str, default=None, help="range lo:hi or list a,b,c")
    p.add_argument("--eps", type=float, default=0.1, help="accuracy parameter")
    p.add_argument("--delta", type=float, default=0.05, help="failure probability")
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--opt-lb", type=float, default=None, help="planted fidelity floor")
    p.add_argument("--out", type=str, default=None, help="JSONL output path")
    p.add_argument("--csv", type=str, default=None, help="CSV aggregate path")
    p.add_argument("--workers", type=int, default=1, help="parallel seed workers")


def _mansour_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mansour-c1", type=float, default=1.0)
    p.add_argument("--mansour-c2", type=float, default=8.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phaseboost",
        description="Desk-scale experiments for agnostic boosting on phase states.",
    )
    parser.add_argument("--version", action="version", version=f"phaseboost {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("boost", help="run the two-stage boosting loop directly")
    _common_flags(p)
    _mansour_flags(p)
    p.add_argument("--kind", choices=("parity", "junta", "dt", "dnf", "tac"), default="dt")
    p.add_argument("--size", type=int, default=7, help="planted concept size")
    p.add_argument("--k", type=int, default=2, help="junta arity (kind junta)")
    p.add_argument("--learner", choices=("dt", "dnf", "parity"), default="dt")
    p.add_argument("--learner-s", type=int, default=None, help="weak learner size bound")
    p.add_argument("--dump-state", type=str, default=None, help="dump planted states here")

    p = sub.add_parser("learn", help="strong agnostic learners")
    learn_sub = p.add_subparsers(dest="target", required=True)
    lp = learn_sub.add_parser("parity", help="single weak parity recovery")
    _common_flags(lp)
    lp.add_argument("--tau", type=float, default=0.5, help="squared-overlap threshold")
    ld = learn_sub.add_parser("dt", help="agnostic decision-tree learning")
    _common_flags(ld)
    ld.add_argument("--s", type=int, default=8, help="tree size bound")
    ld.add_argument("--plant-size", type=int, default=None)
    lj = learn_sub.add_parser("junta", help="agnostic junta learning via boosting")
    _common_flags(lj)
    lj.add_argument("--k", type=int, default=3)
    ljn = learn_sub.add_parser("junta-noboost", help="junta learning by direct sieving")
    _common_flags(ljn)
    ljn.add_argument("--k", type=int, default=3)
    lf = learn_sub.add_parser("dnf", help="agnostic DNF learning")
    _common_flags(lf)
    _mansour_flags(lf)
    lf.add_argument("--s", type=int, default=4, help="DNF term bound")
    lf.add_argument("--width", type=int, default=3, help="planted term width")

    p = sub.add_parser("pac", help="PAC learners")
    pac_sub = p.add_subparsers(dest="target", required=True)
    pd = pac_sub.add_parser("depth3", help="threshold-of-DNFs PAC learning")
    _common_flags(pd)
    _mansour_flags(pd)
    pd.add_argument("--m", type=int, default=2, help="number of DNF inputs")
    pd.add_argument("--s", type=int, default=3, help="per-DNF term bound")
    pd.add_argument("--thresh", type=int, default=None)
    pd.add_argument("--dnf-terms", type=int, default=2)
    pd.add_argument("--dnf-width", type=int, default=3)

    p = sub.add_parser("bonddim", help="Schmidt rank across every contiguous cut")
    _common_flags(p, n_default=6)
    p.add_argument("--kind", choices=("hard-dnf", "junta", "dt", "dnf"), default="hard-dnf")
    p.add_argument("--s", type=int, default=3, help="terms (DNF kinds)")
    p.add_argument("--k", type=int, default=2, help="junta arity")
    p.add_argument("--size", type=int, default=7, help="tree size")

    p = sub.add_parser("discriminator", help="threshold-circuit correlation bound checks")
    _common_flags(p)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--thresh", type=int, default=None)
    p.add_argument("--dnf-terms", type=int, default=2)
    p.add_argument("--dnf-width", type=int, default=3)

    p = sub.add_parser("distrib", help="distributional-label reduction")
    _common_flags(p, n_default=6)
    p.add_argument("--phi", choices=("uniform", "parity"), default="uniform")
    p.add_argument("--gamma-floor", type=float, default=1e-3)

    p = sub.add_parser("spectrum", help="Fourier spectrum of planted concepts")
    _common_flags(p)
    p.add_argument("--kind", choices=("parity", "junta", "dt", "dnf", "tac"), default="dt")
    p.add_argument("--size", type=int, default=7)
    p.add_argument("--budget", type=int, default=16)

    p = sub.add_parser("calibrate", help="estimator calibration")
    cal_sub = p.add_subparsers(dest="target", required=True)
    cs = cal_sub.add_parser("swap", help="swap-test failure-rate calibration")
    _common_flags(cs)
    cs.add_argument("--trials", type=int, default=1000)
    cs.add_argument(
        "--overlaps", type=str, default="0,0.25,0.5,0.75,1",
        help="comma list of squared overlaps",
    )
    return parser


def _kind_params(args) -> dict:
    kind = args.kind
    size = getattr(args, "size", 7)
    if kind == "junta":
        return {"k": getattr(args, "k", 2)}
    if kind == "dt":
        return {"size": size}
    if kind == "dnf":
        return {"s": getattr(args, "s", None) or size, "max_width": 3}
    if kind == "hard-dnf":
        return {"s": args.s}
    if kind == "tac":
        return {"m": getattr(args, "m", 2)}
    return {}


def _config_from_args(args) -> ExperimentConfig:
    seeds = _parse_seeds(args)
    params: dict = {}
    if args.command == "boost":
        task = "boost"
        params = {
            "kind": args.kind,
            "kind_params": _kind_params(args),
            "learner": args.learner,
            "learner_s": args.learner_s if args.learner_s is not None else args.size + 1,
            "mansour_c1": args.mansour_c1,
            "mansour_c2": args.mansour_c2,
        }
        if args.dump_state:
            params["dump_state"] = args.dump_state
    elif args.command == "learn":
        task = f"learn-{args.target}"
        if args.target == "parity":
            params = {"tau": args.tau}
        elif args.target == "dt":
            params = {"s": args.s}
            if args.plant_size is not None:
                params["plant_size"] = args.plant_size
        elif args.target in ("junta", "junta-noboost"):
            params = {"k": args.k}
        elif args.target == "dnf":
            params = {
                "s": args.s,
                "width": args.width,
                "mansour_c1": args.mansour_c1,
                "mansour_c2": args.mansour_c2,
            }
    elif args.command == "pac":
        task = "pac-depth3"
        params = {
            "m": args.m,
            "s": args.s,
            "thresh": args.thresh,
            "dnf_terms": args.dnf_terms,
            "dnf_width": args.dnf_width,
            "mansour_c1": args.mansour_c1,
            "mansour_c2": args.mansour_c2,
        }
    elif args.command == "bonddim":
        task = "bonddim"
        params = {"kind": args.kind, "kind_params": _kind_params(args)}
    elif args.command == "discriminator":
        task = "discriminator"
        params = {
            "m": args.m,
            "thresh": args.thresh,
            "dnf_terms": args.dnf_terms,
            "dnf_width": args.dnf_width,
        }
    elif args.command == "distrib":
        task = "distrib"
        params = {"phi": args.phi, "gamma_floor": args.gamma_floor}
    elif args.command == "spectrum":
        task = "spectrum"
        params = {
            "kind": args.kind,
            "kind_params": _kind_params(args),
            "budget": args.budget,
        }
    elif args.command == "calibrate":
        task = "calibrate-swap"
        try:
            overlaps = tuple(float(tok) for tok in args.overlaps.split(","))
        except ValueError as exc:
            raise ParameterError(f"bad --overlaps spec {args.overlaps!r}: {exc}") from exc
        params = {"trials": args.trials, "overlaps": overlaps}
    else:
        raise ParameterError(f"unknown command {args.command!r}")
    return ExperimentConfig(
        task=task,
        n=args.n,
        seeds=seeds,
        eps=args.eps,
        delta=args.delta,
        mode=args.mode,
        opt_lb=args.opt_lb,
        out=args.out,
        workers=args.workers,
        params=params,
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        records = run_experiment(config)
        if config.out:
            _write_jsonl(config, records, config.out)
        csv_path = getattr(args, "csv", None)
        if csv_path:
            _write_csv(config, records, csv_path)
        print(_summarize(config, records))
    except (ParameterError, ConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PhaseboostError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
