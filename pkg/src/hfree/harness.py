"""Experiment orchestration: config parsing, seeded trials, snapshotting,
envelope auditing, and persistence.

Records are line-delimited JSON, one completed trial per line, with the
resolved configuration echoed on the first line.  Given the same config and
base seed the record files are byte-identical; wall-clock timings therefore
live in a sidecar file, never in the records.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import json
import math
import os
import time

import numpy as np

from . import analysis, k4stats, ledger as ledger_mod, trajectory
from .process import EDGE, K3, K4, ProcessState, pair_index, pair_of

MASK64 = (1 << 64) - 1
SEED_STRIDE = 0x9E3779B97F4A7C15  # odd constant for per-trial seed derivation
RNG_NAME = "numpy.PCG64"


def mix64(x: int) -> int:
    """One round of the splitmix64 finalizer."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def trial_seed(base_seed: int, trial_index: int) -> int:
    return mix64((base_seed ^ (trial_index * SEED_STRIDE)) & MASK64)


@dataclasses.dataclass
class ExperimentConfig:
    process: str = "K3"                 # K3 | K4
    n_list: tuple = (100,)
    trials: int = 1
    base_seed: int = 0
    snapshot_stride: str | int = "auto"  # steps between snapshots
    ledger_mode: str = "auto"            # auto | full | sampled
    witness_pairs: int = 200
    n_ledger_max: int = 2000
    stop: str = "full"                   # full | paper | t:<float> | steps:<int>
    mu: float = 1.0 / 32.0
    beta: float = 0.5
    gamma: float = 161.0
    rho: float = 1.0 / 32.0
    k4_witness_pairs: int = 50
    k4_witness_triples: int = 50
    exact_alpha_cap: int = 60
    greedy_repeats: int = 32
    workers: int = 1

    def __post_init__(self):
        if self.process not in ("K3", "K4"):
            raise ValueError("process must be K3 or K4")
        self.n_list = tuple(int(n) for n in self.n_list)
        if not self.n_list:
            raise ValueError("n_list must be nonempty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for name in ("mu", "beta", "gamma", "rho"):
            if getattr(self, name) <= 0:
                raise ValueError("%s must be positive" % name)

    @property
    def rule(self) -> int:
        return K3 if self.process == "K3" else K4

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["n_list"] = list(self.n_list)
        return d


_LIST_KEYS = {"n_list"}
_INT_KEYS = {"trials", "base_seed", "witness_pairs", "n_ledger_max",
             "k4_witness_pairs", "k4_witness_triples", "exact_alpha_cap",
             "greedy_repeats", "workers"}
_FLOAT_KEYS = {"mu", "beta", "gamma", "rho"}


def parse_config(text: str, overrides=None) -> ExperimentConfig:
    """Flat key=value config; '#' starts a comment, lists are comma-separated."""
    kv = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError("bad config line: %r" % raw)
        key, val = (s.strip() for s in line.split("=", 1))
        kv[key] = val
    if overrides:
        kv.update({k: str(v) for k, v in overrides.items() if v is not None})
    args = {}
    for key, val in kv.items():
        if key in _LIST_KEYS:
            args[key] = tuple(int(s) for s in val.split(",") if s.strip())
        elif key in _INT_KEYS:
            args[key] = int(val)
        elif key in _FLOAT_KEYS:
            args[key] = float(val)
        elif key in ("process", "ledger_mode", "stop", "snapshot_stride"):
            args[key] = val
        else:
            raise ValueError("unknown config key %r" % key)
    if "snapshot_stride" in args and args["snapshot_stride"] != "auto":
        args["snapshot_stride"] = int(args["snapshot_stride"])
    return ExperimentConfig(**args)


def load_config(path, overrides=None) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read(), overrides)


# ---------------------------------------------------------------- resolution

def time_scale(rule: int, n: int) -> float:
    return n ** 1.5 if rule == K3 else n ** 1.6


def resolve_stride(cfg: ExperimentConfig, n: int) -> int:
    if cfg.snapshot_stride == "auto":
        return max(1, round(time_scale(cfg.rule, n) / 100.0))
    return int(cfg.snapshot_stride)


def resolve_stop(cfg: ExperimentConfig, n: int):
    spec = cfg.stop
    if spec == "full":
        return None
    if spec == "paper":
        if cfg.rule == K3:
            return math.ceil(cfg.mu * math.sqrt(math.log(n)) * n ** 1.5)
        return math.ceil(cfg.mu * n ** 1.6 * math.log(n) ** 0.2)
    if spec.startswith("t:"):
        return max(0, round(float(spec[2:]) * time_scale(cfg.rule, n)))
    if spec.startswith("steps:"):
        return int(spec[6:])
    raise ValueError("bad stop spec %r" % spec)


def resolve_ledger_mode(cfg: ExperimentConfig, n: int) -> str:
    mode = cfg.ledger_mode
    if mode == "auto":
        return ledger_mod.FULL if n <= 64 else ledger_mod.SAMPLED
    if mode == "full" and n > cfg.n_ledger_max:
        raise ValueError("n=%d exceeds full-ledger cap %d; use sampled mode"
                         % (n, cfg.n_ledger_max))
    if mode not in (ledger_mod.FULL, ledger_mod.SAMPLED):
        raise ValueError("bad ledger mode %r" % mode)
    return mode


# -------------------------------------------------------------------- trials

def _k3_snapshot(state, led, n, mode):
    i = state.steps
    t = i / n ** 1.5
    q_pred, x_pred, y_pred = trajectory.k3_eval(t)
    if mode == ledger_mod.FULL:
        sel = state.status != EDGE
        xs, ys, zs = led.x[sel], led.y[sel], led.z[sel]
        labels = None
    else:
        nonedge = led.recount(state)
        xs, ys, zs = led.x[nonedge], led.y[nonedge], led.z[nonedge]
        labels = led.witness_ids[nonedge]
    pair_counts = []
    if labels is None:
        ids = np.nonzero(state.status != EDGE)[0]
        pair_counts = zip(ids.tolist(), xs.tolist(), ys.tolist(), zs.tolist())
    else:
        pair_counts = zip(labels.tolist(), xs.tolist(), ys.tolist(), zs.tolist())
    report = trajectory.k3_bad_event(n, i, state.open_count, pair_counts)
    return {
        "i": i,
        "t": t,
        "Q": state.open_count,
        "x_mean": float(xs.mean()) if len(xs) else 0.0,
        "x_max": int(xs.max()) if len(xs) else 0,
        "y_mean": float(ys.mean()) if len(ys) else 0.0,
        "y_max": int(ys.max()) if len(ys) else 0,
        "z_max": int(zs.max()) if len(zs) else 0,
        "q_pred": q_pred * n * n,
        "x_pred": x_pred * n,
        "y_pred": y_pred * math.sqrt(n),
        "violations": len(report.violations),
    }


def _k4_snapshot(state, pairs, triples, n):
    i = state.steps
    t = i / n ** 1.6
    q_pred, x_pred, y_pred = trajectory.k4_eval(t)
    sm = state.status_matrix()
    live_pairs = []
    for A in pairs:
        wc = k4stats.k4_witness_counts(state, A, status_matrix=sm)
        if not wc.frozen:
            live_pairs.append((A, wc.x))
    live_triples = []
    for A in triples:
        tc = k4stats.k4_triple_counts(state, A, status_matrix=sm)
        if not tc.frozen:
            live_triples.append((A, tc.y))
    x_mean = (np.mean([c for _, c in live_pairs], axis=0).tolist()
              if live_pairs else [0.0] * 5)
    y_mean = (np.mean([c for _, c in live_triples], axis=0).tolist()
              if live_triples else [0.0] * 4)
    y3_max = max((int(c[3]) for _, c in live_triples), default=0)
    report = trajectory.k4_bad_event(
        n, i, state.open_count,
        [("%d-%d" % A, c) for A, c in live_pairs],
        [("%d-%d-%d" % A, c) for A, c in live_triples])
    return {
        "i": i,
        "t": t,
        "Q": state.open_count,
        "q_pred": q_pred * n * n,
        "x_mean": x_mean,
        "x_pred": [x_pred[f] * n ** (2.0 - 0.4 * f) for f in range(5)],
        "y_mean": y_mean,
        "y_pred": [y_pred[f] * n ** (1.0 - 0.4 * f) for f in range(3)],
        "y3_max": y3_max,
        "witness_pairs": len(live_pairs),
        "witness_triples": len(live_triples),
        "violations": len(report.violations),
    }


def run_trial(cfg: ExperimentConfig, n: int, trial: int, global_index: int) -> dict:
    """One deterministic trial.  The record is a plain JSON-serializable dict."""
    seed = trial_seed(cfg.base_seed, global_index)
    rng = np.random.default_rng(seed)
    rule = cfg.rule
    state = ProcessState(n, rule)
    stride = resolve_stride(cfg, n)
    stop = resolve_stop(cfg, n)
    snapshots = []
    mode = None
    led = None
    k4_pairs = k4_triples = None
    if rule == K3:
        mode = resolve_ledger_mode(cfg, n)
        if mode == ledger_mod.FULL:
            led = ledger_mod.PairLedger(state, ledger_mod.FULL)
        else:
            k = min(cfg.witness_pairs, state.npairs)
            ids = rng.choice(state.npairs, size=k, replace=False)
            led = ledger_mod.PairLedger(state, ledger_mod.SAMPLED,
                                        witness_ids=ids)
    else:
        verts = np.arange(n)
        k4_pairs = [tuple(sorted(rng.choice(verts, size=2, replace=False).tolist()))
                    for _ in range(cfg.k4_witness_pairs)]
        k4_triples = [tuple(sorted(rng.choice(verts, size=3, replace=False).tolist()))
                      for _ in range(cfg.k4_witness_triples)]

    def snapshot():
        if rule == K3:
            snapshots.append(_k3_snapshot(state, led, n, mode))
        else:
            snapshots.append(_k4_snapshot(state, k4_pairs, k4_triples, n))

    snapshot()
    while state.open_count and (stop is None or state.steps < stop):
        outcome = state.step(rng)
        if rule == K3 and mode == ledger_mod.FULL:
            led.apply_edge(outcome, state)
        if state.steps % stride == 0:
            snapshot()
    if snapshots[-1]["i"] != state.steps:
        snapshot()

    completed = state.open_count == 0
    adj = state.adjacency_sets()
    delta = state.max_degree()
    greedy = analysis.independence_greedy(n, adj, rng, cfg.greedy_repeats)
    alpha, witness = greedy.value, greedy.witness
    if rule == K3 and delta > alpha:
        # in a triangle-free graph every neighborhood is independent
        v = max(range(n), key=lambda u: len(adj[u]))
        alpha, witness = len(adj[v]), sorted(adj[v])
    alpha_exact = None
    if n <= cfg.exact_alpha_cap:
        alpha_exact = analysis.independence_exact(n, adj, cfg.exact_alpha_cap).value
    record = {
        "run_id": "n%d-t%d" % (n, trial),
        "n": n,
        "rule": cfg.process,
        "trial": trial,
        "seed": seed,
        "rng": RNG_NAME,
        "steps": state.steps,
        "completed": completed,
        "M": state.steps if completed else None,
        "snapshots": snapshots,
        "alpha": alpha,
        "alpha_witness": witness,
        "alpha_exact": alpha_exact,
        "max_degree": delta,
        "violations_total": int(sum(s["violations"] for s in snapshots)),
    }
    return record


def _trial_job(args):
    cfg_dict, n, trial, gidx = args
    cfg = ExperimentConfig(**cfg_dict)
    return run_trial(cfg, n, trial, gidx)


def run_experiment(cfg: ExperimentConfig, out_dir=None):
    """All trials over cfg.n_list; records persisted incrementally when
    out_dir is given (records.jsonl + timings.txt sidecar)."""
    jobs = []
    gidx = 0
    for n in cfg.n_list:
        resolve_stop(cfg, n)
        if cfg.rule == K3:
            resolve_ledger_mode(cfg, n)
        for trial in range(cfg.trials):
            jobs.append((n, trial, gidx))
            gidx += 1
    fh = None
    timing_fh = None
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        fh = open(os.path.join(out_dir, "records.jsonl"), "w", encoding="utf-8")
        fh.write(json.dumps({"config": cfg.to_dict()}, sort_keys=True) + "\n")
        fh.flush()
        timing_fh = open(os.path.join(out_dir, "timings.txt"), "w", encoding="utf-8")
    records = []

    def emit(rec, elapsed):
        records.append(rec)
        if fh is not None:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
            fh.flush()
            timing_fh.write("%s %.3fs\n" % (rec["run_id"], elapsed))
            timing_fh.flush()

    try:
        if cfg.workers <= 1:
            for n, trial, g in jobs:
                t0 = time.perf_counter()
                rec = run_trial(cfg, n, trial, g)
                emit(rec, time.perf_counter() - t0)
        else:
            cfg_dict = cfg.to_dict()
            with concurrent.futures.ProcessPoolExecutor(cfg.workers) as pool:
                futs = [pool.submit(_trial_job, (cfg_dict, n, trial, g))
                        for n, trial, g in jobs]
                for fut in futs:  # completion order (n, trial): submission order
                    t0 = time.perf_counter()
                    emit(fut.result(), time.perf_counter() - t0)
    finally:
        if fh is not None:
            fh.close()
            timing_fh.close()
    return records


def load_records(path):
    """Read a records.jsonl file (or directory containing one).  Returns
    (config_dict, records)."""
    if os.path.isdir(path):
        path = os.path.join(path, "records.jsonl")
    config = None
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            obj = json.loads(line)
            if "config" in obj and "run_id" not in obj:
                config = obj["config"]
            else:
                records.append(obj)
    return config, records


# ------------------------------------------------------------------ plotting

K3_TRAJ_COLUMNS = ["n", "run_id", "i", "t", "Q", "Q_pred", "X_mean", "X_pred",
                   "Y_mean", "Y_pred", "Z_max", "violations"]


def emit_plotdata(records, out_dir, config=None):
    """Per-step trajectory CSVs plus the Ramsey summary CSV."""
    if not records:
        raise ValueError("no records")
    os.makedirs(out_dir, exist_ok=True)
    echo = "config: %s" % json.dumps(config or {}, sort_keys=True)
    paths = []
    k3_recs = [r for r in records if r["rule"] == "K3"]
    k4_recs = [r for r in records if r["rule"] == "K4"]
    if k3_recs:
        path = os.path.join(out_dir, "trajectory.csv")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("# %s\n" % echo)
            fh.write(",".join(K3_TRAJ_COLUMNS) + "\n")
            for rec in k3_recs:
                for s in rec["snapshots"]:
                    fh.write("%d,%s,%d,%r,%d,%r,%r,%r,%r,%r,%d,%d\n" % (
                        rec["n"], rec["run_id"], s["i"], s["t"], s["Q"],
                        s["q_pred"], s["x_mean"], s["x_pred"], s["y_mean"],
                        s["y_pred"], s["z_max"], s["violations"]))
        paths.append(path)
    if k4_recs:
        path = os.path.join(out_dir, "k4_trajectory.csv")
        cols = (["n", "run_id", "i", "t", "Q", "Q_pred"]
                + ["X%d_mean" % f for f in range(5)]
                + ["X%d_pred" % f for f in range(5)]
                + ["Y%d_mean" % f for f in range(4)]
                + ["Y%d_pred" % f for f in range(3)]
                + ["Y3_max", "violations"])
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("# %s\n" % echo)
            fh.write(",".join(cols) + "\n")
            for rec in k4_recs:
                for s in rec["snapshots"]:
                    row = ([rec["n"], rec["run_id"], s["i"], repr(s["t"]),
                            s["Q"], repr(s["q_pred"])]
                           + [repr(v) for v in s["x_mean"]]
                           + [repr(v) for v in s["x_pred"]]
                           + [repr(v) for v in s["y_mean"]]
                           + [repr(v) for v in s["y_pred"]]
                           + [s["y3_max"], s["violations"]])
                    fh.write(",".join(str(c) for c in row) + "\n")
        paths.append(path)
    done = [r for r in records if r["completed"]]
    if done:
        rows = analysis.ramsey_summary(done)
        path = os.path.join(out_dir, "summary.csv")
        analysis.summary_to_csv(rows, path, header_comment=echo)
        paths.append(path)
    return paths
