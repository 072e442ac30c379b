"""Command line front end.

Subcommands:
  run        execute an experiment from a config file, persist records
  plot-data  turn a records file into plot-ready CSVs
  verify     replay a records file and check determinism + invariants
  bounds     print tail bounds for given martingale parameters
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import graphio, harness
from .concentration import MartingaleSpec, submartingale_tail, supermartingale_tail
from .process import ProcessState


def _add_run(sub):
    p = sub.add_parser("run", help="run an experiment from a config file")
    p.add_argument("--config", required=True, help="key=value config file")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--seed", type=int, default=None, help="override base_seed")
    p.add_argument("--workers", type=int, default=None, help="override workers")
    p.add_argument("--trials", type=int, default=None, help="override trials")
    p.add_argument("--edge-logs", action="store_true",
                   help="also write per-run edge logs and a graph6 file")


def _add_plot_data(sub):
    p = sub.add_parser("plot-data", help="emit plot-ready CSVs from records")
    p.add_argument("--records", required=True,
                   help="records.jsonl file or directory containing one")
    p.add_argument("--out", default="plotdata", help="output directory")


def _add_verify(sub):
    p = sub.add_parser("verify", help="re-run records and check reproducibility")
    p.add_argument("--records", required=True)
    p.add_argument("--max-trials", type=int, default=None,
                   help="only replay the first k records")


def _add_bounds(sub):
    p = sub.add_parser("bounds", help="print martingale tail bounds")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--big-n", type=float, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--a", type=float, required=True)


def cmd_run(args) -> int:
    overrides = {"base_seed": args.seed, "workers": args.workers,
                 "trials": args.trials}
    cfg = harness.load_config(args.config, overrides)
    records = harness.run_experiment(cfg, args.out)
    if args.edge_logs:
        _write_edge_logs(cfg, records, args.out)
    done = sum(1 for r in records if r["completed"])
    print("wrote %d records to %s (%d ran to completion)"
          % (len(records), os.path.join(args.out, "records.jsonl"), done))
    for rec in records:
        end = rec["snapshots"][-1]
        print("  %s seed=%d steps=%d t=%.4f Q=%d violations=%d"
              % (rec["run_id"], rec["seed"], rec["steps"], end["t"],
                 end["Q"], rec["violations_total"]))
    return 0


def _write_edge_logs(cfg, records, out_dir):
    """Replay each record's seed to rebuild the edge sequence."""
    logs_dir = os.path.join(out_dir, "edges")
    os.makedirs(logs_dir, exist_ok=True)
    graphs = []
    for rec in records:
        state = _replay(cfg, rec)
        graphio.write_edge_log(os.path.join(logs_dir, rec["run_id"] + ".edges"),
                               rec["n"], cfg.rule, rec["seed"], state.edge_log)
        graphs.append((rec["n"], state.edge_log))
    graphio.write_graph6(os.path.join(out_dir, "final_graphs.g6"), graphs)


def _replay(cfg, rec) -> ProcessState:
    rng = np.random.default_rng(rec["seed"])
    state = ProcessState(rec["n"], cfg.rule)
    if cfg.rule == harness.K3:
        mode = harness.resolve_ledger_mode(cfg, rec["n"])
        if mode == harness.ledger_mod.SAMPLED:
            k = min(cfg.witness_pairs, state.npairs)
            rng.choice(state.npairs, size=k, replace=False)
    else:
        verts = np.arange(rec["n"])
        for _ in range(cfg.k4_witness_pairs):
            rng.choice(verts, size=2, replace=False)
        for _ in range(cfg.k4_witness_triples):
            rng.choice(verts, size=3, replace=False)
    state.run(rng, stop=rec["steps"])
    return state


def cmd_plot_data(args) -> int:
    config, records = harness.load_records(args.records)
    if not records:
        print("no records found", file=sys.stderr)
        return 1
    paths = harness.emit_plotdata(records, args.out, config)
    for p in paths:
        print("wrote %s" % p)
    return 0


def cmd_verify(args) -> int:
    config, records = harness.load_records(args.records)
    if config is None:
        print("records file has no config line", file=sys.stderr)
        return 1
    cfg = harness.ExperimentConfig(**config)
    if args.max_trials is not None:
        records = records[: args.max_trials]
    failures = 0
    for idx, rec in enumerate(records):
        fresh = harness.run_trial(cfg, rec["n"], rec["trial"], _global_index(cfg, rec))
        if fresh == rec:
            print("PASS %s reproduces exactly" % rec["run_id"])
        else:
            failures += 1
            keys = [k for k in rec if fresh.get(k) != rec[k]]
            print("FAIL %s differs in %s" % (rec["run_id"], ", ".join(keys)))
    print("%d/%d records reproduced" % (len(records) - failures, len(records)))
    return 1 if failures else 0


def _global_index(cfg, rec) -> int:
    pos = list(cfg.n_list).index(rec["n"])
    return pos * cfg.trials + rec["trial"]


def cmd_bounds(args) -> int:
    spec = MartingaleSpec(args.eta, args.big_n, args.m, args.a)
    print("eta=%g N=%g m=%d a=%g" % (spec.eta, spec.big_n, spec.m, spec.a))
    try:
        sub = submartingale_tail(spec)
        print("submartingale  Pr[A_m <= -a]: lemma %.6g  sharp %.6g"
              % (sub.lemma, sub.sharp))
    except ValueError as exc:
        print("submartingale  not applicable: %s" % exc)
    try:
        sup = supermartingale_tail(spec)
        print("supermartingale Pr[A_m >= a]: lemma %.6g  sharp %.6g"
              % (sup.lemma, sup.sharp))
    except ValueError as exc:
        print("supermartingale not applicable: %s" % exc)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="hfree",
                                     description="H-free greedy process lab")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run(sub)
    _add_plot_data(sub)
    _add_verify(sub)
    _add_bounds(sub)
    args = parser.parse_args(argv)
    handlers = {"run": cmd_run, "plot-data": cmd_plot_data,
                "verify": cmd_verify, "bounds": cmd_bounds}
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
