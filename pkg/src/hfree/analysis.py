"""Post-run graph analysis: independence number and Ramsey-ratio summaries.

Graphs are passed as (n, adjacency sets); ProcessState.adjacency_sets()
produces the expected form.  The exact solver is a bitmask branch-and-bound
capped at small n; the greedy solver is a randomized min-degree-first bound
usable at any scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EXACT_CAP = 60


@dataclass
class AlphaResult:
    value: int
    exact: bool
    witness: list


def graph_from_edges(n: int, edges):
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _check_independent(adj, witness):
    for i, u in enumerate(witness):
        for v in witness[i + 1:]:
            if v in adj[u]:
                raise AssertionError("witness is not independent")


def independence_exact(n: int, adj, cap: int = EXACT_CAP) -> AlphaResult:
    """Exact independence number by branch and bound on bitmasks, with a
    greedy seed and a population-count bound."""
    if n > cap:
        raise ValueError("n=%d exceeds exact cap %d; use independence_greedy" % (n, cap))
    masks = [0] * n
    for v in range(n):
        for w in adj[v]:
            masks[v] |= 1 << w
    # greedy seed: repeatedly take a min-degree vertex
    avail = (1 << n) - 1
    seed = 0
    while avail:
        best_v, best_d = -1, n + 1
        m = avail
        while m:
            lsb = m & -m
            v = lsb.bit_length() - 1
            d = (masks[v] & avail).bit_count()
            if d < best_d:
                best_v, best_d = v, d
            m ^= lsb
        seed |= 1 << best_v
        avail &= ~(masks[best_v] | (1 << best_v))
    best_size = seed.bit_count()
    best_mask = seed

    def expand(avail, cur_mask, cur_size):
        nonlocal best_size, best_mask
        if avail == 0:
            if cur_size > best_size:
                best_size, best_mask = cur_size, cur_mask
            return
        if cur_size + avail.bit_count() <= best_size:
            return
        # branch on a max-degree vertex; isolated vertices are always taken
        m = avail
        pick, pick_deg = -1, -1
        while m:
            lsb = m & -m
            v = lsb.bit_length() - 1
            d = (masks[v] & avail).bit_count()
            if d > pick_deg:
                pick, pick_deg = v, d
            m ^= lsb
        if pick_deg == 0:
            expand(0, cur_mask | avail, cur_size + avail.bit_count())
            return
        bit = 1 << pick
        expand(avail & ~(masks[pick] | bit), cur_mask | bit, cur_size + 1)
        expand(avail & ~bit, cur_mask, cur_size)

    expand((1 << n) - 1, 0, 0)
    witness = [v for v in range(n) if best_mask >> v & 1]
    _check_independent(adj, witness)
    return AlphaResult(best_size, True, witness)


def independence_greedy(n: int, adj, rng, repeats: int = 32) -> AlphaResult:
    """Best of `repeats` randomized min-degree-first greedy runs; a lower
    bound on the true independence number."""
    best = []
    for _ in range(max(1, repeats)):
        alive = set(range(n))
        deg = {v: len(adj[v] & alive) for v in alive}
        chosen = []
        while alive:
            dmin = min(deg[v] for v in alive)
            cands = [v for v in alive if deg[v] == dmin]
            v = cands[int(rng.integers(len(cands)))]
            chosen.append(v)
            drop = (adj[v] & alive) | {v}
            alive -= drop
            for u in drop:
                del deg[u]
            for u in drop:
                for w in adj[u] & alive:
                    deg[w] -= 1
        if len(chosen) > len(best):
            best = chosen
    _check_independent(adj, best)
    return AlphaResult(len(best), False, sorted(best))


def max_degree(n: int, adj) -> int:
    return max((len(a) for a in adj), default=0)


def ramsey_summary(records):
    """Per-n summary of the scaling ratios.  Each record needs keys
    n, M, alpha, max_degree; rows come back sorted by n."""
    if not records:
        raise ValueError("no records to summarize")
    by_n: dict[int, list] = {}
    for rec in records:
        by_n.setdefault(rec["n"], []).append(rec)
    rows = []
    for n in sorted(by_n):
        recs = by_n[n]
        lg = math.log(n)
        m_ratio = [r["M"] / (n ** 1.5 * math.sqrt(lg)) for r in recs]
        a_ratio = [r["alpha"] / math.sqrt(n * lg) for r in recs]
        d_ratio = [r["max_degree"] / math.sqrt(n * lg) for r in recs]
        ramsey = [n * math.log(r["alpha"] + 1) / (r["alpha"] + 1) ** 2 for r in recs]
        rows.append({
            "n": n,
            "trials": len(recs),
            "mean_M_ratio": float(np.mean(m_ratio)),
            "std_M_ratio": float(np.std(m_ratio)),
            "mean_alpha_ratio": float(np.mean(a_ratio)),
            "mean_delta_ratio": float(np.mean(d_ratio)),
            "implied_ramsey_ratio": float(np.mean(ramsey)),
        })
    return rows


SUMMARY_COLUMNS = ["n", "trials", "mean_M_ratio", "std_M_ratio",
                   "mean_alpha_ratio", "mean_delta_ratio", "implied_ramsey_ratio"]


def summary_to_csv(rows, path, header_comment=None):
    with open(path, "w", encoding="utf-8") as fh:
        if header_comment:
            fh.write("# %s\n" % header_comment)
        fh.write(",".join(SUMMARY_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(repr(row[c]) if isinstance(row[c], float) else str(row[c])
                              for c in SUMMARY_COLUMNS) + "\n")
