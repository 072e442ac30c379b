"""Edge-log and graph6 export."""

from __future__ import annotations


def edge_log_text(n: int, rule: int, seed, edges) -> str:
    """Edge list as text: header 'n=<n> rule=K<order> seed=<seed>' then one
    edge per line 'u v' with u < v, 0-based."""
    lines = ["n=%d rule=K%d seed=%s" % (n, rule, seed)]
    for u, v in edges:
        if u > v:
            u, v = v, u
        lines.append("%d %d" % (u, v))
    return "\n".join(lines) + "\n"


def write_edge_log(path, n, rule, seed, edges):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(edge_log_text(n, rule, seed, edges))


def parse_edge_log(text: str):
    lines = text.strip().splitlines()
    head = dict(kv.split("=") for kv in lines[0].split())
    n = int(head["n"])
    rule = int(head["rule"].lstrip("K"))
    edges = [tuple(map(int, ln.split())) for ln in lines[1:]]
    return n, rule, head["seed"], edges


def graph6_line(n: int, edges) -> str:
    """graph6 encoding (printable ASCII) of a simple graph on n vertices."""
    if n < 0 or n > 258047:
        raise ValueError("graph6 export supports 0 <= n <= 258047")
    if n <= 62:
        head = [n + 63]
    else:
        head = [126, (n >> 12) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63]
    adj = set()
    for u, v in edges:
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise ValueError("bad edge (%d,%d)" % (u, v))
        adj.add((min(u, v), max(u, v)))
    bits = []
    for v in range(1, n):
        for u in range(v):
            bits.append(1 if (u, v) in adj else 0)
    while len(bits) % 6:
        bits.append(0)
    body = []
    for k in range(0, len(bits), 6):
        val = 0
        for bit in bits[k:k + 6]:
            val = (val << 1) | bit
        body.append(val + 63)
    return bytes(head + body).decode("ascii")


def write_graph6(path, graphs):
    """graphs: iterable of (n, edges)."""
    with open(path, "w", encoding="utf-8") as fh:
        for n, edges in graphs:
            fh.write(graph6_line(n, edges) + "\n")
