import itertools

import numpy as np
import pytest

from hfree.process import ProcessState, pair_index


class _PickRng:
    """Stub rng whose integers() returns a preset value once."""

    def __init__(self, r):
        self.r = r

    def integers(self, high):
        assert 0 <= self.r < high
        return self.r


def force_edge(state: ProcessState, u: int, v: int):
    """Drive state.step so that it adds the pair {u,v} (must be open)."""
    pid = pair_index(state.n, u, v)
    pos = state._open_pos[pid]
    if pos < 0:
        raise ValueError("pair {%d,%d} is not open" % (u, v))
    return state.step(_PickRng(pos))


def build_graph(n, rule, edges):
    """ProcessState holding exactly the given edges (added in order)."""
    state = ProcessState(n, rule)
    for u, v in edges:
        force_edge(state, u, v)
    return state


def has_clique(adj, verts, order):
    for sub in itertools.combinations(verts, order):
        if all(b in adj[a] for a, b in itertools.combinations(sub, 2)):
            return True
    return False


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
