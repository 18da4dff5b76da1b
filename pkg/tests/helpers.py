"""Shared fixtures-in-code: graph builders and independent test oracles."""

from __future__ import annotations

import numpy as np

import vecpart as vp

# Four nodes, two heavy edges (weight 10) and four unit edges: the canonical
# two-pair fixture. Hand sums: every degree is 12, total weight m = 24.
PAIRGRAPH4_TEXT = "0 1 10\n2 3 10\n0 2 1\n0 3 1\n1 2 1\n1 3 1\n"
TRIANGLE_TEXT = "0 1\n1 2\n0 2\n"
CYCLE4_TEXT = "0 1\n1 2\n2 3\n0 3\n"


def pairgraph4() -> vp.Graph:
    return vp.load_edge_list(PAIRGRAPH4_TEXT)


def random_connected_graph(
    seed: int,
    n: int | None = None,
    n_range: tuple[int, int] = (4, 8),
    p: float = 0.5,
    weighted: bool = False,
) -> vp.Graph:
    """Erdos-Renyi style sampler, retried until connected."""
    rng = np.random.default_rng(seed)
    nn = n if n is not None else int(rng.integers(n_range[0], n_range[1] + 1))
    while True:
        iu, ju = np.triu_indices(nn, k=1)
        keep = rng.random(iu.size) < p
        if not keep.any():
            continue
        lines = []
        for i, j, k in zip(iu, ju, keep):
            if k:
                w = float(rng.uniform(0.5, 2.0)) if weighted else 1.0
                lines.append(f"{i} {j} {w!r}")
        try:
            g = vp.load_edge_list("\n".join(lines))
        except vp.Disconnected:
            continue
        if g.n == nn:  # highest-index node could have been isolated
            return g


def random_partition(rng: np.random.Generator, n: int) -> vp.Partition:
    k = int(rng.integers(1, n + 1))
    return vp.Partition.from_labels(rng.integers(0, k, size=n))


def set_partitions(n: int):
    """All set partitions of range(n) as label arrays, restricted-growth order.

    Test-side enumeration, independent of vp.exhaustive_partition.
    """
    labels = np.zeros(n, dtype=np.int64)

    def rec(i: int, c: int):
        if i == n:
            yield labels.copy()
            return
        for grp in range(c):
            labels[i] = grp
            yield from rec(i + 1, c)
        labels[i] = c
        yield from rec(i + 1, c + 1)

    yield from rec(0, 0)


def linearised_autocov(g: vp.Graph, t: float) -> np.ndarray:
    """Dense Pi [(1 - t) I + t M] - pi^T pi, assembled directly."""
    d = np.asarray(g.degrees, dtype=float)
    pi = d / (2.0 * g.total_weight)
    M = g.dense_adjacency() / d[:, None]
    inner = (1.0 - t) * np.eye(g.n) + t * M
    return pi[:, None] * inner - np.outer(pi, pi)


def pair_sum_objective(B: np.ndarray, p: vp.Partition) -> float:
    """Sum of B over within-group pairs, straight from the definition."""
    total = 0.0
    for members in p.groups():
        total += float(B[np.ix_(members, members)].sum())
    return total
