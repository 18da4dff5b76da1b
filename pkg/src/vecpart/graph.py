"""Weighted undirected graphs: validation, file ingestion and benchmark sampling."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np
from scipy import sparse

from .errors import (
    AsymmetricEdgeList,
    ConflictingDuplicateEdge,
    Disconnected,
    GenerationFailed,
    MalformedLine,
    MissingCommunityLabel,
    NonPositiveWeight,
    SelfLoop,
)

INDEXING = ("zero-based", "one-based")


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable connected weighted undirected graph.

    Each undirected edge is stored exactly once with ``i < j``; the adjacency
    is symmetric by construction and free of self-loops. ``degrees[i]`` is the
    weighted degree sum over row i of the adjacency, and ``total_weight`` is
    half the degree sum, so ``degrees.sum() == 2 * total_weight`` exactly.
    """

    n: int
    edge_index: np.ndarray  # (E, 2) int64, each row sorted i < j, rows sorted
    edge_weight: np.ndarray  # (E,) float64, strictly positive
    degrees: np.ndarray  # (n,) float64
    total_weight: float  # m

    @property
    def num_edges(self) -> int:
        return int(self.edge_index.shape[0])

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return [
            (int(i), int(j), float(w))
            for (i, j), w in zip(self.edge_index, self.edge_weight)
        ]

    def adjacency(self) -> sparse.csr_matrix:
        """Symmetric sparse adjacency lookup."""
        i = self.edge_index[:, 0]
        j = self.edge_index[:, 1]
        rows = np.concatenate([i, j])
        cols = np.concatenate([j, i])
        data = np.concatenate([self.edge_weight, self.edge_weight])
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def dense_adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        i = self.edge_index[:, 0]
        j = self.edge_index[:, 1]
        A[i, j] = self.edge_weight
        A[j, i] = self.edge_weight
        return A

    def to_edge_list_text(self) -> str:
        """Canonical serialisation: one "i j w" line per edge, sorted by (i, j).

        Weights are printed with full precision so that parsing the text
        reproduces the graph edge for edge.
        """
        return "".join(f"{i} {j} {w!r}\n" for i, j, w in self.edges)

    def sha256(self) -> str:
        """Content hash of the canonical serialisation."""
        return hashlib.sha256(self.to_edge_list_text().encode("utf-8")).hexdigest()


@dataclass(frozen=True, eq=False)
class GroundTruth:
    """Reference community labels, canonicalised to the range 0..k-1."""

    assignment: np.ndarray  # (n,) int64
    k: int

    @classmethod
    def from_labels(cls, labels: Sequence[int] | np.ndarray) -> GroundTruth:
        assignment, k = _canonical_labels(labels)
        assignment.setflags(write=False)
        return cls(assignment=assignment, k=k)


def _canonical_labels(labels: Sequence[int] | np.ndarray) -> tuple[np.ndarray, int]:
    """Relabel to 0..k-1 in order of first appearance."""
    mapping: dict[int, int] = {}
    out = np.empty(len(labels), dtype=np.int64)
    for idx, lab in enumerate(labels):
        out[idx] = mapping.setdefault(int(lab), len(mapping))
    return out, len(mapping)


def _is_connected(n: int, edge_index: np.ndarray) -> bool:
    if n <= 1:
        return True
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in edge_index:
        adj[i].append(int(j))
        adj[j].append(int(i))
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    stack = [0]
    count = 1
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                stack.append(v)
    return count == n


def _build_graph(n: int, edges: dict[tuple[int, int], float]) -> Graph:
    """Assemble and validate a Graph from deduplicated (i, j) -> w with i < j."""
    if n < 1:
        raise MalformedLine("graph has no nodes")
    items = sorted(edges.items())
    edge_index = np.array([k for k, _ in items], dtype=np.int64).reshape(-1, 2)
    edge_weight = np.array([w for _, w in items], dtype=np.float64)
    if not _is_connected(n, edge_index):
        raise Disconnected(f"graph with {n} nodes is not connected")
    degrees = np.zeros(n, dtype=np.float64)
    np.add.at(degrees, edge_index[:, 0], edge_weight)
    np.add.at(degrees, edge_index[:, 1], edge_weight)
    total_weight = float(degrees.sum()) / 2.0
    for arr in (edge_index, edge_weight, degrees):
        arr.setflags(write=False)
    return Graph(
        n=n,
        edge_index=edge_index,
        edge_weight=edge_weight,
        degrees=degrees,
        total_weight=total_weight,
    )


def _iter_lines(stream: IO[str] | str) -> Iterable[str]:
    if isinstance(stream, str):
        return stream.splitlines()
    return stream


def load_edge_list(stream: IO[str] | str, indexing: str = "zero-based") -> Graph:
    """Parse "i j [w]" lines into a validated Graph.

    ``stream`` is either an open text stream or the raw text itself. Blank
    lines and lines starting with '#' are skipped; the weight defaults to 1.
    Duplicate (i, j) / (j, i) lines are tolerated when their weights agree
    exactly and rejected otherwise. Node ids may be zero- or one-based per
    ``indexing``; they are stored zero-based.
    """
    if indexing not in INDEXING:
        raise ValueError(f"indexing must be one of {INDEXING}, got {indexing!r}")
    offset = 0 if indexing == "zero-based" else 1
    edges: dict[tuple[int, int], float] = {}
    max_node = -1
    for lineno, raw in enumerate(_iter_lines(stream), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise MalformedLine(f"line {lineno}: expected 'i j [w]', got {line!r}")
        try:
            i = int(parts[0])
            j = int(parts[1])
        except ValueError:
            raise MalformedLine(f"line {lineno}: non-integer node id in {line!r}") from None
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise MalformedLine(f"line {lineno}: non-numeric weight in {line!r}") from None
        else:
            w = 1.0
        i -= offset
        j -= offset
        if i < 0 or j < 0:
            raise MalformedLine(f"line {lineno}: node id below the {indexing} base")
        if i == j:
            raise SelfLoop(f"line {lineno}: self-loop at node {i + offset}")
        if not w > 0:
            raise NonPositiveWeight(f"line {lineno}: weight {w} on edge ({i}, {j})")
        key = (i, j) if i < j else (j, i)
        if key in edges and edges[key] != w:
            raise ConflictingDuplicateEdge(
                f"line {lineno}: edge {key} given weights {edges[key]} and {w}"
            )
        edges[key] = w
        max_node = max(max_node, i, j)
    if not edges:
        raise MalformedLine("no edges found in input")
    return _build_graph(max_node + 1, edges)


def load_lfr(network: IO[str] | str, community: IO[str] | str) -> tuple[Graph, GroundTruth]:
    """Read an LFR-style benchmark pair (network.dat, community.dat).

    The network file lists every undirected unit-weight edge in both
    orientations with one-based node ids; the community file assigns one
    label per node and determines the node count. Fields may be separated
    by tabs or spaces.
    """
    labels: dict[int, int] = {}
    for lineno, raw in enumerate(_iter_lines(community), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise MalformedLine(f"community line {lineno}: expected 'node label', got {line!r}")
        try:
            node = int(parts[0])
            lab = int(parts[1])
        except ValueError:
            raise MalformedLine(f"community line {lineno}: non-integer field in {line!r}") from None
        if node < 1:
            raise MalformedLine(f"community line {lineno}: node ids are one-based, got {node}")
        if node in labels and labels[node] != lab:
            raise MalformedLine(f"community line {lineno}: node {node} relabelled")
        labels[node] = lab
    if not labels:
        raise MalformedLine("community file has no labels")
    n = max(labels)
    missing = [str(v) for v in range(1, n + 1) if v not in labels]
    if missing:
        raise MissingCommunityLabel(f"no community label for node(s) {', '.join(missing)}")

    oriented: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(_iter_lines(network), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise MalformedLine(f"network line {lineno}: expected 'i j', got {line!r}")
        try:
            i = int(parts[0])
            j = int(parts[1])
        except ValueError:
            raise MalformedLine(f"network line {lineno}: non-integer node id in {line!r}") from None
        if i == j:
            raise SelfLoop(f"network line {lineno}: self-loop at node {i}")
        if i > n or j > n or i < 1 or j < 1:
            raise MissingCommunityLabel(
                f"network line {lineno}: node {max(i, j)} has no community label"
            )
        oriented.add((i, j))
    for i, j in sorted(oriented):
        if (j, i) not in oriented:
            raise AsymmetricEdgeList(f"edge ({i}, {j}) is listed in one orientation only")
    edges = {(min(i, j) - 1, max(i, j) - 1): 1.0 for i, j in oriented}
    if not edges:
        raise MalformedLine("network file has no edges")
    g = _build_graph(n, edges)
    truth = GroundTruth.from_labels([labels[v] for v in range(1, n + 1)])
    return g, truth


def planted_partition(
    k: int, size: int, p_in: float, p_out: float, seed: int
) -> tuple[Graph, GroundTruth]:
    """Sample a unit-weight planted-partition graph with k groups of equal size.

    Sampling contract, stable so tests can replay it independently: nodes are
    0..k*size-1 with node i in group ``i // size``; candidate pairs are the
    row-major upper triangle of the node grid; attempt a = 0, 1, ... draws
    ``numpy.random.default_rng([seed, a])`` and one uniform array over all
    pairs, keeping a pair when its uniform is below the probability for its
    type. The first connected sample out of 100 attempts is returned.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if size < 2:
        raise ValueError(f"size must be >= 2, got {size}")
    if not (0.0 <= p_out <= p_in <= 1.0):
        raise ValueError(f"need 0 <= p_out <= p_in <= 1, got p_in={p_in}, p_out={p_out}")
    n = k * size
    group = np.arange(n) // size
    iu, ju = np.triu_indices(n, k=1)
    p_pair = np.where(group[iu] == group[ju], p_in, p_out)
    for attempt in range(100):
        rng = np.random.default_rng([seed, attempt])
        keep = rng.random(iu.size) < p_pair
        edge_index = np.stack([iu[keep], ju[keep]], axis=1)
        if edge_index.shape[0] > 0 and _is_connected(n, edge_index):
            edges = {(int(i), int(j)): 1.0 for i, j in edge_index}
            g = _build_graph(n, edges)
            return g, GroundTruth.from_labels(group)
    raise GenerationFailed(
        f"no connected sample in 100 attempts "
        f"(k={k}, size={size}, p_in={p_in}, p_out={p_out}, seed={seed})"
    )
