"""Spectral decompositions and time-parameterised node-vector embeddings.

Two decompositions are supported: the random-walk transition matrix
M = D^-1 A (computed through its symmetric similar matrix for a real,
stable spectrum) and the modularity matrix B_Q = A - d d^T / 2m. Either
yields node vectors whose signed Gram matrix reproduces the corresponding
partition-quality matrix, which turns community detection into max-sum
vector partitioning.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg

from .errors import DimOutOfRange, EigensolverFailure, ModeBasisMismatch, ZeroDegree
from .graph import Graph

MODES = ("exponential", "linearised", "modularity")
SOURCES = ("transition", "modularity")

# Component weights with magnitude below this are treated as zero and kept
# on the positive side of the signature, so the signature does not flap when
# an eigenvalue weight crosses zero along a time sweep.
ZERO_WEIGHT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    """Full eigensystem of the transition or modularity matrix.

    Eigenvalues are sorted descending and eigenvectors are stored as columns.
    Transition eigenvectors v_k are normalised so v_k^T diag(pi) v_l is the
    identity; modularity eigenvectors are orthonormal in the standard inner
    product, with the all-ones direction carried explicitly as the zero mode.
    """

    source: str  # "transition" | "modularity"
    eigenvalues: np.ndarray  # (n,) descending
    eigenvectors: np.ndarray  # (n, n), column k pairs with eigenvalues[k]
    pi: np.ndarray  # stationary distribution d / 2m
    total_weight: float

    @property
    def n(self) -> int:
        return int(self.eigenvalues.size)


@dataclass(frozen=True, eq=False)
class Embedding:
    """Node vectors x_i in a (pseudo-)Euclidean space of dimension ``dim``.

    ``signature`` holds one +1/-1 per component, sorted so every +1 precedes
    every -1; the squared length of a vector under this signature is
    sum_k signature[k] * x[k]**2. ``time`` is None for modularity-sourced
    embeddings, which have no time parameter.
    """

    mode: str  # "exponential" | "linearised" | "modularity"
    time: float | None
    dim: int
    vectors: np.ndarray  # (n, dim)
    signature: np.ndarray  # (dim,) of +1 / -1
    total_weight: float

    @property
    def n(self) -> int:
        return int(self.vectors.shape[0])

    @property
    def is_euclidean(self) -> bool:
        return bool(np.all(self.signature > 0))


def _fix_signs(V: np.ndarray) -> np.ndarray:
    """Make each column's largest-magnitude entry positive, for determinism."""
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[idx, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def decompose_transition(g: Graph) -> SpectralBasis:
    """Eigendecompose the random-walk transition matrix M = D^-1 A.

    The eigenproblem is solved on the symmetric similar matrix
    S = D^-1/2 A D^-1/2, whose eigenpairs (lam, u) map to eigenpairs
    (lam, sqrt(2m) D^-1/2 u) of M normalised against diag(pi).
    """
    d = np.asarray(g.degrees, dtype=np.float64)
    if np.any(d <= 0):
        bad = int(np.argmin(d))
        raise ZeroDegree(f"node {bad} has zero degree")
    two_m = 2.0 * g.total_weight
    inv_sqrt_d = 1.0 / np.sqrt(d)
    A = g.dense_adjacency()
    S = inv_sqrt_d[:, None] * A * inv_sqrt_d[None, :]
    S = 0.5 * (S + S.T)
    try:
        w, U = scipy.linalg.eigh(S)
    except scipy.linalg.LinAlgError as exc:
        raise EigensolverFailure(f"transition eigendecomposition failed: {exc}") from exc
    order = np.argsort(-w, kind="stable")
    w = w[order]
    V = np.sqrt(two_m) * inv_sqrt_d[:, None] * U[:, order]
    V = _fix_signs(V)
    pi = d / two_m
    for arr in (w, V, pi):
        arr.setflags(write=False)
    return SpectralBasis(
        source="transition",
        eigenvalues=w,
        eigenvectors=V,
        pi=pi,
        total_weight=g.total_weight,
    )


def decompose_modularity_matrix(g: Graph) -> SpectralBasis:
    """Eigendecompose the modularity matrix B_Q = A - d d^T / 2m.

    The all-ones direction is an exact zero mode of B_Q. It is separated by
    restricting B_Q to the orthogonal complement of the ones vector before
    calling the eigensolver, then re-inserted with eigenvalue 0, so
    downstream consumers can exclude it unambiguously.
    """
    n = g.n
    d = np.asarray(g.degrees, dtype=np.float64)
    two_m = 2.0 * g.total_weight
    B = g.dense_adjacency() - np.outer(d, d) / two_m
    ones = np.full(n, 1.0 / np.sqrt(n))
    try:
        if n > 1:
            W = scipy.linalg.null_space(np.ones((1, n)))
            C = W.T @ B @ W
            C = 0.5 * (C + C.T)
            beta, Z = scipy.linalg.eigh(C)
            U_rest = W @ Z
        else:
            beta = np.empty(0)
            U_rest = np.empty((1, 0))
    except scipy.linalg.LinAlgError as exc:
        raise EigensolverFailure(f"modularity eigendecomposition failed: {exc}") from exc
    w_all = np.concatenate([beta, [0.0]])
    U_all = np.concatenate([U_rest, ones[:, None]], axis=1)
    order = np.argsort(-w_all, kind="stable")
    w_all = w_all[order]
    U_all = _fix_signs(U_all[:, order])
    pi = d / two_m
    for arr in (w_all, U_all, pi):
        arr.setflags(write=False)
    return SpectralBasis(
        source="modularity",
        eigenvalues=w_all,
        eigenvectors=U_all,
        pi=pi,
        total_weight=g.total_weight,
    )


def scaled_eigenvalues(basis: SpectralBasis, mode: str, t: float) -> np.ndarray:
    """Time-scaled eigenvalue weights, in basis order.

    Exponential mode returns exp(-t (1 - lam_k)), strictly positive and at
    most 1; linearised mode returns 1 - t (1 - lam_k), which is unbounded
    and may be negative.
    """
    if basis.source != "transition":
        raise ModeBasisMismatch(f"scaled eigenvalues need a transition basis, got {basis.source!r}")
    lam = basis.eigenvalues
    if mode == "exponential":
        if t < 0:
            raise ValueError(f"exponential mode needs t >= 0, got {t}")
        return np.exp(-t * (1.0 - lam))
    if mode == "linearised":
        if not t > 0:
            raise ValueError(f"linearised mode needs t > 0, got {t}")
        return 1.0 - t * (1.0 - lam)
    raise ModeBasisMismatch(f"no eigenvalue scaling for mode {mode!r}")


def _ones_mode_index(U: np.ndarray) -> int:
    """Column with the largest overlap with the all-ones direction."""
    return int(np.argmax(np.abs(U.sum(axis=0))))


def build_embedding(
    basis: SpectralBasis, mode: str, t: float | None = None, dim: int | None = None
) -> Embedding:
    """Build the node-vector embedding for one mode at one time.

    Modes
    -----
    exponential
        Component k of x_i is sqrt(exp(-t (1 - lam_{k+1}))) pi_i v_{k+1,i};
        the signature is all +1 and the Gram matrix at full dimension equals
        the diffusion autocovariance B(t).
    linearised
        Component weights mu_k(t) = 1 - t (1 - lam_k) may be negative; each
        component carries sqrt(|mu|) and contributes with sign(mu), giving a
        pseudo-Euclidean embedding whose signed Gram matrix at full dimension
        equals the linearised autocovariance.
    modularity
        Components are sqrt(|beta_k|) u_{k,i} over the ``dim`` leading
        eigenvalues of the modularity matrix, excluding the all-ones zero
        mode, with sign(beta_k) in the signature.

    The retained components are always the leading ones in eigenvalue order,
    then permuted (together with their signature entries) so all +1
    components precede all -1 components.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    n = basis.n
    if dim is None:
        dim = n - 1
    if not 1 <= dim <= n - 1:
        raise DimOutOfRange(f"dim must be in [1, {n - 1}], got {dim}")

    if mode == "modularity":
        if basis.source != "modularity":
            raise ModeBasisMismatch("modularity mode needs a modularity basis")
        ones_idx = _ones_mode_index(basis.eigenvectors)
        keep = [k for k in range(n) if k != ones_idx][:dim]
        weights = basis.eigenvalues[keep]
        X = basis.eigenvectors[:, keep] * np.sqrt(np.abs(weights))[None, :]
        time_field: float | None = None
    else:
        if basis.source != "transition":
            raise ModeBasisMismatch(f"{mode} mode needs a transition basis")
        if t is None:
            raise ValueError(f"{mode} mode needs a time value")
        weights = scaled_eigenvalues(basis, mode, t)[1 : dim + 1]
        X = (
            basis.pi[:, None]
            * basis.eigenvectors[:, 1 : dim + 1]
            * np.sqrt(np.abs(weights))[None, :]
        )
        time_field = float(t)

    signature = np.where(weights < -ZERO_WEIGHT_TOL, -1, 1).astype(np.int64)
    perm = np.argsort(signature < 0, kind="stable")
    X = np.ascontiguousarray(X[:, perm])
    signature = signature[perm]
    X.setflags(write=False)
    signature.setflags(write=False)
    return Embedding(
        mode=mode,
        time=time_field,
        dim=int(dim),
        vectors=X,
        signature=signature,
        total_weight=basis.total_weight,
    )


def save_basis(basis: SpectralBasis, path: str | Path) -> None:
    """Dump a SpectralBasis to JSON so later runs can skip recomputation."""
    payload = {
        "source": basis.source,
        "n": basis.n,
        "total_weight": basis.total_weight,
        "eigenvalues": basis.eigenvalues.tolist(),
        "eigenvectors": basis.eigenvectors.tolist(),  # [i][k] = component i of eigenvector k
        "pi": basis.pi.tolist(),
    }
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_basis(path: str | Path) -> SpectralBasis:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload["source"] not in SOURCES:
        raise ValueError(f"unknown basis source {payload['source']!r}")
    eigenvalues = np.asarray(payload["eigenvalues"], dtype=np.float64)
    eigenvectors = np.asarray(payload["eigenvectors"], dtype=np.float64)
    pi = np.asarray(payload["pi"], dtype=np.float64)
    for arr in (eigenvalues, eigenvectors, pi):
        arr.setflags(write=False)
    return SpectralBasis(
        source=payload["source"],
        eigenvalues=eigenvalues,
        eigenvectors=eigenvectors,
        pi=pi,
        total_weight=float(payload["total_weight"]),
    )
