import numpy as np
import pytest

import vecpart as vp
from helpers import CYCLE4_TEXT, TRIANGLE_TEXT, pairgraph4, random_connected_graph


def dense_transition_eigenvalues(g):
    """Oracle: eigenvalues of D^-1 A via the plain nonsymmetric solver."""
    M = g.dense_adjacency() / g.degrees[:, None]
    w = np.linalg.eigvals(M)
    assert np.max(np.abs(w.imag)) < 1e-10
    return np.sort(w.real)[::-1]


class TestDecomposeTransition:
    def test_pairgraph4_eigenvalues(self):
        basis = vp.decompose_transition(pairgraph4())
        # Hand computation from the symmetry eigenvectors (1,1,1,1),
        # (1,1,-1,-1), (1,-1,1,-1), (1,-1,-1,1) of M = A / 12.
        expected = np.array([1.0, 2.0 / 3.0, -5.0 / 6.0, -5.0 / 6.0])
        assert np.allclose(basis.eigenvalues, expected, atol=1e-10)
        assert np.allclose(basis.eigenvalues, dense_transition_eigenvalues(pairgraph4()), atol=1e-10)

    def test_triangle_eigenvalues(self):
        basis = vp.decompose_transition(vp.load_edge_list(TRIANGLE_TEXT))
        assert np.allclose(basis.eigenvalues, [1.0, -0.5, -0.5], atol=1e-10)

    def test_cycle4_eigenvalues_bipartite(self):
        g = vp.load_edge_list(CYCLE4_TEXT)
        basis = vp.decompose_transition(g)
        assert np.allclose(basis.eigenvalues, [1.0, 0.0, 0.0, -1.0], atol=1e-10)
        assert np.allclose(basis.eigenvalues, dense_transition_eigenvalues(g), atol=1e-10)
        assert basis.eigenvalues[-1] == pytest.approx(-1.0, abs=1e-10)

    @pytest.mark.parametrize("seed", range(8))
    def test_invariants_on_random_graphs(self, seed):
        g = random_connected_graph(seed, n_range=(3, 15), weighted=seed % 2 == 0)
        basis = vp.decompose_transition(g)
        lam, V = basis.eigenvalues, basis.eigenvectors
        assert abs(lam[0] - 1.0) <= 1e-10
        assert np.all(lam >= -1.0 - 1e-10) and np.all(lam <= 1.0 + 1e-10)
        assert np.all(np.diff(lam) <= 1e-12)
        # v_1 is constant up to sign and scale
        v1 = V[:, 0]
        assert np.max(np.abs(v1 - v1[0])) <= 1e-8 * max(1.0, abs(v1[0]))
        # Pi-orthonormality
        gram = V.T @ (basis.pi[:, None] * V)
        assert np.max(np.abs(gram - np.eye(g.n))) <= 1e-8
        # eigen residual on M itself
        M = g.dense_adjacency() / g.degrees[:, None]
        assert np.max(np.abs(M @ V - V * lam[None, :])) <= 1e-8
        assert np.allclose(basis.pi, g.degrees / (2 * g.total_weight))

    def test_zero_degree_rejected(self):
        empty = np.empty((0, 2), dtype=np.int64)
        lone = vp.Graph(
            n=1,
            edge_index=empty,
            edge_weight=np.empty(0),
            degrees=np.zeros(1),
            total_weight=0.0,
        )
        with pytest.raises(vp.ZeroDegree):
            vp.decompose_transition(lone)

    def test_sign_convention_deterministic(self):
        b1 = vp.decompose_transition(pairgraph4())
        b2 = vp.decompose_transition(pairgraph4())
        assert np.array_equal(b1.eigenvectors, b2.eigenvectors)
        largest = np.abs(b1.eigenvectors).argmax(axis=0)
        assert np.all(b1.eigenvectors[largest, np.arange(4)] > 0)


class TestDecomposeModularityMatrix:
    def test_all_ones_is_zero_mode(self):
        basis = vp.decompose_modularity_matrix(pairgraph4())
        g = pairgraph4()
        B = g.dense_adjacency() - np.outer(g.degrees, g.degrees) / (2 * g.total_weight)
        assert np.max(np.abs(B @ np.ones(4))) <= 1e-10
        # the zero mode along the ones direction is carried explicitly
        overlaps = np.abs(basis.eigenvectors.sum(axis=0))
        k = int(np.argmax(overlaps))
        assert overlaps[k] == pytest.approx(2.0, abs=1e-12)  # sqrt(n)
        assert abs(basis.eigenvalues[k]) <= 1e-10

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_dense_assembly_oracle(self, seed):
        g = random_connected_graph(seed, n_range=(3, 12), weighted=True)
        basis = vp.decompose_modularity_matrix(g)
        B = g.dense_adjacency() - np.outer(g.degrees, g.degrees) / (2 * g.total_weight)
        oracle = np.sort(np.linalg.eigvalsh(B))[::-1]
        assert np.allclose(basis.eigenvalues, oracle, atol=1e-8)
        # orthonormal eigenvectors and small residual
        U = basis.eigenvectors
        assert np.max(np.abs(U.T @ U - np.eye(g.n))) <= 1e-8
        assert np.max(np.abs(B @ U - U * basis.eigenvalues[None, :])) <= 1e-8

    def test_path4_has_negative_eigenvalue(self):
        g = vp.load_edge_list("0 1\n1 2\n2 3\n")
        basis = vp.decompose_modularity_matrix(g)
        B = g.dense_adjacency() - np.outer(g.degrees, g.degrees) / (2 * g.total_weight)
        oracle = np.sort(np.linalg.eigvalsh(B))[::-1]
        assert np.allclose(basis.eigenvalues, oracle, atol=1e-10)
        assert basis.eigenvalues.min() < -1e-6


class TestScaledEigenvalues:
    def test_stationary_mode_weight_is_one(self):
        basis = vp.decompose_transition(pairgraph4())
        for t in (0.0, 1.0, 7.5):
            assert vp.scaled_eigenvalues(basis, "exponential", t)[0] == pytest.approx(1.0)
        for t in (0.5, 1.0, 7.5):
            assert vp.scaled_eigenvalues(basis, "linearised", t)[0] == pytest.approx(1.0)

    def test_exponential_value(self):
        basis = vp.decompose_transition(pairgraph4())
        # lam = 2/3 at t = 3 decays to exp(-3 * 1/3) = 1/e
        assert vp.scaled_eigenvalues(basis, "exponential", 3.0)[1] == pytest.approx(
            np.exp(-1.0), abs=1e-12
        )

    def test_linearised_at_t1_equals_eigenvalues(self):
        basis = vp.decompose_transition(pairgraph4())
        mu = vp.scaled_eigenvalues(basis, "linearised", 1.0)
        assert np.allclose(mu, basis.eigenvalues, atol=1e-12)
        assert mu[2] == pytest.approx(-5.0 / 6.0, abs=1e-10)

    def test_exponential_weights_positive_at_most_one(self):
        g = random_connected_graph(3, n_range=(5, 10))
        basis = vp.decompose_transition(g)
        for t in (0.0, 0.5, 2.0, 20.0):
            w = vp.scaled_eigenvalues(basis, "exponential", t)
            assert np.all(w > 0) and np.all(w <= 1.0 + 1e-12)

    def test_wrong_basis_rejected(self):
        basis = vp.decompose_modularity_matrix(pairgraph4())
        with pytest.raises(vp.ModeBasisMismatch):
            vp.scaled_eigenvalues(basis, "exponential", 1.0)


class TestBuildEmbedding:
    def test_exponential_weight_at_t3(self):
        basis = vp.decompose_transition(pairgraph4())
        emb = vp.build_embedding(basis, "exponential", t=3.0, dim=3)
        # squared norm of the first component column across nodes:
        # exp(-1) * sum_i (pi_i v_2i)^2 = exp(-1) * 1/4 for this graph
        col = emb.vectors[:, 0]
        assert float(col @ col) == pytest.approx(np.exp(-1.0) / 4.0, abs=1e-12)
        assert np.all(emb.signature == 1)
        assert emb.is_euclidean
        assert emb.time == 3.0 and emb.dim == 3

    def test_t0_full_dim_gram_matches_covariance_at_zero(self):
        g = random_connected_graph(5, n_range=(4, 9), weighted=True)
        basis = vp.decompose_transition(g)
        emb = vp.build_embedding(basis, "exponential", t=0.0, dim=g.n - 1)
        pi = basis.pi
        target = np.diag(pi) - np.outer(pi, pi)
        assert np.max(np.abs(emb.vectors @ emb.vectors.T - target)) <= 1e-10

    def test_linearised_signature_pairgraph4(self):
        basis = vp.decompose_transition(pairgraph4())
        emb = vp.build_embedding(basis, "linearised", t=1.0, dim=3)
        # mu_k(1) = lam_k, so mu = (2/3, -5/6, -5/6) on the retained modes
        assert np.array_equal(emb.signature, [1, -1, -1])
        assert not emb.is_euclidean
        sq = (emb.vectors**2).sum(axis=0)
        assert sq[0] == pytest.approx((2.0 / 3.0) / 4.0, abs=1e-12)
        assert sq[1] == pytest.approx((5.0 / 6.0) / 4.0, abs=1e-12)

    @pytest.mark.parametrize("mode,t", [("exponential", 2.0), ("linearised", 1.5)])
    def test_zero_sum(self, mode, t):
        for seed in range(4):
            g = random_connected_graph(seed, n_range=(4, 12), weighted=True)
            emb = vp.build_embedding(vp.decompose_transition(g), mode, t=t, dim=g.n - 1)
            assert np.max(np.abs(emb.vectors.sum(axis=0))) <= 1e-8

    def test_zero_sum_modularity(self):
        g = random_connected_graph(9, n_range=(5, 10))
        emb = vp.build_embedding(vp.decompose_modularity_matrix(g), "modularity", dim=g.n - 1)
        assert np.max(np.abs(emb.vectors.sum(axis=0))) <= 1e-8

    @pytest.mark.parametrize("seed", range(5))
    def test_gram_identity_against_direct_autocovariance(self, seed):
        g = random_connected_graph(seed, n_range=(4, 20), weighted=seed % 2 == 1)
        basis = vp.decompose_transition(g)
        for t in (0.0, 0.5, 1.0, 2.0, 5.0, 20.0):
            emb = vp.build_embedding(basis, "exponential", t=t, dim=g.n - 1)
            B = vp.autocovariance_direct(g, t)
            assert np.max(np.abs(emb.vectors @ emb.vectors.T - B)) <= 1e-8

    def test_monotone_shrinkage(self):
        g = random_connected_graph(2, n_range=(5, 10), weighted=True)
        basis = vp.decompose_transition(g)
        times = [0.0, 0.5, 1.0, 2.0, 5.0, 20.0]
        embeddings = [vp.build_embedding(basis, "exponential", t=t, dim=g.n - 1) for t in times]
        for earlier, later in zip(embeddings, embeddings[1:]):
            assert np.all(np.abs(later.vectors) <= np.abs(earlier.vectors) + 1e-15)

    def test_asymptotic_dominance(self):
        # With a spectral gap lam_2 > lam_3 the second-to-first component
        # ratio decays by exactly exp(-t (lam_2 - lam_3) / 2), so the first
        # component dominates as t grows.
        checked = 0
        for seed in (0, 2, 4, 7):
            g = random_connected_graph(seed, n_range=(5, 8), weighted=True)
            basis = vp.decompose_transition(g)
            lam = basis.eigenvalues
            if lam[1] - lam[2] < 0.01:
                continue
            factor = np.exp(-200.0 * (lam[1] - lam[2]) / 2.0)
            assert factor < 1e-1
            at0 = vp.build_embedding(basis, "exponential", t=0.0, dim=g.n - 1)
            at200 = vp.build_embedding(basis, "exponential", t=200.0, dim=g.n - 1)
            mask = np.abs(at0.vectors[:, 0]) > 1e-12
            assert mask.any()
            r0 = np.abs(at0.vectors[mask, 1]) / np.abs(at0.vectors[mask, 0])
            r200 = np.abs(at200.vectors[mask, 1]) / np.abs(at200.vectors[mask, 0])
            assert np.all(r200 <= factor * r0 * (1.0 + 1e-6) + 1e-300)
            checked += 1
        assert checked >= 2

    def test_truncation_consistency(self):
        g = random_connected_graph(6, n_range=(6, 10), weighted=True)
        basis = vp.decompose_transition(g)
        for mode, t in (("exponential", 1.3), ("linearised", 2.0)):
            full = vp.build_embedding(basis, mode, t=t, dim=g.n - 1)
            for d in (1, 2, g.n - 2):
                part = vp.build_embedding(basis, mode, t=t, dim=d)
                assert np.array_equal(part.vectors, full.vectors[:, :d])
                assert np.array_equal(part.signature, full.signature[:d])

    def test_signature_sorted(self):
        g = random_connected_graph(8, n_range=(6, 10))
        basis = vp.decompose_transition(g)
        for t in (0.5, 1.0, 3.0, 10.0):
            emb = vp.build_embedding(basis, "linearised", t=t, dim=g.n - 1)
            flips = np.diff(emb.signature)
            assert np.all(flips <= 0)  # +1 block first, then -1 block

    def test_degenerate_eigenspace_rotation_invariance(self):
        # pairgraph4 has a two-dimensional eigenspace at -5/6; objectives
        # only see Gram values, so any orthonormal basis of it is equivalent.
        g = pairgraph4()
        basis = vp.decompose_transition(g)
        theta = 0.7
        rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
        V = basis.eigenvectors.copy()
        V[:, 2:4] = V[:, 2:4] @ rot
        rotated = vp.SpectralBasis(
            source="transition",
            eigenvalues=basis.eigenvalues,
            eigenvectors=V,
            pi=basis.pi,
            total_weight=basis.total_weight,
        )
        rng = np.random.default_rng(0)
        for t in (0.5, 2.0):
            e1 = vp.build_embedding(basis, "exponential", t=t, dim=3)
            e2 = vp.build_embedding(rotated, "exponential", t=t, dim=3)
            for _ in range(5):
                p = vp.Partition.from_labels(rng.integers(0, 3, size=4))
                assert vp.stability(e1, p) == pytest.approx(vp.stability(e2, p), abs=1e-9)

    def test_dim_out_of_range(self):
        basis = vp.decompose_transition(pairgraph4())
        with pytest.raises(vp.DimOutOfRange):
            vp.build_embedding(basis, "exponential", t=1.0, dim=0)
        with pytest.raises(vp.DimOutOfRange):
            vp.build_embedding(basis, "exponential", t=1.0, dim=4)

    def test_mode_basis_mismatch(self):
        tb = vp.decompose_transition(pairgraph4())
        mb = vp.decompose_modularity_matrix(pairgraph4())
        with pytest.raises(vp.ModeBasisMismatch):
            vp.build_embedding(tb, "modularity", dim=2)
        with pytest.raises(vp.ModeBasisMismatch):
            vp.build_embedding(mb, "exponential", t=1.0, dim=2)

    def test_time_validation(self):
        basis = vp.decompose_transition(pairgraph4())
        with pytest.raises(ValueError):
            vp.build_embedding(basis, "exponential", t=-1.0, dim=2)
        with pytest.raises(ValueError):
            vp.build_embedding(basis, "linearised", t=0.0, dim=2)
        with pytest.raises(ValueError):
            vp.build_embedding(basis, "exponential", dim=2)

    def test_modularity_embedding_excludes_ones_mode(self):
        g = random_connected_graph(11, n_range=(5, 9))
        basis = vp.decompose_modularity_matrix(g)
        emb = vp.build_embedding(basis, "modularity", dim=g.n - 1)
        assert emb.time is None
        # full-dimension signed Gram reproduces B_Q
        B = g.dense_adjacency() - np.outer(g.degrees, g.degrees) / (2 * g.total_weight)
        gram = (emb.vectors * emb.signature) @ emb.vectors.T
        assert np.max(np.abs(gram - B)) <= 1e-8


class TestBasisSerialisation:
    def test_round_trip(self, tmp_path):
        basis = vp.decompose_transition(pairgraph4())
        path = tmp_path / "basis.json"
        vp.save_basis(basis, path)
        loaded = vp.load_basis(path)
        assert loaded.source == basis.source
        assert np.array_equal(loaded.eigenvalues, basis.eigenvalues)
        assert np.array_equal(loaded.eigenvectors, basis.eigenvectors)
        assert np.array_equal(loaded.pi, basis.pi)
        assert loaded.total_weight == basis.total_weight
        emb = vp.build_embedding(loaded, "exponential", t=2.0, dim=3)
        ref = vp.build_embedding(basis, "exponential", t=2.0, dim=3)
        assert np.array_equal(emb.vectors, ref.vectors)
