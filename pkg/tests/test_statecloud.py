import numpy as np
import pytest

import topophase as tp
from helpers import (
    ssh4_cloud_chord,
    ssh4_expectations_closed_form,
    ssh4_ground_closed_form,
)


def ssh4(lam):
    return tp.build_ssh_hamiltonian(lam, 1.0, 1.0, 4)


class TestHamiltonian:
    def test_offdiagonals_at_half(self):
        h = tp.build_ssh_hamiltonian(0.5, 1.0, 1.0, 4)
        assert np.allclose(np.diag(h, 1), [0.5, 1.5, 0.5])
        assert np.allclose(h, h.T)
        assert np.allclose(np.diag(h), 0.0)

    def test_offdiagonals_uniform(self):
        h = tp.build_ssh_hamiltonian(0.0, 1.0, 1.0, 4)
        assert np.allclose(np.diag(h, 1), [1.0, 1.0, 1.0])

    def test_two_sites(self):
        h = tp.build_ssh_hamiltonian(0.0, 1.0, 1.0, 2)
        assert h.shape == (2, 2)
        assert h[0, 1] == 1.0

    def test_too_few_sites(self):
        with pytest.raises(tp.InvalidModelError):
            tp.build_ssh_hamiltonian(0.0, 1.0, 1.0, 1)

    def test_hermitian(self):
        for lam in (-0.7, 0.0, 0.3, 1.0):
            assert tp.is_hermitian(tp.build_ssh_hamiltonian(lam, 1.0, 2.0, 6))


class TestGroundState:
    def test_uniform_chain_closed_form(self):
        # path-graph eigenpairs: E_k = 2 cos(k pi / 5), v_j proportional to sin(4 pi j / 5)
        state = tp.ground_state(ssh4(0.0))
        assert state.energy == pytest.approx(2.0 * np.cos(4.0 * np.pi / 5.0), abs=1e-12)
        raw = np.array([np.sin(4.0 * np.pi * j / 5.0) for j in range(1, 5)])
        expected = raw / np.linalg.norm(raw)
        assert np.allclose(state.amplitudes.real, expected, atol=1e-12)
        assert np.allclose(state.amplitudes.imag, 0.0, atol=1e-15)

    def test_two_site_chain(self):
        state = tp.ground_state(tp.build_ssh_hamiltonian(0.0, 1.0, 1.0, 2))
        assert state.energy == pytest.approx(-1.0, abs=1e-12)
        assert np.allclose(state.amplitudes.real, [1.0 / np.sqrt(2.0), -1.0 / np.sqrt(2.0)], atol=1e-12)

    @pytest.mark.parametrize("lam", [-0.5, 0.5])
    def test_staggered_chain_closed_form(self, lam):
        energy, vec = ssh4_ground_closed_form(lam)
        state = tp.ground_state(ssh4(lam))
        assert state.energy == pytest.approx(energy, abs=1e-12)
        assert np.allclose(state.amplitudes.real, vec, atol=1e-12)

    def test_gauge_first_component_positive(self):
        state = tp.ground_state(ssh4(-0.3))
        first = next(c for c in state.amplitudes if abs(c) > 1e-10)
        assert first.real > 0 and abs(first.imag) < 1e-15

    def test_degenerate_chain_rejected(self):
        # lambda = -1 splits the chain into two exact dimers
        with pytest.raises(tp.DegenerateGroundStateError):
            tp.ground_state(ssh4(-1.0))

    def test_gap_tolerance_configurable(self):
        h = np.diag([0.0, 1e-6, 1.0])
        tp.ground_state(h, gap_tol=1e-9)
        with pytest.raises(tp.DegenerateGroundStateError):
            tp.ground_state(h, gap_tol=1e-3)

    def test_deterministic(self):
        a = tp.ground_state(ssh4(0.2))
        b = tp.ground_state(ssh4(0.2))
        assert a.energy == b.energy
        assert np.array_equal(a.amplitudes, b.amplitudes)

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError):
            tp.ground_state(np.array([[0.0, 1.0], [0.5, 0.0]]))


class TestObservables:
    def test_four_site_set(self):
        obs = tp.ssh_observables(4)
        assert len(obs) == 10
        assert obs.labels == ("n1", "n2", "n3", "n4", "re1_2", "im1_2", "re2_3", "im2_3", "re3_4", "im3_4")
        for m in obs.matrices:
            assert tp.is_hermitian(m)

    def test_two_site_count(self):
        obs = tp.ssh_observables(2)
        assert len(obs) == 4

    def test_general_count(self):
        assert len(tp.ssh_observables(6)) == 6 + 2 * 5

    def test_invalid_size(self):
        with pytest.raises(tp.InvalidModelError):
            tp.ssh_observables(1)

    def test_normalized_unit_norms(self):
        normed = tp.ssh_observables(4).normalized()
        assert np.allclose(normed.operator_norms(), 1.0, atol=1e-12)


class TestExpectation:
    def test_density_on_own_basis_vector(self):
        state = tp.QuantumState(np.array([1.0, 0.0, 0.0, 0.0]), energy=0.0)
        density1 = tp.ssh_observables(4).matrices[0]
        assert tp.expectation(state, density1) == pytest.approx(1.0, abs=1e-15)

    def test_identity_gives_one(self):
        state = tp.ground_state(ssh4(0.4))
        assert tp.expectation(state, np.eye(4)) == pytest.approx(1.0, abs=1e-12)

    def test_staggered_chain_density(self):
        state = tp.ground_state(ssh4(-0.5))
        value = tp.expectation(state, tp.ssh_observables(4).matrices[0])
        assert value == pytest.approx(ssh4_expectations_closed_form(-0.5)[0], abs=1e-12)

    def test_shape_mismatch(self):
        state = tp.QuantumState(np.array([1.0, 0.0]), energy=0.0)
        with pytest.raises(ValueError):
            tp.expectation(state, np.eye(3))


class TestPhiMap:
    def test_identity_only(self):
        state = tp.QuantumState(np.array([0.6, 0.8]), energy=0.0)
        obs = tp.ObservableSet((np.eye(2),), ("id",))
        assert np.allclose(tp.phi_map(state, obs), [1.0], atol=1e-14)

    def test_imaginary_correlations_vanish(self):
        # real Hamiltonian -> real ground state -> im parts identically zero
        obs = tp.ssh_observables(4)
        point = tp.phi_map(tp.ground_state(ssh4(0.5)), obs)
        for label, value in zip(obs.labels, point):
            if label.startswith("im"):
                assert abs(value) < 1e-12

    def test_matches_closed_form(self):
        obs = tp.ssh_observables(4)
        for lam in (-0.5, -0.1, 0.3, 0.5):
            point = tp.phi_map(tp.ground_state(ssh4(lam)), obs)
            assert np.allclose(point, ssh4_expectations_closed_form(lam), atol=1e-12)

    def test_reflection_symmetric_densities(self):
        obs = tp.ssh_observables(4)
        for lam in np.linspace(-0.9, 0.9, 19):
            point = tp.phi_map(tp.ground_state(ssh4(lam)), obs)
            assert abs(point[0] - point[3]) < 1e-10
            assert abs(point[1] - point[2]) < 1e-10

    def test_unitary_conjugation_invariance(self):
        obs = tp.ssh_observables(4)
        state = tp.ground_state(ssh4(0.3))
        base = tp.phi_map(state, obs)
        for seed in range(5):
            u = tp.haar_unitary(4, seed)
            rotated = tp.QuantumState(u @ state.amplitudes, state.energy)
            conj = tp.phi_map(rotated, obs.conjugated(u))
            assert np.allclose(conj, base, atol=1e-10)


class TestBuildCloud:
    def test_sweep_cloud_shape(self):
        model = tp.SSHChain(4, 1.0, 1.0)
        obs = tp.ssh_observables(4)
        lams = np.round(np.linspace(-0.95, 1.05, 21), 12)
        cloud = tp.build_cloud(lams, model, obs)
        assert cloud.points.shape == (21, 10)
        assert np.array_equal(cloud.params, lams)

    def test_single_lambda(self):
        cloud = tp.build_cloud([0.2], tp.SSHChain(4), tp.ssh_observables(4))
        assert cloud.n_points == 1

    def test_two_point_chord(self):
        # the expectation cloud lies on a circle of radius 1/sqrt(2); the
        # chord formula is an independent check on the pairwise distance
        cloud = tp.build_cloud([-0.5, 0.5], tp.SSHChain(4), tp.ssh_observables(4))
        dist = np.linalg.norm(cloud.points[0] - cloud.points[1])
        assert dist == pytest.approx(ssh4_cloud_chord(-0.5, 0.5), abs=1e-12)
        assert dist == pytest.approx(0.5621909, abs=1e-6)

    def test_degenerate_lambda_named(self):
        with pytest.raises(tp.DegenerateGroundStateError) as err:
            tp.build_cloud(np.linspace(-1.0, 1.0, 21), tp.SSHChain(4), tp.ssh_observables(4))
        assert err.value.lam == pytest.approx(-1.0)
        assert "lambda=-1" in str(err.value)

    def test_non_increasing_rejected(self):
        with pytest.raises(ValueError):
            tp.build_cloud([0.2, 0.1], tp.SSHChain(4), tp.ssh_observables(4))
        with pytest.raises(ValueError):
            tp.build_cloud([], tp.SSHChain(4), tp.ssh_observables(4))


class TestDistances:
    def test_trace_distance_identical(self):
        rho = tp.pure_density([1.0, 0.0])
        assert tp.trace_distance(rho, rho) == pytest.approx(0.0, abs=1e-12)

    def test_trace_distance_orthogonal(self):
        r1 = tp.pure_density([1.0, 0.0])
        r2 = tp.pure_density([0.0, 1.0])
        assert tp.trace_distance(r1, r2) == pytest.approx(1.0, abs=1e-12)

    def test_trace_distance_half_overlap(self):
        r1 = tp.pure_density([1.0, 0.0])
        r2 = tp.pure_density([1.0 / np.sqrt(2.0), 1.0 / np.sqrt(2.0)])
        assert tp.trace_distance(r1, r2) == pytest.approx(np.sqrt(0.5), abs=1e-12)

    def test_trace_distance_pure_state_formula(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            a = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            b = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            a /= np.linalg.norm(a)
            b /= np.linalg.norm(b)
            expected = np.sqrt(1.0 - abs(np.vdot(a, b)) ** 2)
            got = tp.trace_distance(tp.pure_density(a), tp.pure_density(b))
            assert got == pytest.approx(expected, abs=1e-10)

    def test_bures_identical_and_orthogonal(self):
        r1 = tp.pure_density([1.0, 0.0])
        r2 = tp.pure_density([0.0, 1.0])
        assert tp.bures_distance(r1, r1) == pytest.approx(0.0, abs=1e-7)
        assert tp.bures_distance(r1, r2) == pytest.approx(np.sqrt(2.0), abs=1e-12)

    def test_bures_quarter_fidelity(self):
        r1 = tp.pure_density([1.0, 0.0])
        r2 = tp.pure_density([0.5, np.sqrt(3.0) / 2.0])  # overlap^2 = 0.25
        assert tp.fidelity(r1, r2) == pytest.approx(0.25, abs=1e-12)
        assert tp.bures_distance(r1, r2) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_non_density(self):
        good = tp.pure_density([1.0, 0.0])
        with pytest.raises(ValueError):
            tp.trace_distance(good, np.array([[2.0, 0.0], [0.0, -1.0]]))
        with pytest.raises(ValueError):
            tp.bures_distance(good, np.array([[0.5, 0.5], [0.0, 0.5]]))

    def test_expectation_shift_bounded_by_trace_norm(self):
        # |<O>_psi - <O>_phi| <= ||O||_op * Tr|rho - sigma|; the trace NORM is
        # 2 * trace_distance, and the factor 2 is sharp for pure states
        rng = np.random.default_rng(23)
        for _ in range(200):
            dim = int(rng.integers(2, 5))
            a = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            b = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            a /= np.linalg.norm(a)
            b /= np.linalg.norm(b)
            m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            m = m + m.conj().T
            m = m / tp.operator_norm(m)
            sa = tp.QuantumState(a, 0.0)
            sb = tp.QuantumState(b, 0.0)
            gap = abs(tp.expectation(sa, m) - tp.expectation(sb, m))
            dist = tp.trace_distance(tp.pure_density(a), tp.pure_density(b))
            assert gap <= 2.0 * dist + 1e-9


class TestOperatorNorm:
    def test_identity(self):
        assert tp.operator_norm(np.eye(3)) == pytest.approx(1.0, abs=1e-14)

    def test_diagonal(self):
        assert tp.operator_norm(np.diag([3.0, -5.0])) == pytest.approx(5.0, abs=1e-14)

    def test_uniform_chain(self):
        assert tp.operator_norm(ssh4(0.0)) == pytest.approx(2.0 * np.cos(np.pi / 5.0), abs=1e-12)


class TestCsv:
    def test_roundtrip_exact(self, tmp_path):
        cloud = tp.build_cloud(np.linspace(-0.5, 0.5, 11), tp.SSHChain(4), tp.ssh_observables(4))
        path = tmp_path / "cloud.csv"
        tp.cloud_to_csv(cloud, path)
        back = tp.cloud_from_csv(path)
        assert back.labels == cloud.labels
        assert np.array_equal(back.points, cloud.points)
        assert np.array_equal(back.params, cloud.params)

    def test_header_format(self, tmp_path):
        cloud = tp.build_cloud([0.0, 0.1], tp.SSHChain(2), tp.ssh_observables(2))
        path = tmp_path / "c.csv"
        tp.cloud_to_csv(cloud, path)
        header = path.read_text().splitlines()[0]
        assert header == "lambda,n1,n2,re1_2,im1_2"

    def test_malformed_row_reports_number(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("lambda,x\n0,1\n1\n")
        with pytest.raises(ValueError, match="row 3"):
            tp.cloud_from_csv(path)

    def test_non_numeric_row(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("lambda,x\n0,oops\n")
        with pytest.raises(ValueError, match="row 2"):
            tp.cloud_from_csv(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(ValueError, match="empty"):
            tp.cloud_from_csv(path)
