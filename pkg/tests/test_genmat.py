import numpy as np
import pytest
from scipy import stats

from rpcqr import (
    SpectrumSpec,
    coherence,
    haar_frame,
    haar_rotated,
    householder_qr,
    load_matrix,
    randsvd,
    save_matrix,
    singular_values,
    spectral_norm,
    worst_coherence_stack,
)


class TestHaarFrame:
    def test_orthonormal(self):
        Q = haar_frame(1000, 50, seed=0)
        assert spectral_norm(Q.T @ Q - np.eye(50)) <= 1e-13

    def test_deterministic(self):
        assert np.array_equal(haar_frame(64, 4, seed=1), haar_frame(64, 4, seed=1))

    def test_distinct_seeds_differ(self):
        assert not np.array_equal(haar_frame(64, 4, seed=1),
                                  haar_frame(64, 4, seed=2))

    def test_rotation_angle_uniform(self):
        # First column of a 2x2 frame should be uniform on the circle.
        angles = []
        for seed in range(2000):
            Q = haar_frame(2, 2, seed=seed)
            angles.append(np.arctan2(Q[1, 0], Q[0, 0]))
        hist, _ = np.histogram(angles, bins=8, range=(-np.pi, np.pi))
        chi2 = np.sum((hist - 250.0) ** 2 / 250.0)
        assert chi2 < stats.chi2.isf(0.001, df=7)


class TestRandsvd:
    def test_geometric_spectrum(self):
        s = SpectrumSpec(n=3, kappa=100.0).values()
        assert np.allclose(s, [1.0, 0.1, 0.01])

    def test_round_trip_spectrum(self):
        spec = SpectrumSpec(n=20, kappa=1e6)
        A = randsvd(spec, seed=3)
        s = singular_values(A)
        assert np.max(np.abs(s - spec.values()) / spec.values()) <= 1e-8

    def test_kappa_one_is_orthogonal(self):
        A = randsvd(SpectrumSpec(n=10, kappa=1.0), seed=4)
        assert spectral_norm(A.T @ A - np.eye(10)) <= 1e-13

    @pytest.mark.parametrize("mode", ["arithmetic", "one_small"])
    def test_other_modes(self, mode):
        s = SpectrumSpec(n=5, kappa=10.0, mode=mode).values()
        assert s[0] == 1.0
        assert s[-1] == pytest.approx(0.1)
        assert np.all(np.diff(s) <= 0)

    def test_rejects_bad_mode(self):
        with pytest.raises(ValueError):
            SpectrumSpec(n=3, kappa=2.0, mode="bogus").values()


class TestWorstCoherenceStack:
    def test_coherence_is_one(self):
        A = worst_coherence_stack(200, 10, 1e4, seed=5)
        Q = householder_qr(A).Q
        assert coherence(Q) == pytest.approx(1.0, abs=1e-12)

    def test_condition_number(self):
        A = worst_coherence_stack(300, 15, 1e6, seed=6)
        s = singular_values(A)
        assert s[0] / s[-1] == pytest.approx(1e6, rel=1e-6)

    def test_bottom_rows_exactly_zero(self):
        A = worst_coherence_stack(50, 7, 1e3, seed=7)
        assert np.all(A[7:, :] == 0.0)


class TestHaarRotated:
    def test_condition_number(self):
        A = haar_rotated(500, 20, 1e7, seed=8)
        s = singular_values(A)
        assert s[0] / s[-1] == pytest.approx(1e7, rel=1e-5)

    def test_low_coherence(self):
        good = 0
        for seed in range(20):
            A = haar_rotated(1000, 20, 1e3, seed=seed)
            good += coherence(householder_qr(A).Q) <= 0.3
        assert good >= 18

    def test_deterministic(self):
        assert np.array_equal(haar_rotated(100, 5, 1e2, seed=9),
                              haar_rotated(100, 5, 1e2, seed=9))

    def test_shares_spectrum_with_stack(self):
        s1 = singular_values(worst_coherence_stack(200, 12, 1e5, seed=10))
        s2 = singular_values(haar_rotated(200, 12, 1e5, seed=10))
        assert np.max(np.abs(s1 - s2) / s1) <= 1e-10


class TestMatrixIO:
    def test_round_trip(self, tmp_path):
        A = np.random.default_rng(11).standard_normal((13, 4))
        path = tmp_path / "a.mat"
        save_matrix(path, A)
        assert np.array_equal(load_matrix(path), A)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "junk.mat"
        path.write_bytes(b"NOTAMATX" + b"\x00" * 16)
        with pytest.raises(ValueError):
            load_matrix(path)

    def test_truncated(self, tmp_path):
        A = np.ones((4, 4))
        path = tmp_path / "t.mat"
        save_matrix(path, A)
        data = path.read_bytes()
        path.write_bytes(data[:-8])
        with pytest.raises(ValueError):
            load_matrix(path)
