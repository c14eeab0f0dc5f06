import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from discordlab.exceptions import InvalidParameterError, UnphysicalCovarianceError
from discordlab.factories import thermal_state
from discordlab.gaussian import (
    GaussianPOVMParams,
    TwoModeCovariance,
    covariances_from_csv,
    covariances_to_csv,
    gaussian_overlap,
    gaussian_purity,
    gaussian_rescaled_discord,
    is_physical,
    post_measurement_covariance,
    random_covariance,
    seed_covariance,
    squeezed_thermal_rescaled_discord,
    symplectic_eigenvalues,
)


def tmsv(cosh2r):
    s = np.sqrt(cosh2r**2 - 1)
    return TwoModeCovariance(cosh2r, cosh2r, s, -s)


class TestCovariance:
    def test_vacuum(self):
        vac = TwoModeCovariance(1, 1, 0, 0)
        assert np.array_equal(vac.matrix, np.eye(4))
        assert np.allclose(symplectic_eigenvalues(vac.matrix), [1, 1])
        assert vac.purity == pytest.approx(1)

    def test_rejects_unphysical(self):
        with pytest.raises(UnphysicalCovarianceError):
            TwoModeCovariance(1, 1, 0.5, 0.5)
        with pytest.raises(UnphysicalCovarianceError):
            TwoModeCovariance(0.5, 1, 0, 0)

    def test_tmsv_is_pure(self):
        s = tmsv(3.0)
        assert np.allclose(symplectic_eigenvalues(s.matrix), [1, 1])
        assert s.purity == pytest.approx(1)

    def test_product_accepted(self):
        assert is_physical(TwoModeCovariance(1.3, 4.2, 0, 0).matrix)

    def test_csv_roundtrip(self):
        covs = [random_covariance(seed=k) for k in range(5)]
        back = covariances_from_csv(covariances_to_csv(covs))
        assert covariances_to_csv(covs).splitlines()[0] == "a,b,c,d"
        for x, y in zip(covs, back):
            assert np.allclose(x.as_row(), y.as_row(), rtol=1e-11)


class TestOverlap:
    def test_vacuum(self):
        assert gaussian_overlap(np.eye(4), np.eye(4)) == pytest.approx(1)
        assert gaussian_overlap(np.eye(2), np.eye(2)) == pytest.approx(1)

    @pytest.mark.parametrize("nbar", [0.5, 1.0, 3.0])
    def test_thermal_against_fock(self, nbar):
        sig = (2 * nbar + 1) * np.eye(2)
        th = thermal_state(nbar, 400)
        fock = np.trace(th @ th).real
        assert gaussian_purity(sig) == pytest.approx(1 / (2 * nbar + 1), abs=1e-12)
        assert gaussian_purity(sig) == pytest.approx(fock, abs=1e-10)

    def test_purity_via_determinant(self):
        for k in range(20):
            s = random_covariance(seed=k)
            assert gaussian_purity(s) == pytest.approx(1 / np.sqrt(np.linalg.det(s.matrix)), rel=1e-12)

    def test_mode_mismatch(self):
        with pytest.raises(InvalidParameterError):
            gaussian_overlap(np.eye(2), np.eye(4))


class TestMeasurement:
    def test_seed_parameters(self):
        assert np.allclose(seed_covariance(1.0, 1.0, 0.0), np.eye(2))
        assert np.allclose(seed_covariance(2.0, 3.0, 0.0), np.diag([6.0, 1.5]))
        with pytest.raises(InvalidParameterError):
            GaussianPOVMParams(0.0, 1.0, 0.0)
        with pytest.raises(InvalidParameterError):
            GaussianPOVMParams(1.0, 0.5, 0.0)

    @given(lam=st.floats(1e-2, 1e2), m=st.floats(1, 50), theta=st.floats(0, 2 * np.pi - 1e-9))
    @settings(max_examples=50, deadline=None)
    def test_seed_is_physical(self, lam, m, theta):
        s = seed_covariance(lam, m, theta)
        assert np.linalg.det(s) == pytest.approx(m * m, rel=1e-9)
        assert is_physical(s, tol=1e-8)

    def test_product_unchanged(self):
        sig = TwoModeCovariance(2.0, 3.0, 0, 0)
        post = post_measurement_covariance(sig, GaussianPOVMParams(0.4, 2.0, 1.0))
        assert np.allclose(post.sigma_a, 2 * np.eye(2))

    def test_heterodyne_seed(self):
        s = tmsv(3.0)
        post = post_measurement_covariance(s, GaussianPOVMParams(1.0, 1.0, 0.0))
        assert np.allclose(post.sigma_b, np.eye(2))
        expected = 3.0 - 8.0 / 4.0
        assert np.allclose(post.sigma_a, expected * np.eye(2))


class TestDiscord:
    def test_product(self):
        assert gaussian_rescaled_discord(TwoModeCovariance(2, 3, 0, 0)).value <= 1e-6

    def test_squeezed_vacuum(self):
        assert gaussian_rescaled_discord(tmsv(3.0)).value == pytest.approx(0.5, abs=1e-6)
        assert squeezed_thermal_rescaled_discord(3.0, 3.0, np.sqrt(8)) == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize("cosh2r", [1.0, 1.5, 2.0, 5.0])
    def test_squeezed_vacuum_closed_form(self, cosh2r):
        s = np.sqrt(cosh2r**2 - 1)
        got = squeezed_thermal_rescaled_discord(cosh2r, cosh2r, s)
        assert got == pytest.approx(1 - 2 / (1 + cosh2r), abs=1e-12)

    def test_closed_form_zero_correlation(self):
        assert squeezed_thermal_rescaled_discord(2.5, 1.7, 0.0) == pytest.approx(0, abs=1e-15)

    def test_closed_form_scalar(self):
        expected = 1 - 2 * np.sqrt(3 / (7 + 4 * np.sqrt(3)))
        assert squeezed_thermal_rescaled_discord(2, 2, 1) == pytest.approx(expected, abs=1e-14)
        num = gaussian_rescaled_discord(TwoModeCovariance(2, 2, 1, -1)).value
        assert num == pytest.approx(expected, abs=1e-4)

    def test_closed_form_rejects_unphysical(self):
        with pytest.raises(UnphysicalCovarianceError):
            squeezed_thermal_rescaled_discord(1, 1, 1)

    @pytest.mark.parametrize("seed", range(8))
    def test_closed_form_matches_numeric(self, seed):
        s = random_covariance(seed=seed, squeezed_thermal=True)
        cf = squeezed_thermal_rescaled_discord(s.a, s.b, s.c)
        assert gaussian_rescaled_discord(s).value == pytest.approx(cf, abs=1e-4)

    def test_random_values_in_range(self):
        for k in range(20):
            v = gaussian_rescaled_discord(random_covariance(seed=100 + k)).value
            assert 0 <= v <= 1

    def test_best_povm_reproduces_value(self):
        s = random_covariance(seed=4)
        res = gaussian_rescaled_discord(s)
        post = post_measurement_covariance(s, res.best_povm)
        pi = np.zeros((4, 4))
        pi[:2, :2], pi[2:, 2:] = post.sigma_a, post.sigma_b
        # overlap ratio from the generic formula; beta is fixed to 1/2
        ratio = gaussian_overlap(s, pi) / np.sqrt(gaussian_purity(s) * gaussian_purity(pi))
        assert res.value == pytest.approx(1 - ratio, abs=1e-8)

    def test_monotone_in_correlation(self):
        # sanity only; not a claimed property
        vals = [gaussian_rescaled_discord(TwoModeCovariance(3, 3, c, -c)).value for c in np.linspace(0, 2.8, 6)]
        assert np.all(np.diff(vals) >= -1e-6)


def test_random_covariance_physical():
    for k in range(1000):
        s = random_covariance(seed=k)
        assert is_physical(s.matrix)
        assert 1 <= s.a <= 5 and 1 <= s.b <= 5


def test_random_covariance_deterministic():
    assert random_covariance(seed=3) == random_covariance(seed=3)
