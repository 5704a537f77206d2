import math

import numpy as np
import pytest
import scipy.linalg

from chmass.profile import integrate_profile
from chmass.sphere import ScalarField, build_grid, coeff_index, random_c2_field
from chmass.spectrum import (
    _rayleigh_pencil,
    lambda1_analytic,
    lambda1_discrete,
    laplace_spectrum,
    laplace_spectrum_discrete,
    eigenvalue_area_charge_residual,
    stability_window,
)
from chmass.surfaces import GraphSurface, induced_geometry


@pytest.fixture(scope="module")
def prof():
    return integrate_profile(0.5, 0.3, 1.0, s_max=1.5, tol=1e-10)


@pytest.fixture(scope="module")
def grid():
    return build_grid(32, 64)


def neck_surface(prof, grid):
    return GraphSurface(prof, 0.0, ScalarField(grid, np.zeros((32, 64))))


class TestAnalytic:
    def test_values(self):
        assert lambda1_analytic(0.5, 0.3) == pytest.approx(1.56, abs=1e-14)
        assert lambda1_analytic(1.0, 0.0) == pytest.approx(0.0, abs=1e-14)
        assert lambda1_analytic(math.sqrt(0.9), 0.3) == pytest.approx(0.0, abs=1e-14)

    def test_equals_twice_neck_acceleration_over_radius(self, prof):
        # independent route: lambda1 = 2 u''(0) / a
        assert lambda1_analytic(0.5, 0.3) == pytest.approx(2 * prof.ddu(0.0) / 0.5, abs=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            lambda1_analytic(0.0, 0.3)


class TestWindow:
    def test_frozen(self):
        lo, hi = stability_window(0.3)
        assert abs(lo - 0.1) <= 1e-15
        assert abs(hi - 0.9) <= 1e-15

    def test_uncharged(self):
        assert stability_window(0.0) == (0.0, 1.0)

    def test_degenerate_point(self):
        lo, hi = stability_window(0.5)
        assert lo == hi == pytest.approx(0.5, abs=1e-15)

    def test_empty(self):
        assert stability_window(0.6) is None

    def test_equivalence_with_lambda1_sign(self):
        # lambda1 > 0 iff a^2 strictly inside the window, on a dense grid
        a2 = np.linspace(0.01, 1.2, 100)
        for q in np.sqrt(np.linspace(0.0, 0.25, 100)):
            w = stability_window(q)
            lam1 = -1.0 + 1.0 / a2 - q**2 / a2**2
            inside = (a2 > w[0] + 1e-12) & (a2 < w[1] - 1e-12)
            assert np.all((lam1 > 0) == inside)

    def test_neck_area_below_eight_pi(self):
        for q in np.sqrt(np.linspace(0.0, 0.24, 20)):
            lo, hi = stability_window(q)
            for a2 in np.linspace(lo + 1e-6, hi - 1e-6, 20):
                assert 4 * math.pi * a2 < 8 * math.pi


class TestDiscrete:
    def test_neck_slice(self, prof, grid):
        val = lambda1_discrete(neck_surface(prof, grid))
        assert val == pytest.approx(1.56, abs=2e-3)

    def test_marginal_cylinder(self, grid):
        prof1 = integrate_profile(1.0, 0.0, 1.0, s_max=1.0)
        val = lambda1_discrete(neck_surface(prof1, grid))
        assert val == pytest.approx(0.0, abs=2e-3)

    def test_minimizer_is_constant_on_slices(self, prof, grid):
        geom = induced_geometry(neck_surface(prof, grid))
        K, M = _rayleigh_pencil(geom, 6, geom.ric_nn + geom.a_norm2)
        vals, vecs = scipy.linalg.eigh(K, M)
        v = vecs[:, 0] / np.linalg.norm(vecs[:, 0])
        nonconst = np.linalg.norm(np.delete(v, coeff_index(0, 0)))
        assert nonconst <= 1e-6

    def test_rayleigh_monotonicity(self, prof, grid):
        fld = random_c2_field(grid, 4, 4, 0.05)
        surf = GraphSurface(prof, 0.1, fld)
        vals = [lambda1_discrete(surf, lmax=l) for l in (2, 4, 6)]
        assert vals[0] >= vals[1] - 1e-12
        assert vals[1] >= vals[2] - 1e-12

    def test_stability_inequality_random_fields(self, prof, grid):
        # J(phi) >= lambda1 int phi^2 for trial fields in the basis span
        surf = neck_surface(prof, grid)
        geom = induced_geometry(surf)
        lam1 = lambda1_discrete(surf, lmax=6)
        pot = geom.ric_nn + geom.a_norm2
        for seed in range(50):
            fld = random_c2_field(grid, 1000 + seed, 4, 1.0)
            d = grid.synth_derivs(grid.analyze(fld.values))
            j = geom.integral(geom.grad_inner(d, d)) - geom.integral(pot * d["f"] ** 2)
            residual = j - lam1 * geom.integral(d["f"] ** 2)
            assert residual >= -1e-9


class TestLaplaceSpectrum:
    def test_unit_sphere_multiplicities(self):
        assert laplace_spectrum(1.0, 5) == [0.0, 2.0, 2.0, 2.0, 6.0]

    def test_gap_identity(self):
        # spectral gap 2/a^2 equals 8 pi / |Sigma|
        for a in (0.5, 0.8, 1.3):
            gap = laplace_spectrum(a, 2)[1]
            assert gap == pytest.approx(8 * math.pi / (4 * math.pi * a**2), abs=1e-13)

    def test_discrete_oracle(self, grid):
        vals = laplace_spectrum_discrete(grid, 0.5, 9)
        assert abs(vals[0]) <= 1e-10
        assert vals[1] == pytest.approx(8.0, rel=1e-3)
        np.testing.assert_allclose(vals[1:4], 8.0, rtol=1e-8)
        np.testing.assert_allclose(vals[4:9], 24.0, rtol=1e-8)


class TestProp41:
    def test_example_values(self):
        assert abs(eigenvalue_area_charge_residual(0.5, 0.3)) <= 1e-13
        assert abs(eigenvalue_area_charge_residual(0.7, 0.0)) <= 1e-13

    def test_grid_sweep(self):
        worst = 0.0
        for a2 in np.linspace(0.05, 0.95, 100):
            for q2 in np.linspace(0.0, 0.25, 100):
                worst = max(worst, abs(eigenvalue_area_charge_residual(math.sqrt(a2), math.sqrt(q2))))
        assert worst <= 1e-12


def test_laplace_spectrum_discrete_basis_guard(grid):
    with pytest.raises(ValueError):
        laplace_spectrum_discrete(grid, 0.5, 200, lmax=4)
