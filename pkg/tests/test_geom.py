import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ale_central import geom


def round_sphere(phi, theta):
    return np.ones_like(phi), np.sin(phi) ** 2


def sheared_sphere(alpha):
    # round metric pulled back along theta -> theta + alpha * phi
    def metric(phi, theta):
        s2 = np.sin(phi) ** 2
        return 1 + alpha**2 * s2, s2, alpha * s2
    return metric


def eguchi_hanson(z, theta):
    # A1 Gibbons-Hawking data on the segment (-1, 1): V = 1/(1 - z^2)
    V = 1.0 / (1.0 - z * z)
    return V, 1.0 / V


SPHERE = geom.MetricSampler(round_sphere, (0.0, math.pi))
EH = geom.MetricSampler(eguchi_hanson, (-1.0, 1.0))


def test_round_sphere_curvature():
    k = geom.curvature(SPHERE, math.pi / 3, 0.7)
    assert abs(k - 1) < 1e-6


def test_flat_cylinder():
    s = geom.MetricSampler(lambda p, t: (np.ones_like(p), np.ones_like(p)), (0.0, 1.0))
    assert abs(geom.curvature(s, 0.5, 1.0)) < 1e-8


def test_eguchi_hanson_curvature():
    z = np.linspace(-0.99, 0.99, 41)
    k = geom.curvature(EH, z, np.zeros_like(z))
    assert np.max(np.abs(k - 1)) < 1e-5


def test_brioschi_on_sheared_sphere():
    s = geom.MetricSampler(sheared_sphere(0.8), (0.0, math.pi))
    phi = np.linspace(0.2, 2.9, 15)
    k = geom.curvature(s, phi, 0.3 * np.ones_like(phi))
    assert np.max(np.abs(k - 1)) < 1e-5


def test_brioschi_constant_skew_metric_is_flat():
    c = 0.4
    s = geom.MetricSampler(
        lambda p, t: (np.ones_like(p), (1 + c * c) * np.ones_like(p), c * np.ones_like(p)), (0.0, 1.0))
    assert abs(geom.curvature(s, 0.5, 0.5)) < 1e-6


def test_theta_translation_invariance():
    k1 = geom.curvature(SPHERE, 1.1, 0.0)
    k2 = geom.curvature(SPHERE, 1.1, 2.3)
    assert abs(k1 - k2) < 1e-10


def test_margin_violation():
    with pytest.raises(ValueError, match="margin"):
        geom.curvature(SPHERE, 1e-5, 0.0, h=1e-4, adaptive=False)
    with pytest.raises(ValueError):
        geom.curvature(SPHERE, -0.1, 0.0)


def test_bad_sampler_shape():
    s = geom.MetricSampler(lambda p, t: (p,), (0.0, 1.0))
    with pytest.raises(ValueError):
        geom.curvature(s, 0.5, 0.0)


def test_gauss_bonnet_sphere():
    res = geom.gauss_bonnet(SPHERE, grid=(200, 200))
    err = abs(res.value - 4 * math.pi)
    assert err / (4 * math.pi) < 2e-5
    # the Richardson estimate tracks the true error
    assert 0.5 * res.error < err < 2 * res.error
    assert abs(res.extrapolated - 4 * math.pi) < 1e-6


def test_gauss_bonnet_second_order():
    errs = [abs(geom.gauss_bonnet(SPHERE, grid=(n, 4)).value - 4 * math.pi) for n in (50, 100, 200)]
    ratios = [errs[0] / errs[1], errs[1] / errs[2]]
    assert all(3 < r < 5 for r in ratios)


def test_gauss_bonnet_eguchi_hanson():
    res = geom.gauss_bonnet(EH, grid=(400, 2))
    assert abs(res.value - 4 * math.pi) / (4 * math.pi) < 1e-4


def test_gauss_bonnet_tolerance():
    with pytest.raises(ValueError, match="grid too coarse"):
        geom.gauss_bonnet(SPHERE, grid=(8, 2), tol=1e-12)


def test_gauss_bonnet_needs_range():
    with pytest.raises(ValueError):
        geom.gauss_bonnet(round_sphere)


# -- metric from (area form, conformal coordinate) ----------------------------

def test_metric_identity_coordinate():
    assert geom.metric_from_omega_w(1.0, 1.0, 1j) == (1.0, 1.0, 0.0)


def test_metric_conjugates_orientation():
    assert geom.metric_from_omega_w(2.0, 1.0, -1j) == (2.0, 2.0, 0.0)


def test_metric_degenerate_chart():
    with pytest.raises(ValueError):
        geom.metric_from_omega_w(1.0, 1.0, 2.0)
    with pytest.raises(ValueError):
        geom.metric_from_omega_w(-1.0, 1.0, 1j)


def test_metric_determinant_random():
    rng = np.random.default_rng(11)
    rho = rng.uniform(0.1, 5.0, 1000)
    wp = rng.normal(size=1000) + 1j * rng.normal(size=1000)
    wt = rng.normal(size=1000) + 1j * rng.normal(size=1000)
    gpp, gtt, gpt = geom.metric_from_omega_w(rho, wp, wt)
    det = gpp * gtt - gpt**2
    assert np.max(np.abs(det - rho**2) / rho**2) < 1e-8
    assert np.all(gpp > 0) and np.all(gtt > 0)


def test_metric_is_conformal():
    # the metric makes dw orthogonal: |w_p|^2 : |w_t|^2 matches g_pp : g_tt
    wp, wt = 1.3 + 0.2j, -0.4 + 0.9j
    gpp, gtt, gpt = geom.metric_from_omega_w(1.0, wp, wt)
    assert math.isclose(gpp / gtt, abs(wp) ** 2 / abs(wt) ** 2)


# -- round solution ----------------------------------------------------------------

def test_evolve_round_example():
    lam, res = geom.evolve_round(1, 1)
    assert lam == 3 and res == 0
    assert geom.evolve_round(1, 0) == (1, 0)


@given(st.fractions(min_value=Fraction(1, 100), max_value=100),
       st.fractions(min_value=-10, max_value=10))
def test_evolve_round_residual_zero(k0, t):
    lam, res = geom.evolve_round(k0, t)
    assert lam == 1 + 2 * k0 * t * t
    assert res == 0


def test_evolve_round_rejects_nonpositive():
    with pytest.raises(ValueError):
        geom.evolve_round(0, 1)
