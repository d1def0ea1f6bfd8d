import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ale_central import ak_sphere as ak
from ale_central import geom

EH = ak.ModuliA.from_roots([-1, 1])
A3 = ak.ModuliA.from_roots([-3, -1, 1, 3])


def random_moduli(rng, ell):
    while True:
        r = np.sort(rng.uniform(-5, 5, 2 * ell))
        if np.min(np.diff(r)) > 0.2:
            return ak.ModuliA.from_roots(r)


def kappa_closed_form(m, z):
    """-(1/2) (1/V)'' on the axis, from V' and V'' in closed form."""
    V = sum(0.5 / abs(z - a) for a in m.roots)
    V1 = sum(-0.5 * np.sign(z - a) / (z - a) ** 2 for a in m.roots)
    V2 = sum(1.0 / abs(z - a) ** 3 for a in m.roots)
    U2 = 2 * V1**2 / V**3 - V2 / V**2
    return -0.5 * U2


# -- moduli -------------------------------------------------------------------------

def test_normalization_keeps_original():
    m = ak.ModuliA.from_roots([0, 2])
    assert m.roots == (-1.0, 1.0)
    assert m.original == (0.0, 2.0)
    assert m.shift == 1.0
    assert m.ell == 1


def test_moduli_validation():
    with pytest.raises(ValueError):
        ak.ModuliA.from_roots([1, 2, 3])
    with pytest.raises(ValueError, match="increase"):
        ak.ModuliA.from_roots([1, 1])


# -- potential -------------------------------------------------------------------------

def test_potential_values():
    assert ak.potential(EH, 0.0) == 1.0
    assert math.isclose(ak.potential(EH, np.array([0.0, 1.0, 0.0])), 1 / math.sqrt(2))
    with pytest.raises(ValueError):
        ak.potential(EH, 1.0)


def test_potential_is_harmonic():
    rng = np.random.default_rng(3)
    pts = rng.uniform(-3, 3, (100, 3))
    pts[:, 1] += np.sign(pts[:, 1]) * 0.5  # keep off the axis
    h = 1e-3
    lap = -6 * ak.potential(A3, pts)
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        lap = lap + ak.potential(A3, pts + e) + ak.potential(A3, pts - e)
    lap /= h * h
    assert np.max(np.abs(lap) / ak.potential(A3, pts)) < 1e-4


def test_potential_gradient_matches_differences():
    rng = np.random.default_rng(4)
    pts = rng.uniform(-2, 2, (20, 3)) + np.array([0, 0.3, 0])
    g = ak.potential_gradient(A3, pts)
    h = 1e-6
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        fd = (ak.potential(A3, pts + e) - ak.potential(A3, pts - e)) / (2 * h)
        assert np.allclose(g[:, k], fd, rtol=1e-6, atol=1e-8)


# -- lifted circle action --------------------------------------------------------------

def test_lift_function_values():
    assert ak.lift_function(EH, 0.0) == 0.0
    assert ak.lift_function(A3, 5.0) == 4.0
    assert ak.lift_function(EH, np.array([0.0, 0.5, 0.0])) == 0.0


def test_lift_gradient_matches_differences():
    rng = np.random.default_rng(5)
    pts = rng.uniform(-2, 2, (30, 3)) + np.array([0, 0.4, 0.2])
    grad = ak.lift_gradient(A3, pts)
    h = 1e-6
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        fd = (ak.lift_function(A3, pts + e) - ak.lift_function(A3, pts - e)) / (2 * h)
        assert np.allclose(grad[:, k], fd, rtol=1e-5, atol=1e-7)


def test_morse_function_constant_on_central_segment():
    z = np.linspace(-0.9, 0.9, 7)
    assert np.allclose(ak.morse_function(EH, z), 2.0)
    assert np.allclose(ak.morse_function(A3, z), 8.0)


@pytest.mark.parametrize("j", [1, 2, 3])
def test_morse_area_relation(j):
    rep = ak.morse_area_check(A3, j)
    assert abs(rep["residual"]) < 1e-12
    assert rep["weight"] == 2 * (j - A3.ell)


def test_adjacent_sphere_area_from_morse_jump():
    rep = ak.morse_area_check(A3, 1)
    assert math.isclose(rep["area"], math.pi * abs(rep["f_q"] - rep["f_p"]))


# -- conformal chart and metric ----------------------------------------------------------

def test_eguchi_hanson_coordinate():
    z = np.linspace(-0.9, 0.9, 9)
    w = ak.conformal_coordinate(EH, z, 0.4)
    assert np.allclose(np.abs(w), np.sqrt((1 - z) / (1 + z)), rtol=1e-13)
    assert np.allclose(np.angle(w), 0.4)


def test_log_derivative_of_coordinate():
    m = A3
    z, th, h = 0.3, 1.0, 1e-6
    dz = (np.log(ak.conformal_coordinate(m, z + h, th)) - np.log(ak.conformal_coordinate(m, z - h, th))) / (2 * h)
    assert abs(dz + ak.potential(m, z)) < 1e-7


def test_eguchi_hanson_round():
    z = ak.grid_nodes(-1, 1, 60)
    s = ak.sphere_metric(EH, z, 0.0)
    assert np.max(np.abs(s.kappa - 1)) < 1e-5
    area = ak.symplectic_area(EH)
    assert abs(area["area"] - 4 * math.pi) < 1e-12
    assert area["residual"] < 1e-9


@given(st.integers(1, 4), st.integers(0, 10**6))
def test_reconstruction_matches_closed_form(ell, seed):
    m = random_moduli(np.random.default_rng(seed), ell)
    lo, hi = ak.sphere_interval(m)
    Z, T = np.meshgrid(ak.grid_nodes(lo, hi, 10), ak.grid_nodes(0, 2 * math.pi, 5))
    w, wz, wt, V = ak._chart(m, m.ell, Z.ravel(), T.ravel())
    g_zz, g_tt, g_zt = geom.metric_from_omega_w(np.ones(Z.size), wz, wt)
    assert np.max(np.abs(g_zz - V) / V) < 1e-9
    assert np.max(np.abs(g_tt * V - 1)) < 1e-9
    assert np.max(np.abs(g_zt) / np.sqrt(g_zz * g_tt)) < 1e-9


@pytest.mark.parametrize("seed", range(5))
def test_curvature_matches_closed_form(seed):
    m = random_moduli(np.random.default_rng(100 + seed), 1 + seed % 3)
    lo, hi = ak.sphere_interval(m)
    z = ak.grid_nodes(lo, hi, 25)
    s = ak.sphere_metric(m, z, 0.0)
    ref = kappa_closed_form(m, z)
    assert np.max(np.abs(s.kappa - ref) / np.maximum(1, np.abs(ref))) < 1e-5


@pytest.mark.parametrize("seed", range(3))
def test_total_curvature(seed):
    m = random_moduli(np.random.default_rng(200 + seed), 2)
    res = geom.gauss_bonnet(ak.metric_sampler(m), grid=(400, 2))
    assert abs(res.value - 4 * math.pi) < 1e-3 * 4 * math.pi


@pytest.mark.parametrize("j", [1, 2, 3])
def test_areas(j):
    rep = ak.symplectic_area(A3, j)
    assert math.isclose(rep["area"], 4 * math.pi)
    assert rep["residual"] < 1e-6 * rep["area"]


def test_margin_enforced():
    with pytest.raises(ValueError, match="margin"):
        ak.sphere_metric(EH, 1.0 - 1e-9, 0.0)
    with pytest.raises(ValueError):
        ak.sphere_interval(EH, 2)


def test_sample_rows_columns():
    s = ak.sample_grid(EH, 4, 3)
    rows = s.rows()
    assert len(rows) == 12
    assert len(rows[0]) == len(ak.CSV_COLUMNS)


# -- twistor lines --------------------------------------------------------------------

def test_twistor_line_example():
    rep = ak.twistor_line_check(EH, 1.0, 0.0, [0, 1, 2j, -3 + 1j])
    assert rep["max_residual"] == 0.0


@given(st.integers(1, 3), st.integers(0, 10**6))
def test_twistor_lines_random(ell, seed):
    rng = np.random.default_rng(seed)
    m = random_moduli(rng, ell)
    lo, hi = ak.sphere_interval(m)
    z = rng.uniform(lo, hi)
    r = math.sqrt((-1) ** ell * math.prod(z - a for a in m.roots))
    x = r * np.exp(1j * rng.uniform(0, 2 * math.pi))
    u = rng.normal(size=8) + 1j * rng.normal(size=8)
    rep = ak.twistor_line_check(m, x, z, u)
    assert rep["max_residual"] <= 1e-10 * m.scale ** (2 * ell)


def test_untwisted_structure_fails():
    rep = ak.twistor_line_check(EH, 1.0, 0.0, [1.0, 2.0])
    assert rep["untwisted_max_residual"] > 0.5


def test_twistor_precondition():
    with pytest.raises(ValueError):
        ak.twistor_line_check(EH, 2.0, 0.0, [1.0])


# -- ALF deformation ---------------------------------------------------------------------

def test_alf_transform_preserves_surface_and_density():
    rng = np.random.default_rng(8)
    x = rng.normal(size=50) + 1j * rng.normal(size=50)
    z = rng.normal(size=50) + 1j * rng.normal(size=50)
    rep = ak.alf_transform_check(A3, x, z)
    assert rep["surface_residual"] < 1e-12
    assert rep["density_residual"] < 1e-12
    assert rep["exponent_balance"] == {"xy": 0, "density": 0}


def test_alf_metric_example():
    s = ak.alf_chart(EH, 0.0, 0.0)
    assert math.isclose(float(s.g_zz), 2.0, rel_tol=1e-12)
    assert math.isclose(float(s.g_tt), 0.5, rel_tol=1e-12)


def test_alf_metric_closed_form():
    lo, hi = ak.sphere_interval(A3)
    z = ak.grid_nodes(lo, hi, 50)
    s = ak.alf_chart(A3, z, 0.2)
    V = ak.potential(A3, z)
    assert np.max(np.abs(s.g_zz / (1 + V) - 1)) < 1e-10
    assert np.max(np.abs(s.g_tt * (1 + V) - 1)) < 1e-10
    assert np.max(np.abs(s.kappa - kappa_closed_form_alf(A3, z))) < 1e-4


def kappa_closed_form_alf(m, z):
    V = 1 + sum(0.5 / abs(z - a) for a in m.roots)
    V1 = sum(-0.5 * np.sign(z - a) / (z - a) ** 2 for a in m.roots)
    V2 = sum(1.0 / abs(z - a) ** 3 for a in m.roots)
    return -0.5 * (2 * V1**2 / V**3 - V2 / V**2)


def test_alf_log_derivative():
    z, th, h = 0.2, 0.5, 1e-6
    w = lambda zz: ak.alf_chart(EH, zz, th).w  # noqa: E731
    dz = (np.log(w(z + h)) - np.log(w(z - h))) / (2 * h)
    assert abs(dz + 1 + ak.potential(EH, z)) < 1e-7
