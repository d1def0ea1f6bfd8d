import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ale_central import ak_sphere as ak
from ale_central import dk_sphere as dk
from ale_central import lattice
from ale_central import periods as per
from ale_central.dk_sphere import ChamberError

F = Fraction
E8 = per.ModuliE(8, tuple(range(1, 8)), F(1, 2))


def distinct_params(n):
    return st.lists(st.fractions(min_value=-10, max_value=10, max_denominator=6),
                    min_size=n, max_size=n, unique=True)


@pytest.mark.parametrize("k", [6, 7, 8])
def test_generator_values(k):
    m = per.ModuliE(k, tuple(F(i * i, 3) for i in range(1, k)), F(2, 7))
    model = lattice.model_for("E", k)
    assert per.period(m, model["E2"] - model["E1"]) == m.ai(2) - m.ai(1)
    assert per.period(m, model["H"] - model["E1"] - model["E2"] - model["X"]) == m.ai(1) + m.ai(2)


def test_generator_formulas():
    a = tuple(F(v) for v in (1, 2, 3, 4, 5, 6, 7))
    model = lattice.model_for("E8")
    gens = per.generator_classes(8, model)
    assert per.period(E8, gens["S"]) == sum(a[1:7]) - F(1, 2) == F(53, 2)
    m6 = per.ModuliE(6, a[:5], 3)
    g6 = per.generator_classes(6)
    assert per.period(m6, g6["Q"]) == 2 + 3 + 4 + 5 - 3
    m7 = per.ModuliE(7, a[:6], 3)
    g7 = per.generator_classes(7)
    assert per.period(m7, g7["R"]) == 3 + 4 + 5 + 6 - 3


@pytest.mark.parametrize("k", [6, 7, 8])
def test_decomposition_identities(k):
    rep = per.decomposition_identities(k)
    assert rep["passed"]
    assert len(rep["checks"]) == 2


def test_class_outside_span():
    with pytest.raises(ValueError, match="span"):
        per.period(E8, lattice.model_for("E8")["H"])


@given(distinct_params(7), st.fractions(min_value=-5, max_value=5),
       st.lists(st.integers(-4, 4), min_size=8, max_size=8))
def test_linearity(a, a0, coeffs):
    m = per.ModuliE(8, tuple(a), a0)
    _, classes = per.normalized_root_basis(8)
    combo = classes[0] * 0
    for c, cls in zip(coeffs, classes):
        combo = combo + c * cls
    assert per.period(m, combo) == sum(c * per.period(m, cls) for c, cls in zip(coeffs, classes))


@given(distinct_params(5), st.fractions(min_value=-5, max_value=5),
       st.fractions(min_value=F(1, 10), max_value=10))
def test_homogeneity(a, a0, lam):
    m = per.ModuliE(6, tuple(a), a0)
    _, v1 = per.period_vector(m)
    _, v2 = per.period_vector(m.scaled(lam))
    assert v2 == [lam * v for v in v1]


def test_moduli_validation():
    with pytest.raises(ValueError):
        per.ModuliE(5, (1, 2, 3, 4), 0)
    with pytest.raises(ValueError):
        per.ModuliE(6, (1, 2, 3, 4), 0)
    with pytest.raises(ValueError):
        per.ModuliE(6, (1, 1, 3, 4, 5), 0)


@pytest.mark.parametrize("k", [6, 7, 8])
def test_normalized_basis_is_sign_coherent(k):
    labels, classes = per.normalized_root_basis(k)
    rep = lattice.verify_dynkin(classes, f"E{k}")
    assert rep.passed
    assert all(rep.gram_of_basis[i][j] == 1 for i, j in rep.adjacency)
    assert len(labels) == k


# -- chambers ------------------------------------------------------------------------

def test_d_chamber_examples():
    assert per.chamber_check("D4", [1.1, 2, 3, 4]).ok
    rep = per.chamber_check("D4", [-3, 2, 3, 4])
    assert not rep.ok and rep.violated == ["a1 + a2 > 0"]


def test_a_chamber():
    assert per.chamber_check("A3", [-3, -1, 1, 3]).ok
    rep = per.chamber_check("A3", [-3, 1, -1, 3])
    assert rep.violated == ["a3 > a2"]


def test_e6_generator_positivity():
    # increasing a, a0 below a2 + ... + a5 and a1 + a2 > 0: the
    # generators P, Q and the chain E_{i+1} - E_i all have positive period
    m = per.ModuliE(6, (1, 2, 3, 4, 5), 3)
    vals = per.generator_periods(m)
    assert all(v > 0 for v in vals.values())


def test_e6_normalized_chamber_reports_walls():
    rep = per.chamber_check("E6", per.ModuliE(6, (1, 2, 3, 4, 5), 3))
    assert not rep.ok
    assert rep.violated == ["period(-P) > 0"]
    d = rep.to_dict()
    assert d["k"] == 6 and d["chamber"] is False


def test_e_chamber_point():
    m = per.ModuliE(6, (-5, 1, 2, 3, 4), 0)
    rep = per.chamber_check("E6", m)
    assert rep.ok, rep.violated


@given(st.integers(6, 8), st.integers(0, 10**6))
def test_chamber_round_trip(k, seed):
    rng = np.random.default_rng(seed)
    a = tuple(F(int(v)) for v in rng.choice(np.arange(-20, 20), k - 1, replace=False))
    m = per.ModuliE(k, a, F(int(rng.integers(-20, 20))))
    rep = per.chamber_check(f"E{k}", m)
    if rep.ok:
        _, areas = per.simple_root_areas(f"E{k}", m)
        assert all(v > 0 for v in areas)
    else:
        with pytest.raises(ChamberError):
            per.simple_root_areas(f"E{k}", m)
        assert any(not v > 0 for v in rep.periods)


# -- areas ---------------------------------------------------------------------------

def test_a3_areas():
    _, areas = per.simple_root_areas("A3", [-3, -1, 1, 3])
    assert np.allclose(areas, [4 * math.pi] * 3)
    m = ak.ModuliA.from_roots([-3, -1, 1, 3])
    for j, area in enumerate(areas, start=1):
        assert abs(ak.symplectic_area(m, j)["quadrature"] - area) < 1e-6 * area


def test_d_central_area_matches_quadrature():
    a = (0.5, 1.3, 2.1, 3.4)
    labels, areas = per.simple_root_areas("D4", a)
    assert labels[2] == "x3-x2"
    quad = dk.symplectic_area(dk.ModuliD(a))["quadrature"]
    assert abs(quad - areas[2]) < 1e-6 * areas[2]


def test_areas_require_chamber():
    with pytest.raises(ChamberError):
        per.simple_root_areas("D4", [-3, 2, 3, 4])


@pytest.mark.parametrize("label,params", [("A5", [-5, -3, -1, 1, 3, 5]), ("D5", [0.3, 1, 2, 3, 4])])
def test_positive_areas(label, params):
    _, areas = per.simple_root_areas(label, params)
    assert all(v > 0 for v in areas)
