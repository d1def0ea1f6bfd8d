import time

import networkx as nx
import numpy as np
from networkx.algorithms import isomorphism
import pytest
from hypothesis import given, strategies as st

from ale_central import lattice as L

ADE = ["A1", "A3", "A5", "A7", "D4", "D5", "D6", "D7", "D8", "E6", "E7", "E8"]


# -- models and pairing --------------------------------------------------------

def test_plane_gram():
    assert L.make_blown_up_plane(0).gram == ((1,),)
    m = L.make_blown_up_plane(6)
    assert np.array_equal(m.gram_array, np.diag([1] + [-1] * 6))


def test_ruled_model_and_boundary():
    for ell in (1, 2, 3):
        m = L.make_ruled_model(ell)
        b = L.boundary_classes(m)
        assert b["C"].square() == 0
        assert b["D1"].square() == -ell
        assert b["D2"].square() == -ell
        assert L.anticanonical(m) == 2 * b["C"] + b["D1"] + b["D2"]


def test_pair_values():
    m = L.model_for("E6")
    P = m["H"] - m["E1"] - m["E2"] - m["X"]
    R = m["E3"] - m["E2"]
    assert P @ P == -2
    assert L.pair(P, R) == -1
    assert P @ (m["E2"] - m["E1"]) == 0
    assert m["H"] @ m["H"] == 1


def test_pair_model_mismatch():
    with pytest.raises(L.LatticeError):
        L.pair(L.make_blown_up_plane(2)["H"], L.make_blown_up_plane(3)["H"])


@given(st.lists(st.integers(-9, 9), min_size=7, max_size=7),
       st.lists(st.integers(-9, 9), min_size=7, max_size=7),
       st.lists(st.integers(-9, 9), min_size=7, max_size=7))
def test_pairing_is_symmetric_bilinear(u, v, w):
    m = L.make_blown_up_plane(6)
    a, b, c = m.element(u), m.element(v), m.element(w)
    assert a @ b == b @ a
    assert (a + b) @ c == a @ c + b @ c
    assert (3 * a) @ b == 3 * (a @ b)


def test_anticanonical_degree():
    for n in range(9):
        K = L.anticanonical(L.make_blown_up_plane(n))
        assert K.square() == 9 - n
    m = L.make_ruled_model(2)
    assert L.anticanonical(m) == m.element({"C": 4, "D1": 2, "E1": -1, "E2": -1, "E3": -1, "E4": -1})


def test_parse_type():
    assert L.parse_type("E6") == ("E", 6)
    with pytest.raises(L.LatticeError):
        L.parse_type("E9")
    with pytest.raises(L.LatticeError):
        L.parse_type("A2")


# -- lines -------------------------------------------------------------------------

@pytest.mark.parametrize("n,count", [(0, 0), (1, 1), (2, 3), (3, 6), (4, 10), (5, 16),
                                     (6, 27), (7, 56), (8, 240)])
def test_line_counts(n, count):
    m = L.make_blown_up_plane(n)
    lines = L.enumerate_lines(m)
    assert len(lines) == count
    K = L.anticanonical(m)
    assert all(c.square() == -1 and K @ c == 1 for c in lines)
    assert len({c.coeffs for c in lines}) == count


def test_line_enumeration_fast():
    t0 = time.perf_counter()
    for n in range(1, 9):
        L.enumerate_lines(L.make_blown_up_plane(n))
    assert time.perf_counter() - t0 < 5


def test_bound_too_small_raises():
    with pytest.raises(L.LatticeError, match="bound too small"):
        L.enumerate_lines(L.make_blown_up_plane(8), bound=2, e_bound=1)


def test_ruled_model_rejected_for_lines():
    with pytest.raises(L.LatticeError):
        L.enumerate_lines(L.make_ruled_model(1))


# -- the D4 cubic ------------------------------------------------------------------

def d4_model():
    return L.make_blown_up_plane(6, L.D4_BASIS)


def test_named_lines_are_all_lines():
    m = d4_model()
    named = L.named_d4_classes(m)
    assert len(named) == 27
    assert {c.coeffs for c in named.values()} == {c.coeffs for c in L.enumerate_lines(m)}


def test_named_line_incidences():
    m = d4_model()
    c = L.named_d4_classes(m)
    for i in range(1, 5):
        assert c["X"] @ c[f"Ebar{i}"] == 1
        assert c["X"] @ c[f"E{i}"] == 0
    assert c["X"] @ c["F"] == 0  # blown up at distinct points
    assert c["X"] + c["Ebar1"] + c["C1"] == L.anticanonical(m)


def test_equivalences():
    rep = L.check_equivalences(d4_model())
    assert rep.passed
    assert rep.square == 1
    assert rep.canonical_degree + rep.square == -2
    assert rep.genus == 0
    assert rep.divisor.coeffs == (4, -1, -1, -2, -2, -2, -1)


def test_candidate_class_differs():
    rep = L.check_equivalences(d4_model())
    assert rep.candidate_divisor != rep.divisor
    assert rep.candidate_square == 7
    assert rep.to_dict()["candidate_matches"] is False


def test_wrong_basis_for_d4_names():
    with pytest.raises(L.LatticeError):
        L.named_d4_classes(L.make_blown_up_plane(6))


# -- root bases --------------------------------------------------------------------

@pytest.mark.parametrize("label", ADE)
def test_verify_dynkin(label):
    basis = L.orthogonal_root_basis(label)
    rep = L.verify_dynkin(basis, label)
    assert rep.passed
    assert rep.self_intersections == [-2] * len(basis)
    eps = np.array(rep.sign_vector)
    normalized = np.outer(eps, eps) * np.array(rep.gram_of_basis)
    # relabel the basis along a graph isomorphism onto the Dynkin diagram
    g = nx.Graph()
    g.add_nodes_from(range(len(basis)))
    g.add_edges_from(rep.adjacency)
    iso = next(isomorphism.GraphMatcher(g, L.dynkin_graph(label)).isomorphisms_iter())
    perm = [k for k, _ in sorted(iso.items(), key=lambda kv: kv[1])]
    assert np.array_equal(normalized[np.ix_(perm, perm)], -L.cartan_matrix(label))


@pytest.mark.parametrize("label,disc", [("E6", 3), ("E7", 2), ("E8", 1), ("D4", 4),
                                        ("D5", 4), ("A3", 4), ("A5", 6)])
def test_discriminants(label, disc):
    rep = L.verify_dynkin(L.orthogonal_root_basis(label), label)
    assert rep.discriminant == disc


@pytest.mark.parametrize("label", ADE)
def test_central_divisor_pairings(label):
    basis = L.orthogonal_root_basis(label)
    D = L.central_divisor(label)
    for i, c in enumerate(basis):
        if i == basis.central:
            assert abs(c @ D) == 1
        else:
            assert c @ D == 0


@pytest.mark.parametrize("label", ["E6", "E7", "E8", "D4", "D5", "D6"])
def test_roots_orthogonal_to_boundary(label):
    basis = L.orthogonal_root_basis(label)
    for name, b in L.boundary_classes(basis.model).items():
        assert all(c @ b == 0 for c in basis), name


def test_central_divisor_square():
    assert L.central_divisor("D4").square() == 1
    assert L.central_divisor("A3").square() == 0


def test_e6_generators_orthogonality_conditions():
    # a class aH + sum a_i E_i + bX + cY + dF orthogonal to E, F, G
    m = L.model_for("E6")
    for c in L.orthogonal_root_basis("E6"):
        v = c.as_dict()
        a, b, cy, d = (v.get(n, 0) for n in ("H", "X", "Y", "F"))
        assert d == 0
        assert a + b + cy == 0
        assert 2 * a + sum(v.get(f"E{i}", 0) for i in range(1, 6)) == 0
    assert m.rank == 9


def test_e8_sign_vector_all_positive():
    rep = L.verify_dynkin(L.orthogonal_root_basis("E8"), "E8")
    assert rep.sign_vector == [1] * 8


def test_trivalent_vertex_is_central():
    for label in ("E6", "E7", "E8", "D4", "D6"):
        basis = L.orthogonal_root_basis(label)
        rep = L.verify_dynkin(basis, label)
        deg = [0] * len(basis)
        for i, j in rep.adjacency:
            deg[i] += 1
            deg[j] += 1
        assert deg[basis.central] == 3


def test_wrong_type_fails():
    rep = L.verify_dynkin(L.orthogonal_root_basis("E6"), "D6")
    assert not rep.passed


def test_non_root_fails():
    basis = list(L.orthogonal_root_basis("D4"))
    basis[0] = basis[0].model["E1"]
    rep = L.verify_dynkin(basis, "D4")
    assert not rep.passed
    assert rep.self_intersections[0] == -1


def test_report_json_fields():
    d = L.verify_dynkin(L.orthogonal_root_basis("E7"), "E7").to_dict()
    for key in ("type_label", "passed", "gram", "sign_vector", "discriminant", "adjacency"):
        assert key in d


def test_int_det_matches_numpy():
    rng = np.random.default_rng(7)
    for _ in range(20):
        m = rng.integers(-4, 5, size=(5, 5))
        assert L._int_det(m.tolist()) == round(np.linalg.det(m))


# -- curves at infinity ---------------------------------------------------------

@pytest.mark.parametrize("k", [6, 7, 8])
def test_configuration_e(k):
    cfg = L.anticanonical_configuration("E", k)
    sq = cfg["squares"]
    assert sq == {"E'": 3 - k, "F'": -2, "G'": -3, "C": -1}
    assert cfg["anticanonical_ok"]
    assert set(cfg["meets_C"].values()) == {1}


@pytest.mark.parametrize("k", [4, 5, 6])
def test_configuration_d(k):
    cfg = L.anticanonical_configuration("D", k)
    assert cfg["squares"]["E'"] == 2 - k
    assert cfg["squares"]["F'"] == -2
    assert cfg["anticanonical_ok"]


def test_configuration_rejects_a():
    with pytest.raises(L.LatticeError):
        L.anticanonical_configuration("A3")
