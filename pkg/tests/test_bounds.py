from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powerbounds.bounds import (
    BoundError,
    BoundReport,
    bound_cvetkovic,
    bound_elphick_wocjan_classic,
    bound_haemers_extended,
    bound_hoffman,
    bound_inertial_general,
    bound_ratio_chi_k,
    bound_ratio_general,
    bounds_corollary22,
    bounds_walk_regular,
    chi_from_alpha,
    greedy_quadratic_second_inertial,
    max_g_polynomial,
    milp_inertia_per_vertex,
    milp_inertia_walk_regular,
    milp_second_inertial,
    minor_polynomial,
    repair_second_inertial,
    round_alpha,
    round_chi,
    second_inertial_value,
)
from powerbounds.generators import (
    gen_complete,
    gen_complete_bipartite,
    gen_cycle,
    gen_incidence_pg2,
    gen_path,
    gen_prism,
    gen_random_regular,
    load_fixture,
)
from powerbounds.oracle import alpha_k_exact, chi_k_exact
from powerbounds.spectral import (
    Polynomial,
    closed_form_spectrum_odd_graph,
    eigenvalues_symmetric,
    poly_eval,
)

X = Polynomial.x()
SQ2 = math.sqrt(2)


def spec(G):
    return eigenvalues_symmetric(G)


# --- rounding -------------------------------------------------------------

def test_rounding_tolerance():
    assert round_alpha(3.9999999999) == 4
    assert round_alpha(3.99) == 3
    assert round_chi(7.0000000001) == 7
    assert round_chi(7.01) == 8


def test_report_json_and_int_value():
    rep = BoundReport("x", "chi", 2, 2.5)
    assert rep.int_value == 3
    js = rep.to_json()
    assert js["int_value"] == 3 and js["raw_value"] == 2.5
    assert BoundReport("x", "alpha", 2, math.nan).to_json()["raw_value"] is None


# --- classic bounds -------------------------------------------------------

def test_cvetkovic_examples():
    assert bound_cvetkovic(spec(gen_complete(3))).int_value == 1
    assert bound_cvetkovic(spec(load_fixture("petersen"))).int_value == 4
    assert bound_cvetkovic(spec(gen_cycle(4))).int_value == 3


def test_hoffman_examples():
    assert bound_hoffman(spec(load_fixture("petersen"))).int_value == 4
    assert bound_hoffman(spec(gen_complete(7))).int_value == 1
    assert bound_hoffman(spec(load_fixture("hexahedron"))).int_value == 4
    with pytest.raises(BoundError):
        bound_hoffman(spec(gen_path(4)), gen_path(4))


def test_elphick_wocjan_examples():
    assert bound_elphick_wocjan_classic(spec(gen_complete(6))).raw_value == pytest.approx(6)
    assert bound_elphick_wocjan_classic(spec(load_fixture("petersen"))).raw_value == pytest.approx(2.5)
    assert bound_elphick_wocjan_classic(spec(gen_cycle(4))).raw_value == pytest.approx(2)


def test_chi_from_alpha_examples():
    G = gen_incidence_pg2(2)
    rep = bound_inertial_general(G, Polynomial((0, 0, 1)), 2)
    assert chi_from_alpha(rep, G.n).int_value == 7
    O4 = closed_form_spectrum_odd_graph(4)
    assert chi_from_alpha(milp_inertia_walk_regular(O4, 2), O4.n).int_value == 5
    with pytest.raises(BoundError):
        chi_from_alpha(BoundReport("x", "chi", 2, 3.0), 10)


def test_haemers_examples():
    P = load_fixture("petersen")
    assert bound_haemers_extended(spec(P), X, 1, P).int_value == 3
    K = gen_complete_bipartite(3, 3)
    assert bound_haemers_extended(spec(K), X, 1, K).status == "not-applicable"
    C = load_fixture("hexahedron")
    rep = bound_haemers_extended(spec(C), Polynomial((-3, -2, 1)), 2, C)
    assert rep.status == "not-applicable"


def test_walk_regular_cube():
    C = load_fixture("hexahedron")
    reps = {r.method: r for r in bounds_walk_regular(spec(C), Polynomial((-3, -2, 1)), 2, C)}
    assert reps["wr-hoffman"].int_value == 8
    assert reps["wr-inertial"].int_value == 5


def test_walk_regular_not_applicable():
    P = gen_path(5)
    reps = bounds_walk_regular(spec(P), X, 2, P)
    assert all(r.status == "not-applicable" for r in reps)


def test_inertial_degree_guard():
    with pytest.raises(BoundError):
        bound_inertial_general(gen_cycle(6), Polynomial((0, 0, 1)), 1)


def test_heawood_power_graph_ratio():
    H = load_fixture("heawood")
    reps = {r.method: r for r in bounds_corollary22(H, 2)}
    assert reps["cor22-ratio"].raw_value == pytest.approx(14 * (1 + SQ2) / (10 + SQ2), abs=1e-9)
    assert reps["cor22-ratio"].int_value == 2 == alpha_k_exact(H, 2).value
    assert reps["cor22-ratio"].params["q_source"] == "girth"
    # the printed orientation is kept for comparison only
    assert reps["cor22-ratio"].params["printed_value"] == pytest.approx(reps["cor22-chi-ratio"].raw_value)
    assert reps["cor22-chi-ratio"].int_value == 5


def test_power_graph_bounds_not_applicable():
    assert all(r.status == "not-applicable" for r in bounds_corollary22(gen_path(5), 2))


def test_ratio_general_heawood():
    H = load_fixture("heawood")
    assert bound_ratio_general(H, Polynomial((-3, 1, 1)), 2).raw_value == pytest.approx(2.9611317, abs=1e-6)
    assert bound_ratio_chi_k(H, Polynomial((-3, 1, 1)), 2).raw_value == pytest.approx(4.7279221, abs=1e-6)


# --- reductions and invariances -------------------------------------------

CORPUS = ["petersen", "heawood", "moebius_kantor", "frucht", "dodecahedron", "icosahedron", "pappus",
          "truncated_tetrahedron", "franklin", "durer"]


@pytest.mark.parametrize("name", CORPUS)
def test_inertial_x_is_cvetkovic(name):
    G = load_fixture(name)
    assert bound_inertial_general(G, X, 1).raw_value == bound_cvetkovic(spec(G)).raw_value


@pytest.mark.parametrize("name", CORPUS)
def test_minor_k1_is_hoffman(name):
    G = load_fixture(name)
    S = spec(G)
    _, reps = minor_polynomial(S, 1, G)
    assert reps[0].raw_value == pytest.approx(bound_hoffman(S, G).raw_value, abs=1e-6)


@pytest.mark.parametrize("name", CORPUS)
@pytest.mark.parametrize("k", [1, 2, 3])
def test_minor_equals_llp(name, k):
    G = load_fixture(name)
    S = spec(G)
    f, mreps = minor_polynomial(S, k, G)
    g, lreps = max_g_polynomial(S, k, G)
    assert mreps[0].raw_value == pytest.approx(lreps[0].raw_value, rel=1e-6)
    assert mreps[0].verified and lreps[0].verified
    assert f.degree <= min(k, S.d) and g.degree <= min(k, S.d)
    # sum m_i f(theta_i) with f(theta_0) = 1 equals n / (1 + g(theta_0))
    fv = poly_eval(f.as_float(), S.distinct)
    assert fv[0] == pytest.approx(1.0)
    assert float(np.dot(S.mult, fv)) == pytest.approx(S.n / (1 + lreps[0].params["g(theta_0)"]), rel=1e-6)


def test_minor_at_diameter_is_one():
    P = load_fixture("petersen")
    S = spec(P)
    _, reps = minor_polynomial(S, S.d, P)
    assert reps[0].raw_value == pytest.approx(1.0)
    _, reps = max_g_polynomial(S, S.d, P)
    assert reps[0].params["g(theta_0)"] == pytest.approx(S.n - 1)


def test_minor_not_walk_regular():
    G = load_fixture("frucht")
    _, reps = minor_polynomial(spec(G), 3, G)
    assert reps[0].status == "not-applicable"


@given(st.floats(0.1, 10), st.floats(-5, 5))
@settings(max_examples=25, deadline=None)
def test_inertial_scale_translate_invariance(a, b):
    G = load_fixture("moebius_kantor")
    S = spec(G)
    p = Polynomial((-3, 1, 1))
    base = bound_inertial_general(G, p, 2, S).raw_value
    q = p * Polynomial((a,)) + Polynomial((b,))
    assert bound_inertial_general(G, q, 2, S).raw_value == base


@given(st.floats(0.1, 10), st.floats(-5, 5))
@settings(max_examples=25, deadline=None)
def test_ratio_scale_translate_invariance(a, b):
    G = load_fixture("heawood")
    S = spec(G)
    p = Polynomial((-3, 1, 1))
    base = bound_ratio_general(G, p, 2, S).raw_value
    q = p * Polynomial((a,)) + Polynomial((b,))
    assert bound_ratio_general(G, q, 2, S).raw_value == pytest.approx(base, rel=1e-9)


# --- MILPs ----------------------------------------------------------------

def test_milp_wr_odd_graph_o4():
    rep = milp_inertia_walk_regular(closed_form_spectrum_odd_graph(4), 2)
    assert rep.int_value == 7 and rep.verified
    assert rep.params["formulation"] == "indicator"


def test_milp_wr_big_m_matches_indicator():
    S = closed_form_spectrum_odd_graph(4)
    a = milp_inertia_walk_regular(S, 2)
    b = milp_inertia_walk_regular(S, 2, big_m=50.0)
    assert a.int_value == b.int_value
    assert b.params["formulation"] == "big-m"


@pytest.mark.parametrize("n, expected", [(6, 4), (7, 3), (8, 4)])
def test_milp_wr_prisms(n, expected):
    G = gen_prism(n)
    assert milp_inertia_walk_regular(spec(G), 2, G).int_value == expected


def test_milp_wr_not_applicable():
    G = gen_path(6)
    assert milp_inertia_walk_regular(spec(G), 2, G).status == "not-applicable"


@pytest.mark.parametrize("name", ["heawood", "petersen", "frucht", "bidiakis_cube"])
def test_milp_vertex_certificate_closure(name):
    G = load_fixture(name)
    S = spec(G)
    rep = milp_inertia_per_vertex(G, 2, S)
    assert rep.verified
    p = rep.certificate.polynomial
    again = bound_inertial_general(G, p, 2, S)
    assert again.raw_value == pytest.approx(rep.raw_value, abs=1e-6)


def test_milp_vertex_first_optimal_never_worse_than_exact():
    G = load_fixture("frucht")
    a = milp_inertia_per_vertex(G, 2)
    b = milp_inertia_per_vertex(G, 2, first_optimal=True)
    assert b.int_value >= a.int_value >= alpha_k_exact(G, 2).value


def test_milp_second_heawood_sound():
    H = load_fixture("heawood")
    rep = milp_second_inertial(spec(H), 2, H)
    assert rep.status == "ok"
    assert 1 <= rep.int_value <= chi_k_exact(H, 2).value


def test_milp_second_cap():
    G = load_fixture("coxeter")
    assert milp_second_inertial(spec(G), 2, G, max_n=20).status == "not-applicable"


def test_second_inertial_value():
    assert second_inertial_value(0, 5) == 1.0
    assert second_inertial_value(3, 1) == 4.0
    assert second_inertial_value(2, 4) == 3.0


def test_repair_reclassifies_near_zero():
    C = load_fixture("hexahedron")
    S = spec(C)
    # roots -1 and 3 hit eigenvalues; a tiny perturbation must not change the count
    p = Polynomial((-3 + 1e-12, -2, 1))
    value, (neg, zero, pos), pattern = repair_second_inertial(p, S, 2)
    assert (neg, zero, pos) == (3, 4, 1)
    assert value == 4.0
    assert pattern == ("0", "-", "0", "+")


def test_greedy_quadratic_cube():
    C = load_fixture("hexahedron")
    rep = greedy_quadratic_second_inertial(spec(C), G=C)
    assert rep.int_value == 4
    assert sorted(rep.params["roots"]) == pytest.approx([-1.0, 3.0])
    assert rep.params["alpha_companion"] == 2


def test_greedy_quadratic_requires_regular():
    with pytest.raises(BoundError):
        greedy_quadratic_second_inertial(spec(gen_path(4)), G=gen_path(4))


# --- soundness against the exact oracle -----------------------------------

def alpha_bounds(G, k):
    S = spec(G)
    reps = [bound_inertial_general(G, X, k, S), bound_inertial_general(G, Polynomial((0,) * k + (1,)), k, S)]
    reps += bounds_corollary22(G, k, S)
    if G.is_regular():
        reps.append(bound_ratio_general(G, Polynomial((0,) * k + (1,)), k, S))
    reps += minor_polynomial(S, k, G)[1] + max_g_polynomial(S, k, G)[1]
    reps += bounds_walk_regular(S, Polynomial((0,) * k + (1,)), k, G)
    reps.append(milp_inertia_walk_regular(S, k, G))
    reps.append(milp_inertia_per_vertex(G, k, S))
    return [r for r in reps if r.usable]


@pytest.mark.parametrize("name", CORPUS + ["desargues", "coxeter", "flower_snark", "hexahedron"])
@pytest.mark.parametrize("k", [2, 3])
def test_bounds_are_sound_on_fixtures(name, k):
    G = load_fixture(name)
    a = alpha_k_exact(G, k).value
    chi = chi_k_exact(G, k).value if G.n <= 24 else None
    for r in alpha_bounds(G, k):
        if r.kind == "alpha":
            assert r.int_value >= a, r.method
        elif chi is not None:
            assert r.int_value <= chi, r.method


@given(st.integers(0, 10 ** 6), st.sampled_from([(10, 3), (12, 3), (12, 4), (14, 3)]), st.sampled_from([2, 3]))
@settings(max_examples=15, deadline=None)
def test_bounds_are_sound_on_random_regular(seed, nd, k):
    G = gen_random_regular(*nd, seed)
    a = alpha_k_exact(G, k).value
    for r in alpha_bounds(G, k):
        if r.kind == "alpha":
            assert r.int_value >= a, r.method


@pytest.mark.parametrize("name, k", [("petersen", 1), ("heawood", 2), ("dodecahedron", 2), ("desargues", 3)])
def test_degree_rows_span_divided_differences(name, k):
    from powerbounds.bounds.optimize import _dd_rows, _degree_rows

    S = spec(load_fixture(name))
    N = np.array(_degree_rows(S, k))
    D = np.array(_dd_rows(S, k))
    assert N.shape == D.shape
    # each divided-difference row lies in the span of the orthonormal rows, and vice versa
    assert np.allclose(D @ N.T @ N, D, atol=1e-8)
    assert np.linalg.matrix_rank(D, tol=1e-8) == N.shape[0]


def test_minor_llp_on_many_distinct_eigenvalues():
    G = gen_random_regular(24, 4, 1)
    S = spec(G)
    assert S.d >= 20
    for k in (2, 3):
        m = minor_polynomial(S, k)[1][0]
        g = max_g_polynomial(S, k)[1][0]
        assert m.verified and g.verified
        assert m.raw_value == pytest.approx(g.raw_value, rel=1e-6)
