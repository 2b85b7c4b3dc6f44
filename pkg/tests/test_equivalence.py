import warnings

import numpy as np
import pytest

from arraycontrol.array import ArrayModel, steering_vector
from arraycontrol.equivalence import (
    check_corollary1,
    check_corollary2,
    check_prop4,
    equivalence_report,
    is_centro_symmetric,
    rho_bar,
    rho_breve,
    rho_tilde,
    t_map,
    t_map_inverse,
)
from arraycontrol.response import Circle, a2rc_update, c2word_update, decompose, level, mu_circle, q_matrix
from arraycontrol.synthesis import chebyshev_weights

from conftest import random_state, rel_err


def _c(pair):
    return complex(pair[0], pair[1])


def test_t_map_special_points():
    rng = np.random.default_rng(1)
    w, a, _ = random_state(rng, 6)
    assert t_map(1.0, w, a) == 0
    assert t_map(0.0, w, a) == pytest.approx(-np.vdot(a, w) / np.vdot(a, a).real)
    beta = 0.3 - 1.2j
    assert t_map_inverse(t_map(beta, w, a), w, a) == pytest.approx(beta)


def test_t_map_zero_steering():
    with pytest.raises(ValueError):
        t_map(2.0, np.ones(3), np.zeros(3))


def test_t_map_image_fills_mu_circle():
    rng = np.random.default_rng(2)
    w, a, a0 = random_state(rng, 8)
    rho = 0.3 * level(w, a, a0)
    bc = c2word_update(w, a, a0, rho).circle
    mc = mu_circle(q_matrix(w, a, a0, rho))
    mu = np.array([t_map(b, w, a) for b in bc.points(np.linspace(0, 2 * np.pi, 1000, endpoint=False))])
    assert np.max(mc.distance(mu)) <= 1e-9 * mc.radius
    # the image covers the full circle, not an arc
    ang = np.sort(np.angle(mu - mc.center_complex))
    assert np.max(np.diff(ang)) < 0.05


def test_rho_tilde_examples(dipole_array, derived):
    a0 = steering_vector(dipole_array, 20.0)
    assert rho_tilde(a0, a0) == pytest.approx(1.0, rel=1e-14)
    a5 = steering_vector(dipole_array, 5.0)
    assert rho_tilde(a5, a0) == pytest.approx(derived["dipole_rho_tilde_5_20"], rel=1e-10)
    ula = ArrayModel.ula(16)
    val = rho_tilde(steering_vector(ula, 10.0), steering_vector(ula, -30.0))
    assert val > 1
    assert val == pytest.approx(derived["ula16_rho_tilde_10_m30"], rel=1e-9)


def test_rho_tilde_warnings():
    with pytest.warns(RuntimeWarning, match="infinite"):
        assert rho_tilde(np.array([1, 0]), np.array([0, 1])) == np.inf
    with pytest.warns(RuntimeWarning, match="<= 1"):
        rho_tilde(np.array([1.0, 0.0]), np.array([2.0, 0.0]))


def test_rho_bar_examples(dipole_array, derived):
    ula = ArrayModel.ula(9)
    assert rho_bar(steering_vector(ula, 40.0), steering_vector(ula, -12.0)) == pytest.approx(1.0)
    a0 = steering_vector(dipole_array, 20.0)
    assert rho_bar(2 * a0, a0) == pytest.approx(16.0)
    assert rho_bar(steering_vector(dipole_array, 5.0), a0) == pytest.approx(derived["dipole_rho_bar_5_20"], rel=1e-10)


def test_rho_breve_examples(derived):
    ula = ArrayModel.ula(16)
    a0, ak = steering_vector(ula, -30.0), steering_vector(ula, 10.0)
    assert rho_breve(a0, ak, a0) == pytest.approx(derived["ula16_rho_breve_w_a0_10_m30"], rel=1e-12)
    w = np.array([1.0, 1.0, 0.0]) + 0j
    assert rho_breve(w, np.array([1.0, -1.0, 0.0]), np.array([1.0, 0.0, 1.0])) == 0.0
    ref = derived["random_rho_breve"]
    w, ak, a0 = (np.array([_c(p) for p in ref[key]]) for key in ("w_prev", "a_k", "a0"))
    assert rho_breve(w, ak, a0) == pytest.approx(ref["value"], rel=1e-12)


def test_rho_breve_zero_denominator():
    with pytest.warns(RuntimeWarning):
        assert rho_breve(np.array([1.0, 0]), np.array([1.0, 0]), np.array([0.0, 1.0])) == np.inf


def test_centro_symmetry_examples():
    assert is_centro_symmetric(chebyshev_weights(12, -30.0))
    assert not is_centro_symmetric(np.array([1, 1j]))
    ula = ArrayModel.ula(11)
    rng = np.random.default_rng(3)
    for theta in rng.uniform(-90, 90, 100):
        assert is_centro_symmetric(steering_vector(ula, theta))
    assert is_centro_symmetric(np.zeros(4))


def test_prop4_examples():
    assert check_prop4(Circle(np.array([0.5, 0.0]), 0.2)) == (True, False)
    assert check_prop4(Circle(np.array([-0.2, 0.0]), 0.2)) == (False, True)
    assert check_prop4(Circle(np.array([0.5, 0.3]), 0.2)) == (False, False)
    assert check_prop4(Circle(np.array([1.0, 0.0]), 0.0)) == (True, False)


def test_corollary1_examples():
    a0 = np.array([1.0, 0.5j, -0.3])
    assert check_corollary1(a0, a0, 0.01, 1.8, 1.0)
    assert check_corollary1((2 - 1j) * a0, a0, 0.01, 1.8, 1.0)
    assert not check_corollary1(a0 + 1e-3 * np.array([0, 1, 0]), a0, 0.01, 1.8, 1.0)
    assert not check_corollary1(a0, a0, 1.8, 1.8, 2.0)
    assert not check_corollary1(a0, a0, 1.2, 1.8, 1.0)


def test_corollary2_examples():
    ula = ArrayModel.ula(16)
    a0 = steering_vector(ula, -30.0)
    w = chebyshev_weights(16, -30.0) * a0
    ak = steering_vector(ula, 40.0)
    dec = decompose(w, ak)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        rt, rv = rho_tilde(ak, a0), rho_breve(w, ak, a0)
    rho = 0.5 * level(w, ak, a0)
    assert check_corollary2(w, dec, a0, rho, rt, rv)
    assert not check_corollary2(w, dec, a0, min(rt, 1.01 * rv), np.inf, rv)

    rng = np.random.default_rng(4)
    wr, akr, a0r = random_state(rng, 16)
    assert not check_corollary2(wr, decompose(wr, akr), a0r, 0.01, 10.0, 10.0)


def test_report_fields_are_consistent(dipole_array):
    a0 = steering_vector(dipole_array, 20.0)
    rep = equivalence_report(a0, steering_vector(dipole_array, 5.0), a0, 0.1)
    assert not (rep.cond_prop4_s and rep.cond_prop4_l)
    assert rep.corollary1
    d = rep.to_dict()
    assert set(d["mu_s"]) == {"re", "im"}
    assert d["centro_symmetric_state"] is False


def test_equivalence_conditions_over_random_instances():
    """Zero counterexamples: case_s implies real beta mapped onto mu_s, and
    a parallel start state inside the level window implies C2-WORD and A2RC
    give the same weight."""
    rng = np.random.default_rng(5)
    seen_prop4 = seen_cor1 = 0
    for i in range(1000):
        n = (4, 8, 16, 21)[i % 4]
        _, ak, a0 = random_state(rng, n)
        w = a0.copy() if i % 2 else rng.standard_normal(n) + 1j * rng.standard_normal(n)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            rt = rho_tilde(ak, a0)
        rho = float(rng.uniform(0, 1)) * min(1.0, 0.98 * rt)
        rep = equivalence_report(w, ak, a0, rho)
        best = c2word_update(w, ak, a0, rho)
        if rep.cond_prop4_s:
            seen_prop4 += 1
            assert abs(best.coefficient.imag) <= 1e-10 * max(1.0, abs(best.coefficient))
            assert abs(rep.t_of_beta_star - rep.mu_s) <= 1e-9 * max(1.0, abs(rep.mu_s))
        if rep.cond_prop4_l:
            assert abs(rep.t_of_beta_star - rep.mu_l) <= 1e-9 * max(1.0, abs(rep.mu_l))
        if rep.corollary1:
            seen_cor1 += 1
            assert rel_err(a2rc_update(w, ak, a0, rho).weight, best.weight) <= 1e-9
    assert seen_prop4 > 100 and seen_cor1 > 100
