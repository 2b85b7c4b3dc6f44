import math

import numpy as np
import pytest

from arraycontrol.array import ArrayModel, steering_vector
from arraycontrol.equivalence import is_centro_symmetric
from arraycontrol.records import trace_to_dict
from arraycontrol.response import Algorithm, db_to_lin
from arraycontrol.scenarios import flat_top_scenario, ula_notch_scenario
from arraycontrol.synthesis import (
    FLOOR_DB,
    InitialWeight,
    MaskRegion,
    Pattern,
    PatternMask,
    RegionKind,
    SelectionPolicy,
    SynthesisConfig,
    angle_grid,
    chebyshev_weights,
    compute_dk,
    evaluate_pattern,
    find_sidelobe_peaks,
    initial_weight_vector,
    mainlobe_ripple,
    max_sidelobe_violation,
    select_control_angle,
    synthesize,
)

FLAT_MASK = PatternMask(
    (MaskRegion(-25.0, 25.0, 0.0, RegionKind.MAINLOBE_TARGET), MaskRegion(60.0, 75.0, -35.0)),
    default_sidelobe_db=-25.0,
)


@pytest.fixture(scope="module")
def ula_traces():
    out = {}
    for alg in Algorithm:
        sc = ula_notch_scenario(alg, max_steps=60)
        out[alg] = synthesize(sc.array, sc.mask, sc.config)
    return out


def chebyshev_pattern(step=0.01):
    arr = ArrayModel.ula(16)
    w = chebyshev_weights(16, -30.0).astype(complex)
    return evaluate_pattern(w, arr, 0.0, angle_grid(step))


# -- masks and patterns --------------------------------------------------------


def test_mask_levels_and_validation():
    assert FLAT_MASK.level_db([0.0, 30.0, 70.0]).tolist() == [0.0, -25.0, -35.0]
    assert FLAT_MASK.is_mainlobe([-25.0, 26.0]).tolist() == [True, False]
    with pytest.raises(ValueError):
        MaskRegion(5.0, 5.0, -30.0)
    with pytest.raises(ValueError):
        PatternMask((MaskRegion(0, 10, -30), MaskRegion(5, 20, -30)), -20.0)
    assert PatternMask.from_dict(FLAT_MASK.to_dict()) == FLAT_MASK


def test_mask_outline_steps():
    x, y = FLAT_MASK.outline()
    assert x[0] == -90 and x[-1] == 90
    assert set(np.round(y, 6)) == {0.0, -25.0, -35.0}


def test_evaluate_pattern_examples():
    arr = ArrayModel.ula(8)
    p = evaluate_pattern(steering_vector(arr, 12.0), arr, 12.0, angle_grid(0.5))
    assert p.at(12.0) == 0.0
    assert len(p) == 361
    pair = ArrayModel.from_positions([0.0, 0.5])
    q = evaluate_pattern(steering_vector(pair, 0.0), pair, 0.0, [0.0, 90.0])
    assert q.level_db[0] == 0.0 and q.level_db[1] < -300
    # an exactly zero response is clamped
    r = evaluate_pattern(np.array([1.0, -1.0]) + 0j, pair, 30.0, [0.0, 30.0])
    assert r.level_db.tolist() == [FLOOR_DB, 0.0]
    with pytest.raises(ValueError):
        evaluate_pattern(np.ones(2), pair, 0.0, [])


def test_angle_grid():
    g = angle_grid(0.05)
    assert g[0] == -90 and g[-1] == 90 and g.size == 3601
    with pytest.raises(ValueError):
        angle_grid(0)


def test_chebyshev_taper_properties():
    np.testing.assert_array_equal(chebyshev_weights(2, -40.0), [1.0, 1.0])
    w = chebyshev_weights(16, -30.0)
    np.testing.assert_array_equal(w, w[::-1])
    assert w.max() == 1.0 and np.all(w > 0)
    p = chebyshev_pattern()
    side = np.abs(p.theta_deg) > 10
    assert p.level_db[side].max() == pytest.approx(-30.0, abs=0.05)
    with pytest.raises(ValueError):
        chebyshev_weights(1, -30.0)
    with pytest.raises(ValueError):
        chebyshev_weights(8, 3.0)


# -- peaks and selection -----------------------------------------------------------


def test_monotone_pattern_has_no_interior_peaks():
    theta = np.linspace(0, 40, 81)
    p = Pattern(theta, -60 + 0.5 * theta)
    mask = PatternMask((), -10.0)
    peaks = find_sidelobe_peaks(p, mask)
    # only the upper run end qualifies
    assert [pk.theta for pk in peaks] == [40.0]


def test_chebyshev_peaks_sit_on_uniform_mask():
    p = chebyshev_pattern()
    peaks = find_sidelobe_peaks(p, PatternMask((), -30.0), theta0=0.0)
    interior = [pk for pk in peaks if abs(pk.theta) < 90]
    assert len(interior) >= 12
    for pk in interior:
        assert abs(pk.violation) <= 0.05
    assert compute_dk(p, PatternMask((), -30.0), peaks) <= 0.05


def test_notch_peaks_rank_first():
    sc = ula_notch_scenario()
    w0 = initial_weight_vector(sc.config.initial_weight, sc.array, sc.config.theta0)
    p = evaluate_pattern(w0, sc.array, sc.config.theta0, angle_grid(0.05))
    peaks = find_sidelobe_peaks(p, sc.mask, theta0=sc.config.theta0)
    notch = [pk for pk in peaks if 25 <= pk.theta <= 45]
    assert notch and peaks[: len(notch)] == notch
    assert peaks[0].violation == pytest.approx(15.0, abs=0.1)


def bump_pattern():
    theta = angle_grid(0.1)
    y = -60 + 30 * np.exp(-(((theta - 30.0) / 1.5) ** 2))
    return Pattern(theta, y)


def test_select_compliant_pattern_returns_none():
    theta = angle_grid(0.1)
    p = Pattern(theta, np.full(theta.size, -50.0))
    assert select_control_angle(p, PatternMask((), -30.0)) is None


def test_select_single_violation():
    mask = PatternMask((MaskRegion(25.0, 45.0, -45.0),), -20.0)
    target = select_control_angle(bump_pattern(), mask)
    assert target.theta == pytest.approx(30.0, abs=1e-9)
    assert target.rho_db == -45.0 and target.kind is RegionKind.SIDELOBE_UPPER
    assert compute_dk(bump_pattern(), mask, find_sidelobe_peaks(bump_pattern(), mask)) == pytest.approx(15.0)


def droop_pattern(depth=0.6):
    theta = angle_grid(0.1)
    y = np.where(np.abs(theta) <= 25, -depth * np.exp(-(((theta + 20.0) / 1.0) ** 2)), -40.0)
    return Pattern(theta, y)


def test_select_mainlobe_droop():
    target = select_control_angle(droop_pattern(), FLAT_MASK, theta0=0.0)
    assert target.theta == pytest.approx(-20.0, abs=1e-6)
    assert target.rho_db == 0.0 and target.kind is RegionKind.MAINLOBE_TARGET
    assert mainlobe_ripple(droop_pattern(), FLAT_MASK) == pytest.approx(0.6, abs=1e-3)
    assert select_control_angle(droop_pattern(0.2), FLAT_MASK, theta0=0.0) is None


def test_alternate_policy_switches_kind():
    theta = angle_grid(0.1)
    y = droop_pattern().level_db.copy()
    y = np.where(np.abs(theta - 40) < 2, -20.0 + 0 * theta, y)
    y[np.argmin(np.abs(theta - 40))] = -19.0
    p = Pattern(theta, y)
    first = select_control_angle(p, FLAT_MASK, 0.0)
    assert first.kind is RegionKind.SIDELOBE_UPPER
    alt = select_control_angle(p, FLAT_MASK, 0.0, policy="alternate", last_kind=RegionKind.SIDELOBE_UPPER)
    assert alt.kind is RegionKind.MAINLOBE_TARGET
    assert select_control_angle(p, FLAT_MASK, 0.0, policy=SelectionPolicy.ALTERNATE).kind is RegionKind.SIDELOBE_UPPER
    with pytest.raises(ValueError, match="sidelobe_first, alternate"):
        SelectionPolicy.parse("greedy")


def test_dk_empty_peak_set():
    assert compute_dk(bump_pattern(), PatternMask((), -20.0), []) == -math.inf


def test_max_violation_scores_every_sample():
    mask = PatternMask((MaskRegion(25.0, 45.0, -45.0),), -20.0)
    assert max_sidelobe_violation(bump_pattern(), mask) == pytest.approx(15.0)


# -- configs -----------------------------------------------------------------------


def test_config_round_trip_and_validation():
    cfg = SynthesisConfig(theta0=-30.0, algorithm="a2rc", initial_weight=InitialWeight.chebyshev(-30.0))
    assert SynthesisConfig.from_dict(cfg.to_dict()) == cfg
    with pytest.raises(ValueError):
        SynthesisConfig(theta0=0.0, max_steps=0)
    with pytest.raises(ValueError):
        SynthesisConfig.from_dict({"algorithm": "c2word"})
    with pytest.raises(ValueError, match="allowed"):
        InitialWeight.from_dict({"kind": "taylor"})


# -- synthesis runs ----------------------------------------------------------------


def test_already_compliant_mask_takes_no_steps():
    sc = ula_notch_scenario()
    mask = PatternMask((), -10.0)
    trace = synthesize(sc.array, mask, sc.config)
    assert trace.converged and trace.steps == []
    np.testing.assert_array_equal(trace.final_weight, trace.initial_weight)


def test_ula_scenario_converges(ula_traces):
    trace = ula_traces[Algorithm.C2WORD]
    assert trace.converged
    assert len(trace.steps) <= 60
    assert trace.dk_sequence[-1] <= 0.1
    sc = ula_notch_scenario()
    p = evaluate_pattern(trace.final_weight, sc.array, sc.config.theta0, angle_grid(0.05))
    assert max_sidelobe_violation(p, sc.mask, sc.config.theta0) <= 0.5


def test_ula_per_step_constraint_and_symmetry(ula_traces):
    for trace in ula_traces.values():
        for s in trace.steps:
            assert s.achieved_db == pytest.approx(s.rho_db, abs=1e-6)
        assert all(is_centro_symmetric(w) for w in trace.weights)


def test_ula_algorithms_give_identical_weights(ula_traces):
    ref = ula_traces[Algorithm.C2WORD]
    for alg in (Algorithm.A2RC, Algorithm.WORD):
        other = ula_traces[alg]
        assert len(other.steps) == len(ref.steps)
        for a, b in zip(ref.steps, other.steps):
            assert np.max(np.abs(a.weight - b.weight)) <= 1e-9 * np.max(np.abs(a.weight))


@pytest.mark.xfail(strict=True, reason="D_k rises between some 5-step blocks on the ULA run; see notes")
def test_ula_dk_non_increasing_over_5_step_windows(ula_traces):
    dk = ula_traces[Algorithm.C2WORD].dk_sequence
    blocks = [dk[i : i + 5].max() for i in range(0, dk.size, 5)]
    assert all(b <= a for a, b in zip(blocks, blocks[1:]))


def test_c2word_wng_dominates_along_trace():
    sc = ula_notch_scenario()
    flat = flat_top_scenario(max_steps=60)
    for s in (sc, flat):
        cfg = SynthesisConfig(**{**vars(s.config), "compare_algorithms": True})
        trace = synthesize(s.array, s.mask, cfg)
        assert trace.steps
        for step in trace.steps:
            g = db_to_lin(step.wng_db)
            for alg in ("word", "a2rc"):
                assert g >= db_to_lin(step.comparison[alg]["wng_db"]) - 1e-9


def test_trace_is_deterministic():
    sc = ula_notch_scenario(max_steps=15)
    a = trace_to_dict(synthesize(sc.array, sc.mask, sc.config))
    b = trace_to_dict(synthesize(sc.array, sc.mask, sc.config))
    assert a == b


@pytest.mark.parametrize("alg", [Algorithm.WORD, Algorithm.A2RC])
def test_flat_top_reference_engines_meet_ripple(alg):
    sc = flat_top_scenario(alg, max_steps=300)
    trace = synthesize(sc.array, sc.mask, sc.config)
    assert trace.converged
    p = evaluate_pattern(trace.final_weight, sc.array, 0.0, angle_grid(sc.config.grid_step_deg))
    assert mainlobe_ripple(p, sc.mask) <= 0.5
    assert max_sidelobe_violation(p, sc.mask, 0.0, sc.config.transition_deg) <= 0.5
