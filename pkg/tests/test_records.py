import numpy as np
import pytest

from arraycontrol.records import (
    complex_from_json,
    complex_to_json,
    display_weight,
    read_json,
    read_pattern_csv,
    trace_to_dict,
    vector_from_json,
    vector_to_json,
    write_json,
    write_pattern_csv,
)
from arraycontrol.scenarios import ula_notch_scenario
from arraycontrol.synthesis import synthesize


def test_complex_round_trip():
    z = 1.25 - 3.5e-9j
    assert complex_from_json(complex_to_json(z)) == z
    assert complex_from_json([2, -1]) == 2 - 1j
    assert complex_from_json(4) == 4
    v = np.array([1 + 2j, -0.5j, 3])
    np.testing.assert_array_equal(vector_from_json(vector_to_json(v)), v)


def test_display_weight_has_unit_peak():
    shown = display_weight(np.array([2j, -1.0, 0.5]))
    assert [round(s["magnitude"], 12) for s in shown] == [1.0, 0.5, 0.25]
    assert shown[0]["phase_rad"] == pytest.approx(np.pi / 2)


def test_pattern_csv_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(0)
    theta = np.linspace(-90, 90, 181)
    series = {"c2word": rng.normal(-40, 10, 181), "a2rc": rng.normal(-40, 10, 181)}
    path = write_pattern_csv(tmp_path / "p.csv", theta, series)
    t2, s2 = read_pattern_csv(path)
    np.testing.assert_array_equal(t2, theta)
    assert list(s2) == ["c2word", "a2rc"]
    for k in series:
        np.testing.assert_array_equal(s2[k], series[k])


def test_pattern_csv_rejects_bad_input(tmp_path):
    with pytest.raises(ValueError):
        write_pattern_csv(tmp_path / "x.csv", [0, 1], {})
    with pytest.raises(ValueError):
        write_pattern_csv(tmp_path / "x.csv", [0, 1], {"a": [1.0]})
    (tmp_path / "bad.csv").write_text("angle,x\n0,1\n")
    with pytest.raises(ValueError, match="theta_deg"):
        read_pattern_csv(tmp_path / "bad.csv")


def test_trace_json_round_trip(tmp_path):
    sc = ula_notch_scenario(max_steps=3)
    trace = synthesize(sc.array, sc.mask, sc.config)
    doc = trace_to_dict(trace)
    assert doc["n_steps"] == 3 and not doc["converged"]
    back = read_json(write_json(tmp_path / "t.json", doc))
    assert back == doc
    np.testing.assert_array_equal(vector_from_json(back["final_weight"]), trace.final_weight)
