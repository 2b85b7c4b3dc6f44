import xml.etree.ElementTree as ET

import numpy as np
import pytest

from arraycontrol.plotting import plot_dk, plot_patterns
from arraycontrol.synthesis import MaskRegion, PatternMask


def ids(path):
    root = ET.parse(path).getroot()
    return {el.get("id") for el in root.iter() if el.get("id")}


def test_single_series_svg(tmp_path):
    theta = np.linspace(-90, 90, 50)
    out = plot_patterns(tmp_path / "one.svg", {"w": (theta, -30 + 0 * theta)})
    found = ids(out)
    assert "series-0" in found and "mask" not in found and "series-1" not in found


def test_series_with_mask(tmp_path):
    theta = np.linspace(-90, 90, 50)
    mask = PatternMask((MaskRegion(20.0, 40.0, -45.0),), -30.0)
    out = plot_patterns(tmp_path / "m.svg", {"a": (theta, -200 + 0 * theta), "b": (theta, -20 + 0 * theta)}, mask)
    assert {"series-0", "series-1", "mask"} <= ids(out)


def test_other_formats_follow_suffix(tmp_path):
    out = plot_dk(tmp_path / "dk.png", [3.0, 1.0, 0.2])
    assert out.read_bytes()[:4] == b"\x89PNG"


def test_empty_inputs_rejected(tmp_path):
    with pytest.raises(ValueError):
        plot_patterns(tmp_path / "e.svg", {})
    with pytest.raises(ValueError):
        plot_patterns(tmp_path / "e.svg", {"x": ([], [])})
    with pytest.raises(ValueError):
        plot_dk(tmp_path / "e.svg", [])
