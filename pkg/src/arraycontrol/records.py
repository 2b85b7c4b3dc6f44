"""CSV pattern files and JSON documents for weights, traces and reports."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Mapping

import numpy as np

__all__ = [
    "complex_to_json",
    "complex_from_json",
    "vector_to_json",
    "vector_from_json",
    "display_weight",
    "write_pattern_csv",
    "read_pattern_csv",
    "trace_to_dict",
    "write_json",
    "read_json",
]


def complex_to_json(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def complex_from_json(doc) -> complex:
    if isinstance(doc, Mapping):
        return complex(float(doc.get("re", 0.0)), float(doc.get("im", 0.0)))
    if isinstance(doc, (list, tuple)) and len(doc) == 2:
        return complex(float(doc[0]), float(doc[1]))
    return complex(doc)


def vector_to_json(v) -> list[dict]:
    return [complex_to_json(z) for z in np.asarray(v, dtype=complex)]


def vector_from_json(doc) -> np.ndarray:
    return np.array([complex_from_json(z) for z in doc], dtype=complex)


def display_weight(w) -> list[dict]:
    """Weight scaled to unit peak magnitude, as magnitude and phase (radians)."""
    w = np.asarray(w, dtype=complex)
    peak = float(np.max(np.abs(w)))
    if peak > 0:
        w = w / peak
    return [{"magnitude": float(abs(z)), "phase_rad": float(np.angle(z))} for z in w]


def write_pattern_csv(path, theta_deg, series: Mapping[str, np.ndarray]) -> Path:
    """One row per angle: ``theta_deg`` then one level column (dB) per series.

    Values are written with ``repr`` so that reading the file back gives the
    identical floats.
    """
    path = Path(path)
    theta = np.asarray(theta_deg, dtype=float)
    if not series:
        raise ValueError("no series to write")
    cols = {name: np.asarray(v, dtype=float) for name, v in series.items()}
    for name, v in cols.items():
        if v.shape != theta.shape:
            raise ValueError(f"series {name!r} has {v.size} samples, expected {theta.size}")
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["theta_deg", *cols])
        for i, t in enumerate(theta):
            out.writerow([repr(float(t)), *(repr(float(v[i])) for v in cols.values())])
    return path


def read_pattern_csv(path) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][0] != "theta_deg":
        raise ValueError(f"{path}: missing 'theta_deg' header")
    names = rows[0][1:]
    data = np.array([[float(x) for x in r] for r in rows[1:] if r], dtype=float).reshape(-1, len(rows[0]))
    return data[:, 0], {name: data[:, i + 1] for i, name in enumerate(names)}


def _finite(x: float):
    return x if math.isfinite(x) else str(x)


def trace_to_dict(trace) -> dict:
    """JSON-ready form of a synthesis trace."""
    steps = []
    for s in trace.steps:
        item = {
            "k": s.k,
            "theta_deg": s.theta,
            "rho_db": s.rho_db,
            "kind": s.kind.value,
            "coefficient": complex_to_json(s.coefficient),
            "mu": complex_to_json(s.mu),
            "wng_db": s.wng_db,
            "achieved_db": _finite(s.achieved_db),
            "dk_db": _finite(s.dk_db),
        }
        if s.comparison:
            item["comparison"] = s.comparison
        steps.append(item)
    return {
        "converged": trace.converged,
        "message": trace.message,
        "n_steps": len(trace.steps),
        "dk0_db": _finite(trace.dk0_db),
        "steps": steps,
        "initial_weight": vector_to_json(trace.initial_weight),
        "final_weight": vector_to_json(trace.final_weight),
        "final_weight_display": display_weight(trace.final_weight),
    }


def write_json(path, doc) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2) + "\n")
    return path


def read_json(path):
    return json.loads(Path(path).read_text())
