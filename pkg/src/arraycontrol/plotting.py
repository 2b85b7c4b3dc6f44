"""Static figures of beampatterns and convergence curves."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["FLOOR_DB", "plot_patterns", "plot_dk"]

FLOOR_DB = -80.0


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        fig.savefig(path, format=path.suffix.lstrip(".").lower() or "svg")
    finally:
        plt.close(fig)
    return path


def plot_patterns(
    path,
    series: Mapping[str, tuple[Sequence[float], Sequence[float]]],
    mask=None,
    title: str | None = None,
    floor_db: float = FLOOR_DB,
) -> Path:
    """Level (dB) against angle for each named series, with the mask as a dashed step outline.

    Levels are clamped at ``floor_db``. Lines carry the ids ``series-<i>`` and
    ``mask`` in vector outputs. The file format follows the suffix of ``path``.
    """
    if not series:
        raise ValueError("at least one series is required")
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for i, (name, (theta, level)) in enumerate(series.items()):
        theta = np.asarray(theta, dtype=float)
        level = np.asarray(level, dtype=float)
        if theta.size == 0 or theta.shape != level.shape:
            plt.close(fig)
            raise ValueError(f"series {name!r} is empty or mismatched")
        ax.plot(theta, np.maximum(level, floor_db), lw=1.2, label=name, gid=f"series-{i}")
    if mask is not None:
        mt, ml = mask.outline()
        ax.plot(mt, np.maximum(ml, floor_db), "k--", lw=1.0, label="mask", gid="mask")
    ax.set_xlim(-90, 90)
    ax.set_ylim(floor_db, 5)
    ax.set_xlabel("angle (deg)")
    ax.set_ylabel("level (dB)")
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend(loc="lower center", fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def plot_dk(path, dk_db: Sequence[float], title: str | None = None) -> Path:
    """Maximum sidelobe excess per step."""
    dk = np.asarray(dk_db, dtype=float)
    if dk.size == 0:
        raise ValueError("empty D_k sequence")
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.plot(np.arange(dk.size), dk, marker=".", lw=1.0, gid="dk")
    ax.axhline(0.0, color="k", lw=0.6)
    ax.set_xlabel("step k")
    ax.set_ylabel("D_k (dB)")
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    return _save(fig, path)
