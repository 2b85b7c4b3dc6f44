"""Brute-force verifiers for the closed-form control results.

Nothing here calls the circle or coefficient formulas of ``response``; levels
and white noise gains are recomputed from inner products so that agreement
between the two routes means something.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GridSpec",
    "Locus",
    "level_locus",
    "fit_circle",
    "best_beta_on_circle",
    "best_feasible_weight",
]


@dataclass(frozen=True)
class GridSpec:
    re_range: tuple[float, float]
    im_range: tuple[float, float]
    samples_per_axis: int = 400

    def __post_init__(self):
        if self.samples_per_axis < 100:
            raise ValueError("samples_per_axis must be at least 100")
        for lo, hi in (self.re_range, self.im_range):
            if not hi > lo:
                raise ValueError("grid ranges must be increasing")

    @classmethod
    def around(cls, center: complex, radius: float, samples_per_axis: int = 400) -> "GridSpec":
        """Square grid covering a circle with a margin of twice its radius."""
        half = 3.0 * max(radius, 1e-12)
        return cls(
            (center.real - half, center.real + half),
            (center.imag - half, center.imag + half),
            samples_per_axis,
        )

    @property
    def pitch(self) -> float:
        n = self.samples_per_axis - 1
        return max((self.re_range[1] - self.re_range[0]) / n, (self.im_range[1] - self.im_range[0]) / n)

    def mesh(self) -> np.ndarray:
        re = np.linspace(*self.re_range, self.samples_per_axis)
        im = np.linspace(*self.im_range, self.samples_per_axis)
        return re[None, :] + 1j * im[:, None]


@dataclass(frozen=True)
class Locus:
    points: np.ndarray
    pitch: float

    @property
    def empty(self) -> bool:
        return self.points.size == 0


def _projector_perp(a: np.ndarray) -> np.ndarray:
    a = a.reshape(-1, 1)
    return np.eye(a.shape[0]) - (a @ a.conj().T) / (a.conj().T @ a).real


def _split(w_prev: np.ndarray, a_k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    perp = _projector_perp(a_k) @ w_prev
    return perp, w_prev - perp


def level_locus(w_prev, a_k, a0, rho: float, grid: GridSpec) -> Locus:
    """Grid points β whose weight ``perp + β par`` puts level ``rho`` at ``a_k``.

    Membership tolerance at each point is half the level change one grid
    pitch produces there, estimated from the sampled level surface. A point
    must also sit next to a sign change of ``L - rho``, which keeps the steep
    surface around a beam-axis null from flooding the locus.
    """
    w_prev, a_k, a0 = (np.asarray(v, dtype=complex) for v in (w_prev, a_k, a0))
    perp, par = _split(w_prev, a_k)
    beta = grid.mesh()
    # w^H a = perp^H a + conj(beta) par^H a
    num = np.abs(np.vdot(perp, a_k) + np.conj(beta) * np.vdot(par, a_k)) ** 2
    den = np.abs(np.vdot(perp, a0) + np.conj(beta) * np.vdot(par, a0)) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        lv = num / den
    step_re = (grid.re_range[1] - grid.re_range[0]) / (grid.samples_per_axis - 1)
    step_im = (grid.im_range[1] - grid.im_range[0]) / (grid.samples_per_axis - 1)
    d_im, d_re = np.gradient(lv, step_im, step_re)
    eps = 0.5 * grid.pitch * np.hypot(d_re, d_im)
    diff = lv - rho
    side = np.signbit(diff)
    cross = np.zeros(diff.shape, dtype=bool)
    h = side[:, 1:] != side[:, :-1]
    v = side[1:, :] != side[:-1, :]
    cross[:, 1:] |= h
    cross[:, :-1] |= h
    cross[1:, :] |= v
    cross[:-1, :] |= v
    hit = np.isfinite(lv) & (np.abs(diff) < eps) & cross
    return Locus(beta[hit], grid.pitch)


def fit_circle(points) -> tuple[complex, float]:
    """Algebraic least-squares circle through complex points: (center, radius)."""
    z = np.asarray(points, dtype=complex).ravel()
    if z.size < 3:
        raise ValueError("need at least three points to fit a circle")
    x, y = z.real, z.imag
    a = np.column_stack([2 * x, 2 * y, np.ones_like(x)])
    (cx, cy, c), *_ = np.linalg.lstsq(a, x**2 + y**2, rcond=None)
    return complex(cx, cy), math.sqrt(max(c + cx**2 + cy**2, 0.0))


def _wng_rows(w: np.ndarray, a0: np.ndarray) -> np.ndarray:
    """WNG of each row of ``w``."""
    return np.abs(w.conj() @ a0) ** 2 / np.sum(np.abs(w) ** 2, axis=1)


def best_beta_on_circle(circle, w_prev, a_k, a0, samples: int = 100_000) -> complex:
    """Sampled argmax of WNG over points of a β circle.

    ``circle`` only needs ``center`` (2-vector or complex) and ``radius``.
    """
    if samples < 10_000:
        raise ValueError("samples must be at least 10**4")
    center = circle.center
    center = complex(center) if np.isscalar(center) else complex(center[0], center[1])
    radius = float(circle.radius)
    if radius == 0.0:
        return center
    w_prev, a_k, a0 = (np.asarray(v, dtype=complex) for v in (w_prev, a_k, a0))
    perp, par = _split(w_prev, a_k)
    phi = np.arange(samples) * (2 * np.pi / samples)
    beta = center + radius * np.exp(1j * phi)
    best, best_g = center, -math.inf
    for chunk in np.array_split(beta, max(1, samples // 20_000)):
        g = _wng_rows(perp[None, :] + chunk[:, None] * par[None, :], a0)
        i = int(np.argmax(g))
        if g[i] > best_g:
            best, best_g = complex(chunk[i]), float(g[i])
    return best


def best_feasible_weight(a0, a_k, rho: float, trials: int = 100_000, seed: int = 0) -> np.ndarray:
    """Highest-WNG weight ``a0 + γ a_k`` meeting the level ``rho`` at ``a_k``, by sampling.

    Each random γ fixes a direction; its modulus is then replaced by the real
    roots of the level equation along that direction, which is a quadratic.
    """
    if trials < 100_000:
        raise ValueError("trials must be at least 10**5")
    a0, a_k = np.asarray(a0, dtype=complex), np.asarray(a_k, dtype=complex)
    p = np.vdot(a0, a_k)
    if p == 0:
        raise ValueError("a_k is orthogonal to a0")
    q = float(np.vdot(a_k, a_k).real)
    s = float(np.vdot(a0, a0).real)
    # with g = conj(γ): w^H a_k = p + g q and w^H a0 = s + g conj(p)
    quad = q * q - rho * abs(p) ** 2
    if math.isclose(quad, 0.0, abs_tol=1e-12 * q * q):
        raise ValueError("rho equals the degenerate level of a_k; the constraint is not a circle")

    rng = np.random.default_rng(seed)
    u = rng.standard_normal(trials) + 1j * rng.standard_normal(trials)
    u /= np.abs(u)
    lin = 2 * np.real(np.conj(p) * u * q) - 2 * rho * s * np.real(u * np.conj(p))
    const = abs(p) ** 2 - rho * s * s
    disc = lin * lin - 4 * quad * const
    ok = disc >= 0
    root = np.sqrt(np.where(ok, disc, 0.0))
    t = np.concatenate([(-lin + root) / (2 * quad), (-lin - root) / (2 * quad)])
    g = np.concatenate([u, u]) * t
    g = g[np.concatenate([ok, ok])]
    if g.size == 0:
        raise ValueError("no feasible direction sampled")

    best_w, best_val = None, -math.inf
    for chunk in np.array_split(g, max(1, g.size // 20_000)):
        w = a0[None, :] + np.conj(chunk)[:, None] * a_k[None, :]
        val = _wng_rows(w, a0)
        i = int(np.argmax(val))
        if val[i] > best_val:
            best_w, best_val = w[i].copy(), float(val[i])
    return best_w
