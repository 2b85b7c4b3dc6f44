"""When do the complex-coefficient and additive updates coincide?

The functions here are diagnostics: they evaluate threshold levels and the
conditions under which the C2-WORD step reproduces the A2RC (or WORD) step,
and never change what the step functions compute.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .response import (
    Circle,
    Decomposition,
    b_matrix,
    beta_circle,
    decompose,
    mu_circle,
    mu_extremes,
    optimal_beta,
    q_matrix,
)

__all__ = [
    "EquivalenceReport",
    "t_map",
    "t_map_inverse",
    "rho_tilde",
    "rho_bar",
    "rho_breve",
    "is_centro_symmetric",
    "check_prop4",
    "check_corollary1",
    "check_corollary2",
    "equivalence_report",
]

CENTRO_TOL = 1e-9
CENTER_TOL = 1e-9
COLLINEAR_TOL = 1e-10


def t_map(beta: complex, w_prev: np.ndarray, a_k: np.ndarray) -> complex:
    """Additive coefficient mu with ``perp + beta par == w_prev + mu a_k``."""
    aa = float(np.vdot(a_k, a_k).real)
    if aa == 0.0:
        raise ValueError("zero steering vector")
    return complex((beta - 1.0) * np.vdot(a_k, w_prev) / aa)


def t_map_inverse(mu: complex, w_prev: np.ndarray, a_k: np.ndarray) -> complex:
    proj = complex(np.vdot(a_k, w_prev))
    if proj == 0:
        raise ValueError("w_prev is orthogonal to a_k; the map is not invertible")
    return 1.0 + mu * float(np.vdot(a_k, a_k).real) / proj


def rho_tilde(a_k: np.ndarray, a0: np.ndarray) -> float:
    """Level at theta_k of the weight ``a_k`` itself; the circle degenerates there.

    Returns ``inf`` for orthogonal steering vectors. Warns when the value is
    not above 1, since levels in [0, 1] are then no longer guaranteed safe.
    """
    cross = abs(complex(np.vdot(a_k, a0))) ** 2
    if cross == 0.0:
        warnings.warn("orthogonal steering vectors: rho_tilde is infinite", RuntimeWarning, stacklevel=2)
        return math.inf
    value = float(np.vdot(a_k, a_k).real) ** 2 / cross
    if value <= 1.0 and not np.allclose(a_k, a0):
        warnings.warn(f"rho_tilde = {value:.6g} <= 1", RuntimeWarning, stacklevel=2)
    return value


def rho_bar(a_k: np.ndarray, a0: np.ndarray) -> float:
    n0 = float(np.linalg.norm(a0))
    if n0 == 0.0:
        raise ValueError("zero steering vector")
    return (float(np.linalg.norm(a_k)) / n0) ** 4


def rho_breve(w_prev: np.ndarray, a_k: np.ndarray, a0: np.ndarray) -> float:
    wk = complex(np.vdot(w_prev, a_k))
    num = abs(wk * complex(np.vdot(a_k, a_k)))
    den = abs(complex(np.vdot(w_prev, a0)) * complex(np.vdot(a0, a_k)))
    if den == 0.0:
        warnings.warn("rho_breve denominator vanishes", RuntimeWarning, stacklevel=2)
        return math.inf if num > 0 else math.nan
    return num / den


def is_centro_symmetric(v: np.ndarray, tol: float = CENTRO_TOL) -> bool:
    """``v(i) == conj(v(N - i + 1))`` for all i, relative to ``max |v|``."""
    v = np.asarray(v, dtype=complex)
    scale = float(np.max(np.abs(v))) if v.size else 0.0
    if scale == 0.0:
        return True
    return float(np.max(np.abs(v - np.conj(v[::-1])))) <= tol * scale


def check_prop4(circle: Circle, tol: float = CENTER_TOL) -> tuple[bool, bool]:
    """(optimal beta maps to mu_s, optimal beta maps to mu_l) from the center alone."""
    c1, c2 = float(circle.center[0]), float(circle.center[1])
    on_axis = abs(c2) <= tol
    inside = 0.0 <= c1 <= 1.0
    return on_axis and inside, on_axis and not inside


def _in_window(rho: float, upper_a: float, upper_b: float, excluded: float) -> bool:
    if not 0.0 <= rho <= min(upper_a, upper_b):
        return False
    return not math.isclose(rho, excluded, rel_tol=1e-12, abs_tol=0.0)


def check_corollary1(w_prev: np.ndarray, a0: np.ndarray, rho: float, rho_t: float, rho_b: float) -> bool:
    """``w_prev`` parallel to ``a0`` and ``0 <= rho <= min(rho_t, rho_b)``, ``rho != rho_t``."""
    w_prev = np.asarray(w_prev, dtype=complex)
    aa = float(np.vdot(a0, a0).real)
    nw = float(np.linalg.norm(w_prev))
    if aa == 0.0 or nw == 0.0:
        return False
    resid = w_prev - a0 * (complex(np.vdot(a0, w_prev)) / aa)
    if float(np.linalg.norm(resid)) > COLLINEAR_TOL * nw:
        return False
    return _in_window(rho, rho_t, rho_b, rho_t)


def check_corollary2(
    w_prev: np.ndarray,
    dec: Decomposition,
    a0: np.ndarray,
    rho: float,
    rho_t: float,
    rho_v: float,
    tol: float = CENTRO_TOL,
) -> bool:
    """Centro-symmetric state, ``rho`` window and nonnegative cross term.

    The cross term ``perp^H a0 a0^H par`` is real for exactly centro-symmetric
    vectors; a warning is issued when its imaginary part exceeds rounding.
    Symmetry of the array itself is the caller's responsibility.
    """
    if not is_centro_symmetric(w_prev, tol):
        return False
    if not _in_window(rho, rho_t, rho_v, rho_t):
        return False
    cross = complex(np.vdot(dec.perp, a0)) * complex(np.vdot(a0, dec.par))
    scale = float(np.linalg.norm(dec.perp) * np.linalg.norm(dec.par) * np.vdot(a0, a0).real)
    if abs(cross.imag) > 1e-8 * max(scale, 1e-300):
        warnings.warn(f"cross term has imaginary part {cross.imag:.3e}", RuntimeWarning, stacklevel=2)
    return cross.real >= -1e-12 * max(scale, 1e-300)


@dataclass(frozen=True)
class EquivalenceReport:
    t_of_beta_star: complex
    mu_s: complex
    mu_l: complex
    cond_prop4_s: bool
    cond_prop4_l: bool
    rho_tilde: float
    rho_bar: float
    rho_breve: float
    centro_symmetric_state: bool
    corollary1: bool = False
    corollary2: bool = False

    def to_dict(self) -> dict:
        out = {}
        for key, value in asdict(self).items():
            if isinstance(value, complex):
                out[key] = {"re": value.real, "im": value.imag}
            elif isinstance(value, float) and not math.isfinite(value):
                out[key] = str(value)
            else:
                out[key] = value
        return out


def equivalence_report(w_prev: np.ndarray, a_k: np.ndarray, a0: np.ndarray, rho: float) -> EquivalenceReport:
    """Evaluate every equivalence quantity for one control demand."""
    w_prev = np.asarray(w_prev, dtype=complex)
    dec = decompose(w_prev, a_k)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        rt = rho_tilde(a_k, a0)
        rv = rho_breve(w_prev, a_k, a0)
    rb = rho_bar(a_k, a0)
    bc = beta_circle(b_matrix(dec, a_k, a0, rho), rho, rt)
    mu_s, mu_l = mu_extremes(mu_circle(q_matrix(w_prev, a_k, a0, rho), rho, rt))
    case_s, case_l = check_prop4(bc)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        cor2 = check_corollary2(w_prev, dec, a0, rho, rt, rv)
    return EquivalenceReport(
        t_of_beta_star=t_map(optimal_beta(bc), w_prev, a_k),
        mu_s=mu_s,
        mu_l=mu_l,
        cond_prop4_s=case_s,
        cond_prop4_l=case_l,
        rho_tilde=rt,
        rho_bar=rb,
        rho_breve=rv,
        centro_symmetric_state=is_centro_symmetric(w_prev),
        corollary1=check_corollary1(w_prev, a0, rho, rt, rb),
        corollary2=cor2,
    )
