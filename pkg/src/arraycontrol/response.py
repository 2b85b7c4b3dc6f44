"""Single-point array response control.

Three weight updates are provided, each adjusting the normalized power
response at one angle to a commanded level while leaving the rest of the
pattern to follow:

* :func:`c2word_step` splits the previous weight into components orthogonal
  and parallel to ``a(theta_k)`` and rescales the parallel part by the complex
  coefficient of largest modulus on the feasible circle (maximum WNG).
* :func:`word_step` restricts the coefficient to the two real points of that
  circle.
* :func:`a2rc_step` adds ``mu * a(theta_k)`` with the minimum-modulus ``mu``.

Levels are linear power ratios everywhere in this module; dB conversion is
left to callers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .array import ArrayModel, steering_vector

__all__ = [
    "Algorithm",
    "ResponseControlError",
    "BeamAxisNullError",
    "DegenerateLevelError",
    "NoRealCoefficientError",
    "ConstructionUndefinedError",
    "Decomposition",
    "BMatrix",
    "Circle",
    "BetaCircle",
    "MuCircle",
    "StepResult",
    "db_to_lin",
    "lin_to_db",
    "level",
    "power_response",
    "wng",
    "wng_of",
    "decompose",
    "b_matrix",
    "q_matrix",
    "beta_circle",
    "mu_circle",
    "optimal_beta",
    "mu_extremes",
    "word_candidates",
    "select_word_beta",
    "word_objective",
    "lemma1_construct",
    "c2word_update",
    "word_update",
    "a2rc_update",
    "control_update",
    "c2word_step",
    "word_step",
    "a2rc_step",
    "control_step",
]


class Algorithm(str, Enum):
    C2WORD = "c2word"
    WORD = "word"
    A2RC = "a2rc"

    @classmethod
    def parse(cls, name: "str | Algorithm") -> "Algorithm":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("-", "").replace("²", "2").replace("_", "")
        for alg in cls:
            if key == alg.value:
                return alg
        raise ValueError(f"unknown algorithm {name!r}; allowed: {', '.join(a.value for a in cls)}")


class ResponseControlError(ArithmeticError):
    """Base class for failures of a response-control step."""


class BeamAxisNullError(ResponseControlError):
    """The weight vector has zero response toward the beam axis."""


class DegenerateLevelError(ResponseControlError):
    """The circle degenerates (``B(2,2) = 0``): the commanded level equals rho_tilde."""

    def __init__(self, rho: float, rho_tilde: float):
        self.rho = rho
        self.rho_tilde = rho_tilde
        super().__init__(
            f"commanded level {rho:.6g} equals the degenerate level rho_tilde = {rho_tilde:.6g}"
        )


class NoRealCoefficientError(ResponseControlError):
    """WORD found no real coefficient on the feasible circle."""


class ConstructionUndefinedError(ResponseControlError):
    """The complex-coefficient construction hit a zero denominator."""


def db_to_lin(level_db: float) -> float:
    return 10.0 ** (level_db / 10.0)


def lin_to_db(value: float) -> float:
    with np.errstate(divide="ignore"):
        return float(10.0 * np.log10(value))


def _inner(u: np.ndarray, v: np.ndarray) -> complex:
    """``u^H v``."""
    return complex(np.vdot(u, v))


def _is_axis_null(w: np.ndarray, a0: np.ndarray) -> bool:
    # round-off level of w^H a0 relative to the vector norms
    return abs(_inner(w, a0)) <= 1e-13 * float(np.linalg.norm(w) * np.linalg.norm(a0))


def level(w: np.ndarray, a: np.ndarray, a0: np.ndarray) -> float:
    """``|w^H a|^2 / |w^H a0|^2`` on explicit steering vectors."""
    den = abs(_inner(w, a0)) ** 2
    if _is_axis_null(w, a0):
        raise BeamAxisNullError("weight vector has a null on the beam axis")
    return abs(_inner(w, a)) ** 2 / den


def power_response(w: np.ndarray, array: ArrayModel, theta_deg: float, theta0_deg: float) -> float:
    """Normalized power response L(theta, theta0) as a linear ratio."""
    if theta_deg == theta0_deg:
        level(w, steering_vector(array, theta0_deg), steering_vector(array, theta0_deg))
        return 1.0
    return level(w, steering_vector(array, theta_deg), steering_vector(array, theta0_deg))


def wng_of(w: np.ndarray, a0: np.ndarray) -> float:
    """White noise gain ``|w^H a0|^2 / ||w||^2`` (linear)."""
    norm2 = float(np.vdot(w, w).real)
    if norm2 == 0.0:
        raise ValueError("zero weight vector")
    return abs(_inner(w, a0)) ** 2 / norm2


def wng(w: np.ndarray, array: ArrayModel, theta0_deg: float) -> float:
    return wng_of(w, steering_vector(array, theta0_deg))


@dataclass(frozen=True)
class Decomposition:
    perp: np.ndarray
    par: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.perp + self.par


def decompose(w_prev: np.ndarray, a_k: np.ndarray) -> Decomposition:
    """Split ``w_prev`` into parts orthogonal and parallel to ``a_k``."""
    aa = float(np.vdot(a_k, a_k).real)
    if aa == 0.0:
        raise ValueError("zero steering vector")
    par = a_k * (_inner(a_k, w_prev) / aa)
    perp = w_prev - par
    # one re-orthogonalization pass keeps |perp^H a_k| at rounding level
    perp = perp - a_k * (_inner(a_k, perp) / aa)
    return Decomposition(perp=perp, par=w_prev - perp)


@dataclass(frozen=True)
class BMatrix:
    """Hermitian 2x2 matrix ``[[b11, b12], [conj(b12), b22]]``.

    ``factored_det`` holds the determinant when it is known in product form;
    the entrywise expression cancels badly when the matrix is nearly rank one.
    """

    b11: float
    b12: complex
    b22: float
    factored_det: float | None = None

    @property
    def det(self) -> float:
        if self.factored_det is not None:
            return self.factored_det
        return self.b11 * self.b22 - abs(self.b12) ** 2

    @property
    def d(self) -> float:
        """Discriminant root of the real-coefficient (WORD) solutions; rounding clamped."""
        return math.sqrt(max(self.b12.real ** 2 - self.b11 * self.b22, 0.0))

    def as_array(self) -> np.ndarray:
        return np.array([[self.b11, self.b12], [self.b12.conjugate(), self.b22]], dtype=complex)


def b_matrix(dec: Decomposition, a_k: np.ndarray, a0: np.ndarray, rho: float) -> BMatrix:
    """Quadratic form whose null set ``[1, beta] B [1, beta]^H = 0`` is the feasible set.

    ``perp^H a_k`` vanishes by construction and is taken as exactly zero.
    """
    if rho < 0:
        raise ValueError("commanded level must be nonnegative")
    xi_par_k = _inner(dec.par, a_k)
    xi_perp_0 = _inner(dec.perp, a0)
    xi_par_0 = _inner(dec.par, a0)
    b11 = -rho * abs(xi_perp_0) ** 2
    b12 = -rho * xi_perp_0 * xi_par_0.conjugate()
    b22 = abs(xi_par_k) ** 2 - rho * abs(xi_par_0) ** 2
    det = -rho * abs(xi_par_k) ** 2 * abs(xi_perp_0) ** 2
    return BMatrix(float(b11), complex(b12), float(b22), float(det))


def q_matrix(w_prev: np.ndarray, a_k: np.ndarray, a0: np.ndarray, rho: float) -> BMatrix:
    """``[w, a_k]^H (a_k a_k^H - rho a0 a0^H) [w, a_k]``, the additive-update analogue of B."""
    u = np.array([_inner(w_prev, a_k), _inner(a_k, a_k)])
    v = np.array([_inner(w_prev, a0), _inner(a_k, a0)])
    q = np.outer(u, u.conj()) - rho * np.outer(v, v.conj())
    # det(u u^H - rho v v^H) = -rho |u1 v2 - u2 v1|^2
    det = -rho * abs(u[0] * v[1] - u[1] * v[0]) ** 2
    return BMatrix(float(q[0, 0].real), complex(q[0, 1]), float(q[1, 1].real), float(det))


@dataclass(frozen=True)
class Circle:
    """Circle in the complex plane, center stored as a real 2-vector."""

    center: np.ndarray
    radius: float

    @property
    def center_complex(self) -> complex:
        return complex(self.center[0], self.center[1])

    def points(self, phi: np.ndarray) -> np.ndarray:
        return self.center_complex + self.radius * np.exp(1j * np.asarray(phi))

    def distance(self, z) -> np.ndarray:
        """Unsigned distance of points ``z`` to the circle."""
        return np.abs(np.abs(np.asarray(z) - self.center_complex) - self.radius)


BetaCircle = Circle
MuCircle = Circle


def _circle_from(m: BMatrix, rho: float, rho_tilde: float | None) -> Circle:
    if m.b22 == 0.0:
        raise DegenerateLevelError(rho, rho if rho_tilde is None else rho_tilde)
    center = np.array([-m.b12.real, m.b12.imag]) / m.b22
    radius = math.sqrt(max(-m.det, 0.0)) / abs(m.b22)
    return Circle(center=center, radius=radius)


def beta_circle(b: BMatrix, rho: float = float("nan"), rho_tilde: float | None = None) -> Circle:
    """All complex ``beta`` for which ``perp + beta * par`` meets the commanded level."""
    return _circle_from(b, rho, rho_tilde)


def mu_circle(q: BMatrix, rho: float = float("nan"), rho_tilde: float | None = None) -> Circle:
    return _circle_from(q, rho, rho_tilde)


def _along_center(circle: Circle, signed_radius: float) -> complex:
    """``c + signed_radius * c/|c|``; a zero center uses phase 0."""
    c = circle.center_complex
    norm_c = abs(c)
    if norm_c == 0.0:
        return complex(signed_radius)
    # scaling c itself avoids rounding the radius-free term through a phase
    return c * (1.0 + signed_radius / norm_c)


def optimal_beta(circle: Circle) -> complex:
    """Point of maximum modulus on the circle."""
    return _along_center(circle, circle.radius)


def mu_extremes(circle: Circle) -> tuple[complex, complex]:
    """(minimum-modulus point, maximum-modulus point) of the circle.

    When the origin lies inside the circle the factor ``1 - R/|c|`` is
    negative, which turns the phase by pi and keeps the modulus ``R - |c|``.
    """
    return _along_center(circle, -circle.radius), _along_center(circle, circle.radius)


def word_candidates(b: BMatrix) -> tuple[float, float]:
    if b.b22 == 0.0:
        raise DegenerateLevelError(float("nan"), float("nan"))
    disc = b.b12.real ** 2 - b.b11 * b.b22
    if disc < -1e-12 * max(b.b12.real ** 2, abs(b.b11 * b.b22), 1e-300):
        raise NoRealCoefficientError(f"negative discriminant {disc:.3e}: no real coefficient")
    d = b.d
    return (-b.b12.real + d) / b.b22, (-b.b12.real - d) / b.b22


def word_objective(beta: complex, dec: Decomposition, w_prev: np.ndarray) -> float:
    """Energy of the normalized new weight outside span{w_prev}."""
    w_k = dec.perp + beta * dec.par
    w_k = w_k / np.linalg.norm(w_k)
    resid = w_k - w_prev * (_inner(w_prev, w_k) / float(np.vdot(w_prev, w_prev).real))
    return float(np.vdot(resid, resid).real)


def select_word_beta(beta_a: float, beta_b: float, f_a: float, f_b: float) -> float:
    """Candidate with smaller objective; ties (to rounding) go to smaller ``|beta - 1|``."""
    if math.isclose(f_a, f_b, rel_tol=1e-12, abs_tol=1e-15):
        return beta_a if abs(beta_a - 1.0) <= abs(beta_b - 1.0) else beta_b
    return beta_a if f_a < f_b else beta_b


def lemma1_construct(beta: float, dec: Decomposition, a0: np.ndarray) -> complex:
    """Complex coefficient giving the same theta_k level as the real ``beta``."""
    xi_par = _inner(dec.par, a0)
    xi_perp = _inner(dec.perp, a0)
    eta = xi_par * xi_perp.conjugate()
    den = abs(xi_perp) ** 2 + 2.0 * beta * eta.real
    if den == 0.0:
        raise ConstructionUndefinedError("|xi_perp|^2 + 2 beta eta_r vanishes")
    zeta = 2.0 * beta ** 2 * eta.imag / den
    return complex(beta, zeta)


@dataclass(frozen=True)
class StepResult:
    """Outcome of one response-control step.

    ``coefficient`` is beta for C2-WORD and WORD and mu for A2RC; ``mu`` is
    the equivalent additive coefficient ``w_k = w_prev + mu a(theta_k)`` for
    every algorithm.
    """

    weight: np.ndarray
    coefficient: complex
    mu: complex
    wng: float
    achieved_level: float
    algorithm: Algorithm
    circle: Circle
    candidates: tuple = field(default=())

    @property
    def wng_db(self) -> float:
        return lin_to_db(self.wng)

    @property
    def achieved_level_db(self) -> float:
        return lin_to_db(self.achieved_level)


def _validate(w_prev: np.ndarray, a0: np.ndarray, rho: float) -> np.ndarray:
    w_prev = np.asarray(w_prev, dtype=complex)
    if w_prev.shape != a0.shape:
        raise ValueError(f"weight length {w_prev.shape} does not match array {a0.shape}")
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"commanded level must lie in [0, 1] (linear), got {rho}")
    if _is_axis_null(w_prev, a0):
        raise BeamAxisNullError("previous weight has a null on the beam axis")
    return w_prev


def _rho_tilde(a_k: np.ndarray, a0: np.ndarray) -> float:
    c = abs(_inner(a_k, a0)) ** 2
    return math.inf if c == 0 else float(np.vdot(a_k, a_k).real) ** 2 / c


def _finish(w_k, coefficient, mu, a_k, a0, algorithm, circle, candidates=()):
    return StepResult(
        weight=w_k,
        coefficient=complex(coefficient),
        mu=complex(mu),
        wng=wng_of(w_k, a0),
        achieved_level=level(w_k, a_k, a0),
        algorithm=algorithm,
        circle=circle,
        candidates=candidates,
    )


def _t_map(beta: complex, w_prev: np.ndarray, a_k: np.ndarray) -> complex:
    return (beta - 1.0) * _inner(a_k, w_prev) / float(np.vdot(a_k, a_k).real)


def c2word_update(w_prev: np.ndarray, a_k: np.ndarray, a0: np.ndarray, rho: float) -> StepResult:
    w_prev = _validate(w_prev, a0, rho)
    dec = decompose(w_prev, a_k)
    circle = beta_circle(b_matrix(dec, a_k, a0, rho), rho, _rho_tilde(a_k, a0))
    beta = optimal_beta(circle)
    w_k = dec.perp + beta * dec.par
    return _finish(w_k, beta, _t_map(beta, w_prev, a_k), a_k, a0, Algorithm.C2WORD, circle)


def word_update(w_prev: np.ndarray, a_k: np.ndarray, a0: np.ndarray, rho: float) -> StepResult:
    w_prev = _validate(w_prev, a0, rho)
    dec = decompose(w_prev, a_k)
    b = b_matrix(dec, a_k, a0, rho)
    circle = beta_circle(b, rho, _rho_tilde(a_k, a0))
    beta_a, beta_b = word_candidates(b)
    f_a = word_objective(beta_a, dec, w_prev)
    f_b = word_objective(beta_b, dec, w_prev)
    beta = select_word_beta(beta_a, beta_b, f_a, f_b)
    w_k = dec.perp + beta * dec.par
    return _finish(w_k, beta, _t_map(beta, w_prev, a_k), a_k, a0, Algorithm.WORD, circle, (beta_a, beta_b))


def a2rc_update(w_prev: np.ndarray, a_k: np.ndarray, a0: np.ndarray, rho: float) -> StepResult:
    w_prev = _validate(w_prev, a0, rho)
    circle = mu_circle(q_matrix(w_prev, a_k, a0, rho), rho, _rho_tilde(a_k, a0))
    mu_s, mu_l = mu_extremes(circle)
    w_k = w_prev + mu_s * a_k
    return _finish(w_k, mu_s, mu_s, a_k, a0, Algorithm.A2RC, circle, (mu_s, mu_l))


_UPDATES = {
    Algorithm.C2WORD: c2word_update,
    Algorithm.WORD: word_update,
    Algorithm.A2RC: a2rc_update,
}


def control_update(algorithm, w_prev, a_k, a0, rho) -> StepResult:
    return _UPDATES[Algorithm.parse(algorithm)](w_prev, a_k, a0, rho)


def c2word_step(w_prev, theta_k: float, theta0: float, rho: float, array: ArrayModel) -> StepResult:
    return c2word_update(w_prev, steering_vector(array, theta_k), steering_vector(array, theta0), rho)


def word_step(w_prev, theta_k: float, theta0: float, rho: float, array: ArrayModel) -> StepResult:
    return word_update(w_prev, steering_vector(array, theta_k), steering_vector(array, theta0), rho)


def a2rc_step(w_prev, theta_k: float, theta0: float, rho: float, array: ArrayModel) -> StepResult:
    return a2rc_update(w_prev, steering_vector(array, theta_k), steering_vector(array, theta0), rho)


def control_step(algorithm, w_prev, theta_k, theta0, rho, array) -> StepResult:
    return control_update(
        algorithm, w_prev, steering_vector(array, theta_k), steering_vector(array, theta0), rho
    )
