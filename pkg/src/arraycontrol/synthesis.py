"""Iterative pattern synthesis by repeated single-point response control.

Each step compares the current pattern with a piecewise-constant mask,
picks one angle (the worst sidelobe peak, or else the worst mainlobe
deviation) and commands the mask level there with the chosen update rule.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Sequence

import numpy as np
from scipy.signal.windows import chebwin

from .array import ArrayModel, steering_vector
from .response import (
    Algorithm,
    BeamAxisNullError,
    ResponseControlError,
    StepResult,
    control_update,
    db_to_lin,
)

__all__ = [
    "RegionKind",
    "MaskRegion",
    "PatternMask",
    "Pattern",
    "Peak",
    "ControlTarget",
    "InitialWeight",
    "SynthesisConfig",
    "SynthesisStep",
    "SynthesisTrace",
    "SynthesisError",
    "SelectionPolicy",
    "FLOOR_DB",
    "angle_grid",
    "evaluate_pattern",
    "find_sidelobe_peaks",
    "select_control_angle",
    "compute_dk",
    "mainlobe_ripple",
    "max_sidelobe_violation",
    "chebyshev_weights",
    "initial_weight_vector",
    "synthesize",
]

FLOOR_DB = -350.0


class RegionKind(str, Enum):
    SIDELOBE_UPPER = "sidelobe_upper"
    MAINLOBE_TARGET = "mainlobe_target"


@dataclass(frozen=True)
class MaskRegion:
    start: float
    stop: float
    level_db: float
    kind: RegionKind = RegionKind.SIDELOBE_UPPER

    def __post_init__(self):
        object.__setattr__(self, "kind", RegionKind(self.kind))
        if not self.start < self.stop:
            raise ValueError(f"mask region needs start < stop, got [{self.start}, {self.stop}]")

    def contains(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        return (theta >= self.start) & (theta <= self.stop)


@dataclass(frozen=True)
class PatternMask:
    """Desired pattern: explicit regions plus a default sidelobe bound elsewhere."""

    regions: tuple[MaskRegion, ...]
    default_sidelobe_db: float

    def __post_init__(self):
        regions = tuple(sorted(self.regions, key=lambda r: r.start))
        for left, right in zip(regions, regions[1:]):
            if right.start < left.stop:
                raise ValueError(f"mask regions overlap: [{left.start}, {left.stop}] and [{right.start}, {right.stop}]")
        object.__setattr__(self, "regions", regions)

    def level_db(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        out = np.full(theta.shape, float(self.default_sidelobe_db))
        for r in self.regions:
            out = np.where(r.contains(theta), r.level_db, out)
        return out

    def is_mainlobe(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape, dtype=bool)
        for r in self.mainlobe_regions:
            out |= r.contains(theta)
        return out

    @property
    def mainlobe_regions(self) -> tuple[MaskRegion, ...]:
        return tuple(r for r in self.regions if r.kind is RegionKind.MAINLOBE_TARGET)

    def transition(self, theta, width_deg: float) -> np.ndarray:
        """Sidelobe angles within ``width_deg`` outside a mainlobe region edge."""
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape, dtype=bool)
        for r in self.mainlobe_regions:
            out |= ((theta >= r.start - width_deg) & (theta < r.start)) | (
                (theta > r.stop) & (theta <= r.stop + width_deg)
            )
        return out & ~self.is_mainlobe(theta)

    def outline(self, lo: float = -90.0, hi: float = 90.0) -> tuple[np.ndarray, np.ndarray]:
        """Step outline (x, y) for plotting."""
        edges = sorted({lo, hi, *[min(max(v, lo), hi) for r in self.regions for v in (r.start, r.stop)]})
        xs, ys = [], []
        for a, b in zip(edges, edges[1:]):
            mid = 0.5 * (a + b)
            y = float(self.level_db(mid))
            xs += [a, b]
            ys += [y, y]
        return np.array(xs), np.array(ys)

    @classmethod
    def from_dict(cls, doc: dict) -> "PatternMask":
        regions = []
        for r in doc.get("regions", []):
            regions.append(
                MaskRegion(float(r["start"]), float(r["stop"]), float(r["level_db"]), r.get("kind", "sidelobe_upper"))
            )
        if "default_sidelobe_db" not in doc:
            raise ValueError("mask needs 'default_sidelobe_db'")
        return cls(tuple(regions), float(doc["default_sidelobe_db"]))

    def to_dict(self) -> dict:
        return {
            "regions": [
                {"start": r.start, "stop": r.stop, "level_db": r.level_db, "kind": r.kind.value} for r in self.regions
            ],
            "default_sidelobe_db": self.default_sidelobe_db,
        }


@dataclass(frozen=True)
class Pattern:
    """Sampled pattern in dB, normalized to the beam axis."""

    theta_deg: np.ndarray
    level_db: np.ndarray

    def __iter__(self) -> Iterator[tuple[float, float]]:
        return zip(self.theta_deg.tolist(), self.level_db.tolist())

    def __len__(self) -> int:
        return self.theta_deg.size

    def at(self, theta: float) -> float:
        return float(np.interp(theta, self.theta_deg, self.level_db))


@dataclass(frozen=True)
class Peak:
    theta: float
    level_db: float
    mask_db: float

    @property
    def violation(self) -> float:
        return self.level_db - self.mask_db


@dataclass(frozen=True)
class ControlTarget:
    theta: float
    rho_db: float
    kind: RegionKind


def angle_grid(step_deg: float, lo: float = -90.0, hi: float = 90.0) -> np.ndarray:
    if not step_deg > 0:
        raise ValueError("grid step must be positive")
    n = int(round((hi - lo) / step_deg))
    grid = lo + step_deg * np.arange(n + 1)
    return np.clip(grid, lo, hi)


def _levels_db(a_grid: np.ndarray, w: np.ndarray, a0: np.ndarray) -> np.ndarray:
    ref = abs(complex(np.vdot(w, a0))) ** 2
    if ref == 0.0:
        raise BeamAxisNullError("weight vector has a null on the beam axis")
    power = np.abs(a_grid @ np.conj(w)) ** 2 / ref
    with np.errstate(divide="ignore"):
        out = 10.0 * np.log10(power)
    return np.maximum(out, FLOOR_DB)


def evaluate_pattern(w: np.ndarray, array: ArrayModel, theta0: float, grid: Sequence[float]) -> Pattern:
    theta = np.asarray(grid, dtype=float)
    if theta.size == 0:
        raise ValueError("empty angle grid")
    levels = _levels_db(array.steering(theta), np.asarray(w, dtype=complex), steering_vector(array, theta0))
    levels = np.where(np.isclose(theta, theta0, rtol=0, atol=1e-12), 0.0, levels)
    return Pattern(theta, levels)


def _parabolic(theta: np.ndarray, y: np.ndarray, i: int) -> tuple[float, float]:
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    den = y0 - 2.0 * y1 + y2
    if den == 0.0:
        return float(theta[i]), float(y1)
    delta = 0.5 * (y0 - y2) / den
    h = theta[i + 1] - theta[i]
    return float(theta[i] + delta * h), float(y1 - 0.25 * (y0 - y2) * delta)


def _main_beam_span(pattern: Pattern, theta0: float) -> tuple[float, float]:
    """Angles of the first local minima on either side of the beam axis."""
    y = pattern.level_db
    i0 = int(np.argmin(np.abs(pattern.theta_deg - theta0)))
    lo = i0
    while lo > 0 and y[lo - 1] <= y[lo]:
        lo -= 1
    hi = i0
    while hi < y.size - 1 and y[hi + 1] <= y[hi]:
        hi += 1
    return float(pattern.theta_deg[lo]), float(pattern.theta_deg[hi])


def _sidelobe_scoring(pattern: Pattern, mask: PatternMask, theta0: float | None, transition_deg: float) -> np.ndarray:
    theta = pattern.theta_deg
    ok = ~mask.is_mainlobe(theta) & ~mask.transition(theta, transition_deg)
    if theta0 is not None and not bool(mask.is_mainlobe(np.array([theta0]))[0]):
        lo, hi = _main_beam_span(pattern, theta0)
        ok &= (theta <= lo) | (theta >= hi)
    return ok


def find_sidelobe_peaks(
    pattern: Pattern, mask: PatternMask, theta0: float | None = None, transition_deg: float = 3.0
) -> list[Peak]:
    """Local maxima in the sidelobe regions, worst violation first.

    Peaks are local maxima of the excess over the mask within runs of scored
    samples that share one mask level. Interior maxima are refined with a
    parabola through the three bracketing samples; a run end (grid end, mask
    step, or edge of an excluded band) counts when it exceeds its one in-run
    neighbor. The main beam (out to the first minima around ``theta0``, unless
    ``theta0`` lies in a mainlobe region) and the transition bands beside
    mainlobe regions are skipped.
    """
    y = pattern.level_db
    theta = pattern.theta_deg
    n = y.size
    if n < 3:
        return []
    ok = _sidelobe_scoring(pattern, mask, theta0, transition_deg)
    lvl = mask.level_db(theta)
    excess = y - lvl
    # a run is a maximal stretch of scored samples under one mask level
    same = np.r_[False, ok[1:] & ok[:-1] & (lvl[1:] == lvl[:-1])]
    peaks = []
    for i in np.flatnonzero(ok):
        left = same[i]
        right = i < n - 1 and same[i + 1]
        if left and right:
            if excess[i] > excess[i - 1] and excess[i] > excess[i + 1]:
                t, level = _parabolic(theta, y, i)
                peaks.append(Peak(t, level, float(lvl[i])))
        elif left or right:
            j = i - 1 if left else i + 1
            if excess[i] > excess[j]:
                peaks.append(Peak(float(theta[i]), float(y[i]), float(lvl[i])))
    peaks.sort(key=lambda p: (-p.violation, p.theta))
    return peaks


def compute_dk(pattern: Pattern, mask: PatternMask, peaks: Sequence[Peak]) -> float:
    """Largest peak excess over the mask; ``-inf`` when there are no peaks."""
    if not peaks:
        return -math.inf
    return max(p.violation for p in peaks)


def _mainlobe_target(pattern: Pattern, mask: PatternMask, ripple_db: float) -> ControlTarget | None:
    theta = pattern.theta_deg
    y = pattern.level_db
    inside = mask.is_mainlobe(theta)
    if not inside.any():
        return None
    dev = np.where(inside, np.abs(y - mask.level_db(theta)), -np.inf)
    i = int(np.argmax(dev))
    if not dev[i] > ripple_db:
        return None
    t = float(theta[i])
    if 0 < i < y.size - 1 and inside[i - 1] and inside[i + 1]:
        signed = y - mask.level_db(theta)
        s = signed if signed[i] > 0 else -signed
        if s[i] >= s[i - 1] and s[i] >= s[i + 1]:
            t, _ = _parabolic(theta, s, i)
    region = next(r for r in mask.mainlobe_regions if r.contains(theta[i]))
    t = min(max(t, region.start), region.stop)
    return ControlTarget(t, float(region.level_db), RegionKind.MAINLOBE_TARGET)


class SelectionPolicy(str, Enum):
    """How to choose between a violated sidelobe peak and a mainlobe deviation."""

    SIDELOBE_FIRST = "sidelobe_first"
    ALTERNATE = "alternate"

    @classmethod
    def parse(cls, value) -> "SelectionPolicy":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            names = ", ".join(p.value for p in cls)
            raise ValueError(f"unknown selection policy {value!r}; expected one of {names}") from None


def select_control_angle(
    pattern: Pattern,
    mask: PatternMask,
    theta0: float | None = None,
    dk_tol_db: float = 0.1,
    mainlobe_ripple_db: float = 0.25,
    transition_deg: float = 3.0,
    policy: SelectionPolicy = SelectionPolicy.SIDELOBE_FIRST,
    last_kind: RegionKind | None = None,
) -> ControlTarget | None:
    """Next angle to control, or ``None`` when the pattern complies.

    With ``SIDELOBE_FIRST`` the mainlobe is only touched once every sidelobe
    peak is within ``dk_tol_db``. With ``ALTERNATE`` both kinds compete and
    the one not controlled at the previous step (``last_kind``) goes first.
    """
    peaks = find_sidelobe_peaks(pattern, mask, theta0, transition_deg)
    side = None
    if peaks and peaks[0].violation > dk_tol_db:
        side = ControlTarget(peaks[0].theta, peaks[0].mask_db, RegionKind.SIDELOBE_UPPER)
        if SelectionPolicy.parse(policy) is SelectionPolicy.SIDELOBE_FIRST:
            return side
    main = _mainlobe_target(pattern, mask, mainlobe_ripple_db)
    if side is not None and main is not None:
        return main if last_kind is RegionKind.SIDELOBE_UPPER else side
    return side or main


def mainlobe_ripple(pattern: Pattern, mask: PatternMask) -> float:
    """Largest absolute deviation (dB) from the target inside mainlobe regions."""
    inside = mask.is_mainlobe(pattern.theta_deg)
    if not inside.any():
        return 0.0
    return float(np.max(np.abs(pattern.level_db[inside] - mask.level_db(pattern.theta_deg[inside]))))


def max_sidelobe_violation(
    pattern: Pattern, mask: PatternMask, theta0: float | None = None, transition_deg: float = 3.0
) -> float:
    """Largest excess over the mask at any scored sidelobe sample (not only peaks)."""
    ok = _sidelobe_scoring(pattern, mask, theta0, transition_deg)
    if not ok.any():
        return -math.inf
    return float(np.max(pattern.level_db[ok] - mask.level_db(pattern.theta_deg[ok])))


def chebyshev_weights(n: int, sidelobe_db: float) -> np.ndarray:
    """Dolph-Chebyshev taper, unit maximum and exactly symmetric."""
    if n < 2:
        raise ValueError("need at least two elements")
    if not sidelobe_db < 0:
        raise ValueError("sidelobe level must be negative dB")
    if n == 2:
        return np.ones(2)
    with warnings.catch_warnings():
        # scipy warns about spectral-analysis use below 45 dB, irrelevant for tapers
        warnings.simplefilter("ignore", UserWarning)
        w = chebwin(n, at=-sidelobe_db, sym=True)
    w = 0.5 * (w + w[::-1])
    return w / w.max()


@dataclass(frozen=True)
class InitialWeight:
    kind: str = "steering"
    sidelobe_db: float | None = None
    vector: np.ndarray | None = field(default=None, compare=False)

    @classmethod
    def steering(cls) -> "InitialWeight":
        return cls("steering")

    @classmethod
    def chebyshev(cls, sidelobe_db: float) -> "InitialWeight":
        return cls("chebyshev", sidelobe_db=sidelobe_db)

    @classmethod
    def explicit(cls, vector) -> "InitialWeight":
        return cls("explicit", vector=np.asarray(vector, dtype=complex))

    @classmethod
    def from_dict(cls, doc) -> "InitialWeight":
        if isinstance(doc, str):
            doc = {"kind": doc}
        kind = doc.get("kind", "steering")
        if kind == "steering":
            return cls.steering()
        if kind == "chebyshev":
            return cls.chebyshev(float(doc["sidelobe_db"]))
        if kind == "explicit":
            return cls.explicit(_complex_list(doc["vector"]))
        raise ValueError(f"unknown initial weight kind {kind!r}; allowed: steering, chebyshev, explicit")

    def to_dict(self) -> dict:
        if self.kind == "chebyshev":
            return {"kind": "chebyshev", "sidelobe_db": self.sidelobe_db}
        if self.kind == "explicit":
            return {"kind": "explicit", "vector": [[v.real, v.imag] for v in self.vector]}
        return {"kind": "steering"}


def _complex_list(values) -> np.ndarray:
    out = []
    for v in values:
        if isinstance(v, dict):
            out.append(complex(v["re"], v["im"]))
        elif isinstance(v, (list, tuple)):
            out.append(complex(v[0], v[1]))
        else:
            out.append(complex(v))
    return np.array(out, dtype=complex)


def initial_weight_vector(spec: InitialWeight, array: ArrayModel, theta0: float) -> np.ndarray:
    """Starting weight; the Chebyshev taper is steered to the beam axis."""
    a0 = steering_vector(array, theta0)
    if spec.kind == "steering":
        return a0.copy()
    if spec.kind == "chebyshev":
        return chebyshev_weights(array.n, spec.sidelobe_db) * a0
    if spec.kind == "explicit":
        if spec.vector is None or spec.vector.shape != (array.n,):
            raise ValueError(f"explicit initial weight must have length {array.n}")
        return spec.vector.copy()
    raise ValueError(f"unknown initial weight kind {spec.kind!r}")


@dataclass(frozen=True)
class SynthesisConfig:
    theta0: float
    algorithm: Algorithm = Algorithm.C2WORD
    grid_step_deg: float = 0.05
    max_steps: int = 100
    dk_tol_db: float = 0.1
    mainlobe_ripple_db: float = 0.25
    initial_weight: InitialWeight = field(default_factory=InitialWeight.steering)
    transition_deg: float = 3.0
    compare_algorithms: bool = False
    selection: SelectionPolicy = SelectionPolicy.SIDELOBE_FIRST

    def __post_init__(self):
        object.__setattr__(self, "algorithm", Algorithm.parse(self.algorithm))
        object.__setattr__(self, "selection", SelectionPolicy.parse(self.selection))
        if not self.grid_step_deg > 0:
            raise ValueError("grid_step_deg must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        if self.dk_tol_db < 0 or self.mainlobe_ripple_db < 0 or self.transition_deg < 0:
            raise ValueError("tolerances and transition width must be nonnegative")

    @classmethod
    def from_dict(cls, doc: dict) -> "SynthesisConfig":
        known = {
            "theta0_deg": "theta0",
            "theta0": "theta0",
            "algorithm": "algorithm",
            "grid_step_deg": "grid_step_deg",
            "max_steps": "max_steps",
            "dk_tol_db": "dk_tol_db",
            "mainlobe_ripple_db": "mainlobe_ripple_db",
            "transition_deg": "transition_deg",
            "compare_algorithms": "compare_algorithms",
            "selection": "selection",
        }
        kwargs = {known[k]: v for k, v in doc.items() if k in known}
        if "theta0" not in kwargs:
            raise ValueError("synthesis config needs 'theta0_deg'")
        if "initial_weight" in doc:
            kwargs["initial_weight"] = InitialWeight.from_dict(doc["initial_weight"])
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return {
            "theta0_deg": self.theta0,
            "algorithm": self.algorithm.value,
            "grid_step_deg": self.grid_step_deg,
            "max_steps": self.max_steps,
            "dk_tol_db": self.dk_tol_db,
            "mainlobe_ripple_db": self.mainlobe_ripple_db,
            "transition_deg": self.transition_deg,
            "compare_algorithms": self.compare_algorithms,
            "selection": self.selection.value,
            "initial_weight": self.initial_weight.to_dict(),
        }


@dataclass
class SynthesisStep:
    k: int
    theta: float
    rho_db: float
    kind: RegionKind
    coefficient: complex
    mu: complex
    wng_db: float
    achieved_db: float
    dk_db: float
    weight: np.ndarray
    comparison: dict = field(default_factory=dict)


@dataclass
class SynthesisTrace:
    steps: list[SynthesisStep]
    initial_weight: np.ndarray
    final_weight: np.ndarray
    converged: bool
    dk0_db: float
    message: str = ""

    @property
    def dk_sequence(self) -> np.ndarray:
        return np.array([self.dk0_db] + [s.dk_db for s in self.steps])

    @property
    def weights(self) -> list[np.ndarray]:
        return [self.initial_weight] + [s.weight for s in self.steps]


class SynthesisError(ResponseControlError):
    def __init__(self, message: str, trace: SynthesisTrace):
        super().__init__(message)
        self.trace = trace


class _Evaluator:
    """Pattern evaluation with the grid steering matrix computed once."""

    def __init__(self, array: ArrayModel, theta0: float, grid: np.ndarray):
        self.grid = grid
        self.theta0 = theta0
        self.a_grid = array.steering(grid)
        self.a0 = steering_vector(array, theta0)
        self.axis = np.isclose(grid, theta0, rtol=0, atol=1e-12)

    def __call__(self, w: np.ndarray) -> Pattern:
        levels = _levels_db(self.a_grid, w, self.a0)
        return Pattern(self.grid, np.where(self.axis, 0.0, levels))


def synthesize(array: ArrayModel, mask: PatternMask, config: SynthesisConfig) -> SynthesisTrace:
    """Run the select/control/re-evaluate loop until the mask is met or steps run out."""
    grid = angle_grid(config.grid_step_deg)
    evaluate = _Evaluator(array, config.theta0, grid)
    a0 = evaluate.a0
    w = initial_weight_vector(config.initial_weight, array, config.theta0)
    opts = dict(theta0=config.theta0, transition_deg=config.transition_deg)

    pattern = evaluate(w)
    dk0 = compute_dk(pattern, mask, find_sidelobe_peaks(pattern, mask, **opts))
    trace = SynthesisTrace([], w.copy(), w.copy(), False, dk0)
    others = [a for a in Algorithm if a is not config.algorithm] if config.compare_algorithms else []

    for k in range(1, config.max_steps + 2):
        target = select_control_angle(
            pattern,
            mask,
            config.theta0,
            config.dk_tol_db,
            config.mainlobe_ripple_db,
            config.transition_deg,
            config.selection,
            trace.steps[-1].kind if trace.steps else None,
        )
        if target is None:
            trace.converged = True
            trace.message = f"mask satisfied after {k - 1} steps"
            break
        if k > config.max_steps:
            trace.message = f"not converged within {config.max_steps} steps"
            break
        a_k = steering_vector(array, target.theta)
        rho = db_to_lin(target.rho_db)
        try:
            res: StepResult = control_update(config.algorithm, w, a_k, a0, rho)
            comparison = {}
            for alg in others:
                alt = control_update(alg, w, a_k, a0, rho)
                comparison[alg.value] = {
                    "wng_db": alt.wng_db,
                    "weight_diff": float(np.linalg.norm(alt.weight - res.weight) / np.linalg.norm(res.weight)),
                }
        except ResponseControlError as exc:
            trace.message = f"step {k} at {target.theta:.4f} deg failed: {exc}"
            raise SynthesisError(trace.message, trace) from exc
        w = res.weight
        pattern = evaluate(w)
        dk = compute_dk(pattern, mask, find_sidelobe_peaks(pattern, mask, **opts))
        trace.steps.append(
            SynthesisStep(
                k=k,
                theta=target.theta,
                rho_db=target.rho_db,
                kind=target.kind,
                coefficient=res.coefficient,
                mu=res.mu,
                wng_db=res.wng_db,
                achieved_db=res.achieved_level_db,
                dk_db=dk,
                weight=w.copy(),
                comparison=comparison,
            )
        )
        trace.final_weight = w.copy()
    return trace
