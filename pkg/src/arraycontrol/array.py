"""Array geometry, element patterns and steering vectors.

Positions are in wavelengths and angles in degrees. The phase of element ``n``
is ``exp(+j 2 pi x_n sin(theta))``, i.e. the delay relative to the coordinate
origin is ``tau_n = -x_n sin(theta) / c``.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

__all__ = [
    "PatternKind",
    "CouplingModel",
    "ElementSpec",
    "CouplingSpec",
    "SteeringTable",
    "ArrayModel",
    "SingularDirectionWarning",
    "element_gain",
    "steering_vector",
    "steering_matrix",
    "coupling_matrix",
    "load_array",
    "array_from_dict",
]

# Half-width (degrees) of the two-sided limit used at the dipole singularity.
_SINGULAR_EPS_DEG = 1e-6
_SINGULAR_COS = 1e-12


class SingularDirectionWarning(RuntimeWarning):
    """Raised (as a warning) when a dipole pattern is evaluated at cos(theta + zeta) = 0."""


class PatternKind(str, Enum):
    ISOTROPIC = "isotropic"
    DIPOLE = "dipole"
    CUSTOM = "custom"


class CouplingModel(str, Enum):
    ADJACENT = "adjacent"
    ALL_PAIRS = "all-pairs"


@dataclass(frozen=True)
class ElementSpec:
    """One array element.

    ``length`` and ``zeta_deg`` are only used by dipoles. Custom elements take
    their response from ``column`` of the array's :class:`SteeringTable`.
    """

    x: float = 0.0
    kind: PatternKind = PatternKind.ISOTROPIC
    length: float = 0.0
    zeta_deg: float = 0.0
    position: tuple[float, float] | None = None
    column: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", PatternKind(self.kind))
        if self.kind is PatternKind.DIPOLE and not self.length > 0:
            raise ValueError(f"dipole element needs length > 0, got {self.length}")

    @classmethod
    def dipole(cls, x: float, length: float, zeta_deg: float = 0.0) -> "ElementSpec":
        return cls(x=x, kind=PatternKind.DIPOLE, length=length, zeta_deg=zeta_deg)


@dataclass(frozen=True)
class CouplingSpec:
    isolation_db: float
    model: CouplingModel = CouplingModel.ALL_PAIRS

    def __post_init__(self):
        object.__setattr__(self, "model", CouplingModel(self.model))
        if not self.isolation_db < 0:
            raise ValueError(f"isolation_db must be negative, got {self.isolation_db}")

    @property
    def magnitude(self) -> float:
        return 10.0 ** (self.isolation_db / 20.0)


@dataclass(frozen=True)
class SteeringTable:
    """Tabulated steering vectors, linearly interpolated in angle.

    ``values`` has shape ``(len(theta_deg), N)``.
    """

    theta_deg: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        theta = np.asarray(self.theta_deg, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if theta.ndim != 1 or values.ndim != 2 or values.shape[0] != theta.size:
            raise ValueError("steering table must be (angles, elements)")
        if np.any(np.diff(theta) <= 0):
            raise ValueError("steering table angles must be strictly increasing")
        object.__setattr__(self, "theta_deg", theta)
        object.__setattr__(self, "values", values)

    @property
    def n_columns(self) -> int:
        return self.values.shape[1]

    def __call__(self, theta_deg) -> np.ndarray:
        theta = np.atleast_1d(np.asarray(theta_deg, dtype=float))
        if theta.min() < self.theta_deg[0] or theta.max() > self.theta_deg[-1]:
            raise ValueError("angle outside the tabulated steering-vector range")
        out = np.empty((theta.size, self.n_columns), dtype=complex)
        for n in range(self.n_columns):
            out[:, n] = np.interp(theta, self.theta_deg, self.values[:, n].real) + 1j * np.interp(
                theta, self.theta_deg, self.values[:, n].imag
            )
        return out

    @classmethod
    def from_csv(cls, path: str | Path) -> "SteeringTable":
        """Read ``theta_deg, re_1, im_1, ..., re_N, im_N`` rows (header optional)."""
        rows = []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    rows.append([float(v) for v in row])
                except ValueError:
                    if rows:
                        raise
                    continue  # header
        data = np.array(rows, dtype=float)
        if data.ndim != 2 or data.shape[1] < 3 or (data.shape[1] - 1) % 2:
            raise ValueError(f"{path}: expected theta_deg followed by re/im pairs")
        return cls(data[:, 0], data[:, 1::2] + 1j * data[:, 2::2])

    def to_csv(self, path: str | Path) -> None:
        n = self.n_columns
        header = ["theta_deg"] + [f"{p}_{i + 1}" for i in range(n) for p in ("re", "im")]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for theta, row in zip(self.theta_deg, self.values):
                cells = [repr(float(theta))]
                for v in row:
                    cells += [repr(float(v.real)), repr(float(v.imag))]
                writer.writerow(cells)


def _check_angles(theta_deg) -> np.ndarray:
    theta = np.asarray(theta_deg, dtype=float)
    if np.any(np.abs(theta) > 90.0 + 1e-9):
        raise ValueError("angles must lie in [-90, 90] degrees")
    return theta


def _dipole_gain(theta_rad, length, zeta_rad):
    arg = theta_rad + zeta_rad
    return (np.cos(np.pi * length * np.sin(arg)) - np.cos(np.pi * length)) / np.cos(arg)


def _dipole_gains(theta_deg: np.ndarray, length: np.ndarray, zeta_deg: np.ndarray) -> np.ndarray:
    """Dipole gains on a (len(theta), N) grid, singular points by two-sided limit."""
    theta = np.deg2rad(theta_deg)[:, None]
    zeta = np.deg2rad(zeta_deg)[None, :]
    length = length[None, :]
    singular = np.abs(np.cos(theta + zeta)) < _SINGULAR_COS
    with np.errstate(divide="ignore", invalid="ignore"):
        g = _dipole_gain(theta, length, zeta)
    if np.any(singular):
        warnings.warn(
            "dipole pattern evaluated at cos(theta + zeta) = 0; using the symmetric limit",
            SingularDirectionWarning,
            stacklevel=3,
        )
        eps = np.deg2rad(_SINGULAR_EPS_DEG)
        limit = 0.5 * (_dipole_gain(theta + eps, length, zeta) + _dipole_gain(theta - eps, length, zeta))
        g = np.where(singular, limit, g)
    return g


def element_gain(spec: ElementSpec, theta_deg: float) -> float:
    """Real amplitude pattern of a single element."""
    theta = _check_angles(theta_deg)
    if spec.kind is PatternKind.ISOTROPIC:
        return 1.0
    if spec.kind is PatternKind.CUSTOM:
        raise ValueError("custom elements are defined by their steering table")
    g = _dipole_gains(np.atleast_1d(theta), np.array([spec.length]), np.array([spec.zeta_deg]))
    return float(g[0, 0])


def coupling_matrix(spec: CouplingSpec, n: int) -> np.ndarray:
    """Mutual-coupling matrix with unit diagonal and real off-diagonals."""
    if n < 2:
        raise ValueError("coupling needs at least two elements")
    c = np.eye(n, dtype=complex)
    m = spec.magnitude
    if spec.model is CouplingModel.ADJACENT:
        idx = np.arange(n - 1)
        c[idx, idx + 1] = m
        c[idx + 1, idx] = m
    else:
        c[~np.eye(n, dtype=bool)] = m
    return c


@dataclass(frozen=True)
class ArrayModel:
    elements: tuple[ElementSpec, ...]
    coupling: CouplingSpec | None = None
    table: SteeringTable | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if len(self.elements) < 2:
            raise ValueError("an array needs at least two elements")
        custom = [e for e in self.elements if e.kind is PatternKind.CUSTOM]
        if custom:
            if self.table is None:
                raise ValueError("custom elements require a steering table")
            for n, e in enumerate(self.elements):
                if e.kind is PatternKind.CUSTOM:
                    col = n if e.column is None else e.column
                    if not 0 <= col < self.table.n_columns:
                        raise ValueError(f"element {n}: table column {col} out of range")

    @property
    def n(self) -> int:
        return len(self.elements)

    @cached_property
    def positions(self) -> np.ndarray:
        return np.array([e.x for e in self.elements], dtype=float)

    @cached_property
    def coupling_matrix(self) -> np.ndarray | None:
        return None if self.coupling is None else coupling_matrix(self.coupling, self.n)

    @cached_property
    def _kinds(self):
        kinds = np.array([e.kind.value for e in self.elements])
        dip = np.flatnonzero(kinds == PatternKind.DIPOLE.value)
        cus = np.flatnonzero(kinds == PatternKind.CUSTOM.value)
        lengths = np.array([self.elements[i].length for i in dip], dtype=float)
        zetas = np.array([self.elements[i].zeta_deg for i in dip], dtype=float)
        cols = np.array(
            [i if self.elements[i].column is None else self.elements[i].column for i in cus], dtype=int
        )
        return dip, lengths, zetas, cus, cols

    def gains(self, theta_deg) -> np.ndarray:
        """Element amplitude patterns, shape ``(len(theta), N)``; custom columns are zero."""
        theta = np.atleast_1d(_check_angles(theta_deg))
        g = np.ones((theta.size, self.n))
        dip, lengths, zetas, cus, _ = self._kinds
        if dip.size:
            g[:, dip] = _dipole_gains(theta, lengths, zetas)
        if cus.size:
            g[:, cus] = 0.0
        return g

    def steering(self, theta_deg) -> np.ndarray:
        """Steering vectors for each angle, shape ``(len(theta), N)``."""
        theta = np.atleast_1d(_check_angles(theta_deg))
        phase = 2.0 * np.pi * np.sin(np.deg2rad(theta))[:, None] * self.positions[None, :]
        a = self.gains(theta) * np.exp(1j * phase)
        _, _, _, cus, cols = self._kinds
        if cus.size:
            a[:, cus] = self.table(theta)[:, cols]
        if self.coupling is not None:
            a = a @ self.coupling_matrix.T
        return a

    # Constructors for common geometries

    @classmethod
    def ula(cls, n: int, spacing: float = 0.5, centered: bool = True, coupling: CouplingSpec | None = None):
        """Uniform linear array of isotropic elements, symmetric about 0 when ``centered``."""
        x = np.arange(n) * spacing
        if centered:
            x = x - x.mean()
        return cls(tuple(ElementSpec(float(v)) for v in x), coupling=coupling)

    @classmethod
    def from_positions(cls, x: Sequence[float], coupling: CouplingSpec | None = None):
        return cls(tuple(ElementSpec(float(v)) for v in x), coupling=coupling)

    def to_dict(self) -> dict:
        out: dict = {"elements": []}
        for e in self.elements:
            pattern: dict = {"kind": e.kind.value}
            if e.kind is PatternKind.DIPOLE:
                pattern.update(l=e.length, zeta_deg=e.zeta_deg)
            if e.kind is PatternKind.CUSTOM and e.column is not None:
                pattern["column"] = e.column
            out["elements"].append({"x": e.x, "pattern": pattern})
        if self.coupling is not None:
            out["coupling"] = {"isolation_db": self.coupling.isolation_db, "model": self.coupling.model.value}
        return out


def steering_matrix(array: ArrayModel, theta_deg) -> np.ndarray:
    return array.steering(theta_deg)


def steering_vector(array: ArrayModel, theta_deg: float) -> np.ndarray:
    """Complex N-vector a(theta) including element gains and coupling."""
    if np.ndim(theta_deg) != 0:
        raise ValueError("steering_vector takes a scalar angle; use steering_matrix for grids")
    return array.steering(theta_deg)[0]


def array_from_dict(doc: dict, base_dir: str | Path | None = None) -> ArrayModel:
    """Build an :class:`ArrayModel` from the JSON array document.

    Custom elements reference a steering-vector CSV either through the
    top-level ``"steering_table"`` key or a per-element ``"table"`` key; all
    custom elements must share one table.
    """
    base = Path(base_dir) if base_dir is not None else Path.cwd()
    if "elements" not in doc or not doc["elements"]:
        raise ValueError("array document needs a non-empty 'elements' list")
    table_ref = doc.get("steering_table")
    elements = []
    for i, item in enumerate(doc["elements"]):
        pattern = item.get("pattern", {"kind": "isotropic"})
        kind = PatternKind(pattern.get("kind", "isotropic"))
        if kind is PatternKind.DIPOLE:
            if "l" not in pattern:
                raise ValueError(f"element {i}: dipole needs 'l'")
            elements.append(ElementSpec.dipole(float(item.get("x", 0.0)), float(pattern["l"]), float(pattern.get("zeta_deg", 0.0))))
        elif kind is PatternKind.CUSTOM:
            ref = pattern.get("table", table_ref)
            if ref is None:
                raise ValueError(f"element {i}: custom element without a steering table")
            if table_ref is not None and ref != table_ref:
                raise ValueError("all custom elements must share one steering table")
            table_ref = ref
            elements.append(ElementSpec(x=float(item.get("x", 0.0)), kind=kind, column=pattern.get("column")))
        else:
            elements.append(ElementSpec(x=float(item.get("x", 0.0))))
    table = None
    if table_ref is not None:
        path = Path(table_ref)
        table = SteeringTable.from_csv(path if path.is_absolute() else base / path)
    coupling = None
    if doc.get("coupling"):
        c = doc["coupling"]
        coupling = CouplingSpec(float(c["isolation_db"]), c.get("model", CouplingModel.ALL_PAIRS))
    return ArrayModel(tuple(elements), coupling=coupling, table=table)


def load_array(path: str | Path) -> ArrayModel:
    path = Path(path)
    with open(path) as fh:
        doc = json.load(fh)
    return array_from_dict(doc, base_dir=path.parent)
