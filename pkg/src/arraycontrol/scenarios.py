"""Built-in arrays and experiment setups."""

from __future__ import annotations

from dataclasses import dataclass

from .array import ArrayModel, ElementSpec
from .synthesis import InitialWeight, MaskRegion, PatternMask, RegionKind, SelectionPolicy, SynthesisConfig

__all__ = [
    "RANDOM_DIPOLE_X",
    "RANDOM_DIPOLE_LENGTH",
    "RANDOM_DIPOLE_ZETA",
    "FLAT_TOP_X",
    "CONTROL_SCHEDULE",
    "ControlScenario",
    "SynthesisScenario",
    "random_dipole_array",
    "flat_top_array",
    "control_scenario",
    "ula_notch_scenario",
    "flat_top_scenario",
    "SCENARIOS",
]

# 21-element nonisotropic random array (wavelengths, wavelengths, degrees)
RANDOM_DIPOLE_X = (
    0.00, 0.45, 0.95, 1.50, 2.04, 2.64, 3.09, 3.55, 4.05, 4.55, 5.06,
    5.50, 6.01, 6.53, 7.07, 7.52, 8.00, 8.47, 8.98, 9.53, 10.01,
)  # fmt: skip
RANDOM_DIPOLE_LENGTH = (
    0.30, 0.25, 0.24, 0.20, 0.26, 0.27, 0.23, 0.24, 0.25, 0.21, 0.20,
    0.20, 0.29, 0.20, 0.26, 0.21, 0.25, 0.21, 0.20, 0.26, 0.25,
)  # fmt: skip
RANDOM_DIPOLE_ZETA = (
    0.0, -4.0, 5.0, -32.0, -3.2, 10.0, 1.0, -10.0, 0.0, 7.0, 5.0,
    5.0, 4.0, 5.0, -9.0, 7.0, 10.0, 6.0, -8.0, 0.0, 5.0,
)  # fmt: skip

# 16-element isotropic random array used for the flat-top pattern
FLAT_TOP_X = (
    0.00, 0.47, 1.01, 1.47, 1.97, 2.54, 3.06, 3.53,
    3.99, 4.48, 4.96, 5.43, 5.94, 6.49, 6.98, 7.46,
)  # fmt: skip

# (theta_k deg, rho_k dB) for the three-step control demonstration
CONTROL_SCHEDULE = ((5.0, -10.0), (-25.0, -30.0), (22.0, 0.0))


def random_dipole_array() -> ArrayModel:
    return ArrayModel(
        tuple(
            ElementSpec.dipole(x, l, z)
            for x, l, z in zip(RANDOM_DIPOLE_X, RANDOM_DIPOLE_LENGTH, RANDOM_DIPOLE_ZETA)
        )
    )


def flat_top_array() -> ArrayModel:
    return ArrayModel.from_positions(FLAT_TOP_X)


@dataclass(frozen=True)
class ControlScenario:
    array: ArrayModel
    theta0: float
    steps: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class SynthesisScenario:
    array: ArrayModel
    mask: PatternMask
    config: SynthesisConfig


def control_scenario() -> ControlScenario:
    return ControlScenario(random_dipole_array(), 20.0, CONTROL_SCHEDULE)


def ula_notch_scenario(algorithm="c2word", max_steps: int = 100) -> SynthesisScenario:
    """16-element half-wavelength ULA, -45 dB notch on [25, 45] deg, -30 dB elsewhere."""
    mask = PatternMask((MaskRegion(25.0, 45.0, -45.0),), default_sidelobe_db=-30.0)
    config = SynthesisConfig(
        theta0=-30.0,
        algorithm=algorithm,
        max_steps=max_steps,
        initial_weight=InitialWeight.chebyshev(-30.0),
    )
    return SynthesisScenario(ArrayModel.ula(16), mask, config)


def flat_top_scenario(algorithm="c2word", max_steps: int = 500) -> SynthesisScenario:
    """Flat 0 dB top on [-25, 25] deg, -35 dB on [60, 75] deg, -25 dB elsewhere."""
    mask = PatternMask(
        (
            MaskRegion(-25.0, 25.0, 0.0, RegionKind.MAINLOBE_TARGET),
            MaskRegion(60.0, 75.0, -35.0),
        ),
        default_sidelobe_db=-25.0,
    )
    config = SynthesisConfig(
        theta0=0.0,
        algorithm=algorithm,
        max_steps=max_steps,
        transition_deg=12.0,
        selection=SelectionPolicy.ALTERNATE,
    )
    return SynthesisScenario(flat_top_array(), mask, config)


SCENARIOS = {
    "dipole-control": control_scenario,
    "ula": ula_notch_scenario,
    "flat-top": flat_top_scenario,
}
