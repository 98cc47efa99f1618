"""Pipelines of lossy and amplifying elements
==========================================

A :class:`PipelineSpec` is an input state followed by an ordered list of
elements, each bound to some of the modes. :func:`run_pipeline` folds
:func:`qgls.gaussian.apply_device` over the elements.

The module also holds the scalar quantities attached to gain (thermal
occupation, effective temperature) and the classical check of the
parity-time condition ``n(-x) = n*(x)`` on a refractive-index profile.
"""

from dataclasses import dataclass
from dataclasses import field
from typing import Callable
from typing import Iterable
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np

from qgls import device as _device
from qgls import gaussian
from qgls.caveat import caveat
from qgls.config import NATURAL_UNITS
from qgls.config import Units
from qgls.config import resolve_tol
from qgls.errors import AsymmetricSampling
from qgls.errors import DimensionMismatch
from qgls.errors import DomainError
from qgls.errors import SubunityGain
from qgls.errors import ValidationError

INPUT_KINDS = ("coherent", "displaced_thermal")


def loss(t: complex, tol: Optional[float] = None) -> _device.DeviceSpec:
    """Single-mode absorbing element with transmission coefficient ``t``, ``|t| <= 1``."""
    return _device.loss_device([[t]], tol)


def gain(g: complex, tol: Optional[float] = None) -> _device.DeviceSpec:
    """Single-mode amplifying element with gain coefficient ``g``, ``|g| >= 1``."""
    return _device.gain_device([[g]], tol)


@dataclass(frozen=True, eq=False)
class Element:
    device: _device.DeviceSpec
    modes: Tuple[int, ...]
    label: str = ""

    def __post_init__(self):
        modes = tuple(int(m) for m in self.modes)
        if len(modes) != self.device.dim:
            raise DimensionMismatch(
                "{0}: a {1}-mode device is bound to {2} modes".format(
                    self.label or "element", self.device.dim, len(modes)
                )
            )
        object.__setattr__(self, "modes", modes)


@dataclass(frozen=True)
class InputSpec:
    """Declaration of the input state.

    ``kind`` is ``"coherent"`` or ``"displaced_thermal"``; ``nbar`` holds one
    occupation per mode and is ignored for coherent inputs.
    """

    kind: str
    amplitudes: Tuple[complex, ...]
    nbar: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in INPUT_KINDS:
            raise ValidationError("input kind must be one of {0}, got {1!r}".format(INPUT_KINDS, self.kind))
        amplitudes = tuple(complex(a) for a in self.amplitudes)
        nbar = tuple(float(n) for n in self.nbar) or (0.0,) * len(amplitudes)
        if len(nbar) == 1 and len(amplitudes) > 1:
            nbar = nbar * len(amplitudes)
        if len(nbar) != len(amplitudes):
            raise DimensionMismatch("{0} occupations for {1} modes".format(len(nbar), len(amplitudes)))
        object.__setattr__(self, "amplitudes", amplitudes)
        object.__setattr__(self, "nbar", nbar)

    @property
    def num_modes(self) -> int:
        return len(self.amplitudes)

    def build(self) -> gaussian.GaussianState:
        if self.kind == "coherent":
            return gaussian.coherent_state(self.amplitudes)
        return gaussian.displaced_thermal_state(self.amplitudes, self.nbar)


@dataclass(frozen=True, eq=False)
class PipelineSpec:
    modes: int
    input: InputSpec
    elements: Tuple[Element, ...] = field(default_factory=tuple)
    omega: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if self.input.num_modes != self.modes:
            raise DimensionMismatch(
                "input declares {0} modes, pipeline has {1}".format(self.input.num_modes, self.modes)
            )
        if not self.omega > 0:
            raise DomainError("omega must be positive, got {0}".format(self.omega))
        for index, element in enumerate(self.elements):
            name = element.label or "element {0}".format(index)
            if len(set(element.modes)) != len(element.modes):
                raise DimensionMismatch("{0}: repeated mode in {1}".format(name, list(element.modes)))
            for m in element.modes:
                if not 0 <= m < self.modes:
                    raise DimensionMismatch("{0}: mode {1} outside 0..{2}".format(name, m, self.modes - 1))

    def initial_state(self) -> gaussian.GaussianState:
        return self.input.build()

    def gain_elements(self) -> List[Tuple[int, Element]]:
        return [(i, e) for i, e in enumerate(self.elements) if e.device.sigma == _device.AMPLIFYING]


def stages(p: PipelineSpec) -> List[gaussian.GaussianState]:
    """Input state followed by the state after every element."""
    states = [p.initial_state()]
    for element in p.elements:
        states.append(gaussian.apply_device(states[-1], element.device, element.modes))
    return states


def run_pipeline(p: PipelineSpec) -> gaussian.GaussianState:
    return stages(p)[-1]


def thermal_occupation(G: complex) -> float:
    """Mean thermal photon number ``|G|² - 1`` added by a gain ``G``."""
    G = abs(complex(G))
    if G < 1.0:
        raise SubunityGain("gain {0} is below one".format(G))
    return G * G - 1.0


def inferred_occupation(state: gaussian.GaussianState, mode: int = 0) -> float:
    """Thermal occupation read off a phase-insensitive covariance, ``(4 V_xx - 1) / 2``."""
    return float((4.0 * state.cov[2 * mode, 2 * mode] - 1.0) / 2.0)


def bose_einstein(omega: float, temperature: float, units: Units = NATURAL_UNITS) -> float:
    if temperature < 0 or omega <= 0:
        raise DomainError("need omega > 0 and temperature >= 0")
    if temperature == 0:
        return 0.0
    return float(1.0 / np.expm1(units.hbar * omega / (units.k_B * temperature)))


def _check_transmission(T_loss: float, omega: float) -> float:
    T_loss = abs(complex(T_loss))
    if not 0.0 < T_loss < 1.0:
        raise DomainError("transmission must lie in (0, 1), got {0}".format(T_loss))
    if not omega > 0:
        raise DomainError("omega must be positive, got {0}".format(omega))
    return T_loss


def effective_temperature(T_loss: float, omega: float = 1.0, units: Units = NATURAL_UNITS) -> float:
    """Temperature whose Bose-Einstein occupation at ``omega`` is ``1/T² - 1``.

    ``T_eff = -ħω / (k_B ln(1 - T²))``; this is the noise temperature of a gain
    ``G = 1/T`` that undoes a loss ``T``. It diverges as ``T -> 0`` and vanishes
    as ``T -> 1``.
    """
    T_loss = _check_transmission(T_loss, omega)
    return float(-units.hbar * omega / (units.k_B * np.log1p(-T_loss * T_loss)))


@caveat(
    reason="The logarithm appears as a factor. The result has the dimension of a temperature "
    "but its Bose-Einstein occupation is not the thermal occupation 1/T² - 1 added by the gain.",
    reference="effective_temperature",
)
def effective_temperature_literal(T_loss: float, omega: float = 1.0, units: Units = NATURAL_UNITS) -> float:
    """``T_eff = -(ħω/k_B) ln(1 - T²)`` as typeset."""
    T_loss = _check_transmission(T_loss, omega)
    return float(-units.hbar * omega / units.k_B * np.log1p(-T_loss * T_loss))


def coherent_output(spec: _device.DeviceSpec, alpha) -> gaussian.GaussianState:
    """Closed-form output of one element fed the coherent state ``alpha``.

    With the device in its vacuum state the output has mean ``T a0`` and
    covariance ``(TT⁺ + AA⁺)/4``: ``I/4`` (a coherent state) for loss and
    ``(2TT⁺ - I)/4`` (a displaced thermal state) for gain.
    """
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    if alpha.size != spec.dim:
        raise DimensionMismatch("{0} amplitudes for a {1}-mode device".format(alpha.size, spec.dim))
    noise = spec.T @ spec.T.conj().T + spec.A @ spec.A.conj().T
    return gaussian.GaussianState(mean=spec.T @ alpha, cov=_device.complex_to_real(noise).real / 4.0)


@dataclass(frozen=True, eq=False)
class IndexProfile:
    """Complex refractive index sampled at positions symmetric about ``x = 0``."""

    positions: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        positions = np.asarray(self.positions, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if positions.ndim != 1 or positions.shape != values.shape or positions.size == 0:
            raise DimensionMismatch("positions and values must be matching non-empty 1-D sequences")
        order = np.argsort(positions, kind="stable")
        object.__setattr__(self, "positions", positions[order])
        object.__setattr__(self, "values", values[order])

    def mirror_indices(self, tol: float) -> np.ndarray:
        """Index of the sample at ``-x`` for every sample ``x``."""
        xs = self.positions
        idx = np.array([int(np.argmin(np.abs(xs + x))) for x in xs], dtype=int)
        gap = np.abs(xs[idx] + xs)
        bad = gap > tol * np.maximum(1.0, np.abs(xs))
        if np.any(bad):
            raise AsymmetricSampling("no sample at -x for x = {0}".format(xs[bad].tolist()))
        return idx


def sample_profile(func: Callable[[float], complex], xs: Iterable[float]) -> IndexProfile:
    """Sample ``func`` at every ``x`` in ``xs`` and at its mirror image."""
    positions = sorted({float(x) for x in xs} | {-float(x) for x in xs})
    return IndexProfile(positions=positions, values=[func(x) for x in positions])


@dataclass(frozen=True)
class PTReport:
    residual: float
    real_part_residual: float
    imag_part_residual: float
    real_part_symmetric: bool
    imag_part_antisymmetric: bool
    pt_symmetric: bool

    def to_dict(self) -> dict:
        return {
            "residual": self.residual,
            "real_part_residual": self.real_part_residual,
            "imag_part_residual": self.imag_part_residual,
            "real_part_symmetric": self.real_part_symmetric,
            "imag_part_antisymmetric": self.imag_part_antisymmetric,
            "pt_symmetric": self.pt_symmetric,
        }


def check_pt_profile(profile: IndexProfile, tol: Optional[float] = None) -> PTReport:
    """Check ``n(-x) = n*(x)`` on every sample.

    The real part must be symmetric and the imaginary part antisymmetric;
    residuals are maxima over the samples, compared to ``tol * max(1, max|n|)``.
    """
    tol = resolve_tol(tol)
    mirror = profile.mirror_indices(tol)
    n, n_mirror = profile.values, profile.values[mirror]
    residual = float(np.max(np.abs(n_mirror - n.conj())))
    real_residual = float(np.max(np.abs(n_mirror.real - n.real)))
    imag_residual = float(np.max(np.abs(n_mirror.imag + n.imag)))
    bound = tol * max(1.0, float(np.max(np.abs(n))))
    real_ok, imag_ok = real_residual <= bound, imag_residual <= bound
    return PTReport(
        residual=residual,
        real_part_residual=real_residual,
        imag_part_residual=imag_residual,
        real_part_symmetric=real_ok,
        imag_part_antisymmetric=imag_ok,
        pt_symmetric=real_ok and imag_ok and residual <= bound,
    )


def bind(device: _device.DeviceSpec, modes: Sequence[int] = (0,), label: str = "") -> Element:
    return Element(device=device, modes=tuple(modes), label=label)
