"""Lossy and amplifying devices
============================

A linear N-port element at a fixed frequency maps input field operators
``a`` to output operators ``b = T a + A d``. The transmission matrix ``T`` and
the noise matrix ``A`` satisfy ``TT⁺ + σAA⁺ = I`` where ``σ = +1`` for an
absorbing element (``d`` are device annihilation operators) and ``σ = -1`` for
an amplifying one (``d`` are device creation operators).

The :func:`dilation` of an element is the matrix ``Λ`` acting on field and
device operators together. It satisfies ``ΛJΛ⁺ = J`` with the metric
``J = diag(I, σI)``, i.e. it is unitary for loss and pseudo-unitary for gain.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from qgls import numerics
from qgls.config import resolve_tol
from qgls.errors import ConstraintViolated
from qgls.errors import DimensionMismatch
from qgls.errors import GainNotLoss
from qgls.errors import LossNotGain

ABSORBING = +1
AMPLIFYING = -1


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DeviceSpec:
    """Transmission matrix, noise matrix and signature of one element.

    Instances are normally built with :func:`loss_device`, :func:`gain_device`
    or :func:`device_from_matrices`, which guarantee admissibility.
    """

    T: np.ndarray
    A: np.ndarray
    sigma: int

    def __post_init__(self):
        object.__setattr__(self, "T", _frozen(numerics.as_matrix(self.T, "T")))
        object.__setattr__(self, "A", _frozen(numerics.as_matrix(self.A, "A")))
        object.__setattr__(self, "sigma", int(self.sigma))

    @property
    def dim(self) -> int:
        return self.T.shape[0]

    @property
    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.T, compute_uv=False)

    def is_noiseless(self, tol: Optional[float] = None) -> bool:
        return numerics.spectral_norm(self.A) <= resolve_tol(tol)

    @property
    def kind(self) -> str:
        """``"gain"``, ``"loss"`` or ``"lossless"``."""
        if self.is_noiseless():
            return "lossless"
        return "gain" if self.sigma == AMPLIFYING else "loss"


@dataclass(frozen=True)
class ValidationReport:
    residual: float
    sv_min: float
    sv_max: float
    sigma: int
    passed: bool
    message: str = ""

    def to_dict(self) -> dict:
        return {
            "residual": self.residual,
            "singular_values": [self.sv_min, self.sv_max],
            "sigma": self.sigma,
            "passed": self.passed,
            "message": self.message,
        }


def validate_device(spec: DeviceSpec, tol: Optional[float] = None) -> ValidationReport:
    """Evaluate ``‖TT⁺ + σAA⁺ - I‖`` and the singular values of ``T``.

    The report passes when the residual is within ``tol`` (relative to
    ``max(1, ‖TT⁺‖)``) and every singular value lies on the side of one that
    the signature demands.
    """
    tol = resolve_tol(tol)
    T, A, sigma = spec.T, spec.A, spec.sigma
    if T.shape[0] != T.shape[1] or A.shape != T.shape:
        raise DimensionMismatch("T {0} and A {1} must be square of the same size".format(T.shape, A.shape))
    TTh = T @ T.conj().T
    residual = numerics.spectral_norm(TTh + sigma * (A @ A.conj().T) - np.eye(spec.dim))
    svs = spec.singular_values
    sv_min, sv_max = float(svs.min()), float(svs.max())
    messages = []
    if sigma not in (ABSORBING, AMPLIFYING):
        messages.append("sigma must be +1 or -1, got {0}".format(sigma))
    if residual > tol * max(1.0, numerics.spectral_norm(TTh)):
        messages.append("constraint residual {0:.3e}".format(residual))
    if sigma == ABSORBING and sv_max > 1.0 + tol:
        messages.append("absorbing element with singular value {0:.6g} > 1".format(sv_max))
    if sigma == AMPLIFYING and sv_min < 1.0 - tol:
        messages.append("amplifying element with singular value {0:.6g} < 1".format(sv_min))
    return ValidationReport(
        residual=residual,
        sv_min=sv_min,
        sv_max=sv_max,
        sigma=sigma,
        passed=not messages,
        message="; ".join(messages),
    )


def device_from_matrices(T, A, sigma: int, tol: Optional[float] = None) -> DeviceSpec:
    spec = DeviceSpec(T=T, A=A, sigma=sigma)
    report = validate_device(spec, tol)
    if not report.passed:
        raise ConstraintViolated(report.message)
    return spec


def loss_device(T, tol: Optional[float] = None) -> DeviceSpec:
    """Absorbing element with ``A = sqrt(I - TT⁺)``."""
    tol = resolve_tol(tol)
    T = numerics.as_matrix(T, "T")
    if T.shape[0] != T.shape[1]:
        raise DimensionMismatch("T must be square, got shape {0}".format(T.shape))
    sv_max = float(np.linalg.svd(T, compute_uv=False).max())
    if sv_max > 1.0 + tol:
        raise GainNotLoss("singular value {0:.6g} exceeds 1".format(sv_max))
    A = numerics.hermitian_sqrt(np.eye(T.shape[0]) - T @ T.conj().T, tol)
    return device_from_matrices(T, A, ABSORBING, tol)


def gain_device(T, tol: Optional[float] = None) -> DeviceSpec:
    """Amplifying element with ``A = sqrt(TT⁺ - I)``."""
    tol = resolve_tol(tol)
    T = numerics.as_matrix(T, "T")
    if T.shape[0] != T.shape[1]:
        raise DimensionMismatch("T must be square, got shape {0}".format(T.shape))
    sv_min = float(np.linalg.svd(T, compute_uv=False).min())
    if sv_min < 1.0 - tol:
        raise LossNotGain("singular value {0:.6g} is below 1".format(sv_min))
    A = numerics.hermitian_sqrt(T @ T.conj().T - np.eye(T.shape[0]), tol)
    return device_from_matrices(T, A, AMPLIFYING, tol)


def unitary_device(U, tol: Optional[float] = None) -> DeviceSpec:
    """Lossless element; ``U`` must be unitary."""
    tol = resolve_tol(tol)
    U = numerics.as_matrix(U, "U")
    if U.shape[0] != U.shape[1]:
        raise DimensionMismatch("U must be square, got shape {0}".format(U.shape))
    defect = numerics.spectral_norm(U @ U.conj().T - np.eye(U.shape[0]))
    if defect > tol:
        raise ConstraintViolated("matrix is not unitary (defect {0:.3e})".format(defect))
    return device_from_matrices(U, np.zeros_like(U), ABSORBING, tol)


def beam_splitter(t: float, phase: float = 0.0, tol: Optional[float] = None) -> DeviceSpec:
    """Lossless four-port with amplitude transmissivity ``t``."""
    if not 0.0 <= t <= 1.0:
        raise ConstraintViolated("beam splitter transmissivity must lie in [0, 1], got {0}".format(t))
    r = np.sqrt(1.0 - t * t)
    U = np.array([[t, -np.exp(-1j * phase) * r], [np.exp(1j * phase) * r, t]])
    return unitary_device(U, tol)


def phase_shift(phi: float) -> DeviceSpec:
    return unitary_device([[np.exp(1j * phi)]])


@dataclass(frozen=True, eq=False)
class Dilation:
    """Field plus device map ``Λ`` with its metric ``J``."""

    Lambda: np.ndarray
    J: np.ndarray
    sigma: int

    @property
    def dim(self) -> int:
        """Number of field modes ``N``; ``Λ`` is ``2N x 2N``."""
        return self.Lambda.shape[0] // 2

    def inverse(self) -> np.ndarray:
        return self.J @ self.Lambda.conj().T @ self.J

    def pseudo_unitarity_residual(self) -> float:
        return numerics.spectral_norm(self.Lambda @ self.J @ self.Lambda.conj().T - self.J)


def metric(n: int, sigma: int) -> np.ndarray:
    return np.diag(np.concatenate([np.ones(n), sigma * np.ones(n)])).astype(complex)


def dilation(spec: DeviceSpec, tol: Optional[float] = None) -> Dilation:
    """Build ``Λ = [[T, A], [-σSC⁻¹T, CS⁻¹A]]`` with ``C = sqrt(TT⁺)``, ``S = sqrt(AA⁺)``.

    Inverses are pseudoinverses. On the null space of ``S`` the lower-right
    block is completed with the polar factor of ``A`` (the identity for a
    Hermitian ``A``), and on the null space of ``C`` the lower-left block with
    the polar factor of ``T``, so that ``ΛJΛ⁺ = J`` holds for singular
    elements too. For a noiseless element this gives ``Λ = T ⊕ I``.
    """
    tol = resolve_tol(tol)
    report = validate_device(spec, tol)
    if not report.passed:
        raise ConstraintViolated(report.message)
    T, A, sigma, n = spec.T, spec.A, spec.sigma, spec.dim
    eye = np.eye(n)
    C = numerics.hermitian_sqrt(T @ T.conj().T, tol)
    S = numerics.hermitian_sqrt(A @ A.conj().T, tol)
    null_C = eye - numerics.range_projector(C, tol)
    null_S = eye - numerics.range_projector(S, tol)
    # the null-space terms vanish when C and S are invertible
    lower_left = -sigma * (S @ numerics.regularized_inverse(C, tol) @ T + null_C @ numerics.polar_unitary(T, tol))
    lower_right = C @ numerics.regularized_inverse(S, tol) @ A + null_S @ numerics.polar_unitary(A, tol)
    Lambda = np.block([[T, A], [lower_left, lower_right]])
    result = Dilation(Lambda=_frozen(Lambda), J=_frozen(metric(n, sigma)), sigma=sigma)
    residual = result.pseudo_unitarity_residual()
    if residual > 1e3 * tol * max(1.0, numerics.spectral_norm(Lambda)) ** 2:
        raise ConstraintViolated("dilation is not pseudo-unitary (residual {0:.3e})".format(residual))
    return result


def complex_to_real(M) -> np.ndarray:
    """Real representation of a complex matrix acting on ``a = x + ip``.

    Quadratures are interleaved as ``(x1, p1, x2, p2, ...)``.
    """
    M = np.asarray(M, dtype=complex)
    return np.kron(M.real, np.eye(2)) + np.kron(M.imag, np.array([[0.0, -1.0], [1.0, 0.0]]))


def symplectic_form(n: int) -> np.ndarray:
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def conjugation_reflection(n: int, sigma: int) -> np.ndarray:
    """Map from device quadratures to the quadratures of ``d``.

    For gain ``d = g†``, i.e. ``p -> -p`` on every device mode.
    """
    field = np.ones(2 * n)
    device = np.tile([1.0, float(sigma)], n)
    return np.diag(np.concatenate([field, device]))


def dilation_symplectic(dil: Dilation) -> np.ndarray:
    """Real ``4N x 4N`` map on the quadratures of field and device modes.

    The result is symplectic with respect to :func:`symplectic_form`.
    """
    R = conjugation_reflection(dil.dim, dil.sigma)
    return R @ complex_to_real(dil.Lambda) @ R
