"""Gaussian states
===============

N-mode Gaussian states in symmetric (Wigner) ordering.

A state is its complex mean vector ``a`` (one amplitude per mode, ``a = x + ip``)
and its real ``2N x 2N`` quadrature covariance ordered ``(x1, p1, ..., xN, pN)``.

.. note::

    The vacuum quadrature variance is ``1/4``. This is the convention in which a
    coherent state ``|a0⟩`` has the Wigner function
    ``W(a) = (2/π) exp(-2|a - a0|²)``. Do not mix it with the variance ``1/2``
    (ħ = 1) or ``1`` (ħ = 2) conventions used by other toolkits.

Devices act through :func:`apply_device`: the state is extended with the
device modes, pushed through the real form of the dilation and the device
quadratures are dropped again.
"""

import csv
import io
import json
from dataclasses import dataclass
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np

from qgls import device as _device
from qgls.config import ADMISSIBILITY_TOL
from qgls.config import VACUUM_VARIANCE
from qgls.errors import DimensionMismatch
from qgls.errors import EmptyWindow
from qgls.errors import InadmissibleState
from qgls.errors import NegativeOccupation


def _quadrature_indices(modes: Sequence[int]) -> np.ndarray:
    return np.array([2 * m + q for m in modes for q in (0, 1)], dtype=int)


@dataclass(frozen=True, eq=False)
class GaussianState:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.atleast_1d(np.array(self.mean, dtype=complex))
        cov = np.atleast_2d(np.array(self.cov, dtype=float))
        if mean.ndim != 1 or cov.shape != (2 * mean.size, 2 * mean.size):
            raise DimensionMismatch(
                "covariance of shape {0} does not match {1} modes".format(cov.shape, mean.size)
            )
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise DimensionMismatch("state has non-finite entries")
        if not np.allclose(cov, cov.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(cov).max())):
            raise DimensionMismatch("covariance matrix is not symmetric")
        cov = 0.5 * (cov + cov.T)
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @classmethod
    def from_xp(cls, mean_xp, cov) -> "GaussianState":
        mean_xp = np.asarray(mean_xp, dtype=float)
        return cls(mean=mean_xp[0::2] + 1j * mean_xp[1::2], cov=cov)

    @property
    def num_modes(self) -> int:
        return self.mean.size

    @property
    def mean_xp(self) -> np.ndarray:
        out = np.empty(2 * self.num_modes)
        out[0::2] = self.mean.real
        out[1::2] = self.mean.imag
        return out

    def reduced(self, modes: Sequence[int]) -> "GaussianState":
        """Marginal state of ``modes`` (Gaussian marginalization)."""
        modes = _check_modes(modes, self.num_modes)
        q = _quadrature_indices(modes)
        return GaussianState(mean=self.mean[list(modes)], cov=self.cov[np.ix_(q, q)])

    def tensor(self, other: "GaussianState") -> "GaussianState":
        n, m = 2 * self.num_modes, 2 * other.num_modes
        cov = np.zeros((n + m, n + m))
        cov[:n, :n] = self.cov
        cov[n:, n:] = other.cov
        return GaussianState(mean=np.concatenate([self.mean, other.mean]), cov=cov)

    def to_dict(self) -> dict:
        return {
            "modes": self.num_modes,
            "mean": [[float(a.real), float(a.imag)] for a in self.mean],
            "cov": [[float(v) for v in row] for row in self.cov],
        }


def _check_modes(modes: Sequence[int], num_modes: int) -> Tuple[int, ...]:
    modes = tuple(int(m) for m in modes)
    if len(set(modes)) != len(modes):
        raise DimensionMismatch("repeated mode in {0}".format(list(modes)))
    for m in modes:
        if not 0 <= m < num_modes:
            raise DimensionMismatch("mode {0} is outside a {1}-mode state".format(m, num_modes))
    return modes


def coherent_state(alpha) -> GaussianState:
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    return GaussianState(mean=alpha, cov=VACUUM_VARIANCE * np.eye(2 * alpha.size))


def vacuum_state(num_modes: int = 1) -> GaussianState:
    return coherent_state(np.zeros(num_modes))


def displaced_thermal_state(alpha, nbar) -> GaussianState:
    """Thermal state with mean occupation ``nbar`` displaced to ``alpha``.

    ``nbar`` is either one value for every mode or one value per mode.
    """
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    nbar = np.broadcast_to(np.asarray(nbar, dtype=float), alpha.shape)
    if np.any(nbar < 0):
        raise NegativeOccupation("mean occupation must be non-negative, got {0}".format(nbar.tolist()))
    variances = np.repeat((2.0 * nbar + 1.0) * VACUUM_VARIANCE, 2)
    return GaussianState(mean=alpha, cov=np.diag(variances))


def thermal_state(nbar, num_modes: int = 1) -> GaussianState:
    return displaced_thermal_state(np.zeros(num_modes), nbar)


def symplectic_eigenvalues(state: GaussianState) -> np.ndarray:
    omega = _device.symplectic_form(state.num_modes)
    nu = np.sort(np.abs(np.linalg.eigvals(1j * omega @ state.cov)))
    return nu[0::2]


def is_admissible(state: GaussianState, tol: float = ADMISSIBILITY_TOL) -> bool:
    """Uncertainty principle: every symplectic eigenvalue is at least ``1/4``."""
    return bool(symplectic_eigenvalues(state).min() >= VACUUM_VARIANCE - tol)


def require_admissible(state: GaussianState, tol: float = ADMISSIBILITY_TOL) -> GaussianState:
    nu_min = symplectic_eigenvalues(state).min()
    if nu_min < VACUUM_VARIANCE - tol:
        raise InadmissibleState("symplectic eigenvalue {0:.6g} is below the vacuum level 1/4".format(nu_min))
    return state


def apply_device(
    state: GaussianState,
    spec: _device.DeviceSpec,
    modes: Optional[Sequence[int]] = None,
    device_state: Optional[GaussianState] = None,
    tol: Optional[float] = None,
) -> GaussianState:
    """Send the ``modes`` of ``state`` through ``spec``.

    The device starts in ``device_state`` (vacuum by default). For gain the
    device input is ``d = g†``, realized as ``p -> -p`` on the device
    quadratures, so a device amplitude ``g0`` enters as ``conj(g0)``.
    """
    if modes is None:
        modes = range(spec.dim)
    modes = _check_modes(modes, state.num_modes)
    if len(modes) != spec.dim:
        raise DimensionMismatch("a {0}-mode device cannot act on modes {1}".format(spec.dim, list(modes)))
    require_admissible(state)
    if device_state is None:
        device_state = vacuum_state(spec.dim)
    elif device_state.num_modes != spec.dim:
        raise DimensionMismatch("device state has {0} modes, expected {1}".format(device_state.num_modes, spec.dim))
    else:
        require_admissible(device_state)

    n = state.num_modes
    extended = state.tensor(device_state)
    block = _device.dilation_symplectic(_device.dilation(spec, tol))
    q = _quadrature_indices(list(modes) + list(range(n, n + spec.dim)))
    M = np.eye(2 * (n + spec.dim))
    M[np.ix_(q, q)] = block

    mean = M @ extended.mean_xp
    cov = M @ extended.cov @ M.T
    return GaussianState.from_xp(mean[: 2 * n], cov[: 2 * n, : 2 * n])


def purity(state: GaussianState) -> float:
    """``Tr ρ² = 1 / (4^N sqrt(det V))``."""
    sign, logdet = np.linalg.slogdet(state.cov)
    if sign <= 0:
        raise InadmissibleState("covariance matrix is not positive definite")
    return float(np.exp(-state.num_modes * np.log(4.0) - 0.5 * logdet))


def mean_photon(state: GaussianState, mode: int = 0) -> float:
    (mode,) = _check_modes([mode], state.num_modes)
    V = state.cov
    a = state.mean[mode]
    return float(V[2 * mode, 2 * mode] + V[2 * mode + 1, 2 * mode + 1] + abs(a) ** 2 - 0.5)


def _wigner_values(state: GaussianState, mode: int, x, p) -> np.ndarray:
    marginal = state.reduced([mode])
    V = marginal.cov
    a = marginal.mean[0]
    inv = np.linalg.inv(V)
    dx = np.asarray(x, dtype=float) - a.real
    dp = np.asarray(p, dtype=float) - a.imag
    quad = inv[0, 0] * dx * dx + 2.0 * inv[0, 1] * dx * dp + inv[1, 1] * dp * dp
    return np.exp(-0.5 * quad) / (2.0 * np.pi * np.sqrt(np.linalg.det(V)))


def wigner_point(state: GaussianState, alpha: complex, mode: int = 0) -> float:
    """Marginal Wigner function of ``mode`` at ``alpha``."""
    require_admissible(state)
    alpha = complex(alpha)
    return float(_wigner_values(state, mode, alpha.real, alpha.imag))


@dataclass(frozen=True, eq=False)
class WignerGrid:
    """Samples of a single-mode Wigner function, indexed ``values[i_x, i_p]``."""

    mode: int
    xrange: Tuple[float, float]
    prange: Tuple[float, float]
    samples: Tuple[int, int]
    values: np.ndarray

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.xrange[0], self.xrange[1], self.samples[0])

    @property
    def ps(self) -> np.ndarray:
        return np.linspace(self.prange[0], self.prange[1], self.samples[1])

    @property
    def cell_area(self) -> float:
        """Area of one grid cell; zero along an axis with a single sample."""
        (nx, np_), (x0, x1), (p0, p1) = self.samples, self.xrange, self.prange
        dx = (x1 - x0) / (nx - 1) if nx > 1 else 0.0
        dp = (p1 - p0) / (np_ - 1) if np_ > 1 else 0.0
        return dx * dp

    def riemann_sum(self) -> float:
        return float(self.values.sum() * self.cell_area)

    def peak(self) -> Tuple[float, float, float]:
        """``(x, p, w)`` at the largest sample."""
        i, j = np.unravel_index(np.argmax(self.values), self.values.shape)
        return float(self.xs[i]), float(self.ps[j]), float(self.values[i, j])

    def rows(self):
        xs, ps = self.xs, self.ps
        for i, x in enumerate(xs):
            for j, p in enumerate(ps):
                yield float(x), float(p), float(self.values[i, j])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "p", "w"])
        for row in self.rows():
            writer.writerow([repr(v) for v in row])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "xrange": [float(v) for v in self.xrange],
            "prange": [float(v) for v in self.prange],
            "samples": [int(v) for v in self.samples],
            "values": [float(v) for v in self.values.ravel()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def wigner(
    state: GaussianState,
    mode: int = 0,
    xrange: Tuple[float, float] = (-6.0, 6.0),
    prange: Tuple[float, float] = (-6.0, 6.0),
    samples: Tuple[int, int] = (121, 121),
) -> WignerGrid:
    """Sample the marginal Wigner function of ``mode`` on a rectangular grid.

    ``W(r) = exp(-δᵀV⁻¹δ/2) / (2π sqrt(det V))``; the vacuum peaks at ``2/π``.
    """
    require_admissible(state)
    nx, np_ = (int(s) for s in samples)
    for name, (lo, hi), n in (("x", xrange, nx), ("p", prange, np_)):
        if n < 1:
            raise EmptyWindow("{0} axis needs at least one sample, got {1}".format(name, n))
        if hi < lo or (hi == lo and n > 1):
            raise EmptyWindow("{0} range {1}:{2} is empty".format(name, lo, hi))
    X, P = np.meshgrid(
        np.linspace(xrange[0], xrange[1], nx),
        np.linspace(prange[0], prange[1], np_),
        indexing="ij",
    )
    values = _wigner_values(state, mode, X, P)
    values.setflags(write=False)
    return WignerGrid(
        mode=int(mode),
        xrange=(float(xrange[0]), float(xrange[1])),
        prange=(float(prange[0]), float(prange[1])),
        samples=(nx, np_),
        values=values,
    )
