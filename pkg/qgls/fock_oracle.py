"""Truncated Fock-space oracle
===========================

Brute-force density-matrix simulation in the photon-number basis, used to
validate the Gaussian engine independently.

Loss and gain are realized as explicit unitary dilations with a vacuum
ancilla, a beam splitter for loss and a two-mode squeezer for gain, followed
by a partial trace over the ancilla. The ancilla is traced out as soon as a
channel has been applied, which is done through the Kraus operators
``E_k = ⟨k|U|0⟩``. Both unitaries are obtained by exponentiating their
truncated generators one conserved photon-number block at a time.

Every state carries the probability mass it lost to truncation. Operations
raise :class:`~qgls.errors.TruncationOverflow` when the accumulated leak
exceeds their ``bound``; pass ``bound=None`` to get a
:class:`~qgls.errors.TruncationWarning` instead.
"""

import warnings
from dataclasses import dataclass
from dataclasses import field
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np
import scipy.linalg

from qgls import device as _device
from qgls import gaussian
from qgls import numerics
from qgls.config import DEFAULT_LEAK_BOUND
from qgls.errors import DimensionMismatch
from qgls.errors import DomainError
from qgls.errors import InadmissibleState
from qgls.errors import NegativeOccupation
from qgls.errors import TruncationOverflow
from qgls.errors import TruncationWarning


@dataclass(frozen=True)
class TruncationReport:
    leak: float
    max_occupancy: int

    def to_dict(self) -> dict:
        return {"leak": self.leak, "max_occupancy": self.max_occupancy}


@dataclass(frozen=True, eq=False)
class FockState:
    """Density operator of ``num_modes`` modes, each truncated to ``dim`` levels."""

    rho: np.ndarray
    dim: int
    num_modes: int = 1
    leak: float = 0.0

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        size = self.dim**self.num_modes
        if rho.shape != (size, size):
            raise DimensionMismatch(
                "density matrix {0} does not fit {1} modes of dimension {2}".format(rho.shape, self.num_modes, self.dim)
            )
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "leak", max(0.0, float(self.leak)))

    def tensor(self) -> np.ndarray:
        return self.rho.reshape((self.dim,) * (2 * self.num_modes))

    @property
    def trace(self) -> float:
        return float(np.trace(self.rho).real)

    def populations(self, mode: int = 0) -> np.ndarray:
        return np.diag(partial_trace(self, [mode]).rho).real.copy()

    def truncation_report(self, threshold: float = 1e-15) -> TruncationReport:
        occupied = 0
        for mode in range(self.num_modes):
            levels = np.nonzero(self.populations(mode) > threshold)[0]
            if levels.size:
                occupied = max(occupied, int(levels[-1]))
        return TruncationReport(leak=self.leak, max_occupancy=occupied)


def check_fock(state: FockState, tol: float = 1e-8) -> List[str]:
    """Return the violated invariants of ``state`` (an empty list when valid)."""
    issues = []
    rho = state.rho
    if numerics.spectral_norm(rho - rho.conj().T) > 1e-10:
        issues.append("density matrix is not Hermitian")
    if abs(state.trace + state.leak - 1.0) > tol:
        issues.append("trace {0:.12g} plus leak {1:.3e} differs from 1".format(state.trace, state.leak))
    lowest = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    if lowest < -tol:
        issues.append("eigenvalue {0:.3e} is negative".format(lowest))
    return issues


def require_valid(state: FockState) -> FockState:
    issues = check_fock(state)
    if issues:
        raise InadmissibleState("; ".join(issues))
    return state


def _check_leak(state: FockState, bound: Optional[float]) -> FockState:
    if bound is None:
        if state.leak > DEFAULT_LEAK_BOUND:
            warnings.warn(
                "truncation leak {0:.3e} exceeds {1:.0e}".format(state.leak, DEFAULT_LEAK_BOUND),
                category=TruncationWarning,
                stacklevel=3,
            )
        return state
    if state.leak > bound:
        raise TruncationOverflow(
            "truncation leak {0:.3e} exceeds bound {1:.0e} at dim {2}; raise the dimension".format(
                state.leak, bound, state.dim
            ),
            report=state.truncation_report(),
        )
    return state


def _pure(psi: np.ndarray, dim: int, num_modes: int = 1) -> FockState:
    norm = float(np.vdot(psi, psi).real)
    return FockState(rho=np.outer(psi, psi.conj()), dim=dim, num_modes=num_modes, leak=1.0 - norm)


def _coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    c = np.empty(dim, dtype=complex)
    c[0] = np.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, dim):
        c[n] = c[n - 1] * alpha / np.sqrt(n)
    return c


def tensor_fock(*states: FockState) -> FockState:
    if not states:
        raise DimensionMismatch("nothing to combine")
    dim = states[0].dim
    if any(s.dim != dim for s in states):
        raise DimensionMismatch("all modes must share one truncation dimension")
    rho, kept = np.ones((1, 1), dtype=complex), 1.0
    for s in states:
        rho = np.kron(rho, s.rho)
        kept *= 1.0 - s.leak
    return FockState(rho=rho, dim=dim, num_modes=sum(s.num_modes for s in states), leak=1.0 - kept)


def coherent_fock(alpha, dim: int) -> FockState:
    """``|α⟩ = e^{-|α|²/2} Σ αⁿ/√n! |n⟩`` cut at ``dim`` levels, not renormalized.

    A sequence of amplitudes gives the product state of several modes.
    """
    if dim < 1:
        raise DimensionMismatch("dimension must be at least 1, got {0}".format(dim))
    alphas = np.atleast_1d(np.asarray(alpha, dtype=complex))
    modes = [_pure(_coherent_amplitudes(a, dim), dim) for a in alphas]
    return modes[0] if len(modes) == 1 else tensor_fock(*modes)


def vacuum_fock(num_modes: int = 1, dim: int = 1) -> FockState:
    return coherent_fock(np.zeros(num_modes), dim)


def number_fock(n: int, dim: int) -> FockState:
    if not 0 <= n < dim:
        raise DimensionMismatch("|{0}⟩ does not fit in dimension {1}".format(n, dim))
    psi = np.zeros(dim, dtype=complex)
    psi[n] = 1.0
    return _pure(psi, dim)


def thermal_fock(nbar: float, dim: int) -> FockState:
    if nbar < 0:
        raise NegativeOccupation("mean occupation must be non-negative, got {0}".format(nbar))
    if nbar == 0:
        return number_fock(0, dim)
    ratio = nbar / (nbar + 1.0)
    p = ratio ** np.arange(dim) / (nbar + 1.0)
    return FockState(rho=np.diag(p), dim=dim, leak=ratio**dim)


def _destroy(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)


def displaced_thermal_fock(alpha: complex, nbar: float, dim: int) -> FockState:
    """``D(α) ρ_th D(α)†``, computed on a doubled space and cut back to ``dim``."""
    if nbar == 0:
        return coherent_fock(alpha, dim)
    padded = 2 * dim
    a = _destroy(padded)
    D = scipy.linalg.expm(alpha * a.conj().T - np.conj(alpha) * a)
    rho = D @ thermal_fock(nbar, padded).rho @ D.conj().T
    rho = rho[:dim, :dim]
    return FockState(rho=rho, dim=dim, leak=1.0 - float(np.trace(rho).real))


def _apply_kraus(state: FockState, kraus: Sequence[np.ndarray], mode: int) -> FockState:
    n = state.num_modes
    t = state.tensor()
    out = np.zeros_like(t)
    for E in kraus:
        x = np.moveaxis(np.tensordot(E, t, axes=([1], [mode])), 0, mode)
        x = np.moveaxis(np.tensordot(x, E.conj(), axes=([n + mode], [1])), -1, n + mode)
        out += x
    rho = out.reshape(state.rho.shape)
    lost = state.trace - float(np.trace(rho).real)
    return FockState(rho=rho, dim=state.dim, num_modes=n, leak=state.leak + max(0.0, lost))


def _check_mode(state: FockState, mode: int) -> int:
    if not 0 <= mode < state.num_modes:
        raise DimensionMismatch("mode {0} is outside a {1}-mode state".format(mode, state.num_modes))
    return mode


def beam_splitter_kraus(t: float, dim: int) -> List[np.ndarray]:
    """Kraus operators of a beam splitter with transmissivity ``t`` and a vacuum ancilla.

    Total photon number is conserved, so ``θ(ab† - a†b)`` is exponentiated in
    each block ``{|n-j, j⟩}`` separately; blocks with ``n < dim`` are exact.
    """
    theta = np.arccos(np.clip(t, 0.0, 1.0))
    kraus = [np.zeros((dim, dim), dtype=complex) for _ in range(dim)]
    for n in range(dim):
        j = np.arange(n)
        coupling = theta * np.sqrt(n - j) * np.sqrt(j + 1)
        G = np.diag(coupling, -1) - np.diag(coupling, 1)
        column = scipy.linalg.expm(G)[:, 0]
        for k in range(n + 1):
            kraus[k][n - k, n] = column[k]
    return kraus


def two_mode_squeezer_kraus(g: float, dim: int, padded: Optional[int] = None) -> List[np.ndarray]:
    """Kraus operators of a two-mode squeezer with ``cosh r = g`` and a vacuum ancilla.

    ``r(a†b† - ab)`` conserves the photon-number difference; starting from
    ``|n, 0⟩`` the block ``{|n+j, j⟩}`` is exponentiated on ``padded`` levels
    (twice ``dim`` by default) and cut back to ``dim``. The discarded mass is
    the truncation leak.
    """
    padded = padded or 2 * dim
    r = np.arccosh(max(g, 1.0))
    kraus = [np.zeros((dim, dim), dtype=complex) for _ in range(dim)]
    for n in range(dim):
        size = padded - n
        j = np.arange(size - 1)
        coupling = r * np.sqrt(n + j + 1) * np.sqrt(j + 1)
        G = np.diag(coupling, -1) - np.diag(coupling, 1)
        column = scipy.linalg.expm(G)[:, 0]
        for k in range(dim - n):
            kraus[k][n + k, n] = column[k]
    return kraus


def loss_channel_fock(
    state: FockState, t: float, mode: int = 0, bound: Optional[float] = DEFAULT_LEAK_BOUND
) -> FockState:
    """Beam splitter with transmissivity ``t`` against a vacuum ancilla, ancilla traced out."""
    if not 0.0 <= t <= 1.0:
        raise DomainError("transmissivity must lie in [0, 1], got {0}".format(t))
    _check_mode(state, mode)
    require_valid(state)
    out = state if t == 1.0 else _apply_kraus(state, beam_splitter_kraus(t, state.dim), mode)
    return _check_leak(out, bound)


def gain_channel_fock(
    state: FockState, g: float, mode: int = 0, bound: Optional[float] = DEFAULT_LEAK_BOUND
) -> FockState:
    """Two-mode squeezer with ``cosh r = g`` against a vacuum ancilla, ancilla traced out."""
    if g < 1.0:
        raise DomainError("gain must be at least 1, got {0}".format(g))
    _check_mode(state, mode)
    require_valid(state)
    out = state if g == 1.0 else _apply_kraus(state, two_mode_squeezer_kraus(g, state.dim), mode)
    return _check_leak(out, bound)


def passive_fock(state: FockState, u, modes: Sequence[int], bound: Optional[float] = DEFAULT_LEAK_BOUND) -> FockState:
    """Apply the passive unitary with single-photon matrix ``u`` to ``modes``.

    Diagonal ``u`` become phase rotations. Otherwise ``i Σ H_ij a_i† a_j`` with
    ``u = exp(iH)`` is exponentiated on the whole truncated space; components
    with ``dim`` or more photons in the affected modes are dropped first and
    counted as leak.
    """
    u = numerics.as_matrix(u, "u")
    modes = [_check_mode(state, m) for m in modes]
    if u.shape != (len(modes), len(modes)):
        raise DimensionMismatch("{0} unitary for modes {1}".format(u.shape, modes))
    dim, n = state.dim, state.num_modes
    if numerics.spectral_norm(u - np.diag(np.diag(u))) <= 1e-14:
        phases = np.ones(dim**n, dtype=complex)
        counts = np.meshgrid(*([np.arange(dim)] * n), indexing="ij")
        for m, z in zip(modes, np.diag(u)):
            phases = phases * np.exp(1j * np.angle(z) * counts[m].ravel())
        rho = phases[:, None] * state.rho * phases.conj()[None, :]
        return _check_leak(FockState(rho=rho, dim=dim, num_modes=n, leak=state.leak), bound)

    H = -1j * scipy.linalg.logm(u)
    H = 0.5 * (H + H.conj().T)
    a_ops = []
    eye = np.eye(dim)
    for m in modes:
        factors = [eye] * n
        factors[m] = _destroy(dim)
        op = factors[0]
        for f in factors[1:]:
            op = np.kron(op, f)
        a_ops.append(op)
    generator = sum(1j * H[i, j] * a_ops[i].conj().T @ a_ops[j] for i in range(len(modes)) for j in range(len(modes)))
    U = scipy.linalg.expm(generator)

    # U only mixes within a fixed total photon number of the affected modes
    grids = np.meshgrid(*([np.arange(dim)] * n), indexing="ij")
    keep = sum(grids[m] for m in modes).ravel() < dim
    rho = state.rho * np.outer(keep, keep)
    lost = state.trace - float(np.trace(rho).real)
    rho = U @ rho @ U.conj().T
    return _check_leak(FockState(rho=rho, dim=dim, num_modes=n, leak=state.leak + max(0.0, lost)), bound)


def apply_device_fock(
    state: FockState,
    spec: _device.DeviceSpec,
    modes: Optional[Sequence[int]] = None,
    bound: Optional[float] = DEFAULT_LEAK_BOUND,
) -> FockState:
    """Apply any admissible element with its device modes in vacuum.

    With ``T = U Σ V⁺`` the channel is the passive ``V⁺``, one loss or gain
    channel per singular value, then the passive ``U``. The output depends on
    ``A`` only through ``AA⁺``, which is what this decomposition reproduces.
    """
    if modes is None:
        modes = range(spec.dim)
    modes = [_check_mode(state, m) for m in modes]
    if len(modes) != spec.dim:
        raise DimensionMismatch("a {0}-mode device cannot act on modes {1}".format(spec.dim, modes))
    U, svs, Vh = np.linalg.svd(spec.T)
    if spec.is_noiseless():
        return passive_fock(state, spec.T, modes, bound)
    out = state
    if numerics.spectral_norm(Vh - np.eye(spec.dim)) > 1e-14:
        out = passive_fock(out, Vh, modes, bound)
    for m, s in zip(modes, svs):
        if spec.sigma == _device.AMPLIFYING:
            out = gain_channel_fock(out, max(float(s), 1.0), m, bound)
        else:
            out = loss_channel_fock(out, min(float(s), 1.0), m, bound)
    if numerics.spectral_norm(U - np.eye(spec.dim)) > 1e-14:
        out = passive_fock(out, U, modes, bound)
    return out


def initial_fock(p, dim: int, bound: Optional[float] = DEFAULT_LEAK_BOUND) -> FockState:
    """Fock representation of the input declared by a pipeline."""
    spec = p.input
    if spec.kind == "coherent":
        state = coherent_fock(spec.amplitudes, dim)
    else:
        state = tensor_fock(*(displaced_thermal_fock(a, nb, dim) for a, nb in zip(spec.amplitudes, spec.nbar)))
    return _check_leak(state, bound)


def stages_fock(p, dim: int, bound: Optional[float] = DEFAULT_LEAK_BOUND) -> List[FockState]:
    states = [initial_fock(p, dim, bound)]
    for element in p.elements:
        states.append(apply_device_fock(states[-1], element.device, element.modes, bound))
    return states


def run_pipeline_fock(p, dim: int, bound: Optional[float] = DEFAULT_LEAK_BOUND) -> FockState:
    return stages_fock(p, dim, bound)[-1]


def partial_trace(state: FockState, keep: Sequence[int]) -> FockState:
    keep = sorted(_check_mode(state, m) for m in keep)
    n = state.num_modes
    t = state.tensor()
    current = n
    for m in reversed(range(n)):
        if m in keep:
            continue
        t = np.trace(t, axis1=m, axis2=m + current)
        current -= 1
    size = state.dim ** len(keep)
    return FockState(rho=t.reshape(size, size), dim=state.dim, num_modes=len(keep), leak=state.leak)


def _expect(state: FockState, ops: Sequence[Tuple[np.ndarray, int]]) -> complex:
    """``Tr(O_1 O_2 ... ρ)`` for single-mode operators ``(O, mode)``."""
    t = state.tensor()
    for op, mode in reversed(ops):
        t = np.moveaxis(np.tensordot(op, t, axes=([1], [mode])), 0, mode)
    size = state.rho.shape[0]
    return complex(np.trace(t.reshape(size, size)))


def mean_photon_fock(state: FockState, mode: int = 0) -> float:
    a = _destroy(state.dim)
    return float(_expect(state, [(a.conj().T @ a, _check_mode(state, mode))]).real)


def purity_fock(state: FockState) -> float:
    return float(np.vdot(state.rho, state.rho).real)


def moments_fock(state: FockState) -> Tuple[np.ndarray, np.ndarray]:
    """Mean amplitudes and symmetrized quadrature covariance.

    Quadratures are ``x = (a + a†)/2`` and ``p = (a - a†)/(2i)``, the same
    vacuum-variance-1/4 convention as :mod:`qgls.gaussian`.
    """
    a = _destroy(state.dim)
    x = 0.5 * (a + a.conj().T)
    p = (a - a.conj().T) / 2j
    n = state.num_modes
    mean = np.array([_expect(state, [(a, m)]) for m in range(n)])
    quads = [(op, m) for m in range(n) for op in (x, p)]
    first = np.array([_expect(state, [q]).real for q in quads])
    cov = np.empty((2 * n, 2 * n))
    for k, (op_k, m_k) in enumerate(quads):
        for l, (op_l, m_l) in enumerate(quads):
            if l < k:
                continue
            if m_k == m_l:
                sym = 0.5 * (_expect(state, [(op_k @ op_l, m_k)]) + _expect(state, [(op_l @ op_k, m_k)]))
            else:
                sym = _expect(state, [(op_k, m_k), (op_l, m_l)])
            cov[k, l] = cov[l, k] = sym.real - first[k] * first[l]
    return mean, cov


def wigner_fock(state: FockState, point: complex, mode: int = 0) -> float:
    """Wigner function of ``mode`` at ``point``, normalized so that the vacuum peaks at ``2/π``.

    Evaluated with the three-term recurrence for the phase-space functions of
    ``|m⟩⟨n|`` (equivalent to the displaced-parity formula).
    """
    rho = partial_trace(state, [_check_mode(state, mode)]).rho
    A = complex(point)
    M = state.dim
    w = np.zeros(M, dtype=complex)
    w[0] = 2.0 / np.pi * np.exp(-2.0 * abs(A) ** 2)
    W = (rho[0, 0] * w[0]).real
    for n in range(1, M):
        w[n] = 2.0 * A * w[n - 1] / np.sqrt(n)
        W += 2.0 * (rho[0, n] * w[n]).real
    for m in range(1, M):
        temp = w[m]
        w[m] = (2.0 * np.conj(A) * temp - np.sqrt(m) * w[m - 1]) / np.sqrt(m)
        W += (rho[m, m] * w[m]).real
        for n in range(m + 1, M):
            temp2 = (2.0 * A * w[n - 1] - np.sqrt(m) * temp) / np.sqrt(n)
            temp = w[n]
            w[n] = temp2
            W += 2.0 * (rho[m, n] * w[n]).real
    return float(W)


def trace_distance(first: FockState, second: FockState) -> float:
    if first.rho.shape != second.rho.shape:
        raise DimensionMismatch("states of different sizes")
    delta = first.rho - second.rho
    return float(0.5 * np.abs(np.linalg.eigvalsh(0.5 * (delta + delta.conj().T))).sum())


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    evals, evecs = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    return (evecs * np.sqrt(np.clip(evals, 0.0, None))) @ evecs.conj().T


def fidelity_fock(first: FockState, second: FockState) -> float:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(ρ) σ sqrt(ρ)))²``.

    Computed as the squared nuclear norm of ``sqrt(ρ) sqrt(σ)``.

    When either state is pure (purity within 1e-10 of its squared trace) this
    reduces to ``⟨ψ|ρ|ψ⟩``, which is evaluated directly.
    """
    if first.rho.shape != second.rho.shape:
        raise DimensionMismatch("states of different sizes")
    for pure, other in ((first, second), (second, first)):
        if abs(purity_fock(pure) - pure.trace**2) <= 1e-10:
            evals, evecs = np.linalg.eigh(pure.rho)
            psi = evecs[:, -1] * np.sqrt(max(evals[-1], 0.0))
            return float(np.vdot(psi, other.rho @ psi).real)
    overlap = _psd_sqrt(first.rho) @ _psd_sqrt(second.rho)
    return float(np.linalg.svd(overlap, compute_uv=False).sum() ** 2)


@dataclass(frozen=True)
class ToleranceSpec:
    """Tolerances for :func:`compare` and the extra Wigner probe points.

    Every mode is always probed at its Gaussian mean and at the origin.
    """

    mean: float = 1e-6
    cov: float = 1e-6
    purity: float = 1e-6
    wigner: float = 1e-6
    points: Tuple[complex, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class ComparisonReport:
    mean_diff: float
    cov_diff: float
    purity_diff: float
    wigner_diff: float
    wigner_points: Tuple[Tuple[int, complex, float, float], ...]
    truncation: TruncationReport
    tolerances: ToleranceSpec
    passed: bool

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "mean_diff": self.mean_diff,
            "cov_diff": self.cov_diff,
            "purity_diff": self.purity_diff,
            "wigner_diff": self.wigner_diff,
            "wigner_points": [
                {"mode": mode, "point": [z.real, z.imag], "gaussian": wg, "fock": wf}
                for mode, z, wg, wf in self.wigner_points
            ],
            "truncation": self.truncation.to_dict(),
            "tolerances": {
                "mean": self.tolerances.mean,
                "cov": self.tolerances.cov,
                "purity": self.tolerances.purity,
                "wigner": self.tolerances.wigner,
            },
        }


def compare(
    g_state: gaussian.GaussianState, f_state: FockState, tol_spec: Optional[ToleranceSpec] = None
) -> ComparisonReport:
    """Compare a Gaussian state with its Fock-space counterpart."""
    tol_spec = tol_spec or ToleranceSpec()
    if g_state.num_modes != f_state.num_modes:
        raise DimensionMismatch(
            "{0} Gaussian modes against {1} Fock modes".format(g_state.num_modes, f_state.num_modes)
        )
    mean, cov = moments_fock(f_state)
    mean_diff = float(np.max(np.abs(mean - g_state.mean)))
    cov_diff = float(np.max(np.abs(cov - g_state.cov)))
    purity_diff = abs(gaussian.purity(g_state) - purity_fock(f_state))
    probes = []
    for mode in range(g_state.num_modes):
        for z in (g_state.mean[mode], 0j) + tuple(complex(z) for z in tol_spec.points):
            probes.append((mode, complex(z), gaussian.wigner_point(g_state, z, mode), wigner_fock(f_state, z, mode)))
    wigner_diff = max(abs(wg - wf) for _, _, wg, wf in probes)
    passed = (
        mean_diff <= tol_spec.mean
        and cov_diff <= tol_spec.cov
        and purity_diff <= tol_spec.purity
        and wigner_diff <= tol_spec.wigner
    )
    return ComparisonReport(
        mean_diff=mean_diff,
        cov_diff=cov_diff,
        purity_diff=purity_diff,
        wigner_diff=wigner_diff,
        wigner_points=tuple(probes),
        truncation=f_state.truncation_report(),
        tolerances=tol_spec,
        passed=passed,
    )
