"""Matrix functions
================

Hermitian and positive matrix functions used to build dilations.

All functions are pure: they never modify their arguments and return new
:class:`numpy.ndarray` objects. Tolerances are relative to the spectral norm of
the input, defaulting to :func:`qgls.config.get_tolerance`.
"""

from typing import Optional

import numpy as np
import scipy.linalg

from qgls.config import resolve_tol
from qgls.errors import DimensionMismatch
from qgls.errors import NegativeEigenvalue
from qgls.errors import NotHermitian


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    """Return ``M`` as a finite 2-D complex array."""
    arr = np.atleast_2d(np.asarray(M, dtype=complex))
    if arr.ndim != 2:
        raise DimensionMismatch("{0} must be 2-dimensional, got shape {1}".format(name, arr.shape))
    if not np.all(np.isfinite(arr)):
        raise DimensionMismatch("{0} has non-finite entries".format(name))
    return arr


def spectral_norm(M) -> float:
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def is_hermitian(M, tol: Optional[float] = None) -> bool:
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        return False
    tol = resolve_tol(tol)
    return spectral_norm(M - M.conj().T) <= tol * max(1.0, spectral_norm(M))


def _eigh_checked(M, tol: float):
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise NotHermitian("matrix of shape {0} is not square".format(M.shape))
    scale = max(1.0, spectral_norm(M))
    asym = spectral_norm(M - M.conj().T)
    if asym > tol * scale:
        raise NotHermitian("asymmetry {0:.3e} exceeds tolerance {1:.3e}".format(asym, tol * scale))
    # symmetrize before diagonalizing so that eigh sees an exactly Hermitian matrix
    evals, evecs = np.linalg.eigh(0.5 * (M + M.conj().T))
    return evals, evecs, scale


def hermitian_sqrt(M, tol: Optional[float] = None) -> np.ndarray:
    """Positive semidefinite square root of a Hermitian PSD matrix.

    Eigenvalues in ``[-tol, tol]`` (relative to the spectral norm) are clamped to
    zero, so that ``I - UU⁺`` of a unitary ``U`` has the root ``0``. Anything more
    negative raises :class:`~qgls.errors.NegativeEigenvalue`.
    """
    tol = resolve_tol(tol)
    evals, evecs, scale = _eigh_checked(M, tol)
    if evals.size and evals.min() < -tol * scale:
        raise NegativeEigenvalue("eigenvalue {0:.3e} below -{1:.3e}".format(evals.min(), tol * scale))
    roots = np.sqrt(np.where(evals > tol * scale, evals, 0.0))
    return (evecs * roots) @ evecs.conj().T


def regularized_inverse(M, tol: Optional[float] = None) -> np.ndarray:
    """Moore-Penrose pseudoinverse of a Hermitian PSD matrix.

    Eigenvalues not larger than ``tol * ‖M‖`` are mapped to zero.
    """
    tol = resolve_tol(tol)
    evals, evecs, _ = _eigh_checked(M, tol)
    cutoff = tol * spectral_norm(M)
    inv = np.zeros_like(evals)
    keep = evals > cutoff
    inv[keep] = 1.0 / evals[keep]
    return (evecs * inv) @ evecs.conj().T


def range_projector(M, tol: Optional[float] = None) -> np.ndarray:
    """Orthogonal projector onto the range of a Hermitian PSD matrix."""
    tol = resolve_tol(tol)
    evals, evecs, _ = _eigh_checked(M, tol)
    keep = evals > tol * spectral_norm(M)
    basis = evecs[:, keep]
    return basis @ basis.conj().T


def polar_unitary(M, tol: Optional[float] = None) -> np.ndarray:
    """Unitary factor ``W`` of the left polar decomposition ``M = sqrt(MM⁺) W``.

    For a normal matrix the factor acts as the identity on the null space, so a
    Hermitian PSD ``M`` yields ``W = I``. Otherwise the factor comes from the
    singular value decomposition and is unique only on the range.
    """
    tol = resolve_tol(tol)
    M = as_matrix(M)
    scale = max(1.0, spectral_norm(M))
    MMh = M @ M.conj().T
    if spectral_norm(MMh - M.conj().T @ M) <= tol * scale * scale:
        root = hermitian_sqrt(MMh, tol)
        null = np.eye(M.shape[0]) - range_projector(root, tol)
        return regularized_inverse(root, tol) @ M + null
    W, _ = scipy.linalg.polar(M, side="left")
    return W
