"""Configuration
=============

Tolerances and unit systems shared by every module.

The global tolerance defaults to ``1e-10`` (relative to the spectral norm of the
matrices involved) and may be overridden with the ``QGLS_TOL`` environment
variable. The variable is read on every call, so a process can change it at
run time.
"""

import os
from dataclasses import dataclass
from typing import Optional

import scipy.constants

from qgls.errors import ConfigurationError

DEFAULT_TOL = 1e-10
TOL_ENV_VAR = "QGLS_TOL"

#: Absolute bound on symplectic eigenvalues below the vacuum level 1/4.
ADMISSIBILITY_TOL = 1e-8

#: Largest probability mass a truncated Fock computation may lose.
DEFAULT_LEAK_BOUND = 1e-8

#: Quadrature variance of the vacuum, with ``a = x + ip``.
VACUUM_VARIANCE = 0.25


def get_tolerance() -> float:
    """Return the global tolerance, honouring ``QGLS_TOL``."""
    value = os.environ.get(TOL_ENV_VAR, "").strip()
    if not value:
        return DEFAULT_TOL
    try:
        tol = float(value)
    except ValueError:
        raise ConfigurationError("{0}={1!r} is not a number".format(TOL_ENV_VAR, value))
    if not tol > 0:
        raise ConfigurationError("{0}={1!r} must be positive".format(TOL_ENV_VAR, value))
    return tol


def resolve_tol(tol: Optional[float] = None) -> float:
    if tol is None:
        return get_tolerance()
    if not tol > 0:
        raise ConfigurationError("tolerance must be positive, got {0!r}".format(tol))
    return float(tol)


@dataclass(frozen=True)
class Units:
    """Values of ħ and k_B used to convert frequencies into temperatures."""

    name: str
    hbar: float
    k_B: float


NATURAL_UNITS = Units(name="natural", hbar=1.0, k_B=1.0)
SI_UNITS = Units(name="si", hbar=scipy.constants.hbar, k_B=scipy.constants.k)


def units_for(si: bool = False) -> Units:
    return SI_UNITS if si else NATURAL_UNITS
