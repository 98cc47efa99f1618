# -*- coding: utf-8 -*-
"""
QGLS Library
============

Quantum states of light through lossy and amplifying linear optical devices:
Gaussian phase-space propagation, pseudo-unitary dilations and a truncated
Fock-space cross-check.

"""

__version__ = "0.1.0"
__author__ = u"QGLS contributors"
__date__ = "unreleased"
__credits__ = "(c) QGLS contributors"

from qgls.device import DeviceSpec
from qgls.device import dilation
from qgls.device import gain_device
from qgls.device import loss_device
from qgls.device import validate_device
from qgls.gaussian import GaussianState
from qgls.gaussian import apply_device
from qgls.gaussian import coherent_state
from qgls.gaussian import displaced_thermal_state
from qgls.gaussian import mean_photon
from qgls.gaussian import purity
from qgls.gaussian import wigner
from qgls.network import PipelineSpec
from qgls.network import effective_temperature
from qgls.network import gain
from qgls.network import loss
from qgls.network import run_pipeline
from qgls.network import thermal_occupation
