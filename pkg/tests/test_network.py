# coding: utf-8
import json
import warnings

import numpy as np
import pytest
import scipy.constants

from qgls import gaussian
from qgls import network
from qgls.config import SI_UNITS
from qgls.device import gain_device
from qgls.device import loss_device
from qgls.errors import AsymmetricSampling
from qgls.errors import DimensionMismatch
from qgls.errors import DomainError
from qgls.errors import FormulaCaveatWarning
from qgls.errors import SubunityGain
from qgls.errors import ValidationError

SWEEP = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]


def _pipeline(alpha, *elements, nbar=None):
    alpha = np.atleast_1d(alpha)
    kind = "coherent" if nbar is None else "displaced_thermal"
    return network.PipelineSpec(
        modes=alpha.size,
        input=network.InputSpec(kind=kind, amplitudes=alpha, nbar=() if nbar is None else nbar),
        elements=[network.bind(e) if not isinstance(e, network.Element) else e for e in elements],
    )


@pytest.fixture(scope="module")
def loss_then_gain_pipeline():
    return _pipeline(3 + 3j, network.loss(2 / 3), network.gain(1.5))


def test_run_pipeline__loss_then_gain(loss_then_gain_pipeline):
    out = network.run_pipeline(loss_then_gain_pipeline)
    np.testing.assert_allclose(out.mean, [3 + 3j], atol=1e-9)
    np.testing.assert_allclose(out.cov, 0.875 * np.eye(2), atol=1e-9)


def test_stages__loss_then_gain(loss_then_gain_pipeline):
    states = network.stages(loss_then_gain_pipeline)
    assert len(states) == 3
    np.testing.assert_allclose([s.mean[0] for s in states], [3 + 3j, 2 + 2j, 3 + 3j], atol=1e-9)
    assert loss_then_gain_pipeline.gain_elements()[0][0] == 1


def test_run_pipeline__empty():
    p = _pipeline([1 + 2j, -1j])
    out = network.run_pipeline(p)
    np.testing.assert_allclose(out.mean, [1 + 2j, -1j])
    np.testing.assert_allclose(out.cov, np.eye(4) / 4)


def test_run_pipeline__losses_compose():
    out = network.run_pipeline(_pipeline(2 - 1j, network.loss(0.8), network.loss(0.5)))
    single = network.run_pipeline(_pipeline(2 - 1j, network.loss(0.4)))
    np.testing.assert_allclose(out.mean, [0.4 * (2 - 1j)], atol=1e-12)
    np.testing.assert_allclose(out.cov, single.cov, atol=1e-12)


def test_run_pipeline__displaced_thermal_input():
    out = network.run_pipeline(_pipeline(1j, network.loss(0.5), nbar=[2.0]))
    # variance t² (2 nbar + 1)/4 + (1 - t²)/4
    np.testing.assert_allclose(out.cov, (0.25 * 5 + 0.75) / 4 * np.eye(2), atol=1e-12)


def test_pipeline_validation():
    with pytest.raises(DimensionMismatch):
        _pipeline(1.0, network.Element(device=network.loss(0.5), modes=(1,)))
    with pytest.raises(DimensionMismatch):
        network.Element(device=network.loss(0.5), modes=(0, 1))
    with pytest.raises(DimensionMismatch):
        network.PipelineSpec(modes=2, input=network.InputSpec(kind="coherent", amplitudes=[0]))
    with pytest.raises(DomainError):
        network.PipelineSpec(modes=1, input=network.InputSpec(kind="coherent", amplitudes=[0]), omega=0.0)
    with pytest.raises(ValidationError):
        network.InputSpec(kind="squeezed", amplitudes=[0])


@pytest.mark.parametrize("G, expected", [(1.5, 1.25), (1.0, 0.0), (2.0, 3.0), (-2.0j, 3.0)])
def test_thermal_occupation(G, expected):
    assert network.thermal_occupation(G) == pytest.approx(expected, abs=1e-15)


def test_thermal_occupation__subunity():
    with pytest.raises(SubunityGain):
        network.thermal_occupation(0.9)


@pytest.mark.parametrize("t", SWEEP)
def test_no_go__gain_never_undoes_loss(t):
    alpha = 3 + 3j
    out = network.run_pipeline(_pipeline(alpha, network.loss(t), network.gain(1 / t)))
    assert abs(out.mean[0] - alpha) < 1e-9
    assert gaussian.purity(out) == pytest.approx(1 / (2 / t**2 - 1), abs=1e-9)
    assert gaussian.purity(out) < 1.0
    assert network.inferred_occupation(out) == pytest.approx(network.thermal_occupation(1 / t), abs=1e-9)
    lossy = network.run_pipeline(_pipeline(alpha, network.loss(t)))
    assert gaussian.purity(lossy) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("t", SWEEP)
def test_no_go__order_changes_the_noise(t):
    alpha = -1 + 2j
    out = network.run_pipeline(_pipeline(alpha, network.gain(1 / t), network.loss(t)))
    assert abs(out.mean[0] - alpha) < 1e-9
    np.testing.assert_allclose(out.cov, (3 - 2 * t**2) / 4 * np.eye(2), atol=1e-9)


def test_loss_then_gain_thermal_numbers(loss_then_gain_pipeline):
    out = network.run_pipeline(loss_then_gain_pipeline)
    assert network.thermal_occupation(1.5) == pytest.approx(1.25, abs=1e-12)
    assert network.inferred_occupation(out) == pytest.approx(1.25, abs=1e-9)
    assert gaussian.purity(out) == pytest.approx(1 / 3.5, abs=1e-9)
    assert gaussian.mean_photon(out) == pytest.approx(19.25, abs=1e-9)


def test_effective_temperature__loss_then_gain():
    assert network.effective_temperature(2 / 3) == pytest.approx(1 / np.log(9 / 5), abs=1e-12)
    assert network.effective_temperature(2 / 3) == pytest.approx(1.7012975, abs=1e-6)


@pytest.mark.parametrize("T_loss", [0.3, 2 / 3, 0.9])
def test_effective_temperature__bose_einstein_round_trip(T_loss):
    T_eff = network.effective_temperature(T_loss)
    assert network.bose_einstein(1.0, T_eff) == pytest.approx(1 / T_loss**2 - 1, rel=1e-12)


def test_effective_temperature__limits():
    # strong loss needs strong gain: hot
    assert network.effective_temperature(1e-4) > 1e7
    # weak loss needs weak gain: cold
    assert network.effective_temperature(1 - 1e-9) < 0.06


@pytest.mark.parametrize("T_loss, omega", [(0.0, 1.0), (1.0, 1.0), (1.2, 1.0), (0.5, 0.0)])
def test_effective_temperature__domain(T_loss, omega):
    with pytest.raises(DomainError):
        network.effective_temperature(T_loss, omega)


def test_effective_temperature__si_units():
    omega = 2 * np.pi * 193.4e12
    T_eff = network.effective_temperature(2 / 3, omega, SI_UNITS)
    expected = scipy.constants.hbar * omega / (scipy.constants.k * np.log(9 / 5))
    assert T_eff == pytest.approx(expected, rel=1e-12)
    assert network.bose_einstein(omega, T_eff, SI_UNITS) == pytest.approx(1.25, rel=1e-9)


def test_bose_einstein__zero_temperature():
    assert network.bose_einstein(1.0, 0.0) == 0.0
    with pytest.raises(DomainError):
        network.bose_einstein(1.0, -1.0)


def test_effective_temperature_literal__warns():
    with warnings.catch_warnings(record=True) as warns:
        warnings.simplefilter("always")
        value = network.effective_temperature_literal(2 / 3)
    assert value == pytest.approx(np.log(9 / 5), abs=1e-12)
    assert len(warns) == 1
    warn = warns[0]
    assert issubclass(warn.category, FormulaCaveatWarning)
    assert "effective_temperature_literal" in str(warn.message)
    assert warn.filename == __file__, 'Incorrect warning stackLevel'
    assert ".. warning::" in network.effective_temperature_literal.__doc__


def test_effective_temperature_literal__disagrees_with_bose_einstein():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FormulaCaveatWarning)
        literal = network.effective_temperature_literal(2 / 3)
    assert network.bose_einstein(1.0, literal) != pytest.approx(1.25, rel=1e-3)


@pytest.mark.parametrize("seed", range(5))
def test_coherent_output_matches_apply_device(seed):
    rng = np.random.default_rng(300 + seed)
    T = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    svs = np.linalg.svd(T, compute_uv=False)
    alpha = rng.normal(size=2) + 1j * rng.normal(size=2)
    for spec in (loss_device(T / (1.1 * svs.max())), gain_device(1.2 * T / svs.min())):
        closed = network.coherent_output(spec, alpha)
        pushed = gaussian.apply_device(gaussian.coherent_state(alpha), spec)
        np.testing.assert_allclose(closed.mean, pushed.mean, atol=1e-9)
        np.testing.assert_allclose(closed.cov, pushed.cov, atol=1e-9)


def test_coherent_output__gain_covariance():
    out = network.coherent_output(gain_device([[1.5]]), [2 + 2j])
    np.testing.assert_allclose(out.cov, (2 * 2.25 - 1) / 4 * np.eye(2), atol=1e-12)
    with pytest.raises(DimensionMismatch):
        network.coherent_output(gain_device([[1.5]]), [1, 2])


@pytest.mark.parametrize(
    "func, symmetric",
    [
        (lambda x: 1.5 + 1j * x, True),
        (lambda x: 1.5 + 1j * abs(x), False),
        (lambda x: 1.5 + 0.1 * x * x - 1j * np.sin(x), True),
    ],
    ids=["linear_gain_loss", "loss_everywhere", "smooth"],
)
def test_check_pt_profile(func, symmetric):
    profile = network.sample_profile(func, [0.0, 0.5, 1.0])
    assert list(profile.positions) == [-1.0, -0.5, 0.0, 0.5, 1.0]
    report = network.check_pt_profile(profile)
    assert report.pt_symmetric is symmetric
    if symmetric:
        assert report.residual < 1e-12
    else:
        assert report.real_part_symmetric and not report.imag_part_antisymmetric
    assert json.loads(json.dumps(report.to_dict()))["pt_symmetric"] is symmetric


def test_check_pt_profile__exact_residual():
    report = network.check_pt_profile(network.sample_profile(lambda x: 1.5 + 1j * x, [0.0, 0.5, 1.0]))
    assert report.residual == 0.0


def test_check_pt_profile__asymmetric_sampling():
    profile = network.IndexProfile(positions=[0.0, 0.5, 1.0], values=[1.5, 1.5, 1.5])
    with pytest.raises(AsymmetricSampling):
        network.check_pt_profile(profile)
