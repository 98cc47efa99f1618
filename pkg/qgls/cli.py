"""Command-line interface
======================

``qgls validate | simulate | wigner | oracle``: run pipeline files.

A pipeline file is a JSON document:

.. code-block:: json

    {
      "modes": 1,
      "omega": 1.0,
      "input": {"kind": "coherent", "amplitudes": [[3.0, 3.0]]},
      "elements": [
        {"kind": "loss", "t": 0.6666666666666666, "modes": [0]},
        {"kind": "gain", "g": 1.5, "modes": [0]}
      ]
    }

Complex numbers are ``[re, im]`` pairs (plain numbers are accepted for real
values) and matrices are arrays of rows. Elements are ``loss``/``gain`` with a
scalar ``t``/``g`` or a matrix ``T``, or ``unitary`` with a matrix ``U``.

Exit codes: 0 success, 1 I/O error, 2 validation error, 3 numerical error
(inadmissible state, failed oracle comparison), 4 truncation overflow.
"""

import argparse
import json
import math
import os
import sys
import warnings
from typing import Any
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

import qgls
from qgls import device as _device
from qgls import fock_oracle
from qgls import gaussian
from qgls import network
from qgls.config import TOL_ENV_VAR
from qgls.config import units_for
from qgls.errors import BadGrid
from qgls.errors import NumericalError
from qgls.errors import PipelineSemanticError
from qgls.errors import PipelineSyntaxError
from qgls.errors import QGLSWarning
from qgls.errors import TruncationOverflow
from qgls.errors import ValidationError

EXIT_OK = 0
EXIT_IO = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_TRUNCATION = 4

PIPELINE_KEYS = {"modes", "omega", "input", "elements", "description"}
INPUT_KEYS = {"kind", "amplitudes", "nbar"}
ELEMENT_KEYS = {"kind", "t", "g", "T", "U", "modes", "label"}
ELEMENT_KINDS = ("loss", "gain", "unitary")

#: Oracle defaults; the covariance carries the second moments of the truncated tail.
ORACLE_BOUND = 1e-5
ORACLE_TOLERANCES = fock_oracle.ToleranceSpec(mean=1e-5, cov=1e-5, purity=1e-5, wigner=1e-5)


def _locate(text: str, key: str) -> Tuple[Optional[int], Optional[int]]:
    index = text.find('"{0}"'.format(key))
    if index < 0:
        return None, None
    line = text.count("\n", 0, index) + 1
    return line, index - (text.rfind("\n", 0, index) + 1) + 1


def _check_keys(text: str, obj: Any, allowed: set, where: str) -> dict:
    if not isinstance(obj, dict):
        raise PipelineSyntaxError("{0} must be an object".format(where))
    for key in obj:
        if key not in allowed:
            line, column = _locate(text, key)
            raise PipelineSyntaxError("unknown key {0!r} in {1}".format(key, where), line, column)
    return obj


def _complex(value: Any, where: str) -> complex:
    if isinstance(value, bool):
        raise PipelineSyntaxError("{0}: expected a number or [re, im], got {1!r}".format(where, value))
    if isinstance(value, (int, float)):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        return complex(value[0], value[1])
    raise PipelineSyntaxError("{0}: expected a number or [re, im], got {1!r}".format(where, value))


def _matrix(value: Any, where: str) -> List[List[complex]]:
    if not isinstance(value, list) or not value or not all(isinstance(row, list) for row in value):
        raise PipelineSyntaxError("{0}: expected an array of rows".format(where))
    rows = [
        [_complex(v, "{0}[{1}][{2}]".format(where, i, j)) for j, v in enumerate(row)] for i, row in enumerate(value)
    ]
    if any(len(row) != len(rows) for row in rows):
        raise PipelineSyntaxError("{0}: rows must have {1} entries".format(where, len(rows)))
    return rows


def _modes(value: Any, where: str) -> Tuple[int, ...]:
    if not isinstance(value, list) or not all(isinstance(m, int) and not isinstance(m, bool) for m in value):
        raise PipelineSyntaxError("{0}: modes must be an array of integers".format(where))
    return tuple(value)


def _element(text: str, raw: Any, index: int) -> network.Element:
    where = "element {0}".format(index)
    raw = _check_keys(text, raw, ELEMENT_KEYS, where)
    kind = raw.get("kind")
    if kind not in ELEMENT_KINDS:
        raise PipelineSyntaxError("{0}: kind must be one of {1}, got {2!r}".format(where, ELEMENT_KINDS, kind))
    label = raw.get("label", "")
    name = "{0} ({1})".format(where, label or kind)
    modes = _modes(raw.get("modes", [0]), where)
    try:
        if kind == "unitary":
            if "U" not in raw:
                raise PipelineSyntaxError("{0}: unitary elements need a matrix U".format(where))
            spec = _device.unitary_device(_matrix(raw["U"], where + ".U"))
        else:
            scalar = "t" if kind == "loss" else "g"
            if (scalar in raw) == ("T" in raw):
                raise PipelineSyntaxError("{0}: give exactly one of {1!r} or 'T'".format(where, scalar))
            if scalar in raw:
                T = [[_complex(raw[scalar], "{0}.{1}".format(where, scalar))]]
            else:
                T = _matrix(raw["T"], where + ".T")
            spec = _device.loss_device(T) if kind == "loss" else _device.gain_device(T)
        return network.Element(device=spec, modes=modes, label=label or kind)
    except (PipelineSyntaxError, PipelineSemanticError):
        raise
    except ValidationError as exc:
        raise PipelineSemanticError("{0}: {1}".format(type(exc).__name__, exc), name)


def parse_pipeline(text: str) -> network.PipelineSpec:
    """Parse and validate a pipeline document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PipelineSyntaxError(exc.msg, exc.lineno, exc.colno)
    doc = _check_keys(text, doc, PIPELINE_KEYS, "pipeline")
    modes = doc.get("modes")
    if not isinstance(modes, int) or isinstance(modes, bool) or modes < 1:
        raise PipelineSyntaxError("'modes' must be a positive integer")
    omega = doc.get("omega", 1.0)
    if isinstance(omega, bool) or not isinstance(omega, (int, float)):
        raise PipelineSyntaxError("'omega' must be a number")

    raw_input = _check_keys(text, doc.get("input"), INPUT_KEYS, "input")
    amplitudes = raw_input.get("amplitudes", [0.0] * modes)
    if not isinstance(amplitudes, list):
        raise PipelineSyntaxError("input.amplitudes must be an array")
    amplitudes = [_complex(a, "input.amplitudes[{0}]".format(i)) for i, a in enumerate(amplitudes)]
    nbar = raw_input.get("nbar", [])
    nbar = nbar if isinstance(nbar, list) else [nbar]
    if not all(isinstance(n, (int, float)) and not isinstance(n, bool) for n in nbar):
        raise PipelineSyntaxError("input.nbar must be a number or an array of numbers")

    raw_elements = doc.get("elements", [])
    if not isinstance(raw_elements, list):
        raise PipelineSyntaxError("'elements' must be an array")
    elements = [_element(text, raw, i) for i, raw in enumerate(raw_elements)]
    try:
        return network.PipelineSpec(
            modes=modes,
            input=network.InputSpec(kind=raw_input.get("kind"), amplitudes=amplitudes, nbar=nbar),
            elements=elements,
            omega=float(omega),
        )
    except ValidationError as exc:
        raise PipelineSemanticError("{0}: {1}".format(type(exc).__name__, exc))


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as f:
            return f.read()
    except UnicodeDecodeError as exc:
        raise PipelineSyntaxError("{0}: not valid UTF-8 ({1})".format(path, exc.reason))


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)


def _dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def simulation_report(
    p: network.PipelineSpec, si: bool = False, omega: Optional[float] = None, literal: bool = False
) -> dict:
    """Report of the final state of ``p``, assembled from library calls."""
    units = units_for(si)
    omega = p.omega if omega is None else omega
    state = network.run_pipeline(p)
    report = state.to_dict()
    report["purity"] = gaussian.purity(state)
    report["mean_photon"] = [gaussian.mean_photon(state, m) for m in range(state.num_modes)]
    report["inferred_nbar"] = [network.inferred_occupation(state, m) for m in range(state.num_modes)]
    report["units"] = units.name
    report["omega"] = omega
    gains = []
    for index, element in p.gain_elements():
        svs = [float(s) for s in element.device.singular_values]
        entry = {
            "element": index,
            "label": element.label,
            "G": svs,
            "n_th": [network.thermal_occupation(g) for g in svs],
            "T_eff": [network.effective_temperature(1.0 / g, omega, units) if g > 1.0 else 0.0 for g in svs],
        }
        if literal:
            entry["T_eff_literal"] = [
                network.effective_temperature_literal(1.0 / g, omega, units) if g > 1.0 else 0.0 for g in svs
            ]
        gains.append(entry)
    if gains:
        report["gain"] = gains
    return report


def cmd_simulate(args) -> int:
    p = parse_pipeline(_read(args.file))
    omega = None
    if args.si and args.omega_hz is None:
        raise ValidationError("--si requires --omega-hz")
    if args.omega_hz is not None:
        if not args.si:
            raise ValidationError("--omega-hz requires --si")
        omega = 2.0 * math.pi * args.omega_hz
    report = simulation_report(p, si=args.si, omega=omega, literal=args.literal_paper_formula)
    _write(args.output, _dumps(report))
    return EXIT_OK


def parse_range(text: str) -> Tuple[float, float, int]:
    """Parse ``a:b:n`` into ``(a, b, n)``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise BadGrid("grid range {0!r} is not of the form a:b:n".format(text))
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise BadGrid("grid range {0!r} is not of the form a:b:n".format(text))
    if n < 1 or not (math.isfinite(lo) and math.isfinite(hi)):
        raise BadGrid("grid range {0!r} needs finite bounds and at least one sample".format(text))
    return lo, hi, n


def _stage_indices(stage: str, count: int) -> List[int]:
    if stage == "all":
        return list(range(count))
    try:
        index = int(stage)
    except ValueError:
        raise BadGrid("stage must be an index or 'all', got {0!r}".format(stage))
    if not 0 <= index < count:
        raise BadGrid("stage {0} outside 0..{1}".format(index, count - 1))
    return [index]


def _stage_path(output: str, index: int) -> str:
    root, ext = os.path.splitext(output)
    return "{0}_stage{1}{2}".format(root, index, ext or ".csv")


def cmd_wigner(args) -> int:
    p = parse_pipeline(_read(args.file))
    x0, x1, nx = parse_range(args.xrange)
    p0, p1, np_ = parse_range(args.prange)
    states = network.stages(p)
    indices = _stage_indices(args.stage, len(states))
    labels = ["input"] + [e.label for e in p.elements]
    grids = [
        gaussian.wigner(states[k], args.mode, xrange=(x0, x1), prange=(p0, p1), samples=(nx, np_)) for k in indices
    ]
    if args.format == "json":
        doc = {
            "stages": [
                {"stage": k, "label": labels[k], "peak": list(grid.peak()), "grid": grid.to_dict()}
                for k, grid in zip(indices, grids)
            ]
        }
        _write(args.output, _dumps(doc))
    elif len(grids) == 1:
        _write(args.output, grids[0].to_csv())
    else:
        if args.output == "-":
            raise BadGrid("several stages need an output path, not stdout")
        for k, grid in zip(indices, grids):
            _write(_stage_path(args.output, k), grid.to_csv())
    return EXIT_OK


def _points(text: Optional[str]) -> Tuple[complex, ...]:
    if not text:
        return ()
    points = []
    for item in text.split(";"):
        try:
            re_part, im_part = item.split(",")
            points.append(complex(float(re_part), float(im_part)))
        except ValueError:
            raise ValidationError("point {0!r} is not of the form re,im".format(item))
    return tuple(points)


def cmd_oracle(args) -> int:
    p = parse_pipeline(_read(args.file))
    tolerances = fock_oracle.ToleranceSpec(
        mean=ORACLE_TOLERANCES.mean,
        cov=ORACLE_TOLERANCES.cov,
        purity=ORACLE_TOLERANCES.purity,
        wigner=ORACLE_TOLERANCES.wigner,
        points=_points(args.points),
    )
    g_state = network.run_pipeline(p)
    f_state = fock_oracle.run_pipeline_fock(p, args.dim, args.bound)
    report = fock_oracle.compare(g_state, f_state, tolerances)
    doc = report.to_dict()
    doc["dim"] = args.dim
    doc["bound"] = args.bound
    _write(args.output, _dumps(doc))
    return EXIT_OK if report.passed else EXIT_NUMERICAL


def _read_profile(path: str) -> network.IndexProfile:
    text = _read(path)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PipelineSyntaxError(exc.msg, exc.lineno, exc.colno)
    doc = _check_keys(text, doc, {"samples", "description"}, "profile")
    samples = doc.get("samples")
    if not isinstance(samples, list) or not samples:
        raise PipelineSyntaxError("profile.samples must be a non-empty array of [x, n] pairs")
    positions, values = [], []
    for i, sample in enumerate(samples):
        if not isinstance(sample, list) or len(sample) != 2 or not isinstance(sample[0], (int, float)):
            raise PipelineSyntaxError("profile.samples[{0}] must be [x, n]".format(i))
        positions.append(float(sample[0]))
        values.append(_complex(sample[1], "profile.samples[{0}]".format(i)))
    return network.IndexProfile(positions=positions, values=values)


def cmd_validate(args) -> int:
    p = parse_pipeline(_read(args.file))
    doc = {"elements": []}
    ok = True
    for index, element in enumerate(p.elements):
        report = _device.validate_device(element.device)
        ok = ok and report.passed
        doc["elements"].append(dict(report.to_dict(), element=index, label=element.label))
        print(
            "element {0} ({1}): residual {2:.3e}, singular values [{3:.6g}, {4:.6g}], {5}".format(
                index, element.label, report.residual, report.sv_min, report.sv_max, "ok" if report.passed else "FAILED"
            )
        )
    if args.pt_profile:
        pt = network.check_pt_profile(_read_profile(args.pt_profile))
        ok = ok and pt.pt_symmetric
        doc["pt_profile"] = pt.to_dict()
        verdict = "PT-symmetric" if pt.pt_symmetric else "not PT-symmetric"
        print("profile: {0} (residual {1:.3e})".format(verdict, pt.residual))
    if args.output:
        _write(args.output, _dumps(doc))
    return EXIT_OK if ok else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgls", description="Quantum states of light through lossy and amplifying devices."
    )
    parser.add_argument("--version", action="version", version="%(prog)s " + qgls.__version__)
    parser.add_argument("--tol", type=float, default=None, help="global tolerance (overrides {0})".format(TOL_ENV_VAR))
    parser.add_argument("--quiet", action="store_true", help="do not print warnings")
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check the device constraint of every element")
    p_validate.add_argument("file")
    p_validate.add_argument("--pt-profile", default=None, help="JSON file with a sampled refractive-index profile")
    p_validate.add_argument("-o", "--output", default=None, help="also write a JSON report")
    p_validate.set_defaults(func=cmd_validate)

    p_simulate = sub.add_parser("simulate", help="run the Gaussian simulation and write a JSON report")
    p_simulate.add_argument("file")
    p_simulate.add_argument("-o", "--output", default="-")
    p_simulate.add_argument("--si", action="store_true", help="report temperatures in kelvin (needs --omega-hz)")
    p_simulate.add_argument("--omega-hz", type=float, default=None, help="optical frequency in Hz (with --si)")
    p_simulate.add_argument(
        "--literal-paper-formula",
        action="store_true",
        help="also report the effective temperature with the logarithm as a factor",
    )
    p_simulate.set_defaults(func=cmd_simulate)

    p_wigner = sub.add_parser("wigner", help="sample Wigner functions of pipeline stages")
    p_wigner.add_argument("file")
    p_wigner.add_argument("--stage", default="all", help="stage index (0 is the input) or 'all'")
    p_wigner.add_argument("--mode", type=int, default=0)
    p_wigner.add_argument("--xrange", default="-6:6:121", help="a:b:n")
    p_wigner.add_argument("--prange", default="-6:6:121", help="a:b:n")
    p_wigner.add_argument("--format", choices=("csv", "json"), default="csv")
    p_wigner.add_argument("-o", "--output", default="-")
    p_wigner.set_defaults(func=cmd_wigner)

    p_oracle = sub.add_parser("oracle", help="compare against the truncated Fock-space simulation")
    p_oracle.add_argument("file")
    p_oracle.add_argument("--dim", type=int, default=80, help="Fock dimension per mode")
    p_oracle.add_argument("--bound", type=float, default=ORACLE_BOUND, help="largest tolerated truncation leak")
    p_oracle.add_argument("--points", default=None, help="extra Wigner probes 're,im;re,im'")
    p_oracle.add_argument("-o", "--output", default="-")
    p_oracle.set_defaults(func=cmd_oracle)
    return parser


def _show_warning(message, category, filename, lineno, file=None, line=None):
    sys.stderr.write("qgls: {0}: {1}\n".format(category.__name__, message))


def _error(message: str, code: int) -> int:
    sys.stderr.write("qgls: error: {0}\n".format(message))
    return code


RANGE_OPTIONS = ("--xrange", "--prange")


def _join_ranges(argv: Sequence[str]) -> List[str]:
    """Glue range options to their value so that ``--xrange -6:6:121`` parses."""
    joined: List[str] = []
    args = iter(argv)
    for arg in args:
        if arg in RANGE_OPTIONS:
            value = next(args, None)
            if value is not None:
                arg = "{0}={1}".format(arg, value)
        joined.append(arg)
    return joined


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(_join_ranges(sys.argv[1:] if argv is None else argv))
    saved_tol = os.environ.get(TOL_ENV_VAR)
    if args.tol is not None:
        os.environ[TOL_ENV_VAR] = repr(args.tol)
    try:
        with warnings.catch_warnings():
            warnings.showwarning = _show_warning
            warnings.simplefilter("ignore" if args.quiet else "always", QGLSWarning)
            return args.func(args)
    except TruncationOverflow as exc:
        return _error(str(exc), EXIT_TRUNCATION)
    except NumericalError as exc:
        return _error(str(exc), EXIT_NUMERICAL)
    except ValidationError as exc:
        return _error("{0}: {1}".format(type(exc).__name__, exc), EXIT_VALIDATION)
    except OSError as exc:
        return _error(str(exc), EXIT_IO)
    finally:
        if args.tol is not None:
            if saved_tol is None:
                os.environ.pop(TOL_ENV_VAR, None)
            else:
                os.environ[TOL_ENV_VAR] = saved_tol


if __name__ == "__main__":
    sys.exit(main())
