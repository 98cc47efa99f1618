# coding: utf-8
from packaging.version import Version

import qgls


def test_qgls_has_docstring():
    # The qgls package must have a docstring
    assert qgls.__doc__ is not None
    assert "QGLS Library" in qgls.__doc__


def test_qgls_has_version():
    # The qgls package must have a valid (PEP 440) version number
    assert qgls.__version__ is not None
    version = Version(qgls.__version__)
    assert str(version) == qgls.__version__
