# -*- coding: utf-8 -*-
import inspect
import warnings

import pytest

import qgls.caveat
from qgls.errors import FormulaCaveatWarning


@pytest.fixture(scope="module")
def typeset_formula():
    @qgls.caveat.caveat(reason="The logarithm is a factor.", reference="better_formula")
    def typeset_formula(x, scale=2.0):
        """Scaled input."""
        return scale * x

    return typeset_formula


# noinspection PyShadowingNames
def test_caveat__warns(typeset_formula):
    with warnings.catch_warnings(record=True) as warns:
        warnings.simplefilter("always")
        assert typeset_formula(3.0) == 6.0
    assert len(warns) == 1
    warn = warns[0]
    assert issubclass(warn.category, FormulaCaveatWarning)
    assert "Call to formula typeset_formula" in str(warn.message)
    assert warn.filename == __file__, 'Incorrect warning stackLevel'


# noinspection PyShadowingNames
def test_warning_msg_has_reason_and_reference(typeset_formula):
    with warnings.catch_warnings(record=True) as warns:
        warnings.simplefilter("always")
        typeset_formula(1.0)
    message = str(warns[0].message)
    assert "(The logarithm is a factor.)" in message
    assert message.endswith("-- Prefer better_formula.")


# noinspection PyShadowingNames
def test_signature_is_kept(typeset_formula):
    assert str(inspect.signature(typeset_formula)) == "(x, scale=2.0)"
    assert typeset_formula.__name__ == "typeset_formula"


# noinspection PyShadowingNames
def test_respect_global_filter(typeset_formula):
    with warnings.catch_warnings(record=True) as warns:
        warnings.simplefilter("once", category=FormulaCaveatWarning)
        typeset_formula(1.0)
        typeset_formula(2.0)
    assert len(warns) == 1


# noinspection PyShadowingNames
def test_warning_is_escalated(typeset_formula):
    with warnings.catch_warnings():
        warnings.simplefilter("error", category=FormulaCaveatWarning)
        with pytest.raises(FormulaCaveatWarning):
            typeset_formula(1.0)


@pytest.mark.parametrize("reason, reference", [(5, "f"), ("reason", None)])
def test_should_raise_type_error(reason, reference):
    with pytest.raises(TypeError):
        qgls.caveat.caveat(reason, reference)


@pytest.mark.parametrize(
    "docstring",
    [None, "Short docstring.", "Long docstring.\n\n    With a second paragraph.\n    "],
    ids=["no_docstring", "short_docstring", "long_docstring"],
)
def test_docstring_has_warning_directive(docstring):
    def foo():
        pass

    foo.__doc__ = docstring
    decorated = qgls.caveat.caveat(reason="A long reason " * 10, reference="better_formula")(foo)
    doc = decorated.__doc__
    directive = doc[doc.index(".. warning::") :]
    assert "   Prefer :func:`better_formula`." in directive
    assert all(len(line) <= qgls.caveat.LINE_LENGTH for line in directive.splitlines())
    if docstring:
        assert doc.startswith(docstring.splitlines()[0])
