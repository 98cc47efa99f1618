"""Formula caveats
===============

Some closed-form expressions are reproduced as printed even though they disagree
with the rest of the model. The ``@caveat`` decorator marks such functions: it
appends a Sphinx ``warning`` directive to the docstring and emits a
:class:`~qgls.errors.FormulaCaveatWarning` every time the function is called.

.. code-block:: python

    from qgls.caveat import caveat

    @caveat(reason="ln appears as a factor", reference="effective_temperature")
    def typeset_formula(x):
        ...

Use the standard warning filters to silence or escalate the warning.
"""

import re
import textwrap
import warnings
from typing import Callable

import wrapt

from qgls.errors import FormulaCaveatWarning

#: Width of the directive text appended to docstrings.
LINE_LENGTH = 70


def _directive(reason: str, reference: str) -> str:
    text = "{0}\n\nPrefer :func:`{1}`.".format(textwrap.dedent(reason).strip(), reference)
    lines = [".. warning::"]
    for paragraph in text.splitlines():
        if paragraph:
            lines.extend(textwrap.wrap(paragraph, width=LINE_LENGTH, initial_indent="   ", subsequent_indent="   "))
        else:
            lines.append("")
    return "".join("{0}\n".format(line) for line in lines)


def _document(docstring: str, reason: str, reference: str) -> str:
    lines = (docstring or "").splitlines(keepends=True)
    if lines:
        docstring = lines[0] + textwrap.dedent("".join(lines[1:]))
        docstring = docstring.rstrip("\n") + "\n\n"
    else:
        docstring = "\n"
    return docstring + _directive(reason, reference)


def caveat(reason: str, reference: str) -> Callable[[Callable], Callable]:
    """Mark a function as reproducing a formula that carries a caveat.

    :param reason: what is wrong with the formula.
    :param reference: name of the function to use instead.
    """
    if not isinstance(reason, str) or not isinstance(reference, str):
        raise TypeError("caveat() needs a reason and a reference, got {0!r}".format(reason))

    def decorate(wrapped: Callable) -> Callable:
        message = "Call to formula {0}, which is reproduced as printed. ({1}) -- Prefer {2}.".format(
            wrapped.__name__, re.sub(r"\s+", " ", reason.strip()), reference
        )
        wrapped.__doc__ = _document(wrapped.__doc__, reason, reference)

        @wrapt.decorator
        def wrapper(wrapped, instance, args, kwargs):
            warnings.warn(message, category=FormulaCaveatWarning, stacklevel=2)
            return wrapped(*args, **kwargs)

        return wrapper(wrapped)

    return decorate
