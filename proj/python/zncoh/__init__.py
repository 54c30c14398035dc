"""Integral cohomology of Z^n x| Z/m for square-free m."""

import json

from . import _core
from ._core import ZncohError

__all__ = ["ZncohError", "analyze", "compare", "rank", "rst", "isotropy", "census", "render"]


def _document(spec):
    if isinstance(spec, str):
        return spec
    return json.dumps(spec)


def analyze(spec, max_degree=None, engine="both", variant="both"):
    return json.loads(_core.analyze(_document(spec), max_degree, engine, variant))


def compare(spec, max_degree=None):
    return json.loads(_core.compare(_document(spec), max_degree))


def rank(spec, max_degree=None):
    return json.loads(_core.rank(_document(spec), max_degree))


def rst(spec, prime=None):
    return json.loads(_core.rst(_document(spec), prime))


def isotropy(spec, prime=None):
    return json.loads(_core.isotropy(_document(spec), prime))


def census(spec):
    return json.loads(_core.census(_document(spec)))


def render(result, format="md", prime=None):
    return _core.render(json.dumps(result), format, prime)
