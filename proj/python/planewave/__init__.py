"""Conformal geometry of homogeneous plane waves."""

import json as _json

from . import _core
from ._core import (
    BudgetError,
    ChartMap,
    DimensionError,
    DomainError,
    HeisElement,
    IoError,
    ModelSpec,
    PreconditionError,
    SpecError,
    characteristic_polynomial,
    gauge_value,
    heis_exp,
    l_eigenvalues,
    realize_conf_flow,
    realize_flip,
    realize_heis,
    realize_K,
    realize_translation_flow,
)

__version__ = _core.__version__


def spectral_type(spec):
    return _json.loads(_core.spectral_type(spec))


def conformal_flatness(spec, points, tol=1e-7, fd_step=1e-2):
    return _json.loads(_core.conformal_flatness(spec, points, tol, fd_step))


def similarity_factor(spec, phi, points, tol=1e-8):
    return _json.loads(_core.similarity_factor(spec, phi, points, tol))


def lattice_preservation(A, tol=1e-6):
    return _json.loads(_core.lattice_preservation(A, tol))


def build_example(name, adjusted=False, b=1.0):
    return _json.loads(_core.build_example(name, adjusted, b))


def validate_spec(text):
    """Canonical form of a spec document; raises SpecError with line-anchored messages."""
    return _json.loads(_core.validate_spec(text))


def run_example(name, adjusted=False, b=1.0, samples=32, seed=0):
    report, passed = _core.run_example(name, adjusted, b, samples, seed)
    return _json.loads(report), passed
