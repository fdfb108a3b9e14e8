"""Dimensions of random 1-variable Bedford-McMullen carpets.

Closed-form almost-sure box, quasi-Assouad and Assouad dimensions and the
Assouad spectrum, exact stopping times, covering counts by enumeration, a
reproducible realisation sampler and seeded Monte Carlo checks.
"""
__version__ = "0.1.0"

from .model import Ensemble, Pattern, ValidationError, generic_example, load_ensemble, save_ensemble  # noqa: E402
from .formulas import (  # noqa: E402
    assouad_dimension, assouad_spectrum, box_dimension, phase_transition, quasi_assouad,
    spectrum_curve, spectrum_min_form, summarize,
)
from .sampler import explicit_omega, sample_omega  # noqa: E402

__all__ = [
    "Ensemble", "Pattern", "ValidationError", "generic_example", "load_ensemble", "save_ensemble",
    "assouad_dimension", "assouad_spectrum", "box_dimension", "phase_transition", "quasi_assouad",
    "spectrum_curve", "spectrum_min_form", "summarize", "explicit_omega", "sample_omega",
    "__version__",
]
