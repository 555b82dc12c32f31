"""Vanishing necklaces of Morse-Bott degenerations.

* :mod:`necklace.graded` and :mod:`necklace.spectral`: homology profiles and
  the degree-pairing search that decides whether Floer homology can vanish;
* :mod:`necklace.obstruct`: closed-form divisibility verdicts and their
  exhaustive verification;
* :mod:`necklace.flow`: numerical gradient flow and isotropy checks on the
  local model;
* :mod:`necklace.pencil`: exact analysis of pencils of quadrics.
"""

from .errors import (ChartError, DegeneratePencil, DomainError, FrameError, NecklaceError,
                     StepError, UnsupportedPencil)
from .graded import BundleSpec, GradedDims, gysin_support, necklace_profile
from .obstruct import ObstructionQuery, ObstructionReport, theoremB_cases, verify_theoremB
from .spectral import SpectralProfile, e1_dim, vanishing_feasible

__all__ = [
    "BundleSpec", "ChartError", "DegeneratePencil", "DomainError", "FrameError", "GradedDims",
    "NecklaceError", "ObstructionQuery", "ObstructionReport", "SpectralProfile", "StepError",
    "UnsupportedPencil", "e1_dim", "gysin_support", "necklace_profile", "theoremB_cases",
    "vanishing_feasible", "verify_theoremB",
]
