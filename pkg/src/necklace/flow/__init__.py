"""Numerical checks of the necklace construction on the local Morse-Bott model."""

from .hopf import displacement_check, hopf_model, hopf_necklace, hopf_point
from .integrate import conservation_check, flow_batch, integrate_gradient_flow, random_state
from .model import FlowModel, FlowState, fs_distance, fs_hermitian
from .necklace import (Locus, NecklaceSample, isotropy_residual, morse_bott_index,
                       negative_control, sample_necklace, stable_manifold_dim)

__all__ = [
    "FlowModel", "FlowState", "Locus", "NecklaceSample",
    "conservation_check", "displacement_check", "flow_batch", "fs_distance", "fs_hermitian",
    "hopf_model", "hopf_necklace", "hopf_point", "integrate_gradient_flow", "isotropy_residual",
    "morse_bott_index", "negative_control", "random_state", "sample_necklace",
    "stable_manifold_dim",
]
