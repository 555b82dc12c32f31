"""Classical RK4 for the negative gradient flow of ``F = Re pi``.

The vector field comes from :meth:`FlowModel.gradient`, i.e. numerical
differentials raised through the product metric; nothing here knows the
closed form of the model flow.  All routines accept a batch of states in
real coordinates ``(B, D)`` and integrate them in lock-step.
"""

from __future__ import annotations

import numpy as np

from ..errors import StepError
from .model import FlowModel, FlowState


def _steps(T: float, dt: float) -> list[float]:
    if dt <= 0:
        raise StepError(f"step must be positive, got dt={dt}")
    if T < 0:
        raise StepError(f"duration must be non-negative, got T={T}")
    n = int(np.floor(T / dt + 1e-9))
    out = [dt] * n
    rest = T - n * dt
    if rest > 1e-12 * max(1.0, T):
        out.append(rest)
    return out


def rk4_step(model: FlowModel, u: np.ndarray, h: float) -> np.ndarray:
    k1 = -model.gradient(u)
    k2 = -model.gradient(u + 0.5 * h * k1)
    k3 = -model.gradient(u + 0.5 * h * k2)
    k4 = -model.gradient(u + h * k3)
    return u + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def flow_batch(model: FlowModel, u0, T: float, dt: float = 1e-3,
               track_h: bool = False) -> tuple[np.ndarray, np.ndarray | None]:
    """Advance real states ``u0`` of shape ``(B, D)`` (or ``(D,)``) by time ``T``.

    Returns the final states and, with ``track_h``, the per-state maximum
    of ``|H(t) - H(0)|`` over the step grid.
    """
    steps = _steps(T, dt)
    u = np.array(u0, dtype=float)
    model.check_chart(u)
    h0 = model.H(u) if track_h else None
    drift = np.zeros(u.shape[:-1]) if track_h else None
    for h in steps:
        u = rk4_step(model, u, h)
        model.check_chart(u)
        if track_h:
            np.maximum(drift, np.abs(model.H(u) - h0), out=drift)
    return u, drift


def integrate_gradient_flow(model: FlowModel, state: FlowState, T: float,
                            dt: float = 1e-3) -> FlowState:
    """State after flowing for time ``T`` along ``-grad F``."""
    u, _ = flow_batch(model, state.real(model), T, dt)
    return FlowState.from_real(model, u, chart=state.base_chart)


def conservation_check(model: FlowModel, state: FlowState, T: float, dt: float = 1e-3) -> float:
    """Maximum drift of ``H = Im pi`` along the integrated trajectory."""
    _, drift = flow_batch(model, state.real(model), T, dt, track_h=True)
    return float(drift)


def random_state(model: FlowModel, rng: np.random.Generator, radius: float = 1.0) -> FlowState:
    """Random base point of ``P^k`` and ``w`` uniform in the ball of given radius in ``C^m``."""
    Z = rng.normal(size=model.k + 1) + 1j * rng.normal(size=model.k + 1)
    aff = rng.normal(size=model.affine) + 1j * rng.normal(size=model.affine)
    x = rng.normal(size=2 * model.m)
    x *= radius * rng.random() ** (1.0 / (2 * model.m)) / np.linalg.norm(x)
    w = x[:model.m] + 1j * x[model.m:]
    return FlowState.from_homogeneous(Z, w, aff)
