"""The Hopf-graph Lagrangian sphere ``{(h(z), conj z)}`` in ``P^k x C^(k+1)`` and its displacement."""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from .model import FlowModel, FlowState, chart_of, fs_distance
from .necklace import Locus, parametrised_frame, _random_sphere


def hopf_model(k: int, m: int = 1) -> FlowModel:
    """Model with critical locus ``P^k x C^(k+1)``, the home of the Hopf sphere."""
    return FlowModel(k=k, m=m, affine=k + 1)


def hopf_point(z, fd_step: float = 1e-5, scheme: str = "central") -> FlowState:
    """``(h(z), conj z)`` for ``z`` on the unit sphere of ``C^(k+1)``, with a tangent frame.

    The frame spans the image of the ``2k+1`` sphere directions at ``z``;
    the ``w`` part is empty.
    """
    z = np.asarray(z, dtype=complex)
    k = len(z) - 1
    if k < 1:
        raise DomainError(f"need k >= 1, got k={k}")
    z = z / np.linalg.norm(z)
    model = hopf_model(k)
    s = np.concatenate([z.real, z.imag])
    chart = chart_of(z)
    frame = parametrised_frame(model, Locus("hopf"), s, np.zeros(0), chart, fd_step, scheme)
    zeta = np.delete(z, chart) / z[chart]
    return FlowState(chart, zeta, np.zeros(0, dtype=complex), np.conj(z), frame)


def hopf_necklace(k: int, count: int = 1000, seed: int = 0, points=None,
                  fd_step: float = 1e-5, scheme: str = "central") -> list[FlowState]:
    """Sample the Hopf sphere with frames, ready for :func:`isotropy_residual`.

    ``points`` overrides the random sample with explicit unit vectors of
    ``C^(k+1)``.
    """
    if k < 1:
        raise DomainError(f"need k >= 1, got k={k}")
    if points is None:
        rng = np.random.default_rng(seed)
        points = [_unit_complex(rng, k + 1) for _ in range(count)]
    return [hopf_point(z, fd_step, scheme) for z in points]


def _unit_complex(rng, n):
    x = _random_sphere(rng, 2 * n)
    return x[:n] + 1j * x[n:]


def displacement_check(k: int, translation, count: int = 100, seed: int = 0) -> float:
    """Minimum distance between the Hopf sphere and its translate in the flat factor.

    Translating the ``C^(k+1)`` factor by ``t`` is a Hamiltonian isotopy
    fixing ``P^k``.  Over ``count x count`` sample pairs the distance
    combines the Fubini-Study distance on ``P^k`` with the flat distance;
    it is at least ``|t| - 2`` because the flat components lie on the unit
    sphere.
    """
    t = np.asarray(translation, dtype=complex).reshape(-1)
    if len(t) != k + 1:
        raise DomainError(f"translation must have {k + 1} components, got {len(t)}")
    norm = float(np.linalg.norm(t))
    if norm <= 2:
        raise DomainError(f"|translation| = {norm:g} <= 2 does not guarantee displacement")
    rng = np.random.default_rng(seed)
    z1 = np.array([_unit_complex(rng, k + 1) for _ in range(count)])
    z2 = np.array([_unit_complex(rng, k + 1) for _ in range(count)])
    base = fs_distance(z1[:, None, :], z2[None, :, :])
    flat = np.linalg.norm(np.conj(z1)[:, None, :] - (np.conj(z2)[None, :, :] + t), axis=-1)
    return float(np.min(np.sqrt(base ** 2 + flat ** 2)))
