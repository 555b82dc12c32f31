"""Local Morse-Bott model ``P^k x C^a x C^m -> C, (zeta, v, w) -> pi``.

The default fibration is ``pi = w_1^2 + ... + w_m^2``: its critical set is
``{w = 0} = P^k x C^a`` and its holomorphic Hessian in ``w`` is ``2 I``.
The flat factor ``C^a`` (``affine``) is empty unless a Lagrangian that
lives in ``P^k x C^(k+1)`` is studied.

Conventions
-----------
Points of ``P^k`` are handled in the ``k+1`` standard affine charts
``U_c = {Z_c != 0}`` with ``zeta = (Z_j / Z_c)_{j != c}``; a homogeneous
vector is placed in the chart of its largest coordinate modulus (lowest
index on ties), so every chart coordinate satisfies ``|zeta_j| <= 1``.

The Fubini-Study form is ``(i/2) del delbar log(1 + |zeta|^2)``, so a line has
area ``pi``.  Its hermitian coefficient matrix is

    h_ab = delta_ab / (1 + |zeta|^2) - conj(zeta_a) zeta_b / (1 + |zeta|^2)^2

and for complex tangent vectors ``u, v`` of the chart

    omega_FS(u, v) = -Im(u^T h conj(v)),     g_FS(u, v) = Re(u^T h conj(v)).

On the flat factors ``omega_0(u, v) = Im(conj(u) . v)`` and ``g_0 = Re``.
The product form is ``Omega = omega_FS + omega_0`` with metric ``g = Omega(., J .)``.

Real coordinates are ``[Re z, Im z]`` with ``z = (zeta, v, w)``.

Hamiltonian vector fields use ``iota_X Omega = -dH``; with this sign the
Hamiltonian flow of ``H = Im pi`` coincides with the negative gradient
flow of ``F = Re pi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import ChartError, DomainError


def quadratic_potential(zeta, affine, w):
    """``pi = sum w_j^2`` (batched over leading axes)."""
    return np.sum(w * w, axis=-1)


@dataclass(frozen=True)
class FlowModel:
    """Product model with critical locus ``P^k x C^affine`` and normal rank ``m``.

    ``potential(zeta, affine, w)`` must be holomorphic with real Taylor
    coefficients (``pi(conj z) = conj pi(z)``), vectorised over leading
    axes, and accept complex arguments.  The real-coefficient condition is
    what lets :meth:`differential` use a complex-step difference.
    """

    k: int = 0
    m: int = 1
    affine: int = 0
    potential: Callable = field(default=quadratic_potential, compare=False)
    fd_step: float = 1e-5
    chart_limit: float = 1e8

    def __post_init__(self):
        if self.k < 0:
            raise DomainError(f"k must be >= 0, got {self.k}")
        if self.m < 1:
            raise DomainError(f"normal rank m must be >= 1, got {self.m}")
        if self.affine < 0:
            raise DomainError(f"affine dimension must be >= 0, got {self.affine}")

    @property
    def complex_dim(self) -> int:
        return self.k + self.affine + self.m

    @property
    def real_dim(self) -> int:
        return 2 * self.complex_dim

    # -- coordinates -----------------------------------------------------

    def split(self, z):
        """Complex vector(s) ``(..., k+a+m)`` into ``(zeta, affine, w)``."""
        k, a = self.k, self.affine
        return z[..., :k], z[..., k:k + a], z[..., k + a:]

    def to_real(self, z) -> np.ndarray:
        """Complex ``(..., k+a+m)`` into real coordinates ``[Re z, Im z]``."""
        z = np.asarray(z, dtype=complex)
        return np.concatenate([z.real, z.imag], axis=-1)

    def to_complex(self, u) -> np.ndarray:
        n = self.complex_dim
        return u[..., :n] + 1j * u[..., n:]

    def base_index(self) -> np.ndarray:
        """Real-coordinate indices of ``(Re zeta, Im zeta)``."""
        n, k = self.complex_dim, self.k
        return np.r_[0:k, n:n + k]

    # -- functions -------------------------------------------------------

    def pi(self, z):
        zeta, aff, w = self.split(np.asarray(z, dtype=complex))
        return self.potential(zeta, aff, w)

    def F_ext(self, u):
        """Holomorphic extension of ``Re pi`` to complexified real coordinates.

        ``(pi(re + i im) + pi(re - i im)) / 2`` equals ``Re pi`` on real
        input because ``pi`` has real Taylor coefficients.
        """
        n = self.complex_dim
        a, b = u[..., :n], 1j * u[..., n:]
        return 0.5 * (self.potential(*self.split(a + b)) + self.potential(*self.split(a - b)))

    def H_ext(self, u):
        """Holomorphic extension of ``Im pi``."""
        n = self.complex_dim
        a, b = u[..., :n], 1j * u[..., n:]
        return (self.potential(*self.split(a + b)) - self.potential(*self.split(a - b))) / 2j

    def F(self, u) -> np.ndarray:
        return np.real(self.F_ext(np.asarray(u, dtype=float)))

    def H(self, u) -> np.ndarray:
        return np.real(self.H_ext(np.asarray(u, dtype=float)))

    def differential(self, u) -> np.ndarray:
        """``dF`` at real points ``u`` of shape ``(..., D)`` by complex-step differences.

        ``dF_j = Im F(u + i h e_j) / h`` has no subtractive cancellation,
        so it stays accurate where ``|F|`` is many orders larger than the
        derivative.  The step is relative to the largest coordinate.
        """
        u = np.asarray(u, dtype=float)
        d = u.shape[-1]
        h = self.fd_step * np.maximum(1.0, np.max(np.abs(u), axis=-1, keepdims=True))
        probe = np.empty(u.shape[:-1] + (d, d), dtype=complex)   # (..., D, D)
        probe[...] = u[..., None, :]
        diag = np.arange(d)
        probe[..., diag, diag] += 1j * h
        return np.imag(self.F_ext(probe)) / h

    def metric(self, u) -> np.ndarray:
        """Real Fubini-Study block ``(..., 2k, 2k)`` of the product metric, on ``base_index``."""
        zeta, _, _ = self.split(self.to_complex(np.asarray(u, dtype=float)))
        return fs_real_metric(zeta)

    def gradient(self, u) -> np.ndarray:
        """``grad F = g^{-1} dF`` for the product metric."""
        u = np.asarray(u, dtype=float)
        df = self.differential(u)
        if self.k == 0:
            return df
        idx = self.base_index()
        df[..., idx] = np.linalg.solve(self.metric(u), df[..., idx, None])[..., 0]
        return df

    def holomorphic_hessian(self, z, h: float = 1e-4) -> np.ndarray:
        """Central-difference Hessian of ``pi`` in the normal variables ``w``."""
        z = np.asarray(z, dtype=complex)
        off = self.k + self.affine
        m = self.m
        out = np.empty((m, m), dtype=complex)
        for i in range(m):
            for j in range(m):
                ei = np.zeros_like(z)
                ej = np.zeros_like(z)
                ei[off + i] = h
                ej[off + j] = h
                out[i, j] = (self.pi(z + ei + ej) - self.pi(z + ei - ej)
                             - self.pi(z - ei + ej) + self.pi(z - ei - ej)) / (4 * h * h)
        return out

    def check_chart(self, u) -> None:
        u = np.asarray(u)
        if not np.all(np.isfinite(u)):
            raise ChartError("trajectory left the chart domain (non-finite coordinates)")
        if self.k and np.max(np.abs(u[..., self.base_index()])) > self.chart_limit:
            raise ChartError(f"base coordinates exceed chart limit {self.chart_limit:g}")


# -- Fubini-Study ----------------------------------------------------------

def fs_hermitian(zeta) -> np.ndarray:
    """Coefficient matrix ``h_ab`` of the Fubini-Study form at chart points ``(..., k)``."""
    zeta = np.asarray(zeta, dtype=complex)
    k = zeta.shape[-1]
    rho = 1.0 + np.sum(np.abs(zeta) ** 2, axis=-1)[..., None, None]
    outer = np.conj(zeta)[..., :, None] * zeta[..., None, :]
    return np.eye(k) / rho - outer / rho ** 2


def fs_real_metric(zeta) -> np.ndarray:
    h = fs_hermitian(zeta)
    hr, hi = h.real, h.imag
    top = np.concatenate([hr, hi], axis=-1)
    bottom = np.concatenate([-hi, hr], axis=-1)
    return np.concatenate([top, bottom], axis=-2)


def omega_matrix(zeta, frame_base, frame_flat) -> np.ndarray:
    """Gram matrix ``Omega(v_i, v_j)`` of a frame at one point.

    ``frame_base`` holds the chart components ``(r, k)`` and ``frame_flat``
    the components on the flat factors ``(r, a+m)``.
    """
    out = np.zeros((frame_base.shape[0], frame_base.shape[0]))
    if frame_base.shape[1]:
        h = fs_hermitian(zeta)
        out -= np.imag(frame_base @ h @ np.conj(frame_base).T)
    if frame_flat.shape[1]:
        out += np.imag(np.conj(frame_flat) @ frame_flat.T)
    return out


# -- charts ----------------------------------------------------------------

def chart_of(Z) -> int:
    """Chart index for a homogeneous vector: largest modulus, lowest index on ties."""
    mod = np.abs(np.asarray(Z))
    return int(np.flatnonzero(mod == mod.max())[0])


def to_chart(Z, chart: int) -> np.ndarray:
    Z = np.asarray(Z, dtype=complex)
    if Z[..., chart].ndim == 0 and Z[chart] == 0:
        raise ChartError(f"point has zero coordinate {chart}; outside chart U_{chart}")
    return np.delete(Z, chart, axis=-1) / Z[..., chart:chart + 1]


def from_chart(zeta, chart: int) -> np.ndarray:
    zeta = np.asarray(zeta, dtype=complex)
    return np.insert(zeta, chart, 1.0, axis=-1)


def fs_distance(Z1, Z2) -> np.ndarray:
    """Fubini-Study geodesic distance between homogeneous vectors (line area ``pi``)."""
    Z1 = np.asarray(Z1, dtype=complex)
    Z2 = np.asarray(Z2, dtype=complex)
    n1 = np.linalg.norm(Z1, axis=-1)
    n2 = np.linalg.norm(Z2, axis=-1)
    overlap = np.abs(np.sum(np.conj(Z1) * Z2, axis=-1)) / (n1 * n2)
    return np.arccos(np.clip(overlap, 0.0, 1.0))


@dataclass
class FlowState:
    """Point of the model in chart ``base_chart``, optionally with a tangent frame.

    ``frame`` rows are complex tangent vectors ``(dzeta, daffine, dw)``.
    """

    base_chart: int
    zeta: np.ndarray
    w: np.ndarray
    affine: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    frame: np.ndarray | None = None

    def __post_init__(self):
        self.zeta = np.asarray(self.zeta, dtype=complex).reshape(-1)
        self.w = np.asarray(self.w, dtype=complex).reshape(-1)
        self.affine = np.asarray(self.affine, dtype=complex).reshape(-1)
        if not (np.all(np.isfinite(self.zeta)) and np.all(np.isfinite(self.w))
                and np.all(np.isfinite(self.affine))):
            raise ChartError("state coordinates must be finite")
        if self.frame is not None:
            self.frame = np.asarray(self.frame, dtype=complex)

    @property
    def z(self) -> np.ndarray:
        return np.concatenate([self.zeta, self.affine, self.w])

    @property
    def homogeneous(self) -> np.ndarray:
        return from_chart(self.zeta, self.base_chart)

    def real(self, model: FlowModel) -> np.ndarray:
        return model.to_real(self.z)

    @classmethod
    def from_real(cls, model: FlowModel, u, chart: int = 0, frame=None) -> "FlowState":
        zeta, aff, w = model.split(model.to_complex(np.asarray(u, dtype=float)))
        return cls(chart, zeta, w, aff, frame)

    @classmethod
    def from_homogeneous(cls, Z, w, affine=()) -> "FlowState":
        Z = np.asarray(Z, dtype=complex)
        c = chart_of(Z)
        return cls(c, to_chart(Z, c), w, np.asarray(affine, dtype=complex))
