"""Vanishing necklaces ``N_eps(L) = {F = eps} ∩ S(L)`` in the local model.

For ``pi = sum w_j^2`` the stable manifold of a Lagrangian ``L`` in the
critical locus is ``L x R^m`` (the real slice ``Im w = 0`` is where the
flow contracts), so ``N_eps(L) = L x sqrt(eps) S^(m-1)``.  It is taken
analytically; forward convergence is checked numerically by integration.

Tangent frames come from central differences of the parametrisation
``(point of L, point of S^(m-1)) -> model`` at the sampled point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, FrameError
from .integrate import flow_batch
from .model import FlowModel, FlowState, chart_of, omega_matrix, to_chart


@dataclass(frozen=True)
class Locus:
    """Compact Lagrangian ``L`` inside the critical locus.

    ``kind`` is one of

    * ``"point"``: the critical locus is a point (``k = 0``);
    * ``"real"``: ``diag(exp(i*phases)) . RP^k``, the real locus rotated by
      a diagonal unitary (no rotation when ``phases`` is None);
    * ``"hopf"``: the graph ``{(h(z), conj z) : |z| = 1}`` in
      ``P^k x C^(k+1)``, where ``h`` is the Hopf map.
    """

    kind: str
    phases: tuple[float, ...] | None = None

    def check(self, model: FlowModel) -> None:
        if self.kind == "point":
            if model.k != 0 or model.affine != 0:
                raise DomainError("point locus needs k = 0 and no affine factor")
        elif self.kind == "real":
            if model.k < 1 or model.affine != 0:
                raise DomainError("real locus needs k >= 1 and no affine factor")
            if self.phases is not None and len(self.phases) != model.k + 1:
                raise DomainError(f"need {model.k + 1} phases, got {len(self.phases)}")
        elif self.kind == "hopf":
            if model.k < 1 or model.affine != model.k + 1:
                raise DomainError("Hopf locus needs k >= 1 and an affine factor of dimension k+1")
        else:
            raise DomainError(f"unknown locus kind {self.kind!r}")

    def real_dim(self, model: FlowModel) -> int:
        return {"point": 0, "real": model.k, "hopf": 2 * model.k + 1}[self.kind]

    def param_dim(self, model: FlowModel) -> int:
        """Ambient dimension of the parameter sphere."""
        return {"point": 0, "real": model.k + 1, "hopf": 2 * model.k + 2}[self.kind]

    def embed(self, model: FlowModel, s):
        """Parameter on the unit sphere into ``(homogeneous Z, affine)``."""
        s = np.asarray(s, dtype=float)
        if self.kind == "point":
            return np.ones(1, dtype=complex), np.zeros(0, dtype=complex)
        if self.kind == "real":
            Z = s.astype(complex)
            if self.phases is not None:
                Z = Z * np.exp(1j * np.asarray(self.phases))
            return Z, np.zeros(0, dtype=complex)
        z = s[: model.k + 1] + 1j * s[model.k + 1:]
        return z, np.conj(z)


def sphere_tangents(x) -> np.ndarray:
    """Orthonormal basis (rows) of the tangent space ``x^perp`` of a round sphere."""
    x = np.asarray(x, dtype=float)
    if x.size <= 1:
        return np.zeros((0, x.size))
    _, _, vh = np.linalg.svd(x[None, :])
    return vh[1:]


def _along_sphere(x, v, t):
    y = x + t * v
    return y * (np.linalg.norm(x) / np.linalg.norm(y))


def _random_sphere(rng, dim, radius=1.0):
    x = rng.normal(size=dim)
    return radius * x / np.linalg.norm(x)


def _chart_point(model, locus, s, x, chart):
    Z, aff = locus.embed(model, s)
    zeta = to_chart(Z, chart) if model.k else np.zeros(0, dtype=complex)
    return np.concatenate([zeta, aff, np.asarray(x, dtype=complex)])


def parametrised_frame(model: FlowModel, locus: Locus, s, x, chart: int, h: float,
                       scheme: str = "central") -> np.ndarray:
    """Tangent frame of ``L x sqrt(eps) S^(m-1)`` at ``(s, x)`` in the given chart.

    ``scheme`` is ``"central"`` (error ``O(h^2)``) or ``"forward"`` (``O(h)``).
    """
    rows = []
    base = _chart_point(model, locus, s, x, chart)
    for v in sphere_tangents(s) if len(s) else ():
        plus = _chart_point(model, locus, _along_sphere(s, v, h), x, chart)
        if scheme == "central":
            minus = _chart_point(model, locus, _along_sphere(s, v, -h), x, chart)
            rows.append((plus - minus) / (2 * h))
        else:
            rows.append((plus - base) / h)
    for v in sphere_tangents(x):
        plus = _chart_point(model, locus, s, _along_sphere(x, v, h), chart)
        if scheme == "central":
            minus = _chart_point(model, locus, s, _along_sphere(x, v, -h), chart)
            rows.append((plus - minus) / (2 * h))
        else:
            rows.append((plus - base) / h)
    return np.array(rows, dtype=complex).reshape(len(rows), len(base))


def isotropy_residual(model: FlowModel, points) -> float:
    """Largest ``|Omega(v_i, v_j)|`` over the frames attached to ``points``.

    ``points`` is a :class:`NecklaceSample` or an iterable of
    :class:`FlowState` carrying frames of at least two vectors.  The
    Fubini-Study block is the first ``len(zeta)`` components of each
    frame vector; the rest are flat.
    """
    if isinstance(points, NecklaceSample):
        points = points.points
    worst = 0.0
    for p in points:
        if p.frame is None or len(p.frame) < 2:
            raise FrameError("isotropy needs at least two tangent vectors at every point")
        k = len(p.zeta)
        if k != model.k:
            raise DomainError(f"point lives on P^{k}, model on P^{model.k}")
        gram = omega_matrix(p.zeta, p.frame[:, :k], p.frame[:, k:])
        worst = max(worst, float(np.max(np.abs(gram))))
    return worst


def morse_bott_index(dim_X: int, dim_crit: int) -> int:
    """Morse-Bott index of ``Re pi`` for a holomorphic ``pi``: half the real codimension.

    A Lagrangian ``L`` of the critical manifold has ``dim L = dim_crit / 2``
    and its stable manifold ``dim L + index = dim_X / 2``: it is Lagrangian.
    """
    if not dim_X > dim_crit >= 0:
        raise DomainError(f"need dim_X > dim_crit >= 0, got {dim_X}, {dim_crit}")
    if (dim_X - dim_crit) % 2 or dim_crit % 2:
        raise DomainError(f"real dimensions of a holomorphic critical set must be even: {dim_X}, {dim_crit}")
    index = (dim_X - dim_crit) // 2
    assert dim_crit // 2 + index == dim_X // 2
    return index


def stable_manifold_dim(dim_L: int, dim_X: int, dim_crit: int) -> int:
    return dim_L + morse_bott_index(dim_X, dim_crit)


@dataclass
class NecklaceSample:
    points: list[FlowState]
    epsilon: float
    metrics: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return 0 if not self.points or self.points[0].frame is None else len(self.points[0].frame)


def sample_necklace(model: FlowModel, locus: Locus, epsilon: float, count: int = 200,
                    seed: int = 0, fd_step: float | None = None, scheme: str = "central",
                    flow_time: float | None = 5.0, dt: float = 1e-3) -> NecklaceSample:
    """Sample ``count`` points of ``N_eps(L)`` with tangent frames and residual metrics.

    ``metrics`` holds

    * ``fiber_residual``: ``max |pi - eps|``;
    * ``isotropy_residual``: :func:`isotropy_residual` (None below dimension 2);
    * ``dimension`` / ``expected_dimension``: frame rank vs ``dim L + m - 1``;
    * ``conservation_drift`` and ``distance_to_L`` after flowing for
      ``flow_time`` (skipped when ``flow_time`` is None).

    For ``k = 0, m = 1`` the necklace is the two-point sphere ``S^0`` and is
    returned exactly, whatever ``count``.
    """
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    locus.check(model)
    h = model.fd_step if fd_step is None else fd_step
    rng = np.random.default_rng(seed)
    radius = np.sqrt(epsilon)
    pdim = locus.param_dim(model)

    if locus.kind == "point" and model.m == 1:
        params = [(np.zeros(0), np.array([radius])), (np.zeros(0), np.array([-radius]))]
    else:
        params = [(_random_sphere(rng, pdim) if pdim else np.zeros(0),
                   _random_sphere(rng, model.m, radius)) for _ in range(count)]

    points = []
    for s, x in params:
        Z, aff = locus.embed(model, s)
        chart = chart_of(Z) if model.k else 0
        z = _chart_point(model, locus, s, x, chart)
        frame = parametrised_frame(model, locus, s, x, chart, h, scheme)
        zeta, a, w = model.split(z)
        points.append(FlowState(chart, zeta, w, a, frame))

    Z = np.array([p.z for p in points])
    metrics = {
        "epsilon": float(epsilon),
        "count": len(points),
        "fiber_residual": float(np.max(np.abs(model.pi(Z) - epsilon))),
        "expected_dimension": locus.real_dim(model) + model.m - 1,
    }
    ranks = {int(np.linalg.matrix_rank(np.concatenate([p.frame.real, p.frame.imag], axis=1)))
             if len(p.frame) else 0 for p in points}
    metrics["dimension"] = ranks.pop() if len(ranks) == 1 else sorted(ranks)
    metrics["isotropy_residual"] = (isotropy_residual(model, points)
                                    if points[0].frame.shape[0] >= 2 else None)
    if flow_time is not None:
        U = model.to_real(Z)
        UT, drift = flow_batch(model, U, flow_time, dt, track_h=True)
        zT = model.to_complex(UT)
        nb = model.k + model.affine
        w_final = zT[:, nb:]
        base_move = np.linalg.norm(zT[:, :nb] - Z[:, :nb], axis=1)
        metrics["conservation_drift"] = float(drift.max())
        # (zeta, affine, 0) lies on L, so this bounds the distance to L.
        metrics["distance_to_L"] = float(np.max(np.linalg.norm(w_final, axis=1) + base_move))
        metrics["flow_time"] = float(flow_time)
    return NecklaceSample(points, float(epsilon), metrics)


def negative_control(count: int = 50, seed: int = 0, h: float = 1e-5) -> list[FlowState]:
    """Points with frames on the graph ``{x + i A x}`` in ``C^2``, ``A`` skew.

    A real graph ``{x + i A x}`` is Lagrangian exactly when ``A`` is
    symmetric; the skew choice ``A = [[0, 1], [-1, 0]]`` gives
    ``omega_0(d/dx_1, d/dx_2) = 2`` everywhere.
    """
    A = np.array([[0.0, 1.0], [-1.0, 0.0]])
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        x = rng.uniform(-1, 1, size=2)
        graph = lambda y: y + 1j * (A @ y)
        frame = np.array([(graph(x + h * e) - graph(x - h * e)) / (2 * h) for e in np.eye(2)])
        out.append(FlowState(0, [], graph(x), frame=frame))
    return out
