"""Pencils of quadrics ``lambda_0 F_0 + lambda_1 F_1`` in exact Gaussian-rational arithmetic.

``F_i(z) = z^T A_i z`` for symmetric matrices ``A_i``.  The member at
``lambda`` is singular exactly when ``M_lambda = lambda_0 A_0 + lambda_1 A_1``
is, and its singular locus is ``P(ker M_lambda)``.  The total space of the
pencil is singular at ``(x, lambda)`` iff ``x`` lies on the base locus
``F_0 = F_1 = 0`` and on ``Sing(Sigma_lambda)``.

Supported: pencils whose discriminant ``det M_lambda`` splits into linear
factors over Q(i), with kernels of dimension at most 2 when base-singular
points are requested.  Exact linear algebra and factoring use sympy's
``QQ_I`` domain.

>>> p = QuadricPencil.sum_of_squares(3, [1, 2])
>>> [fmt_point(b.coords) for b in base_singular_intersection(p)]
['[1:-i:0:0]', '[1:i:0:0]']
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from sympy import Poly, symbols
from sympy.polys.matrices import DomainMatrix

from .errors import DegeneratePencil, DomainError, UnsupportedPencil
from .exact import QQ, QQ_I, fmt, fmt_point, gaussian_sqrt, normalize, parse, sort_key

_L0, _L1 = symbols("lambda0 lambda1")


def _matrix(rows) -> DomainMatrix:
    rows = [[QQ_I.convert(parse(x) if isinstance(x, str) else x) for x in row] for row in rows]
    size = len(rows)
    if any(len(r) != size for r in rows):
        raise DomainError("pencil matrices must be square")
    return DomainMatrix(rows, (size, size), QQ_I)


@dataclass(frozen=True)
class QuadricPencil:
    a0: DomainMatrix
    a1: DomainMatrix

    def __post_init__(self):
        if not isinstance(self.a0, DomainMatrix):
            object.__setattr__(self, "a0", _matrix(self.a0))
        if not isinstance(self.a1, DomainMatrix):
            object.__setattr__(self, "a1", _matrix(self.a1))
        if self.a0.shape != self.a1.shape:
            raise DomainError(f"matrix shapes differ: {self.a0.shape} vs {self.a1.shape}")
        if self.a0.shape[0] < 2:
            raise DomainError("need at least two homogeneous coordinates")
        for a in (self.a0, self.a1):
            if a != a.transpose():
                raise DomainError("pencil matrices must be symmetric")
        if self.a0.is_zero_matrix and self.a1.is_zero_matrix:
            raise DomainError("both quadrics vanish identically")

    @property
    def n(self) -> int:
        """Dimension of the ambient projective space."""
        return self.a0.shape[0] - 1

    @classmethod
    def sum_of_squares(cls, n: int, coeffs) -> "QuadricPencil":
        """``F_0 = sum z_j^2``, ``F_1 = -(a_2 z_2^2 + ... + a_n z_n^2)``."""
        coeffs = [QQ_I.convert(parse(c) if isinstance(c, str) else c) for c in coeffs]
        if n < 2 or len(coeffs) != n - 1:
            raise DomainError(f"need n >= 2 and n-1 coefficients, got n={n}, {len(coeffs)}")
        return cls.diagonal([1] * (n + 1), [0, 0] + [-c for c in coeffs])

    @classmethod
    def diagonal(cls, d0, d1) -> "QuadricPencil":
        size = len(d0)
        zero = QQ_I(0)

        def diag(d):
            d = [QQ_I.convert(parse(x) if isinstance(x, str) else x) for x in d]
            return DomainMatrix([[d[i] if i == j else zero for j in range(size)]
                                 for i in range(size)], (size, size), QQ_I)

        return cls(diag(d0), diag(d1))

    def member(self, lam) -> DomainMatrix:
        l0, l1 = (QQ_I.convert(x) for x in lam)
        return self.a0 * l0 + self.a1 * l1

    def form(self, which: int, vec):
        a = self.a0 if which == 0 else self.a1
        return _quad(a, vec)

    # -- document I/O ----------------------------------------------------

    @classmethod
    def from_document(cls, doc: dict) -> "QuadricPencil":
        try:
            pencil = cls(doc["a0"], doc["a1"])
        except KeyError as exc:
            raise DomainError(f"pencil document lacks {exc.args[0]!r}") from exc
        if "n" in doc and doc["n"] != pencil.n:
            raise DomainError(f"document says n={doc['n']} but matrices give n={pencil.n}")
        return pencil

    @classmethod
    def load(cls, path) -> "QuadricPencil":
        with open(path) as fh:
            return cls.from_document(json.load(fh))

    def to_document(self) -> dict:
        return {
            "n": self.n,
            "a0": [[fmt(x) for x in row] for row in self.a0.to_list()],
            "a1": [[fmt(x) for x in row] for row in self.a1.to_list()],
        }


def _quad(a: DomainMatrix, vec):
    size = a.shape[0]
    rows = a.to_list()
    vec = [QQ_I.convert(v) for v in vec]
    total = QQ_I(0)
    for i in range(size):
        if not vec[i]:
            continue
        acc = QQ_I(0)
        for j in range(size):
            acc += rows[i][j] * vec[j]
        total += vec[i] * acc
    return total


def _bilinear(a: DomainMatrix, u, v):
    rows = a.to_list()
    return sum((u[i] * rows[i][j] * v[j] for i in range(len(u)) for j in range(len(v))), QQ_I(0))


def _apply(a: DomainMatrix, vec) -> list:
    return [sum((x * y for x, y in zip(row, vec)), QQ_I(0)) for row in a.to_list()]


@dataclass(frozen=True)
class SingularFiberRecord:
    lam: tuple
    multiplicity: int
    kernel_basis: tuple[tuple, ...]

    @property
    def kernel_dim(self) -> int:
        return len(self.kernel_basis)

    def to_dict(self) -> dict:
        return {
            "lambda": [fmt(x) for x in self.lam],
            "multiplicity": self.multiplicity,
            "kernel": [[fmt(x) for x in v] for v in self.kernel_basis],
        }


@dataclass(frozen=True)
class BaseSingularPoint:
    coords: tuple
    lam: tuple

    def to_dict(self) -> dict:
        return {"point": [fmt(x) for x in self.coords], "lambda": [fmt(x) for x in self.lam]}


def discriminant(pencil: QuadricPencil) -> Poly:
    """``det(lambda_0 A_0 + lambda_1 A_1)`` as a binary form over Q(i)."""
    ring = QQ_I[_L0, _L1]
    g0, g1 = ring.gens
    size = pencil.n + 1
    m0, m1 = pencil.a0.to_list(), pencil.a1.to_list()
    rows = [[g0 * ring.convert_from(m0[i][j], QQ_I) + g1 * ring.convert_from(m1[i][j], QQ_I)
             for j in range(size)] for i in range(size)]
    det = DomainMatrix(rows, (size, size), ring).det()
    return Poly(ring.to_sympy(det), _L0, _L1, domain=QQ_I)


def singular_parameters(pencil: QuadricPencil) -> list[SingularFiberRecord]:
    """Roots of the discriminant with multiplicities and exact kernel bases.

    Raises :class:`DegeneratePencil` when the discriminant vanishes
    identically or one generator is the zero quadric, and
    :class:`UnsupportedPencil` when a root is not Gaussian-rational.
    """
    disc = discriminant(pencil)
    if disc.is_zero:
        raise DegeneratePencil("discriminant vanishes identically: every member is singular")
    _, factors = disc.factor_list()
    records = []
    for factor, mult in factors:
        if factor.total_degree() == 0:
            continue
        if factor.total_degree() != 1:
            raise UnsupportedPencil(f"discriminant factor {factor.as_expr()} has no Gaussian-rational root")
        alpha = QQ_I.convert(factor.coeff_monomial(_L0))
        beta = QQ_I.convert(factor.coeff_monomial(_L1))
        lam = tuple(normalize([beta, -alpha]))
        member = pencil.member(lam)
        if member.is_zero_matrix and (pencil.a0.is_zero_matrix or pencil.a1.is_zero_matrix):
            raise DegeneratePencil(f"member at {fmt_point(lam)} is the zero quadric")
        kernel = member.nullspace().to_list()
        basis = tuple(sorted((tuple(normalize(v)) for v in kernel), key=sort_key, reverse=True))
        records.append(SingularFiberRecord(lam, int(mult), basis))
    records.sort(key=lambda r: sort_key(r.lam))
    return records


def _binary_quadratic_roots(a, b, c) -> list[tuple]:
    """Projective roots ``(s:t)`` of ``a s^2 + b s t + c t^2`` over Q(i)."""
    if not (a or b or c):
        return []
    if not a:
        roots = [(QQ_I(1), QQ_I(0))]
        if b:
            roots.append((-c, b))
        return roots
    root = gaussian_sqrt(b * b - 4 * a * c)
    if root is None:
        raise UnsupportedPencil("base-singular points are not Gaussian-rational")
    return [((-b + root) / (2 * a), QQ_I(1)), ((-b - root) / (2 * a), QQ_I(1))]


def singular_point_criterion(pencil: QuadricPencil, point, lam) -> bool:
    """Is ``(point, lam)`` a singular point of the total space of the pencil?

    True iff ``F_0(point) = F_1(point) = 0`` and ``grad Q_lam(point) = 0``,
    i.e. the point is on the base locus and singular on its member.
    """
    point = [QQ_I.convert(parse(x) if isinstance(x, str) else x) for x in point]
    lam = [QQ_I.convert(parse(x) if isinstance(x, str) else x) for x in lam]
    if not any(point):
        raise DomainError("the zero vector is not a projective point")
    if not any(lam):
        raise DomainError("the zero pair is not a pencil parameter")
    if len(point) != pencil.n + 1:
        raise DomainError(f"point needs {pencil.n + 1} coordinates, got {len(point)}")
    if pencil.form(0, point) or pencil.form(1, point):
        return False
    return not any(_apply(pencil.member(lam), point))


def base_singular_intersection(pencil: QuadricPencil,
                               records: list[SingularFiberRecord] | None = None) -> list[BaseSingularPoint]:
    """All ``(x, lambda)`` with ``x`` in the base locus and singular on the member at ``lambda``."""
    if records is None:
        records = singular_parameters(pencil)
    out = []
    for rec in records:
        # On ker M_lam the combination l0 F0 + l1 F1 vanishes, so one form
        # decides membership in the base locus; pick the one not forced to 0.
        which = 0 if rec.lam[1] else 1
        a = pencil.a0 if which == 0 else pencil.a1
        basis = [list(v) for v in rec.kernel_basis]
        if len(basis) > 2:
            raise UnsupportedPencil(f"kernel of dimension {len(basis)} at {fmt_point(rec.lam)}")
        found = []
        if len(basis) == 1:
            if not _quad(a, basis[0]):
                found.append(basis[0])
        else:
            v1, v2 = basis
            qa, qb, qc = _quad(a, v1), 2 * _bilinear(a, v1, v2), _quad(a, v2)
            if not (qa or qb or qc):
                raise UnsupportedPencil(f"a whole line of base-singular points at {fmt_point(rec.lam)}")
            for s, t in _binary_quadratic_roots(qa, qb, qc):
                found.append([s * x + t * y for x, y in zip(v1, v2)])
        seen = set()
        for vec in found:
            coords = tuple(normalize(vec))
            key = sort_key(coords)
            if key in seen:
                continue
            seen.add(key)
            assert singular_point_criterion(pencil, coords, rec.lam)
            out.append(BaseSingularPoint(coords, rec.lam))
    out.sort(key=lambda b: (sort_key(b.lam), sort_key(b.coords)))
    return out


@dataclass
class LefschetzVerdict:
    lefschetz: bool
    diagnosis: str
    violations: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.lefschetz


def is_lefschetz(pencil: QuadricPencil) -> LefschetzVerdict:
    """Every singular member has a single node, off the base locus.

    Conditions are checked in order: simple discriminant roots,
    one-dimensional kernels, empty base-singular intersection.  A
    degenerate pencil is reported as not Lefschetz.
    """
    try:
        records = singular_parameters(pencil)
    except DegeneratePencil as exc:
        return LefschetzVerdict(False, f"degenerate pencil: {exc}", [f"degenerate pencil: {exc}"])
    violations = []
    for rec in records:
        if rec.multiplicity > 1:
            violations.append(f"root {fmt_point(rec.lam)} has multiplicity {rec.multiplicity}")
    for rec in records:
        if rec.kernel_dim > 1:
            violations.append(f"root {fmt_point(rec.lam)} has kernel dimension {rec.kernel_dim}")
    if all(rec.kernel_dim <= 2 for rec in records):
        points = base_singular_intersection(pencil, records)
        if points:
            listed = ", ".join(f"{fmt_point(b.coords)} at {fmt_point(b.lam)}" for b in points)
            violations.append(f"base locus meets singular locus: {listed}")
    else:
        violations.append("base-singular test skipped: kernel dimension above 2")
    if not violations:
        return LefschetzVerdict(True, "every singular member has one node off the base locus")
    return LefschetzVerdict(False, violations[0], violations)


def analyze(pencil: QuadricPencil) -> dict:
    """Full analysis document: singular members, base-singular points, Lefschetz verdict.

    Unlike :func:`is_lefschetz` this raises on unsupported or degenerate input.
    """
    records = singular_parameters(pencil)
    points = base_singular_intersection(pencil, records)
    verdict = is_lefschetz(pencil)
    return {
        "n": pencil.n,
        "singular_parameters": [r.to_dict() for r in records],
        "base_singular_points": [b.to_dict() for b in points],
        "lefschetz": verdict.lefschetz,
        "diagnosis": verdict.diagnosis,
        "violations": verdict.violations,
    }
