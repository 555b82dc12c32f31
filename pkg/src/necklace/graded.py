"""Mod-2 graded dimension vectors and sphere-bundle degree supports.

A :class:`GradedDims` is a finitely supported map ``degree -> dimension``
over Z/2.  :func:`gysin_support` bounds the support of the homology of a
sphere bundle from the support of its base, which is all the necklace
obstruction argument needs.

>>> necklace_profile(5, 1)
GradedDims({0: 1, 3: 1, 4: 1, 7: 1})
>>> necklace_profile(4, 1)
GradedDims({0: 1, 3: 2, 6: 1})
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import DomainError


class GradedDims:
    """Finitely supported map from integer degree to a positive dimension.

    Degrees missing from the map have dimension 0; zero entries passed to
    the constructor are dropped.  Instances are immutable and hashable.
    """

    __slots__ = ("_dims", "_degrees", "_values")

    def __init__(self, dims: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = dims.items() if isinstance(dims, Mapping) else dims
        clean: dict[int, int] = {}
        for deg, dim in items:
            if int(deg) != deg or int(dim) != dim:
                raise DomainError(f"degree and dimension must be integers, got {deg!r}: {dim!r}")
            if dim < 0:
                raise DomainError(f"negative dimension {dim} in degree {deg}")
            if dim:
                clean[int(deg)] = clean.get(int(deg), 0) + int(dim)
        self._dims = dict(sorted(clean.items()))
        self._degrees = np.fromiter(self._dims.keys(), dtype=np.int64, count=len(self._dims))
        self._values = np.fromiter(self._dims.values(), dtype=np.int64, count=len(self._dims))

    @classmethod
    def from_degrees(cls, degrees: Iterable[int]) -> "GradedDims":
        """One generator per listed degree; repeats add up."""
        return cls(Counter(degrees))

    def dim(self, degree: int) -> int:
        return self._dims.get(degree, 0)

    def dim_at(self, degrees) -> np.ndarray:
        """Vectorised :meth:`dim` over an integer array of degrees."""
        degrees = np.asarray(degrees, dtype=np.int64)
        if not len(self._degrees):
            return np.zeros(degrees.shape, dtype=np.int64)
        pos = np.searchsorted(self._degrees, degrees)
        pos = np.clip(pos, 0, len(self._degrees) - 1)
        hit = self._degrees[pos] == degrees
        return np.where(hit, self._values[pos], 0)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self._dims)

    @property
    def total(self) -> int:
        return sum(self._dims.values())

    def items(self):
        return self._dims.items()

    def generators(self) -> tuple[int, ...]:
        """Degrees listed with multiplicity, ascending."""
        return tuple(d for d, m in self._dims.items() for _ in range(m))

    def shift(self, by: int) -> "GradedDims":
        return GradedDims({d + by: m for d, m in self._dims.items()})

    def __add__(self, other: "GradedDims") -> "GradedDims":
        out = Counter(self._dims)
        out.update(other._dims)
        return GradedDims(out)

    def __eq__(self, other):
        if isinstance(other, GradedDims):
            return self._dims == other._dims
        if isinstance(other, Mapping):
            return self._dims == GradedDims(other)._dims
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._dims.items()))

    def __len__(self):
        return len(self._dims)

    def __repr__(self):
        return f"GradedDims({self._dims})"

    def to_dict(self) -> dict[int, int]:
        return dict(self._dims)


@dataclass(frozen=True)
class BundleSpec:
    """Sphere bundle ``S^fiber_dim -> E -> B`` described by the support of H_*(B)."""

    base_support: frozenset[int]
    fiber_dim: int

    def __post_init__(self):
        object.__setattr__(self, "base_support", frozenset(int(d) for d in self.base_support))
        if 0 not in self.base_support:
            raise DomainError("base support must contain degree 0")
        if min(self.base_support) < 0:
            raise DomainError("base support must be non-negative")
        if self.fiber_dim < 1:
            raise DomainError(f"fiber dimension must be >= 1, got {self.fiber_dim}")


def gysin_support(spec: BundleSpec) -> GradedDims:
    """Upper-bound support of H_*(E; Z/2) for a sphere bundle.

    The Gysin sequence places every class of E either in a base degree or
    in a base degree shifted up by the fiber dimension.  Both copies are
    kept; degrees where the copies collide get dimension 2.  Exact Betti
    numbers would need the mod-2 Euler class and are not computed.
    """
    base = GradedDims.from_degrees(spec.base_support)
    return base + base.shift(spec.fiber_dim)


def necklace_profile(n: int, k: int) -> GradedDims:
    """Support profile of the necklace: an S^(n-k) bundle over S^(2k+1).

    ``n`` is the complex dimension of the fiber and ``k`` that of the
    critical locus P^k; requires ``1 <= k <= n - 2``.
    """
    if k < 1 or k > n - 2:
        raise DomainError(f"need 1 <= k <= n-2 (k != 0, n-1), got n={n}, k={k}")
    return gysin_support(BundleSpec(frozenset({0, 2 * k + 1}), n - k))
