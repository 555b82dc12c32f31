"""Degree bookkeeping for the Floer spectral sequence of a monotone Lagrangian.

The first page is ``E^1_{p,q} = H_{p+q-pN}(L; Z/2) t^{-p}`` where ``N`` is
the minimal Maslov number and ``t`` has degree ``-N``.  The differential
``d^r`` has bidegree ``(-r, r-1)`` so, read on H_*(L), it raises degree by
``r*N - 1``.  Total vanishing at the limit page requires every generator
to be cancelled by some ``d^r``; :func:`vanishing_feasible` decides whether
the degree multiset admits such a cancellation pattern.

The model ignores column constraints and the order in which differentials
compose.  It is a necessary condition for ``E^infinity = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .graded import GradedDims


@dataclass(frozen=True)
class SpectralProfile:
    """H_*(L; Z/2) together with the minimal Maslov number of L."""

    homology: GradedDims
    maslov: int

    def __post_init__(self):
        if int(self.maslov) != self.maslov or self.maslov < 2:
            raise DomainError(f"minimal Maslov number must be an integer >= 2, got {self.maslov}")
        if self.homology.dim(0) < 1:
            raise DomainError("homology must be nonzero in degree 0")


@dataclass(frozen=True)
class PageCell:
    p: int
    q: int
    dim: int


@dataclass(frozen=True)
class PairingWitness:
    """Cancellation pattern: ``(source, target, r)`` triples plus leftovers.

    Each triple satisfies ``target = source + r*N - 1``.
    """

    pairs: tuple[tuple[int, int, int], ...] = ()
    unmatched: tuple[int, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "pairs": [{"source": s, "target": t, "r": r} for s, t, r in self.pairs],
            "unmatched": list(self.unmatched),
        }


def e1_dim(profile: SpectralProfile, p, q):
    """Dimension of ``E^1_{p,q}``, i.e. of H_{p+q-pN}(L).

    ``p`` and ``q`` may be integers or integer arrays (broadcast together).
    """
    if np.isscalar(p) and np.isscalar(q):
        return profile.homology.dim(int(p) + int(q) - int(p) * profile.maslov)
    p = np.asarray(p, dtype=np.int64)
    q = np.asarray(q, dtype=np.int64)
    return profile.homology.dim_at(p + q - p * profile.maslov)


def e1_cell(profile: SpectralProfile, p: int, q: int) -> PageCell:
    return PageCell(p, q, e1_dim(profile, p, q))


def periodicity_shift(profile: SpectralProfile, p: int, q: int) -> tuple[int, int]:
    """Index pair identified with ``(p, q)`` by multiplication with ``t``.

    ``E_{p,q} = E_{p-1, q+1-N} t^{-1}``, so both cells carry the same
    homology degree of L.
    """
    return p - 1, q + 1 - profile.maslov


def differential_offset(r: int, maslov: int) -> int:
    """Homology degree raised by ``d^r``: ``r*N - 1``."""
    if r < 1:
        raise DomainError(f"differentials start at r=1, got r={r}")
    if maslov < 2:
        raise DomainError(f"minimal Maslov number must be >= 2, got {maslov}")
    return r * maslov - 1


def _page(gap: int, maslov: int) -> int:
    """``r`` with ``gap == r*maslov - 1``, or 0 if no differential spans it."""
    if gap <= 0 or (gap + 1) % maslov:
        return 0
    return (gap + 1) // maslov


def _perfect(gens: tuple[int, ...], maslov: int, memo: dict) -> tuple | None:
    # Lowest generator can only be a source; trying partners in ascending
    # degree yields the lexicographically smallest pairing first.
    if not gens:
        return ()
    if gens in memo:
        return memo[gens]
    s = gens[0]
    result = None
    seen = set()
    for j in range(1, len(gens)):
        t = gens[j]
        if t in seen:
            continue
        seen.add(t)
        r = _page(t - s, maslov)
        if not r:
            continue
        sub = _perfect(gens[1:j] + gens[j + 1:], maslov, memo)
        if sub is not None:
            result = ((s, t, r),) + sub
            break
    memo[gens] = result
    return result


def _maximal(gens: tuple[int, ...], maslov: int, memo: dict) -> tuple[tuple, tuple]:
    """Maximum-cardinality partial pairing and the generators it leaves."""
    if len(gens) < 2:
        return (), gens
    if gens in memo:
        return memo[gens]
    s = gens[0]
    sub_pairs, sub_left = _maximal(gens[1:], maslov, memo)
    best = (sub_pairs, (s,) + sub_left)
    seen = set()
    for j in range(1, len(gens)):
        t = gens[j]
        if t in seen:
            continue
        seen.add(t)
        r = _page(t - s, maslov)
        if not r:
            continue
        pairs, left = _maximal(gens[1:j] + gens[j + 1:], maslov, memo)
        if len(pairs) + 1 > len(best[0]):
            best = (((s, t, r),) + pairs, left)
    memo[gens] = best
    return best


def vanishing_feasible(profile: SpectralProfile) -> tuple[bool, PairingWitness]:
    """Can every generator of H_*(L) be cancelled by some differential?

    Searches exhaustively for a perfect pairing of the degree multiset in
    which each pair ``(d1, d2)`` has ``d2 - d1 = r*N - 1`` for some
    ``r >= 1``.  On success the witness is the lexicographically smallest
    such pairing; otherwise it is one maximum partial pairing together with
    the unmatched degrees.  Worst-case cost is exponential in the number of
    generators.
    """
    gens = profile.homology.generators()
    maslov = profile.maslov
    if len(gens) % 2 == 0:
        pairs = _perfect(gens, maslov, {})
        if pairs is not None:
            return True, PairingWitness(pairs, ())
    pairs, left = _maximal(gens, maslov, {})
    return False, PairingWitness(pairs, tuple(left))
