"""Divisibility obstructions for Morse-Bott degenerations with critical locus P^k.

A Fano fiber of complex dimension ``n`` with minimal Chern number ``C``
carries a displaceable necklace whose Floer homology must vanish.  The
necklace is an ``S^(n-k)`` bundle over ``S^(2k+1)`` with minimal Maslov
number ``2C``, so vanishing forces one of a short list of divisibilities.

:func:`theoremB_cases` evaluates the closed forms.  :func:`verify_theoremB`
checks them cell by cell against the pairing search in
:mod:`necklace.spectral`, which stays the ground truth.

Clause (c) is evaluated in primitive form, as two simultaneous
``2C``-divisibilities; the published consequences ``C | 2k+1`` (``n > 3k+1``)
and ``C | 2k+2`` (``n < 3k+1``) follow by subtracting or adding them.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import DomainError
from .graded import necklace_profile
from .spectral import PairingWitness, SpectralProfile, vanishing_feasible


def divides(a: int, b: int) -> bool:
    return b % a == 0


def maslov_from_chern(chern: int) -> int:
    """Minimal Maslov number of the necklace, ``2 * C``."""
    if chern < 1:
        raise DomainError(f"minimal Chern number must be >= 1, got {chern}")
    return 2 * chern


@dataclass(frozen=True)
class ObstructionQuery:
    n: int
    k: int
    chern: int

    def __post_init__(self):
        if self.k == 0 or self.k == self.n - 1:
            raise DomainError(f"k must differ from 0 and n-1 (n={self.n}, k={self.k})")
        if not 1 <= self.k <= self.n - 2:
            raise DomainError(f"need 1 <= k <= n-2, got n={self.n}, k={self.k}")
        if self.chern < 1:
            raise DomainError(f"minimal Chern number must be >= 1, got {self.chern}")

    @property
    def special_branch(self) -> bool:
        return self.n == 3 * self.k + 1


@dataclass(frozen=True)
class Conditions:
    """Raw truth values of every divisibility involved for one (n, k, C)."""

    case_a: bool
    case_b: bool
    case_c: bool          # primitive form
    case_c_stated: bool    # 2C | n+k+2 plus the published consequence
    special_exact: bool   # C | k+1, the n = 3k+1 condition the pairing certifies
    special_stated: bool   # C | n-k+1, the published n = 3k+1 condition
    special_branch: bool

    @property
    def feasible(self) -> bool:
        if self.special_branch:
            return self.special_exact
        return self.case_a or self.case_b or self.case_c

    @property
    def stated_disjunction(self) -> bool:
        if self.special_branch:
            return self.special_stated
        return self.case_a or self.case_b or self.case_c_stated


def _conditions(n: int, k: int, c: int) -> Conditions:
    two_c = 2 * c
    special = n == 3 * k + 1
    if special:
        return Conditions(False, False, False, False,
                          divides(c, k + 1), divides(c, n - k + 1), True)
    top = divides(two_c, n + k + 2)
    if n > 3 * k + 1:
        case_c = top and divides(two_c, n - 3 * k)
        case_c_stated = top and divides(c, 2 * k + 1)
    else:
        case_c = top and divides(two_c, 3 * k + 2 - n)
        case_c_stated = top and divides(c, 2 * k + 2)
    return Conditions(divides(c, k + 1), divides(two_c, n - k + 1), case_c, case_c_stated,
                      False, False, False)


@dataclass(frozen=True)
class ObstructionReport:
    query: ObstructionQuery
    feasible: bool
    cases: frozenset[str]
    special_branch: bool
    derived_divisibilities: tuple[str, ...]
    stated_disjunction: bool
    special_exact: bool | None = None
    special_stated: bool | None = None
    witness: PairingWitness | None = None

    def to_dict(self) -> dict:
        q = self.query
        return {
            "n": q.n,
            "k": q.k,
            "c": q.chern,
            "maslov": maslov_from_chern(q.chern),
            "feasible": self.feasible,
            "cases": sorted(self.cases),
            "special_branch": self.special_branch,
            "special_exact": self.special_exact,
            "special_stated": self.special_stated,
            "stated_disjunction": self.stated_disjunction,
            "derived_divisibilities": list(self.derived_divisibilities),
            "witness": None if self.witness is None else self.witness.to_dict(),
        }


def _describe(n: int, k: int, c: int, cond: Conditions) -> tuple[str, ...]:
    out = []
    two_c = 2 * c
    if cond.special_branch:
        if cond.special_exact:
            out.append(f"(2) exact: C | k+1  ({c} | {k + 1})")
        if cond.special_stated:
            out.append(f"(2) stated: C | n-k+1  ({c} | {n - k + 1})")
        return tuple(out)
    if cond.case_a:
        out.append(f"(a) C | k+1  ({c} | {k + 1})")
    if cond.case_b:
        out.append(f"(b) 2C | n-k+1  ({two_c} | {n - k + 1})")
    if cond.case_c:
        out.append(f"(c) 2C | n+k+2  ({two_c} | {n + k + 2})")
        if n > 3 * k + 1:
            out.append(f"(c) 2C | n-3k  ({two_c} | {n - 3 * k})")
        else:
            out.append(f"(c) 2C | 3k+2-n  ({two_c} | {3 * k + 2 - n})")
    if cond.case_c_stated:
        if n > 3 * k + 1:
            out.append(f"(c) stated: C | 2k+1  ({c} | {2 * k + 1})")
        else:
            out.append(f"(c) stated: C | 2k+2  ({c} | {2 * k + 2})")
    return tuple(out)


def theoremB_cases(query: ObstructionQuery, with_witness: bool = True) -> ObstructionReport:
    """Closed-form verdict on whether the necklace can have vanishing Floer homology.

    ``cases`` lists the clauses (``"A"``, ``"B"``, ``"C"``) that hold on
    the ``n != 3k+1`` branch, with clause C in primitive form.  On the
    ``n == 3k+1`` branch ``cases`` is empty and the verdict is ``C | k+1``;
    the weaker published condition ``C | n-k+1`` is reported beside it.

    With ``with_witness`` the pairing found by
    :func:`necklace.spectral.vanishing_feasible` is attached.
    """
    n, k, c = query.n, query.k, query.chern
    cond = _conditions(n, k, c)
    cases = frozenset(name for name, hit in
                      (("A", cond.case_a), ("B", cond.case_b), ("C", cond.case_c)) if hit)
    witness = None
    if with_witness:
        _, witness = vanishing_feasible(SpectralProfile(necklace_profile(n, k), maslov_from_chern(c)))
    return ObstructionReport(
        query=query,
        feasible=cond.feasible,
        cases=cases,
        special_branch=cond.special_branch,
        derived_divisibilities=_describe(n, k, c, cond),
        stated_disjunction=cond.stated_disjunction,
        special_exact=cond.special_exact if cond.special_branch else None,
        special_stated=cond.special_stated if cond.special_branch else None,
        witness=witness,
    )


CSV_COLUMNS = ("n", "k", "c", "oracle_feasible", "case_a", "case_b", "case_c", "special_branch")


@dataclass
class VerificationSummary:
    max_n: int
    max_chern: int | None
    checked: int = 0
    feasible: int = 0
    obstructed: int = 0
    tallies: dict[str, int] = field(default_factory=lambda: {"A": 0, "B": 0, "C": 0, "special": 0})
    necessity_failures: list[tuple[int, int, int]] = field(default_factory=list)
    equivalence_failures: list[tuple[int, int, int]] = field(default_factory=list)
    rows: list[tuple] | None = None

    @property
    def counterexamples(self) -> list[tuple[int, int, int]]:
        return sorted(set(self.necessity_failures) | set(self.equivalence_failures))

    @property
    def ok(self) -> bool:
        return not self.necessity_failures and not self.equivalence_failures

    def merge(self, other: "VerificationSummary") -> None:
        self.checked += other.checked
        self.feasible += other.feasible
        self.obstructed += other.obstructed
        for key, val in other.tallies.items():
            self.tallies[key] += val
        self.necessity_failures.extend(other.necessity_failures)
        self.equivalence_failures.extend(other.equivalence_failures)
        if self.rows is not None and other.rows is not None:
            self.rows.extend(other.rows)

    def to_dict(self) -> dict:
        return {
            "max_n": self.max_n,
            "max_chern": self.max_chern,
            "checked": self.checked,
            "feasible": self.feasible,
            "obstructed": self.obstructed,
            "tallies": dict(self.tallies),
            "necessity_failures": [list(t) for t in self.necessity_failures],
            "equivalence_failures": [list(t) for t in self.equivalence_failures],
            "counterexamples": [list(t) for t in self.counterexamples],
        }


def _chern_bound(n: int, max_chern: int | None) -> int:
    return n + 2 if max_chern is None else max_chern


def _verify_block(ns: list[int], max_n: int, max_chern: int | None,
                  collect_rows: bool) -> VerificationSummary:
    out = VerificationSummary(max_n, max_chern, rows=[] if collect_rows else None)
    tallies = out.tallies
    for n in ns:
        for k in range(1, n - 1):
            profile = necklace_profile(n, k)
            for c in range(1, _chern_bound(n, max_chern) + 1):
                oracle, _ = vanishing_feasible(SpectralProfile(profile, 2 * c))
                cond = _conditions(n, k, c)
                out.checked += 1
                if oracle:
                    out.feasible += 1
                else:
                    out.obstructed += 1
                if cond.special_branch:
                    tallies["special"] += cond.special_exact
                else:
                    tallies["A"] += cond.case_a
                    tallies["B"] += cond.case_b
                    tallies["C"] += cond.case_c
                if oracle and not cond.stated_disjunction:
                    out.necessity_failures.append((n, k, c))
                if oracle != cond.feasible:
                    out.equivalence_failures.append((n, k, c))
                if collect_rows:
                    out.rows.append((n, k, c, oracle, cond.case_a, cond.case_b, cond.case_c,
                                     cond.special_branch))
    return out


def verify_theoremB(max_n: int, max_chern: int | None = None, jobs: int = 1,
                    collect_rows: bool = False) -> VerificationSummary:
    """Exhaustively compare the pairing search with the closed forms.

    Every ``(n, k, C)`` with ``3 <= n <= max_n``, ``1 <= k <= n-2`` and
    ``1 <= C <= max_chern`` (``C <= n+2`` when ``max_chern`` is None) is
    checked for

    * necessity: a feasible pairing implies the published disjunction;
    * equivalence: a feasible pairing iff the primitive-form conditions.

    Discrepancies are collected, not raised.  ``jobs > 1`` splits the grid
    over processes; results are identical to a single-process run.
    """
    ns = list(range(3, max_n + 1))
    summary = VerificationSummary(max_n, max_chern, rows=[] if collect_rows else None)
    if jobs == 0:
        jobs = os.cpu_count() or 1
    if jobs <= 1 or len(ns) < 2:
        summary.merge(_verify_block(ns, max_n, max_chern, collect_rows))
        return summary
    # Round-robin over n balances the quadratic growth of cells per n.
    blocks = [ns[i::jobs] for i in range(jobs) if ns[i::jobs]]
    with ProcessPoolExecutor(max_workers=len(blocks)) as pool:
        parts = list(pool.map(_verify_block, blocks, [max_n] * len(blocks),
                              [max_chern] * len(blocks), [collect_rows] * len(blocks)))
    for part in parts:
        summary.merge(part)
    summary.necessity_failures.sort()
    summary.equivalence_failures.sort()
    if summary.rows is not None:
        summary.rows.sort()
    return summary
