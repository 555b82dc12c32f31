import json
import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import sympify
from sympy.polys.matrices import DomainMatrix

from necklace.errors import DegeneratePencil, DomainError, UnsupportedPencil
from necklace.exact import QQ, QQ_I, fmt_point, normalize, sort_key
from necklace.pencil import (QuadricPencil, analyze, base_singular_intersection, discriminant,
                             is_lefschetz, singular_parameters, singular_point_criterion)


def example(n=3, coeffs=(1, 2)):
    return QuadricPencil.sum_of_squares(n, list(coeffs))


def points(pencil):
    return [(fmt_point(b.coords), fmt_point(b.lam)) for b in base_singular_intersection(pencil)]


def test_example_singular_parameters():
    recs = singular_parameters(example())
    assert [(fmt_point(r.lam), r.multiplicity, r.kernel_dim) for r in recs] == [
        ("[0:1]", 2, 2), ("[1:1/2]", 1, 1), ("[1:1]", 1, 1)]
    assert [fmt_point(v) for v in recs[0].kernel_basis] == ["[1:0:0:0]", "[0:1:0:0]"]


def test_example_base_singular_points():
    assert points(example()) == [("[1:-i:0:0]", "[0:1]"), ("[1:i:0:0]", "[0:1]")]


def test_example_criterion():
    p = example()
    assert singular_point_criterion(p, ["1", "i", "0", "0"], ["0", "1"])
    assert not singular_point_criterion(p, ["1", "0", "0", "0"], ["0", "1"])
    # In the kernel at [1:1] but off the base locus.
    assert not singular_point_criterion(p, ["0", "0", "1", "0"], ["1", "1"])
    with pytest.raises(DomainError):
        singular_point_criterion(p, ["0", "0", "0", "0"], ["0", "1"])
    with pytest.raises(DomainError):
        singular_point_criterion(p, ["1", "0", "0", "0"], ["0", "0"])


def test_example_not_lefschetz():
    v = is_lefschetz(example())
    assert not v and v.diagnosis == "root [0:1] has multiplicity 2"
    assert any("kernel dimension 2" in x for x in v.violations)
    assert any(x.startswith("base locus meets singular locus") for x in v.violations)


def test_two_by_two_lefschetz():
    p = QuadricPencil.diagonal([1, 1], [1, -1])
    assert [fmt_point(r.lam) for r in singular_parameters(p)] == ["[1:-1]", "[1:1]"]
    assert points(p) == []
    assert is_lefschetz(p).lefschetz


def test_proportional_generators():
    p = QuadricPencil([[1, 0], [0, 1]], [[1, 0], [0, 1]])
    (rec,) = singular_parameters(p)
    assert fmt_point(rec.lam) == "[1:-1]" and rec.multiplicity == 2 and rec.kernel_dim == 2


def test_zero_generator_is_degenerate():
    p = QuadricPencil([[1, 0], [0, 1]], [[0, 0], [0, 0]])
    with pytest.raises(DegeneratePencil):
        singular_parameters(p)
    v = is_lefschetz(p)
    assert not v and "degenerate" in v.diagnosis


def test_identically_singular_is_degenerate():
    with pytest.raises(DegeneratePencil):
        singular_parameters(QuadricPencil([[1, 0, 0], [0, 0, 0], [0, 0, 0]],
                                          [[0, 0, 0], [0, 1, 0], [0, 0, 0]]))


def test_irrational_roots_unsupported():
    with pytest.raises(UnsupportedPencil):
        singular_parameters(QuadricPencil([[1, 0], [0, 1]], [[0, 1], [1, 2]]))


def test_gaussian_roots_supported():
    # det = l0^2 + l1^2 splits over Q(i) but not over Q.
    p = QuadricPencil([[1, 0], [0, 1]], [[0, "i"], ["i", 0]])
    recs = singular_parameters(p)
    assert [(fmt_point(r.lam), [fmt_point(v) for v in r.kernel_basis]) for r in recs] == \
        [("[1:-i]", ["[1:-1]"]), ("[1:i]", ["[1:1]"])]
    assert is_lefschetz(p).lefschetz


def test_kernel_basis_on_both_axes():
    # [1:0] has a two-dimensional kernel; F1 = 2 z0 z1 there, so the roots are e0 and e1.
    p = QuadricPencil([[0, 0, 0], [0, 0, 0], [0, 0, 1]], [[0, 1, 0], [1, 0, 0], [0, 0, 0]])
    assert points(p) == [("[0:1:0]", "[1:0]"), ("[1:0:0]", "[1:0]")]


def test_kernel_dimension_three_unsupported():
    p = QuadricPencil.diagonal([1, 1, 1, 1], [0, 0, 0, 1])
    with pytest.raises(UnsupportedPencil):
        base_singular_intersection(p)
    with pytest.raises(UnsupportedPencil):
        analyze(p)
    assert not is_lefschetz(p)


def test_line_of_base_singular_points_unsupported():
    # Kernel span{e0, e1} at [1:0], and F1 vanishes on it; det = l1^4.
    swap = [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]
    p = QuadricPencil.diagonal([0, 0, 1, 1], [0, 0, 0, 0])
    p = QuadricPencil(p.a0, swap)
    with pytest.raises(UnsupportedPencil):
        base_singular_intersection(p)


def test_validation():
    with pytest.raises(DomainError):
        QuadricPencil([[1, 2], [0, 1]], [[1, 0], [0, 1]])
    with pytest.raises(DomainError):
        QuadricPencil([[1, 0], [0, 1]], [[1]])
    with pytest.raises(DomainError):
        QuadricPencil([[0, 0], [0, 0]], [[0, 0], [0, 0]])
    with pytest.raises(DomainError):
        QuadricPencil.sum_of_squares(3, [1])
    with pytest.raises(DomainError):
        QuadricPencil.from_document({"n": 2, "a0": [["1"]]})


def test_document_round_trip():
    p = QuadricPencil([["1", "1/2+i"], ["1/2+i", "-3"]], [["0", "i"], ["i", "2/3"]])
    doc = p.to_document()
    assert doc["a0"][0][1] == "1/2+i"
    assert QuadricPencil.from_document(json.loads(json.dumps(doc))) == p


def test_discriminant_of_example():
    expected = sympify("lambda0**2*(lambda0 - lambda1)*(lambda0 - 2*lambda1)")
    assert (discriminant(example()).as_expr() - expected).expand() == 0


def _random_gaussian(rng, size=5):
    return QQ_I(QQ(rng.randint(-size, size), rng.randint(1, size)),
                QQ(rng.randint(-size, size), rng.randint(1, size)))


def test_criterion_fuzz_on_singular_fibers():
    rng = random.Random(0)
    p = example()
    found = {(sort_key(b.coords), sort_key(b.lam)) for b in base_singular_intersection(p)}
    for rec in singular_parameters(p):
        tried = 0
        while tried < 1000:
            coeffs = [_random_gaussian(rng) for _ in rec.kernel_basis]
            vec = [sum((c * v[i] for c, v in zip(coeffs, rec.kernel_basis)), QQ_I(0))
                   for i in range(p.n + 1)]
            if not any(vec):
                continue
            vec = normalize(vec)
            if (sort_key(vec), sort_key(rec.lam)) in found:
                continue
            tried += 1
            assert not singular_point_criterion(p, vec, rec.lam)


def test_criterion_fuzz_off_kernel():
    rng = random.Random(1)
    p = example(4, (1, 2, 3))
    for _ in range(300):
        vec = [_random_gaussian(rng) for _ in range(5)]
        if any(vec):
            on_both = not any(vec[2:]) and not (vec[0] ** 2 + vec[1] ** 2)
            assert singular_point_criterion(p, vec, [QQ_I(0), QQ_I(1)]) == on_both


distinct_nonzero = st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=7)
                            .filter(lambda f: f != 0), min_size=1, max_size=4, unique=True)


@settings(max_examples=40, deadline=None)
@given(distinct_nonzero)
def test_example_family_has_two_points(coeffs):
    n = len(coeffs) + 1
    p = QuadricPencil.sum_of_squares(n, [str(c) for c in coeffs])
    zeros = ":0" * (n - 1)
    assert points(p) == [(f"[1:-i{zeros}]", "[0:1]"), (f"[1:i{zeros}]", "[0:1]")]
    recs = singular_parameters(p)
    assert sum(r.multiplicity for r in recs) == n + 1
    assert sorted(fmt_point(r.lam) for r in recs[1:]) == \
        sorted(fmt_point(normalize([QQ_I(1), QQ_I(QQ(c.denominator, c.numerator))])) for c in coeffs)


def _congruent(pencil, basis):
    size = pencil.n + 1
    P = DomainMatrix([[QQ_I.convert(x) for x in row] for row in basis], (size, size), QQ_I)
    return QuadricPencil(P.transpose() * pencil.a0 * P, P.transpose() * pencil.a1 * P), P


unimodular = st.lists(st.integers(-2, 2), min_size=3, max_size=3)


@settings(max_examples=30, deadline=None)
@given(unimodular, st.sampled_from([(1, 2), (-1, 3), ("1/2", "-2/5")]))
def test_congruence_moves_points(upper, coeffs):
    # Upper unitriangular change of coordinates: P^T A P.
    a, b, c = upper
    basis = [[1, a, b, 0], [0, 1, c, a], [0, 0, 1, b], [0, 0, 0, 1]]
    base = example(3, coeffs)
    moved, P = _congruent(base, basis)
    inv = P.inv()
    assert [(fmt_point(r.lam), r.multiplicity) for r in singular_parameters(moved)] == \
        [(fmt_point(r.lam), r.multiplicity) for r in singular_parameters(base)]
    got = sorted(fmt_point(b.coords) for b in base_singular_intersection(moved))
    expected = sorted(fmt_point(normalize((inv * DomainMatrix([[x] for x in pt.coords], (4, 1), QQ_I))
                                          .to_list_flat()))
                      for pt in base_singular_intersection(base))
    assert got == expected
    for rec in singular_parameters(moved):
        member = moved.member(rec.lam)
        for v in rec.kernel_basis:
            residue = member * DomainMatrix([[x] for x in v], (4, 1), QQ_I)
            assert not any(residue.to_list_flat())


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=5), min_size=2,
                max_size=5, unique=True))
def test_diagonal_pencils_are_lefschetz(entries):
    p = QuadricPencil.diagonal([1] * len(entries), [str(e) for e in entries])
    recs = singular_parameters(p)
    assert all(r.multiplicity == 1 and r.kernel_dim == 1 for r in recs)
    assert sum(r.multiplicity for r in recs) == p.n + 1
    assert base_singular_intersection(p) == []
    assert is_lefschetz(p).lefschetz
