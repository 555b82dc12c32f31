"""Acceptance criteria 1-8, each at its stated tolerance.

The summary hook in ``conftest.py`` prints one PASS/FAIL line per criterion.
"""

import io
import json
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from necklace.cli import main
from necklace.flow import (FlowModel, Locus, displacement_check, flow_batch,
                           integrate_gradient_flow, isotropy_residual, hopf_model, hopf_necklace,
                           negative_control, random_state, sample_necklace)
from necklace.flow.model import FlowState
from necklace.graded import necklace_profile
from necklace.obstruct import verify_theoremB
from necklace.pencil import QuadricPencil
from necklace.spectral import SpectralProfile, e1_dim

pytestmark = pytest.mark.acceptance

MAX_N = 120
GOLDEN = Path(__file__).parent / "golden"


def grid_nk():
    for n in range(3, MAX_N + 1):
        for k in range(1, n - 1):
            yield n, k


@pytest.fixture(scope="module")
def verification():
    start = time.perf_counter()
    summary = verify_theoremB(MAX_N, None, jobs=1, collect_rows=True)
    return summary, time.perf_counter() - start


@pytest.mark.criterion(1)
def test_necessity_exhaustive(verification):
    summary, elapsed = verification
    expected_cells = sum(n + 2 for n, _ in grid_nk())
    print(f"criterion 1: {summary.checked} cells, {summary.feasible} feasible, "
          f"{len(summary.necessity_failures)} necessity failures, {elapsed:.1f} s")
    assert summary.checked == expected_cells
    assert summary.necessity_failures == []
    assert elapsed < 60


def primitive_form(n, k, c):
    if n == 3 * k + 1:
        return (k + 1) % c == 0
    side = (n - 3 * k) if n > 3 * k + 1 else (3 * k + 2 - n)
    return ((k + 1) % c == 0 or (n - k + 1) % (2 * c) == 0
            or ((n + k + 2) % (2 * c) == 0 and side % (2 * c) == 0))


@pytest.mark.criterion(2)
def test_oracle_equals_primitive_form(verification):
    summary, _ = verification
    mismatches = [(n, k, c) for n, k, c, oracle, *_ in summary.rows
                  if oracle != primitive_form(n, k, c)]
    print(f"criterion 2: {len(summary.rows)} cells, {len(mismatches)} mismatches")
    assert len(summary.rows) == summary.checked
    assert mismatches == []
    assert summary.equivalence_failures == []


@pytest.mark.criterion(3)
def test_gysin_support():
    bad = []
    for n, k in grid_nk():
        g = necklace_profile(n, k)
        expected = {}
        for d in (0, 2 * k + 1, n - k, n + k + 1):
            expected[d] = expected.get(d, 0) + 1
        if g != expected or (n == 3 * k + 1) != (g.dim(2 * k + 1) == 2):
            bad.append((n, k))
    assert bad == []


@pytest.mark.criterion(4)
def test_spectral_degeneracy():
    r = np.arange(1, 51)
    worst = 0
    for n, k in grid_nk():
        profile = necklace_profile(n, k)
        for c in range(1, n + 3):
            dims = e1_dim(SpectralProfile(profile, 2 * c), r, 1 - r)
            worst = max(worst, int(dims.max()))
    assert worst == 0


@pytest.mark.criterion(5)
def test_flow_conservation():
    worst = 0.0
    for k in range(3):
        for m in range(1, 4):
            model = FlowModel(k=k, m=m)
            u0 = np.array([random_state(model, np.random.default_rng(seed)).real(model)
                           for seed in range(100)])
            _, drift = flow_batch(model, u0, T=5.0, dt=1e-3, track_h=True)
            worst = max(worst, float(drift.max()))
    out = integrate_gradient_flow(FlowModel(m=1), FlowState(0, [], [1.0]), T=1.0, dt=1e-3)
    error = abs(out.w[0] - np.exp(-2.0))
    print(f"criterion 5: max drift {worst:.3e}, closed-form error {error:.3e}")
    assert worst <= 1e-7
    assert error <= 1e-8


NECKLACE_CASES = [(0, 2), (0, 3), (1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)]


@pytest.mark.criterion(6)
def test_necklace_geometry():
    start = time.perf_counter()
    fiber, iso = 0.0, {}
    for scheme in ("central", "forward"):
        for h in (1e-5, 1e-6):
            worst = 0.0
            for k, m in NECKLACE_CASES:
                model = FlowModel(k=k, m=m)
                locus = (Locus("point") if k == 0
                         else Locus("real", tuple(0.3 * j + 0.1 for j in range(k + 1))))
                sample = sample_necklace(model, locus, 0.1, count=100, seed=k * 10 + m,
                                         fd_step=h, scheme=scheme, flow_time=None)
                fiber = max(fiber, sample.metrics["fiber_residual"])
                if sample.metrics["isotropy_residual"] is not None:
                    worst = max(worst, sample.metrics["isotropy_residual"])
            iso[scheme, h] = worst
    control = isotropy_residual(FlowModel(k=0, m=2), negative_control())
    elapsed = time.perf_counter() - start
    print(f"criterion 6: fiber {fiber:.1e}, isotropy {iso}, control {control}, {elapsed:.1f} s")
    assert fiber <= 1e-10
    for scheme in ("central", "forward"):
        assert iso[scheme, 1e-5] <= 1e-4
        assert iso[scheme, 1e-6] <= 1e-5
    assert control >= 0.05
    assert elapsed < 30


@pytest.mark.criterion(7)
def test_hopf_and_displacement():
    residuals = {k: isotropy_residual(hopf_model(k), hopf_necklace(k, count=1000, seed=k))
                 for k in (1, 2)}
    distances = {k: displacement_check(k, [3] + [0] * k, count=100) for k in (1, 2)}
    print(f"criterion 7: isotropy {residuals}, min distance {distances}")
    assert all(r <= 1e-7 for r in residuals.values())
    assert all(d >= 1 for d in distances.values())


COEFFICIENT_SETS = {
    "integers": lambda j: Fraction(j - 1),
    "reciprocals": lambda j: Fraction(1, j),
    "alternating": lambda j: Fraction((-1) ** j * j, 3),
}


def analysis_bytes(path):
    out = io.StringIO()
    assert main(["pencil", str(path), "--format", "json"], out=out) == 0
    return out.getvalue()


@pytest.mark.criterion(8)
@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("name", sorted(COEFFICIENT_SETS))
def test_pencil_goldens(n, name):
    coeffs = [str(COEFFICIENT_SETS[name](j)) for j in range(2, n + 1)]
    stem = GOLDEN / f"example_n{n}_{name}"
    src = Path(f"{stem}.pencil.json")
    assert json.loads(src.read_text()) == QuadricPencil.sum_of_squares(n, coeffs).to_document()
    text = analysis_bytes(src)
    assert text == Path(f"{stem}.out.json").read_text()
    doc = json.loads(text)
    zeros = ["0"] * (n - 1)
    assert doc["base_singular_points"] == [
        {"point": ["1", "-i"] + zeros, "lambda": ["0", "1"]},
        {"point": ["1", "i"] + zeros, "lambda": ["0", "1"]},
    ]
    assert doc["lefschetz"] is False
    assert doc["diagnosis"] == "root [0:1] has multiplicity 2"


@pytest.mark.criterion(8)
def test_diagonal_lefschetz_golden():
    src = GOLDEN / "diagonal_lefschetz.pencil.json"
    assert json.loads(src.read_text()) == \
        QuadricPencil.diagonal([1, 1, 1, 1], [0, 1, 2, 3]).to_document()
    text = analysis_bytes(src)
    assert text == (GOLDEN / "diagonal_lefschetz.out.json").read_text()
    doc = json.loads(text)
    assert doc["base_singular_points"] == [] and doc["lefschetz"] is True
