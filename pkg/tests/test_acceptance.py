"""Acceptance suite: one test per numbered criterion, at the stated tolerance.

Run with ``pytest tests/test_acceptance.py -v`` to get a pass/fail line per
criterion.  Criterion 3 is parametrized per (ratio, column) so a failure
names the exact combination.

Known red: criterion 3 at (r=1.0, C12).  The isotropic-ratio concurrence
C(1,2) genuinely peaks at |h| ~ 0.33 (value 0.3644) rather than at the
critical point h=0 (value 0.3394); the expected-maximum-at-zero property
holds for every other column and ratio.  The test is kept faithful to the
stated property and fails; see the repository decision notes for the
analysis.  Every other criterion passes.
"""

import numpy as np
import pytest

from kitchain.correlators import rho_pair
from kitchain.ed import (
    _conditional_entropy_grid,
    _discord_numeric,
    compare,
    ground_state,
    lowest_energy,
    oracle_measures,
    reduced_density,
)
from kitchain.measures import (
    concurrence_x,
    conditional_entropy_min,
    discord,
    measure_point,
    multispecies_density,
    wootters,
)
from kitchain.modes import ModelParams, amplitudes, momentum_grid
from kitchain.cli import SweepSpec, render, run_sweep

ORACLE_GRID = [(n, r, h) for n in (8, 12) for r in (0.0, 0.5, 1.0, 2.0)
               for h in (0.3, 1.0)]
H_GRID = np.linspace(-2.0, 2.0, 401)


@pytest.fixture(scope="module")
def oracle_reports():
    return {(n, r, h): compare(ModelParams(jx=1.0, jy=r, h=h, n_sites=n))
            for (n, r, h) in ORACLE_GRID}


@pytest.fixture(scope="module")
def critical_sweeps():
    out = {}
    for r in (0.3, 0.6, 1.0):
        cols = {"C12": [], "D12": [], "Eglob": [], "MS": []}
        for h in H_GRID:
            rec = measure_point(ModelParams(jx=1.0, jy=r, h=float(h), n_sites=100))
            cols["C12"].append(rec.c_odd)
            cols["D12"].append(rec.d_odd)
            cols["Eglob"].append(rec.e_global)
            cols["MS"].append(rec.ms_density)
        out[r] = {name: np.array(vals) for name, vals in cols.items()}
    return out


def test_criterion_01_oracle_equivalence(oracle_reports):
    """Closed forms match the 2^N solver at tol 1e-6 (energy 1e-8 relative)
    over (N, r, h) in {8, 12} x {0, 0.5, 1, 2} x {0.3, 1.0}."""
    failures = []
    for key, report in oracle_reports.items():
        if not (report.passed and report.worst_delta <= 1e-6):
            failures.append(f"{key}: worst delta {report.worst_delta:.3e}")
        if not (report.energy_ok and report.energy_rel_delta <= 1e-8):
            failures.append(f"{key}: energy rel delta {report.energy_rel_delta:.3e}")
    assert not failures, "; ".join(failures)


def test_criterion_02_dimer_limit():
    """r=0 decouples the chain into x bonds: C(1,2)->1, C(2,3)=0, and the
    two-site block energy is -sqrt(jx^2 + 4h^2)."""
    rec = measure_point(ModelParams(jx=1.0, jy=0.0, h=1e-6, n_sites=100))
    assert abs(rec.c_odd - 1.0) < 1e-4
    assert rec.c_even == 0.0
    for h in (0.0, 0.5, 1.0):
        value = lowest_energy(ModelParams(jx=1.0, jy=0.0, h=h, n_sites=2))
        assert abs(value - (-np.sqrt(1.0 + 4.0 * h * h))) < 1e-10


@pytest.mark.parametrize("column", ["C12", "D12", "Eglob", "MS"])
@pytest.mark.parametrize("ratio", [0.3, 0.6, 1.0])
def test_criterion_03_critical_point_maxima(critical_sweeps, ratio, column):
    """On a 401-point h grid in [-2, 2] at N=100: each column is even in h
    within 1e-12 and attains its maximum at the h=0 grid point."""
    values = critical_sweeps[ratio][column]
    assert np.abs(values - values[::-1]).max() <= 1e-12
    peak = int(np.argmax(values))
    assert peak == 200, (
        f"{column} at r={ratio}: max {values[peak]:.6f} at h={H_GRID[peak]:+.4f}, "
        f"h=0 value {values[200]:.6f}")


def test_criterion_04_global_entanglement_at_critical_point():
    """E_global(h=0) = 1 within 1e-9 for r in {0, 0.5, 1, 2, 5}."""
    for r in (0.0, 0.5, 1.0, 2.0, 5.0):
        rec = measure_point(ModelParams(jx=1.0, jy=r, h=0.0, n_sites=100))
        assert abs(rec.e_global - 1.0) < 1e-9


def test_criterion_05_discord_minimizer(oracle_reports):
    """The x-basis closed form is a true conditional-entropy minimum (beats a
    64x64 basis grid up to 1e-9) and the oracle's independently minimized
    discord agrees with the closed form within 1e-6."""
    for (n, r, h) in ORACLE_GRID:
        params = ModelParams(jx=1.0, jy=r, h=h, n_sites=n)
        for parity in ("odd", "even"):
            state = rho_pair(params, parity)
            closed = conditional_entropy_min(state)
            grid_min, _, _ = _conditional_entropy_grid(state.matrix(), 64)
            assert closed <= grid_min + 1e-9
        report = oracle_reports[(n, r, h)]
        rows = {row.name: row for row in report.rows}
        assert rows["D12"].delta <= 1e-6
        assert rows["D23"].delta <= 1e-6


def test_criterion_06_no_longer_range_concurrence():
    """Oracle C(1,3) and C(1,4) vanish exactly (after the max(0, .) ) at N=8
    for r in {0.5, 1, 2}, h in {0.3, 1.0}."""
    for r in (0.5, 1.0, 2.0):
        for h in (0.3, 1.0):
            state = ground_state(ModelParams(jx=1.0, jy=r, h=h, n_sites=8))
            meas = oracle_measures(state)
            assert meas["c_13"] == 0.0
            assert meas["c_14"] == 0.0


def test_criterion_07_concurrence_cutoff_and_crossing():
    """r sweep at h=0.5, N=100, 251 points: C(1,2) dies at a cutoff r* and
    stays dead; C(2,3) is born at a cutoff; the two cross at r=1; discord
    outlives C(1,2) past the cutoff."""
    spec = SweepSpec(axis="r", start=0.0, stop=5.0, steps=251,
                     fixed=ModelParams(jx=1.0, jy=1.0, h=0.5, n_sites=100))
    rows = run_sweep(spec)
    rvals = np.array([row["r"] for row in rows])
    c12 = np.array([row["C12"] for row in rows])
    c23 = np.array([row["C23"] for row in rows])
    d12 = np.array([row["D12"] for row in rows])
    assert c12[0] > 0.0
    dead = np.where(c12 == 0.0)[0]
    assert dead.size > 0
    cutoff = dead.min()
    assert np.all(c12[cutoff:] == 0.0)
    born = np.where(c23 > 0.0)[0]
    assert born.size > 0 and born.min() > 0
    assert np.all(c23[:born.min()] == 0.0)
    at_one = int(np.argmin(np.abs(rvals - 1.0)))
    assert abs(c12[at_one] - c23[at_one]) <= 1e-12
    assert d12[cutoff] > 1e-4


def test_criterion_08_finite_size_convergence():
    """|C12(N) - C12(4000)| < 1e-3 for multiples of 4 with N >= 48 at
    r=1, h=0.2."""
    ref = measure_point(ModelParams(jx=1.0, jy=1.0, h=0.2, n_sites=4000)).c_odd
    sizes = list(range(48, 201, 4)) + [240, 400, 1000, 2000]
    for n in sizes:
        value = measure_point(ModelParams(jx=1.0, jy=1.0, h=0.2, n_sites=n)).c_odd
        assert abs(value - ref) < 1e-3, f"N={n}"


def test_criterion_09_derivative_stability():
    """The pair-concurrence derivative is size-stable (max |dC12/dh| on
    h in [1e-4, 0.2] differs < 5% between N=400 and N=4000) while the
    multispecies derivative sharpens at the isotropic ratio (argmax of
    |dMS/dh| at h=0.01 inside r in [0.9, 1.1], at least twice its r=0.5
    value)."""
    peaks = {}
    for n in (400, 4000):
        spec = SweepSpec(axis="h", start=1e-4, stop=0.2, steps=401,
                         fixed=ModelParams(jx=1.0, jy=1.0, h=0.0, n_sites=n),
                         want_derivs=True)
        rows = run_sweep(spec)
        peaks[n] = max(abs(row["dC12_dh"]) for row in rows)
    assert abs(peaks[400] - peaks[4000]) / peaks[4000] < 0.05

    spec = SweepSpec(axis="r", start=0.0, stop=5.0, steps=251,
                     fixed=ModelParams(jx=1.0, jy=1.0, h=0.01, n_sites=100),
                     want_derivs=True)
    rows = run_sweep(spec)
    rvals = np.array([row["r"] for row in rows])
    dms = np.abs(np.array([row["dMS_dh"] for row in rows]))
    argmax_r = rvals[int(np.argmax(dms))]
    assert 0.9 <= argmax_r <= 1.1
    at_half = dms[int(np.argmin(np.abs(rvals - 0.5)))]
    assert dms.max() >= 2.0 * at_half


def test_criterion_10_multispecies_analytic_value():
    """epsilon(r=1, h->0, N=100) = 0.5 bits/site within 1e-3, consistent with
    the per-mode amplitude entropy summed over the momentum grid."""
    params = ModelParams(jx=1.0, jy=1.0, h=1e-6, n_sites=100)
    value = multispecies_density(params)
    assert abs(value - 0.5) < 1e-3
    per_mode = 0.0
    for q in momentum_grid(params):
        probs = amplitudes(params, float(q)).probabilities()
        nz = probs[probs > 0]
        per_mode += float(-(nz * np.log2(nz)).sum())
    assert value == pytest.approx(per_mode / params.n_sites, abs=1e-12)


def test_criterion_11_invariant_suites():
    """Amplitude normalization (1e-12, 1000 points), X-state trace and
    positivity, Wootters-vs-closed-form equivalence (1e-10, 1000 states),
    determinism, and parallel-serial equivalence."""
    rng = np.random.default_rng(99)
    for _ in range(1000):
        params = ModelParams(jx=float(rng.uniform(0.2, 3.0)),
                             jy=float(rng.uniform(0.0, 3.0)),
                             h=float(rng.uniform(-3.0, 3.0)),
                             n_sites=4 * int(rng.integers(1, 80)))
        q = float(rng.choice(momentum_grid(params)))
        assert abs(amplitudes(params, q).norm_sq() - 1.0) < 1e-12

    for _ in range(200):
        params = ModelParams(jx=1.0, jy=float(rng.uniform(0.0, 3.0)),
                             h=float(rng.uniform(-2.0, 2.0)),
                             n_sites=4 * int(rng.integers(2, 40)))
        mat = rho_pair(params, "odd" if rng.uniform() < 0.5 else "even").matrix()
        assert abs(np.trace(mat).real - 1.0) < 1e-12
        assert np.linalg.eigvalsh(mat).min() > -1e-12

    worst = 0.0
    for _ in range(1000):
        a, b, c, d = rng.dirichlet([1.0, 1.0, 1.0, 1.0])
        from kitchain.correlators import XState

        state = XState(u=a, v=b, w1=0.5 * (c + d), w2=0.5 * (c + d),
                       x=np.sqrt(a * b) * rng.uniform() * np.exp(2j * np.pi * rng.uniform()))
        worst = max(worst, abs(wootters(state.matrix()) - concurrence_x(state)))
    assert worst < 1e-10

    spec = SweepSpec(axis="h", start=-1.0, stop=1.0, steps=41,
                     fixed=ModelParams(jx=1.0, jy=0.7, h=0.0, n_sites=100))
    text_a = render(run_sweep(spec), spec.header(), spec.fmt)
    text_b = render(run_sweep(spec), spec.header(), spec.fmt)
    assert text_a == text_b
    threaded = SweepSpec(axis="h", start=-1.0, stop=1.0, steps=41,
                         fixed=ModelParams(jx=1.0, jy=0.7, h=0.0, n_sites=100),
                         threads=4)
    text_c = render(run_sweep(threaded), threaded.header(), threaded.fmt)
    assert text_a == text_c
