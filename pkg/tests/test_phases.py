import warnings

import numpy as np
import pytest

from fmrabi.model import ModelParams
from fmrabi.modulation import bessel_j
from fmrabi.phases import boundary_scan, diagram, phase_at, photon_ladder
from fmrabi.spectrum import critical_couplings, order_parameter

V033_BOUNDARIES = [0.505, 0.797, 1.043, 1.283, 1.553, 2.041, 2.837]


def base_params(v=0.33, xi=0.0, g=0.05, delta=0.0):
    return ModelParams(omega0=1.0 + delta, omega_c=1.0, g=g, xi=xi, v=v)


def test_phase_at_fourth_step():
    label, n_bar = phase_at(base_params(v=0.33, xi=1.0))
    assert (label.kind, label.n) == ("superradiant", 4)
    assert n_bar == 3.5


def test_phase_at_normal_region():
    label, n_bar = phase_at(base_params(v=0.49, xi=2.0))
    assert label.kind == "normal"
    assert n_bar == 0.0


def test_phase_at_zero_coupling():
    for xi in (0.0, 1.0, 2.7):
        label, n_bar = phase_at(base_params(g=0.0, xi=xi))
        assert label.kind == "normal" and n_bar == 0.0


def test_boundary_scan_v033():
    points = boundary_scan(0.33, 0.0, (0.0, 3.0))
    assert len(points) == 7
    for point, ref in zip(points, V033_BOUNDARIES):
        assert point.xi == pytest.approx(ref, abs=5e-3)
    # label sequence: |6,-> down to |g,0>, then back into |1,->
    transitions = [(p.left_n, p.right_n) for p in points]
    assert transitions == [(6, 5), (5, 4), (4, 3), (3, 2), (2, 1), (1, 0), (0, 1)]


def test_boundary_scan_v049():
    points = boundary_scan(0.49, 0.0, (0.0, 3.0))
    assert len(points) == 2
    assert points[0].xi == pytest.approx(0.372, abs=5e-3)
    assert 1.696 - 5e-3 <= points[1].xi <= 1.698 + 5e-3


def test_boundary_scan_empty_when_uniform():
    assert boundary_scan(0.33, 0.0, (0.0, 3.0), g=0.0) == []


def test_boundary_against_independent_bessel_bisection():
    # the |g,0> <-> |1,-> boundary solves g J_0(xi) = omega_c_eff = 0.01;
    # bisect the Bessel equation directly and compare
    lo, hi = 1.9, 2.2
    f = lambda x: 0.05 * bessel_j(0, x) - 0.01
    assert f(lo) > 0 > f(hi)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    independent_root = 0.5 * (lo + hi)
    points = boundary_scan(0.33, 0.0, (0.0, 3.0))
    normal_onset = [p for p in points if (p.left_n, p.right_n) == (1, 0)][0]
    assert normal_onset.xi == pytest.approx(independent_root, abs=1e-5)


def test_boundary_energy_residual():
    # at each reported boundary the two phases are degenerate to 1e-9 omega_c
    from fmrabi.phases import _candidate_energy, _row_effective

    eff0 = _row_effective(0.33, 0.0, 0.05, 1.0)
    for point in boundary_scan(0.33, 0.0, (0.0, 3.0)):
        g_r = 0.05 * bessel_j(0, point.xi)
        gap = abs(
            _candidate_energy(eff0, point.left_n, g_r)
            - _candidate_energy(eff0, point.right_n, g_r)
        )
        assert gap <= 1e-9


def test_boundaries_match_closed_form_criticals():
    # wherever omega_c_eff > 0, |g_r(xi*)| must equal the closed-form critical
    # coupling of the two phases it separates, to 1e-5 in xi
    from fmrabi.phases import _row_effective

    eff0 = _row_effective(0.33, 0.0, 0.05, 1.0)
    for point in boundary_scan(0.33, 0.0, (0.0, 3.0)):
        n_small = min(point.left_n, point.right_n)
        (g_crit,) = critical_couplings(eff0.omega_c_eff, eff0.delta_eff, [n_small])
        lo, hi = point.xi - 2e-3, point.xi + 2e-3
        f = lambda x: abs(0.05 * bessel_j(0, x)) - g_crit
        assert (f(lo) > 0) != (f(hi) > 0)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if (f(mid) > 0) == (f(lo) > 0):
                lo = mid
            else:
                hi = mid
        assert point.xi == pytest.approx(0.5 * (lo + hi), abs=1e-5)


def test_ladder_v033_plateaus():
    pairs = photon_ladder(0.33, np.linspace(0.0, 3.0, 601), base_params())
    values = {v for _, v in pairs}
    assert values == {5.5, 4.5, 3.5, 2.5, 1.5, 0.5, 0.0}


def test_ladder_v049_plateaus():
    pairs = photon_ladder(0.49, np.linspace(0.0, 3.0, 601), base_params(v=0.49))
    values = {v for _, v in pairs}
    assert values == {1.5, 0.5, 0.0}


def test_ladder_monotonicity_through_first_j0_zero():
    xi = np.linspace(0.0, 3.0, 1201)
    pairs = photon_ladder(0.33, xi, base_params())
    n_bar = np.array([v for _, v in pairs])
    first_zero = 2.4048255577
    before = n_bar[xi <= first_zero]
    assert np.all(np.diff(before) <= 0)
    after = n_bar[xi >= first_zero]
    assert np.all(np.diff(after) >= 0)
    # re-entrant superradiance on the negative J_0 lobe
    assert n_bar[-1] == 0.5


def test_diagram_zero_coupling_uniform():
    dg = diagram(
        0.33,
        np.linspace(-0.01, 0.01, 3),
        np.linspace(0.0, 3.0, 31),
        base_params(g=0.0),
    )
    assert np.all(dg.label_n == 0)
    assert np.all(dg.n_bar == 0.0)
    assert dg.boundaries == []


def test_diagram_resonant_row_matches_scan():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        dg = diagram(
            0.33,
            np.linspace(-0.01, 0.01, 3),
            np.linspace(0.0, 3.0, 121),
            base_params(),
        )
    scans = boundary_scan(0.33, 0.0, (0.0, 3.0))
    row_values = sorted(
        x for c in dg.boundaries for d, x in zip(c.deltas, c.xis) if d == 0.0
    )
    assert len(row_values) == len(scans)
    for got, ref in zip(row_values, scans):
        assert got == pytest.approx(ref.xi, abs=1e-9)


def test_diagram_cells_are_pure():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        dg = diagram(
            0.33,
            np.linspace(-0.02, 0.02, 5),
            np.linspace(0.0, 3.0, 61),
            base_params(),
        )
        rng = np.random.default_rng(2)
        for _ in range(25):
            i = int(rng.integers(0, len(dg.delta_grid)))
            j = int(rng.integers(0, len(dg.xi_grid)))
            p = base_params(xi=float(dg.xi_grid[j]), delta=float(dg.delta_grid[i]))
            label, n_bar = phase_at(p)
            assert label.n == dg.label_n[i, j]
            assert n_bar == dg.n_bar[i, j]  # bit-identical


def test_diagram_cells_consistent_with_order_parameter():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        dg = diagram(
            0.49,
            np.linspace(-0.02, 0.02, 5),
            np.linspace(0.0, 3.0, 61),
            base_params(v=0.49),
        )
    from fmrabi.phases import _row_effective

    for i, delta in enumerate(dg.delta_grid):
        eff0 = _row_effective(0.49, float(delta), 0.05, 1.0)
        for j, xi in enumerate(dg.xi_grid):
            n = int(dg.label_n[i, j])
            if n == 0:
                assert dg.n_bar[i, j] == 0.0
            else:
                g_r = 0.05 * bessel_j(0, float(xi))
                expected = n - 0.5 + eff0.delta_eff / (
                    2.0 * np.sqrt(4.0 * n * g_r * g_r + eff0.delta_eff**2)
                )
                assert dg.n_bar[i, j] == pytest.approx(expected, abs=1e-12)


def test_diagram_boundary_polyline_structure():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        dg = diagram(
            0.33,
            np.linspace(-0.005, 0.005, 11),
            np.linspace(0.0, 3.0, 61),
            base_params(),
        )
    assert dg.boundaries
    interior = [c for c in dg.boundaries if (c.left_n, c.right_n) == (6, 5)]
    assert any(len(c.xis) == len(dg.delta_grid) for c in interior)
    for curve in dg.boundaries:
        assert len(curve.deltas) == len(curve.xis) >= 1
        assert list(curve.deltas) == sorted(curve.deltas)


def test_diagram_worker_env_equivalence(monkeypatch):
    grid_d = np.linspace(-0.01, 0.01, 4)
    grid_x = np.linspace(0.0, 3.0, 41)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        serial = diagram(0.33, grid_d, grid_x, base_params())
        monkeypatch.setenv("FMRABI_MAX_WORKERS", "4")
        parallel = diagram(0.33, grid_d, grid_x, base_params())
    assert np.array_equal(serial.label_n, parallel.label_n)
    assert np.array_equal(serial.n_bar, parallel.n_bar)
    assert len(serial.boundaries) == len(parallel.boundaries)


def test_boundary_scan_rejects_inconsistent_omega0():
    with pytest.raises(ValueError):
        boundary_scan(0.33, 0.01, (0.0, 3.0), omega0=1.5)
