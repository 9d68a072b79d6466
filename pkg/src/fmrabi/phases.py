"""Phase structure of the effective model over detuning and modulation amplitude.

The ground state of the effective excitation-conserving model changes between
|g,0> (normal phase, zero mean photons) and the dressed levels |n,-> as the
renormalized coupling g_r = g J_0(xi) sweeps through the critical ratios.
This module locates the boundaries by bisecting the ground-energy difference
(robust even where the closed-form critical couplings lose their branch
ordering), fills (delta, xi) diagrams and traces the order-parameter ladder.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .model import ModelParams
from .modulation import EffectiveParams, bessel_j, effective_params
from .spectrum import (
    CutoffSuspect,
    GroundLabel,
    effective_eigensystem,
    ground_search,
    order_parameter,
    order_parameter_value,
)

PRESCAN_STEP = 1e-3
XI_TOL = 1e-6
BOUNDARY_ENERGY_TOL = 1e-9
STITCH_FACTOR = 5.0
MAX_WORKERS_ENV = "FMRABI_MAX_WORKERS"


@dataclass(frozen=True)
class BoundaryPoint:
    """Phase boundary in xi at fixed detuning; n = 0 encodes the normal phase."""

    xi: float
    left_n: int
    right_n: int


@dataclass(frozen=True, eq=False)
class BoundaryCurve:
    """Stitched boundary polyline across detuning rows."""

    curve_id: int
    deltas: list[float]
    xis: list[float]
    left_n: int
    right_n: int


@dataclass(frozen=True, eq=False)
class PhaseDiagram:
    """Ground-state label (photon index, 0 = normal) and order parameter per cell."""

    v: float
    delta_grid: np.ndarray
    xi_grid: np.ndarray
    label_n: np.ndarray  # shape (len(delta_grid), len(xi_grid)), int
    n_bar: np.ndarray  # same shape, float
    boundaries: list[BoundaryCurve] = field(default_factory=list)

    def cell(self, i: int, j: int) -> tuple[int, float]:
        return int(self.label_n[i, j]), float(self.n_bar[i, j])


def phase_label_name(n: int) -> str:
    return "normal" if n == 0 else "superradiant"


def phase_at(p: ModelParams) -> tuple[GroundLabel, float]:
    """Ground label and order parameter of the effective model at p."""
    eff = effective_params(p)
    _, ground = effective_eigensystem(eff)
    n_bar = order_parameter(ground, ground.n, eff.delta_eff, eff.g_r)
    return ground, n_bar


def _row_cells(eff0: EffectiveParams, g_r: np.ndarray, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Ground index and order parameter along one detuning row (vectorized in xi)."""
    winner, _, _ = ground_search(eff0.omega_c_eff, eff0.omega0_eff, g_r, n_max)
    if np.any(winner == n_max):
        raise CutoffSuspect(f"ground-state search minimized at the cutoff n_max={n_max}")
    n_arr = winner.astype(float)
    with np.errstate(invalid="ignore", divide="ignore"):
        n_bar = np.where(
            winner == 0, 0.0, order_parameter_value(n_arr, eff0.delta_eff, g_r)
        )
    return winner, n_bar


def _row_effective(v: float, delta: float, g: float, omega_c: float) -> EffectiveParams:
    # xi enters only through g_r; evaluating at xi = 0 fixes m0 and the
    # effective frequencies for the whole row.
    return effective_params(ModelParams(omega_c + delta, omega_c, g, 0.0, v))


def _candidate_energy(eff0: EffectiveParams, n: int, g_r: float) -> float:
    if n == 0:
        return -0.5 * eff0.omega0_eff
    delta = eff0.omega0_eff - eff0.omega_c_eff
    return (n - 0.5) * eff0.omega_c_eff - 0.5 * math.sqrt(
        4.0 * (g_r * g_r) * n + delta * delta
    )


def boundary_scan(
    v: float,
    delta: float,
    xi_range: tuple[float, float],
    g: float = 0.05,
    omega0: float | None = None,
    omega_c: float = 1.0,
    prescan_step: float = PRESCAN_STEP,
    xi_tol: float = XI_TOL,
    n_max: int = 30,
) -> list[BoundaryPoint]:
    """Every ground-state change in xi_range, bisected to |dxi| <= xi_tol.

    A fine pre-scan (default step 1e-3) brackets each label change; bisection
    then drives both the bracket below xi_tol and the ground-energy difference
    at the reported point below 1e-9*|omega_c|.  With omega0 omitted the atom
    frequency is omega_c + delta.
    """
    if omega0 is None:
        omega0 = omega_c + delta
    elif abs((omega0 - omega_c) - delta) > 1e-12 * max(1.0, abs(omega_c)):
        raise ValueError("omega0 - omega_c inconsistent with delta")
    lo, hi = xi_range
    if not lo < hi:
        raise ValueError(f"empty xi range {xi_range}")
    eff0 = _row_effective(v, delta, g, omega_c)
    n_points = int(math.floor((hi - lo) / prescan_step)) + 1
    xis = lo + prescan_step * np.arange(n_points)
    if xis[-1] < hi:
        xis = np.append(xis, hi)
    g_r = g * np.array([bessel_j(0, x) for x in xis])
    winner, _, _ = ground_search(eff0.omega_c_eff, eff0.omega0_eff, g_r, n_max)
    energy_tol = BOUNDARY_ENERGY_TOL * abs(omega_c)
    out = []
    for k in np.flatnonzero(np.diff(winner)):
        left_n, right_n = int(winner[k]), int(winner[k + 1])
        a, b = float(xis[k]), float(xis[k + 1])

        def diff(x: float) -> float:
            gr = g * bessel_j(0, x)
            return _candidate_energy(eff0, left_n, gr) - _candidate_energy(eff0, right_n, gr)

        fa = diff(a)
        mid = 0.5 * (a + b)
        for _ in range(200):
            mid = 0.5 * (a + b)
            fm = diff(mid)
            if (b - a) <= xi_tol and abs(fm) <= energy_tol:
                break
            if (fa < 0) == (fm < 0):
                a, fa = mid, fm
            else:
                b = mid
        out.append(BoundaryPoint(xi=mid, left_n=left_n, right_n=right_n))
    return out


def photon_ladder(
    v: float,
    xi_grid,
    p_base: ModelParams,
    delta: float = 0.0,
    n_max: int = 30,
) -> list[tuple[float, float]]:
    """Order parameter along a xi grid at fixed detuning."""
    xi_grid = np.asarray(xi_grid, dtype=float)
    eff0 = _row_effective(v, delta, p_base.g, p_base.omega_c)
    g_r = p_base.g * np.array([bessel_j(0, x) for x in xi_grid])
    _, n_bar = _row_cells(eff0, g_r, n_max)
    return list(zip(xi_grid.tolist(), n_bar.tolist()))


def diagram(
    v: float,
    delta_grid,
    xi_grid,
    p_base: ModelParams,
    n_max: int = 30,
    prescan_step: float = PRESCAN_STEP,
    xi_tol: float = XI_TOL,
) -> PhaseDiagram:
    """Fill a (delta, xi) phase diagram and stitch its boundary polylines.

    Rows are independent; FMRABI_MAX_WORKERS (default 1) caps the thread pool
    used to compute them.
    """
    delta_grid = np.asarray(delta_grid, dtype=float)
    xi_grid = np.asarray(xi_grid, dtype=float)
    if np.any(np.diff(delta_grid) <= 0) or np.any(np.diff(xi_grid) <= 0):
        raise ValueError("grids must be strictly ascending")
    g = p_base.g
    omega_c = p_base.omega_c
    g_r_grid = g * np.array([bessel_j(0, x) for x in xi_grid])

    def compute_row(delta: float):
        eff0 = _row_effective(v, delta, g, omega_c)
        winner, n_bar = _row_cells(eff0, g_r_grid, n_max)
        points = boundary_scan(
            v,
            delta,
            (float(xi_grid[0]), float(xi_grid[-1])),
            g=g,
            omega_c=omega_c,
            prescan_step=prescan_step,
            xi_tol=xi_tol,
            n_max=n_max,
        )
        return winner, n_bar, points

    workers = max(1, int(os.environ.get(MAX_WORKERS_ENV, "1")))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(compute_row, delta_grid))
    else:
        rows = [compute_row(d) for d in delta_grid]

    label_n = np.array([r[0] for r in rows], dtype=int)
    n_bar = np.array([r[1] for r in rows], dtype=float)
    boundaries = _stitch(delta_grid, [r[2] for r in rows], prescan_step)
    return PhaseDiagram(
        v=v,
        delta_grid=delta_grid,
        xi_grid=xi_grid,
        label_n=label_n,
        n_bar=n_bar,
        boundaries=boundaries,
    )


def _stitch(
    delta_grid: np.ndarray,
    rows: list[list[BoundaryPoint]],
    prescan_step: float,
) -> list[BoundaryCurve]:
    """Join per-row boundary points into polylines by nearest-neighbor continuation.

    Points on adjacent rows continue a curve when they separate the same pair
    of phases and sit within STITCH_FACTOR * prescan_step in xi; anything else
    starts a new curve.
    """
    tol = STITCH_FACTOR * prescan_step
    open_curves: list[dict] = []
    finished: list[dict] = []
    for delta, points in zip(delta_grid, rows):
        still_open: list[dict] = []
        unmatched = list(points)
        for curve in open_curves:
            best = None
            for pt in unmatched:
                if (pt.left_n, pt.right_n) != curve["labels"]:
                    continue
                gap = abs(pt.xi - curve["xis"][-1])
                if gap < tol and (best is None or gap < abs(best.xi - curve["xis"][-1])):
                    best = pt
            if best is None:
                finished.append(curve)
            else:
                unmatched.remove(best)
                curve["deltas"].append(float(delta))
                curve["xis"].append(best.xi)
                still_open.append(curve)
        for pt in unmatched:
            still_open.append(
                {
                    "labels": (pt.left_n, pt.right_n),
                    "deltas": [float(delta)],
                    "xis": [pt.xi],
                }
            )
        open_curves = still_open
    finished.extend(open_curves)
    return [
        BoundaryCurve(
            curve_id=i,
            deltas=c["deltas"],
            xis=c["xis"],
            left_n=c["labels"][0],
            right_n=c["labels"][1],
        )
        for i, c in enumerate(finished)
    ]
