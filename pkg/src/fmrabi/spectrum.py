"""Closed-form eigensystem of the excitation-conserving atom-cavity model.

The n-excitation doublet |n,+/-> has energy

    E_{n,+/-} = (n - 1/2) omega_c +/- Omega_n / 2,
    Omega_n   = sqrt(4 g^2 n + delta^2),

with the uncoupled level |g,0> at -omega0/2.  The same formulas describe the
effective modulated model after the substitutions omega_c -> omega_c_eff,
omega0 -> omega0_eff and g -> g_r, so everything here accepts raw frequency
arguments and works unchanged on either parameter set.

The ground state is found by direct minimization over the closed-form
candidates rather than by inverting the critical-coupling formulas; those
closed forms are kept as a verification layer because their branch ordering
assumes positive effective frequencies.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .modulation import EffectiveParams

DEGENERACY_TOL_FACTOR = 1e-12


class NegativeRadicand(ValueError):
    """Closed-form critical coupling undefined for these frequencies."""


class CutoffSuspect(RuntimeError):
    """Ground-state search hit the candidate cutoff; n_max is too small."""


class NegativeFrequencyWarning(UserWarning):
    """Effective frequencies are negative; branch ordering is conventional."""


@dataclass(frozen=True)
class DressedLevel:
    """One dressed level |n,+/-> with its mixing angle theta in [0, pi/2].

    The angle is reported in the sign gauge with non-negative coupling
    (a -> -a maps g -> -g and leaves the spectrum unchanged), so
    sin(2 theta) = 2|g| sqrt(n) / Omega_n and cos(2 theta) = delta / Omega_n.
    """

    n: int
    branch: str  # "plus" | "minus"
    energy: float
    theta: float


@dataclass(frozen=True)
class GroundLabel:
    """Ground-state label: kind "normal" (|g,0>, n = 0) or "superradiant" (|n,->).

    `degenerate` marks a tie within DEGENERACY_TOL_FACTOR * |omega_c|, which is
    resolved toward the smaller photon number.
    """

    kind: str
    n: int
    energy: float
    degenerate: bool = False


def jc_eigenenergy(n: int, branch: str, omega_c: float, delta: float, g: float) -> float:
    """Closed-form dressed energy E_{n,+/-}; valid as a raw formula for any signs."""
    if n < 1:
        raise ValueError(f"excitation number must be >= 1, got {n}")
    if branch not in ("plus", "minus"):
        raise ValueError(f"branch must be 'plus' or 'minus', got {branch!r}")
    rabi = math.sqrt(4.0 * (g * g) * n + delta * delta)
    sign = 1.0 if branch == "plus" else -1.0
    return (n - 0.5) * omega_c + 0.5 * sign * rabi


def critical_couplings(omega_c: float, delta: float, n_list: Iterable[int]) -> list[float]:
    """Closed-form level-crossing couplings.

    n = 0 gives the |g,0> vs |1,-> crossing g_0 = sqrt((omega_c+delta) omega_c);
    n >= 1 gives the |n,-> vs |n+1,-> crossing

        g_n = sqrt(omega_c^2 (2n+1) + sqrt(4 n omega_c^4 (n+1) + delta^2 omega_c^2)).
    """
    if omega_c == 0:
        raise ValueError("omega_c must be nonzero")
    out = []
    for n in n_list:
        if n < 0:
            raise ValueError(f"crossing index must be >= 0, got {n}")
        if n == 0:
            radicand = (omega_c + delta) * omega_c
            if radicand < 0:
                raise NegativeRadicand(
                    f"(omega_c + delta) * omega_c = {radicand!r} < 0 for the n=0 crossing"
                )
            out.append(math.sqrt(radicand))
        else:
            inner = math.sqrt(4.0 * n * omega_c**4 * (n + 1) + delta * delta * omega_c * omega_c)
            out.append(math.sqrt(omega_c * omega_c * (2 * n + 1) + inner))
    return out


def ground_candidates(omega_c: float, omega0: float, g, n_max: int) -> np.ndarray:
    """Candidate ground energies, row 0 = |g,0>, row n = |n,->.

    `g` may be a scalar or a 1-D array; the result has shape (n_max+1,) + g.shape.
    Shared by the scalar ground-state search and the vectorized phase sweeps so
    both paths produce bit-identical energies.
    """
    g_arr = np.asarray(g, dtype=float)
    delta = omega0 - omega_c
    n_col = np.arange(1, n_max + 1, dtype=float).reshape((-1,) + (1,) * g_arr.ndim)
    e_minus = (n_col - 0.5) * omega_c - 0.5 * np.sqrt(4.0 * (g_arr * g_arr) * n_col + delta * delta)
    e_g0 = np.broadcast_to(-0.5 * omega0, (1,) + g_arr.shape)
    return np.concatenate([e_g0, e_minus], axis=0)


def ground_search(omega_c: float, omega0: float, g, n_max: int):
    """Index of the minimal candidate (0 = |g,0>) plus energy and tie flag.

    Ties within DEGENERACY_TOL_FACTOR * |omega_c| resolve to the smaller index.
    Vectorized over `g` like :func:`ground_candidates`.
    """
    cands = ground_candidates(omega_c, omega0, g, n_max)
    tol = DEGENERACY_TOL_FACTOR * abs(omega_c)
    within = cands <= cands.min(axis=0) + tol
    winner = within.argmax(axis=0)
    degenerate = within.sum(axis=0) > 1
    energy = np.take_along_axis(cands, winner[None, ...], axis=0)[0]
    return winner, energy, degenerate


def ground_state(omega_c: float, omega0: float, g: float, n_max: int = 30) -> GroundLabel:
    """Minimize over {-omega0/2} and {E_{n,-}: 1 <= n <= n_max}.

    Raises CutoffSuspect when the minimizer sits at the cutoff n_max (more
    candidates would be needed to trust it).  Negative frequencies are handled
    as raw formulas and flagged with a NegativeFrequencyWarning.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    if omega_c < 0 or omega0 < 0:
        warnings.warn(
            "negative effective frequency; branch labels are conventional here",
            NegativeFrequencyWarning,
            stacklevel=2,
        )
    winner, energy, degenerate = ground_search(omega_c, omega0, g, n_max)
    n = int(winner)
    if n == n_max:
        raise CutoffSuspect(f"ground-state search minimized at the cutoff n_max={n_max}")
    if n == 0:
        return GroundLabel("normal", 0, float(energy), bool(degenerate))
    return GroundLabel("superradiant", n, float(energy), bool(degenerate))


def order_parameter_value(n, delta: float, g):
    """Mean ground-state photon number n - 1/2 + delta/(2 Omega_n) for |n,->.

    Ufunc-safe helper shared with the vectorized sweeps.
    """
    rabi = np.sqrt(4.0 * (g * g) * n + delta * delta)
    return (n - 0.5) + delta / (2.0 * rabi)


def order_parameter(label: GroundLabel, n: int, delta: float, g: float) -> float:
    """Order parameter of a labelled ground state: 0 in the normal phase."""
    if n != label.n:
        raise ValueError(f"excitation number {n} inconsistent with label n={label.n}")
    if label.kind == "normal":
        return 0.0
    return float(order_parameter_value(n, delta, g))


def effective_eigensystem(
    eff: EffectiveParams, n_max: int = 30
) -> tuple[list[DressedLevel], GroundLabel]:
    """Dressed levels and ground label of the effective excitation-conserving model.

    Energies use (omega_c_eff, omega0_eff, g_r); mixing angles use the exact
    effective detuning delta_eff and the |g_r| sign gauge.
    """
    levels = []
    for n in range(1, n_max + 1):
        theta = 0.5 * math.atan2(2.0 * abs(eff.g_r) * math.sqrt(n), eff.delta_eff)
        for branch in ("minus", "plus"):
            energy = jc_eigenenergy(n, branch, eff.omega_c_eff, eff.delta_eff, eff.g_r)
            levels.append(DressedLevel(n=n, branch=branch, energy=energy, theta=theta))
    ground = ground_state(eff.omega_c_eff, eff.omega0_eff, eff.g_r, n_max)
    return levels, ground


def analytic_spectrum(
    omega_c: float, omega0: float, g: float, n_max: int
) -> np.ndarray:
    """Every eigenvalue of the truncated matrix model, sorted ascending.

    Includes |g,0>, all doublets up to n_max and the lone |e,n_max> level that
    the photon cutoff leaves unpaired, so the list matches a dense
    diagonalization of the same truncation one-for-one.
    """
    delta = omega0 - omega_c
    vals = [-0.5 * omega0]
    for n in range(1, n_max + 1):
        vals.append(jc_eigenenergy(n, "minus", omega_c, delta, g))
        vals.append(jc_eigenenergy(n, "plus", omega_c, delta, g))
    vals.append(0.5 * omega0 + n_max * omega_c)
    return np.sort(np.array(vals))
