import math

import numpy as np
import pytest
from scipy.linalg import expm

from fmrabi.dynamics import (
    HamiltonianSpec,
    StepTooLarge,
    build_hamiltonian,
    fidelity_trace,
    frame_transform_u1,
    frame_transform_u2,
    modulation_window,
    propagate,
    rabi_window,
)
from fmrabi.fockspace import FockSpace, coherent_state, jc_hamiltonian, product_state
from fmrabi.model import ModelParams
from fmrabi.modulation import effective_params
from fmrabi.spectrum import effective_eigensystem


@pytest.fixture(scope="module")
def space():
    return FockSpace(12)


@pytest.fixture(scope="module")
def params():
    return ModelParams(omega0=1.0, omega_c=1.0, g=0.05, xi=1.2, v=0.33)


def superposition_state(space, alpha=0.1):
    atom = np.array([1.0, 1.0]) / math.sqrt(2)
    return product_state(atom, coherent_state(alpha, space), space)


def test_lab_sigma_z_coefficient_at_t0(space, params):
    h = build_hamiltonian(HamiltonianSpec.lab(params), 0.0, space).entries
    e0 = space.index(0, 1)
    g0 = space.index(0, 0)
    coeff = 0.5 * (h[e0, e0] - h[g0, g0]).real
    assert coeff == pytest.approx(0.5 * (params.omega0 + params.xi * params.v), abs=1e-14)


def test_all_kinds_hermitian_at_random_times(space, params):
    specs = [
        HamiltonianSpec.lab(params),
        HamiltonianSpec.rot_frame_exact(params),
        HamiltonianSpec.eff_first_frame(params),
        HamiltonianSpec.aniso_rabi(params),
        HamiltonianSpec.eff_jc(params),
    ]
    rng = np.random.default_rng(5)
    for spec in specs:
        for t in rng.uniform(0.0, 50.0, 5):
            h = build_hamiltonian(spec, float(t), space).entries
            assert np.abs(h - h.conj().T).max() < 1e-12


def test_static_kinds_ignore_time(space, params):
    for spec in (HamiltonianSpec.aniso_rabi(params), HamiltonianSpec.eff_jc(params)):
        h0 = build_hamiltonian(spec, 0.0, space).entries
        h1 = build_hamiltonian(spec, 17.3, space).entries
        assert np.abs(h0 - h1).max() == 0.0


def test_eff_jc_matches_substituted_jc_matrix(space, params):
    eff = effective_params(params)
    built = build_hamiltonian(HamiltonianSpec.eff_jc(params), 0.0, space).entries
    direct = jc_hamiltonian(eff.omega0_eff, eff.omega_c_eff, eff.g_r, space).entries
    assert np.abs(built - direct).max() == 0.0
    # and its spectrum agrees with the closed-form effective levels
    evals = np.linalg.eigvalsh(built)
    levels, _ = effective_eigensystem(eff, n_max=6)
    for level in levels:
        assert np.abs(evals - level.energy).min() < 1e-10


def test_rot_frame_reduces_at_zero_modulation(space):
    p = ModelParams(omega0=1.05, omega_c=1.0, g=0.07, xi=0.0, v=0.33)
    spec = HamiltonianSpec.rot_frame_exact(p)
    from fmrabi.fockspace import annihilation, pauli

    a = annihilation(space).entries
    sp = pauli("plus", space).entries
    for t in (0.0, 0.9, 4.4):
        h = build_hamiltonian(spec, t, space).entries
        k = p.g * np.exp(1j * p.delta * t) * (a @ sp)
        k += p.g * np.exp(1j * (p.omega0 + p.omega_c) * t) * (a.conj().T @ sp)
        expected = k + k.conj().T
        assert np.abs(h - expected).max() < 1e-13


def test_bessel_cutoff_floor(params):
    with pytest.raises(ValueError):
        HamiltonianSpec.rot_frame_exact(params, bessel_cutoff=3)
    spec = HamiltonianSpec.rot_frame_exact(params)
    assert spec.bessel_cutoff >= abs(spec.eff.m0) + 15


def test_frame_u1_identity_at_t0(space, params):
    psi = superposition_state(space)
    out = frame_transform_u1(psi, 0.0, params)
    assert np.abs(out.amplitudes - psi.amplitudes).max() == 0.0


def test_frame_u1_phases(space):
    # xi = 0, omega0 = omega_c, t = 2 pi / omega_c: atom phases e^{+-i pi},
    # photon phases e^{i 2 pi n}
    p = ModelParams(omega0=1.0, omega_c=1.0, g=0.0, xi=0.0, v=0.33)
    t = 2.0 * math.pi
    psi = superposition_state(space)
    out = frame_transform_u1(psi, t, p)
    n_idx = np.arange(space.dim) // 2
    sz = np.where(np.arange(space.dim) % 2 == 1, 1.0, -1.0)
    expected = psi.amplitudes * np.exp(1j * (math.pi * sz + 2.0 * math.pi * n_idx))
    assert np.abs(out.amplitudes - expected).max() < 1e-12
    assert out.norm() == pytest.approx(1.0, abs=1e-14)


def test_frame_u2_identity_and_inverse(space, params):
    eff = effective_params(params)
    psi = superposition_state(space)
    assert np.abs(frame_transform_u2(psi, 0.0, eff).amplitudes - psi.amplitudes).max() == 0.0
    fwd = frame_transform_u2(psi, 3.7, eff)
    back = frame_transform_u2(fwd, -3.7, eff)
    assert np.abs(back.amplitudes - psi.amplitudes).max() < 1e-14
    assert fwd.norm() == pytest.approx(1.0, abs=1e-14)


def test_propagate_diagonal_phase(space):
    # pure cavity ladder: |g,1> acquires e^{-i omega_c t}
    p = ModelParams(omega0=0.0, omega_c=1.0, g=0.0, xi=0.0, v=0.33)
    psi0 = space.basis_state(1, 0)
    t_end = math.pi
    states = propagate(HamiltonianSpec.lab(p), psi0, [0.0, t_end])
    amp = states[-1].amplitudes[space.index(1, 0)]
    assert amp == pytest.approx(-1.0 + 0j, abs=1e-10)


def test_propagate_vacuum_rabi_oscillation(space):
    # oracle: two-level closed form P_e(t) = cos^2(g_r t) at zero detuning
    p = ModelParams(omega0=1.0, omega_c=1.0, g=0.05, xi=1.0, v=0.33)
    eff = effective_params(p)
    psi0 = space.basis_state(0, 1)
    t_grid = np.linspace(0.0, 2.0 * math.pi / abs(eff.g_r), 160)
    states = propagate(HamiltonianSpec.eff_jc(p), psi0, t_grid)
    p_e = np.array([abs(s.amplitudes[space.index(0, 1)]) ** 2 for s in states])
    assert np.abs(p_e - np.cos(eff.g_r * t_grid) ** 2).max() < 1e-12


def test_propagate_static_matches_expm(space, params):
    # independent oracle: dense matrix exponential
    psi0 = superposition_state(space)
    h = build_hamiltonian(HamiltonianSpec.aniso_rabi(params), 0.0, space).entries
    t = 37.0
    states = propagate(HamiltonianSpec.aniso_rabi(params), psi0, [0.0, t])
    expected = expm(-1j * t * h) @ psi0.amplitudes
    assert np.abs(states[-1].amplitudes - expected).max() < 1e-10


def test_propagate_time_dependent_matches_expm_product(space):
    # independent oracle: explicit midpoint product with scipy expm
    p = ModelParams(omega0=1.0, omega_c=1.0, g=0.05, xi=2.48, v=0.33)
    spec = HamiltonianSpec.rot_frame_exact(p)
    psi0 = superposition_state(space)
    t_end = 4.0
    nsteps = 64
    h_step = t_end / nsteps
    psi = psi0.amplitudes.copy()
    for k in range(nsteps):
        mid = (k + 0.5) * h_step
        hmat = build_hamiltonian(spec, mid, space).entries
        psi = expm(-1j * h_step * hmat) @ psi
    # a grid at the oracle's step boundaries with base h >= h_step makes
    # propagate take exactly one midpoint substep per interval
    step_factor = int((2.0 * math.pi / p.v) / h_step)  # base h slightly above h_step
    states = propagate(
        spec, psi0, np.linspace(0.0, t_end, nsteps + 1), refine=False, step_factor=step_factor
    )
    assert np.abs(states[-1].amplitudes - psi).max() < 1e-12


def test_propagate_grid_validation(space, params):
    psi0 = superposition_state(space)
    with pytest.raises(ValueError):
        propagate(HamiltonianSpec.eff_jc(params), psi0, [1.0, 2.0])
    with pytest.raises(ValueError):
        propagate(HamiltonianSpec.eff_jc(params), psi0, [0.0, 2.0, 1.0])


def test_propagate_unitarity_long_run(space):
    p = ModelParams(omega0=1.0, omega_c=1.0, g=0.05, xi=2.48, v=0.33)
    psi0 = superposition_state(space)
    t_grid = np.linspace(0.0, 200.0, 21)
    # norm preservation is independent of the amplitude-convergence guard
    states = propagate(HamiltonianSpec.rot_frame_exact(p), psi0, t_grid, guard_tol=1e-6)
    for s in states:
        assert abs(s.norm() - 1.0) < 1e-10


def test_step_too_large(space):
    p = ModelParams(omega0=1.0, omega_c=1.0, g=0.05, xi=2.48, v=0.33)
    psi0 = superposition_state(space)
    with pytest.raises(StepTooLarge):
        propagate(
            HamiltonianSpec.lab(p),
            psi0,
            np.linspace(0.0, 60.0, 4),
            step_factor=2,
            max_refinements=1,
        )


def test_first_frame_equivalence(space):
    # evolving in the lab frame and rotating afterwards must match the
    # sideband-expanded dynamics; validates the Jacobi-Anger expansion and the
    # diagonal collapse of the time-ordered frame exponential
    p = ModelParams(omega0=1.0, omega_c=1.0, g=0.05, xi=2.48, v=0.33)
    psi0 = superposition_state(space)
    grid = np.linspace(0.0, 30.0, 7)
    lab = propagate(HamiltonianSpec.lab(p), psi0, grid, guard_tol=1e-5)
    rot = propagate(HamiltonianSpec.rot_frame_exact(p), psi0, grid, guard_tol=1e-5)
    for t, s_lab, s_rot in zip(grid, lab, rot):
        overlap = abs(frame_transform_u1(s_lab, float(t), p).overlap(s_rot))
        assert overlap >= 1.0 - 1e-8


def test_second_frame_equivalence(space, params):
    # the two frames are exactly unitarily related
    eff = effective_params(params)
    psi0 = superposition_state(space)
    grid = np.linspace(0.0, 400.0, 9)
    first = propagate(HamiltonianSpec.eff_first_frame(params), psi0, grid, guard_tol=1e-11)
    second = propagate(HamiltonianSpec.aniso_rabi(params), psi0, grid)
    for t, s1, s2 in zip(grid, first, second):
        overlap = abs(frame_transform_u2(s1, float(t), eff).overlap(s2))
        assert overlap >= 1.0 - 1e-10


def test_fidelity_identical_specs(space, params):
    psi0 = superposition_state(space)
    grid = np.linspace(0.0, 50.0, 11)
    trace = fidelity_trace(
        HamiltonianSpec.eff_jc(params), HamiltonianSpec.eff_jc(params), psi0, grid
    )
    assert np.abs(trace.values - 1.0).max() < 1e-12
    assert trace.values[0] == pytest.approx(1.0, abs=1e-12)


def test_fidelity_bounds_and_summary(space, params):
    psi0 = superposition_state(space)
    grid = np.linspace(0.0, 300.0, 31)
    trace = fidelity_trace(
        HamiltonianSpec.aniso_rabi(params), HamiltonianSpec.eff_jc(params), psi0, grid
    )
    assert np.all(trace.values <= 1.0 + 1e-12)
    assert np.all(trace.values >= 0.0)
    summary = trace.summary()
    assert summary["min"] == trace.min_value
    assert summary["final"] == trace.values[-1]
    assert trace.values[int(np.argmin(trace.values))] == trace.min_value


def test_fidelity_global_phase_invariance(space, params):
    atom = np.array([1.0, 1.0]) / math.sqrt(2)
    cavity = coherent_state(0.1, space)
    psi_a = product_state(atom, cavity, space)
    psi_b = product_state(np.exp(1j * 0.83) * atom, cavity, space)
    grid = np.linspace(0.0, 40.0, 9)
    tr_a = fidelity_trace(
        HamiltonianSpec.aniso_rabi(params), HamiltonianSpec.eff_jc(params), psi_a, grid
    )
    tr_b = fidelity_trace(
        HamiltonianSpec.aniso_rabi(params), HamiltonianSpec.eff_jc(params), psi_b, grid
    )
    assert np.abs(tr_a.values - tr_b.values).max() < 1e-12


def test_window_helpers(params):
    eff = effective_params(params)
    w = rabi_window(eff, 100)
    assert w[0] == 0.0 and len(w) == 100
    assert w[-1] == pytest.approx(2.0 * math.pi / abs(eff.g_r))
    m = modulation_window(params, 50)
    assert m[-1] == pytest.approx(2.0 * math.pi / params.v)
    zero_eff = effective_params(ModelParams(1.0, 1.0, 0.0, 0.0, 0.33))
    with pytest.raises(ValueError):
        rabi_window(zero_eff)
