"""Frequency-modulated quantum Rabi model toolkit.

Simulates a two-level atom in a cavity whose transition frequency is
sinusoidally modulated, derives the effective deep-strong excitation-conserving
model that the modulation engineers, validates it dynamically through fidelity
traces, and maps the ground-state phase structure over detuning and modulation
amplitude.
"""

__version__ = "0.1.0"

from .dynamics import (
    FidelityTrace,
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
from .fockspace import (
    CoherentTailWarning,
    CutoffCheck,
    FockSpace,
    NotHermitian,
    OperatorMatrix,
    StateVector,
    TailTooHeavy,
    annihilation,
    coherent_state,
    cutoff_convergence,
    diagonalize,
    jc_hamiltonian,
    number,
    pauli,
    product_state,
    state_from_csv,
    state_to_csv,
)
from .model import CouplingRegime, ModelParams, classify_regime
from .modulation import (
    EffectiveParams,
    M0Zero,
    OutOfEnvelope,
    RwaReport,
    TieWarning,
    bessel_j,
    bessel_j_all,
    effective_params,
    rwa_report,
    select_m0,
    zero_point,
)
from .phases import (
    BoundaryCurve,
    BoundaryPoint,
    PhaseDiagram,
    boundary_scan,
    diagram,
    phase_at,
    photon_ladder,
)
from .spectrum import (
    CutoffSuspect,
    DressedLevel,
    GroundLabel,
    NegativeFrequencyWarning,
    NegativeRadicand,
    critical_couplings,
    effective_eigensystem,
    ground_state,
    jc_eigenenergy,
    order_parameter,
)

__all__ = [name for name in dir() if not name.startswith("_")]
