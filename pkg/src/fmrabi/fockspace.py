"""Truncated two-level-atom (x) single-cavity-mode Hilbert space.

Dense complex operator algebra on the composite space, coherent states and a
numerical eigensolver used as an oracle for the closed-form spectra.

Basis ordering
--------------
Composite basis index = 2*n + s with the atom index fastest:

    s = 0  ->  |g>        s = 1  ->  |e>        n = 0 .. n_max photons

so the amplitude layout is |g,0>, |e,0>, |g,1>, |e,1>, ...  Serialized states
(see :func:`state_to_csv`) carry (n, atom_level) columns so files stay
portable across truncations.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from math import exp, sqrt

import numpy as np

HERMITICITY_TOL = 1e-12
NORM_TOL = 1e-10

COHERENT_TAIL_ERROR = 1e-6
COHERENT_TAIL_WARN = 1e-12


class NotHermitian(ValueError):
    """Operation requires a Hermitian-tagged operator."""


class TailTooHeavy(ValueError):
    """Coherent-state truncation discards too much probability mass."""


class CoherentTailWarning(UserWarning):
    """Coherent-state truncation tail is measurable but tolerable."""


@dataclass(frozen=True)
class FockSpace:
    """Photon cutoff n_max (inclusive); total dimension 2*(n_max+1)."""

    n_max: int

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")

    @property
    def dim(self) -> int:
        return 2 * (self.n_max + 1)

    def index(self, n: int, level: int) -> int:
        """Composite index of |level, n> with level 0 = |g>, 1 = |e>."""
        if not 0 <= n <= self.n_max:
            raise ValueError(f"photon number {n} outside [0, {self.n_max}]")
        if level not in (0, 1):
            raise ValueError(f"atom level must be 0 or 1, got {level}")
        return 2 * n + level

    def basis_state(self, n: int, level: int) -> "StateVector":
        amps = np.zeros(self.dim, dtype=complex)
        amps[self.index(n, level)] = 1.0
        return StateVector(self, amps)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense complex operator on a FockSpace.

    Operators tagged hermitian=True are checked entrywise against their
    adjoint at construction time (tolerance HERMITICITY_TOL).
    """

    space: FockSpace
    entries: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.shape != (self.space.dim, self.space.dim):
            raise ValueError(
                f"entries shape {entries.shape} does not match space dim {self.space.dim}"
            )
        if self.hermitian:
            dev = np.abs(entries - entries.conj().T).max()
            if dev > HERMITICITY_TOL:
                raise NotHermitian(f"hermitian-tagged matrix deviates by {dev:.3e}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.space.dim

    def adjoint(self) -> "OperatorMatrix":
        return OperatorMatrix(self.space, self.entries.conj().T, hermitian=self.hermitian)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if other.space != self.space:
            raise ValueError("operators live on different spaces")
        return OperatorMatrix(self.space, self.entries @ other.entries)

    def apply(self, state: "StateVector") -> np.ndarray:
        """Raw (unnormalized) image of a state; returns bare amplitudes."""
        return self.entries @ state.amplitudes


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized state on a FockSpace (Euclidean norm 1 within NORM_TOL)."""

    space: FockSpace
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.space.dim,):
            raise ValueError(
                f"amplitude shape {amps.shape} does not match space dim {self.space.dim}"
            )
        nrm = np.linalg.norm(amps)
        if abs(nrm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {nrm!r} deviates from 1 beyond {NORM_TOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other: "StateVector") -> complex:
        """Inner product <self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "StateVector") -> float:
        return float(abs(self.overlap(other)) ** 2)

    def expectation(self, op: OperatorMatrix) -> complex:
        return complex(np.vdot(self.amplitudes, op.entries @ self.amplitudes))


def identity(space: FockSpace) -> OperatorMatrix:
    return OperatorMatrix(space, np.eye(space.dim, dtype=complex), hermitian=True)


def annihilation(space: FockSpace) -> OperatorMatrix:
    """Cavity annihilation operator a (x) identity on the atom.

    a|n> = sqrt(n)|n-1> and a|0> = 0.  Not Hermitian.
    """
    k = space.n_max + 1
    a_cav = np.zeros((k, k), dtype=complex)
    for n in range(1, k):
        a_cav[n - 1, n] = sqrt(n)
    return OperatorMatrix(space, np.kron(a_cav, np.eye(2)))


def number(space: FockSpace) -> OperatorMatrix:
    """Photon-number operator a^dag a."""
    diag = np.repeat(np.arange(space.n_max + 1, dtype=float), 2)
    return OperatorMatrix(space, np.diag(diag).astype(complex), hermitian=True)


_PAULI_2X2 = {
    # atom basis order (|g>, |e>)
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex),
    "plus": np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex),
    "minus": np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex),
}


def pauli(which: str, space: FockSpace) -> OperatorMatrix:
    """Atomic operator (sigma_x, y, z, plus or minus) (x) identity on the cavity.

    sigma_z = |e><e| - |g><g|, sigma_plus = |e><g|, sigma_minus = |g><e|.
    """
    if which not in _PAULI_2X2:
        raise ValueError(f"unknown Pauli label {which!r}")
    mat = np.kron(np.eye(space.n_max + 1), _PAULI_2X2[which])
    return OperatorMatrix(space, mat, hermitian=which in ("x", "y", "z"))


def jc_hamiltonian(omega0: float, omega_c: float, g: float, space: FockSpace) -> OperatorMatrix:
    """Excitation-conserving atom-cavity Hamiltonian.

    H = omega0/2 sigma_z + omega_c a^dag a + g (a^dag sigma_- + a sigma_+).
    The frequencies may be negative; the matrix stays Hermitian.
    """
    a = annihilation(space).entries
    sp = pauli("plus", space).entries
    k = a @ sp  # a sigma_+
    h = 0.5 * omega0 * pauli("z", space).entries + omega_c * number(space).entries
    h = h + g * (k + k.conj().T)
    return OperatorMatrix(space, h, hermitian=True)


def coherent_state(alpha: complex, space: FockSpace) -> np.ndarray:
    """Cavity-factor amplitudes of |alpha>, truncated at n_max and renormalized.

    Returns a length n_max+1 complex vector c_n proportional to alpha^n/sqrt(n!),
    meant to be combined with an atom state via :func:`product_state`.

    Raises TailTooHeavy when the discarded probability mass exceeds 1e-6 and
    warns (CoherentTailWarning) when it exceeds 1e-12.
    """
    k = space.n_max + 1
    amps = np.empty(k, dtype=complex)
    amps[0] = 1.0
    for n in range(1, k):
        amps[n] = amps[n - 1] * alpha / sqrt(n)
    weights = np.abs(amps) ** 2
    kept = float(weights.sum())
    total = exp(abs(alpha) ** 2)
    tail = max(0.0, 1.0 - kept / total)
    if tail > COHERENT_TAIL_ERROR:
        raise TailTooHeavy(
            f"coherent tail mass {tail:.3e} beyond n_max={space.n_max} exceeds {COHERENT_TAIL_ERROR}"
        )
    if tail > COHERENT_TAIL_WARN:
        warnings.warn(
            f"coherent tail mass {tail:.3e} discarded at n_max={space.n_max}",
            CoherentTailWarning,
            stacklevel=2,
        )
    return amps / sqrt(kept)


def product_state(atom: np.ndarray, cavity: np.ndarray, space: FockSpace) -> StateVector:
    """Tensor a 2-component atom vector with a cavity vector, then normalize."""
    atom = np.asarray(atom, dtype=complex)
    cavity = np.asarray(cavity, dtype=complex)
    if atom.shape != (2,):
        raise ValueError("atom factor must have 2 amplitudes (|g>, |e>)")
    if cavity.shape != (space.n_max + 1,):
        raise ValueError("cavity factor length must be n_max + 1")
    amps = np.kron(cavity, atom)
    return StateVector(space, amps / np.linalg.norm(amps))


@dataclass(frozen=True)
class CutoffCheck:
    """Result of re-evaluating an observable at twice the photon cutoff."""

    value: float
    value_refined: float
    shift: float
    converged: bool


def cutoff_convergence(observable, n_max: int, tol: float = 1e-8) -> CutoffCheck:
    """Evaluate observable(n_max) and observable(2 n_max); flag shifts above tol.

    The standard truncation check offered for user-facing quantities: any
    observable that moves when the cutoff doubles was not converged.
    """
    value = float(observable(n_max))
    refined = float(observable(2 * n_max))
    shift = abs(refined - value)
    return CutoffCheck(value=value, value_refined=refined, shift=shift, converged=shift <= tol)


def diagonalize(h: OperatorMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending, real) and orthonormal eigenvector columns.

    Accepts only Hermitian-tagged operators.
    """
    if not h.hermitian:
        raise NotHermitian("diagonalize requires a hermitian-tagged operator")
    evals, evecs = np.linalg.eigh(h.entries)
    return evals, evecs


def state_to_csv(state: StateVector, path) -> None:
    """Write amplitudes as rows (index, n, atom_level, re, im)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "n", "atom_level", "re", "im"])
        for idx, amp in enumerate(state.amplitudes):
            writer.writerow([idx, idx // 2, idx % 2, repr(float(amp.real)), repr(float(amp.imag))])


def state_from_csv(path) -> StateVector:
    """Read a state previously written by :func:`state_to_csv`."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"no amplitude rows in {path}")
    amps = np.zeros(len(rows), dtype=complex)
    for row in rows:
        idx = int(row["index"])
        if idx != 2 * int(row["n"]) + int(row["atom_level"]):
            raise ValueError(f"inconsistent basis indexing in {path} at index {idx}")
        amps[idx] = float(row["re"]) + 1.0j * float(row["im"])
    if len(amps) % 2 != 0:
        raise ValueError("amplitude count must be even (atom doublet per photon number)")
    space = FockSpace(len(amps) // 2 - 1)
    return StateVector(space, amps)
