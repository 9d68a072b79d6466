#!/usr/bin/env python3
"""Track the dressed-level ladder and its ground-state crossings.

On resonance the lower dressed branch E_{n,-} = (n - 1/2) omega_c - g sqrt(n)
dives below -omega0/2 once g/omega_c > 1, and successive |n,-> levels take
over at the closed-form critical couplings.  The dense diagonalization of the
same truncated model reproduces every closed-form energy, which is the
numerical oracle used throughout the test suite.
"""

import numpy as np

from fmrabi import (
    FockSpace,
    critical_couplings,
    diagonalize,
    ground_state,
    jc_eigenenergy,
    jc_hamiltonian,
)

print("closed-form critical couplings at resonance:")
g0, g1, g2, g3 = critical_couplings(1.0, 0.0, [0, 1, 2, 3])
print(f"  g0/omega_c = {g0:.6f}   (normal -> |1,->)")
print(f"  g1/omega_c = {g1:.6f}   (|1,-> -> |2,->)")
print(f"  g2/omega_c = {g2:.6f}   (|2,-> -> |3,->)")
print(f"  g3/omega_c = {g3:.6f}   (|3,-> -> |4,->)")

print()
print("ground state along the coupling axis:")
for g in (0.5, 1.2, 2.0, 2.8, 3.5):
    label = ground_state(1.0, 1.0, g)
    name = "|g,0>" if label.kind == "normal" else f"|{label.n},->"
    print(f"  g/omega_c = {g}: ground = {name}, E = {label.energy:+.4f}")

print()
space = FockSpace(30)
g = 2.0
evals, _ = diagonalize(jc_hamiltonian(1.0, 1.0, g, space))
print(f"dense diagonalization vs closed form at g/omega_c = {g}:")
for n in (1, 2, 3):
    for branch in ("minus", "plus"):
        target = jc_eigenenergy(n, branch, 1.0, 0.0, g)
        nearest = evals[np.abs(evals - target).argmin()]
        print(f"  E_{n},{branch:5s} = {target:+.10f}   dense {nearest:+.10f}"
              f"   diff {abs(nearest - target):.1e}")
