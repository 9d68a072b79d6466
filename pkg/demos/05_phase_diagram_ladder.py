#!/usr/bin/env python3
"""Map the quantum phases controlled by the modulation amplitude.

At fixed v the ground state of the effective model steps down the dressed
ladder as J_0(xi) shrinks, passes through the normal phase around the J_0
zero, and re-enters the superradiant phase on the negative lobe.  The order
parameter (mean cavity photons in the ground state) jumps by one at every
boundary and is constant in between on resonance.
"""

import warnings

import numpy as np

from fmrabi import ModelParams, boundary_scan, diagram, photon_ladder

warnings.simplefilter("ignore")

BASE = ModelParams(omega0=1.0, omega_c=1.0, g=0.05, xi=0.0, v=0.33)

for v in (0.33, 0.49):
    points = boundary_scan(v, 0.0, (0.0, 3.0))
    print(f"v = {v}: {len(points)} boundaries on resonance")
    for pt in points:
        left = "|g,0>" if pt.left_n == 0 else f"|{pt.left_n},->"
        right = "|g,0>" if pt.right_n == 0 else f"|{pt.right_n},->"
        print(f"  xi = {pt.xi:.4f}   {left} -> {right}")
    print()

print("order-parameter ladder at v = 0.33 (text plot):")
xi_grid = np.linspace(0.0, 3.0, 61)
for xi, n_bar in photon_ladder(0.33, xi_grid, BASE):
    print(f"  xi = {xi:4.2f} | {'=' * int(8 * n_bar)} {n_bar}")

print()
print("coarse (delta, xi) diagram at v = 0.49 (rows: delta, entries: ground n):")
deltas = np.linspace(-0.02, 0.02, 9)
dg = diagram(0.49, deltas, np.linspace(0.0, 3.0, 31), BASE)
for i, d in enumerate(dg.delta_grid):
    row = "".join(str(int(n)) for n in dg.label_n[i])
    print(f"  delta = {d:+.3f}  {row}")
print(f"  ({len(dg.boundaries)} boundary polylines stitched)")
