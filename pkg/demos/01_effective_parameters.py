#!/usr/bin/env python3
"""Walk through the sideband bookkeeping for the three working points.

For each modulation frequency v the dominant counter-rotating sideband m0 is
the integer that brings omega0 + omega_c + m0*v closest to zero.  The residual
Delta_m0 sets the effective frequencies, and the Bessel weights renormalize
the couplings.  Watch the ratio g_r/omega_c_eff reach deep-strong values (5
and 2.5) from a bare coupling of only g/omega_c = 0.05.
"""

from fmrabi import ModelParams, classify_regime, effective_params, rwa_report, zero_point

G = 0.05

print(f"bare coupling g/omega_c = {G}: regime =",
      classify_regime(ModelParams(1.0, 1.0, G, 0.0, 0.33)).label)
print()

for v in (0.18, 0.33, 0.49):
    p = ModelParams(omega0=1.0, omega_c=1.0, g=G, xi=0.0, v=v)
    eff = effective_params(p)
    print(f"v/omega_c = {v}")
    print(f"  m0 = {eff.m0}, Delta_m0 = {eff.delta_m0:+.4f}")
    print(f"  omega_c_eff = {eff.omega_c_eff:.4f}, omega0_eff = {eff.omega0_eff:.4f}")
    print(f"  g_r/omega_c_eff at xi=0: {eff.g_r / eff.omega_c_eff:.3f}")
    print(f"  zero point of this branch: v = {zero_point(p):.6f}")
    report = rwa_report(p)
    print(f"  separation ratios: v/|Delta_m0| = {report.v_over_abs_delta_m0:.1f},"
          f" v/g = {report.v_over_g:.1f}")
    print()

print("off resonance (delta = 0.02 omega_c, v = 0.33):")
p = ModelParams(omega0=1.02, omega_c=1.0, g=G, xi=2.0, v=0.33)
eff = effective_params(p)
print(f"  m0 = {eff.m0}, Delta_m0 = {eff.delta_m0:.4f}, delta_eff = {eff.delta_eff}")
print(f"  |g_c|/Delta_m0 at xi=2.0: {abs(eff.g_c) / eff.delta_m0:.5f}"
      " (stays below 0.01 up to xi ~ 2.81)")
