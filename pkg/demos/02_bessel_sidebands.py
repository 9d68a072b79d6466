#!/usr/bin/env python3
"""Exercise the integer-order Bessel evaluator behind the sideband weights.

The backward-recurrence evaluator supplies J_n(xi) for the whole sideband
ladder in one sweep.  Two identities make good spot checks: the parity rule
J_{-n} = (-1)^n J_n and the normalization J_0^2 + 2 sum_n J_n^2 = 1.
"""

import numpy as np

from fmrabi import bessel_j, bessel_j_all

XI = 2.48

ladder = bessel_j_all(12, XI)
print(f"sideband weights J_n({XI}):")
for n, value in enumerate(ladder):
    bar = "#" * int(60 * abs(value))
    print(f"  n = {n:2d}: {value:+.6f} {bar}")

print()
print("first zero of J_0 sits near 2.40483:")
for x in (2.40, 2.40483, 2.41):
    print(f"  J_0({x}) = {bessel_j(0, x):+.2e}")

print()
print("parity: J_-5(2.48) =", f"{bessel_j(-5, XI):+.6f}",
      " -J_5(2.48) =", f"{-bessel_j(5, XI):+.6f}")

total = ladder[0] ** 2 + 2.0 * float(np.sum(bessel_j_all(40, XI)[1:] ** 2))
print(f"normalization sum - 1 = {total - 1.0:+.2e}")

print()
print("the coupling ratio 5 J_0(xi) crosses 1 where the normal phase opens:")
for xi in (2.0, 2.0415, 2.1):
    print(f"  5 J_0({xi}) = {5 * bessel_j(0, xi):+.4f}")
