"""
Energy delay for scalar filters
===============================

Two filters with the same gain on the unit circle can still release their
energy at different rates. The minimum-phase member of the family front-loads
it. This script walks through the simplest example and then a random one.
"""

import numpy as np

from mindelay import (
    Poly,
    energy_curve,
    generate_equal_gain_pair,
    inner_quotient,
    minimum_phase_equivalent,
    optimality_gap,
    verify_energy_delay,
)

# %%
# The pair 2 + z and 1 + 2z have identical magnitude responses.
f, g = Poly([2, 1]), Poly([1, 2])
print("E_f:", energy_curve(f))
print("E_g:", energy_curve(g))

report = verify_energy_delay(f, g)
print("margins:", report.margins, "verdict:", report.verdict)

# %%
# The ratio g / f is inner: unimodular on the circle and analytic in the disk.
u = inner_quotient(g, f, 64)
print("max | |u| - 1 | on the grid:", np.max(np.abs(np.abs(u.values) - 1)))

# %%
# Reflecting interior zeros out of the disk recovers the outer member.
print("minimum-phase equivalent of 1 + 2z:", minimum_phase_equivalent(g).coeffs)

# %%
# |p(0)| never exceeds the geometric mean of |p| on the circle. Equality holds
# only for outer p, and the shortfall equals the product of interior zero moduli.
for p in (f, g):
    gap = optimality_gap(p)
    print(f"lhs={gap.lhs:.6f} rhs={gap.rhs:.6f} outer={gap.is_outer}")

# %%
# A random equal-gain pair of degree 12.
f, g = generate_equal_gain_pair(seed=3, degree=12)
report = verify_energy_delay(f, g)
# The smallest margin sits at the final index, where both curves reach the
# common total energy, so it is zero up to rounding.
print(f"degree 12 pair: min margin {report.min_margin:.1e}, verdict {report.verdict}")
print("margins before the tail:", np.round(report.margins[:-1], 4))
