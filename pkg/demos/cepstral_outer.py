"""
Outer factor from magnitude alone
=================================

When only |f|^2 on the circle is known, the outer factor can be rebuilt from
the log magnitude through its analytic completion. This compares that route
with root reflection.
"""

import numpy as np

from mindelay import Poly, evaluate_on_grid, minimum_phase_equivalent, outer_from_magnitude

p = Poly.from_roots([0.5 + 0.4j, -1.7, 2.2j, 0.8])
p = Poly(p.coeffs / np.sqrt(np.sum(np.abs(p.coeffs) ** 2)))

M = 8192
w = np.abs(evaluate_on_grid(p, M).values) ** 2
from_cepstrum = outer_from_magnitude(w, M)
from_roots = minimum_phase_equivalent(p)

n = len(from_roots.coeffs)
print("cepstral :", np.round(from_cepstrum.coeffs[:n], 8))
print("reflected:", np.round(from_roots.coeffs, 8))
print("max difference:", np.max(np.abs(from_cepstrum.coeffs[:n] - from_roots.coeffs)))
print("tail beyond true degree:", np.max(np.abs(from_cepstrum.coeffs[n:]), initial=0.0))
