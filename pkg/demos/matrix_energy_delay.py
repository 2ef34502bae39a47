"""
Matrix filters and the Bauer factorization
==========================================

For square matrix filters the outer factor of a spectral density is found by
a block Cholesky factorization of its Toeplitz matrix. Multiplying the outer
factor on the right by a matrix inner function delays energy in the same way
as in the scalar case.
"""

import numpy as np

from mindelay import (
    energy_curve,
    factorization_residual,
    generate_matrix_pair,
    inner_quotient_matrix,
    outer_certificate,
    para_hermitian_product,
    spectral_factor_outer,
    verify_energy_delay,
)

F, G = generate_matrix_pair(seed=1, d=2, degree=3, n_factors=2)
print("E_F:", np.round(energy_curve(F), 6))
print("E_G:", np.round(energy_curve(G), 6))
print("verdict:", verify_energy_delay(F, G).verdict)

# %%
# The quotient F^{-1} G is unitary on the circle with no negative frequencies.
cert = inner_quotient_matrix(F, G)
print("unitarity defect:", cert.max_unitarity_defect, "analytic defect:", cert.analytic_defect)

# %%
# Both filters share the density G G^H = F F^H. Factorizing it recovers F.
S = para_hermitian_product(G)
F_hat = spectral_factor_outer(S, F.degree)
print("residual:", factorization_residual(F_hat, S))
lhs, rhs = outer_certificate(F_hat, S)
print("|det F(0)| =", lhs, " geometric mean of sqrt det S =", rhs)
# %%
# The outer factor is unique up to a constant unitary on the right.
Q = np.linalg.solve(F.coeffs[0], F_hat.coeffs[0])
n = max(F.degree, F_hat.degree) + 1
a = np.zeros((n, 2, 2), complex); a[: F.degree + 1] = F.coeffs @ Q
b = np.zeros((n, 2, 2), complex); b[: F_hat.degree + 1] = F_hat.coeffs
print("Q unitary:", np.allclose(Q @ Q.conj().T, np.eye(2)), " max |F Q - F_hat|:", np.abs(a - b).max())
