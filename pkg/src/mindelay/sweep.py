"""Seeded scalar and matrix sweeps of the energy delay property."""

from __future__ import annotations

import numpy as np

from .delay import generate_equal_gain_pair, verify_energy_delay
from .errors import ConvergenceError, MinDelayError
from .io import RunConfig
from .matrix import factorization_residual, generate_matrix_pair, para_hermitian_product


def case_seeds(seed: int, n: int, stream: int) -> list:
    """Independent per-case integer seeds derived from one root seed."""
    if n == 0:
        return []
    ss = np.random.SeedSequence([seed, stream])
    return [int(s) for s in ss.generate_state(n, dtype=np.uint32)]


def _record(kind, seed, params, report):
    total = max(report.curve_f[-1], report.curve_g[-1])
    return {
        "kind": kind,
        "seed": seed,
        **params,
        "passed": bool(report.passed),
        "min_margin": report.min_margin / total,
        "total_gap": report.total_gap / total,
    }


def run_sweep(config: RunConfig) -> dict:
    """Run both sweeps and summarize.

    Margins and gaps in the summary are relative to each case's total
    energy. ``max_residual`` is the largest relative spectral
    factorization residual over the matrix cases.
    """
    cases = []
    nonconverged = []
    residuals = []
    for s in case_seeds(config.seed, config.scalar_cases, 0):
        rng = np.random.default_rng([s, 1])
        degree = int(rng.integers(1, config.scalar_max_degree + 1))
        f, g = generate_equal_gain_pair(s, degree)
        tol = config.scalar_tol * np.sum(np.abs(f.coeffs) ** 2)
        rep = verify_energy_delay(f, g, tol=tol, M=config.grid_size)
        cases.append(_record("scalar", s, {"degree": degree}, rep))
    for i, s in enumerate(case_seeds(config.seed, config.matrix_cases, 1)):
        rng = np.random.default_rng([s, 1])
        d = int(config.matrix_dims[i % len(config.matrix_dims)])
        degree = int(rng.integers(0, config.matrix_max_degree + 1))
        n_factors = int(rng.integers(1, config.matrix_max_factors + 1)) if config.matrix_max_factors else 0
        params = {"dim": d, "degree": degree, "factors": n_factors}
        try:
            F, G, A = generate_matrix_pair(s, d, degree, n_factors, M=config.grid_size, return_source=True)
        except ConvergenceError as exc:
            nonconverged.append({"seed": s, **params, "residual": exc.residual})
            continue
        residuals.append(factorization_residual(F, para_hermitian_product(A, config.grid_size)))
        tol = config.matrix_tol * np.sum(np.abs(F.coeffs) ** 2)
        try:
            rep = verify_energy_delay(F, G, tol=tol, M=config.grid_size)
        except MinDelayError as exc:
            nonconverged.append({"seed": s, **params, "error": str(exc)})
            continue
        cases.append(_record("matrix", s, params, rep))
    n_cases = config.scalar_cases + config.matrix_cases
    passes = sum(c["passed"] for c in cases)
    return {
        "seed": config.seed,
        "cases": n_cases,
        "passes": passes,
        "min_margin_worst": min((c["min_margin"] for c in cases), default=None),
        "max_total_gap": max((c["total_gap"] for c in cases), default=None),
        "max_residual": max(residuals, default=None),
        "failures": [c for c in cases if not c["passed"]],
        "nonconverged": nonconverged,
        "config": config.to_dict(),
    }
