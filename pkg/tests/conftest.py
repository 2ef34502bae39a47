import numpy as np
import pytest

from mindelay import Poly


def random_zeros(rng, n, gap=0.05, rmin=0.3, rmax=2.5, inside_prob=0.5):
    """``n`` random zeros with moduli at least ``gap`` away from 1."""
    inside = rng.random(n) < inside_prob
    r = np.where(inside, rng.uniform(rmin, 1 - gap, n), rng.uniform(1 + gap, rmax, n))
    return r * np.exp(2j * np.pi * rng.random(n))


def poly_from_zeros(zeros, lead=1.0, normalize=True):
    p = Poly.from_roots(zeros, lead)
    if normalize:
        p = Poly(p.coeffs / np.sqrt(np.sum(np.abs(p.coeffs) ** 2)))
    return p


def direct_eval(coeffs, theta):
    """Brute-force sum of a_n exp(i n theta), independent of the FFT path."""
    n = np.arange(len(coeffs))
    return np.exp(1j * np.outer(theta, n)) @ np.asarray(coeffs)


def padded(a, n):
    a = np.asarray(a)
    out = np.zeros((n,) + a.shape[1:], dtype=complex)
    out[: len(a)] = a
    return out


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion."""
    lines = request.config._acceptance_lines

    def record(name, ok, detail=""):
        lines.append(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())
        print(lines[-1])
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
