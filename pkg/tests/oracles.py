"""Independent reference constructions used only by the tests."""
from math import comb, factorial, sqrt

import numpy as np


def symmetric_power(g, n):
    """Action of a 2x2 matrix on degree-n binary forms, spin basis |s, s - i>.

    Built by substituting x -> g11 x + g21 y, y -> g12 x + g22 y in the
    monomials x^(n-i) y^i, normalised by sqrt((n-i)! i!).  For g in SU(2)
    this is the spin-n/2 representation; it extends to any 2x2 matrix.
    """
    d = n + 1
    norm = np.array([sqrt(factorial(n - i) * factorial(i)) for i in range(d)])
    out = np.zeros((d, d), dtype=complex)
    for j in range(d):
        a, b = n - j, j
        col = np.zeros(d, dtype=complex)
        for p in range(a + 1):
            for q in range(b + 1):
                coef = (comb(a, p) * g[0, 0] ** p * g[1, 0] ** (a - p)
                        * comb(b, q) * g[0, 1] ** q * g[1, 1] ** (b - q))
                col[n - p - q] += coef
        out[:, j] = col * norm / norm[j]
    return out


def midpoint_exponential(generator, psi0, times):
    """Propagate i psi' = G(t) psi with a matrix exponential on a fine grid.

    Piecewise-constant midpoint exponentials; second order but independent
    of the package's RK4.
    """
    psi = np.asarray(psi0, dtype=complex)
    for t0, t1 in zip(times[:-1], times[1:]):
        w, v = np.linalg.eig(-1j * (t1 - t0) * generator((t0 + t1) / 2))
        psi = v @ (np.exp(w) * np.linalg.solve(v, psi))
    return psi
