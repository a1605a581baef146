"""Ermakov-Pinney reduction of the constraint on the target-Hamiltonian function.

For every spin the function chi(t) multiplying S_z in h(t) must satisfy

    chi'' - (3/2) chi'^2 / chi - (1/2) Phi^2 chi + lam chi^3 = 0,

whose general solution is ``chi = a / D(t)`` with

    D(t) = c2 sin(Phi t) + c3 cos(Phi t) + branch * sqrt(1 + c2^2 + c3^2).

The substitution ``chi = 2 a / (Phi sigma^2)`` maps it onto the Ermakov-Pinney
equation ``sigma'' + Phi^2 sigma / 4 = sigma^-3``.
"""
from dataclasses import dataclass

import numpy as np

from .spin import HALF, ModelParams


class SingularTrajectory(RuntimeError):
    pass


class NotErmakovPinneyError(ValueError):
    pass


@dataclass(frozen=True)
class EPSolution:
    c2: float
    c3: float
    branch: int = 1
    freq: float = 1.0
    scale: float = 1.0
    cubic: float = 0.5

    def __post_init__(self):
        if self.branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")
        if not self.freq > 0:
            raise ValueError("frequency must be real and positive")

    @classmethod
    def for_model(cls, params: ModelParams, c2, c3, branch=1):
        if params.broken or abs(params.gamma) == 1:
            raise ValueError("closed-form chi(t) needs |gamma| < 1")
        f = float(params.freq)
        if params.spin == HALF:
            return cls(c2, c3, branch, f, f, 0.5)
        return cls(c2, c3, branch, f, 2 * f, 0.125)

    @property
    def root(self):
        return np.sqrt(1 + self.c2 ** 2 + self.c3 ** 2)

    @property
    def min_abs_denominator(self):
        return self.root - np.hypot(self.c2, self.c3)


def denominator(sol, t):
    """D(t), D'(t), D''(t)."""
    th = sol.freq * np.asarray(t, dtype=float)
    s, c = np.sin(th), np.cos(th)
    osc = sol.c2 * s + sol.c3 * c
    d = osc + sol.branch * sol.root
    dd = sol.freq * (sol.c2 * c - sol.c3 * s)
    ddd = -sol.freq ** 2 * osc
    return d, dd, ddd


def chi_closed_form(sol, t):
    d, _, _ = denominator(sol, t)
    return sol.scale / d


def chi_derivatives(sol, t):
    """chi, chi', chi'' from the closed form, differentiated analytically."""
    d, dd, ddd = denominator(sol, t)
    a = sol.scale
    x = a / d
    xd = -a * dd / d ** 2
    xdd = -a * ddd / d ** 2 + 2 * a * dd ** 2 / d ** 3
    return x, xd, xdd


def constraint_lhs(x, xd, xdd, freq, cubic):
    return xdd - 1.5 * xd ** 2 / x - 0.5 * freq ** 2 * x + cubic * x ** 3


def constraint_residual(sol, t, cubic=None):
    """|chi'' - 3/2 chi'^2/chi - Phi^2 chi/2 + lam chi^3| (array-valued in t).

    ``cubic`` overrides the stored lam, e.g. to show that the wrong equation
    is detected.
    """
    lam = sol.cubic if cubic is None else cubic
    x, xd, xdd = chi_derivatives(sol, t)
    return np.abs(constraint_lhs(x, xd, xdd, sol.freq, lam))


@dataclass(frozen=True)
class EPConstantsABC:
    A: float
    B: float
    C: float

    @classmethod
    def from_constants(cls, c2, c3, branch, freq):
        r = np.sqrt(1 + c2 ** 2 + c3 ** 2)
        return cls(2 * (-c3 + branch * r) / freq,
                   2 * (c3 + branch * r) / freq,
                   2 * c2 / freq)

    @classmethod
    def from_solution(cls, sol):
        return cls.from_constants(sol.c2, sol.c3, sol.branch, sol.freq)

    def invariant(self):
        return self.A * self.B - self.C ** 2


def _check_abc(abc, freq, tol=1e-9):
    target = 4 / freq ** 2
    if abs(abc.invariant() - target) > tol * max(1.0, target):
        raise NotErmakovPinneyError(
            f"not an Ermakov-Pinney solution: AB - C^2 = {abc.invariant()!r}, expected {target!r}")


def sigma_squared(abc, freq, t):
    """The quadratic form under the root and its first two time derivatives."""
    th = freq * np.asarray(t, dtype=float)
    mean = (abc.A + abc.B) / 2
    amp_c = (abc.B - abc.A) / 2
    q = mean + amp_c * np.cos(th) + abc.C * np.sin(th)
    qd = freq * (-amp_c * np.sin(th) + abc.C * np.cos(th))
    qdd = -freq ** 2 * (q - mean)
    return q, qd, qdd


def ep_sigma(abc, freq, t):
    """sigma(t) = [A sin^2(Phi t/2) + B cos^2(Phi t/2) + 2C sin cos]^(1/2)."""
    _check_abc(abc, freq)
    q, _, _ = sigma_squared(abc, freq, t)
    if np.any(q <= 0):
        raise NotErmakovPinneyError("quadratic form under the root is not positive")
    return np.sqrt(q)


def ep_residual(abc, freq, t):
    """|sigma'' + Phi^2 sigma / 4 - sigma^-3| using analytic derivatives."""
    _check_abc(abc, freq)
    q, qd, qdd = sigma_squared(abc, freq, t)
    sig = np.sqrt(q)
    sd = qd / (2 * sig)
    sdd = (qdd - 2 * sd ** 2) / (2 * sig)
    return np.abs(sdd + freq ** 2 * sig / 4 - sig ** -3)


def chi_from_sigma(sigma, sol):
    """Map an Ermakov-Pinney solution back: chi = 2a / (Phi sigma^2)."""
    return 2 * sol.scale / (sol.freq * np.asarray(sigma) ** 2)


def ep_numeric_solve(chi0, chid0, freq, cubic, grid):
    """RK4 integration of chi'' = 3/2 chi'^2/chi + Phi^2 chi/2 - lam chi^3."""
    grid = np.asarray(grid, dtype=float)
    if chi0 <= 0:
        raise ValueError("chi0 must be positive")
    steps = np.diff(grid)
    if len(steps) and (np.any(steps <= 0) or np.ptp(steps) > 1e-9 * np.max(steps)):
        raise ValueError("grid must be uniform and increasing")

    def rhs(y):
        x, v = y
        return np.array([v, 1.5 * v * v / x + 0.5 * freq ** 2 * x - cubic * x ** 3])

    out = np.empty(len(grid))
    y = np.array([chi0, chid0], dtype=float)
    out[0] = y[0]
    for i, dt in enumerate(steps, start=1):
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            k1 = rhs(y)
            k2 = rhs(y + dt / 2 * k1)
            k3 = rhs(y + dt / 2 * k2)
            k4 = rhs(y + dt * k3)
            y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not y[0] > 0 or not np.isfinite(y[0]):
            raise SingularTrajectory(f"singular trajectory: chi left (0, inf) at t={grid[i]:g}")
        out[i] = y[0]
    return out
