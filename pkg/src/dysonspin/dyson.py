"""Closed-form Dyson maps, metrics and their Hermitian counterparts.

For each spin the Dyson map is a Hermitian matrix whose real component
functions eta_1, eta_2, ... fill the ansatz

    [[eta_1,        eta_2 - i eta_3, eta_4 - i eta_5, ...],
     [eta_2 + i eta_3, ...                                 ]]

row by row (diagonal entries real, off-diagonal entries ``re - i im`` above
the diagonal).  The components are functions of chi(tau), chi'(tau) with
tau = t / hbar.  ``PRINTED_DEVIATIONS`` lists the components whose published
expressions are misprinted; ``printed=True`` evaluates those as printed so
the discrepancy can be reported.
"""
from dataclasses import dataclass

import numpy as np

from .ermakov import EPSolution, chi_derivatives
from .linalg import (DEFAULT_FD_STEP, hermiticity_residual, inverse, max_norm,
                     time_derivative)
from .spin import HALF, ONE, THREE_HALVES, ModelParams, hamiltonian, z_operator


class DysonMapUndefined(ValueError):
    pass


PRINTED_DEVIATIONS = {
    HALF: {
        2: "sign: eta_2 = -c1 chi' / (chi^(3/2) (gamma - 1))",
    },
    ONE: {
        2: "denominator (1+gamma) X^2, not (1+gamma)^2 X^2",
    },
    THREE_HALVES: {
        7: "denominator (1+gamma)^3, not (1+gamma)^(3/2)",
        8: "phi-hat^2 Xi^2 term carries coefficient 6",
        9: "phi-hat^2 Xi^2 term carries coefficient 24",
        10: "no Xi' prefactor; overall sign flipped; phi-hat^2 coefficient 24",
        13: "phi-hat^2 Xi^2 term carries coefficient 6",
        16: "(gamma - 1)3 read as (gamma - 1)^3",
    },
}


@dataclass(frozen=True)
class DysonSpec:
    params: ModelParams
    c1: float
    ep: EPSolution

    def __post_init__(self):
        if self.c1 == 0:
            raise ValueError("c1 must be nonzero")

    @classmethod
    def build(cls, params, c1=1.0, c2=0.0, c3=0.0, branch=1):
        return cls(params, c1, EPSolution.for_model(params, c2, c3, branch))

    @classmethod
    def unimodular(cls, params, c2=0.0, c3=0.0, branch=1):
        """Spec with c1 > 0 chosen so that det rho(t) = 1."""
        probe = cls.build(params, 1.0, c2, c3, branch)
        c1 = metric_determinant(probe) ** (-1 / (2 * params.dim))
        return cls.build(params, c1, c2, c3, branch)

    @property
    def spin(self):
        return self.params.spin

    @property
    def root(self):
        return self.ep.root

    def chi(self, t):
        return chi_derivatives(self.ep, np.asarray(t) / self.params.hbar)[0]


def hermitian_from_components(e, dim):
    m = np.zeros((dim, dim), dtype=complex)
    it = iter(e)
    for i in range(dim):
        m[i, i] = next(it)
        for j in range(i + 1, dim):
            re, im = next(it), next(it)
            m[i, j] = re - 1j * im
            m[j, i] = re + 1j * im
    return m


def components_from_hermitian(m):
    out = []
    d = m.shape[0]
    for i in range(d):
        out.append(m[i, i].real)
        for j in range(i + 1, d):
            out.extend([m[i, j].real, -m[i, j].imag])
    return np.array(out)


def _half(x, xd, g, c1, f, printed):
    s = 1.0 if printed else -1.0
    return [
        c1 * (g + 1) / (np.sqrt(x) * (g - 1)),
        s * c1 * xd / (x ** 1.5 * (g - 1)),
        c1 * np.sqrt(x) / (g - 1),
        c1 / np.sqrt(x),
    ]


def _one(x, xd, g, c1, f, printed):
    gp = 1 + g
    return [
        c1 / x,
        -2 * c1 * xd / ((gp ** 2 if printed else gp) * x ** 2),
        c1 / gp,
        c1 * (4 * xd ** 2 - x ** 4) / (2 * gp ** 2 * x ** 3),
        -2 * c1 * xd / (gp ** 2 * x),
        c1 * (4 * xd ** 2 + x ** 4 - 4 * f ** 2 * x ** 2) / (2 * gp ** 2 * x ** 3),
        2 * (1 - g) * c1 * xd / (gp ** 2 * x ** 2),
        c1 * (g - 1) / gp ** 2,
        c1 * (1 - g) ** 2 / (gp ** 2 * x),
    ]


def _three_halves(x, xd, g, c1, f, printed):
    gp, gm = 1 + g, 1 - g
    s3 = np.sqrt(3)
    f2x2 = f ** 2 * x ** 2
    if printed:
        e7 = 27 * c1 * (12 * xd ** 2 - x ** 4) / (gp ** 1.5 * x ** 2.5)
        poly8 = 12 * xd ** 2 + 3 * x ** 4 - f2x2
        e9 = 18 * c1 * xd * (4 * f2x2 - 12 * xd ** 2 - 3 * x ** 4) / (gp ** 3 * x ** 4.5)
        e10 = 9 * c1 * xd * (4 * f2x2 - 12 * xd ** 2 - 3 * x ** 4) / (gp ** 3 * x ** 2.5)
        e16 = c1 * (g - 1) * 3 / (gp ** 3 * x ** 1.5)
    else:
        e7 = 27 * c1 * (12 * xd ** 2 - x ** 4) / (gp ** 3 * x ** 2.5)
        poly8 = 12 * xd ** 2 + 3 * x ** 4 - 6 * f2x2
        e9 = 18 * c1 * xd * (24 * f2x2 - 12 * xd ** 2 - 3 * x ** 4) / (gp ** 3 * x ** 4.5)
        e10 = -9 * c1 * (24 * f2x2 - 12 * xd ** 2 - 3 * x ** 4) / (gp ** 3 * x ** 2.5)
        e16 = c1 * (g - 1) ** 3 / (gp ** 3 * x ** 1.5)
    return [
        c1 / x ** 1.5,
        -6 * s3 * c1 * xd / (gp * x ** 2.5),
        3 * s3 * c1 / (gp * np.sqrt(x)),
        9 * s3 * c1 * (4 * xd ** 2 - x ** 4) / (gp ** 2 * x ** 3.5),
        -36 * s3 * c1 * xd / (gp ** 2 * x ** 1.5),
        54 * c1 * (3 * xd * x ** 4 - 4 * xd ** 3) / (gp ** 3 * x ** 4.5),
        e7,
        6 * c1 * poly8 / (gp ** 2 * x ** 3.5),
        e9,
        e10,
        9 * s3 * c1 * gm * (x ** 4 - 4 * xd ** 2) / (gp ** 3 * x ** 3.5),
        36 * s3 * c1 * gm * xd / (gp ** 3 * x ** 1.5),
        6 * c1 * (g - 1) * poly8 / (gp ** 3 * x ** 3.5),
        -6 * s3 * c1 * gm ** 2 * xd / (gp ** 3 * x ** 2.5),
        3 * s3 * c1 * gm ** 2 / (gp ** 3 * np.sqrt(x)),
        e16,
    ]


_COMPONENTS = {HALF: _half, ONE: _one, THREE_HALVES: _three_halves}


def dyson_components(spec, t, printed=False):
    if spec.ep.branch != 1:
        raise DysonMapUndefined("negative chi: Dyson map undefined")
    x, xd, _ = chi_derivatives(spec.ep, t / spec.params.hbar)
    p = spec.params
    return np.array(_COMPONENTS[p.spin](x, xd, p.gamma, spec.c1, spec.ep.freq, printed))


def dyson_map(spec, t, printed=False):
    return hermitian_from_components(dyson_components(spec, t, printed), spec.params.dim)


def metric(spec, t):
    eta = dyson_map(spec, t)
    rho = eta @ eta
    return (rho + rho.conj().T) / 2


def target_hamiltonian(spec, t):
    """h(t) = -offset I - chi(t)/2 S_z with the identity part of H."""
    p = spec.params
    return -p.energy_offset * np.eye(p.dim) - 0.5 * spec.chi(t) * z_operator(p.spin)


def hermitian_counterpart(spec, t, h_fd=DEFAULT_FD_STEP, eta_fn=None):
    """eta H eta^-1 + i hbar eta' eta^-1 with a finite-difference eta'."""
    eta_fn = eta_fn or (lambda s: dyson_map(spec, s))
    eta = eta_fn(t)
    inv = inverse(eta)
    deta = time_derivative(eta_fn, t, h_fd)
    return eta @ hamiltonian(spec.params) @ inv + 1j * spec.params.hbar * deta @ inv


def dyson_residual(spec, t, h_fd=DEFAULT_FD_STEP, printed=False):
    """||h(t) - eta H eta^-1 - i hbar eta' eta^-1||_max."""
    h = hermitian_counterpart(spec, t, h_fd, lambda s: dyson_map(spec, s, printed))
    return max_norm(target_hamiltonian(spec, t) - h)


def quasi_hermiticity_residual(H, rho_fn, t, h_fd=DEFAULT_FD_STEP, hbar=1.0):
    """||H^dag rho - rho H - i hbar rho'||_max."""
    rho = rho_fn(t)
    drho = time_derivative(rho_fn, t, h_fd)
    return max_norm(np.conj(H).T @ rho - rho @ H - 1j * hbar * drho)


def energy_operator(spec, t, h_fd=DEFAULT_FD_STEP):
    """H~(t) = H + i hbar eta^-1 eta'."""
    eta_fn = lambda s: dyson_map(spec, s)
    inv = inverse(eta_fn(t))
    return hamiltonian(spec.params) + 1j * spec.params.hbar * inv @ time_derivative(eta_fn, t, h_fd)


def energy_operator_conjugated(spec, t):
    eta = dyson_map(spec, t)
    return inverse(eta) @ target_hamiltonian(spec, t) @ eta


# metric route ---------------------------------------------------------------

def _gamma_abbrev(freq, t):
    s, c = np.sin(freq * t), np.cos(freq * t)
    return lambda x, y: x * s + y * c


def metric_closed_form(s, b, params, t):
    """General solution of the quasi-Hermiticity relation (s = 1/2 or 1)."""
    if params.spin != s:
        raise ValueError("spin label does not match params")
    if params.broken:
        raise ValueError("metric closed form needs |gamma| < 1")
    g = params.gamma
    f = float(params.freq)
    tau = t / params.hbar
    b = np.asarray(b, dtype=float)
    if params.spin == HALF:
        if b.shape != (4,):
            raise ValueError("spin 1/2 metric needs 4 constants")
        b1, b2, b3, b4 = b
        G = _gamma_abbrev(f, tau)
        r = [(1 + g) / f * G(b2, -b1) + b4,
             G(b1, b2),
             b3,
             (1 - g) / f * G(-b2, b1) + (1 - g) / (1 + g) * b4]
        return hermitian_from_components(r, 2)
    if params.spin == ONE:
        if b.shape != (9,):
            raise ValueError("spin 1 metric needs 9 constants")
        b1, b2, b3, b4, b5, b6, b7, b8, b9 = b
        Gt = _gamma_abbrev(f, tau)
        Gb = _gamma_abbrev(2 * f, tau)
        q = (1 - g) / (1 + g)
        r = [(2 * b4 + 3 * b5) * (g + 1) / (8 * (1 - g)) + Gt(b6, b7) + Gb(b8, b9),
             f / (1 + g) * (Gt(-b7, b6) + 2 * Gb(-b9, b8)),
             (1 + g) / (2 * f) * Gt(b2, -b1) + b3,
             -q * Gb(b8, b9) + (6 * b4 + b5) / 8,
             Gt(b1, b2),
             -2 * q * Gb(b8, b9) - (2 * b4 - b5) / 4,
             q ** 1.5 / np.sqrt(2) * (Gt(-b7, b6) + 2 * Gb(b9, -b8)),
             f / (1 + g) * Gt(-b2, b1) + q * b3,
             q ** 2 * (-Gt(b6, b7) + Gb(b8, b9)) + (1 - g) / (8 * (1 + g)) * (2 * b4 + 3 * b5)]
        return hermitian_from_components(r, 3)
    raise ValueError("no closed-form metric route for spin 3/2")


def metric_closed_form_determinant(b, params):
    """Time-independent det of the spin-1/2 closed-form metric."""
    if params.spin != HALF:
        raise ValueError("only available for spin 1/2")
    g = params.gamma
    b1, b2, b3, b4 = b
    return (1 - g) / (1 + g) * b4 ** 2 - b1 ** 2 - b2 ** 2 - b3 ** 2


def match_constants(spec):
    """Metric-route constants b for which the two routes give the same metric."""
    g, c1 = spec.params.gamma, spec.c1
    c2, c3, r = spec.ep.c2, spec.ep.c3, spec.root
    f = spec.ep.freq
    if spec.spin == HALF:
        k = 2 * g * c1 ** 2 / (1 - g) ** 2
        return np.array([-c3 * k, c2 * k, k, 2 * f * c1 ** 2 * r / (1 - g) ** 3])
    if spec.spin == ONE:
        sq = c2 ** 2 + c3 ** 2
        gp = 1 + g
        return np.array([
            -4 * g ** 2 * c1 ** 2 * c3 / gp ** 4,
            4 * g ** 2 * c1 ** 2 * c2 / gp ** 4,
            2 * g * c1 ** 2 * r / (f * gp ** 3),
            2 * c1 ** 2 * (f ** 2 * (3 - sq) - 2) / gp ** 4,
            2 * c1 ** 2 * (3 + g ** 2) * (1 + sq) / gp ** 4,
            2 * g * c1 ** 2 * c2 * r / (f ** 2 * gp ** 2),
            2 * g * c1 ** 2 * c3 * r / (f ** 2 * gp ** 2),
            g ** 2 * c1 ** 2 * c2 * c3 / (f ** 2 * gp ** 2),
            g ** 2 * c1 ** 2 * (c3 ** 2 - c2 ** 2) / (2 * f ** 2 * gp ** 2),
        ])
    raise ValueError("no metric-route constants for spin 3/2")


def metric_determinant(spec):
    """Closed-form det rho(t) for the Dyson-route metric."""
    g, c1, r2 = spec.params.gamma, spec.c1, spec.root ** 2
    if spec.spin == HALF:
        return 4 * (1 + g) * c1 ** 4 * r2 / (1 - g) ** 3
    if spec.spin == ONE:
        return 8 * (1 - g) ** 3 * c1 ** 6 * r2 ** 3 / (1 + g) ** 9
    return 6.0 ** 12 * (1 - g) ** 6 * c1 ** 8 * r2 ** 6 / (1 + g) ** 18


def printed_component_report(spec, t, h_fd=DEFAULT_FD_STEP):
    """Compare the printed and corrected component formulas at time t.

    Returns (rows, printed_residual, corrected_residual) where each row is
    (index, printed value, corrected value, note) for a component whose two
    forms differ.
    """
    pr = dyson_components(spec, t, printed=True)
    co = dyson_components(spec, t)
    notes = PRINTED_DEVIATIONS[spec.spin]
    rows = [(i + 1, pr[i], co[i], notes.get(i + 1, ""))
            for i in range(len(co)) if not np.isclose(pr[i], co[i], rtol=1e-12, atol=1e-14)]
    return rows, dyson_residual(spec, t, h_fd, printed=True), dyson_residual(spec, t, h_fd)


def is_hermitian_exact(m):
    return hermiticity_residual(m) == 0.0
