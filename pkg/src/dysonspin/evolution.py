"""States in both representations, metric inner products and energy identities."""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dyson import dyson_map, energy_operator, metric, target_hamiltonian
from .linalg import DEFAULT_FD_STEP
from .spin import HALF, ONE, level_energy, eigenvector, level_labels

NON_HERMITIAN = "non-Hermitian"
HERMITIAN = "Hermitian"


@dataclass(frozen=True)
class StateTrajectory:
    times: np.ndarray
    states: np.ndarray  # shape (len(times), dim)
    representation: str = NON_HERMITIAN

    def __post_init__(self):
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("time grid must be strictly increasing")
        if len(self.states) != len(self.times):
            raise ValueError("one state per grid point required")
        if np.ndim(self.states) != 2 or np.shape(self.states)[1] not in (2, 3, 4):
            raise ValueError("states must be vectors of dimension 2s + 1")

    @property
    def final(self):
        return self.states[-1]


@dataclass(frozen=True)
class ObservableSeries:
    times: np.ndarray
    values: np.ndarray
    label: str


def _coeff_items(p, coeffs):
    labels = level_labels(p.spin)
    items = dict(coeffs)
    for k in items:
        if k not in labels:
            raise ValueError(f"level {k!r} not in {labels}")
    return items


def closed_form_state(p, coeffs, t):
    """sum_k c_k Psi_k exp(-i E_k t / hbar) with the unnormalised Psi_k."""
    items = _coeff_items(p, coeffs)
    out = np.zeros(p.dim, dtype=complex)
    for k, c in items.items():
        out += c * eigenvector(p, k) * np.exp(-1j * level_energy(p, k) * t / p.hbar)
    return out


def metric_inner_product(psi1, psi2, rho):
    psi1, psi2, rho = np.asarray(psi1), np.asarray(psi2), np.asarray(rho)
    if not (psi1.shape == psi2.shape and rho.shape == (len(psi1), len(psi1))):
        raise ValueError("dimension mismatch")
    return np.vdot(psi1, rho @ psi2)


def normalization(spec, k):
    """N_k with N_k <Psi_k | rho Psi_k> = 1.

    Closed form for spin 1/2; for spin 1 it is read off the metric (it is
    time independent).  No normalisation is provided for spin 3/2.
    """
    p = spec.params
    if p.spin == HALF:
        g, f, r = p.gamma, spec.ep.freq, spec.root
        return (1 - g) / (-k * 4 * spec.c1 ** 2 * f * (g - k * r))
    if p.spin == ONE:
        psi = eigenvector(p, k)
        return 1 / metric_inner_product(psi, psi, metric(spec, 0.0)).real
    raise NotImplementedError("no normalisation available for spin 3/2")


def metric_norm(spec, psi, t):
    """<Psi | rho(t) Psi>, real part."""
    return metric_inner_product(psi, psi, metric(spec, t)).real


def map_state(spec, psi, t, normalize=False, k=None):
    """phi = eta(t) Psi, optionally scaled by sqrt(N_k) for an eigenstate."""
    phi = dyson_map(spec, t) @ np.asarray(psi, dtype=complex)
    if normalize:
        if k is None:
            raise ValueError("normalize needs the level label k")
        phi = np.sqrt(normalization(spec, k)) * phi
    return phi


def eigenstate(spec, k, t):
    return closed_form_state(spec.params, {k: 1.0}, t)


def hermitian_eigenstate(spec, k, t):
    """Explicit phi_k(t) solving the Hermitian TDSE.

    Spin 1/2 states are normalised; spin-1 states carry the unnormalised
    prefactor c1 / (1 + gamma).
    """
    p = spec.params
    g, c1, c2, c3, r = p.gamma, spec.c1, spec.ep.c2, spec.ep.c3, spec.root
    f = spec.ep.freq
    tau = t / p.hbar
    x = spec.chi(t)
    if p.spin == HALF:
        e = np.exp(k * 1j * tau * f)
        v = np.array([
            (1 + g) / f * 1j * (e * (1j * c2 - k * c3) + 1 - k * r),
            e * (c3 - k * 1j * c2) + k + r,
        ])
        return c1 * np.sqrt(normalization(spec, k) * x) * v * np.exp(-1j * tau * level_energy(p, k))
    if p.spin == ONE:
        q = (1 - g) / (1 + g)
        if k == 0:
            sn, cs = np.sin(f * tau), np.cos(f * tau)
            v = np.array([
                x * (1j * c3 * sn - 1j * c2 * cs - 1) + 2 * f * r,
                2j * (1 - g),
                q * (x * (-1j * c3 * sn + 1j * c2 * cs - 1) + 2 * f * r),
            ])
        else:
            e = np.exp(1j * tau * (level_energy(p, k) - level_energy(p, 0)))
            a = 1j * c2 - k * c3
            v = np.array([
                -x * (1 - k * r + e * a * (1 - k * 2 * f / x)),
                2 * (1 - g) * (-c2 - k * 1j * c3) * e,
                q * x * (1 + k * r - e * a * (1 + k * 2 * f / x)),
            ])
        return c1 * v * np.exp(-1j * tau * level_energy(p, k)) / (1 + g)
    raise NotImplementedError("no explicit Hermitian states for spin 3/2")


def overlap_closed_form(spec, k):
    """<phi_k | phi_-k> for the normalised spin-1/2 states (k = +1 or -1)."""
    if spec.params.spin != HALF:
        raise ValueError("closed-form overlap only for spin 1/2")
    g, c2, c3, f = spec.params.gamma, spec.ep.c2, spec.ep.c3, spec.ep.freq
    return -g * (c3 + k * 1j * c2) / np.sqrt(f ** 2 + c2 ** 2 + c3 ** 2)


def energy_closed_form(spec, k, t):
    """<phi_k | h phi_k> for the normalised spin-1/2 states."""
    if spec.params.spin != HALF:
        raise ValueError("closed-form energy expectation only for spin 1/2")
    g, c2, c3, f, r = spec.params.gamma, spec.ep.c2, spec.ep.c3, spec.ep.freq, spec.root
    sq = c2 ** 2 + c3 ** 2
    return (k * f ** 2 * r - g * sq) / (2 * (f ** 2 + sq)) * spec.chi(t) - spec.params.omega / 2


class EnergyCheck(NamedTuple):
    lhs: float
    rhs: float
    closed: float  # nan when no closed form exists


def energy_expectation_check(spec, k, t, h_fd=DEFAULT_FD_STEP):
    """<phi_k|h phi_k>, N_k <Psi_k|rho H~ Psi_k> and (spin 1/2) the closed form.

    For spin 3/2 the level is normalised numerically through the metric.
    """
    psi = eigenstate(spec, k, t)
    rho = metric(spec, t)
    norm = 1 / metric_inner_product(psi, psi, rho).real
    phi = np.sqrt(norm) * dyson_map(spec, t) @ psi
    lhs = np.vdot(phi, target_hamiltonian(spec, t) @ phi)
    rhs = norm * metric_inner_product(psi, energy_operator(spec, t, h_fd) @ psi, rho)
    closed = energy_closed_form(spec, k, t) if spec.params.spin == HALF else float("nan")
    return EnergyCheck(float(lhs.real), float(rhs.real), closed)


def rk4_propagate(generator, psi0, grid, hbar=1.0, representation=NON_HERMITIAN):
    """Fixed-step RK4 for i hbar psi' = G(t) psi.

    ``generator`` is a constant matrix or a callable t -> matrix.
    """
    grid = np.asarray(grid, dtype=float)
    if callable(generator):
        gen = generator
    else:
        const = np.asarray(generator, dtype=complex)
        gen = lambda t: const
    psi = np.asarray(psi0, dtype=complex).copy()
    out = np.empty((len(grid), len(psi)), dtype=complex)
    out[0] = psi
    c = -1j / hbar
    g0 = gen(grid[0])
    for i in range(1, len(grid)):
        t, dt = grid[i - 1], grid[i] - grid[i - 1]
        gm = gen(t + dt / 2)
        g1 = gen(grid[i])
        k1 = c * g0 @ psi
        k2 = c * gm @ (psi + dt / 2 * k1)
        k3 = c * gm @ (psi + dt / 2 * k2)
        k4 = c * g1 @ (psi + dt * k3)
        psi = psi + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[i] = psi
        g0 = g1
    return StateTrajectory(grid, out, representation)


def observable_series(traj, fn, label):
    return ObservableSeries(traj.times, np.array([fn(t, s) for t, s in zip(traj.times, traj.states)]), label)
