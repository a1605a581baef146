"""Spin operators and the one-site non-Hermitian spin Hamiltonians.

The Hamiltonians are the one-site members of a Yang-Lee type family

    H = -(kappa) (S^y + i gamma S^x) - (offset) I

with the spin-dependent constants fixed below.  For spin 1/2 the Pauli
matrices are used, so that ``H = -1/2 (sigma_y + i gamma sigma_x) - omega/2``.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .linalg import eigenpairs, max_norm

HALF = Fraction(1, 2)
ONE = Fraction(1)
THREE_HALVES = Fraction(3, 2)
SPINS = (HALF, ONE, THREE_HALVES)
_DIMS = {HALF: 2, ONE: 3, THREE_HALVES: 4}


def spin_label(s):
    """Normalise ``s`` (``0.5``, ``"1/2"``, ``Fraction(1, 2)``...) to a Fraction."""
    try:
        f = Fraction(s).limit_denominator(2)
    except (TypeError, ValueError):
        raise ValueError(f"unsupported spin {s!r}") from None
    if f not in SPINS or abs(float(f) - float(Fraction(s))) > 1e-12:
        raise ValueError(f"unsupported spin {s!r}; expected one of 1/2, 1, 3/2")
    return f


def _frozen(*arrays):
    for a in arrays:
        a.flags.writeable = False
    return arrays if len(arrays) > 1 else arrays[0]


@lru_cache(maxsize=None)
def spin_operators(s):
    """Return (Sx, Sy, Sz) for spin ``s`` from the ladder construction.

    The matrices are cached and read-only.
    """
    s = spin_label(s)
    d = int(2 * s + 1)
    m = np.array([float(s) - i for i in range(d)])
    sp = np.zeros((d, d), dtype=complex)
    for i in range(d - 1):
        sp[i, i + 1] = np.sqrt(float(s) * (float(s) + 1) - m[i + 1] * (m[i + 1] + 1))
    sm = sp.T.copy()
    return _frozen((sp + sm) / 2, (sp - sm) / 2j, np.diag(m).astype(complex))


def pauli():
    sx, sy, sz = spin_operators(HALF)
    return 2 * sx, 2 * sy, 2 * sz


@dataclass(frozen=True)
class ModelParams:
    spin: Fraction
    gamma: float
    omega: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "spin", spin_label(self.spin))
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")

    @property
    def dim(self):
        return _DIMS[self.spin]

    @property
    def broken(self):
        return abs(self.gamma) > 1

    @property
    def freq(self):
        """Model frequency: phi, phi-tilde or phi-hat depending on the spin.

        Complex (purely imaginary) in the broken regime |gamma| > 1.
        """
        root = np.sqrt(complex(1 - self.gamma ** 2))
        if abs(root.imag) < 1e-300:
            root = root.real
        if self.spin == HALF:
            return root
        if self.spin == ONE:
            return root / np.sqrt(2)
        return root / 6

    @property
    def energy_offset(self):
        """Coefficient of -I in H, omega/2 for every spin."""
        return self.omega / 2

    @property
    def coupling(self):
        """kappa in H = -kappa (S^y + i gamma S^x) - offset I."""
        return {HALF: 1.0, ONE: 1 / np.sqrt(2), THREE_HALVES: 1 / 6}[self.spin]


def hamiltonian(p):
    g, w = p.gamma, p.omega
    if p.spin == HALF:
        return -0.5 * np.array([[w, 1j * (g - 1)], [1j * (g + 1), w]])
    if p.spin == ONE:
        return -0.5 * np.array([
            [w, 1j * (g - 1), 0],
            [1j * (g + 1), w, 1j * (g - 1)],
            [0, 1j * (g + 1), w],
        ])
    sx, sy, _ = spin_operators(THREE_HALVES)
    return -(sy + 1j * g * sx) / 6 - (w / 2) * np.eye(4)


@lru_cache(maxsize=None)
def z_operator(s):
    """The S_z entering the Hermitian target h(t); sigma_z for spin 1/2."""
    s = spin_label(s)
    if s == HALF:
        return _frozen(np.diag([1.0, -1.0]).astype(complex))
    return spin_operators(s)[2]


@dataclass(frozen=True)
class Spectrum:
    labels: tuple
    energies: np.ndarray
    vectors: tuple
    broken: bool = False

    def energy(self, k):
        return self.energies[self.labels.index(k)]

    def vector(self, k):
        return self.vectors[self.labels.index(k)]


def level_labels(s):
    s = spin_label(s)
    return {HALF: (1, -1), ONE: (1, 0, -1), THREE_HALVES: (3, 1, -1, -3)}[s]


def eigenvector(p, k):
    """Unnormalised eigenvector Psi_k (column of the closed-form spectrum)."""
    g = p.gamma
    f = p.freq
    if p.spin == HALF:
        return np.array([k * 1j * (1 - g), f], dtype=complex)
    if p.spin == ONE:
        return np.array([(-1) ** k * (1 - g), 2j * k * f, 1 + g], dtype=complex)
    sq = np.sqrt(3)
    sg = np.sign(k)
    return np.array([
        1j * (1 - g) ** 1.5,
        -2 * sq * k * f * np.sqrt(complex(1 - g)),
        2j * sq * (2 * abs(k) - k * k) * f * np.sqrt(complex(1 + g)),
        sg * (abs(k) - 2) * (1 + g) ** 1.5,
    ], dtype=complex)


def level_energy(p, k):
    f = p.freq
    if p.spin == HALF:
        return -p.omega / 2 + k * f / 2
    if p.spin == ONE:
        return -p.omega / 2 + k * f
    return -k * f / 2 - p.omega / 2


def closed_form_spectrum(p):
    labels = level_labels(p.spin)
    energies = np.array([level_energy(p, k) for k in labels])
    if not p.broken:
        energies = energies.real
    vectors = tuple(eigenvector(p, k) for k in labels)
    return Spectrum(labels, energies, vectors, broken=p.broken)


@dataclass
class SpectrumReport:
    passed: bool
    residuals: dict
    failures: list = field(default_factory=list)


def verify_spectrum(p, tol=1e-10, vectors=None):
    """Check ||H Psi_k - E_k Psi_k|| <= tol ||H|| ||Psi_k|| for every level.

    ``vectors`` may override the closed-form eigenvectors (label -> vector),
    which is how a corrupted eigenvector is shown to be caught.
    """
    if abs(abs(p.gamma) - 1) < 1e-12:
        raise ValueError("exceptional point |gamma| = 1 is defective")
    H = hamiltonian(p)
    spec = closed_form_spectrum(p)
    vectors = dict(vectors or {})
    scale = max_norm(H)
    residuals = {}
    for k, e, v in zip(spec.labels, spec.energies, spec.vectors):
        v = np.asarray(vectors.get(k, v), dtype=complex)
        residuals[k] = float(np.linalg.norm(H @ v - e * v) / (scale * np.linalg.norm(v)))
    failures = [(k, r) for k, r in residuals.items() if not r <= tol]
    return SpectrumReport(not failures, residuals, failures)


def spectrum_mismatch(p):
    """Largest distance between closed-form energies and numerical eigenvalues."""
    num = eigenpairs(hamiltonian(p)).values
    closed = np.asarray(closed_form_spectrum(p).energies, dtype=complex)
    key = lambda z: (round(z.real, 9), round(z.imag, 9))
    return float(np.max(np.abs(np.array(sorted(num, key=key)) - np.array(sorted(closed, key=key)))))
