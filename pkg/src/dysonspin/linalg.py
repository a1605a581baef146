"""Small dense complex matrix helpers.

All matrices handled here are plain ``numpy`` arrays of shape (d, d) with
d in {2, 3, 4}.  Inverse and determinant are computed by LU elimination
with partial pivoting, which is all that is needed at these sizes.
"""
from dataclasses import dataclass

import numpy as np

SUPPORTED_DIMS = (2, 3, 4)
DEFAULT_FD_STEP = 1e-5


class NotHermitianError(ValueError):
    pass


def as_matrix(m):
    """Return ``m`` as a complex square array, rejecting unsupported sizes."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] not in SUPPORTED_DIMS:
        raise ValueError(f"matrix dimension {a.shape[0]} not in {SUPPORTED_DIMS}")
    return a


def adjoint(m):
    return np.conj(np.asarray(m)).T


def hermiticity_residual(m):
    m = np.asarray(m)
    return float(np.max(np.abs(m - adjoint(m))))


def max_norm(m):
    return float(np.max(np.abs(m)))


def _lu(a):
    a = as_matrix(a).copy()
    d = a.shape[0]
    perm = np.arange(d)
    sign = 1.0
    for k in range(d):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if a[p, k] == 0:
            raise np.linalg.LinAlgError("singular matrix")
        if p != k:
            a[[k, p]] = a[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        a[k + 1:, k] /= a[k, k]
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return a, perm, sign


def determinant(m):
    try:
        lu, _, sign = _lu(m)
    except np.linalg.LinAlgError:
        return 0j
    return sign * np.prod(np.diag(lu))


def inverse(m):
    lu, perm, _ = _lu(m)
    d = lu.shape[0]
    inv = np.zeros((d, d), dtype=complex)
    eye = np.eye(d, dtype=complex)[perm]
    for j in range(d):
        y = eye[:, j].copy()
        for i in range(d):
            y[i] -= lu[i, :i] @ y[:i]
        for i in reversed(range(d)):
            y[i] = (y[i] - lu[i, i + 1:] @ y[i + 1:]) / lu[i, i]
        inv[:, j] = y
    return inv


@dataclass(frozen=True)
class EigenSystem:
    values: np.ndarray
    vectors: tuple  # unit vectors, or () when defective
    defective: bool = False


def fix_phase(v):
    """Scale ``v`` to unit norm with its first nonzero entry real positive."""
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    nz = np.flatnonzero(np.abs(v) > 1e-12 * np.max(np.abs(v)))
    return v * np.exp(-1j * np.angle(v[nz[0]]))


def eigenpairs(m, cond_limit=1e8):
    """Eigenvalues sorted by (real, imag) with phase-fixed unit eigenvectors.

    A matrix whose eigenvector basis is numerically degenerate (condition
    number above ``cond_limit``) is reported as defective and no vectors are
    returned.
    """
    a = as_matrix(m)
    vals, vecs = np.linalg.eig(a)
    order = np.lexsort((vals.imag.round(12), vals.real.round(12)))
    vals = vals[order]
    vecs = vecs[:, order]
    if np.linalg.cond(vecs) > cond_limit:
        return EigenSystem(vals, (), defective=True)
    return EigenSystem(vals, tuple(fix_phase(vecs[:, i]) for i in range(len(vals))))


def positive_definite(m, tol=1e-12):
    a = as_matrix(m)
    if hermiticity_residual(a) > tol * max(1.0, max_norm(a)):
        raise NotHermitianError("not Hermitian")
    return bool(np.all(np.linalg.eigvalsh((a + adjoint(a)) / 2) > tol))


def time_derivative(f, t, h=DEFAULT_FD_STEP):
    """Central difference (f(t+h) - f(t-h)) / 2h."""
    if h <= 0:
        raise ValueError("finite-difference step must be positive")
    return (np.asarray(f(t + h)) - np.asarray(f(t - h))) / (2 * h)


def phase_align(v, ref):
    """Multiply ``v`` by the unit phase that best aligns it with ``ref``."""
    ov = np.vdot(v, ref)
    if abs(ov) == 0:
        return np.asarray(v)
    return np.asarray(v) * (ov / abs(ov))
