import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from dysonspin.linalg import (NotHermitianError, adjoint, as_matrix, determinant, eigenpairs,
                              fix_phase, hermiticity_residual, inverse, max_norm, phase_align,
                              positive_definite, time_derivative)

reals = st.floats(-10, 10, allow_subnormal=False)
complexes = st.builds(complex, reals, reals)


def random_matrix(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def test_as_matrix_rejects_bad_shapes():
    with pytest.raises(ValueError):
        as_matrix(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        as_matrix(np.eye(5))
    assert as_matrix([[1, 2], [3, 4]]).dtype == complex


def test_adjoint_and_hermiticity():
    m = np.array([[1, 2j], [-2j, 3]])
    assert hermiticity_residual(m) == 0
    assert max_norm(adjoint(m) - m) == 0
    assert hermiticity_residual(np.array([[0, 1], [0, 0]])) == 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_determinant_and_inverse_match_numpy(rng, n):
    for _ in range(20):
        m = random_matrix(rng, n)
        assert abs(determinant(m) - np.linalg.det(m)) <= 1e-12 * max(1, abs(np.linalg.det(m)))
        assert max_norm(inverse(m) @ m - np.eye(n)) < 1e-12


def test_inverse_of_singular_matrix_raises():
    with pytest.raises(np.linalg.LinAlgError):
        inverse(np.array([[1, 2], [2, 4]]))


@settings(max_examples=50, deadline=None)
@given(arrays(complex, (3, 3), elements=complexes), arrays(complex, (3, 3), elements=complexes))
def test_determinant_is_multiplicative(a, b):
    lhs = determinant(a @ b)
    rhs = determinant(a) * determinant(b)
    assert abs(lhs - rhs) <= 1e-9 * (1 + abs(rhs) + abs(determinant(a)) * abs(determinant(b)))


def test_eigenpairs_sorted_and_normalised(rng):
    m = random_matrix(rng, 4)
    es = eigenpairs(m)
    assert list(es.values) == sorted(es.values, key=lambda z: (z.real, z.imag))
    for lam, v in zip(es.values, es.vectors):
        assert np.linalg.norm(m @ v - lam * v) < 1e-10
        assert abs(np.linalg.norm(v) - 1) < 1e-12
        first = v[np.flatnonzero(np.abs(v) > 1e-14)[0]]
        assert abs(first.imag) < 1e-14 and first.real > 0
    assert not es.defective


def test_eigenpairs_flags_jordan_block():
    es = eigenpairs(np.array([[1, 1], [0, 1]]))
    assert es.defective and es.vectors == ()
    assert determinant(np.array([[1, 2], [2, 4]])) == 0


def test_fix_phase():
    v = fix_phase(np.array([0, 1j, 1]))
    assert v[0] == 0 and abs(v[1] - 1 / np.sqrt(2)) < 1e-15


def test_positive_definite():
    assert positive_definite(np.diag([1.0, 2.0]))
    assert not positive_definite(np.diag([1.0, -2.0]))
    with pytest.raises(NotHermitianError):
        positive_definite(np.array([[1, 1], [0, 1]]))


def test_time_derivative_central_difference():
    d = time_derivative(lambda t: np.array([[np.sin(t), t ** 3]]), 0.4)
    assert abs(d[0, 0] - np.cos(0.4)) < 1e-9
    assert abs(d[0, 1] - 3 * 0.16) < 1e-9
    with pytest.raises(ValueError):
        time_derivative(np.sin, 0.0, h=0)


def test_phase_align(rng):
    v = rng.normal(size=3) + 1j * rng.normal(size=3)
    assert np.allclose(phase_align(np.exp(0.7j) * v, v), v)
