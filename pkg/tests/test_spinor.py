import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from diracbohm.spinor import REP_2D, REP_WEYL, current, density, velocity_from_spinor


@pytest.mark.parametrize("rep", [REP_2D, REP_WEYL])
def test_clifford_algebra(rep):
    assert rep.clifford_defect() < 1e-14
    g = rep.gamma()
    eta = np.diag([1.0] + [-1.0] * len(rep.alpha))
    for a in range(len(g)):
        for b in range(len(g)):
            anti = g[a] @ g[b] + g[b] @ g[a]
            np.testing.assert_allclose(anti, 2 * eta[a, b] * np.eye(rep.size), atol=1e-14)


def test_two_dimensional_gammas():
    g0, g1, g2 = REP_2D.gamma()
    s1, s2 = REP_2D.alpha
    np.testing.assert_array_equal(g1, g0 @ s1)
    np.testing.assert_array_equal(g2, g0 @ s2)


def test_velocity_of_basis_spinors():
    np.testing.assert_allclose(velocity_from_spinor(np.array([1, 0])), [0, 0])
    np.testing.assert_allclose(velocity_from_spinor(np.array([1, 1]) / np.sqrt(2)), [1, 0])
    np.testing.assert_allclose(velocity_from_spinor(np.array([1, 1j])), [0, 1])


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        current(np.ones(4, complex), REP_2D)


_cplx = st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False)


@settings(max_examples=300, deadline=None)
@given(arrays(complex, 2, elements=_cplx) | arrays(complex, 4, elements=_cplx))
def test_luminal_bound(psi):
    if density(psi) < 1e-12:
        return
    assert np.linalg.norm(velocity_from_spinor(psi)) <= 1 + 1e-12
