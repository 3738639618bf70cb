import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cartan_diag.errors import NonGeneric, PhaseError
from cartan_diag.matreal import (
    a_power,
    cartan_embed,
    component_of,
    components_from_d,
    haar_unitary,
    is_cartan_symmetric,
    is_unitary,
    iwasawa,
    ldu,
    ldu_diagonal,
)
from cartan_diag.rootsys import Weight
from cartan_diag.symspace import enumerate_components, get_space

TOL = 1e-10


def test_ldu_small_example():
    f = ldu(np.array([[2.0, 3.0], [4.0, 5.0]]))
    assert np.allclose(f.l, [[1, 0], [2, 1]])
    assert np.allclose(f.d, [2, -1])
    assert np.allclose(f.u, [[1, 1.5], [0, 1]])
    assert np.allclose(f.minors, [2, -2])


def test_ldu_rejects_lower_stratum():
    with pytest.raises(NonGeneric):
        ldu(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    _, generic = ldu_diagonal(np.array([[[0.0, 1.0], [-1.0, 0.0]], [[1.0, 0.0], [0.0, 1.0]]]))
    assert generic.tolist() == [False, True]


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_haar_unitary_is_unitary(n):
    rng = np.random.default_rng(n)
    u = haar_unitary(n, rng, 200)
    assert u.shape == (200, n, n)
    assert is_unitary(u)
    assert haar_unitary(n, rng).shape == (n, n)


def test_haar_moment():
    # E|u_11|^2 = 1/n for Haar measure; the uncorrected QR fails higher moments
    u = haar_unitary(3, np.random.default_rng(7), 40000)
    p = np.abs(u[:, 0, 0]) ** 2
    assert p.mean() == pytest.approx(1 / 3, abs=5 * p.std() / np.sqrt(p.size))
    # E|u_11|^4 = 2/(n(n+1))
    q = p**2
    assert q.mean() == pytest.approx(2 / 12, abs=5 * q.std() / np.sqrt(q.size))


def test_haar_prefix_reproducible():
    a = haar_unitary(3, np.random.default_rng(3), 10)
    b = haar_unitary(3, np.random.default_rng(3), 10)
    assert np.array_equal(a, b)


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 5))
def test_ldu_round_trip(seed, n):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    f = ldu(g, tol=1e-14)
    assert np.allclose(np.tril(f.l), f.l) and np.allclose(np.diag(f.l), 1)
    assert np.allclose(np.triu(f.u), f.u) and np.allclose(np.diag(f.u), 1)
    assert np.max(np.abs(f.reconstruct() - g)) < TOL * max(1.0, np.max(np.abs(f.l)) * np.max(np.abs(f.u)))


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 5))
def test_iwasawa_round_trip(seed, n):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    f = iwasawa(g)
    assert np.all(f.a > 0)
    assert is_unitary(f.u)
    assert np.allclose(np.diag(f.l), 1) and np.allclose(np.triu(f.l, 1), 0)
    assert np.max(np.abs(f.reconstruct() - g)) < TOL * np.max(np.abs(g))


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from(["gr:1,1", "gr:1,2", "gr:2,2", "gr:1,3"]))
def test_embedded_point_structure(seed, key):
    spec = get_space(key)
    u = haar_unitary(spec.n, np.random.default_rng(seed))
    g = cartan_embed(u, spec)
    assert is_cartan_symmetric(g, spec.J)
    f = ldu(g)
    assert np.max(np.abs(np.imag(f.d))) < 1e-8 * np.max(np.abs(f.d))
    w = component_of(f, spec)
    assert w in enumerate_components(spec)


def test_a_power_is_product_of_minors():
    g = np.array([[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]])
    f = ldu(g)
    mu = Weight([0.5, -1.5])
    expected = abs(f.minors[0]) ** 0.5 * abs(f.minors[1]) ** -1.5
    assert a_power(f, mu) == pytest.approx(expected)
    with pytest.raises(ValueError):
        a_power(f, Weight([1.0]))


def test_phase_error_off_real_axis():
    assert components_from_d(np.array([2.0, -0.5])).tolist() == [1, -1]
    with pytest.raises(PhaseError):
        components_from_d(np.array([1.0 + 0.1j, 1.0]))


def test_component_of_rejects_non_symmetric_input():
    spec = get_space("gr:1,1")
    f = ldu(np.array([[2.0, 3.0], [1.0, 5.0]]))
    with pytest.raises(PhaseError):
        component_of(f, spec)
