from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cartan_diag.closedform import (
    c_function,
    c_function_exact,
    component_mass,
    component_term,
    diagonal_fourier,
    dh_denominator,
    eigenfunction_sum,
    weyl_dimension,
)
from cartan_diag.errors import InadmissibleComponent, PoleError
from cartan_diag.rootsys import Weight, build_root_system
from cartan_diag.symspace import ComponentIndex, enumerate_components, get_space


def test_c_function_rank_one():
    rs = build_root_system("A", 1)
    assert c_function(rs, rs.weight_from_root_coords([1])).value == pytest.approx(1 / (1 - 1j))


def test_c_function_a2_sum_of_simple_roots():
    rs = build_root_system("A", 2)
    val = c_function(rs, rs.weight_from_root_coords([1, 1])).value
    assert val == pytest.approx((2 / (2 - 1j)) ** 3)


@pytest.mark.parametrize("series, r", [("A", 2), ("B", 2), ("C", 3), ("D", 4)])
def test_c_function_at_zero_is_one(series, r):
    rs = build_root_system(series, r)
    assert c_function(rs, Weight.zero(r)).value == pytest.approx(1.0)


def test_c_function_pole():
    rs = build_root_system("A", 2)
    with pytest.raises(PoleError) as info:
        c_function(rs, -2j * rs.weyl_vector)
    assert info.value.root is not None


@pytest.mark.parametrize("nu, dim", [((1, 0), 3), ((1, 1), 8), ((2, 0), 6), ((3, 0), 10)])
def test_weyl_dimension_a2(nu, dim):
    assert weyl_dimension(build_root_system("A", 2), nu) == dim


def test_exact_c_function_at_twice_delta():
    assert c_function_exact(build_root_system("A", 2), [2, 2]) == Fraction(1, 8)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([("A", 2), ("A", 3), ("B", 2), ("C", 3)]), st.data())
def test_exact_c_function_is_inverse_dimension(system, data):
    rs = build_root_system(*system)
    nu = data.draw(st.lists(st.integers(0, 3), min_size=rs.rank, max_size=rs.rank))
    assert c_function_exact(rs, [2 * x for x in nu]) == Fraction(1, weyl_dimension(rs, nu))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-4, 4, allow_nan=False), min_size=3, max_size=3), st.floats(0.2, 5))
def test_c_function_audit_and_scale_invariance(c, scale):
    rs = build_root_system("A", 3)
    lam = Weight(c)
    val = c_function(rs, lam)
    assert val.consistent()
    assert len(val.factors) == rs.n_positive
    assert c_function(rs.scaled(scale), lam).value == pytest.approx(val.value, rel=1e-12)
    # real lambda: c(-lam) is the conjugate of c(lam)
    assert c_function(rs, -lam).value == pytest.approx(np.conj(val.value), rel=1e-12)


def test_sphere_fourier_transform():
    spec = get_space("gr:1,1")
    val = diagonal_fourier(spec, spec.root_system.weight_from_root_coords([1]))
    assert val.value == pytest.approx(1 / (1 - 2j))
    assert len(val.terms) == 2


@pytest.mark.parametrize("key", ["gr:1,1", "gr:1,2", "gr:2,2", "gr:1,3"])
@pytest.mark.parametrize("normalization", ["uniform", "shared"])
def test_fourier_transform_at_zero_is_one(key, normalization):
    spec = get_space(key)
    assert diagonal_fourier(spec, Weight.zero(spec.n - 1), normalization).value == pytest.approx(1.0)


def test_identity_term_projective_plane():
    spec = get_space("gr:1,2")
    lam = spec.root_system.weight_from_root_coords([1, 1])
    term = component_term(spec, ComponentIndex.identity(3), lam)
    assert term.value == pytest.approx((1 / 3) / (1 - 1j) ** 2)
    assert term.consistent()


def test_group_case_fourier_is_c_function():
    spec = get_space("group:su3")
    lam = Weight([0.3, -1.2])
    assert diagonal_fourier(spec, lam).value == pytest.approx(c_function(spec.root_system, lam).value)


@pytest.mark.parametrize(
    "key, masses",
    [
        ("gr:1,1", [1 / 2, 1 / 2]),
        ("gr:1,2", [1 / 4, 1 / 4, 1 / 2]),
        ("gr:2,2", [1 / 16, 3 / 16, 1 / 4, 1 / 4, 3 / 16, 1 / 16]),
    ],
)
def test_shared_masses(key, masses):
    spec = get_space(key)
    got = [component_mass(spec, w, "shared") for w in enumerate_components(spec)]
    assert got == pytest.approx(masses)


def test_uniform_masses():
    spec = get_space("gr:2,2")
    assert all(component_mass(spec, w) == pytest.approx(1 / 6) for w in enumerate_components(spec))
    with pytest.raises(InadmissibleComponent):
        component_mass(spec, ComponentIndex((1, 1, -1, -1)))
    with pytest.raises(ValueError):
        component_mass(spec, ComponentIndex.identity(4), "other")


def test_eigenfunction_at_identity_is_inverse_denominator():
    spec = get_space("gr:1,2")
    Lam = Weight([0.7, 1.3])
    val = eigenfunction_sum(spec, np.ones(3), Lam)
    assert len(val.terms) == 1
    assert val.value == pytest.approx(1 / dh_denominator(spec, ComponentIndex.identity(3), Lam))


@pytest.mark.parametrize(
    "key, log_a, n_terms",
    [
        ("gr:1,2", [0.4, -0.1, -0.3], 2),
        ("gr:2,2", [0.4, -0.1, -0.5, 0.2], 4),
        ("gr:2,2", [0.4, 0.4, -0.5, -0.3], 2),
    ],
)
def test_eigenfunction_sums_over_k_weyl_cosets(key, log_a, n_terms):
    spec = get_space(key)
    val = eigenfunction_sum(spec, np.exp(np.array(log_a)), Weight([0.7, 1.3, 0.4][: spec.n - 1]))
    assert len(val.terms) == n_terms
    assert val.consistent(1e-12)


def test_eigenfunction_rejects_bad_points():
    spec = get_space("gr:1,2")
    with pytest.raises(ValueError):
        eigenfunction_sum(spec, np.array([1.0, 2.0, 1.0]), Weight([0.0, 0.0]))
    with pytest.raises(ValueError):
        eigenfunction_sum(spec, np.array([1.0, -1.0, -1.0]), Weight([0.0, 0.0]))
