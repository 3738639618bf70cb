import numpy as np
import pytest

from cartan_diag.closedform import c_function, component_mass, component_term, diagonal_fourier
from cartan_diag.errors import QuadratureError
from cartan_diag.haarmc import (
    BLOCK_SIZE,
    MCEstimate,
    block_rng,
    estimate_diagonal_integral,
    estimate_group_integral,
    hyperbolic_quadrature,
    worker_count,
)
from cartan_diag.rootsys import Weight
from cartan_diag.symspace import ComponentIndex, enumerate_components, get_space

N = 40_000


def test_block_streams_are_independent_of_order():
    a = block_rng(5, 3).standard_normal(4)
    block_rng(5, 2).standard_normal(4)
    assert np.array_equal(a, block_rng(5, 3).standard_normal(4))
    assert not np.array_equal(a, block_rng(5, 4).standard_normal(4))


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("CARTAN_DIAG_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("CARTAN_DIAG_THREADS", "0")
    with pytest.raises(ValueError):
        worker_count()


def test_result_independent_of_thread_count(monkeypatch):
    lam = Weight([1.0, -0.5])
    n = 2 * BLOCK_SIZE + 1000
    monkeypatch.setenv("CARTAN_DIAG_THREADS", "1")
    one = estimate_diagonal_integral("gr:1,2", lam, n, seed=11)
    monkeypatch.setenv("CARTAN_DIAG_THREADS", "3")
    three = estimate_diagonal_integral("gr:1,2", lam, n, seed=11)
    assert one == three


def test_group_estimate_matches_c_function():
    lam = Weight([2.0])
    est = estimate_group_integral(2, lam, N, seed=1)
    assert est.z_score(c_function(get_space("group:su2").root_system, lam).value) < 4
    assert est.n_samples == N


def test_zero_weight_is_exact():
    est = estimate_group_integral(3, Weight([0.0, 0.0]), 5000, seed=2)
    assert est.mean == 1 and est.stderr == 0


def test_diagonal_estimate_bins_every_sample():
    spec = get_space("gr:2,2")
    est = estimate_diagonal_integral(spec, Weight([0.3, 1.0, -0.4]), N, seed=4)
    assert sum(c.count for c in est.components) + est.n_rejected == N
    assert est.n_inadmissible == 0
    labels = [w.label() for w in enumerate_components(spec)]
    assert [c.label for c in est.components] == labels


def test_component_conditional_means():
    spec = get_space("gr:1,2")
    lam = Weight([0.8, 0.6])
    est = estimate_diagonal_integral(spec, lam, N, seed=5)
    for w in enumerate_components(spec):
        term = component_term(spec, w, lam)
        s = est.per_component[w.label()]
        assert abs(s.mean - term.value / term.prefactor) < 4 * s.stderr


def test_sphere_estimate():
    spec = get_space("gr:1,1")
    lam = Weight([2.0])
    est = estimate_diagonal_integral(spec, lam, N, seed=6)
    assert est.z_score(diagonal_fourier(spec, lam).value) < 4


def test_round_trip_through_dict():
    est = estimate_diagonal_integral("gr:1,1", Weight([1.0]), 2000, seed=8)
    again = MCEstimate.from_dict(est.as_dict())
    assert again == est
    assert est.to_json() == again.to_json()


@pytest.mark.parametrize("bad", [Weight([1.0, 2.0]), Weight([1j])])
def test_rejects_bad_weights(bad):
    with pytest.raises(ValueError):
        estimate_group_integral(2, bad, 5000, seed=0)


def test_rejects_too_few_samples():
    with pytest.raises(ValueError):
        estimate_group_integral(2, Weight([1.0]), 10, seed=0)


@pytest.mark.parametrize("s", [0.0, 0.5, 2.0])
@pytest.mark.parametrize("route", ["iwasawa", "cartan"])
def test_quadrature_matches_identity_term(s, route):
    spec = get_space("gr:1,1")
    lam = Weight([2 * s])
    expected = component_term(spec, ComponentIndex.identity(2), lam).value
    assert hyperbolic_quadrature(lam, route=route) == pytest.approx(expected, rel=1e-8)


def test_quadrature_rejects_bad_input():
    with pytest.raises(ValueError):
        hyperbolic_quadrature(Weight([1.0, 1.0]))
    with pytest.raises(ValueError):
        hyperbolic_quadrature(Weight([1.0]), route="polar")


def test_quadrature_error_is_reported():
    # a very oscillatory integrand cannot be resolved to this tolerance
    with pytest.raises(QuadratureError):
        hyperbolic_quadrature(Weight([4000.0]), tol=1e-10)


@pytest.mark.parametrize("key", ["gr:1,2", "gr:2,2", "gr:1,3"])
def test_shared_normalization_matches_sampled_masses(key):
    spec = get_space(key)
    lam = Weight(np.linspace(-1.0, 1.5, spec.n - 1))
    est = estimate_diagonal_integral(spec, lam, 200_000, seed=31)
    for w in enumerate_components(spec):
        p = component_mass(spec, w, "shared")
        s = est.per_component[w.label()]
        assert abs(s.mass - p) < 4 * np.sqrt(p * (1 - p) / est.n_samples)
    assert est.z_score(diagonal_fourier(spec, lam, "shared").value) < 4
