import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cartan_diag.bottsamelson import (
    ParabolicWordData,
    SL2Factor,
    bs_point,
    factored_c_integral,
    random_sl2_prime,
    sigma_eval,
    sigma_lambda,
    sigma_translate,
    sigma_translate_exact,
    sl2_embed,
    verify_a26,
    word_representative,
)
from cartan_diag.closedform import c_function
from cartan_diag.errors import NonReducedWord, PoleError
from cartan_diag.rootsys import Weight, WeylWord, build_root_system, longest_word


def data_for(rank):
    rs = build_root_system("A", rank)
    return ParabolicWordData(rs, longest_word(rs))


def test_sl2_factor_validation():
    f = SL2Factor.from_abc(2.0, 1.0, 3.0)
    assert f.a == 2.0 and f.in_prime
    with pytest.raises(ValueError):
        SL2Factor(np.eye(2) * 2)
    with pytest.raises(ValueError):
        SL2Factor(np.eye(3))


def test_sl2_embed_places_block():
    rs = build_root_system("A", 3)
    g = sl2_embed(rs, 2, np.array([[1, 2], [3, 7]]))
    assert np.array_equal(g[1:3, 1:3], [[1, 2], [3, 7]])
    with pytest.raises(ValueError):
        sl2_embed(rs, 4, np.eye(2))
    with pytest.raises(ValueError):
        sl2_embed(build_root_system("B", 2), 1, np.eye(2))


@pytest.mark.parametrize("rank", [1, 2, 3])
def test_word_representative_is_signed_permutation(rank):
    W = word_representative(build_root_system("A", rank), longest_word(build_root_system("A", rank)))
    assert np.allclose(np.abs(W) @ np.abs(W).T, np.eye(rank + 1))
    # the longest element reverses the coordinate order
    assert np.allclose(np.abs(W), np.eye(rank + 1)[::-1])


def test_non_reduced_word_rejected():
    rs = build_root_system("A", 2)
    with pytest.raises(NonReducedWord):
        ParabolicWordData(rs, WeylWord((1, 1), True))


def test_sigma_is_a_product_of_minors():
    g = np.array([[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]])
    assert sigma_eval(g, 2) == pytest.approx(5.0)
    assert sigma_lambda(g, Weight([-1.0, -2.0])) == pytest.approx(2.0 * 25.0)
    with pytest.raises(ValueError):
        sigma_lambda(g, Weight([1.0, -1.0]))
    with pytest.raises(ValueError):
        sigma_lambda(g, Weight([-0.5, -1.0]))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([1, 2, 3]), st.data())
def test_translate_equals_product_of_a_coordinates(seed, rank, data):
    rng = np.random.default_rng(seed)
    d = data_for(rank)
    m = data.draw(st.lists(st.integers(0, 3), min_size=rank, max_size=rank))
    factors = [random_sl2_prime(rng) for _ in d.word]
    assert verify_a26(d, factors, Weight([-float(x) for x in m])) < 1e-10


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]))
def test_exact_and_float_translates_agree(seed, rank):
    rng = np.random.default_rng(seed)
    d = data_for(rank)
    factors = [random_sl2_prime(rng) for _ in d.word]
    lam = Weight(-np.ones(rank))
    exact = sigma_translate_exact(d, factors, lam)
    assert exact == pytest.approx(sigma_translate(d, bs_point(d, factors), lam), rel=1e-10)


@pytest.mark.parametrize("rank", [2, 3])
def test_zero_coordinate_gives_exact_zero(rank):
    rng = np.random.default_rng(rank)
    d = data_for(rank)
    for j in range(len(d.word)):
        factors = [random_sl2_prime(rng) for _ in d.word]
        factors[j] = random_sl2_prime(rng, zero_a=True)
        assert not factors[j].in_prime
        assert sigma_translate_exact(d, factors, Weight(-np.ones(rank))) == 0


def test_exponents_are_minus_coroot_values():
    d = data_for(2)
    assert np.allclose(d.exponents(Weight([-1.0, -2.0])), [1.0, 3.0, 2.0])


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-6, 6, allow_nan=False), min_size=3, max_size=3), st.sampled_from([1, 2, 3]))
def test_factored_integral_matches_c_function(c, rank):
    rs = build_root_system("A", rank)
    lam = Weight(c[:rank])
    assert factored_c_integral(rs, lam) == pytest.approx(c_function(rs, lam).value, rel=1e-12)


def test_factored_integral_pole():
    rs = build_root_system("A", 1)
    with pytest.raises(PoleError):
        factored_c_integral(rs, Weight([-2j]))
