import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cartan_diag.errors import InadmissibleComponent
from cartan_diag.symspace import (
    ComponentIndex,
    RootKind,
    classify_root,
    enumerate_components,
    get_space,
    grassmannian,
    is_admissible,
    noncompact_roots,
    order_M,
    root_support,
)


@pytest.mark.parametrize("key, n, M", [("gr:1,1", 2, 2), ("gr:1,2", 3, 3), ("gr:2,2", 4, 6)])
def test_catalog_counts(key, n, M):
    spec = get_space(key)
    assert spec.n == n
    assert order_M(spec) == M
    assert len(enumerate_components(spec)) == M


def test_identity_component_is_first():
    for key in ("gr:1,1", "gr:1,2", "gr:2,2"):
        spec = get_space(key)
        assert enumerate_components(spec)[0] == ComponentIndex.identity(spec.n)


def test_sign_and_its_negative_are_distinct_components():
    labels = [w.label() for w in enumerate_components(get_space("gr:1,1"))]
    assert labels == ["++", "--"]


def test_projective_plane_components():
    labels = [w.label() for w in enumerate_components(get_space("gr:1,2"))]
    assert labels == ["+++", "-+-", "--+"]
    assert not is_admissible(get_space("gr:1,2"), ComponentIndex((1, -1, -1)))


def test_inadmissible_component_raises():
    with pytest.raises(InadmissibleComponent):
        noncompact_roots(get_space("gr:1,2"), ComponentIndex((1, -1, -1)))


def test_noncompact_roots_of_identity_on_projective_plane():
    spec = get_space("gr:1,2")
    roots = noncompact_roots(spec, ComponentIndex.identity(3))
    assert sorted(tuple(int(x) for x in a) for a in roots) == [(1, 0), (1, 1)]
    assert classify_root(spec, ComponentIndex.identity(3), np.array([0, 1])) is RootKind.COMPACT


def test_odd_sign_vector_rejected():
    with pytest.raises(ValueError):
        ComponentIndex((1, -1))
    with pytest.raises(ValueError):
        ComponentIndex((1, 2))


def test_character_is_product_of_signs():
    w = ComponentIndex((1, -1, -1, 1))
    assert w.character(np.array([1, 0, 0])) == -1
    assert w.character(np.array([0, 1, 0])) == 1
    assert w.character(np.array([1, 1, 1])) == 1


@pytest.mark.parametrize("root, support", [((1, 0, 0), (0, 1)), ((0, 1, 1), (1, 3)), ((1, 1, 1), (0, 3))])
def test_root_support(root, support):
    assert root_support(root) == support


@pytest.mark.parametrize("root", [(1, 0, 1), (0, 0, 0), (1, -1, 0)])
def test_root_support_rejects_non_roots(root):
    with pytest.raises(ValueError):
        root_support(root)


@pytest.mark.parametrize("key", ["gr:0,2", "gr:5,5", "group:su9", "sphere", "group:su1"])
def test_unknown_spaces(key):
    with pytest.raises(KeyError):
        get_space(key)


def test_group_case_has_no_components():
    spec = get_space("group:su3")
    assert spec.group_case
    with pytest.raises(ValueError):
        enumerate_components(spec)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4))
def test_component_count_and_noncompact_dimension(k, m):
    spec = grassmannian(k, m)
    comps = enumerate_components(spec)
    assert len(comps) == math.comb(k + m, k)
    for w in comps:
        # each component is open, so it carries k*m noncompact positive roots
        assert len(noncompact_roots(spec, w)) == k * m


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3))
def test_dimension_is_twice_km(k, m):
    assert grassmannian(k, m).dim == 2 * k * m
