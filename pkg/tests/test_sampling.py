"""Tests for module sampling."""
import numpy as np
import pytest

from jordan_cone.core.algebra import AlgebraDescriptor, square
from jordan_cone.core.sampling import (
    Rng,
    sample_element,
    sample_interior,
    sample_projection,
)
from jordan_cone.core.spectral import min_eigenvalue, order_unit_norm


def test_same_seed_same_stream():
    a, b = Rng(42), Rng(42)
    assert a.normal(5).tolist() == b.normal(5).tolist()
    assert a.permutation(6).tolist() == b.permutation(6).tolist()
    assert a.position == b.position == 11


def test_spawned_streams_are_stable_and_distinct():
    parent = Rng(7)
    assert parent.spawn("x").seed == Rng(7).spawn("x").seed
    assert parent.spawn("x").seed != parent.spawn("y").seed


def test_orthogonal_sampler():
    q = Rng(3).orthogonal(4)
    assert q @ q.T == pytest.approx(np.eye(4), abs=1e-12)


def test_rng_state_json():
    rng = Rng(9)
    rng.normal(3)
    assert rng.to_dict() == {"algorithm": "PCG64", "seed": 9, "position": 3}


def test_negative_seed_wraps_to_unsigned():
    assert Rng(-1).seed == (1 << 64) - 1


def test_sample_interior_is_interior(algebra, rng):
    for _ in range(10):
        assert min_eigenvalue(sample_interior(algebra, rng)) > 0.0


def test_sample_projection_is_nontrivial(algebra, rng):
    for _ in range(20):
        p = sample_projection(algebra, rng)
        assert 0 < p.rank < algebra.rank
        assert order_unit_norm(square(p.element) - p.element) < 1e-9


def test_sample_element_scale():
    algebra = AlgebraDescriptor.diagonal(3)
    a = sample_element(algebra, Rng(5))
    b = sample_element(algebra, Rng(5), scale=2.0)
    assert b.coords == pytest.approx(2.0 * a.coords)
