"""Tests for module factorization."""
import logging

import numpy as np
import pytest

from jordan_cone.core.algebra import AlgebraDescriptor, Element, sym_pack, sym_unpack, trace, unit
from jordan_cone.core.cone import inversion, ray_equal, ray_of
from jordan_cone.core.errors import EvaluationBudgetExceeded, FactorizationFailed, NotAnIsometry
from jordan_cone.core.factorization import (
    compose_hilbert,
    factor_hilbert_isometry,
    factor_variation_isometry,
    hamhalter_decompose,
    unitalized_map,
    variation_isometry_from_hilbert,
)
from jordan_cone.core.isometry import (
    BlackBoxRayMap,
    HilbertIsometry,
    JordanIsomorphism,
    VariationIsometry,
    inversion_isometry,
    sample_affine_isometry,
    sample_hilbert_isometry,
    sample_jordan_iso,
)
from jordan_cone.core.sampling import Rng, sample_element, sample_interior
from jordan_cone.core.spectral import maximal_deviation, variation_seminorm

DIAG2 = AlgebraDescriptor.diagonal(2)
DIAG3 = AlgebraDescriptor.diagonal(3)
SPIN3 = AlgebraDescriptor.spin(3)
SYM2 = AlgebraDescriptor.sym(2)


def assert_same_quotient_map(matrix, epsilon, J, algebra, seed=0):
    rng = Rng(seed)
    for _ in range(20):
        x = sample_element(algebra, rng)
        gap = variation_seminorm(Element(algebra, matrix @ x.coords) - epsilon * J.apply(x))
        assert gap < 1e-8


def test_identity_factors_trivially():
    epsilon, J = factor_variation_isometry(np.eye(3), DIAG3, DIAG3, samples=20)
    assert epsilon == 1
    assert J.perm == (0, 1, 2)


def test_signed_permutation_round_trip():
    J = JordanIsomorphism(DIAG3, perm=(1, 0, 2))
    S = VariationIsometry.from_canonical(-1, J)
    epsilon, recovered = factor_variation_isometry(S, DIAG3, DIAG3, samples=50)
    assert epsilon == -1
    assert recovered.perm == (1, 0, 2)


def test_rank_two_prefers_positive_sign():
    """On Diagonal(2) the map −id is the swap up to ℝe."""
    epsilon, J = factor_variation_isometry(-np.eye(2), DIAG2, DIAG2, samples=20)
    assert epsilon == 1
    assert J.perm == (1, 0)


def test_rank_two_spin_negation_is_reflection():
    epsilon, J = factor_variation_isometry(-np.eye(SPIN3.dim), SPIN3, SPIN3, samples=20)
    assert epsilon == 1
    assert J.orth == pytest.approx(-np.eye(3), abs=1e-9)


def test_rank_two_sym_negation_is_rotation_conjugation():
    epsilon, J = factor_variation_isometry(-np.eye(SYM2.dim), SYM2, SYM2, samples=20)
    assert epsilon == 1
    x = Element(SYM2, sym_pack(np.array([[1.0, 2.0], [2.0, 5.0]])))
    # X ↦ tr(X)I − X
    expected = trace(x) * unit(SYM2).coords - x.coords
    assert J.apply(x).coords == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("text", ["diag:3", "diag:4", "sym:3", "spin:3", "sum(diag:2,spin:3)", "sum(sym:2,sym:2)"])
def test_factor_sampled_variation_isometries(text):
    algebra = AlgebraDescriptor.parse(text)
    rng = Rng(21)
    for _ in range(3):
        epsilon = rng.sign()
        J = sample_jordan_iso(algebra, rng)
        S = VariationIsometry.from_canonical(epsilon, J)
        got_epsilon, got_J = factor_variation_isometry(S, algebra, algebra, samples=50, seed=1)
        assert_same_quotient_map(S.matrix, got_epsilon, got_J, algebra)
        if algebra.rank >= 3:
            assert got_epsilon == epsilon


def test_factorization_rejects_non_isometry():
    with pytest.raises(NotAnIsometry):
        factor_variation_isometry(2.0 * np.eye(3), DIAG3, DIAG3, samples=20)
    with pytest.raises(FactorizationFailed):
        factor_variation_isometry(np.eye(3), DIAG3, AlgebraDescriptor.spin(2), samples=20)


def test_hamhalter_example():
    matrix = -np.eye(3) + np.ones((3, 3)) / 3.0
    T = hamhalter_decompose(matrix, DIAG3, samples=20)
    assert T.epsilon == -1
    assert T.J.perm == (0, 1, 2)
    assert T.phi.representer.coords == pytest.approx([1 / 3, 1 / 3, 1 / 3])


@pytest.mark.parametrize("text", ["diag:3", "spin:2", "sym:3", "sum(diag:2,spin:2)"])
def test_hamhalter_round_trip(text):
    algebra = AlgebraDescriptor.parse(text)
    T = sample_affine_isometry(algebra, Rng(31))
    recovered = hamhalter_decompose(T, algebra, samples=30, seed=2)
    assert recovered.matrix == pytest.approx(T.matrix, abs=1e-8)


def test_hamhalter_rejects_non_isometry():
    with pytest.raises(NotAnIsometry):
        hamhalter_decompose(np.diag([1.0, 2.0, 3.0]), DIAG3, samples=10)


@pytest.mark.parametrize("text", ["diag:3", "sym:3", "sum(diag:2,spin:2)"])
def test_factor_hilbert_round_trip(text):
    algebra = AlgebraDescriptor.parse(text)
    rng = Rng(41)
    f = sample_hilbert_isometry(algebra, rng, spread=0.5)
    g = factor_hilbert_isometry(f, algebra, algebra, samples=50, seed=3)
    assert g.epsilon == f.epsilon
    assert ray_equal(ray_of(g.y), ray_of(f.y))
    for _ in range(5):
        r = ray_of(sample_interior(algebra, rng))
        assert ray_equal(g(r), f(r))


def test_inversion_factors_with_negative_sign():
    g = factor_hilbert_isometry(inversion_isometry(DIAG3), DIAG3, DIAG3, samples=30)
    assert g.epsilon == -1
    assert g.J.perm == (0, 1, 2)


def test_inversion_on_spin_is_a_projectivity():
    g = factor_hilbert_isometry(inversion, SPIN3, SPIN3, samples=30)
    assert g.epsilon == 1
    r = ray_of(Element(SPIN3, [0.2, -0.1, 0.3, 1.0]))
    assert ray_equal(g(r), inversion(r))


def test_factor_hilbert_rejects_non_isometry():
    def squash(r):
        return ray_of(r.representative + unit(DIAG3))

    with pytest.raises(NotAnIsometry):
        factor_hilbert_isometry(squash, DIAG3, DIAG3, samples=10)


def test_unitalized_map_fixes_unit():
    f = sample_hilbert_isometry(DIAG3, Rng(2))
    w, g = unitalized_map(f, DIAG3)
    e_ray = ray_of(unit(DIAG3))
    assert ray_equal(g(e_ray), e_ray)
    assert ray_equal(ray_of(w), f(e_ray))


def test_variation_isometry_from_projectivity():
    J = JordanIsomorphism(DIAG3, perm=(2, 0, 1))
    f = HilbertIsometry(1, Element(DIAG3, [1.0, 2.0, 0.5]), J)
    S = variation_isometry_from_hilbert(f, DIAG3, samples=10)
    assert_same_quotient_map(S.matrix, 1, J, DIAG3)


@pytest.mark.parametrize("text", ["diag:3", "spin:2", "sym:3"])
def test_compose_hilbert_group_law(text):
    algebra = AlgebraDescriptor.parse(text)
    rng = Rng(51)
    f = sample_hilbert_isometry(algebra, rng, spread=0.5)
    g = sample_hilbert_isometry(algebra, rng, spread=0.5)
    h = compose_hilbert(f, g)
    for _ in range(5):
        r = ray_of(sample_interior(algebra, rng))
        assert ray_equal(h(r), f(g(r)))


def test_sym2_reflection_is_rotation_conjugation():
    rotation = np.array([[0.0, -1.0], [1.0, 0.0]])
    x = sym_unpack(np.array([1.0, 2.0, 5.0]), 2)
    assert rotation @ x @ rotation.T == pytest.approx(np.trace(x) * np.eye(2) - x)


def test_plain_callable_gets_every_verification_ray(caplog):
    f = sample_hilbert_isometry(DIAG3, Rng(17), spread=0.5)
    calls = []

    def counted(r):
        calls.append(r)
        return f(r)

    caplog.set_level(logging.DEBUG, logger="jordan_cone.core.factorization")
    g = factor_hilbert_isometry(counted, DIAG3, DIAG3, samples=1000, seed=4)
    assert g.epsilon == f.epsilon
    assert len(calls) > 1000
    assert "over 1000 rays" in caplog.text
    assert not any(record.levelno >= logging.WARNING for record in caplog.records)


def test_tight_budget_shortens_verification(caplog):
    f = sample_hilbert_isometry(DIAG3, Rng(17), spread=0.5)
    roomy = BlackBoxRayMap(f, DIAG3, budget=10_000)
    factor_hilbert_isometry(roomy, DIAG3, DIAG3, samples=50, seed=4)
    before_verification = roomy.evaluations - 50

    tight = BlackBoxRayMap(f, DIAG3, budget=before_verification + 10)
    with caplog.at_level(logging.WARNING, logger="jordan_cone.core.factorization"):
        factor_hilbert_isometry(tight, DIAG3, DIAG3, samples=50, seed=4)
    assert "10 of 50 verification rays" in caplog.text
    assert tight.evaluations == tight.budget

    exhausted = BlackBoxRayMap(f, DIAG3, budget=before_verification)
    with pytest.raises(EvaluationBudgetExceeded):
        factor_hilbert_isometry(exhausted, DIAG3, DIAG3, samples=50, seed=4)


def test_affine_isometry_preserves_maximal_deviation(algebra):
    rng = Rng(23)
    for _ in range(5):
        T = sample_affine_isometry(algebra, rng)
        x = sample_element(algebra, rng)
        assert maximal_deviation(T.apply(x)) == pytest.approx(maximal_deviation(x), rel=1e-9, abs=1e-12)


def test_hamhalter_form_preserves_maximal_deviation():
    matrix = np.array([[-2 / 3, 1 / 3, 1 / 3], [1 / 3, -2 / 3, 1 / 3], [1 / 3, 1 / 3, -2 / 3]])
    T = hamhalter_decompose(matrix, DIAG3, samples=20)
    x = Element(DIAG3, [1.0, 2.0, 5.0])
    assert maximal_deviation(T.apply(x)) == pytest.approx(2.0)
    assert T.apply(x).coords == pytest.approx(matrix @ x.coords)
