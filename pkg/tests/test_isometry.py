"""Tests for module isometry."""
import numpy as np
import pytest

from jordan_cone.core.algebra import AlgebraDescriptor, Element, jordan_product, unit
from jordan_cone.core.cone import ray_distance, ray_equal, ray_of
from jordan_cone.core.dual import Functional
from jordan_cone.core.errors import (
    AlgebraMismatch,
    EvaluationBudgetExceeded,
    InvalidIsometry,
)
from jordan_cone.core.isometry import (
    AffineVariationIsometry,
    BlackBoxLinearMap,
    BlackBoxRayMap,
    HilbertIsometry,
    IsometryGroupClass,
    JordanIsomorphism,
    VariationIsometry,
    are_jordan_isomorphic,
    atom_coatom_criterion,
    classify_isometry_group,
    conjugated_projectivity,
    inversion_isometry,
    max_spectrum_size,
    sample_affine_isometry,
    sample_hilbert_isometry,
    sample_jordan_iso,
    simple_factors,
    two_atoms_join_to_unit,
    verify_jordan_iso,
)
from jordan_cone.core.sampling import Rng, sample_element, sample_interior
from jordan_cone.core.spectral import class_of, variation_seminorm

DIAG3 = AlgebraDescriptor.diagonal(3)
SPIN2 = AlgebraDescriptor.spin(2)


def test_permutation_moves_coordinates_forward():
    J = JordanIsomorphism(DIAG3, perm=(1, 2, 0))
    assert J.apply(Element(DIAG3, [1, 2, 4])).coords.tolist() == [4.0, 1.0, 2.0]
    assert J.inverse().apply(Element(DIAG3, [4, 1, 2])).coords.tolist() == [1.0, 2.0, 4.0]


def test_invalid_isomorphism_payloads():
    with pytest.raises(InvalidIsometry):
        JordanIsomorphism(DIAG3, perm=(0, 0, 1))
    with pytest.raises(InvalidIsometry):
        JordanIsomorphism(SPIN2, orth=np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(InvalidIsometry):
        JordanIsomorphism(SPIN2, orth=np.eye(3))
    mixed = AlgebraDescriptor.parse("sum(diag:2,spin:2)")
    with pytest.raises(InvalidIsometry):
        JordanIsomorphism(
            mixed,
            summand_map=(1, 0),
            components=(JordanIsomorphism.identity(mixed.summands[0]), JordanIsomorphism.identity(mixed.summands[1])),
        )


def test_sampled_isomorphisms_are_jordan(algebra, rng):
    for _ in range(3):
        J = sample_jordan_iso(algebra, rng)
        assert verify_jordan_iso(J, samples=16, seed=2)
        x = sample_element(algebra, rng)
        assert J.inverse().apply(J.apply(x)).coords == pytest.approx(x.coords, abs=1e-12)


def test_compose_matches_sequential_application(algebra, rng):
    J, K = sample_jordan_iso(algebra, rng), sample_jordan_iso(algebra, rng)
    x = sample_element(algebra, rng)
    assert J.compose(K).apply(x).coords == pytest.approx(J.apply(K.apply(x)).coords, abs=1e-12)
    assert J.compose(K).matrix == pytest.approx(J.matrix @ K.matrix, abs=1e-12)


def test_isomorphism_json_round_trip(algebra, rng):
    J = sample_jordan_iso(algebra, rng)
    restored = JordanIsomorphism.from_dict(J.to_dict())
    assert restored.matrix == pytest.approx(J.matrix)


def test_non_jordan_map_rejected():
    class Scaled(JordanIsomorphism):
        def apply_coords(self, a):
            return 2.0 * a

    assert not verify_jordan_iso(Scaled(DIAG3, perm=(0, 1, 2)), samples=4)


def test_sym_conjugation_preserves_products():
    sym3 = AlgebraDescriptor.sym(3)
    J = sample_jordan_iso(sym3, Rng(4))
    rng = Rng(5)
    x, y = sample_element(sym3, rng), sample_element(sym3, rng)
    assert J.apply(jordan_product(x, y)).coords == pytest.approx(
        jordan_product(J.apply(x), J.apply(y)).coords, abs=1e-10
    )
    assert J.apply(unit(sym3)).coords == pytest.approx(unit(sym3).coords, abs=1e-12)


def test_hilbert_isometry_preserves_distance(algebra, rng):
    for _ in range(5):
        f = sample_hilbert_isometry(algebra, rng)
        r1, r2 = ray_of(sample_interior(algebra, rng)), ray_of(sample_interior(algebra, rng))
        assert ray_distance(f(r1), f(r2)) == pytest.approx(ray_distance(r1, r2), abs=1e-8)


def test_hilbert_isometry_validation():
    J = JordanIsomorphism.identity(DIAG3)
    with pytest.raises(InvalidIsometry):
        HilbertIsometry(0, unit(DIAG3), J)
    with pytest.raises(InvalidIsometry):
        HilbertIsometry(1, Element(DIAG3, [1, 0, 1]), J)
    with pytest.raises(AlgebraMismatch):
        HilbertIsometry(1, unit(SPIN2), J)
    f = HilbertIsometry(1, unit(DIAG3), J)
    with pytest.raises(AlgebraMismatch):
        f(ray_of(unit(SPIN2)))


def test_hilbert_isometry_json_round_trip(rng):
    f = sample_hilbert_isometry(DIAG3, rng)
    g = HilbertIsometry.from_dict(f.to_dict())
    r = ray_of(sample_interior(DIAG3, rng))
    assert ray_equal(f(r), g(r))
    with pytest.raises(InvalidIsometry):
        HilbertIsometry.from_dict({"epsilon": 1})


def test_conjugated_projectivity():
    tau = HilbertIsometry(1, Element(DIAG3, [1, 2, 4]), JordanIsomorphism.identity(DIAG3))
    conjugated = conjugated_projectivity(tau)
    assert conjugated.epsilon == 1
    assert conjugated.y.coords == pytest.approx([1.0, 0.5, 0.25])

    iota = inversion_isometry(DIAG3)
    r = ray_of(Element(DIAG3, [1, 3, 5]))
    assert ray_equal(conjugated(r), iota(tau(iota(r))))
    with pytest.raises(InvalidIsometry):
        conjugated_projectivity(iota)


def test_variation_isometry_preserves_seminorm(algebra, rng):
    for _ in range(5):
        S = VariationIsometry.from_canonical(rng.sign(), sample_jordan_iso(algebra, rng))
        cls = class_of(sample_element(algebra, rng))
        assert S.apply(cls).norm == pytest.approx(cls.norm, abs=1e-9)


def test_variation_isometry_shape_check():
    with pytest.raises(InvalidIsometry):
        VariationIsometry(np.eye(2), DIAG3)


def test_affine_isometry_matrix_matches_apply(algebra, rng):
    T = sample_affine_isometry(algebra, rng)
    x = sample_element(algebra, rng)
    assert (T.matrix @ x.coords) == pytest.approx(T.apply(x).coords, abs=1e-10)
    assert variation_seminorm(T.apply(x)) == pytest.approx(variation_seminorm(x), abs=1e-9)


def test_affine_isometry_example():
    T = AffineVariationIsometry(-1, JordanIsomorphism.identity(DIAG3), Functional(Element(DIAG3, [1, 1, 1]) / 3.0))
    x = Element(DIAG3, [3.0, 0.0, 0.0])
    assert T.apply(x).coords == pytest.approx([-2.0, 1.0, 1.0])
    restored = AffineVariationIsometry.from_dict(T.to_dict())
    assert restored.matrix == pytest.approx(T.matrix)


def test_black_box_budgets():
    ray_map = BlackBoxRayMap(lambda r: r, DIAG3, budget=2)
    r = ray_of(unit(DIAG3))
    ray_map(r)
    ray_map(r)
    with pytest.raises(EvaluationBudgetExceeded):
        ray_map(r)

    linear = BlackBoxLinearMap(lambda x: x, DIAG3)
    assert linear.budget == DIAG3.dim ** 2 + 1000
    assert linear.materialize() == pytest.approx(np.eye(3))
    assert linear.evaluations == 3


@pytest.mark.parametrize(
    "text, expected",
    [
        ("diag:2", IsometryGroupClass.PROJECTIVITIES_ONLY),
        ("spin:5", IsometryGroupClass.PROJECTIVITIES_ONLY),
        ("sym:2", IsometryGroupClass.PROJECTIVITIES_ONLY),
        ("sym:3", IsometryGroupClass.SEMIDIRECT_WITH_C2),
        ("diag:3", IsometryGroupClass.SEMIDIRECT_WITH_C2),
        ("sum(spin:2,diag:2)", IsometryGroupClass.SEMIDIRECT_WITH_C2),
    ],
)
def test_isometry_group_classification(text, expected):
    algebra = AlgebraDescriptor.parse(text)
    assert classify_isometry_group(algebra) is expected


def test_rank_two_criteria_agree(algebra):
    rank_two = algebra.rank == 2
    assert (max_spectrum_size(algebra) == 2) is rank_two
    assert atom_coatom_criterion(algebra) is rank_two
    assert two_atoms_join_to_unit(algebra) is rank_two


def test_simple_factors_and_isomorphism():
    assert simple_factors(AlgebraDescriptor.parse("sym:2")) == (("Spin", 2),)
    assert are_jordan_isomorphic(AlgebraDescriptor.parse("sym:2"), SPIN2)
    assert are_jordan_isomorphic(
        AlgebraDescriptor.parse("sum(diag:2,spin:3)"), AlgebraDescriptor.parse("sum(spin:3,diag:2)")
    )
    assert not are_jordan_isomorphic(DIAG3, AlgebraDescriptor.parse("sum(diag:2,diag:2)"))
    assert not are_jordan_isomorphic(DIAG3, AlgebraDescriptor.sym(3))
