"""Tests for module dual."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from jordan_cone.core.algebra import AlgebraDescriptor, Element, Projection, jordan_frame, unit
from jordan_cone.core import dual as dual_module
from jordan_cone.core.errors import InvalidFace, InvariantViolation, NotInHyperplane, NotPositive
from jordan_cone.core.sampling import Rng, sample_element
from jordan_cone.core.dual import (
    FaceDescriptor,
    Functional,
    attains_norm_on_face,
    diameter_witness,
    dual_ball_vertices_diagonal,
    dual_norm,
    dual_norm_bruteforce_diagonal,
    deviation_under,
    deviation_witness,
    every_orthogonal_pair,
    every_projection,
    extreme_point_check,
    face_contains,
    face_diameter_le_2,
    face_value,
    functionals_orthogonal,
    is_maximal_face,
    is_positive,
    maximal_face,
    norming_class_of_face,
    orthogonal_by_norm,
    orthogonal_decomposition,
    projection_join,
    projection_leq,
    sample_face_element,
    sampled_face_diameter,
    sample_state_on,
    sampled_maximal_deviation,
    state_of,
    support_projection,
)
from jordan_cone.core.spectral import class_of, maximal_deviation

DIAG3 = AlgebraDescriptor.diagonal(3)
DIAG4 = AlgebraDescriptor.diagonal(4)
SPIN2 = AlgebraDescriptor.spin(2)

coordinate = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)


def functional(algebra, coords):
    return Functional(Element(algebra, coords))


def projection(algebra, coords):
    return Projection.certify(Element(algebra, coords))


def test_spin_decomposition_and_norm():
    phi = functional(SPIN2, [3.0, 4.0, 0.0])
    positive, negative = orthogonal_decomposition(phi)
    assert positive.representer.coords == pytest.approx([1.5, 2.0, 2.5])
    assert negative.representer.coords == pytest.approx([-1.5, -2.0, 2.5])
    assert dual_norm(phi) == pytest.approx(10.0)
    assert dual_norm(phi) == pytest.approx(positive.at_unit() + negative.at_unit())
    assert functionals_orthogonal(positive, negative)


def test_decomposition_recombines(algebra, rng):
    for _ in range(10):
        phi = Functional(sample_element(algebra, rng))
        positive, negative = orthogonal_decomposition(phi)
        assert (positive - negative).representer.coords == pytest.approx(phi.representer.coords, abs=1e-9)
        assert is_positive(positive) and is_positive(negative)
        assert dual_norm(phi) == pytest.approx(dual_norm(positive) + dual_norm(negative), rel=1e-9)


@settings(max_examples=80, deadline=None)
@given(arrays(np.float64, (4,), elements=coordinate))
def test_dual_norm_matches_bruteforce_on_diagonal(coords):
    phi = functional(DIAG4, coords)
    assert dual_norm(phi) == pytest.approx(dual_norm_bruteforce_diagonal(phi), abs=1e-9)


def test_bruteforce_oracle_is_diagonal_only():
    with pytest.raises(ValueError):
        dual_norm_bruteforce_diagonal(functional(SPIN2, [1, 0, 0]))


def test_support_projection():
    p = support_projection(functional(DIAG3, [2.0, 0.0, 0.5]))
    assert p.element.coords.tolist() == [1.0, 0.0, 1.0]
    assert p.rank == 2
    with pytest.raises(NotPositive):
        support_projection(functional(DIAG3, [1.0, -1.0, 0.0]))


def test_state_purity():
    assert state_of(functional(DIAG3, [0.0, 1.0, 0.0])).is_pure
    assert not state_of(functional(DIAG3, [0.5, 0.5, 0.0])).is_pure
    assert state_of(functional(SPIN2, [0.3, 0.4, 0.5])).is_pure
    with pytest.raises(NotPositive):
        state_of(functional(DIAG3, [1.0, 1.0, 0.0]))


def test_orthogonality_two_ways():
    phi = functional(DIAG3, [1, 0, 0])
    psi = functional(DIAG3, [0, 1, 0])
    assert functionals_orthogonal(phi, psi)
    assert orthogonal_by_norm(phi, psi)
    assert dual_norm(phi - psi) == pytest.approx(2.0)

    overlapping = functional(DIAG3, [0.5, 0.5, 0])
    assert not functionals_orthogonal(phi, overlapping)
    assert not orthogonal_by_norm(phi, overlapping)


def test_orthogonality_tests_agree(algebra, rng):
    atom = jordan_frame(algebra)[0]
    for _ in range(10):
        p = sample_state_on(atom, rng)
        q = sample_state_on(atom.complement(), rng)
        assert functionals_orthogonal(p, q)
        assert orthogonal_by_norm(p, q)


def test_extreme_points():
    assert extreme_point_check(functional(DIAG3, [1.0, -1.0, 0.0]))
    assert not extreme_point_check(functional(DIAG3, [1.0, -0.5, -0.5]))
    assert not extreme_point_check(functional(DIAG3, [0.5, -0.5, 0.0]))
    with pytest.raises(NotInHyperplane):
        extreme_point_check(functional(DIAG3, [1.0, 0.0, 0.0]))


def test_spin_extreme_point():
    # difference of the two atoms of a Spin frame
    assert extreme_point_check(functional(SPIN2, [1.0, 0.0, 0.0]))
    assert extreme_point_check(functional(SPIN2, [0.6, 0.8, 0.0]))
    assert not extreme_point_check(functional(SPIN2, [0.5, 0.0, 0.0]))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_vertex_enumeration(n):
    vertices = dual_ball_vertices_diagonal(n)
    assert len(vertices) == n * (n - 1)
    for phi in vertices:
        assert extreme_point_check(phi)
        assert dual_norm(phi) == pytest.approx(2.0)


def test_vertex_enumeration_range():
    with pytest.raises(ValueError):
        dual_ball_vertices_diagonal(5)


def test_face_descriptor_validation():
    p = projection(DIAG3, [1, 0, 0])
    with pytest.raises(InvalidFace):
        FaceDescriptor(p, p)
    with pytest.raises(InvalidFace):
        FaceDescriptor(p, Projection.trusted(Element(DIAG3, [0, 0, 0]), 0))
    with pytest.raises(InvalidFace):
        maximal_face(Projection.trusted(unit(DIAG3), 3))
    face = maximal_face(p)
    assert face.maximal
    assert is_maximal_face(face)
    assert not is_maximal_face(FaceDescriptor(projection(DIAG4, [1, 0, 0, 0]), projection(DIAG4, [0, 1, 0, 0])))
    assert face.q.element.coords.tolist() == [0.0, 1.0, 1.0]


def test_face_json_round_trip_defaults_to_maximal():
    face = FaceDescriptor.from_dict({"p": Element(DIAG3, [1, 0, 0]).to_dict()})
    assert face.maximal
    assert face.to_dict()["q"]["coords"] == [0.0, 1.0, 1.0]


def test_face_diameter_on_diagonal4():
    atom_face = FaceDescriptor(projection(DIAG4, [1, 0, 0, 0]), projection(DIAG4, [0, 1, 1, 0]))
    assert face_diameter_le_2(atom_face, samples=16, seed=3)
    assert diameter_witness(atom_face) is None
    assert sampled_face_diameter(atom_face, samples=16, seed=3) <= 2 + 1e-8

    wide_face = FaceDescriptor(projection(DIAG4, [1, 1, 0, 0]), projection(DIAG4, [0, 0, 1, 1]))
    assert not face_diameter_le_2(wide_face, samples=16, seed=3)
    first, second = diameter_witness(wide_face)
    assert dual_norm(first - second) == pytest.approx(4.0)
    assert sampled_face_diameter(wide_face, samples=16, seed=3) == pytest.approx(4.0)
    assert face_contains(wide_face, first)
    assert face_contains(wide_face, second)


def test_sampled_face_points_stay_in_face(rng):
    face = FaceDescriptor(projection(DIAG4, [1, 1, 0, 0]), projection(DIAG4, [0, 0, 1, 0]))
    for _ in range(10):
        phi = sample_face_element(face, rng)
        assert face_contains(face, phi)
        assert phi.at_unit() == pytest.approx(0.0, abs=1e-12)
        assert dual_norm(phi) == pytest.approx(2.0)


def test_face_value_on_maximal_face():
    p = projection(DIAG3, [1, 0, 0])
    phi = functional(DIAG3, [1.0, 0.0, 0.0])
    psi = functional(DIAG3, [0.0, 0.5, 0.5])
    assert face_value(p, phi - psi) == pytest.approx(1.0)
    assert attains_norm_on_face(p, maximal_face(p), samples=16, seed=5)


def test_norming_class_uniqueness():
    """Only [p] attains 1 on all of G_p; every other projection class falls short somewhere."""
    for p in every_projection(DIAG3):
        face = maximal_face(p)
        assert norming_class_of_face(face).equals(class_of(p.element))
        for q in every_projection(DIAG3):
            attains = attains_norm_on_face(q, face, samples=8, seed=1)
            assert attains == bool(np.allclose(q.element.coords, p.element.coords))


def test_norming_class_needs_maximal_face():
    face = FaceDescriptor(projection(DIAG4, [1, 0, 0, 0]), projection(DIAG4, [0, 1, 0, 0]))
    with pytest.raises(InvalidFace):
        norming_class_of_face(face)


def test_exhaustive_enumerations():
    assert len(every_projection(DIAG3)) == 6
    assert len(every_orthogonal_pair(DIAG3)) == 12
    assert len(every_orthogonal_pair(AlgebraDescriptor.diagonal(2))) == 2
    with pytest.raises(ValueError):
        every_projection(SPIN2)


def test_projection_lattice():
    a = projection(DIAG3, [1, 0, 0])
    b = projection(DIAG3, [0, 1, 0])
    join = projection_join(a, b)
    assert join.element.coords == pytest.approx([1.0, 1.0, 0.0])
    assert join.rank == 2
    assert projection_leq(a, join)
    assert not projection_leq(join, a)


def test_state_sampler_lands_on_projection():
    rng = Rng(8)
    p = projection(DIAG3, [1, 1, 0])
    for _ in range(5):
        phi = sample_state_on(p, rng)
        assert phi.at_unit() == pytest.approx(1.0)
        assert phi(p.element) == pytest.approx(1.0)
        assert support_projection(phi).element.coords == pytest.approx([1.0, 1.0, 0.0])


def test_face_diameter_disagreement_raises(monkeypatch):
    atom_face = FaceDescriptor(projection(DIAG4, [1, 0, 0, 0]), projection(DIAG4, [0, 1, 1, 0]))
    monkeypatch.setattr(dual_module, "sampled_face_diameter", lambda *args, **kwargs: 4.0)
    with pytest.raises(InvariantViolation):
        face_diameter_le_2(atom_face, samples=4, seed=0)


def test_deviation_under_pure_and_mixed_states():
    x = Element(DIAG3, [1.0, 2.0, 5.0])
    assert deviation_under(functional(DIAG3, [0.0, 1.0, 0.0]), x) == pytest.approx(0.0)
    assert deviation_under(functional(DIAG3, [0.5, 0.0, 0.5]), x) == pytest.approx(2.0)
    assert deviation_under(functional(DIAG3, [0.5, 0.5, 0.0]), x) == pytest.approx(0.5)
    with pytest.raises(NotPositive):
        deviation_under(functional(DIAG3, [1.0, -0.5, 0.5]), x)


def test_deviation_witness_attains_maximum(algebra, rng):
    for _ in range(5):
        x = sample_element(algebra, rng)
        witness = deviation_witness(x)
        assert witness.at_unit() == pytest.approx(1.0)
        assert is_positive(witness)
        assert deviation_under(witness, x) == pytest.approx(maximal_deviation(x), rel=1e-9, abs=1e-9)


def test_sampled_states_never_exceed_closed_form(algebra, rng):
    x = sample_element(algebra, rng)
    assert sampled_maximal_deviation(x, samples=32, seed=4) == pytest.approx(maximal_deviation(x), rel=1e-9, abs=1e-9)
    rng_states = Rng(6)
    whole = Projection.trusted(unit(algebra), algebra.rank)
    for _ in range(10):
        assert deviation_under(sample_state_on(whole, rng_states), x) <= maximal_deviation(x) + 1e-9


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (SPIN2.dim,), elements=coordinate))
def test_spin_deviation_is_radius(coords):
    x = Element(SPIN2, coords)
    assert sampled_maximal_deviation(x, samples=8, seed=1) == pytest.approx(np.linalg.norm(coords[:-1]), abs=1e-7)
