from fractions import Fraction

import numpy as np
import pytest

from exceptions import DimensionMismatch, PreconditionError, RingError
from models import ChainComplex, Ring
from services.chain_algebra import (
    check_d_squared,
    complex_from_entries,
    compose_is_zero,
    dualize,
    homology,
    homology_basis,
    smith_normal_form,
    tensor,
)


def interval(ring=None):
    return ChainComplex(ring or Ring(), {0: ['a', 'b'], 1: ['e']}, {1: {'e': {'b': 1, 'a': -1}}})


def projective_plane(ring=None):
    return ChainComplex(ring or Ring(), {0: ['v'], 1: ['e'], 2: ['f']}, {2: {'f': {'e': 2}}})


class TestSmithNormalForm:

    def test_two_by_two(self):
        diagonal, left, right = smith_normal_form([[2, 4], [6, 8]])
        assert diagonal == [2, 4]

    def test_reconstruction_is_diagonal(self):
        matrix = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
        diagonal, left, right = smith_normal_form(matrix)
        product = np.array(left, dtype=object).dot(np.array(matrix, dtype=object)).dot(np.array(right, dtype=object))
        for i in range(3):
            for j in range(3):
                if i != j:
                    assert product[i, j] == 0
        assert [product[i, i] for i in range(len(diagonal))] == diagonal
        for first, second in zip(diagonal, diagonal[1:]):
            assert second % first == 0

    def test_zero_matrix(self):
        diagonal, _, _ = smith_normal_form([[0, 0], [0, 0]])
        assert diagonal == []

    def test_ragged_matrix_rejected(self):
        with pytest.raises(DimensionMismatch):
            smith_normal_form([[1, 2], [3]])


class TestHomology:

    def test_interval_is_a_point(self):
        summary = homology(interval())
        assert summary.group(0).rank == 1
        assert summary.group(1).is_zero()

    def test_torsion_over_integers(self):
        summary = homology(projective_plane())
        assert summary.group(0).rank == 1
        assert summary.group(1).rank == 0
        assert summary.group(1).torsion == [2]
        assert summary.group(2).is_zero()

    def test_torsion_vanishes_over_odd_prime(self):
        summary = homology(projective_plane(Ring(3)))
        assert summary.ranks() == [1, 0, 0]

    def test_mod_two_sees_both_classes(self):
        summary = homology(projective_plane(Ring(2)))
        assert summary.ranks() == [1, 1, 1]

    def test_exact_through_limits_reported_degrees(self):
        complex_ = ChainComplex(Ring(), {0: ['v'], 1: [], 2: ['f']}, {}, exact_through=1)
        assert [g.degree for g in homology(complex_).groups] == [0, 1]

    def test_non_prime_modulus_rejected(self):
        with pytest.raises(RingError):
            Ring.parse('Z/4')


class TestComposition:

    def test_compose_is_zero(self):
        good = ChainComplex(Ring(), {0: ['v'], 1: ['e'], 2: ['f']}, {2: {'f': {'e': 2}}})
        assert compose_is_zero(good) == (True, None)

    def test_compose_reports_witness(self):
        bad = ChainComplex(Ring(), {0: ['v'], 1: ['e'], 2: ['f']},
                           {1: {'e': {'v': 1}}, 2: {'f': {'e': 1}}})
        ok, witness = compose_is_zero(bad)
        assert not ok
        assert witness == (2, 0, 0, 1)

    def test_compose_reduces_coefficients(self):
        doubled = ChainComplex(Ring(), {0: ['v'], 1: ['e'], 2: ['f']},
                               {1: {'e': {'v': 1}}, 2: {'f': {'e': 2}}})
        assert compose_is_zero(doubled) == (False, (2, 0, 0, 2))
        assert not check_d_squared(doubled)[0]

    def test_check_d_squared_on_mutated_complex(self):
        bad = ChainComplex(Ring(), {0: ['v'], 1: ['e'], 2: ['f']},
                           {1: {'e': {'v': 1}}, 2: {'f': {'e': 1}}})
        ok, witness = check_d_squared(bad)
        assert not ok
        assert witness['degree'] == 2
        assert witness['source'] == 'f'


class TestTensorAndDual:

    def test_square_is_a_point(self):
        square = tensor(interval(), interval())
        assert homology(square).ranks() == [1, 0, 0]

    def test_koszul_sign(self):
        square = tensor(interval(), interval())
        assert square.boundary(2, ('e', 'e')) == {
            ('b', 'e'): 1, ('a', 'e'): -1, ('e', 'b'): -1, ('e', 'a'): 1
        }

    def test_tensor_squares_to_zero(self):
        ok, _ = check_d_squared(tensor(projective_plane(), interval()))
        assert ok

    def test_dual_of_projective_plane(self):
        cochains = dualize(projective_plane())
        assert cochains.cohomological
        summary = homology(cochains)
        assert summary.group(0).rank == 1
        assert summary.group(1).is_zero()
        assert summary.group(2).torsion == [2]

    def test_dualize_twice_is_identity(self):
        original = tensor(interval(), interval())
        twice = dualize(dualize(original))
        for k in original.degrees():
            assert twice.entries(k) == original.entries(k)

    def test_from_entries_layout(self):
        complex_ = complex_from_entries('Z', {'0': ['a', 'b'], '1': ['e']}, {'1': [[0, 0, -1], [1, 0, 1]]})
        assert complex_.boundary(1, 'e') == {'a': -1, 'b': 1}
        with pytest.raises(DimensionMismatch):
            complex_from_entries('Z', {'0': ['a'], '1': ['e']}, {'1': [[3, 0, 1]]})


class TestHomologyBasis:

    def circle(self):
        return ChainComplex(Ring(), {0: ['v', 'w'], 1: ['a', 'b']},
                            {1: {'a': {'w': 1, 'v': -1}, 'b': {'w': 1, 'v': -1}}})

    def test_representative_and_coordinates(self):
        basis = homology_basis(self.circle(), 1)
        assert basis.rank == 1
        rep = basis.representatives[0]
        assert basis.coordinates(rep) == [Fraction(1)]
        assert basis.coordinates({k: 2 * v for k, v in rep.items()}) == [Fraction(2)]

    def test_boundaries_have_zero_coordinates(self):
        basis = homology_basis(self.circle(), 0)
        assert basis.rank == 1
        assert basis.coordinates({'w': 1, 'v': -1}) == [0]

    def test_non_cycle_rejected(self):
        basis = homology_basis(self.circle(), 1)
        with pytest.raises(PreconditionError):
            basis.coordinates({'a': 1})
