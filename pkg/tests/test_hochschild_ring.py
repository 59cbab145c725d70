import pytest

from exceptions import PreconditionError
from models import Ring
from services.algebras import PolynomialAlgebra, SimplicialCochains
from services.hga import BauesHga, TrivialHga
from services.hochschild_ring import (
    HochschildRing,
    check_associativity,
    check_chain_map,
    check_phi3,
    check_shuffle_oracle,
    describe_shape,
    example1,
    formula_shapes,
    hh_ring,
    shuffle,
    theorem1_check,
)
from services.simplicial import load_space


def baues_ring(reference):
    return HochschildRing(BauesHga(SimplicialCochains(load_space(reference), Ring())))


def trivial_ring(generators, ring=None, top=8):
    return HochschildRing(TrivialHga(PolynomialAlgebra(generators, ring or Ring(), top)))


def test_single_letter_terms():
    shapes = formula_shapes(1, 1)
    assert len(shapes) == 6
    assert {describe_shape(s, 1, 1) for s in shapes} == {
        'u*v (x) mu([a1],[b1])',
        'u*E(a1;v) (x) mu([],[b1])',
        'E(u;b1)*v (x) mu([a1],[])',
        'E(u;b1)*E(a1;v) (x) mu([],[])',
        'E(u,a1;b1)*v (x) mu([],[])',
        'E(a1,u;b1)*v (x) mu([],[])',
    }


def test_second_sum_needs_a_right_letter():
    assert formula_shapes(2, 0) == [('first', 0), ('first', 1), ('first', 2)]


def test_degree_zero_words_multiply_in_the_algebra():
    ring_ = baues_ring('quotient:4')
    assert ring_.lambda_E(('012', ()), ('234', ())) == {('01234', ()): 1}


def test_unit_on_both_sides():
    ring_ = baues_ring('quotient:4')
    x = ('012', ('234',))
    assert ring_.lambda_E(ring_.unit, x) == {x: 1}
    assert ring_.lambda_E(x, ring_.unit) == {x: 1}


def test_bar_product_of_single_letters_on_trivial_carrier():
    ring_ = trivial_ring([('x', 2), ('y', 2)])
    assert ring_.mu_E(('y',), ('x',)) == {('y', 'x'): 1, ('x', 'y'): -1}
    assert ring_.lambda_E(('x', ('y',)), ('y', ('x',))) == {('x*y', ('y', 'x')): 1, ('x*y', ('x', 'y')): -1}


def test_empty_word_is_the_bar_unit():
    ring_ = trivial_ring([('x', 2)])
    assert ring_.mu_E((), ('x', 'x')) == {('x', 'x'): 1}


def test_recursive_shuffle():
    algebra = PolynomialAlgebra([('x', 2), ('y', 3)], Ring(), 6)
    assert shuffle(algebra, ('x',), ('y',)) == {('x', 'y'): 1, ('y', 'x'): 1}
    assert shuffle(algebra, ('x',), ('x',)) == {}


@pytest.mark.parametrize('generators,ring,bound', [
    ([('x', 2)], Ring(), 6),
    ([('x', 2), ('y', 3)], Ring(), 5),
    ([('x', 3)], Ring(2), 6),
])
def test_lambda_is_the_shuffle_product_on_trivial_carriers(generators, ring, bound):
    certificate = check_shuffle_oracle(trivial_ring(generators, ring, bound + 1), bound)
    assert certificate.passed, certificate.witnesses
    assert certificate.details['checked'] > 0


def test_shuffle_oracle_needs_trivial_carrier():
    with pytest.raises(PreconditionError):
        check_shuffle_oracle(baues_ring('s2'), 3)


@pytest.mark.parametrize('ring_,bound', [
    (lambda: trivial_ring([('x', 2)], top=7), 6),
    (lambda: trivial_ring([('x', 2), ('y', 2)], top=5), 4),
    (lambda: trivial_ring([('x', 3)], Ring(2), top=6), 5),
    (lambda: baues_ring('s2'), 8),
    (lambda: baues_ring('wedge'), 8),
    (lambda: baues_ring('tetra'), 8),
])
def test_lambda_is_a_chain_map(ring_, bound):
    certificate = check_chain_map(ring_(), bound)
    assert certificate.passed, certificate.witnesses


@pytest.mark.parametrize('ring_', [
    lambda: trivial_ring([('x', 2), ('y', 3)], top=6),
    lambda: baues_ring('s2'),
])
def test_bar_product_is_associative(ring_):
    certificate = check_associativity(ring_(), 5, max_length=3)
    assert certificate.passed, certificate.witnesses
    assert certificate.details['checked'] > 0


@pytest.mark.parametrize('ring_,bound', [
    (lambda: trivial_ring([('x', 2)], top=9), 8),
    (lambda: baues_ring('s2'), 6),
    (lambda: baues_ring('tetra'), 6),
])
def test_bar_product_is_associative_on_four_letter_words(ring_, bound):
    certificate = check_associativity(ring_(), bound, max_length=4)
    assert certificate.passed, certificate.witnesses
    assert certificate.params['max_length'] == 4
    assert certificate.details['checked'] > 0


def test_cup_one_term_of_single_letter_words():
    ring_ = baues_ring('tetra')
    assert ring_.hga.E(['a'], 'b') == {'T': 1}
    assert ring_.mu_E(('a',), ('b',)) == {('a', 'b'): 1, ('b', 'a'): -1, ('T',): 1}
    assert ring_.lambda_E(('v', ('a',)), ('v', ('b',))) == {('v', ('a', 'b')): 1, ('v', ('b', 'a')): -1,
                                                           ('v', ('T',)): 1}


def test_coefficient_absorbs_a_letter():
    ring_ = baues_ring('tetra')
    assert ring_.lambda_E(('v', ('a',)), ('b', ())) == {('b', ('a',)): 1, ('T', ()): -1}
    assert ring_.lambda_E(('v', ('b',)), ('a', ())) == {('a', ('b',)): 1, ('T', ()): 1}


def test_associator_is_the_right_hirsch_defect():
    ring_ = baues_ring('quotient:5')
    x, y, z = {('012', ()): 1}, {('234', ()): 1}, {('v', ('045',)): 1}
    assert ring_.associator(x, y, z) == {('012345', ()): -1}
    assert ring_.phi3(x, y, z) == {(label, ()): c for label, c in ring_.hga.E(['012', '234'], '045').items()}


def test_phi3_kills_the_associator_on_cocycles():
    certificate = check_phi3(baues_ring('quotient:5'), 5)
    assert certificate.passed, certificate.witnesses
    assert certificate.details['checked'] > 0
    assert certificate.details['associator_witness'] is not None


def test_phi3_vanishes_off_its_shapes():
    ring_ = baues_ring('quotient:5')
    assert ring_.phi3({('012', ()): 1}, {('234', ()): 1}, {('045', ()): 1}) == {}


def test_trivial_carrier_is_associative():
    ring_ = trivial_ring([('x', 2)])
    x = {('x', ()): 1}
    z = {('1', ('x',)): 1}
    assert ring_.associator(x, x, z) == {}
    assert ring_.phi3(x, x, z) == {}


def test_unverified_carrier_is_rejected():
    with pytest.raises(PreconditionError):
        HochschildRing(TrivialHga(SimplicialCochains(load_space('quotient:4'), Ring())))


def test_hochschild_ring_of_polynomial_algebra():
    presentation = hh_ring(TrivialHga(PolynomialAlgebra([('x', 2)], Ring(), 7)), 6)
    data = presentation.to_dict()
    assert data['poincare'] == [1] * 7
    assert data['torsion'] == {}
    assert presentation.generators == [{'name': 'h1.0', 'degree': 1}, {'name': 'h2.0', 'degree': 2}]
    assert presentation.flags['well_defined']
    assert any(p['left'] == 'h2.0' and p['right'] == 'h2.0' for p in presentation.products)


def test_hochschild_ring_of_ground_ring():
    presentation = hh_ring(TrivialHga(PolynomialAlgebra([], Ring(), 4)), 3)
    assert presentation.to_dict()['poincare'] == [1, 0, 0, 0]
    assert presentation.generators == []


def test_hochschild_ring_is_deterministic():
    first = hh_ring(TrivialHga(PolynomialAlgebra([('x', 2)], Ring(2), 6)), 5).to_dict()
    second = hh_ring(TrivialHga(PolynomialAlgebra([('x', 2)], Ring(2), 6)), 5).to_dict()
    assert first == second


@pytest.mark.parametrize('generators,ring,bound', [
    ([('x', 2)], Ring(), 8),
    ([('x', 2), ('y', 2)], Ring(), 8),
    ([('x', 3)], Ring(2), 7),
])
def test_hh_of_free_algebra_matches_reference(generators, ring, bound):
    certificate = theorem1_check(generators, ring, bound)
    assert certificate.passed, certificate.witnesses
    poincare = certificate.details['poincare']
    assert poincare['hochschild'] == poincare['reference']


def test_correspondence_of_one_generator():
    certificate = theorem1_check([('x', 2)], Ring(), 6)
    assert certificate.details['poincare']['hochschild'] == [1] * 7
    assert certificate.details['correspondence'] == {'sx': '(1,(x))', 'x': '(x,())'}


def test_correspondence_of_two_generators_through_degree_eight():
    certificate = theorem1_check([('x', 2), ('y', 2)], Ring(), 8)
    assert certificate.passed, certificate.witnesses
    assert certificate.details['poincare']['hochschild'] == list(range(1, 10))
    assert certificate.details['checked'] > 0


def test_correspondence_needs_even_generators_over_integers():
    with pytest.raises(PreconditionError):
        theorem1_check([('x', 3)], Ring(), 6)


def test_closing_example_differs_from_the_reference():
    report = example1(Ring(), 4)
    assert report['poincare']['C'][:3] == [1, 2, 5]
    assert report['poincare']['reference'][:3] == [1, 2, 3]
    assert not report['additive_match']
    assert report['anticommutator_rank'] == {'C': 1, 'reference': 0}
    assert report['ring_distinguished']


def test_closing_example_bound():
    with pytest.raises(PreconditionError):
        example1(Ring(), 11)
