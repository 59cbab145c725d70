import pytest

from exceptions import PreconditionError
from models import Ring
from services.algebras import PolynomialAlgebra, SimplicialCochains
from services.hga import (
    BauesHga,
    TrivialHga,
    hirsch_check,
    interleavings,
    merge_sign,
    right_hirsch_defect,
    right_hirsch_witness,
    sq1,
    verify_hga,
)
from services.simplicial import load_space


def baues(reference, ring=None, fault=None):
    return BauesHga(SimplicialCochains(load_space(reference), ring or Ring()), fault=fault)


def test_cup_one_on_a_tetrahedron():
    hga = baues('quotient:3')
    assert hga.E(['012'], '023') == {'0123': -1}
    assert hga.E(['123'], '013') == {'0123': 1}
    assert hga.E(['012'], '013') == {}


def test_empty_argument_list_is_identity():
    hga = baues('quotient:3')
    assert hga.E([], '012') == {'012': 1}


def test_second_operation_tiles_two_blocks():
    hga = baues('quotient:4')
    assert hga.E(['012', '234'], '024')
    assert hga.E(['234', '012'], '024') == {}


def test_interleavings_count():
    assert len(interleavings(1, 1)) == 3
    assert interleavings(0, 1) == [[((), 0)]]
    assert all(sum(len(a) for a, _ in merge) == 2 for merge in interleavings(2, 1))


def test_merge_sign():
    groups = [((), 0), ((0,), None)]
    assert merge_sign(groups, [1], [1]) == -1
    assert merge_sign(groups, [2], [1]) == 1
    assert merge_sign([((0,), 0)], [1], [1]) == 1


@pytest.mark.parametrize('reference,bound', [('s2', 2), ('wedge', 3), ('tetra', 3)])
def test_identities_on_small_spaces(reference, bound):
    assert verify_hga(baues(reference), bound).passed


def test_baues_operations_satisfy_identities():
    certificate = verify_hga(baues('quotient:4'), 4)
    assert certificate.passed, certificate.witnesses
    assert certificate.details['checked'] > 0


def test_baues_identities_mod_two():
    assert verify_hga(baues('quotient:4', Ring(2)), 4).passed


def test_sign_fault_is_caught():
    certificate = verify_hga(baues('quotient:4', fault='baues_sign'), 4)
    assert not certificate.passed
    assert any(w['identity'] == 'composition' for w in certificate.witnesses)


def test_unknown_fault():
    with pytest.raises(PreconditionError):
        baues('s2', fault='swap')


def test_baues_needs_cochains():
    with pytest.raises(PreconditionError):
        BauesHga(PolynomialAlgebra([('x', 2)], Ring(), 6))


def test_trivial_structure_on_commutative_algebra():
    algebra = PolynomialAlgebra([('x', 2), ('y', 3)], Ring(), 8)
    assert verify_hga(TrivialHga(algebra), 6).passed


def test_trivial_structure_fails_without_commutativity():
    algebra = SimplicialCochains(load_space('quotient:4'), Ring())
    certificate = verify_hga(TrivialHga(algebra), 4)
    assert not certificate.passed
    assert any(w['identity'] == 'differential' for w in certificate.witnesses)


@pytest.mark.parametrize('reference,bound', [('s2', 2), ('tetra', 3)])
def test_hirsch_formulas(reference, bound):
    assert hirsch_check(baues(reference), bound).passed


def test_hirsch_formulas_on_quotient():
    certificate = hirsch_check(baues('quotient:5'), 5)
    assert certificate.passed, certificate.witnesses
    assert certificate.details['checked'] > 0


def test_right_hirsch_formula_fails_strictly():
    hga = baues('quotient:5')
    assert right_hirsch_defect(hga, {'012': 1}, {'234': 1}, {'045': 1}) == {'012345': -1}
    witness = right_hirsch_witness(hga, 5)
    assert witness is not None
    assert witness['defect']


def test_sq1_of_even_class():
    result = sq1(baues('s2'), {'sigma': 1})
    assert result['defined']
    assert result['degree'] == 3
    assert result['vanishes']


def test_sq1_of_odd_class():
    result = sq1(baues('wedge'), {'b': 1})
    assert result['defined']
    assert result['vanishes']


def test_sq1_needs_a_cocycle():
    with pytest.raises(PreconditionError):
        sq1(baues('quotient:3'), {'012': 1})


def test_describe():
    description = baues('s2', fault='baues_sign').describe()
    assert description['provenance'] == 'baues [baues_sign]'
    assert description['ring'] == 'Z'
