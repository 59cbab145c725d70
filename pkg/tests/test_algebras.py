import pytest

from exceptions import DegreeError
from models import Ring
from services.algebras import ExampleOneAlgebra, PolynomialAlgebra, SimplicialCochains
from services.chain_algebra import add_scaled, check_d_squared, homology, reduce_chain
from services.simplicial import load_space, quotient_simplex


@pytest.fixture
def cochains():
    return SimplicialCochains(quotient_simplex(5), Ring())


def test_cup_product_reads_front_and_back(cochains):
    assert cochains.product('012', '234') == {'01234': 1}
    assert cochains.product('234', '012') == {}
    assert cochains.product('0123', '345') == {'012345': 1}


def test_unit(cochains):
    assert cochains.unit == 'v'
    assert cochains.product('v', '0124') == {'0124': 1}
    assert cochains.product('135', 'v') == {'135': 1}


def test_coboundary_sign():
    algebra = SimplicialCochains(quotient_simplex(3), Ring())
    assert algebra.differential('012') == {'0123': -1}
    assert algebra.differential('123') == {'0123': 1}
    assert algebra.differential('023') == {'0123': -1}


def test_cochains_square_to_zero(cochains):
    assert check_d_squared(cochains.cochain_complex())[0]


def test_leibniz_rule(cochains):
    for a in cochains.basis(2):
        for b in cochains.basis(2):
            lhs = cochains.d(cochains.mul({a: 1}, {b: 1}))
            rhs = cochains.mul(cochains.d({a: 1}), {b: 1})
            add_scaled(rhs, cochains.mul({a: 1}, cochains.d({b: 1})))
            add_scaled(rhs, lhs, -1)
            assert not reduce_chain(rhs, cochains.ring), (a, b)


def test_cochain_cohomology_of_sphere():
    algebra = SimplicialCochains(load_space('s2'), Ring())
    assert algebra.is_one_reduced()
    assert homology(algebra.cochain_complex()).ranks() == [1, 0, 1]


def test_cochains_are_not_commutative(cochains):
    assert cochains.commutativity_defect(4) is not None


def test_polynomial_basis():
    algebra = PolynomialAlgebra([('x', 2), ('y', 4)], Ring(), 8)
    assert algebra.basis(0) == ['1']
    assert algebra.basis(3) == []
    assert algebra.basis(4) == ['x^2', 'y']
    assert algebra.basis(8) == ['x^4', 'x^2*y', 'y^2']
    assert algebra.product('x', 'x^2*y') == {'x^3*y': 1}


def test_exterior_generators_depend_on_ring():
    assert PolynomialAlgebra([('a', 3)], Ring(), 9).basis(6) == []
    assert PolynomialAlgebra([('a', 3)], Ring(2), 9).basis(6) == ['a^2']


def test_odd_generators_anticommute():
    algebra = PolynomialAlgebra([('a', 3), ('b', 3)], Ring(), 6)
    assert algebra.basis(3) == ['a', 'b']
    assert algebra.product('a', 'b') == {'a*b': 1}
    assert algebra.product('b', 'a') == {'a*b': -1}
    assert algebra.product('a', 'a') == {}
    assert algebra.commutativity_defect() is None


def test_polynomial_generators_need_positive_degree():
    with pytest.raises(DegreeError):
        PolynomialAlgebra([('x', 0)], Ring(), 4)


def test_inhomogeneous_element():
    algebra = PolynomialAlgebra([('x', 2)], Ring(), 6)
    algebra.basis(4)
    with pytest.raises(DegreeError):
        algebra.degree_of({'x': 1, 'x^2': 1})


def test_example_one_differential():
    algebra = ExampleOneAlgebra(Ring(), 7)
    assert algebra.differential('Z') == {'XY': 1, 'YX': 1, 'x': 1}
    assert algebra.differential('ZZ') == {'XYZ': 1, 'YXZ': 1, 'ZXY': -1, 'ZYX': -1}
    assert algebra.differential('XZ') == {'XYX': -1, 'x*X': -1}


@pytest.mark.parametrize('perturbed', [True, False])
def test_example_one_squares_to_zero(perturbed):
    algebra = ExampleOneAlgebra(Ring(), 7, perturbed=perturbed)
    assert check_d_squared(algebra.cochain_complex(5))[0]


def test_example_one_low_cohomology():
    algebra = ExampleOneAlgebra(Ring(), 7)
    assert len(algebra.basis(2)) == 9
    assert homology(algebra.cochain_complex(3)).ranks()[:3] == [1, 2, 5]
