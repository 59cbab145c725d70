import pytest

from exceptions import UnknownBlock
from models import Ring
from services import freehedra
from services.chain_algebra import check_d_squared, homology
from services.fn_sets import (
    FreehedronSet,
    MutatedFnSet,
    TableFnSet,
    check_cubical_subset,
    coalgebra,
    face_words,
    materialize,
    normalized_chains,
    verify_fnset,
)


@pytest.mark.parametrize('m,n', [(2, 0), (3, 0), (1, 1), (2, 1), (0, 2), (1, 2)])
def test_block_model_satisfies_identities(m, n):
    certificate = verify_fnset(FreehedronSet(m, n), m + n + 1)
    assert certificate.passed, certificate.witnesses
    assert certificate.details['checked'] > 0


def test_mutated_degeneracy_is_caught():
    certificate = verify_fnset(MutatedFnSet(FreehedronSet(1, 1)), 3)
    assert not certificate.passed
    assert certificate.witnesses
    assert any(w['identity'] in ('d0eta', 'd1eta') for w in certificate.witnesses)


def test_unknown_fault():
    with pytest.raises(UnknownBlock):
        MutatedFnSet(FreehedronSet(1, 1), fault='shuffle')


def test_pentagon_chains():
    complex_ = normalized_chains(FreehedronSet(2, 0), Ring(), 2)
    assert [complex_.rank(d) for d in complex_.degrees()] == [5, 5, 1]
    assert check_d_squared(complex_)[0]
    assert homology(complex_).ranks() == [1, 0, 0]


def test_normalized_chains_match_cellular_chains():
    fnset_complex = normalized_chains(FreehedronSet(3, 0), Ring(), 3)
    cellular = freehedra.cellular_chains(3, 0, Ring())
    for degree in cellular.degrees():
        assert set(fnset_complex.basis(degree)) == set(cellular.basis(degree))
        for cell in cellular.basis(degree):
            assert fnset_complex.boundary(degree, cell) == cellular.boundary(degree, cell)


def test_cube_part_is_cubical():
    complex_ = normalized_chains(FreehedronSet(0, 2), Ring(), 2)
    assert [complex_.rank(d) for d in complex_.degrees()] == [4, 4, 1]
    assert homology(complex_).ranks() == [1, 0, 0]
    assert check_cubical_subset(FreehedronSet(3, 0), 3).passed


def test_empty_set():
    empty = TableFnSet([], {}, {}, {}, {})
    complex_ = normalized_chains(empty, Ring(), 4)
    assert complex_.degrees() == []
    assert verify_fnset(empty, 4).passed


def test_face_words_reach_every_cell():
    words = face_words(2, 0)
    assert len(words) == 11
    top = freehedra.top_cell(2, 0)
    for cell, word in words.items():
        assert FreehedronSet(2, 0).apply(top, list(word)) == cell


@pytest.mark.parametrize('m,n', [(3, 0), (1, 1)])
def test_coalgebra_agrees_with_block_diagonal(m, n):
    structure = coalgebra(FreehedronSet(m, n), Ring(), m + n)
    for cell in FreehedronSet(m, n).elements(m + n):
        assert structure.diagonal(cell) == freehedra.diagonal(cell)


def test_coalgebra_point_is_grouplike():
    point = freehedra.top_cell(0, 0)
    structure = coalgebra(FreehedronSet(0, 0), Ring(), 0)
    assert structure.diagonal(point) == {(point, point): 1}


def test_coalgebra_chain_map_on_freehedron():
    assert coalgebra(FreehedronSet(3, 0), Ring(), 3).verify().passed


def test_materialized_tables():
    table = materialize(FreehedronSet(1, 1), 3)
    assert verify_fnset(table, 3).passed
    original = normalized_chains(FreehedronSet(1, 1), Ring(), 3)
    frozen = normalized_chains(table, Ring(), 3)
    assert [frozen.rank(d) for d in frozen.degrees()] == [original.rank(d) for d in original.degrees()]
    rebuilt = TableFnSet.from_dict(table.to_dict())
    assert rebuilt.elements(3) == table.elements(3)


def test_table_rejects_unknown_targets():
    with pytest.raises(UnknownBlock):
        TableFnSet([{'label': 'x', 'm': 0, 'n': 1}], {'x': ['y', 'y']}, {}, {}, {})
