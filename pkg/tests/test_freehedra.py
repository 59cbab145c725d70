import pytest

from exceptions import FaceIndexError, PreconditionError, UnknownBlock
from models import Ring
from services.chain_algebra import check_d_squared, homology
from services.freehedra import (
    FnCell,
    FreehedraService,
    boundary,
    boundary_of_chain,
    cellular_chains,
    check_aw_compatibility,
    check_diagonal_chain_map,
    coassociator,
    codim_one_faces,
    degeneracy,
    diagonal,
    enumerate_faces,
    f_vector,
    face,
    project_phi,
    top_cell,
)


def cell(text):
    return FnCell.parse(text)


def expansion(pairs):
    return {(cell(left), cell(right)): coeff for left, right, coeff in pairs}


class TestCells:

    def test_top_cells(self):
        assert str(top_cell(2, 0)) == '012]'
        assert str(top_cell(0, 0)) == '0]'
        assert top_cell(0, 0).dimension == 0
        assert str(top_cell(1, 1)) == '01][b0,b1,b2]'
        assert top_cell(1, 1).dimension == 2

    def test_parse_print_round_trip(self):
        for text in ['012]', '12][01]', '0][01][12]', '01][b0,b1][b1,b2]', '012]*1']:
            assert str(cell(text)) == text

    def test_parse_inline_stars(self):
        assert cell('0*2]') == cell('02]*1')
        assert cell('0*2]') == degeneracy(cell('02]'), 1)
        assert cell('0∗2]') == cell('02]*1')
        assert cell('01][b0,*,b1,b2]') == cell('01][b0,b1,b2]*1')
        assert cell('01][b0,b1,*,b2]') == cell('01][b0,b1,b2]*2')
        assert str(cell('01][b0,*,b1,b2]')) == '01][b0,b1,b2]*1'
        with pytest.raises(UnknownBlock):
            cell('0*2]*1')

    def test_parse_rejects_garbage(self):
        with pytest.raises(UnknownBlock):
            cell('01[2')
        with pytest.raises(UnknownBlock):
            cell('012]*3')

    def test_dimension_formula(self):
        assert cell('0][01][12]').dimension == 0
        assert cell('0][0123]').dimension == 2
        assert cell('123][01]').dimension == 2


class TestFaces:

    def test_named_faces_of_top_cells(self):
        assert str(face(cell('0123]'), 2, 1)) == '123][01]'
        assert str(face(cell('0123]'), 0, 1)) == '0][0123]'
        assert str(face(cell('012]'), 1, 2)) == '02]'

    def test_d1_one_is_d2_one(self):
        assert face(cell('012]'), 1, 1) == face(cell('012]'), 2, 1)

    def test_cube_split(self):
        assert str(face(top_cell(1, 1), 0, 2)) == '01][b0,b1][b1,b2]'
        assert str(face(top_cell(1, 1), 1, 2)) == '01][b0,b2]'

    def test_index_out_of_range(self):
        with pytest.raises(FaceIndexError) as info:
            face(cell('012]'), 2, 3)
        assert info.value.limit == 2
        with pytest.raises(FaceIndexError):
            face(cell('012]'), 0, 3)

    def test_degeneracy_is_undone_by_its_faces(self):
        top = top_cell(1, 1)
        star = degeneracy(top, 1)
        assert star.bidegree == (1, 2)
        assert face(star, 0, 2) == top
        assert face(star, 1, 2) == top

    def test_degeneracy_on_pure_cell(self):
        assert str(degeneracy(cell('012]'), 1)) == '012]*1'
        with pytest.raises(FaceIndexError):
            degeneracy(cell('012]'), 2)

    def test_degeneracies_commute(self):
        top = top_cell(1, 1)
        for i in range(1, 3):
            for j in range(i, 3):
                assert degeneracy(degeneracy(top, j), i) == degeneracy(degeneracy(top, i), j + 1)


class TestEnumeration:

    def test_pentagon(self):
        faces = enumerate_faces(2, 0)
        assert sum(len(v) for v in faces.values()) == 11
        assert f_vector(2) == [5, 5, 1]

    def test_three_dimensional_freehedron(self):
        faces = enumerate_faces(3, 0)
        assert sum(len(v) for v in faces.values()) == 39
        assert f_vector(3) == [12, 18, 8, 1]

    def test_interval(self):
        assert f_vector(1) == [2, 1]

    @pytest.mark.parametrize('n', range(1, 7))
    def test_codim_one_progression(self, n):
        facets = codim_one_faces(n)
        assert len({c for _, _, c in facets}) == 3 * n - 1
        assert len(enumerate_faces(n, 0)[n - 1]) == 3 * n - 1

    def test_euler_characteristic(self):
        counts = f_vector(4)
        assert counts[3] == 11
        assert sum((-1) ** d * c for d, c in enumerate(counts)) == 1

    def test_bound_exceeded(self):
        with pytest.raises(PreconditionError):
            enumerate_faces(4, 3, bound=6)


class TestBoundary:

    def test_pentagon_boundary(self):
        assert boundary(cell('012]')) == {
            cell('0][012]'): -1,
            cell('12][01]'): 1,
            cell('01][12]'): 1,
            cell('02]'): -1,
            cell('2][012]'): 1,
        }

    def test_vertex(self):
        assert boundary(cell('0]')) == {}

    def test_boundary_squared(self):
        for m, n in [(3, 0), (2, 1), (1, 2), (0, 3), (4, 0), (2, 2)]:
            for cells in enumerate_faces(m, n).values():
                for c in cells:
                    assert boundary_of_chain(boundary(c)) == {}

    def test_cellular_chains_are_contractible(self):
        for n in range(1, 5):
            complex_ = cellular_chains(n, 0, Ring())
            assert check_d_squared(complex_)[0]
            assert homology(complex_).ranks() == [1] + [0] * n


class TestDiagonal:

    def test_pentagon_display(self):
        assert diagonal(cell('012]')) == expansion([
            ('0][01][12]', '012]', 1),
            ('012]', '2][02]', 1),
            ('0][012]', '02]', -1),
            ('01][12]', '12][01]', 1),
            ('01][12]', '2][012]', 1),
            ('12][01]', '2][012]', 1),
        ])

    def test_three_dimensional_display(self):
        assert diagonal(cell('0123]')) == expansion([
            ('0][01][12][23]', '0123]', 1),
            ('0123]', '3][03]', 1),
            ('0][0123]', '03]', 1),
            ('01][123]', '13][01]', -1),
            ('012][23]', '23][02]', 1),
            ('01][12][23]', '123][01]', 1),
            ('0][01][123]', '013]', 1),
            ('0][012][23]', '023]', -1),
            ('01][123]', '3][013]', -1),
            ('123][01]', '3][013]', -1),
            ('012][23]', '3][023]', 1),
            ('23][012]', '3][023]', 1),
            ('01][12][23]', '23][012]', -1),
            ('01][12][23]', '3][0123]', 1),
            ('12][23][01]', '23][012]', -1),
            ('12][23][01]', '3][0123]', 1),
            ('23][01][12]', '3][0123]', 1),
        ])

    def test_point_is_grouplike(self):
        assert diagonal(cell('0]')) == {(cell('0]'), cell('0]')): 1}

    def test_cube_cell_is_serre_diagonal(self):
        assert diagonal(top_cell(1, 1)) == expansion([
            ('0][01][b0,b1,b2]', '01][b0,b2]', -1),
            ('0][01][b0,b1][b1,b2]', '01][b0,b1,b2]', 1),
            ('01][b0,b1,b2]', '1][b0,b2][01]', 1),
            ('01][b0,b1][b1,b2]', '1][b0,b1,b2][01]', 1),
        ])

    def test_chain_map(self):
        for n in range(1, 5):
            for cells in enumerate_faces(n, 0).values():
                for c in cells:
                    assert check_diagonal_chain_map(c) == {}

    def test_not_coassociative(self):
        assert coassociator(cell('012]')) != {}

    def test_aw_compatibility(self):
        for n in range(1, 5):
            for cells in enumerate_faces(n, 0).values():
                for c in cells:
                    assert check_aw_compatibility(c) == {}


class TestProjection:

    def test_project_phi(self):
        assert project_phi(cell('0][0123]')) == (0,)
        assert project_phi(cell('012]')) == (0, 1, 2)
        assert project_phi(cell('12][01]')) == (1, 2)
        assert project_phi(cell('3][0123]')) == (3,)

    def test_cube_part_rejected(self):
        with pytest.raises(PreconditionError):
            project_phi(top_cell(1, 1))


class TestService:

    def test_f_vector_facade(self):
        data, error = FreehedraService.f_vector(3)
        assert error is None
        assert data['f_vector'] == [12, 18, 8, 1]
        assert data['codim_one'] == 8

    def test_diagonal_facade(self):
        data, error = FreehedraService.diagonal(2)
        assert error is None
        assert data['count'] == 6
