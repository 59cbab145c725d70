"""
Freehedra F_m x I^n as block sequences.

A cell is an open block a_0..a_m] followed by closed blocks [..]. Vertex
blocks hold integers, cube blocks hold the symbols b0, b1, ... The interior
elements of the closed blocks are the cube coordinates of the cell, in
order; a degenerate cell additionally carries stars at coordinate
positions.
"""
import logging
import re
from itertools import combinations

from exceptions import FaceIndexError, PreconditionError, UnknownBlock
from models import ChainComplex
from services.chain_algebra import add_term

logger = logging.getLogger(__name__)

_CELL_PATTERN = re.compile(r'^([^\[\]*]+)\]((?:\[[^\[\]]+\])*)((?:\*\d+)*)$')


def _block_text(block):
    if all(isinstance(s, int) and 0 <= s <= 9 for s in block):
        return ''.join(str(s) for s in block)
    return ','.join(str(s) for s in block)


def _parse_symbol(token):
    token = token.strip()
    if token.isdigit():
        return int(token)
    if re.fullmatch(r'[A-Za-z]\w*', token):
        return token
    raise UnknownBlock(f"Bad block symbol '{token}'")


def _parse_block(text):
    if ',' in text:
        return tuple(_parse_symbol(t) for t in text.split(','))
    if text.isdigit():
        return tuple(int(ch) for ch in text)
    return (_parse_symbol(text),)


def _split_tokens(text):
    if ',' in text:
        return [t.strip() for t in text.split(',')]
    return list(text)


def _inline_stars(text):
    """Rewrite inline stars such as 0*2] into the suffix form 02]*1.

    A star inside a block sits at the coordinate position given by the
    interior symbols and stars to its left.
    """
    text = text.replace('∗', '*')
    end = text.rfind(']')
    head, tail = text[:end + 1], text[end + 1:]
    if '*' not in head:
        return text
    if tail:
        raise UnknownBlock(f"Mixed star notation in '{text}'")
    blocks = [head[:head.index(']')]] + re.findall(r'\[([^\[\]]*)\]', head)
    cleaned = []
    stars = []
    seen = 0
    for index, block in enumerate(blocks):
        tokens = _split_tokens(block)
        symbols = [t for t in tokens if t != '*']
        last = len(symbols) - 1
        k = 0
        for token in tokens:
            if token == '*':
                stars.append(seen + len(stars) + 1)
                continue
            if index > 0 and 0 < k < last:
                seen += 1
            k += 1
        separator = ',' if ',' in block else ''
        cleaned.append(separator.join(symbols))
    rebuilt = cleaned[0] + ']' + ''.join(f"[{b}]" for b in cleaned[1:])
    return rebuilt + ''.join(f"*{s}" for s in stars)


class FnCell:
    """A cell of F_m x I^n, possibly degenerate"""

    __slots__ = ('open', 'closed', 'stars', '_key')

    def __init__(self, open_block, closed=(), stars=()):
        self.open = tuple(open_block)
        self.closed = tuple(tuple(b) for b in closed)
        self.stars = tuple(sorted(stars))
        if not self.open:
            raise UnknownBlock("Open block is empty")
        for block in self.closed:
            if len(block) < 2:
                raise UnknownBlock(f"Closed block {block} has fewer than two elements")
        self._key = (self.open, self.closed, self.stars)

    @classmethod
    def parse(cls, text):
        match = _CELL_PATTERN.match(_inline_stars(text.strip()))
        if not match:
            raise UnknownBlock(f"Cannot parse cell '{text}'")
        open_block = _parse_block(match.group(1))
        closed = [_parse_block(b) for b in re.findall(r'\[([^\[\]]+)\]', match.group(2))]
        stars = [int(s) for s in re.findall(r'\*(\d+)', match.group(3))]
        cell = cls(open_block, closed, stars)
        if any(not 1 <= s <= cell.n for s in stars) or len(set(stars)) != len(stars):
            raise UnknownBlock(f"Bad star positions in '{text}'")
        return cell

    @property
    def m(self):
        return len(self.open) - 1

    @property
    def interior(self):
        return sum(len(b) - 2 for b in self.closed)

    @property
    def n(self):
        return self.interior + len(self.stars)

    @property
    def bidegree(self):
        return self.m, self.n

    @property
    def dimension(self):
        blocks = (self.open,) + self.closed
        return sum(len(b) - 1 for b in blocks) - (len(blocks) - 1)

    @property
    def is_degenerate(self):
        return bool(self.stars)

    @property
    def is_cube_free(self):
        return self.interior == 0

    def coordinates(self):
        """Cube coordinates 1..n as (block index, position) pairs, None at stars"""
        interior = iter([(bi, pi) for bi, block in enumerate(self.closed) for pi in range(1, len(block) - 1)])
        stars = set(self.stars)
        return [None if pos in stars else next(interior) for pos in range(1, self.n + 1)]

    def __eq__(self, other):
        return isinstance(other, FnCell) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __lt__(self, other):
        return (self.dimension, str(self)) < (other.dimension, str(other))

    def __str__(self):
        text = _block_text(self.open) + ']' + ''.join(f"[{_block_text(b)}]" for b in self.closed)
        return text + ''.join(f"*{s}" for s in self.stars)

    __repr__ = __str__


def top_cell(m, n):
    """The top cell 0..m][b0..b_{n+1}] of F_m x I^n"""
    closed = [tuple(f"b{j}" for j in range(n + 2))] if n > 0 else []
    return FnCell(range(m + 1), closed)


def face(cell, eps, i):
    m, n = cell.bidegree
    if eps == 2:
        if not 1 <= i <= m:
            raise FaceIndexError('d2', i, m)
        a = cell.open
        return FnCell(a[i:], cell.closed + (a[:i + 1],), cell.stars)
    if eps not in (0, 1):
        raise FaceIndexError('eps', eps, 2)
    if not 1 <= i <= m + n:
        raise FaceIndexError(f"d{eps}", i, m + n)
    if i <= m:
        a = cell.open
        if eps == 0:
            shift = m - i
            return FnCell(a[:i], (a[i - 1:],) + cell.closed, [s + shift for s in cell.stars])
        if i == 1:
            return face(cell, 2, 1)
        return FnCell(a[:i - 1] + a[i:], cell.closed, cell.stars)
    return _cube_face(cell, eps, i - m)


def _cube_face(cell, eps, j):
    entry = cell.coordinates()[j - 1]
    stars = [s if s < j else s - 1 for s in cell.stars if s != j]
    if entry is None:
        return FnCell(cell.open, cell.closed, stars)
    bi, pi = entry
    block = cell.closed[bi]
    if eps == 0:
        replacement = (block[:pi + 1], block[pi:])
    else:
        replacement = (block[:pi] + block[pi + 1:],)
    return FnCell(cell.open, cell.closed[:bi] + replacement + cell.closed[bi + 1:], stars)


def degeneracy(cell, j):
    if not 1 <= j <= cell.n + 1:
        raise FaceIndexError('eta', j, cell.n + 1)
    stars = [s + 1 if s >= j else s for s in cell.stars] + [j]
    return FnCell(cell.open, cell.closed, stars)


def boundary(cell):
    """Cellular differential; degenerate faces contribute zero"""
    if cell.is_degenerate:
        return {}
    m, n = cell.bidegree
    total = m + n
    chain = {}
    for i in range(1, total + 1):
        sign = -1 if i % 2 else 1
        for eps, coeff in ((0, sign), (1, -sign)):
            target = face(cell, eps, i)
            if not target.is_degenerate:
                add_term(chain, target, coeff)
    for i in range(2, m + 1):
        sign = -1 if ((i - 1) * total) % 2 else 1
        add_term(chain, face(cell, 2, i), sign)
    return chain


def boundary_of_chain(chain):
    result = {}
    for cell, coeff in chain.items():
        for target, value in boundary(cell).items():
            add_term(result, target, coeff * value)
    return result


def enumerate_faces(m, n, bound=None):
    """All nondegenerate cells of F_m x I^n grouped by dimension"""
    if bound is not None and m + n > bound:
        raise PreconditionError(f"m + n = {m + n} exceeds the bound {bound}")
    top = top_cell(m, n)
    seen = {top}
    frontier = [top]
    while frontier:
        following = []
        for cell in frontier:
            cm, cn = cell.bidegree
            ops = [(eps, i) for eps in (0, 1) for i in range(1, cm + cn + 1)]
            ops += [(2, i) for i in range(1, cm + 1)]
            for eps, i in ops:
                target = face(cell, eps, i)
                if target not in seen:
                    seen.add(target)
                    following.append(target)
        frontier = following
    grouped = {}
    for cell in seen:
        grouped.setdefault(cell.dimension, []).append(cell)
    logger.debug(f"F_{m} x I^{n}: {len(seen)} cells")
    return {d: sorted(cells) for d, cells in sorted(grouped.items())}


def f_vector(n):
    faces = enumerate_faces(n, 0)
    return [len(faces.get(d, [])) for d in range(n + 1)]


def codim_one_faces(n):
    """Facet operators of F_n with their cells; d1_1 is listed as d2_1"""
    top = top_cell(n, 0)
    facets = [('d0', i, face(top, 0, i)) for i in range(1, n + 1)]
    facets += [('d1', i, face(top, 1, i)) for i in range(2, n + 1)]
    facets += [('d2', i, face(top, 2, i)) for i in range(1, n + 1)]
    return facets


def cellular_chains(m, n, ring):
    faces = enumerate_faces(m, n)
    differentials = {d: {cell: boundary(cell) for cell in cells} for d, cells in faces.items()}
    return ChainComplex(ring, faces, differentials)


def _inversions(first, second):
    """Sign of the shuffle placing first before second"""
    count = sum(1 for k in first for l in second if k > l)
    return -1 if count % 2 else 1


def _split_blocks(blocks, coordinates, chosen):
    """Split the closed blocks at the chosen cube coordinates"""
    cuts = {}
    for j in chosen:
        bi, pi = coordinates[j - 1]
        cuts.setdefault(bi, []).append(pi)
    result = []
    for bi, block in enumerate(blocks):
        start = 0
        for pi in sorted(cuts.get(bi, [])):
            result.append(block[start:pi + 1])
            start = pi
        result.append(block[start:])
    return result


def _delete_coordinates(blocks, coordinates, chosen):
    drop = {}
    for j in chosen:
        bi, pi = coordinates[j - 1]
        drop.setdefault(bi, set()).add(pi)
    return [tuple(s for pi, s in enumerate(block) if pi not in drop.get(bi, ())) for bi, block in enumerate(blocks)]


def diagonal(cell):
    """The diagonal Delta_F of a nondegenerate cell as {(left, right): coeff}"""
    if cell.is_degenerate:
        return {}
    result = {}
    m = cell.m
    k = cell.interior
    a = cell.open
    coords = cell.coordinates()
    total = m + k
    for size in range(k + 1):
        for l_cube in combinations(range(1, k + 1), size):
            k_cube = [j for j in range(1, k + 1) if j not in l_cube]
            split = _split_blocks(cell.closed, coords, l_cube)
            deleted = _delete_coordinates(cell.closed, coords, k_cube)
            if m == 0:
                add_term(result, (FnCell(a, split), FnCell(a, deleted)), _inversions(k_cube, l_cube))
                continue
            n_eff = m + len(k_cube)
            for p in range(m):
                for inner in combinations(range(1, m), p):
                    _diagonal_terms(result, a, inner, split, deleted, l_cube, total, n_eff)
    return result


def _diagonal_terms(result, a, inner, split, deleted, l_cube, total, n_eff):
    m = len(a) - 1
    p = len(inner)
    vertices = (0,) + inner + (m,)
    betas = [a[vertices[t]:vertices[t + 1] + 1] for t in range(p + 1)]
    cube_cuts = {m + j for j in l_cube}

    cut = {1} | {c + 1 for c in inner} | cube_cuts
    rest = [x for x in range(1, total + 1) if x not in cut]
    left = FnCell((a[0],), betas + split)
    right = FnCell(tuple(a[v] for v in vertices), deleted)
    add_term(result, (left, right), _inversions(rest, sorted(cut)))

    cut = {c + 1 for c in inner} | cube_cuts
    rest = [x for x in range(2, total + 1) if x not in cut]
    base = _inversions(rest, sorted(cut))
    corners = (0,) + inner
    for r in range(p + 1):
        exponent = 0
        for q in range(1, r + 1):
            exponent += (corners[q] - corners[q - 1] - 1) * (n_eff - p + r - q + 1) + corners[q] + q
        left = FnCell(betas[r], betas[r + 1:] + split + betas[:r])
        for t in range(r + 1, p + 2):
            sign = base * (-1 if ((len(cut) + 1) * (t + 1) + exponent) % 2 else 1)
            right = FnCell(tuple(a[v] for v in vertices if v >= vertices[t]),
                           deleted + [tuple(a[v] for v in vertices if v <= vertices[t])])
            add_term(result, (left, right), sign)


def diagonal_of_chain(chain):
    result = {}
    for cell, coeff in chain.items():
        for pair, value in diagonal(cell).items():
            add_term(result, pair, coeff * value)
    return result


def check_diagonal_chain_map(cell):
    """Compare (d x 1 + 1 x d) Delta with Delta d on one cell"""
    lhs = {}
    for (left, right), coeff in diagonal(cell).items():
        for target, value in boundary(left).items():
            add_term(lhs, (target, right), coeff * value)
        sign = -1 if left.dimension % 2 else 1
        for target, value in boundary(right).items():
            add_term(lhs, (left, target), sign * coeff * value)
    rhs = diagonal_of_chain(boundary(cell))
    difference = dict(lhs)
    for pair, value in rhs.items():
        add_term(difference, pair, -value)
    return difference


def coassociator(cell):
    """(Delta x 1) Delta - (1 x Delta) Delta as {(x, y, z): coeff}"""
    result = {}
    for (left, right), coeff in diagonal(cell).items():
        for (x, y), value in diagonal(left).items():
            add_term(result, (x, y, right), coeff * value)
        for (y, z), value in diagonal(right).items():
            add_term(result, (left, y, z), -coeff * value)
    return result


def project_phi(cell):
    """Open block of a pure F-cell, a face of the standard simplex"""
    if any(isinstance(s, str) for block in cell.closed for s in block):
        raise PreconditionError(f"Cell {cell} has a cube part")
    return cell.open


def phi_chain(cell):
    """Chain-level projection: the open simplex on cube-free cells, else None"""
    if not cell.is_cube_free:
        return None
    return project_phi(cell)


def alexander_whitney(simplex):
    return {(simplex[:i + 1], simplex[i:]): 1 for i in range(len(simplex))}


def check_aw_compatibility(cell):
    """Difference (phi x phi) Delta_F - AW phi on one cell of F_n"""
    lhs = {}
    for (left, right), coeff in diagonal(cell).items():
        x, y = phi_chain(left), phi_chain(right)
        if x is not None and y is not None:
            add_term(lhs, (x, y), coeff)
    simplex = phi_chain(cell)
    if simplex is not None:
        for pair, value in alexander_whitney(simplex).items():
            add_term(lhs, pair, -value)
    return lhs


def chain_text(chain):
    """Deterministic text rendering of a formal sum"""
    parts = []
    for key, coeff in sorted(chain.items(), key=lambda item: str(item[0])):
        term = ' (x) '.join(str(c) for c in key) if isinstance(key, tuple) else str(key)
        parts.append(f"{'+' if coeff > 0 else '-'}{abs(coeff) if abs(coeff) != 1 else ''}{term}")
    return ' '.join(parts) if parts else '0'


class FreehedraService:

    @staticmethod
    def f_vector(n):
        """Face counts of F_n by dimension"""
        try:
            faces = enumerate_faces(n, 0)
            counts = [len(faces.get(d, [])) for d in range(n + 1)]
            return {
                'n': n,
                'f_vector': counts,
                'codim_one': len(codim_one_faces(n)) if n > 0 else 0,
                'euler_characteristic': sum((-1) ** d * c for d, c in enumerate(counts))
            }, None
        except Exception as e:
            logger.error(f"f-vector error: {str(e)}")
            return None, str(e)

    @staticmethod
    def diagonal(n):
        """Diagonal of the top cell of F_n as a list of terms"""
        try:
            terms = diagonal(top_cell(n, 0))
            data = [{'left': str(left), 'right': str(right), 'coefficient': coeff}
                    for (left, right), coeff in sorted(terms.items(), key=lambda item: (str(item[0][0]), str(item[0][1])))]
            return {'cell': str(top_cell(n, 0)), 'terms': data, 'count': len(data)}, None
        except Exception as e:
            logger.error(f"Diagonal error: {str(e)}")
            return None, str(e)
