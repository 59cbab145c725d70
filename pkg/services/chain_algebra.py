"""
Exact linear algebra for bounded chain complexes over Z and Z/p.

Dense Smith normal form works on numpy object arrays so entries stay
Python integers. Homology first pivots sparsely on unit entries and only
hands the leftover block to the dense reduction.
"""
import logging
from collections import defaultdict
from fractions import Fraction

import numpy as np

from exceptions import DimensionMismatch, PreconditionError, RingError
from models import ChainComplex, HomologyGroup, HomologySummary, Ring, label_text

logger = logging.getLogger(__name__)


class SmithNormalForm:
    """
    Smith normal form of an integer matrix by repeated Euclidean pivoting.

    After ``compute()``, ``left @ matrix @ right == D`` with ``left`` and
    ``right`` unimodular and ``D`` diagonal with d_1 | d_2 | ...
    """

    def __init__(self, matrix, track=True):
        rows = len(matrix)
        cols = len(matrix[0]) if rows else 0
        self.original = np.array([[int(v) for v in row] for row in matrix], dtype=object).reshape(rows, cols)
        self.A_ = self.original.copy()
        self.track = track
        self.left = _identity(rows) if track else None
        self.right = _identity(cols) if track else None

    @property
    def num_rows(self):
        return self.A_.shape[0]

    @property
    def num_columns(self):
        return self.A_.shape[1]

    def compute(self):
        s = 0
        while s < min(self.A_.shape):
            pivot = self._min_abs_entry(s)
            if pivot is None:
                break
            row, col = pivot
            self._swap_rows(s, row)
            self._swap_columns(s, col)

            for i in range(s + 1, self.num_rows):
                if self.A_[i, s] != 0:
                    self._add_row(i, s, -(self.A_[i, s] // self.A_[s, s]))
            for j in range(s + 1, self.num_columns):
                if self.A_[s, j] != 0:
                    self._add_column(j, s, -(self.A_[s, j] // self.A_[s, s]))

            if any(self.A_[i, s] != 0 for i in range(s + 1, self.num_rows)):
                continue
            if any(self.A_[s, j] != 0 for j in range(s + 1, self.num_columns)):
                continue

            offender = self._non_divisible(s)
            if offender is not None:
                # pull the offending row into row s and repeat
                self._add_row(s, offender, 1)
                continue
            if self.A_[s, s] < 0:
                self._negate_row(s)
            s += 1
        return self

    def diagonal(self):
        size = min(self.A_.shape)
        return [int(self.A_[i, i]) for i in range(size) if self.A_[i, i] != 0]

    def _min_abs_entry(self, s):
        best = None
        for i in range(s, self.num_rows):
            for j in range(s, self.num_columns):
                value = self.A_[i, j]
                if value != 0 and (best is None or abs(value) < best[0]):
                    best = (abs(value), i, j)
                    if best[0] == 1:
                        return i, j
        return None if best is None else (best[1], best[2])

    def _non_divisible(self, s):
        pivot = self.A_[s, s]
        for i in range(s + 1, self.num_rows):
            for j in range(s + 1, self.num_columns):
                if self.A_[i, j] % pivot != 0:
                    return i
        return None

    def _swap_rows(self, a, b):
        if a == b:
            return
        self.A_[[a, b]] = self.A_[[b, a]]
        if self.track:
            self.left[[a, b]] = self.left[[b, a]]

    def _swap_columns(self, a, b):
        if a == b:
            return
        self.A_[:, [a, b]] = self.A_[:, [b, a]]
        if self.track:
            self.right[:, [a, b]] = self.right[:, [b, a]]

    def _add_row(self, target, source, k):
        """add k times row source to row target"""
        self.A_[target] = self.A_[target] + self.A_[source] * k
        if self.track:
            self.left[target] = self.left[target] + self.left[source] * k

    def _add_column(self, target, source, k):
        """add k times column source to column target"""
        self.A_[:, target] = self.A_[:, target] + self.A_[:, source] * k
        if self.track:
            self.right[:, target] = self.right[:, target] + self.right[:, source] * k

    def _negate_row(self, axis):
        self.A_[axis] = -self.A_[axis]
        if self.track:
            self.left[axis] = -self.left[axis]


def _identity(size):
    eye = np.zeros((size, size), dtype=object)
    for i in range(size):
        eye[i, i] = 1
    return eye


def smith_normal_form(matrix):
    """Return (diagonal, left, right) with left * matrix * right diagonal"""
    if matrix and len({len(row) for row in matrix}) > 1:
        raise DimensionMismatch("Ragged matrix")
    snf = SmithNormalForm(matrix).compute()
    left = [[int(v) for v in row] for row in snf.left.tolist()]
    right = [[int(v) for v in row] for row in snf.right.tolist()]
    return snf.diagonal(), left, right


class Field:
    """Fraction field of a coefficient ring: Q for Z, itself for Z/p"""

    def __init__(self, ring):
        self.ring = ring

    def coerce(self, value):
        if self.ring.modulus is None:
            return Fraction(value)
        return int(value) % self.ring.modulus

    def div(self, a, b):
        if self.ring.modulus is None:
            return Fraction(a) / Fraction(b)
        return a * pow(b, -1, self.ring.modulus) % self.ring.modulus

    def normalize(self, value):
        if self.ring.modulus is None:
            return value
        return value % self.ring.modulus


class Echelon:
    """Incremental row echelon form with combination tracking over a field"""

    def __init__(self, field):
        self.field = field
        self.rows = []

    def reduce(self, vector, combo=None):
        vector = dict(vector)
        combo = dict(combo or {})
        used = {}
        for pivot, row, row_combo in self.rows:
            c = vector.get(pivot)
            if not c:
                continue
            factor = self.field.div(c, row[pivot])
            for key, value in row.items():
                new = self.field.normalize(vector.get(key, 0) - factor * value)
                if new:
                    vector[key] = new
                else:
                    vector.pop(key, None)
            for key, value in row_combo.items():
                used[key] = self.field.normalize(used.get(key, 0) + factor * value)
                new = self.field.normalize(combo.get(key, 0) - factor * value)
                if new:
                    combo[key] = new
                else:
                    combo.pop(key, None)
        return vector, combo, {k: v for k, v in used.items() if v}

    def insert(self, vector, combo=None):
        """Insert a vector; return the residual combination when it is dependent"""
        vector, combo, _ = self.reduce(vector, combo)
        if not vector:
            return False, combo
        self.rows.append((min(vector), vector, combo))
        return True, None

    def __len__(self):
        return len(self.rows)


def _sparse_rows(complex_, k):
    rows = defaultdict(dict)
    for row, col, value in complex_.entries(k):
        rows[row][col] = value
    return dict(rows)


def rank_and_torsion(rows, ring):
    """Rank and nontrivial invariant factors of a sparse matrix given by rows"""
    rows = {r: dict(v) for r, v in rows.items() if v}
    columns = defaultdict(set)
    for r, row in rows.items():
        for c in row:
            columns[c].add(r)

    modulus = ring.modulus
    rank = 0
    pending = sorted(rows, reverse=True)
    while pending:
        r = pending.pop()
        row = rows.get(r)
        if not row:
            continue
        if modulus is None:
            pivot_col = next((c for c in sorted(row) if row[c] in (1, -1)), None)
        else:
            pivot_col = min(row)
        if pivot_col is None:
            continue
        pivot = row[pivot_col]
        inverse = pivot if modulus is None else pow(pivot, -1, modulus)
        del rows[r]
        for c in row:
            columns[c].discard(r)
        for other in sorted(columns[pivot_col]):
            other_row = rows[other]
            factor = other_row[pivot_col] * inverse
            for c, value in row.items():
                new = other_row.get(c, 0) - factor * value
                if modulus is not None:
                    new %= modulus
                if new:
                    if c not in other_row:
                        columns[c].add(other)
                    other_row[c] = new
                else:
                    other_row.pop(c, None)
                    columns[c].discard(other)
            pending.append(other)
        rank += 1

    leftover = {r: row for r, row in rows.items() if row}
    if not leftover:
        return rank, []
    if modulus is not None:
        raise RingError("Field elimination left a nonzero block")
    cols = sorted({c for row in leftover.values() for c in row})
    col_pos = {c: i for i, c in enumerate(cols)}
    dense = []
    for r in sorted(leftover):
        line = [0] * len(cols)
        for c, value in leftover[r].items():
            line[col_pos[c]] = value
        dense.append(line)
    logger.debug(f"Dense Smith reduction on a {len(dense)}x{len(cols)} block")
    diagonal = SmithNormalForm(dense, track=False).compute().diagonal()
    return rank + len(diagonal), [abs(d) for d in diagonal if abs(d) != 1]


def homology(complex_, degrees=None):
    """Free rank and torsion in each degree of a bounded complex"""
    if degrees is None:
        degrees = complex_.degrees()
        if complex_.exact_through is not None:
            degrees = [k for k in degrees if k <= complex_.exact_through]
    cache = {}

    def leaving(k):
        if k not in cache:
            if complex_.rank(k) == 0 or complex_.rank(k + complex_.step) == 0:
                cache[k] = (0, [])
            else:
                cache[k] = rank_and_torsion(_sparse_rows(complex_, k), complex_.ring)
        return cache[k]

    groups = []
    for k in degrees:
        out_rank, _ = leaving(k)
        in_rank, torsion = leaving(k - complex_.step)
        free = complex_.rank(k) - out_rank - in_rank
        groups.append(HomologyGroup(k, free, sorted(torsion)))
        logger.debug(f"H_{k}: rank {free}, torsion {torsion}")
    return HomologySummary(complex_.ring, groups)


def _first_nonzero_product(first, second, ring):
    """(row, col, value) of the first nonzero entry of first @ second, or None"""
    if not len(first) or not len(second) or not len(second[0]):
        return None
    if len(first[0]) != len(second):
        raise DimensionMismatch(f"Cannot compose {len(first[0])} columns with {len(second)} rows")
    product = np.array(first, dtype=object).dot(np.array(second, dtype=object))
    for (i, j), value in np.ndenumerate(product):
        value = ring.reduce(int(value))
        if value != 0:
            return i, j, value
    return None


def compose_is_zero(complex_):
    """Check d o d == 0 degree by degree on the dense differential matrices.

    Returns (True, None) or (False, (degree, row, col, value)) for the first
    nonzero entry, where degree is the source degree of the composite.
    """
    step = complex_.step
    for k in complex_.degrees():
        if k + step not in complex_.bases or k + 2 * step not in complex_.bases:
            continue
        entry = _first_nonzero_product(complex_.matrix(k + step), complex_.matrix(k), complex_.ring)
        if entry is not None:
            return False, (k,) + entry
    return True, None


def check_d_squared(complex_):
    """Return (True, None) or (False, witness) where witness names the failing degree and labels"""
    for k in complex_.degrees():
        for label in complex_.basis(k):
            image = complex_.apply(k, {label: 1})
            twice = complex_.apply(k + complex_.step, image)
            if twice:
                target, value = sorted(twice.items(), key=lambda item: label_text(item[0]))[0]
                return False, {
                    'degree': k,
                    'source': label_text(label),
                    'target': label_text(target),
                    'value': value
                }
    return True, None


def tensor(first, second):
    """Tensor product with the Koszul sign d(a*b) = da*b + (-1)^|a| a*db"""
    if first.ring != second.ring:
        raise RingError(f"Cannot tensor over {first.ring} and {second.ring}")
    if first.cohomological != second.cohomological:
        raise DimensionMismatch("Cannot tensor a chain complex with a cochain complex")
    bases = defaultdict(list)
    for p in first.degrees():
        for q in second.degrees():
            for a in first.basis(p):
                for b in second.basis(q):
                    bases[p + q].append((a, b))
    degree_of_first = {a: p for p in first.degrees() for a in first.basis(p)}
    degree_of_second = {b: q for q in second.degrees() for b in second.basis(q)}
    differentials = {}
    for n, labels in bases.items():
        table = {}
        for a, b in labels:
            p = degree_of_first[a]
            q = degree_of_second[b]
            image = {}
            for da, c in first.boundary(p, a).items():
                image[(da, b)] = image.get((da, b), 0) + c
            sign = -1 if p % 2 else 1
            for db, c in second.boundary(q, b).items():
                image[(a, db)] = image.get((a, db), 0) + sign * c
            table[(a, b)] = image
        differentials[n] = table
    exact = None
    if first.exact_through is not None and second.exact_through is not None:
        exact = min(first.exact_through + min(second.degrees(), default=0),
                    second.exact_through + min(first.degrees(), default=0))
    return ChainComplex(first.ring, dict(bases), differentials, first.cohomological, exact)


def dualize(complex_):
    """Hom(C, R) with the dual differential -(-1)^k f.d, k the lower degree"""
    differentials = defaultdict(dict)
    for k in complex_.degrees():
        target_degree = k + complex_.step
        for source, image in complex_.differentials.get(k, {}).items():
            lower = min(k, target_degree)
            sign = 1 if lower % 2 else -1
            for target, value in image.items():
                differentials[target_degree].setdefault(target, {})[source] = sign * value
    return ChainComplex(complex_.ring, complex_.bases, dict(differentials), not complex_.cohomological,
                        complex_.exact_through)


class HomologyBasis:
    """Cycle representatives of a basis of H_k over the fraction field"""

    def __init__(self, complex_, degree, representatives, echelon):
        self.complex = complex_
        self.degree = degree
        self.representatives = representatives
        self._echelon = echelon

    @property
    def rank(self):
        return len(self.representatives)

    def coordinates(self, cycle):
        """Coordinates of a cycle in the basis, modulo boundaries"""
        if self.complex.apply(self.degree, dict(cycle)):
            raise PreconditionError(f"Chain in degree {self.degree} is not a cycle")
        field = self._echelon.field
        vector = {}
        for label, value in cycle.items():
            if not self.complex.contains(self.degree, label):
                raise PreconditionError(f"Label {label_text(label)} is not in degree {self.degree}")
            vector[self.complex.index(self.degree, label)] = field.coerce(value)
        vector = {k: v for k, v in vector.items() if v}
        remainder, _, used = self._echelon.reduce(vector)
        if remainder:
            raise PreconditionError(f"Chain in degree {self.degree} is not a cycle")
        return [used.get(j, field.coerce(0)) for j in range(self.rank)]


def _integral(vector):
    """Scale a rational vector to a primitive integer vector"""
    denominators = 1
    for value in vector.values():
        denominators = denominators * value.denominator // _gcd(denominators, value.denominator)
    scaled = {k: int(v * denominators) for k, v in vector.items()}
    common = 0
    for value in scaled.values():
        common = _gcd(common, abs(value))
    return {k: v // common for k, v in scaled.items()} if common > 1 else scaled


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def homology_basis(complex_, degree):
    """Representatives of a basis of H_degree and a coordinate map"""
    field = Field(complex_.ring)
    labels = complex_.basis(degree)

    # kernel of the differential leaving this degree
    kernel = []
    column_echelon = Echelon(field)
    for j, label in enumerate(labels):
        image = complex_.boundary(degree, label)
        target_degree = degree + complex_.step
        vector = {complex_.index(target_degree, t): field.coerce(v) for t, v in image.items()}
        independent, residual = column_echelon.insert(vector, {j: field.coerce(1)})
        if not independent:
            kernel.append(residual)

    echelon = Echelon(field)
    source_degree = degree - complex_.step
    for label in complex_.basis(source_degree):
        image = complex_.boundary(source_degree, label)
        vector = {complex_.index(degree, t): field.coerce(v) for t, v in image.items()}
        echelon.insert(vector)

    representatives = []
    for vector in kernel:
        if complex_.ring.modulus is None:
            vector = {k: Fraction(v) for k, v in _integral(vector).items()}
        independent, _ = echelon.insert(vector, {len(representatives): field.coerce(1)})
        if independent:
            representatives.append({labels[i]: (int(v) if complex_.ring.modulus is None else v)
                                    for i, v in sorted(vector.items())})
    logger.debug(f"Homology basis in degree {degree}: {len(representatives)} classes")
    return HomologyBasis(complex_, degree, representatives, echelon)


def complex_from_entries(ring, degrees, differentials, cohomological=False):
    """Build a complex from the JSON layout of labels and [row, col, value] triples"""
    bases = {int(k): list(v) for k, v in degrees.items()}
    step = 1 if cohomological else -1
    tables = {}
    for k, triples in differentials.items():
        k = int(k)
        sources = bases.get(k, [])
        targets = bases.get(k + step, [])
        table = {}
        for row, col, value in triples:
            if col >= len(sources) or row >= len(targets):
                raise DimensionMismatch(f"Entry ({row}, {col}) outside the {len(targets)}x{len(sources)} matrix in degree {k}")
            table.setdefault(sources[col], {})
            table[sources[col]][targets[row]] = table[sources[col]].get(targets[row], 0) + value
        tables[k] = table
    return ChainComplex(ring if isinstance(ring, Ring) else Ring.parse(ring), bases, tables, cohomological)


def add_term(chain, key, coeff):
    """Add coeff * key to a sparse chain in place, dropping zeros"""
    value = chain.get(key, 0) + coeff
    if value:
        chain[key] = value
    else:
        chain.pop(key, None)


def add_scaled(target, source, scale=1):
    for key, coeff in source.items():
        add_term(target, key, scale * coeff)
    return target


def reduce_chain(chain, ring):
    reduced = {}
    for key, coeff in chain.items():
        value = ring.reduce(coeff)
        if value:
            reduced[key] = value
    return reduced


class ChainAlgebraService:

    @staticmethod
    def homology(data):
        """Homology of a complex loaded by ChainComplexSchema"""
        try:
            complex_ = complex_from_entries(data['ring'], data['degrees'], data['differentials'],
                                            data['cohomological'])
            ok, witness = check_d_squared(complex_)
            if not ok:
                return None, f"Differential does not square to zero in degree {witness['degree']}"
            return homology(complex_), None
        except Exception as e:
            logger.error(f"Homology error: {str(e)}")
            return None, str(e)
