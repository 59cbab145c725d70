"""
F_n-sets: bigraded sets with face operators d0, d1, d2 and degeneracies eta.

Operator words are written left to right as composed maps, so
[('d2', 1), ('d0', 3)] means d2_1 d0_3 and is applied right to left.
"""
import logging
from abc import ABC, abstractmethod
from collections import deque
from functools import lru_cache

from exceptions import FaceIndexError, UnknownBlock
from models import Certificate, ChainComplex
from services import freehedra
from services.chain_algebra import add_term

logger = logging.getLogger(__name__)

MAX_WITNESSES = 10


class FnSet(ABC):
    """Interface every F_n-set instance implements"""

    name = 'fnset'
    finite = False

    @abstractmethod
    def elements(self, bound):
        """Nondegenerate elements of total degree <= bound"""

    @abstractmethod
    def bidegree(self, x):
        pass

    @abstractmethod
    def face(self, x, eps, i):
        pass

    @abstractmethod
    def degeneracy(self, x, j):
        pass

    @abstractmethod
    def is_degenerate(self, x):
        pass

    def label(self, x):
        return str(x)

    def total(self, x):
        m, n = self.bidegree(x)
        return m + n

    def apply(self, x, word):
        """Apply an operator word; None when an index leaves its range"""
        y = x
        for op, index in reversed(word):
            m, n = self.bidegree(y)
            try:
                if op == 'eta':
                    if not 1 <= index <= n + 1:
                        return None
                    y = self.degeneracy(y, index)
                else:
                    eps = int(op[1])
                    limit = m if eps == 2 else m + n
                    if not 1 <= index <= limit:
                        return None
                    y = self.face(y, eps, index)
            except (FaceIndexError, KeyError):
                return None
        return y


class FreehedronSet(FnSet):
    """Cells of F_m x I^n in the block model"""

    finite = True

    def __init__(self, m, n):
        self.m = m
        self.n = n
        self.name = f"F_{m} x I^{n}"

    def elements(self, bound):
        faces = freehedra.enumerate_faces(self.m, self.n)
        return [c for d, cells in faces.items() if d <= bound for c in cells]

    def bidegree(self, x):
        return x.bidegree

    def face(self, x, eps, i):
        return freehedra.face(x, eps, i)

    def degeneracy(self, x, j):
        return freehedra.degeneracy(x, j)

    def is_degenerate(self, x):
        return x.is_degenerate


class MutatedFnSet(FnSet):
    """Wraps an F_n-set with a deliberately broken operator table"""

    FAULTS = ('eta_to_front',)

    def __init__(self, base, fault='eta_to_front'):
        if fault not in self.FAULTS:
            raise UnknownBlock(f"Unknown F_n-set fault: {fault}")
        self.base = base
        self.fault = fault
        self.finite = base.finite
        self.name = f"{base.name} [{fault}]"

    def elements(self, bound):
        return self.base.elements(bound)

    def bidegree(self, x):
        return self.base.bidegree(x)

    def face(self, x, eps, i):
        return self.base.face(x, eps, i)

    def degeneracy(self, x, j):
        # eta_to_front: every degeneracy inserts its star in front
        return self.base.degeneracy(x, 1)

    def is_degenerate(self, x):
        return self.base.is_degenerate(x)

    def label(self, x):
        return self.base.label(x)


class TableFnSet(FnSet):
    """An F_n-set given by materialized operator tables"""

    finite = True

    def __init__(self, elements, d0, d1, d2, eta, name='table'):
        self.name = name
        self._info = {}
        for item in elements:
            self._info[item['label']] = (int(item['m']), int(item['n']), bool(item.get('degenerate', False)))
        self.tables = {'d0': d0, 'd1': d1, 'd2': d2, 'eta': eta}
        for op, table in self.tables.items():
            for source, targets in table.items():
                for target in targets:
                    if source not in self._info or target not in self._info:
                        raise UnknownBlock(f"{op} table names an unknown element: {source} -> {target}")

    @classmethod
    def from_dict(cls, data):
        return cls(data['elements'], data.get('d0', {}), data.get('d1', {}), data.get('d2', {}),
                   data.get('eta', {}), data.get('name', 'table'))

    def elements(self, bound):
        return [x for x, (m, n, degenerate) in self._info.items() if not degenerate and m + n <= bound]

    def bidegree(self, x):
        m, n, _ = self._info[x]
        return m, n

    def _lookup(self, op, x, index):
        row = self.tables[op].get(x, [])
        if not 1 <= index <= len(row):
            raise FaceIndexError(op, index, len(row))
        return row[index - 1]

    def face(self, x, eps, i):
        return self._lookup(f"d{eps}", x, i)

    def degeneracy(self, x, j):
        return self._lookup('eta', x, j)

    def is_degenerate(self, x):
        return self._info[x][2]

    def to_dict(self):
        return {
            'name': self.name,
            'elements': [{'label': x, 'm': m, 'n': n, 'degenerate': d} for x, (m, n, d) in self._info.items()],
            **self.tables
        }


def materialize(fnset, bound):
    """Freeze an F_n-set into operator tables up to the bound"""
    labels = {}
    queue = deque()

    def visit(x):
        key = fnset.label(x)
        if key not in labels:
            labels[key] = x
            queue.append(x)
        return key

    base = list(fnset.elements(bound))
    for x in base:
        visit(x)
    eta_rows = {}
    for x in base:
        m, n = fnset.bidegree(x)
        if m + n < bound:
            eta_rows[fnset.label(x)] = [visit(fnset.degeneracy(x, j)) for j in range(1, n + 2)]
    rows = {'d0': {}, 'd1': {}, 'd2': {}}
    while queue:
        x = queue.popleft()
        m, n = fnset.bidegree(x)
        key = fnset.label(x)
        for eps in (0, 1):
            rows[f"d{eps}"][key] = [visit(fnset.face(x, eps, i)) for i in range(1, m + n + 1)]
        rows['d2'][key] = [visit(fnset.face(x, 2, i)) for i in range(1, m + 1)]
    elements = []
    for key, x in labels.items():
        m, n = fnset.bidegree(x)
        elements.append({'label': key, 'm': m, 'n': n, 'degenerate': fnset.is_degenerate(x)})
    logger.info(f"Materialized {fnset.name}: {len(elements)} elements")
    return TableFnSet(elements, rows['d0'], rows['d1'], rows['d2'], eta_rows, fnset.name)


def identity_instances(m, n):
    """Identity instances (name, lhs word, rhs word) on an element of bidegree (m, n)"""
    total = m + n
    span = range(1, total + 2)
    for i in span:
        for j in span:
            if i < j:
                yield 'd0d0', [('d0', i), ('d0', j)], [('d0', j - 1), ('d0', i)]
                if not (m > 0 and (i, j) == (1, 2)):
                    yield 'd1d1', [('d1', i), ('d1', j)], [('d1', j - 1), ('d1', i)]
                yield 'd1d0', [('d1', i), ('d0', j)], [('d0', j - 1), ('d1', i)]
            else:
                yield 'd1d0', [('d1', i), ('d0', j)], [('d0', j), ('d1', i + 1)]
            if j > i:
                yield 'd2d0', [('d2', i), ('d0', j)], [('d0', j - i), ('d2', i)]
            if i < j - 1:
                yield 'd2d1', [('d2', i), ('d1', j)], [('d1', j - i), ('d2', i)]
            elif j > 1:
                yield 'd2d1', [('d2', i), ('d1', j)], [('d1', total + j - i - 2), ('d2', i + 1)]
            yield 'd2d2', [('d2', i), ('d2', j)], [('d0', total - i), ('d2', i + j)]


def degeneracy_instances(m, n):
    """Instances involving eta_j on an element of bidegree (m, n)"""
    for j in range(1, n + 2):
        for eps in ('d0', 'd1'):
            for i in range(m + 1, m + n + 2):
                if i < m + j:
                    yield f"{eps}eta", [(eps, i), ('eta', j)], [('eta', j - 1), (eps, i)]
                elif i == m + j:
                    yield f"{eps}eta", [(eps, i), ('eta', j)], []
                else:
                    yield f"{eps}eta", [(eps, i), ('eta', j)], [('eta', j), (eps, i - 1)]
        for i in range(1, m + 1):
            yield 'd0eta', [('d0', i), ('eta', j)], [('eta', j + m - i), ('d0', i)]
            yield 'd1eta', [('d1', i), ('eta', j)], [('eta', j), ('d1', i)]
            yield 'd2eta', [('d2', i), ('eta', j)], [('eta', j), ('d2', i)]
        for i in range(1, j + 1):
            yield 'etaeta', [('eta', i), ('eta', j)], [('eta', j + 1), ('eta', i)]


def _word_text(word):
    return ' '.join(f"{op}_{index}" for op, index in word) or 'id'


def verify_fnset(fnset, bound):
    """Check the structural identities on every element up to the bound"""
    checked = 0
    violations = []
    samples = []
    for x in fnset.elements(bound):
        m, n = fnset.bidegree(x)
        samples.append(x)
        if m + n < bound:
            samples.extend(fnset.degeneracy(x, j) for j in range(1, n + 2))
    for y in samples:
        m, n = fnset.bidegree(y)
        instances = list(identity_instances(m, n))
        if not fnset.is_degenerate(y):
            instances += list(degeneracy_instances(m, n))
        for name, lhs_word, rhs_word in instances:
            lhs = fnset.apply(y, lhs_word)
            rhs = fnset.apply(y, rhs_word)
            if lhs is None or rhs is None:
                continue
            checked += 1
            if lhs != rhs:
                violations.append({
                    'identity': name,
                    'element': fnset.label(y),
                    'lhs': f"{_word_text(lhs_word)} = {fnset.label(lhs)}",
                    'rhs': f"{_word_text(rhs_word)} = {fnset.label(rhs)}"
                })
    logger.info(f"{fnset.name}: {checked} identity instances, {len(violations)} violations")
    return Certificate(
        'fnset_identities',
        params={'fnset': fnset.name, 'bound': bound},
        verdict='fail' if violations else 'pass',
        witnesses=violations[:MAX_WITNESSES],
        details={'checked': checked, 'violations': len(violations)}
    )


def check_cubical_subset(fnset, bound):
    """d0_1 and d2_m carry every element into the m = 0 part"""
    witnesses = []
    for x in fnset.elements(bound):
        m, _ = fnset.bidegree(x)
        if m == 0:
            continue
        for op, index in (('d0', 1), ('d2', m)):
            y = fnset.apply(x, [(op, index)])
            if y is not None and fnset.bidegree(y)[0] != 0:
                witnesses.append({'element': fnset.label(x), 'operator': f"{op}_{index}"})
    return Certificate(
        'cubical_subset',
        params={'fnset': fnset.name, 'bound': bound},
        verdict='fail' if witnesses else 'pass',
        witnesses=witnesses[:MAX_WITNESSES]
    )


def boundary(fnset, x):
    """Normalized differential of one element; degenerate faces vanish"""
    if fnset.is_degenerate(x):
        return {}
    m, n = fnset.bidegree(x)
    total = m + n
    chain = {}
    for i in range(1, total + 1):
        sign = -1 if i % 2 else 1
        for eps, coeff in ((0, sign), (1, -sign)):
            y = fnset.face(x, eps, i)
            if not fnset.is_degenerate(y):
                add_term(chain, y, coeff)
    for i in range(2, m + 1):
        y = fnset.face(x, 2, i)
        if not fnset.is_degenerate(y):
            add_term(chain, y, -1 if ((i - 1) * total) % 2 else 1)
    return chain


def normalized_chains(fnset, ring, bound):
    """Normalized chains: nondegenerate elements by total degree"""
    bases = {}
    for x in fnset.elements(bound):
        bases.setdefault(fnset.total(x), []).append(x)
    for degree in bases:
        bases[degree].sort(key=fnset.label)
    differentials = {d: {x: boundary(fnset, x) for x in xs} for d, xs in bases.items()}
    exact_through = None if fnset.finite else bound - 1
    logger.debug(f"{fnset.name}: normalized ranks {[len(bases[d]) for d in sorted(bases)]}")
    return ChainComplex(ring, bases, differentials, exact_through=exact_through)


@lru_cache(maxsize=None)
def face_words(m, n):
    """A word of face operators reaching each cell of F_m x I^n from the top cell"""
    top = freehedra.top_cell(m, n)
    words = {top: ()}
    queue = deque([top])
    while queue:
        cell = queue.popleft()
        cm, cn = cell.bidegree
        ops = [(f"d{eps}", i) for eps in (0, 1) for i in range(1, cm + cn + 1)]
        ops += [('d2', i) for i in range(1, cm + 1)]
        for op, index in ops:
            target = freehedra.face(cell, int(op[1]), index)
            if target not in words:
                words[target] = ((op, index),) + words[cell]
                queue.append(target)
    return words


class Coalgebra:
    """Diagonal on normalized chains induced through characteristic maps"""

    def __init__(self, fnset, ring, bound):
        self.fnset = fnset
        self.ring = ring
        self.bound = bound
        self.chains = normalized_chains(fnset, ring, bound)

    def diagonal(self, x):
        fnset = self.fnset
        if fnset.is_degenerate(x):
            return {}
        m, n = fnset.bidegree(x)
        words = face_words(m, n)
        result = {}
        for (left, right), coeff in freehedra.diagonal(freehedra.top_cell(m, n)).items():
            y = fnset.apply(x, list(words[left]))
            z = fnset.apply(x, list(words[right]))
            if fnset.is_degenerate(y) or fnset.is_degenerate(z):
                continue
            add_term(result, (y, z), coeff)
        return {k: self.ring.reduce(v) for k, v in result.items() if self.ring.reduce(v)}

    def check_chain_map(self, x):
        """(d x 1 + 1 x d) Delta x - Delta d x; empty when the identity holds"""
        fnset = self.fnset
        difference = {}
        for (y, z), coeff in self.diagonal(x).items():
            for target, value in boundary(fnset, y).items():
                add_term(difference, (target, z), coeff * value)
            sign = -1 if fnset.total(y) % 2 else 1
            for target, value in boundary(fnset, z).items():
                add_term(difference, (y, target), sign * coeff * value)
        for face_element, value in boundary(fnset, x).items():
            for pair, coeff in self.diagonal(face_element).items():
                add_term(difference, pair, -value * coeff)
        return {k: self.ring.reduce(v) for k, v in difference.items() if self.ring.reduce(v)}

    def verify(self):
        witnesses = []
        checked = 0
        for x in self.fnset.elements(self.bound):
            checked += 1
            difference = self.check_chain_map(x)
            if difference:
                witnesses.append({'element': self.fnset.label(x), 'terms': len(difference)})
        return Certificate(
            'coalgebra_chain_map',
            params={'fnset': self.fnset.name, 'bound': self.bound, 'ring': str(self.ring)},
            verdict='fail' if witnesses else 'pass',
            witnesses=witnesses[:MAX_WITNESSES],
            details={'checked': checked}
        )


def coalgebra(fnset, ring, bound):
    return Coalgebra(fnset, ring, bound)


class FnSetService:

    @staticmethod
    def verify(m=None, n=None, table=None, fault=None):
        """Identity certificate for F_m x I^n or for a table loaded by FnSetSchema"""
        try:
            if table is not None:
                fnset = TableFnSet.from_dict(table)
                bound = max((int(e['m']) + int(e['n']) for e in table['elements']), default=0) + 1
            else:
                fnset = FreehedronSet(m, n)
                bound = m + n + 1
            if fault:
                fnset = MutatedFnSet(fnset, fault)
            return verify_fnset(fnset, bound), None
        except Exception as e:
            logger.error(f"F_n-set verification error: {str(e)}")
            return None, str(e)
