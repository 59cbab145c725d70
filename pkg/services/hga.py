"""
Homotopy G-algebra operations E_{k,1} on a graded algebra.

BauesHga evaluates E_{k,1}(a_1..a_k; b) on a simplex of dimension
N = sum|a_i| + |b| - k by tiling its vertices with |b| blocks: the k long
blocks carry the a_i in order, the remaining blocks are single edges, and
b is read off the set of block endpoints.
"""
import logging
from abc import ABC, abstractmethod
from itertools import combinations, product as cartesian

from exceptions import PreconditionError
from models import Certificate
from services.algebras import SimplicialCochains
from services.chain_algebra import add_scaled, homology_basis, reduce_chain

logger = logging.getLogger(__name__)

MAX_WITNESSES = 10


def _sign(exponent):
    return -1 if exponent % 2 else 1


class HgaStructure(ABC):
    provenance = 'hga'

    def __init__(self, algebra):
        self.algebra = algebra
        self.ring = algebra.ring
        self._cache = {}

    @abstractmethod
    def _operation(self, args, b):
        """E_{k,1} on basis labels with k = len(args) >= 1"""

    def E(self, args, b):
        args = tuple(args)
        if not args:
            return {b: 1}
        key = (args, b)
        if key not in self._cache:
            self._cache[key] = reduce_chain(self._operation(args, b), self.ring)
        return self._cache[key]

    def apply(self, chains, b_chain):
        """Multilinear extension of E to chain arguments"""
        result = {}
        if any(not c for c in chains):
            return result
        for b, coeff_b in b_chain.items():
            for choice in cartesian(*[list(c.items()) for c in chains]):
                scale = coeff_b
                for _, coeff in choice:
                    scale *= coeff
                add_scaled(result, self.E([label for label, _ in choice], b), scale)
        return reduce_chain(result, self.ring)

    def cup1(self, a, b):
        return self.apply([a], b)

    def describe(self):
        return {'provenance': self.provenance, 'algebra': self.algebra.name, 'ring': str(self.ring)}


class TrivialHga(HgaStructure):
    """E_{0,1} = id and every higher operation zero"""

    provenance = 'trivial'

    def _operation(self, args, b):
        return {}


class BauesHga(HgaStructure):
    """Baues operations on the normalized cochains of a 1-reduced simplicial set"""

    provenance = 'baues'
    FAULTS = ('baues_sign',)

    def __init__(self, algebra, fault=None):
        if not isinstance(algebra, SimplicialCochains):
            raise PreconditionError("Baues operations need simplicial cochains")
        if fault is not None and fault not in self.FAULTS:
            raise PreconditionError(f"Unknown hga fault: {fault}")
        super().__init__(algebra)
        self.space = algebra.space
        self.fault = fault
        if fault:
            self.provenance = f"baues [{fault}]"

    def _operation(self, args, b):
        algebra = self.algebra
        degrees = [algebra.degree(a) for a in args]
        q = algebra.degree(b)
        k = len(args)
        if min(degrees) == 0 or q < k:
            return {}
        alphas = [d - 1 for d in degrees]
        n = sum(degrees) + q - k
        exponent = (q - 1) * sum(alphas) + sum(alphas[i] * alphas[j] for i in range(k) for j in range(i))
        overall = _sign(exponent)
        if self.fault == 'baues_sign' and k == 2:
            overall = -overall
        result = {}
        for sigma in self.space.generators_of_dim(n):
            x = self.space.simplex(sigma)
            value = 0
            for positions in combinations(range(q), k):
                if self._matches(x, args, degrees, positions, q, b):
                    value += _sign(sum(a * p for a, p in zip(alphas, positions)))
            if value:
                result[sigma] = overall * value
        return result

    def _matches(self, x, args, degrees, positions, blocks, b):
        """Whether the long blocks carry the a_i and the endpoints carry b"""
        start = 0
        endpoints = [0]
        long_blocks = dict(zip(positions, range(len(args))))
        for index in range(blocks):
            t = long_blocks.get(index)
            length = degrees[t] if t is not None else 1
            if t is not None:
                piece = self.space.vertex_face(x, range(start, start + length + 1))
                if self.space.name_of(piece) != args[t]:
                    return False
            start += length
            endpoints.append(start)
        return self.space.name_of(self.space.vertex_face(x, endpoints)) == b


def interleavings(k, l):
    """Order-preserving merges of k a-letters and l b-letters where each b
    absorbs a consecutive (possibly empty) run of a-letters just before it.

    Each merge is a list of groups (a indices, b index or None); a group
    with no b holds exactly one a-letter.
    """
    merges = []

    def extend(i, j, groups):
        if i == k and j == l:
            merges.append(list(groups))
            return
        if i < k:
            extend(i + 1, j, groups + [((i,), None)])
        if j < l:
            for r in range(k - i + 1):
                extend(i + r, j + 1, groups + [(tuple(range(i, i + r)), j)])

    extend(0, 0, [])
    return merges


def merge_sign(groups, a_bars, b_bars):
    """Koszul sign of moving a-letters past earlier b-letters"""
    exponent = 0
    passed = 0
    for a_indices, b_index in groups:
        exponent += passed * sum(a_bars[i] for i in a_indices)
        if b_index is not None:
            passed += b_bars[b_index]
    return _sign(exponent)


def _epsilons(algebra, args):
    eps = [0]
    for a in args:
        eps.append(eps[-1] + algebra.degree(a) + 1)
    return eps


def _difference(lhs, rhs, ring):
    diff = dict(lhs)
    add_scaled(diff, rhs, -1)
    return reduce_chain(diff, ring)


def _differential_rhs(hga, args, b):
    algebra = hga.algebra
    k = len(args)
    eps = _epsilons(algebra, args)
    units = [algebra.element(a) for a in args]
    rhs = {}
    for i in range(k):
        chains = units[:i] + [algebra.d(units[i])] + units[i + 1:]
        add_scaled(rhs, hga.apply(chains, {b: 1}), _sign(eps[i]))
    add_scaled(rhs, hga.apply(units, algebra.d({b: 1})), _sign(eps[k]))
    for i in range(1, k):
        merged = units[:i - 1] + [algebra.mul(units[i - 1], units[i])] + units[i + 1:]
        add_scaled(rhs, hga.apply(merged, {b: 1}), _sign(eps[i]))
    last = algebra.degree(args[-1])
    add_scaled(rhs, algebra.mul(hga.apply(units[:-1], {b: 1}), units[-1]), _sign(eps[k] + last * algebra.degree(b)))
    add_scaled(rhs, algebra.mul(units[0], hga.apply(units[1:], {b: 1})), _sign(algebra.degree(args[0])))
    return reduce_chain(rhs, hga.ring)


def _product_rhs(hga, args, b, c):
    algebra = hga.algebra
    k = len(args)
    eps = _epsilons(algebra, args)
    units = [algebra.element(a) for a in args]
    rhs = {}
    for i in range(k + 1):
        left = hga.apply(units[:i], {b: 1})
        right = hga.apply(units[i:], {c: 1})
        add_scaled(rhs, algebra.mul(left, right), _sign(algebra.degree(b) * (eps[i] + eps[k])))
    return reduce_chain(rhs, hga.ring)


def _composition_rhs(hga, args, inner, c):
    algebra = hga.algebra
    a_bars = [algebra.degree(a) - 1 for a in args]
    b_bars = [algebra.degree(b) - 1 for b in inner]
    rhs = {}
    for groups in interleavings(len(args), len(inner)):
        chains = []
        for a_indices, b_index in groups:
            if b_index is None:
                chains.append(algebra.element(args[a_indices[0]]))
            else:
                chains.append(hga.E([args[i] for i in a_indices], inner[b_index]))
        add_scaled(rhs, hga.apply(chains, {c: 1}), merge_sign(groups, a_bars, b_bars))
    return reduce_chain(rhs, hga.ring)


def _tuples(algebra, size, bound):
    """Tuples of positive-degree basis labels with total degree <= bound"""
    labels = [x for k in range(1, bound + 1) for x in algebra.positive_basis(k)]
    for combo in cartesian(labels, repeat=size):
        if sum(algebra.degree(x) for x in combo) <= bound:
            yield combo


def verify_hga(hga, bound, kmax=2):
    """Check the differential, product and composition identities on basis tuples"""
    algebra = hga.algebra
    bound = min(bound, algebra.top)
    witnesses = []
    checked = 0

    def record(name, params, diff):
        if diff:
            witnesses.append({'identity': name, 'args': list(params), 'terms': len(diff)})

    for k in range(1, kmax + 1):
        for combo in _tuples(algebra, k + 1, bound + k - 1):
            *args, b = combo
            checked += 1
            lhs = algebra.d(hga.E(args, b))
            record('differential', combo, _difference(lhs, _differential_rhs(hga, args, b), hga.ring))
        for combo in _tuples(algebra, k + 2, bound + k):
            *args, b, c = combo
            checked += 1
            lhs = hga.apply([algebra.element(a) for a in args], algebra.mul({b: 1}, {c: 1}))
            record('product', combo, _difference(lhs, _product_rhs(hga, args, b, c), hga.ring))
    for k in range(1, kmax):
        for l in range(1, kmax - k + 1):
            for combo in _tuples(algebra, k + l + 1, bound + k + l):
                args, inner, c = combo[:k], combo[k:k + l], combo[-1]
                checked += 1
                lhs = hga.apply([algebra.element(a) for a in args], hga.E(inner, c))
                record('composition', combo, _difference(lhs, _composition_rhs(hga, args, inner, c), hga.ring))
    logger.info(f"hga {hga.provenance} on {algebra.name}: {checked} instances, {len(witnesses)} failures")
    return Certificate(
        'hga_identities',
        params={'algebra': algebra.name, 'provenance': hga.provenance, 'bound': bound, 'kmax': kmax},
        verdict='fail' if witnesses else 'pass',
        witnesses=witnesses[:MAX_WITNESSES],
        details={'checked': checked, 'failures': len(witnesses)}
    )


def cocycles(algebra, k, bound=None):
    """Cocycle basis elements and homology representatives in degree k"""
    complex_ = algebra.cochain_complex(bound if bound is not None else algebra.top)
    found = [{x: 1} for x in algebra.positive_basis(k) if not algebra.differential(x)]
    if complex_.rank(k):
        for representative in homology_basis(complex_, k).representatives:
            if representative not in found:
                found.append(representative)
    return found


def left_hirsch_defect(hga, c, a, b):
    """c u1 (ab) - (c u1 a) b - (-1)^{|a|(|c|+1)} a (c u1 b) on basis labels"""
    algebra = hga.algebra
    lhs = hga.cup1({c: 1}, algebra.mul({a: 1}, {b: 1}))
    rhs = algebra.mul(hga.cup1({c: 1}, {a: 1}), {b: 1})
    add_scaled(rhs, algebra.mul({a: 1}, hga.cup1({c: 1}, {b: 1})),
               _sign(algebra.degree(a) * (algebra.degree(c) + 1)))
    return _difference(lhs, rhs, hga.ring)


def right_hirsch_defect(hga, u, v, b):
    """(uv) u1 b - (-1)^{|v|+|v||b|} (u u1 b) v - u (v u1 b)"""
    algebra = hga.algebra
    if not u or not v or not b:
        return {}
    q, r = algebra.degree_of(v), algebra.degree_of(b)
    defect = hga.cup1(algebra.mul(u, v), b)
    add_scaled(defect, algebra.mul(hga.cup1(u, b), v), -_sign(q + q * r))
    add_scaled(defect, algebra.mul(u, hga.cup1(v, b)), -1)
    return reduce_chain(defect, hga.ring)


def hirsch_homotopy_defect(hga, u, v, b):
    """d E_{2,1}(u,v;b) + (-1)^{|u|} times the right Hirsch defect"""
    algebra = hga.algebra
    lhs = algebra.d(hga.apply([u, v], b))
    rhs = {}
    add_scaled(rhs, right_hirsch_defect(hga, u, v, b), -_sign(algebra.degree_of(u)))
    return _difference(lhs, rhs, hga.ring)


def hirsch_check(hga, bound):
    """Left Hirsch formula on basis triples and the E_{2,1} homotopy on cocycles"""
    algebra = hga.algebra
    bound = min(bound, algebra.top)
    witnesses = []
    checked = 0
    for c, a, b in _tuples(algebra, 3, bound + 1):
        checked += 1
        defect = left_hirsch_defect(hga, c, a, b)
        if defect:
            witnesses.append({'identity': 'left_hirsch', 'args': [c, a, b]})
    by_degree = {k: cocycles(algebra, k, bound) for k in range(2, bound + 1)}
    for p, q, r in cartesian(range(2, bound + 1), repeat=3):
        if p + q + r - 1 > bound:
            continue
        for u in by_degree[p]:
            for v in by_degree[q]:
                for b in by_degree[r]:
                    checked += 1
                    if hirsch_homotopy_defect(hga, u, v, b):
                        witnesses.append({'identity': 'hirsch_homotopy', 'degrees': [p, q, r]})
    return Certificate(
        'hirsch',
        params={'algebra': algebra.name, 'provenance': hga.provenance, 'bound': bound},
        verdict='fail' if witnesses else 'pass',
        witnesses=witnesses[:MAX_WITNESSES],
        details={'checked': checked}
    )


def right_hirsch_witness(hga, bound):
    """First basis triple on which (uv) u1 b is not a strict right derivation"""
    algebra = hga.algebra
    bound = min(bound, algebra.top)
    for u, v, b in _tuples(algebra, 3, bound + 1):
        defect = right_hirsch_defect(hga, {u: 1}, {v: 1}, {b: 1})
        if defect:
            return {'u': u, 'v': v, 'b': b, 'defect': {str(k): value for k, value in sorted(defect.items())}}
    return None


def sq1(hga, z):
    """The class [z u1 z] when it is defined"""
    algebra = hga.algebra
    if algebra.d(z):
        raise PreconditionError("Sq_1 needs a cocycle")
    n = algebra.degree_of(z)
    if n is None:
        return {'defined': True, 'degree': None, 'vanishes': True, 'coordinates': []}
    square = hga.cup1(z, z)
    degree = 2 * n - 1
    if algebra.d(square):
        return {'defined': False, 'degree': degree, 'vanishes': None, 'coordinates': None}
    if degree > algebra.top or not square:
        return {'defined': True, 'degree': degree, 'vanishes': True, 'coordinates': []}
    basis = homology_basis(algebra.cochain_complex(degree), degree)
    coordinates = basis.coordinates(square)
    return {
        'defined': True,
        'degree': degree,
        'vanishes': all(c == 0 for c in coordinates),
        'coordinates': [str(c) for c in coordinates]
    }
