"""
Degreewise finite graded dg algebras used as carriers.

Elements are sparse dicts {basis label: coefficient}. Degrees are
cohomological and the differential raises degree by one.
"""
import logging
from abc import ABC, abstractmethod
from itertools import product as cartesian

from exceptions import DegreeError
from models import ChainComplex
from services.chain_algebra import add_scaled, add_term, reduce_chain

logger = logging.getLogger(__name__)


class GradedAlgebra(ABC):
    name = 'algebra'
    unit = '1'
    finite = False

    def __init__(self, ring, top):
        self.ring = ring
        self.top = top
        self._products = {}
        self._differentials = {}

    @abstractmethod
    def basis(self, k):
        pass

    @abstractmethod
    def degree(self, x):
        pass

    @abstractmethod
    def _product(self, x, y):
        pass

    @abstractmethod
    def _differential(self, x):
        pass

    def product(self, x, y):
        key = (x, y)
        if key not in self._products:
            self._products[key] = reduce_chain(self._product(x, y), self.ring)
        return self._products[key]

    def differential(self, x):
        if x not in self._differentials:
            self._differentials[x] = reduce_chain(self._differential(x), self.ring)
        return self._differentials[x]

    def mul(self, u, v):
        result = {}
        for x, a in u.items():
            for y, b in v.items():
                add_scaled(result, self.product(x, y), a * b)
        return reduce_chain(result, self.ring)

    def d(self, u):
        result = {}
        for x, a in u.items():
            add_scaled(result, self.differential(x), a)
        return reduce_chain(result, self.ring)

    def element(self, x):
        return {x: 1}

    def one(self):
        return {self.unit: 1}

    def degree_of(self, u):
        degrees = {self.degree(x) for x in u}
        if len(degrees) > 1:
            raise DegreeError(f"Inhomogeneous element in degrees {sorted(degrees)}")
        return degrees.pop() if degrees else None

    def positive_basis(self, k):
        return [x for x in self.basis(k) if x != self.unit]

    def is_one_reduced(self):
        return self.basis(0) == [self.unit] and not self.basis(1)

    def cochain_complex(self, bound=None):
        """The underlying cochain complex, exact through the bound"""
        bound = self.top if bound is None else min(bound, self.top)
        last = min(bound + 1, self.top)
        bases = {k: self.basis(k) for k in range(last + 1)}
        differentials = {k: {x: self.differential(x) for x in bases[k]} for k in range(last)}
        exact = None if self.finite and last == self.top else bound
        return ChainComplex(self.ring, bases, differentials, cohomological=True, exact_through=exact)

    def commutativity_defect(self, bound=None):
        """First basis pair with xy != (-1)^{|x||y|} yx, or None"""
        bound = self.top if bound is None else bound
        for p in range(bound + 1):
            for q in range(bound + 1 - p):
                for x in self.basis(p):
                    for y in self.basis(q):
                        lhs = dict(self.product(x, y))
                        add_scaled(lhs, self.product(y, x), -(-1) ** (p * q))
                        if reduce_chain(lhs, self.ring):
                            return {'x': x, 'y': y}
        return None


class SimplicialCochains(GradedAlgebra):
    """Normalized cochains of a 1-reduced simplicial set; the unit is the dual of v"""

    finite = True

    def __init__(self, space, ring):
        super().__init__(ring, space.dimension)
        self.space = space
        self.name = f"C*({space.name})"
        self.unit = 'v'
        self._table = {}
        for k in range(2, space.dimension + 1):
            for sigma in space.generators_of_dim(k):
                for p, front, back in space.aw_pieces(sigma):
                    sign = -1 if (p * (k - p)) % 2 else 1
                    add_term(self._table.setdefault((front, back), {}), sigma, sign)
        self._table[('v', 'v')] = {'v': 1}
        self._coboundary = {}
        for k in range(3, space.dimension + 1):
            for sigma in space.generators_of_dim(k):
                for face_name, coeff in space.boundary(sigma).items():
                    sign = -1 if (k - 1) % 2 else 1
                    add_term(self._coboundary.setdefault(face_name, {}), sigma, sign * coeff)

    def basis(self, k):
        return self.space.generators_of_dim(k)

    def degree(self, x):
        return self.space.generators[x]

    def _product(self, x, y):
        return dict(self._table.get((x, y), {}))

    def _differential(self, x):
        return dict(self._coboundary.get(x, {}))


class PolynomialAlgebra(GradedAlgebra):
    """Free graded commutative algebra S(U) with zero differential.

    Odd generators are exterior except over Z/2, where S(U) is polynomial.
    Labels listed in ``exterior`` square to zero whatever their degree.
    """

    def __init__(self, generators, ring, top, name=None, exterior=()):
        super().__init__(ring, top)
        self.generators = [(label, int(degree)) for label, degree in generators]
        if any(degree < 1 for _, degree in self.generators):
            raise DegreeError("Generators must have positive degree")
        self.name = name or 'S(' + ','.join(f"{label}{degree}" for label, degree in self.generators) + ')'
        self.exterior = [(degree % 2 == 1 and ring.modulus != 2) or label in exterior
                         for label, degree in self.generators]
        self._exponents = {}
        self._by_degree = {}
        self.unit = self.label((0,) * len(self.generators))

    def label(self, exponents):
        parts = []
        for (name, _), e in zip(self.generators, exponents):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        text = '*'.join(parts) or '1'
        self._exponents[text] = tuple(exponents)
        return text

    def exponents(self, x):
        if x not in self._exponents:
            powers = {}
            for part in x.split('*') if x != '1' else []:
                name, _, power = part.partition('^')
                powers[name] = int(power) if power else 1
            names = [name for name, _ in self.generators]
            if any(name not in names for name in powers):
                raise DegreeError(f"{x} is not a monomial of {self.name}")
            self._exponents[x] = tuple(powers.get(name, 0) for name in names)
        return self._exponents[x]

    def degree(self, x):
        return sum(e * d for e, (_, d) in zip(self.exponents(x), self.generators))

    def basis(self, k):
        if k not in self._by_degree:
            found = []

            def extend(prefix, remaining, index):
                if index == len(self.generators):
                    if remaining == 0:
                        found.append(self.label(prefix))
                    return
                degree = self.generators[index][1]
                limit = 1 if self.exterior[index] else remaining // degree
                for e in range(min(limit, remaining // degree) + 1):
                    extend(prefix + (e,), remaining - e * degree, index + 1)

            if 0 <= k:
                extend((), k, 0)
            self._by_degree[k] = sorted(found, key=lambda x: tuple(-e for e in self.exponents(x)))
        return self._by_degree[k]

    def _product(self, x, y):
        e, f = self.exponents(x), self.exponents(y)
        total = []
        for index, (a, b) in enumerate(zip(e, f)):
            if self.exterior[index] and a + b > 1:
                return {}
            total.append(a + b)
        odd = [d % 2 == 1 for _, d in self.generators]
        swaps = sum(e[i] * f[j] for i in range(len(e)) for j in range(i) if odd[i] and odd[j])
        return {self.label(total): -1 if swaps % 2 else 1}

    def _differential(self, x):
        return {}


def _words(length, letters='XYZ'):
    for word in cartesian(letters, repeat=length):
        text = ''.join(word)
        if 'XX' not in text and 'YY' not in text:
            yield text


class ExampleOneAlgebra(GradedAlgebra):
    """k[x,y] (x) T(X,Y,Z)/(XX,YY) with |x|=|y|=2, |X|=|Y|=|Z|=1.

    dZ = XY + YX, plus x when perturbed.
    """

    def __init__(self, ring, top, perturbed=True):
        super().__init__(ring, top)
        self.perturbed = perturbed
        self.name = 'C' if perturbed else 'A (x) B'
        self._parts = {}
        self.unit = self.label(0, 0, '')

    def label(self, i, j, word):
        mono = '*'.join(p for p in (
            'x' if i == 1 else (f"x^{i}" if i else ''),
            'y' if j == 1 else (f"y^{j}" if j else '')) if p)
        text = '*'.join(p for p in (mono, word) if p) or '1'
        self._parts[text] = (i, j, word)
        return text

    def parts(self, x):
        if x not in self._parts:
            i = j = 0
            word = ''
            for part in x.split('*') if x != '1' else []:
                name, _, power = part.partition('^')
                if name == 'x':
                    i = int(power) if power else 1
                elif name == 'y':
                    j = int(power) if power else 1
                elif set(name) <= set('XYZ') and self._valid(name):
                    word = name
                else:
                    raise DegreeError(f"{x} is not a basis element of {self.name}")
            self._parts[x] = (i, j, word)
        return self._parts[x]

    def degree(self, x):
        i, j, word = self.parts(x)
        return 2 * (i + j) + len(word)

    def basis(self, k):
        found = []
        for even in range(k // 2 + 1):
            for i in range(even + 1):
                for word in _words(k - 2 * even):
                    found.append(self.label(i, even - i, word))
        return found

    @staticmethod
    def _valid(word):
        return 'XX' not in word and 'YY' not in word

    def _product(self, x, y):
        i, j, w = self.parts(x)
        k, l, v = self.parts(y)
        if not self._valid(w + v):
            return {}
        return {self.label(i + k, j + l, w + v): 1}

    def _differential(self, x):
        i, j, word = self.parts(x)
        result = {}
        for p, letter in enumerate(word):
            if letter != 'Z':
                continue
            sign = -1 if p % 2 else 1
            for replacement in ('XY', 'YX'):
                candidate = word[:p] + replacement + word[p + 1:]
                if self._valid(candidate):
                    add_term(result, self.label(i, j, candidate), sign)
            if self.perturbed:
                candidate = word[:p] + word[p + 1:]
                if self._valid(candidate):
                    add_term(result, self.label(i + 1, j, candidate), sign)
        return result
