"""
The monoidal cubical set Omega X, truncating twisting functions and the
bitwisted Cartesian product Lambda X of a 1-reduced simplicial set.

A cube of Omega X is a product of barred simplices of dimension >= 2 plus
star coordinates (cubical degeneracies) at global positions. Normal forms
drop edges and turn a top-degenerate factor s_{q-1} g into g followed by a
star, so eta_n tau(x) = tau(s_n x). A cell of Lambda X is a pair
(x, w) with (s_m x, w) ~ (x, eta_1 w) oriented toward stripping the
simplicial degeneracy.
"""
import logging
from collections import namedtuple

from exceptions import FaceIndexError, PreconditionError
from models import Certificate, ChainComplex, Ring
from services.chain_algebra import homology
from services.fn_sets import FnSet, normalized_chains
from services.simplicial import BASE, load_space
from services.twisted import cartier, cobar, words_by_degree

logger = logging.getLogger(__name__)

MAX_WITNESSES = 10

Cube = namedtuple('Cube', ['factors', 'stars'])
LoopCell = namedtuple('LoopCell', ['simplex', 'cube'])

UNIT = Cube((), ())


def _dim(x):
    return len(x[1]) - 1


def _top_degenerate(x):
    sigma = x[1]
    return len(sigma) >= 2 and sigma[-1] == sigma[-2]


def simplex_label(space, x):
    if not space.is_degenerate(x):
        return x[0]
    return f"{x[0]}<{','.join(str(s) for s in x[1])}>"


class OmegaSet:
    """Cubes of Omega X with faces, degeneracies and concatenation"""

    def __init__(self, space):
        if space.generators_of_dim(1) or space.generators_of_dim(0) != [BASE]:
            raise PreconditionError(f"{space.name} is not 1-reduced")
        self.space = space
        self.name = f"Omega({space.name})"
        self.letters = {g: d - 1 for g, d in space.generators.items() if d >= 2}

    def dimension(self, w):
        return sum(_dim(f) - 1 for f in w.factors) + len(w.stars)

    def normalize(self, factors, stars):
        stars = set(stars)
        size = sum(_dim(f) - 1 for f in factors) + len(stars)
        free = [p for p in range(1, size + 1) if p not in stars]
        cursor = 0
        result = []
        for f in factors:
            q = _dim(f)
            coords = free[cursor:cursor + q - 1]
            cursor += max(q - 1, 0)
            while q >= 2 and _top_degenerate(f):
                stars.add(coords[-1])
                coords = coords[:-1]
                f = (f[0], f[1][:-1])
                q -= 1
            if q >= 2:
                result.append(f)
        return Cube(tuple(result), tuple(sorted(stars)))

    def bar(self, x):
        """tau_U(x) = x-bar in normal form; edges and vertices go to the unit"""
        return self.normalize((x,), ())

    def product(self, u, w):
        shift = self.dimension(u)
        return Cube(u.factors + w.factors, u.stars + tuple(s + shift for s in w.stars))

    def _locate(self, w, c):
        free = [p for p in range(1, self.dimension(w) + 1) if p not in w.stars]
        index = free.index(c)
        for t, f in enumerate(w.factors):
            width = _dim(f) - 1
            if index < width:
                return t, index + 1
            index -= width
        raise FaceIndexError('cube', c, self.dimension(w))

    def face(self, w, eps, c):
        size = self.dimension(w)
        if not 1 <= c <= size:
            raise FaceIndexError(f"d{eps}", c, size)
        if c in w.stars:
            stars = tuple(s - 1 if s > c else s for s in w.stars if s != c)
            return Cube(w.factors, stars)
        t, j = self._locate(w, c)
        f = w.factors[t]
        q = _dim(f)
        if eps == 0:
            pieces = (self.space.vertex_face(f, range(0, j + 1)), self.space.vertex_face(f, range(j, q + 1)))
        else:
            pieces = (self.space.face(f, j),)
        factors = w.factors[:t] + pieces + w.factors[t + 1:]
        stars = tuple(s - 1 if s > c else s for s in w.stars)
        return self.normalize(factors, stars)

    def degeneracy(self, w, j):
        size = self.dimension(w)
        if not 1 <= j <= size + 1:
            raise FaceIndexError('eta', j, size + 1)
        stars = tuple(sorted([s + 1 if s >= j else s for s in w.stars] + [j]))
        return Cube(w.factors, stars)

    def is_degenerate(self, w):
        return bool(w.stars) or any(self.space.is_degenerate(f) for f in w.factors)

    def label(self, w):
        text = '[' + '|'.join(simplex_label(self.space, f) for f in w.factors) + ']'
        if w.stars:
            text += '*' + ','.join(str(s) for s in w.stars)
        return text

    def word(self, w):
        return tuple(f[0] for f in w.factors)

    def elements(self, bound):
        """Nondegenerate monomials of degree <= bound"""
        words = words_by_degree(self.letters, bound)
        return [Cube(tuple(self.space.simplex(g) for g in word), ())
                for degree in range(bound + 1) for word in words[degree]]

    def boundary(self, w):
        chain = {}
        for c in range(1, self.dimension(w) + 1):
            sign = -1 if c % 2 else 1
            for eps, coeff in ((0, sign), (1, -sign)):
                y = self.face(w, eps, c)
                if not self.is_degenerate(y):
                    key = self.word(y)
                    value = chain.get(key, 0) + coeff
                    if value:
                        chain[key] = value
                    else:
                        chain.pop(key)
        return chain

    def chains(self, ring, bound):
        """Normalized cubical chains, with monomials labelled by their words"""
        bases = {}
        differentials = {}
        for w in self.elements(bound + 1):
            k = self.dimension(w)
            bases.setdefault(k, []).append(self.word(w))
            differentials.setdefault(k, {})[self.word(w)] = self.boundary(w)
        return ChainComplex(ring, bases, differentials, exact_through=bound)


def _compare(left, right, degrees, translate=None):
    """First entry where two complexes with matching labels differ"""
    translate = translate or (lambda label: label)
    for k in degrees:
        left_labels = {translate(label): label for label in left.basis(k)}
        if set(left_labels) != set(right.basis(k)):
            missing = sorted(set(right.basis(k)) ^ set(left_labels), key=str)
            return {'degree': k, 'basis_mismatch': [str(label) for label in missing[:MAX_WITNESSES]]}
        for label, source in sorted(left_labels.items(), key=lambda item: str(item[0])):
            image = {translate(t): v for t, v in left.boundary(k, source).items()}
            expected = right.boundary(k, label)
            if image != expected:
                for target in sorted(set(image) | set(expected), key=str):
                    if image.get(target, 0) != expected.get(target, 0):
                        return {
                            'degree': k,
                            'source': str(label),
                            'target': str(target),
                            'left': image.get(target, 0),
                            'right': expected.get(target, 0)
                        }
    return None


def compare_with_cobar(space, ring, bound):
    """C_*(Omega X) against the cobar construction on C_*(X)"""
    omega = OmegaSet(space)
    left = omega.chains(ring, bound)
    right = cobar(space, ring, bound)
    difference = _compare(left, right, range(bound + 2))
    return Certificate(
        'omega_cobar',
        params={'space': space.name, 'ring': str(ring), 'bound': bound},
        verdict='fail' if difference else 'pass',
        witnesses=[difference] if difference else [],
        details={'ranks': [left.rank(k) for k in range(bound + 1)]}
    )


class TwistingFunction:
    """A truncating twisting function X -> Omega X, tau_U unless a fault is injected"""

    FAULTS = ('twisting_swap',)

    def __init__(self, space, fault=None):
        if fault is not None and fault not in self.FAULTS:
            raise PreconditionError(f"Unknown twisting fault: {fault}")
        self.space = space
        self.omega = OmegaSet(space)
        self.fault = fault
        self.swap = {}
        if fault == 'twisting_swap':
            for k in range(2, space.dimension + 1):
                generators = space.generators_of_dim(k)
                if len(generators) >= 2:
                    a, b = generators[:2]
                    self.swap = {a: b, b: a}
                    break
            if not self.swap:
                raise PreconditionError(f"{space.name} has no pair of simplices to swap")
        self.name = 'tau_U' if fault is None else f"tau_U [{fault}]"

    def __call__(self, x):
        g, sigma = x
        return self.omega.bar((self.swap.get(g, g), sigma))

    def induced(self, w):
        """The monoidal map x1-bar..xk-bar -> tau(x1)..tau(xk), stars carried along"""
        image = UNIT
        for f in w.factors:
            image = self.omega.product(image, self(f))
        for s in w.stars:
            image = self.omega.degeneracy(image, s)
        return image


def verify_truncating(twisting, bound):
    """The truncating twisting axioms on simplices up to dimension bound + 1"""
    space = twisting.space
    omega = twisting.omega
    witnesses = []
    checked = 0

    def record(axiom, x, lhs, rhs):
        nonlocal checked
        checked += 1
        if lhs != rhs:
            witnesses.append({
                'axiom': axiom,
                'simplex': simplex_label(space, x),
                'lhs': omega.label(lhs),
                'rhs': omega.label(rhs)
            })

    edge = (BASE, (0, 0))
    record('unit', edge, twisting(edge), UNIT)
    for n in range(2, min(space.dimension, bound + 1) + 1):
        for g in space.generators_of_dim(n):
            x = space.simplex(g)
            image = twisting(x)
            for i in range(1, n):
                front = space.vertex_face(x, range(0, i + 1))
                back = space.vertex_face(x, range(i, n + 1))
                record(f"d0_{i}", x, omega.face(image, 0, i), omega.product(twisting(front), twisting(back)))
                record(f"d1_{i}", x, omega.face(image, 1, i), twisting(space.face(x, i)))
            record(f"eta_{n}", x, omega.degeneracy(image, n), twisting(space.degeneracy(x, n)))
    for w in omega.elements(bound):
        image = twisting.induced(w)
        for c in range(1, omega.dimension(w) + 1):
            for eps in (0, 1):
                checked += 1
                lhs = twisting.induced(omega.face(w, eps, c))
                rhs = omega.face(image, eps, c)
                if lhs != rhs:
                    witnesses.append({
                        'axiom': f"cubical d{eps}_{c}",
                        'simplex': omega.label(w),
                        'lhs': omega.label(lhs),
                        'rhs': omega.label(rhs)
                    })
    logger.info(f"{twisting.name} on {space.name}: {checked} axiom instances, {len(witnesses)} failures")
    return Certificate(
        'truncating_twisting',
        params={'space': space.name, 'twisting': twisting.name, 'bound': bound},
        verdict='fail' if witnesses else 'pass',
        witnesses=witnesses[:MAX_WITNESSES],
        details={'checked': checked, 'failures': len(witnesses)}
    )


class LambdaSet(FnSet):
    """The bitwisted product X x Omega X for a truncating twisting function"""

    def __init__(self, space, twisting=None):
        self.space = space
        self.twisting = twisting or TwistingFunction(space)
        self.omega = self.twisting.omega
        self.name = f"Lambda({space.name})" if twisting is None or twisting.fault is None \
            else f"Lambda({space.name}) [{twisting.fault}]"

    def cell(self, x, w):
        while _dim(x) >= 1 and _top_degenerate(x):
            x = (x[0], x[1][:-1])
            w = self.omega.degeneracy(w, 1)
        return LoopCell(x, w)

    def elements(self, bound):
        words = words_by_degree(self.omega.letters, bound)
        found = []
        for m in range(min(self.space.dimension, bound) + 1):
            for g in self.space.generators_of_dim(m):
                x = self.space.simplex(g)
                for n in range(bound - m + 1):
                    for word in words[n]:
                        found.append(LoopCell(x, Cube(tuple(self.space.simplex(h) for h in word), ())))
        return found

    def bidegree(self, cell):
        return _dim(cell.simplex), self.omega.dimension(cell.cube)

    def face(self, cell, eps, i):
        x, w = cell
        m, n = self.bidegree(cell)
        tau = self.twisting
        if eps == 2:
            if not 1 <= i <= m:
                raise FaceIndexError('d2', i, m)
            front = self.space.vertex_face(x, range(0, i + 1))
            back = self.space.vertex_face(x, range(i, m + 1))
            return self.cell(back, self.omega.product(w, tau(front)))
        if not 1 <= i <= m + n:
            raise FaceIndexError(f"d{eps}", i, m + n)
        if i > m:
            return self.cell(x, self.omega.face(w, eps, i - m))
        if eps == 0:
            front = self.space.vertex_face(x, range(0, i))
            back = self.space.vertex_face(x, range(i - 1, m + 1))
            return self.cell(front, self.omega.product(tau(back), w))
        return self.cell(self.space.face(x, i - 1), w)

    def degeneracy(self, cell, j):
        return self.cell(cell.simplex, self.omega.degeneracy(cell.cube, j))

    def is_degenerate(self, cell):
        return self.space.is_degenerate(cell.simplex) or self.omega.is_degenerate(cell.cube)

    def label(self, cell):
        return f"{simplex_label(self.space, cell.simplex)} {self.omega.label(cell.cube)}"

    def cartier_label(self, cell):
        """The Cartier basis element v (x) [c1|..|cn] matching a nondegenerate cell"""
        return cell.simplex[0], self.omega.word(cell.cube)


def bitwisted_product(space, twisting=None, bound=None):
    """Lambda X for the given twisting function, optionally checking its axioms first"""
    twisting = twisting or TwistingFunction(space)
    if bound is not None:
        certificate = verify_truncating(twisting, bound)
        if not certificate.passed:
            raise PreconditionError(f"{twisting.name} is not a truncating twisting function: {certificate.witnesses[0]}")
    return LambdaSet(space, twisting)


def identify_cartier(space, ring, bound, fault=None):
    """Normalized chains of Lambda X against the Cartier complex, label by label"""
    twisting = TwistingFunction(space, fault='twisting_swap') if fault == 'twisting_swap' else TwistingFunction(space)
    cartier_fault = fault if fault == 'boundary_sign' else None
    lam = LambdaSet(space, twisting)
    left = normalized_chains(lam, ring, bound + 1)
    right = cartier(space, ring, bound, fault=cartier_fault)
    difference = _compare(left, right, range(bound + 2), translate=lam.cartier_label)
    bijection = {}
    for k in range(bound + 1):
        for cell in left.basis(k):
            generator, word = lam.cartier_label(cell)
            bijection[lam.label(cell)] = f"{generator} (x) [{'|'.join(word)}]"
    entries = {str(k): len(right.entries(k)) for k in range(bound + 2) if right.differentials.get(k)}
    logger.info(f"Lambda({space.name}) vs Cartier over {ring}: {'mismatch' if difference else 'identical'}")
    return Certificate(
        'cartier_identification',
        params={'space': space.name, 'ring': str(ring), 'bound': bound, 'fault': fault},
        verdict='fail' if difference else 'pass',
        witnesses=[difference] if difference else [],
        details={'cells': len(bijection), 'entries': entries, 'bijection': bijection}
    )


def check_omega_subset(space, bound):
    """Cells (v, w) of Lambda X carry exactly the operators of Omega X"""
    lam = LambdaSet(space)
    omega = lam.omega
    vertex = space.simplex(BASE)
    witnesses = []
    checked = 0
    for w in omega.elements(bound):
        cell = LoopCell(vertex, w)
        size = omega.dimension(w)
        operations = [(eps, c) for eps in (0, 1) for c in range(1, size + 1)]
        for eps, c in operations:
            checked += 1
            if lam.face(cell, eps, c) != LoopCell(vertex, omega.face(w, eps, c)):
                witnesses.append({'cube': omega.label(w), 'operator': f"d{eps}_{c}"})
        for j in range(1, size + 2):
            checked += 1
            if lam.degeneracy(cell, j) != LoopCell(vertex, omega.degeneracy(w, j)):
                witnesses.append({'cube': omega.label(w), 'operator': f"eta_{j}"})
    return Certificate(
        'omega_subset',
        params={'space': space.name, 'bound': bound},
        verdict='fail' if witnesses else 'pass',
        witnesses=witnesses[:MAX_WITNESSES],
        details={'checked': checked}
    )


def check_unit_face_identity(space, bound):
    """d0_1(x, e) = d2_m(x, e) = (v, x-bar) for every nondegenerate x of positive dimension"""
    lam = LambdaSet(space)
    vertex = space.simplex(BASE)
    witnesses = []
    for m in range(1, min(space.dimension, bound) + 1):
        for g in space.generators_of_dim(m):
            cell = LoopCell(space.simplex(g), UNIT)
            expected = LoopCell(vertex, lam.omega.bar(space.simplex(g)))
            if lam.face(cell, 0, 1) != expected or lam.face(cell, 2, m) != expected:
                witnesses.append({'simplex': g})
    return Certificate(
        'unit_face_identity',
        params={'space': space.name, 'bound': bound},
        verdict='fail' if witnesses else 'pass',
        witnesses=witnesses[:MAX_WITNESSES]
    )


class LoopModelService:

    @staticmethod
    def identify(reference, ring, bound, fault=None):
        """Certificate identifying the chains of Lambda X with the Cartier complex"""
        try:
            return identify_cartier(load_space(reference), Ring.parse(ring), bound, fault=fault), None
        except Exception as e:
            logger.error(f"Identification error: {str(e)}")
            return None, str(e)

    @staticmethod
    def homology(reference, ring, bound):
        """Cartier homology of a space, the homology of its free loop space"""
        try:
            return homology(cartier(load_space(reference), Ring.parse(ring), bound)), None
        except Exception as e:
            logger.error(f"Cartier homology error: {str(e)}")
            return None, str(e)
