"""
Products on the bar and Hochschild complexes of a homotopy G-algebra.

Bar chains are dicts {word: coeff}; Hochschild chains are dicts
{(u, word): coeff}. HochschildRing wraps a verified hga carrier and caches
products on basis labels.
"""
import logging
from itertools import product as cartesian

import numpy as np

from exceptions import PreconditionError
from models import Certificate, Ring, RingPresentation, label_text
from services.algebras import ExampleOneAlgebra, PolynomialAlgebra, SimplicialCochains
from services.chain_algebra import Echelon, Field, add_scaled, add_term, homology, homology_basis, reduce_chain
from services.hga import BauesHga, TrivialHga, cocycles, interleavings, merge_sign, verify_hga
from services.simplicial import load_space
from services.twisted import hochschild, hochschild_differential, words_by_degree

logger = logging.getLogger(__name__)

MAX_WITNESSES = 10
VERIFY_BOUND = 4


def _sign(exponent):
    return -1 if exponent % 2 else 1


def _epsilons(algebra, word):
    eps = [0]
    for a in word:
        eps.append(eps[-1] + algebra.degree(a) + 1)
    return eps


def _expand(letters):
    """Multilinear expansion of a list of letter chains into words"""
    result = {}
    if any(not letter for letter in letters):
        return result
    for choice in cartesian(*[sorted(letter.items()) for letter in letters]):
        coeff = 1
        for _, value in choice:
            coeff *= value
        add_term(result, tuple(label for label, _ in choice), coeff)
    return result


def formula_shapes(m, n):
    """Index tuples of the terms of the Hochschild product for word lengths m, n.

    ('first', p) for 0 <= p <= m; ('second', i, j, k) for 0 <= i <= j <= k <= m,
    present only when the right word is nonempty.
    """
    shapes = [('first', p) for p in range(m + 1)]
    if n:
        shapes.extend(('second', i, j, k) for i in range(m + 1) for j in range(i, m + 1) for k in range(j, m + 1))
    return shapes


def describe_shape(shape, m, n):
    a = [f"a{t}" for t in range(1, m + 1)]
    b = [f"b{t}" for t in range(1, n + 1)]

    def operation(args, target):
        return f"E({','.join(args)};{target})" if args else target

    if shape[0] == 'first':
        p = shape[1]
        value = 'u*' + operation(a[:p], 'v')
        return f"{value} (x) mu([{','.join(a[p:])}],[{','.join(b)}])"
    _, i, j, k = shape
    outer = operation(a[k:] + ['u'] + a[:i], b[-1])
    inner = operation(a[i:j], 'v')
    return f"{outer}*{inner} (x) mu([{','.join(a[j:k])}],[{','.join(b[:-1])}])"


class HochschildRing:
    """The bar product mu_E and the Hochschild product lambda_E of an hga"""

    def __init__(self, hga, verify_bound=VERIFY_BOUND):
        certificate = verify_hga(hga, verify_bound)
        if not certificate.passed:
            raise PreconditionError(f"hga {hga.provenance} on {hga.algebra.name} fails its identities")
        self.hga = hga
        self.algebra = hga.algebra
        self.ring = hga.ring
        self.unit = (self.algebra.unit, ())
        self._mu = {}
        self._lambda = {}

    def degree(self, label):
        u, word = label
        return self.algebra.degree(u) + self.bar_degree(word)

    def bar_degree(self, word):
        return sum(self.algebra.degree(a) - 1 for a in word)

    def mu_E(self, w1, w2):
        """Interleave two bar words, letting each b-letter absorb a run of a-letters"""
        key = (tuple(w1), tuple(w2))
        if key not in self._mu:
            w1, w2 = key
            a_bars = [self.algebra.degree(a) - 1 for a in w1]
            b_bars = [self.algebra.degree(b) - 1 for b in w2]
            result = {}
            for groups in interleavings(len(w1), len(w2)):
                letters = []
                for a_indices, b_index in groups:
                    if b_index is None:
                        letters.append({w1[a_indices[0]]: 1})
                    else:
                        letters.append(self.hga.E([w1[i] for i in a_indices], w2[b_index]))
                add_scaled(result, _expand(letters), merge_sign(groups, a_bars, b_bars))
            self._mu[key] = reduce_chain(result, self.ring)
        return self._mu[key]

    def bar_product(self, x, y):
        result = {}
        for w1, c1 in x.items():
            for w2, c2 in y.items():
                add_scaled(result, self.mu_E(w1, w2), c1 * c2)
        return reduce_chain(result, self.ring)

    def terms(self, first, second):
        """(shape, sign, algebra chain, left tail, right word) for every product term"""
        algebra, hga = self.algebra, self.hga
        u, a = first
        v, b = second
        m, n = len(a), len(b)
        eps_a = _epsilons(algebra, a)
        eps_b = _epsilons(algebra, b)
        du, dv = algebra.degree(u), algebra.degree(v)
        found = []
        for shape in formula_shapes(m, n):
            if shape[0] == 'first':
                p = shape[1]
                sign = _sign(eps_a[p] + (eps_a[p] + eps_a[m]) * dv)
                value = algebra.mul({u: 1}, hga.E(a[:p], v))
                found.append((shape, sign, value, a[p:], b))
                continue
            _, i, j, k = shape
            exponent = (eps_a[m] + (du + eps_a[k]) * (eps_a[k] + eps_a[m])
                        + (dv + eps_b[n - 1]) * (algebra.degree(b[-1]) + 1)
                        + (eps_a[j] + eps_a[k]) * (dv + 1))
            outer = hga.E(a[k:] + (u,) + a[:i], b[-1])
            inner = hga.E(a[i:j], v)
            found.append((shape, _sign(exponent), algebra.mul(outer, inner), a[j:k], b[:-1]))
        return found

    def lambda_E(self, first, second):
        """Hochschild product of two basis labels (u, word)"""
        key = (first, second)
        if key not in self._lambda:
            result = {}
            for _, sign, value, left, right in self.terms(first, second):
                if not value:
                    continue
                tail = self.mu_E(left, right)
                for w, c in value.items():
                    for word, d in tail.items():
                        add_term(result, (w, word), sign * c * d)
            self._lambda[key] = reduce_chain(result, self.ring)
        return self._lambda[key]

    def product(self, x, y):
        result = {}
        for first, c1 in x.items():
            for second, c2 in y.items():
                add_scaled(result, self.lambda_E(first, second), c1 * c2)
        return reduce_chain(result, self.ring)

    def differential(self, x):
        result = {}
        for label, coeff in x.items():
            add_scaled(result, hochschild_differential(self.algebra, label), coeff)
        return reduce_chain(result, self.ring)

    def phi3(self, x, y, z):
        """E_{2,1}(u,v;b) (x) [] on (u (x) [], v (x) [], 1 (x) [b]) and zero elsewhere"""
        result = {}
        for (u, wu), c1 in x.items():
            for (v, wv), c2 in y.items():
                for (c, wb), c3 in z.items():
                    if wu or wv or c != self.algebra.unit or len(wb) != 1:
                        continue
                    for w, value in self.hga.E([u, v], wb[0]).items():
                        add_term(result, (w, ()), c1 * c2 * c3 * value)
        return reduce_chain(result, self.ring)

    def associator(self, x, y, z):
        result = self.product(self.product(x, y), z)
        add_scaled(result, self.product(x, self.product(y, z)), -1)
        return reduce_chain(result, self.ring)


def shuffle(algebra, a, b):
    """Recursive Koszul shuffle of two bar words"""
    if not a:
        return {tuple(b): 1}
    if not b:
        return {tuple(a): 1}
    result = {}
    for word, coeff in shuffle(algebra, a[1:], b).items():
        add_term(result, (a[0],) + word, coeff)
    moved = sum(algebra.degree(x) - 1 for x in a) * (algebra.degree(b[0]) - 1)
    for word, coeff in shuffle(algebra, a, b[1:]).items():
        add_term(result, (b[0],) + word, _sign(moved) * coeff)
    return result


def shuffle_product(algebra, first, second):
    """(u (x) a)(v (x) b) = (-1)^{|a||v|} uv (x) sh(a, b)"""
    u, a = first
    v, b = second
    sign = _sign(sum(algebra.degree(x) - 1 for x in a) * algebra.degree(v))
    result = {}
    for w, c in algebra.product(u, v).items():
        for word, d in shuffle(algebra, a, b).items():
            add_term(result, (w, word), sign * c * d)
    return reduce_chain(result, algebra.ring)


def _certificate(name, params, witnesses, checked):
    return Certificate(
        name,
        params=params,
        verdict='fail' if witnesses else 'pass',
        witnesses=witnesses[:MAX_WITNESSES],
        details={'checked': checked, 'failures': len(witnesses)}
    )


def _params(ring_, bound):
    return {'algebra': ring_.algebra.name, 'provenance': ring_.hga.provenance, 'bound': bound}


def _labels_by_degree(ring_, bound):
    complex_ = hochschild(ring_.algebra, bound)
    return {k: complex_.basis(k) for k in range(bound + 1)}


def _render(chain):
    return {label_text(label): str(coeff) for label, coeff in sorted(chain.items(), key=lambda item: label_text(item[0]))}


def check_chain_map(ring_, bound, sample=None, seed=None):
    """d(xy) = (dx)y + (-1)^{|x|} x(dy) on basis pairs of total degree < bound.

    With a sample size, a seeded random subset of the pairs is checked.
    """
    labels = _labels_by_degree(ring_, bound)
    pairs = [(p, x, y) for p in range(bound) for q in range(bound - p) for x in labels[p] for y in labels[q]]
    sampled = sample is not None and len(pairs) > sample
    if sampled:
        rng = np.random.default_rng(seed)
        pairs = [pairs[i] for i in sorted(rng.choice(len(pairs), size=sample, replace=False))]
    witnesses = []
    checked = 0
    for p, x, y in pairs:
        checked += 1
        lhs = ring_.differential(ring_.lambda_E(x, y))
        rhs = ring_.product(ring_.differential({x: 1}), {y: 1})
        add_scaled(rhs, ring_.product({x: 1}, ring_.differential({y: 1})), _sign(p))
        add_scaled(lhs, rhs, -1)
        if reduce_chain(lhs, ring_.ring):
            witnesses.append({'left': label_text(x), 'right': label_text(y)})
    logger.info(f"lambda chain map on {ring_.algebra.name}: {checked} pairs, {len(witnesses)} failures")
    certificate = _certificate('lambda_chain_map', _params(ring_, bound), witnesses, checked)
    certificate.details['sampled'] = sampled
    return certificate


def check_shuffle_oracle(ring_, bound):
    """lambda_E against the recursive shuffle product on every basis pair"""
    if not isinstance(ring_.hga, TrivialHga):
        raise PreconditionError("The shuffle oracle applies to trivial hga carriers")
    labels = _labels_by_degree(ring_, bound)
    witnesses = []
    checked = 0
    for p in range(bound + 1):
        for q in range(bound + 1 - p):
            for x in labels[p]:
                for y in labels[q]:
                    checked += 1
                    diff = dict(ring_.lambda_E(x, y))
                    add_scaled(diff, shuffle_product(ring_.algebra, x, y), -1)
                    if reduce_chain(diff, ring_.ring):
                        witnesses.append({'left': label_text(x), 'right': label_text(y)})
    return _certificate('shuffle_oracle', _params(ring_, bound), witnesses, checked)


def check_associativity(ring_, bound, max_length=4):
    """(w1 w2) w3 = w1 (w2 w3) on bar words of length <= max_length"""
    algebra = ring_.algebra
    letters = {x: k - 1 for k in range(2, bound + 2) for x in algebra.positive_basis(k)}
    by_degree = {d: [w for w in ws if 0 < len(w) <= max_length]
                 for d, ws in words_by_degree(letters, bound).items()}
    witnesses = []
    checked = 0
    for d1, d2, d3 in cartesian(sorted(by_degree), repeat=3):
        if d1 + d2 + d3 > bound:
            continue
        for w1, w2, w3 in cartesian(by_degree[d1], by_degree[d2], by_degree[d3]):
            checked += 1
            lhs = ring_.bar_product(ring_.mu_E(w1, w2), {w3: 1})
            add_scaled(lhs, ring_.bar_product({w1: 1}, ring_.mu_E(w2, w3)), -1)
            if reduce_chain(lhs, ring_.ring):
                witnesses.append({'words': [label_text(w) for w in (w1, w2, w3)]})
    logger.info(f"bar associativity on {algebra.name}: {checked} triples, {len(witnesses)} failures")
    return _certificate('bar_associativity', dict(_params(ring_, bound), max_length=max_length), witnesses, checked)


def associator_witness(ring_, bound):
    """First basis triple (u (x) [], v (x) [], 1 (x) [b]) with a nonzero associator"""
    algebra = ring_.algebra
    labels = [x for k in range(2, bound + 1) for x in algebra.positive_basis(k)]
    for u, v, b in cartesian(labels, repeat=3):
        if algebra.degree(u) + algebra.degree(v) + algebra.degree(b) - 1 > bound:
            continue
        value = ring_.associator({(u, ()): 1}, {(v, ()): 1}, {(algebra.unit, (b,)): 1})
        if value:
            return {'u': u, 'v': v, 'b': b, 'associator': _render(value)}
    return None


def check_phi3(ring_, bound):
    """d phi3(x,y,z) = -(-1)^{|u|} ((xy)z - x(yz)) on cocycle triples"""
    algebra = ring_.algebra
    bound = min(bound, algebra.top)
    by_degree = {k: cocycles(algebra, k, bound) for k in range(2, bound + 1)}
    witnesses = []
    checked = 0
    for p, q, r in cartesian(range(2, bound + 1), repeat=3):
        if p + q + r - 1 > bound:
            continue
        for u in by_degree[p]:
            for v in by_degree[q]:
                for b in by_degree[r]:
                    checked += 1
                    x = {(label, ()): c for label, c in u.items()}
                    y = {(label, ()): c for label, c in v.items()}
                    z = {(algebra.unit, (label,)): c for label, c in b.items()}
                    defect = ring_.differential(ring_.phi3(x, y, z))
                    add_scaled(defect, ring_.associator(x, y, z), _sign(p))
                    if reduce_chain(defect, ring_.ring):
                        witnesses.append({'degrees': [p, q, r]})
    certificate = _certificate('phi3_homotopy', _params(ring_, bound), witnesses, checked)
    certificate.details['associator_witness'] = associator_witness(ring_, bound)
    return certificate


class _HomologyRing:
    """Homology basis per degree of a complex with a product on cycles"""

    def __init__(self, complex_, bound, multiply):
        self.complex = complex_
        self.bound = bound
        self.multiply = multiply
        self.summary = homology(complex_, range(bound + 1))
        self.bases = {k: homology_basis(complex_, k) for k in range(bound + 1)}
        self.names = {k: [f"h{k}.{i}" for i in range(self.bases[k].rank)] for k in self.bases}

    def representatives(self, k):
        return self.bases[k].representatives

    def coordinates(self, k, chain):
        return self.bases[k].coordinates(chain)

    def structure_constants(self):
        products = []
        for p in range(self.bound + 1):
            for q in range(self.bound + 1 - p):
                for i, x in enumerate(self.representatives(p)):
                    for j, y in enumerate(self.representatives(q)):
                        coordinates = self.coordinates(p + q, self.multiply(x, y))
                        result = {self.names[p + q][t]: str(c) for t, c in enumerate(coordinates) if c}
                        if result:
                            products.append({'left': self.names[p][i], 'right': self.names[q][j], 'result': result})
        return products

    def generators(self):
        """Basis classes not in the span of products of positive-degree classes"""
        field = Field(self.complex.ring)
        found = []
        for k in range(1, self.bound + 1):
            echelon = Echelon(field)
            for p in range(1, k):
                for x in self.representatives(p):
                    for y in self.representatives(k - p):
                        coordinates = self.coordinates(k, self.multiply(x, y))
                        echelon.insert({t: c for t, c in enumerate(coordinates) if c})
            for t, name in enumerate(self.names[k]):
                independent, _ = echelon.insert({t: field.coerce(1)})
                if independent:
                    found.append({'name': name, 'degree': k})
        return found

    def relift_check(self):
        """Adding a boundary to a left factor leaves every product class unchanged"""
        for p in range(1, self.bound + 1):
            if not self.representatives(p):
                continue
            shift = next((self.complex.boundary(p - 1, label) for label in self.complex.basis(p - 1)
                          if self.complex.boundary(p - 1, label)), None)
            if shift is None:
                continue
            x = dict(self.representatives(p)[0])
            moved = dict(x)
            add_scaled(moved, shift)
            moved = reduce_chain(moved, self.complex.ring)
            for q in range(self.bound + 1 - p):
                for y in self.representatives(q):
                    if self.coordinates(p + q, self.multiply(x, y)) != self.coordinates(p + q, self.multiply(moved, y)):
                        return False
        return True

    def anticommutator_rank(self, degree):
        """Dimension of the span of ab + ba for classes a, b of the given degree"""
        target = 2 * degree
        if target > self.bound:
            return 0
        echelon = Echelon(Field(self.complex.ring))
        reps = self.representatives(degree)
        for x in reps:
            for y in reps:
                chain = self.multiply(x, y)
                add_scaled(chain, self.multiply(y, x))
                coordinates = self.coordinates(target, reduce_chain(chain, self.complex.ring))
                echelon.insert({t: c for t, c in enumerate(coordinates) if c})
        return len(echelon)

    def presentation(self, flags=None):
        return RingPresentation(
            self.complex.ring,
            self.bound,
            poincare={k: self.summary.group(k).rank for k in range(self.bound + 1)},
            basis={k: [{'name': name, 'representative': _render(rep)}
                       for name, rep in zip(self.names[k], self.representatives(k))] for k in self.bases},
            products=self.structure_constants(),
            generators=self.generators(),
            torsion={k: self.summary.group(k).torsion for k in range(self.bound + 1)},
            flags=flags
        )


def hh_ring(hga, bound, relift=True):
    """Degree-truncated Hochschild homology ring with the product lambda_E"""
    ring_ = HochschildRing(hga)
    classes = _HomologyRing(hochschild(hga.algebra, bound), bound, ring_.product)
    flags = {'provenance': hga.provenance, 'algebra': hga.algebra.name}
    if relift:
        flags['well_defined'] = classes.relift_check()
    logger.info(f"HH ring of {hga.algebra.name} through {bound}: "
                f"{[classes.bases[k].rank for k in range(bound + 1)]}")
    return classes.presentation(flags)


def _theorem1_reference(generators, ring, bound):
    shifted = [(f"s{label}", degree - 1) for label, degree in generators]
    return PolynomialAlgebra(list(generators) + shifted, ring, bound + 1,
                             name='S(U)(x)L(sU)', exterior=[label for label, _ in shifted])


def theorem1_check(generators, ring, bound):
    """HH of the trivial hga on S(U) against S(U) (x) Lambda(s^-1 U)"""
    generators = [(label, int(degree)) for label, degree in generators]
    if any(degree % 2 for _, degree in generators) and ring.modulus != 2:
        raise PreconditionError("Sq_1 = 0 is assumed: odd generators need Z/2 coefficients")
    algebra = PolynomialAlgebra(generators, ring, bound + 1)
    ring_ = HochschildRing(TrivialHga(algebra))
    classes = _HomologyRing(hochschild(algebra, bound), bound, ring_.product)
    reference = _theorem1_reference(generators, ring, bound)

    images = {label: {(label, ()): 1} for label, _ in generators}
    images.update({f"s{label}": {(algebra.unit, (label,)): 1} for label, _ in generators})
    order = [label for label, _ in reference.generators]
    cache = {}

    def image(monomial):
        if monomial not in cache:
            chain = {ring_.unit: 1}
            for name, e in zip(order, reference.exponents(monomial)):
                for _ in range(e):
                    chain = ring_.product(chain, images[name])
            cache[monomial] = chain
        return cache[monomial]

    def coordinates(monomial):
        return classes.coordinates(reference.degree(monomial), image(monomial))

    mismatches = []
    poincare = {'hochschild': [], 'reference': []}
    field = Field(ring)
    for k in range(bound + 1):
        rank = classes.summary.group(k).rank
        monomials = reference.basis(k)
        poincare['hochschild'].append(rank)
        poincare['reference'].append(len(monomials))
        if classes.summary.group(k).torsion:
            mismatches.append({'degree': k, 'torsion': classes.summary.group(k).torsion})
        echelon = Echelon(field)
        for monomial in monomials:
            echelon.insert({t: c for t, c in enumerate(coordinates(monomial)) if c})
        if rank != len(monomials) or len(echelon) != rank:
            mismatches.append({'degree': k, 'rank': rank, 'reference': len(monomials), 'independent': len(echelon)})
    checked = 0
    for p in range(bound + 1):
        for q in range(bound + 1 - p):
            for m1 in reference.basis(p):
                for m2 in reference.basis(q):
                    checked += 1
                    actual = classes.coordinates(p + q, ring_.product(image(m1), image(m2)))
                    expected = [field.coerce(0)] * len(actual)
                    for m3, c in reference.product(m1, m2).items():
                        expected = [field.normalize(e + c * t) for e, t in zip(expected, coordinates(m3))]
                    if [field.normalize(a) for a in actual] != expected:
                        mismatches.append({'left': m1, 'right': m2})
    logger.info(f"Free algebra correspondence on {algebra.name} over {ring}: {checked} products, {len(mismatches)} mismatches")
    return Certificate(
        'theorem1',
        params={'generators': [f"{label}:{degree}" for label, degree in generators], 'ring': str(ring), 'bound': bound},
        verdict='fail' if mismatches else 'pass',
        witnesses=mismatches[:MAX_WITNESSES],
        details={
            'checked': checked,
            'poincare': poincare,
            'correspondence': {label: label_text(next(iter(chain))) for label, chain in sorted(images.items())},
        }
    )


def _dga_ring(algebra, bound):
    return _HomologyRing(algebra.cochain_complex(bound), bound, algebra.mul)


def example1(ring, bound):
    """The perturbed dga C against S(x,y) (x) Lambda(a,b) with |a| = |b| = 1"""
    if bound > 10:
        raise PreconditionError("example1 is bounded by degree 10")
    perturbed = _dga_ring(ExampleOneAlgebra(ring, bound + 1), bound)
    unperturbed = _dga_ring(ExampleOneAlgebra(ring, bound + 1, perturbed=False), bound)
    reference = _dga_ring(PolynomialAlgebra([('x', 2), ('y', 2), ('a', 1), ('b', 1)], ring, bound + 1,
                                            exterior=('a', 'b')), bound)

    def series(classes):
        return [classes.summary.group(k).rank for k in range(bound + 1)]

    invariant = {'C': perturbed.anticommutator_rank(1), 'reference': reference.anticommutator_rank(1)}
    additive = series(perturbed) == series(reference) and not any(
        perturbed.summary.group(k).torsion for k in range(bound + 1))
    report = {
        'ring': str(ring),
        'bound': bound,
        'poincare': {'C': series(perturbed), 'reference': series(reference), 'unperturbed': series(unperturbed)},
        'torsion': {str(k): perturbed.summary.group(k).torsion for k in range(bound + 1)
                    if perturbed.summary.group(k).torsion},
        'additive_match': additive,
        'anticommutator_rank': invariant,
        'ring_distinguished': invariant['C'] != invariant['reference'],
        'presentation': perturbed.presentation({'algebra': 'C'}).to_dict(),
    }
    logger.info(f"example1 over {ring} through {bound}: C {report['poincare']['C']}, "
                f"reference {report['poincare']['reference']}")
    return report


class HochschildService:

    @staticmethod
    def ring(ring, bound, reference=None, generators=None):
        """HH ring of a corpus space with Baues operations, or of a free commutative algebra"""
        try:
            ring = Ring.parse(ring)
            if generators is not None:
                hga = TrivialHga(PolynomialAlgebra(generators, ring, bound + 1))
            else:
                hga = BauesHga(SimplicialCochains(load_space(reference), ring))
            return hh_ring(hga, bound), None
        except Exception as e:
            logger.error(f"Hochschild ring error: {str(e)}")
            return None, str(e)

    @staticmethod
    def theorem1(generators, ring, bound):
        """Correspondence certificate for a free commutative algebra"""
        try:
            return theorem1_check(generators, Ring.parse(ring), bound), None
        except Exception as e:
            logger.error(f"Correspondence check error: {str(e)}")
            return None, str(e)

    @staticmethod
    def example1(ring, bound):
        """Additive and multiplicative comparison for the closing example"""
        try:
            return example1(Ring.parse(ring), bound), None
        except Exception as e:
            logger.error(f"Example report error: {str(e)}")
            return None, str(e)
