"""
Bar and cobar constructions and the twice-twisted Cartier and Hochschild complexes.

Coalgebras are the normalized chains of a 1-reduced simplicial set with the
Alexander-Whitney diagonal; algebras are GradedAlgebra carriers. Every
complex is built one degree past the bound and marked exact through it.
"""
import logging

from exceptions import PreconditionError
from models import ChainComplex
from services.chain_algebra import add_scaled, add_term, dualize, homology, reduce_chain

logger = logging.getLogger(__name__)

FAULTS = ('boundary_sign',)


def _sign(exponent):
    return -1 if exponent % 2 else 1


def words_by_degree(letters, max_degree):
    """All words over letters {label: bar degree >= 1}, grouped by total bar degree"""
    ordered = sorted(letters.items(), key=lambda item: (item[1], str(item[0])))
    words = {0: [()]}
    for degree in range(1, max_degree + 1):
        found = []
        for letter, weight in ordered:
            if weight <= degree:
                found.extend(word + (letter,) for word in words[degree - weight])
        words[degree] = found
    return words


def _require_one_reduced_space(space):
    if space.generators_of_dim(1) or space.generators_of_dim(0) != ['v']:
        raise PreconditionError(f"{space.name} is not 1-reduced")


def _require_one_reduced_algebra(algebra):
    if not algebra.is_one_reduced():
        raise PreconditionError(f"{algebra.name} is not 1-reduced")


class CoalgebraData:
    """Letters, differential and reduced diagonal of the chains on a space"""

    def __init__(self, space):
        _require_one_reduced_space(space)
        self.space = space
        self.dims = dict(space.generators)
        self.letters = {g: d - 1 for g, d in self.dims.items() if d >= 2}
        self.boundaries = {g: space.boundary(g) for g in self.letters}
        self.pieces = {g: space.aw_pieces(g) for g in self.dims}

    def reduced_pieces(self, g):
        """Pieces with both factors of positive dimension"""
        n = self.dims[g]
        return [(p, front, back) for p, front, back in self.pieces[g] if 0 < p < n]

    def left_pieces(self, g):
        """Components of the diagonal minus g (x) 1: back of positive dimension"""
        n = self.dims[g]
        return [(p, front, back) for p, front, back in self.pieces[g] if p < n]

    def right_pieces(self, g):
        """Components of the diagonal minus 1 (x) g: front of positive dimension"""
        return [(p, front, back) for p, front, back in self.pieces[g] if p > 0]

    def word_degree(self, word):
        return sum(self.letters[c] for c in word)


def _cobar_letter(data, c):
    """d[c] = -[dc] + sum (-1)^{|c'|} [c'|c'']"""
    result = {}
    for target, coeff in data.boundaries[c].items():
        add_term(result, (target,), -coeff)
    for p, front, back in data.reduced_pieces(c):
        add_term(result, (front, back), _sign(p))
    return result


def cobar_differential(data, word):
    result = {}
    prefix = 0
    for i, c in enumerate(word):
        sign = _sign(prefix)
        for letters, coeff in _cobar_letter(data, c).items():
            add_term(result, word[:i] + letters + word[i + 1:], sign * coeff)
        prefix += data.letters[c]
    return result


def cobar(space, ring, bound):
    """The reduced cobar construction on the chains of a 1-reduced space"""
    data = CoalgebraData(space)
    words = words_by_degree(data.letters, bound + 1)
    differentials = {k: {w: cobar_differential(data, w) for w in ws} for k, ws in words.items()}
    return ChainComplex(ring, words, differentials, exact_through=bound)


def _theta_one(data, v, word):
    """-sum (-1)^{|v1'|} v1' (x) [v1''|W]"""
    result = {}
    for p, front, back in data.left_pieces(v):
        add_term(result, (front, (back,) + word), -_sign(p))
    return result


def _theta_two(data, v, word):
    """sum (-1)^{(|v2'|+1)(|v2''|+eps_n)} v2'' (x) [W|v2']"""
    result = {}
    eps = sum(data.dims[c] + 1 for c in word)
    for p, front, back in data.right_pieces(v):
        q = data.dims[v] - p
        add_term(result, (back, word + (front,)), _sign((p + 1) * (q + eps)))
    return result


def _tensor_basis(data, bound):
    words = words_by_degree(data.letters, bound + 1)
    bases = {}
    for v, dim in sorted(data.dims.items(), key=lambda item: (item[1], item[0])):
        for degree, ws in words.items():
            if dim + degree <= bound + 1:
                bases.setdefault(dim + degree, []).extend((v, w) for w in ws)
    return bases


def _twisted_chains(space, ring, bound, second_twist, fault=None):
    data = CoalgebraData(space)
    bases = _tensor_basis(data, bound)
    differentials = {}
    for k, labels in bases.items():
        table = {}
        for v, word in labels:
            image = {}
            for target, coeff in data.space.boundary(v).items():
                add_term(image, (target, word), coeff)
            sign = _sign(data.dims[v])
            for w, coeff in cobar_differential(data, word).items():
                add_term(image, (v, w), sign * coeff)
            add_scaled(image, _theta_one(data, v, word))
            if second_twist:
                add_scaled(image, _theta_two(data, v, word), -1 if fault == 'boundary_sign' else 1)
            table[(v, word)] = image
        differentials[k] = table
    return ChainComplex(ring, bases, differentials, exact_through=bound)


def acyclic_cobar(space, ring, bound):
    """C (x) Omega C twisted by the universal twisting cochain"""
    return _twisted_chains(space, ring, bound, second_twist=False)


def cartier(space, ring, bound, fault=None):
    """The Cartier complex C (x) Omega C twisted on both sides"""
    if fault is not None and fault not in FAULTS:
        raise PreconditionError(f"Unknown Cartier fault: {fault}")
    complex_ = _twisted_chains(space, ring, bound, second_twist=True, fault=fault)
    logger.info(f"Cartier complex of {space.name}: ranks {[complex_.rank(k) for k in complex_.degrees()]}")
    return complex_


def _algebra_letters(algebra, bound):
    return {x: k - 1 for k in range(2, bound + 2) for x in algebra.positive_basis(k)}


def _epsilons(algebra, word):
    eps = [0]
    for a in word:
        eps.append(eps[-1] + algebra.degree(a) + 1)
    return eps


def bar_differential(algebra, word):
    """d1 and d2 with the eps_i = |a_1|+..+|a_i|+i signs"""
    result = {}
    eps = _epsilons(algebra, word)
    for i, a in enumerate(word):
        for target, coeff in algebra.differential(a).items():
            add_term(result, word[:i] + (target,) + word[i + 1:], -_sign(eps[i]) * coeff)
    for i in range(1, len(word)):
        for target, coeff in algebra.product(word[i - 1], word[i]).items():
            add_term(result, word[:i - 1] + (target,) + word[i + 1:], -_sign(eps[i]) * coeff)
    return reduce_chain(result, algebra.ring)


def _bar_words(algebra, bound):
    letters = _algebra_letters(algebra, bound)
    return words_by_degree(letters, bound + 1)


def bar(algebra, bound):
    """The reduced bar construction on a 1-reduced dg algebra"""
    _require_one_reduced_algebra(algebra)
    words = _bar_words(algebra, bound)
    differentials = {k: {w: bar_differential(algebra, w) for w in ws} for k, ws in words.items() if k <= bound}
    return ChainComplex(algebra.ring, words, differentials, cohomological=True, exact_through=bound)


def _hochschild_chains(algebra, bound, second_twist):
    _require_one_reduced_algebra(algebra)
    if not algebra.finite and algebra.top < bound + 1:
        raise PreconditionError(f"{algebra.name} is materialized only through degree {algebra.top}")
    words = _bar_words(algebra, bound)
    bases = {}
    for k in range(bound + 2):
        for u in algebra.basis(k):
            for degree, ws in words.items():
                if k + degree <= bound + 1:
                    bases.setdefault(k + degree, []).extend((u, w) for w in ws)
    differentials = {}
    for k, labels in bases.items():
        if k > bound:
            continue
        differentials[k] = {label: hochschild_differential(algebra, label, second_twist) for label in labels}
    return ChainComplex(algebra.ring, bases, differentials, cohomological=True, exact_through=bound)


def hochschild_differential(algebra, label, second_twist=True):
    u, word = label
    p = algebra.degree(u)
    image = {}
    for target, coeff in algebra.differential(u).items():
        add_term(image, (target, word), coeff)
    for w, coeff in bar_differential(algebra, word).items():
        add_term(image, (u, w), _sign(p) * coeff)
    if word:
        for target, coeff in algebra.product(u, word[0]).items():
            add_term(image, (target, word[1:]), -_sign(p) * coeff)
        if second_twist:
            eps = _epsilons(algebra, word)
            last = algebra.degree(word[-1])
            sign = _sign((last + 1) * (p + eps[-2]))
            for target, coeff in algebra.product(word[-1], u).items():
                add_term(image, (target, word[:-1]), sign * coeff)
    return reduce_chain(image, algebra.ring)


def acyclic_bar(algebra, bound):
    """A (x) BA twisted by the universal twisting cochain"""
    return _hochschild_chains(algebra, bound, second_twist=False)


def hochschild(algebra, bound):
    """The Hochschild complex A (x) BA twisted on both sides"""
    complex_ = _hochschild_chains(algebra, bound, second_twist=True)
    logger.info(f"Hochschild complex of {algebra.name}: ranks {[complex_.rank(k) for k in complex_.degrees()]}")
    return complex_


def compare_dual_ranks(space, algebra, ring, bound):
    """Free ranks of HH(C*X) against the dual of the Cartier complex of X"""
    left = homology(hochschild(algebra, bound))
    right = homology(dualize(cartier(space, ring, bound)))
    mismatches = []
    for k in range(bound + 1):
        if left.group(k).rank != right.group(k).rank:
            mismatches.append({'degree': k, 'hochschild': left.group(k).rank, 'dual_cartier': right.group(k).rank})
    return mismatches
