from exceptions import RingError, DimensionMismatch


def _is_prime(value):
    if value < 2:
        return False
    divisor = 2
    while divisor * divisor <= value:
        if value % divisor == 0:
            return False
        divisor += 1
    return True


def label_text(label):
    """Render a basis label for JSON output"""
    if isinstance(label, str):
        return label
    if isinstance(label, tuple):
        return '(' + ','.join(label_text(part) for part in label) + ')'
    return str(label)


class Ring:
    """Coefficient ring: the integers or a prime field Z/p"""

    def __init__(self, modulus=None):
        if modulus is not None and not _is_prime(modulus):
            raise RingError(f"Z/{modulus} is not a prime field")
        self.modulus = modulus

    @classmethod
    def parse(cls, text):
        text = (text or 'Z').strip()
        if text == 'Z':
            return cls()
        if text.startswith('Z/'):
            try:
                return cls(int(text[2:]))
            except ValueError:
                raise RingError(f"Unsupported ring: {text}")
        raise RingError(f"Unsupported ring: {text}")

    @property
    def is_field(self):
        return self.modulus is not None

    def reduce(self, value):
        if self.modulus is None:
            return value
        return value % self.modulus

    def __eq__(self, other):
        return isinstance(other, Ring) and other.modulus == self.modulus

    def __hash__(self):
        return hash(('ring', self.modulus))

    def __str__(self):
        return 'Z' if self.modulus is None else f"Z/{self.modulus}"

    __repr__ = __str__


class ChainComplex:
    """Bounded free graded module with a sparse differential.

    ``differentials[k]`` maps each basis label of degree k to a dict
    ``{target_label: coefficient}`` of degree k - 1 (homological) or
    k + 1 (cohomological).
    """

    def __init__(self, ring, bases, differentials=None, cohomological=False, exact_through=None):
        self.ring = ring
        self.bases = {int(k): list(v) for k, v in bases.items()}
        self.cohomological = cohomological
        self.exact_through = exact_through
        self._index = {}
        for k, labels in self.bases.items():
            index = {label: i for i, label in enumerate(labels)}
            if len(index) != len(labels):
                raise DimensionMismatch(f"Repeated basis label in degree {k}")
            self._index[k] = index
        self.differentials = {}
        for k, table in (differentials or {}).items():
            clean = {}
            for source, image in table.items():
                reduced = {t: ring.reduce(c) for t, c in image.items() if ring.reduce(c) != 0}
                if reduced:
                    clean[source] = reduced
            self.differentials[int(k)] = clean

    @property
    def step(self):
        return 1 if self.cohomological else -1

    def degrees(self):
        return sorted(self.bases)

    def basis(self, k):
        return self.bases.get(k, [])

    def rank(self, k):
        return len(self.bases.get(k, []))

    def index(self, k, label):
        return self._index[k][label]

    def contains(self, k, label):
        return label in self._index.get(k, {})

    def boundary(self, k, label):
        return dict(self.differentials.get(k, {}).get(label, {}))

    def apply(self, k, chain):
        """Apply the differential to a chain of degree k"""
        result = {}
        table = self.differentials.get(k, {})
        for label, coeff in chain.items():
            for target, value in table.get(label, {}).items():
                result[target] = result.get(target, 0) + coeff * value
        return {t: self.ring.reduce(c) for t, c in result.items() if self.ring.reduce(c) != 0}

    def entries(self, k):
        """Sparse triples [row, col, value] of the differential leaving degree k"""
        target = self._index.get(k + self.step, {})
        triples = []
        for col, label in enumerate(self.basis(k)):
            for t, value in self.differentials.get(k, {}).get(label, {}).items():
                if t not in target:
                    raise DimensionMismatch(f"Differential of {label_text(label)} leaves the basis")
                triples.append([target[t], col, value])
        return sorted(triples)

    def matrix(self, k):
        rows = self.rank(k + self.step)
        cols = self.rank(k)
        dense = [[0] * cols for _ in range(rows)]
        for row, col, value in self.entries(k):
            dense[row][col] = value
        return dense

    def to_dict(self):
        return {
            'ring': str(self.ring),
            'cohomological': self.cohomological,
            'degrees': {str(k): [label_text(label) for label in self.basis(k)] for k in self.degrees()},
            'differentials': {str(k): self.entries(k) for k in self.degrees() if self.differentials.get(k)}
        }


class HomologyGroup:

    def __init__(self, degree, rank, torsion=None):
        self.degree = degree
        self.rank = rank
        self.torsion = list(torsion or [])

    def is_zero(self):
        return self.rank == 0 and not self.torsion

    def to_dict(self):
        return {
            'degree': self.degree,
            'rank': self.rank,
            'torsion': self.torsion
        }


class HomologySummary:

    def __init__(self, ring, groups):
        self.ring = ring
        self.groups = sorted(groups, key=lambda g: g.degree)

    def group(self, degree):
        for g in self.groups:
            if g.degree == degree:
                return g
        return HomologyGroup(degree, 0)

    def ranks(self):
        return [g.rank for g in self.groups]

    def to_dict(self):
        return {
            'ring': str(self.ring),
            'groups': [g.to_dict() for g in self.groups]
        }


class Certificate:
    """Outcome of one verification check"""

    def __init__(self, name, params=None, verdict='pass', witnesses=None, duration=None, details=None):
        self.name = name
        self.params = dict(params or {})
        self.verdict = verdict
        self.witnesses = list(witnesses or [])
        self.duration = duration
        self.details = dict(details or {})

    @property
    def passed(self):
        return self.verdict == 'pass'


class RingPresentation:
    """Graded ring given by a basis per degree and structure constants"""

    def __init__(self, ring, bound, poincare, basis, products, generators=None, torsion=None, flags=None):
        self.ring = ring
        self.bound = bound
        self.poincare = dict(poincare)
        self.basis = {k: list(v) for k, v in basis.items()}
        self.products = list(products)
        self.generators = list(generators or [])
        self.torsion = {k: list(v) for k, v in (torsion or {}).items()}
        self.flags = dict(flags or {})

    def to_dict(self):
        return {
            'ring': str(self.ring),
            'bound': self.bound,
            'poincare': [self.poincare.get(k, 0) for k in range(self.bound + 1)],
            'torsion': {str(k): v for k, v in self.torsion.items() if v},
            'generators': self.generators,
            'basis': {str(k): v for k, v in sorted(self.basis.items())},
            'products': self.products,
            'flags': self.flags
        }
