"""
Finite 1-reduced simplicial sets given by generators and face words.

A simplex is a pair (generator, sigma) where sigma is a monotone surjection
[n] -> [dim generator] written as a tuple; it is nondegenerate exactly when
sigma is the identity. Face words like "s1 s0 v" mean s1(s0(v)).
"""
import json
import logging
import os
from itertools import combinations

from config import Config
from exceptions import CorpusError, FaceIndexError
from models import ChainComplex
from schemas import SimplicialSetSchema

logger = logging.getLogger(__name__)

BASE = 'v'


def _identity(dim):
    return tuple(range(dim + 1))


class SimplicialSet:

    def __init__(self, name, generators, faces):
        self.name = name
        self.generators = dict(generators)
        self.faces = {g: list(words) for g, words in faces.items()}
        self._face_cache = {}
        self._validate()

    @classmethod
    def from_dict(cls, data):
        generators = {item['name']: item['dim'] for item in data['generators']}
        faces = {item['name']: item.get('faces', []) for item in data['generators']}
        return cls(data.get('name', 'space'), generators, faces)

    def to_dict(self):
        return {
            'name': self.name,
            'generators': [{'name': g, 'dim': d, 'faces': self.faces.get(g, [])}
                           for g, d in sorted(self.generators.items(), key=lambda item: (item[1], item[0]))]
        }

    def _validate(self):
        vertices = [g for g, d in self.generators.items() if d == 0]
        if vertices != [BASE]:
            raise CorpusError(f"{self.name}: expected the single vertex '{BASE}', found {vertices}")
        edges = [g for g, d in self.generators.items() if d == 1]
        if edges:
            raise CorpusError(f"{self.name}: not 1-reduced, has edges {edges}")
        for g, dim in self.generators.items():
            if dim == 0:
                continue
            words = self.faces.get(g, [])
            if len(words) != dim + 1:
                raise CorpusError(f"{self.name}: {g} has {len(words)} faces, expected {dim + 1}")
            for word in words:
                if self.dim(self.parse(word)) != dim - 1:
                    raise CorpusError(f"{self.name}: face '{word}' of {g} has the wrong dimension")
        witnesses = self.check_identities()
        if witnesses:
            raise CorpusError(f"{self.name}: simplicial identity fails on {witnesses[0]}")

    @property
    def dimension(self):
        return max(self.generators.values())

    def generators_of_dim(self, k):
        return sorted(g for g, d in self.generators.items() if d == k)

    def simplex(self, g):
        return g, _identity(self.generators[g])

    def parse(self, word):
        tokens = word.split()
        if not tokens or tokens[-1] not in self.generators:
            raise CorpusError(f"{self.name}: cannot parse face word '{word}'")
        x = self.simplex(tokens[-1])
        for token in reversed(tokens[:-1]):
            if not (token.startswith('s') and token[1:].isdigit()):
                raise CorpusError(f"{self.name}: bad degeneracy '{token}' in '{word}'")
            j = int(token[1:])
            if j > self.dim(x):
                raise CorpusError(f"{self.name}: {token} is out of range in '{word}'")
            x = self.degeneracy(x, j)
        return x

    @staticmethod
    def dim(x):
        return len(x[1]) - 1

    @staticmethod
    def is_degenerate(x):
        sigma = x[1]
        return len(set(sigma)) != len(sigma)

    def degeneracy(self, x, j):
        g, sigma = x
        if not 0 <= j <= len(sigma) - 1:
            raise FaceIndexError('s', j, len(sigma) - 1)
        return g, sigma[:j + 1] + sigma[j:]

    def generator_face(self, g, i):
        key = (g, i)
        if key not in self._face_cache:
            self._face_cache[key] = self.parse(self.faces[g][i])
        return self._face_cache[key]

    def face(self, x, i):
        g, sigma = x
        if not 0 <= i < len(sigma) or len(sigma) == 1:
            raise FaceIndexError('face', i, len(sigma) - 1)
        rest = sigma[:i] + sigma[i + 1:]
        missing = sigma[i]
        if missing in rest:
            return g, rest
        h, tau = self.generator_face(g, missing)
        compressed = tuple(s - 1 if s > missing else s for s in rest)
        return h, tuple(tau[s] for s in compressed)

    def vertex_face(self, x, vertices):
        """Restrict x to the given increasing vertex list"""
        keep = set(vertices)
        for i in reversed(range(self.dim(x) + 1)):
            if i not in keep:
                x = self.face(x, i)
        return x

    def name_of(self, x):
        """Generator name of a nondegenerate simplex, None when degenerate"""
        return None if self.is_degenerate(x) else x[0]

    def check_identities(self):
        """d_i d_j = d_{j-1} d_i for i < j on every generator of dimension >= 2"""
        witnesses = []
        for g, dim in self.generators.items():
            if dim < 2:
                continue
            x = self.simplex(g)
            for j in range(dim + 1):
                for i in range(j):
                    if self.face(self.face(x, j), i) != self.face(self.face(x, i), j - 1):
                        witnesses.append({'generator': g, 'i': i, 'j': j})
        return witnesses

    def boundary(self, g):
        chain = {}
        x = self.simplex(g)
        if self.dim(x) == 0:
            return chain
        for i in range(self.dim(x) + 1):
            target = self.name_of(self.face(x, i))
            if target is not None:
                value = chain.get(target, 0) + (-1) ** i
                if value:
                    chain[target] = value
                else:
                    chain.pop(target)
        return chain

    def chains(self, ring):
        """Normalized chains on the nondegenerate simplices"""
        bases = {k: self.generators_of_dim(k) for k in range(self.dimension + 1)}
        differentials = {k: {g: self.boundary(g) for g in gens} for k, gens in bases.items() if k > 0}
        return ChainComplex(ring, bases, differentials)

    def aw_pieces(self, g):
        """Nondegenerate Alexander-Whitney pieces (p, front, back) of a generator"""
        x = self.simplex(g)
        n = self.dim(x)
        pieces = []
        for p in range(n + 1):
            front = self.name_of(self.vertex_face(x, range(p + 1)))
            back = self.name_of(self.vertex_face(x, range(p, n + 1)))
            if front is not None and back is not None:
                pieces.append((p, front, back))
        return pieces

    def aw_diagonal(self, g):
        return {(front, back): 1 for _, front, back in self.aw_pieces(g)}


def quotient_simplex(n):
    """The 1-reduced quotient of the standard n-simplex by its 1-skeleton"""
    generators = {BASE: 0}
    faces = {BASE: []}
    for size in range(3, n + 2):
        for subset in combinations(range(n + 1), size):
            name = ''.join(str(v) for v in subset)
            generators[name] = size - 1
            if size == 3:
                faces[name] = ['s0 v'] * 3
            else:
                faces[name] = [''.join(str(v) for v in subset[:i] + subset[i + 1:]) for i in range(size)]
    return SimplicialSet(f"quotient{n}", generators, faces)


def load_space(reference, corpus_dir=None):
    """Load a space by corpus name, JSON path, or quotient:N"""
    if reference.startswith('quotient:'):
        try:
            n = int(reference.split(':', 1)[1])
        except ValueError:
            raise CorpusError(f"Bad quotient model '{reference}'")
        if not 2 <= n <= 9:
            raise CorpusError(f"Quotient model dimension {n} is outside 2..9")
        return quotient_simplex(n)
    path = reference
    if not os.path.exists(path):
        path = os.path.join(corpus_dir or Config.CORPUS_DIR, f"{reference}.json")
    if not os.path.exists(path):
        raise CorpusError(f"Unknown space '{reference}'")
    with open(path) as handle:
        data = SimplicialSetSchema().load(json.load(handle))
    space = SimplicialSet.from_dict(data)
    logger.info(f"Loaded {space.name}: dimension {space.dimension}, {len(space.generators)} generators")
    return space
