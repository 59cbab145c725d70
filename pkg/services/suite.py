"""
Invariant suite: a registry of named checks and a concurrent runner.

Each check takes the resolved settings and returns a list of certificates.
Engine errors inside a check become an 'error' certificate; the suite
never stops at the first failure.
"""
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor

from marshmallow import ValidationError

from config import Config
from exceptions import ConfigError, FreeLoopError, PreconditionError
from models import Certificate, Ring
from schemas import SuiteConfigSchema
from services.algebras import PolynomialAlgebra, SimplicialCochains
from services.chain_algebra import check_d_squared
from services.freehedra import (
    FnCell,
    cellular_chains,
    chain_text,
    check_aw_compatibility,
    check_diagonal_chain_map,
    coassociator,
    codim_one_faces,
    diagonal,
    enumerate_faces,
    f_vector,
)
from services.fn_sets import FreehedronSet, MutatedFnSet, coalgebra, verify_fnset
from services.hga import BauesHga, TrivialHga, cocycles, hirsch_check, right_hirsch_witness, sq1, verify_hga
from services.hochschild_ring import (
    HochschildRing,
    check_associativity,
    check_chain_map,
    check_phi3,
    check_shuffle_oracle,
    example1,
    theorem1_check,
)
from services.loop_model import (
    LambdaSet,
    TwistingFunction,
    check_omega_subset,
    check_unit_face_identity,
    compare_with_cobar,
    identify_cartier,
    verify_truncating,
)
from services.simplicial import load_space
from services.twisted import compare_dual_ranks

logger = logging.getLogger(__name__)

DEFAULT_SPACES = ['s2', 'wedge', 'tetra']
CHAIN_MAP_SAMPLE = 400
CHAIN_MAP_BOUND = 8
ASSOCIATIVITY_BOUND = 8
BAUES_ASSOCIATIVITY_BOUND = 6

F_VECTORS = {2: [5, 5, 1], 3: [12, 18, 8, 1]}

DIAGONAL_DISPLAYS = {
    '012]': [
        ('0][01][12]', '012]', 1),
        ('012]', '2][02]', 1),
        ('0][012]', '02]', -1),
        ('01][12]', '12][01]', 1),
        ('01][12]', '2][012]', 1),
        ('12][01]', '2][012]', 1),
    ],
    '0123]': [
        ('0][01][12][23]', '0123]', 1),
        ('0123]', '3][03]', 1),
        ('0][0123]', '03]', 1),
        ('01][123]', '13][01]', -1),
        ('012][23]', '23][02]', 1),
        ('01][12][23]', '123][01]', 1),
        ('0][01][123]', '013]', 1),
        ('0][012][23]', '023]', -1),
        ('01][123]', '3][013]', -1),
        ('123][01]', '3][013]', -1),
        ('012][23]', '3][023]', 1),
        ('23][012]', '3][023]', 1),
        ('01][12][23]', '23][012]', -1),
        ('01][12][23]', '3][0123]', 1),
        ('12][23][01]', '23][012]', -1),
        ('12][23][01]', '3][0123]', 1),
        ('23][01][12]', '3][0123]', 1),
    ],
}


class SuiteSettings:
    """Resolved suite parameters"""

    def __init__(self, ring, bound, seed, spaces, faults, corpus_dir=None):
        self.ring = ring
        self.bound = bound
        self.seed = seed
        self.spaces = spaces
        self.faults = set(faults)
        self.corpus_dir = corpus_dir

    def space(self, reference):
        return load_space(reference, self.corpus_dir)


def _verdict(witnesses):
    return 'fail' if witnesses else 'pass'


def _f_vectors(settings):
    witnesses = []
    top = min(max(settings.bound, 3), 6)
    for n in range(top + 1):
        counts = f_vector(n)
        if n in F_VECTORS and counts != F_VECTORS[n]:
            witnesses.append({'n': n, 'f_vector': counts, 'expected': F_VECTORS[n]})
        euler = sum((-1) ** d * c for d, c in enumerate(counts))
        if euler != 1:
            witnesses.append({'n': n, 'euler_characteristic': euler})
        if n > 0 and len(codim_one_faces(n)) != 3 * n - 1:
            witnesses.append({'n': n, 'facets': len(codim_one_faces(n)), 'expected': 3 * n - 1})
    return [Certificate('f_vectors', params={'max_n': top}, verdict=_verdict(witnesses),
                        witnesses=witnesses, details={'checked': top + 1})]


def _diagonal_display(settings):
    certificates = []
    for text, terms in DIAGONAL_DISPLAYS.items():
        expected = {(FnCell.parse(left), FnCell.parse(right)): coeff for left, right, coeff in terms}
        actual = diagonal(FnCell.parse(text))
        witnesses = []
        if actual != expected:
            missing = {k: v for k, v in expected.items() if actual.get(k) != v}
            extra = {k: v for k, v in actual.items() if expected.get(k) != v}
            witnesses.append({'missing': chain_text(missing), 'unexpected': chain_text(extra)})
        certificates.append(Certificate('diagonal_display', params={'cell': text}, verdict=_verdict(witnesses),
                                        witnesses=witnesses, details={'checked': len(expected)}))
    return certificates


def _freehedra_identities(settings):
    top = min(settings.bound, 6)
    witnesses = []
    checked = 0
    for total in range(top + 1):
        for m in range(total + 1):
            fnset = FreehedronSet(m, total - m)
            if 'eta_to_front' in settings.faults:
                fnset = MutatedFnSet(fnset)
            certificate = verify_fnset(fnset, total + 1)
            checked += certificate.details.get('checked', 0)
            witnesses.extend(dict(w, m=m, n=total - m) for w in certificate.witnesses[:2])
    params = {'max_total': top, 'fault': 'eta_to_front' if 'eta_to_front' in settings.faults else None}
    return [Certificate('freehedra_identities', params=params, verdict=_verdict(witnesses),
                        witnesses=witnesses[:10], details={'checked': checked})]


def _aw_compatibility(settings):
    top = min(settings.bound, 4)
    witnesses = []
    checked = 0
    for n in range(1, top + 1):
        for cells in enumerate_faces(n, 0).values():
            for cell in cells:
                checked += 1
                difference = check_aw_compatibility(cell)
                if difference:
                    witnesses.append({'cell': str(cell), 'difference': chain_text(difference)})
    return [Certificate('aw_compatibility', params={'max_n': top}, verdict=_verdict(witnesses),
                        witnesses=witnesses[:10], details={'checked': checked})]


def _sq1(settings):
    certificates = []
    for reference in settings.spaces:
        hga = BauesHga(SimplicialCochains(settings.space(reference), settings.ring))
        algebra = hga.algebra
        classes = []
        witnesses = []
        for k in range(2, algebra.top + 1):
            for z in cocycles(algebra, k):
                result = sq1(hga, z)
                classes.append(dict(result, cocycle=chain_text(z)))
                # z u1 z is a cocycle for even z and over Z/2
                if not result['defined'] and (k % 2 == 0 or settings.ring.modulus == 2):
                    witnesses.append({'cocycle': chain_text(z), 'degree': k})
        certificates.append(Certificate('sq1', params={'space': reference, 'ring': str(settings.ring)},
                                        verdict=_verdict(witnesses), witnesses=witnesses,
                                        details={'checked': len(classes), 'classes': classes}))
    return certificates


def _twisting(settings, space):
    if 'twisting_swap' in settings.faults:
        try:
            return TwistingFunction(space, fault='twisting_swap'), 'twisting_swap'
        except PreconditionError:
            logger.info(f"{space.name} has no pair of simplices to swap")
    return TwistingFunction(space), None


def _lambda_identities(settings):
    certificates = []
    for reference in settings.spaces:
        space = settings.space(reference)
        twisting, fault = _twisting(settings, space)
        certificate = verify_fnset(LambdaSet(space, twisting), min(settings.bound, 6))
        certificate.name = 'lambda_identities'
        certificate.params = dict(certificate.params, space=reference, fault=fault)
        certificates.append(certificate)
    return certificates


def _lambda_coalgebra(settings):
    certificates = []
    bound = min(settings.bound, 4)
    for reference in settings.spaces:
        certificate = coalgebra(LambdaSet(settings.space(reference)), settings.ring, bound).verify()
        certificate.name = 'lambda_coalgebra'
        certificate.params = dict(certificate.params, space=reference)
        certificates.append(certificate)
    return certificates


def _cellular_chains(settings):
    top = min(settings.bound, 5)
    witnesses = []
    checked = 0
    for n in range(1, top + 1):
        ok, witness = check_d_squared(cellular_chains(n, 0, settings.ring))
        if not ok:
            witnesses.append(dict(witness, n=n, identity='d_squared'))
        for cells in enumerate_faces(n, 0).values():
            for cell in cells:
                checked += 1
                difference = check_diagonal_chain_map(cell)
                if difference:
                    witnesses.append({'cell': str(cell), 'identity': 'diagonal_chain_map',
                                      'difference': chain_text(difference)})
    defect = coassociator(FnCell.parse('012]'))
    return [Certificate('cellular_chains', params={'max_n': top, 'ring': str(settings.ring)},
                        verdict=_verdict(witnesses), witnesses=witnesses[:10],
                        details={'checked': checked, 'coassociator_witness': chain_text(defect) if defect else None})]


def _cartier_identification(settings):
    certificates = []
    faults = [None] + [f for f in ('boundary_sign', 'twisting_swap') if f in settings.faults]
    for reference in settings.spaces:
        space = settings.space(reference)
        bound = min(settings.bound, 8 if reference == 's2' else 6)
        for fault in faults:
            if fault == 'twisting_swap':
                try:
                    TwistingFunction(space, fault=fault)
                except PreconditionError:
                    continue
            certificate = identify_cartier(space, settings.ring, bound, fault=fault)
            certificate.params = dict(certificate.params, space=reference)
            certificates.append(certificate)
    return certificates


def _cochain_references(settings):
    return list(settings.spaces) + ['quotient:4']


def _hga_identities(settings):
    certificates = []
    fault = 'baues_sign' if 'baues_sign' in settings.faults else None
    for reference in _cochain_references(settings):
        hga = BauesHga(SimplicialCochains(settings.space(reference), settings.ring), fault=fault)
        certificate = verify_hga(hga, min(settings.bound, 4))
        certificate.params = dict(certificate.params, space=reference)
        certificates.append(certificate)
    return certificates


def _hirsch(settings):
    certificates = []
    for reference in list(settings.spaces) + ['quotient:5']:
        hga = BauesHga(SimplicialCochains(settings.space(reference), settings.ring))
        certificate = hirsch_check(hga, min(settings.bound, 5))
        certificate.params = dict(certificate.params, space=reference)
        certificates.append(certificate)
    # the right Hirsch formula holds only up to homotopy; a strict defect is expected
    hga = BauesHga(SimplicialCochains(settings.space('quotient:5'), settings.ring))
    witness = right_hirsch_witness(hga, min(settings.bound, 5))
    certificates.append(Certificate('right_hirsch_defect', params={'space': 'quotient:5'},
                                    verdict='pass' if witness else 'fail',
                                    witnesses=[] if witness else [{'reason': 'no strict defect found'}],
                                    details={'witness': witness}))
    return certificates


def _loop_model(settings):
    certificates = []
    bound = min(settings.bound, 5)
    for reference in settings.spaces:
        space = settings.space(reference)
        twisting, fault = _twisting(settings, space)
        results = [
            verify_truncating(twisting, bound),
            compare_with_cobar(space, settings.ring, min(settings.bound, 6)),
            check_omega_subset(space, bound),
            check_unit_face_identity(space, bound),
        ]
        for certificate in results:
            certificate.params = dict(certificate.params, space=reference)
        results[0].params['fault'] = fault
        certificates.extend(results)
    return certificates


def _dual_ranks(settings):
    certificates = []
    bound = min(settings.bound, 5)
    for reference in settings.spaces:
        space = settings.space(reference)
        mismatches = compare_dual_ranks(space, SimplicialCochains(space, settings.ring), settings.ring, bound)
        certificates.append(Certificate('dual_ranks', params={'space': reference, 'ring': str(settings.ring),
                                                              'bound': bound},
                                        verdict=_verdict(mismatches), witnesses=mismatches,
                                        details={'checked': bound + 1}))
    return certificates


def _lambda_chain_map(settings):
    certificates = []
    bound = CHAIN_MAP_BOUND
    for reference in settings.spaces:
        ring_ = HochschildRing(BauesHga(SimplicialCochains(settings.space(reference), settings.ring)))
        certificate = check_chain_map(ring_, bound)
        certificate.params = dict(certificate.params, space=reference)
        certificates.append(certificate)
    trivial = HochschildRing(TrivialHga(PolynomialAlgebra([('x', 2)], settings.ring, bound + 1)))
    certificates.append(check_chain_map(trivial, bound))
    if settings.bound > bound:
        # sampled tier above the exhaustive range
        wide = HochschildRing(TrivialHga(PolynomialAlgebra([('x', 2)], settings.ring, settings.bound + 1)))
        certificates.append(check_chain_map(wide, settings.bound, sample=CHAIN_MAP_SAMPLE, seed=settings.seed))
    return certificates


def _shuffle_oracle(settings):
    configs = [
        ([('x', 2)], Ring(), min(settings.bound, 8)),
        ([('x', 2), ('y', 3)], Ring(), min(settings.bound, 5)),
        ([('x', 3)], Ring(2), min(settings.bound, 7)),
    ]
    return [check_shuffle_oracle(HochschildRing(TrivialHga(PolynomialAlgebra(generators, ring, bound + 1))), bound)
            for generators, ring, bound in configs]


def _bar_associativity(settings):
    trivial = [([('x', 2)], ASSOCIATIVITY_BOUND), ([('x', 2), ('y', 3)], 5)]
    certificates = [check_associativity(HochschildRing(TrivialHga(PolynomialAlgebra(generators, settings.ring, bound + 1))),
                                        bound) for generators, bound in trivial]
    for reference in settings.spaces:
        ring_ = HochschildRing(BauesHga(SimplicialCochains(settings.space(reference), settings.ring)))
        certificate = check_associativity(ring_, BAUES_ASSOCIATIVITY_BOUND)
        certificate.params = dict(certificate.params, space=reference)
        certificates.append(certificate)
    return certificates


def _phi3_homotopy(settings):
    ring_ = HochschildRing(BauesHga(SimplicialCochains(settings.space('quotient:5'), settings.ring)))
    certificate = check_phi3(ring_, min(settings.bound, 5))
    certificate.params = dict(certificate.params, space='quotient:5')
    return [certificate]


def _theorem1(settings):
    configs = [
        ([('x', 2)], Ring(), 10),
        ([('x', 2), ('y', 2)], Ring(), 8),
        ([('x', 3)], Ring(2), 9),
    ]
    return [theorem1_check(generators, ring, bound) for generators, ring, bound in configs]


def _example1(settings):
    bound = min(settings.bound, 8)
    report = example1(settings.ring, bound)
    witnesses = [] if report['ring_distinguished'] else [{'anticommutator_rank': report['anticommutator_rank']}]
    return [Certificate('example1', params={'ring': str(settings.ring), 'bound': bound},
                        verdict=_verdict(witnesses), witnesses=witnesses,
                        details={'poincare': report['poincare'], 'additive_match': report['additive_match'],
                                 'anticommutator_rank': report['anticommutator_rank']})]


CHECKS = {
    'f_vectors': _f_vectors,
    'diagonal_display': _diagonal_display,
    'freehedra_identities': _freehedra_identities,
    'lambda_identities': _lambda_identities,
    'cellular_chains': _cellular_chains,
    'aw_compatibility': _aw_compatibility,
    'lambda_coalgebra': _lambda_coalgebra,
    'cartier_identification': _cartier_identification,
    'hga_identities': _hga_identities,
    'hirsch': _hirsch,
    'sq1': _sq1,
    'loop_model': _loop_model,
    'dual_ranks': _dual_ranks,
    'lambda_chain_map': _lambda_chain_map,
    'shuffle_oracle': _shuffle_oracle,
    'bar_associativity': _bar_associativity,
    'phi3_homotopy': _phi3_homotopy,
    'theorem1': _theorem1,
    'example1': _example1,
}


def resolve_settings(config=None):
    """Validate a suite config mapping and fill gaps from Config"""
    try:
        data = SuiteConfigSchema().load(config or {})
    except ValidationError as e:
        raise ConfigError(f"Invalid suite config: {e.messages}")
    checks = list(CHECKS) if data['checks'] is None else data['checks']
    unknown = [name for name in checks if name not in CHECKS]
    if unknown:
        raise ConfigError(f"Unknown checks: {', '.join(unknown)}")
    settings = SuiteSettings(
        ring=Ring.parse(data['ring'] or Config.RING),
        bound=Config.BOUND if data['bound'] is None else data['bound'],
        seed=Config.SEED if data['seed'] is None else data['seed'],
        spaces=data['spaces'] or list(DEFAULT_SPACES),
        faults=data['faults'],
        corpus_dir=Config.CORPUS_DIR
    )
    return checks, settings


def _run_check(name, settings):
    start = time.perf_counter()
    try:
        certificates = CHECKS[name](settings)
    except FreeLoopError as e:
        logger.error(f"Check {name} error: {str(e)}")
        certificates = [Certificate(name, params={'bound': settings.bound}, verdict='error',
                                    witnesses=[{'error': str(e)}])]
    elapsed = time.perf_counter() - start
    for certificate in certificates:
        certificate.duration = elapsed
    logger.info(f"Check {name}: {len(certificates)} certificates in {elapsed:.2f}s")
    return certificates


def run_suite(config=None, workers=1):
    """Run the configured checks; certificates come back in a stable order"""
    checks, settings = resolve_settings(config)
    if not checks:
        return []
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        futures = [executor.submit(_run_check, name, settings) for name in checks]
        certificates = [c for future in futures for c in future.result()]
    certificates.sort(key=lambda c: (c.name, json.dumps(c.params, sort_keys=True, default=str)))
    return certificates


class SuiteService:

    @staticmethod
    def run(config=None, workers=1):
        """Run the suite"""
        try:
            return run_suite(config, workers), None
        except Exception as e:
            logger.error(f"Suite error: {str(e)}")
            return None, str(e)
