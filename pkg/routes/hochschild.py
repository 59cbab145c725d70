import click
from marshmallow import ValidationError

from config import Config
from routes.common import emit, emit_certificate, fail, load_json
from schemas import AlgebraSpecSchema, RingPresentationSchema
from services.hochschild_ring import HochschildService


def _generators(values):
    """Parse label:degree pairs through the algebra schema"""
    items = []
    for value in values:
        label, _, degree = value.partition(':')
        items.append({'label': label, 'degree': degree})
    try:
        data = AlgebraSpecSchema().load({'generators': items})
    except ValidationError as e:
        fail(f"Invalid generators: {e.messages}")
    return [(g['label'], g['degree']) for g in data['generators']]


@click.group(name='hochschild')
def hochschild_cli():
    """Products on Hochschild complexes of homotopy G-algebras"""


@hochschild_cli.command('ring')
@click.option('--space', help='Corpus space; cochains carry the Baues operations')
@click.option('--algebra', type=click.Path(exists=True, dir_okay=False),
              help='Free commutative algebra as JSON; the trivial operations are used')
@click.option('--ring', default=Config.RING, show_default=True)
@click.option('--bound', type=click.IntRange(0, 12), default=Config.BOUND, show_default=True)
def ring(space, algebra, ring, bound):
    """Hochschild homology ring up to the bound"""
    if bool(space) == bool(algebra):
        fail('Give either --space or --algebra')

    generators = None
    if algebra:
        data = load_json(algebra, AlgebraSpecSchema())
        generators = [(g['label'], g['degree']) for g in data['generators']]

    presentation, error = HochschildService.ring(ring, bound, reference=space, generators=generators)
    if error:
        fail(error)
    emit({'success': True, 'data': RingPresentationSchema().dump(presentation)})


@hochschild_cli.command('theorem1')
@click.option('--generator', 'generators', multiple=True, required=True, help='label:degree, repeatable')
@click.option('--ring', default=Config.RING, show_default=True)
@click.option('--bound', type=click.IntRange(0, 12), default=Config.BOUND, show_default=True)
def theorem1(generators, ring, bound):
    """HH of S(U) against S(U) (x) Lambda(s^-1 U)"""
    certificate, error = HochschildService.theorem1(_generators(generators), ring, bound)
    if error:
        fail(error)
    emit_certificate(certificate)


@hochschild_cli.command('example1')
@click.option('--ring', default=Config.RING, show_default=True)
@click.option('--bound', type=click.IntRange(0, 10), default=min(Config.BOUND, 8), show_default=True)
def example1(ring, bound):
    """Perturbed tensor complex against its additive model"""
    report, error = HochschildService.example1(ring, bound)
    if error:
        fail(error)
    emit({'success': True, 'data': report})
