import click

from config import Config
from routes.common import emit, emit_certificate, fail, load_json, write_text
from schemas import ChainComplexSchema, HomologySummarySchema
from services.chain_algebra import ChainAlgebraService
from services.loop_model import LoopModelService
from services.report_service import ReportService


@click.group(name='loopmodel')
def loopmodel_cli():
    """Lambda X and the Cartier complex of a 1-reduced simplicial set"""


@loopmodel_cli.command('identify')
@click.argument('space')
@click.option('--ring', default=Config.RING, show_default=True)
@click.option('--bound', type=click.IntRange(0, 12), default=Config.BOUND, show_default=True)
@click.option('--fault', type=click.Choice(['boundary_sign', 'twisting_swap']), default=None)
@click.option('--json', 'json_path', type=click.Path(dir_okay=False))
def identify(space, ring, bound, fault, json_path):
    """Compare the normalized chains of Lambda X with the Cartier complex"""
    certificate, error = LoopModelService.identify(space, ring, bound, fault)
    if error:
        fail(error)
    emit_certificate(certificate, json_path)


@loopmodel_cli.command('homology')
@click.argument('space', required=False)
@click.option('--complex', 'complex_path', type=click.Path(exists=True, dir_okay=False),
              help='Chain complex given as JSON instead of a space')
@click.option('--ring', default=Config.RING, show_default=True)
@click.option('--bound', type=click.IntRange(0, 12), default=Config.BOUND, show_default=True)
@click.option('--csv', 'csv_path', type=click.Path(dir_okay=False))
def homology(space, complex_path, ring, bound, csv_path):
    """Cartier homology of SPACE, or homology of a JSON complex"""
    if bool(space) == bool(complex_path):
        fail('Give either a space or --complex')

    if complex_path:
        summary, error = ChainAlgebraService.homology(load_json(complex_path, ChainComplexSchema()))
    else:
        summary, error = LoopModelService.homology(space, ring, bound)
    if error:
        fail(error)

    if csv_path:
        csv_content, error = ReportService.export_homology(summary)
        if error:
            fail(error)
        write_text(csv_path, csv_content)

    emit({'success': True, 'data': HomologySummarySchema().dump(summary)})
