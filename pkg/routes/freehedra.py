import click

from config import Config
from routes.common import emit, emit_certificate, fail, load_json, write_text
from schemas import FnSetSchema
from services.figures import FigureService
from services.fn_sets import FnSetService, MutatedFnSet
from services.freehedra import FreehedraService
from services.report_service import ReportService


@click.group(name='freehedra')
def freehedra_cli():
    """Freehedra F_n: faces, diagonal, identities and figures"""


@freehedra_cli.command('fvector')
@click.argument('n', type=click.IntRange(0, 8))
@click.option('--csv', 'csv_path', type=click.Path(dir_okay=False), help='Also export f-vectors of F_0..F_n to CSV')
def fvector(n, csv_path):
    """Face counts of F_n by dimension"""
    data, error = FreehedraService.f_vector(n)
    if error:
        fail(error)

    if csv_path:
        csv_content, error = ReportService.export_f_vectors(n)
        if error:
            fail(error)
        write_text(csv_path, csv_content)

    emit({'success': True, 'data': data})


@freehedra_cli.command('diagonal')
@click.argument('n', type=click.IntRange(0, 6))
def diagonal(n):
    """Diagonal of the top cell of F_n"""
    data, error = FreehedraService.diagonal(n)
    if error:
        fail(error)
    emit({'success': True, 'data': data})


@freehedra_cli.command('verify')
@click.option('--m', 'm', type=click.IntRange(0, 6), default=2, show_default=True)
@click.option('--n', 'n', type=click.IntRange(0, 6), default=0, show_default=True)
@click.option('--table', type=click.Path(exists=True, dir_okay=False), help='F_n-set given as JSON operator tables')
@click.option('--fault', type=click.Choice(MutatedFnSet.FAULTS), default=None)
def verify(m, n, table, fault):
    """Check the structural identities on F_m x I^n or on a table"""
    data = load_json(table, FnSetSchema()) if table else None
    certificate, error = FnSetService.verify(m, n, table=data, fault=fault)
    if error:
        fail(error)
    emit_certificate(certificate)


@freehedra_cli.command('svg')
@click.argument('n', type=int)
@click.option('--output-dir', type=click.Path(file_okay=False), default=Config.OUTPUT_DIR, show_default=True)
def svg(n, output_dir):
    """Write SVG drawings of F_0..F_n (n <= 3)"""
    paths, error = FigureService.export(n, output_dir)
    if error:
        fail(error)
    emit({'success': True, 'data': {'files': paths}})
