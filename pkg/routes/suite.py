import json
import sys

import click

from config import Config
from routes.common import dump_certificates, emit, fail, write_text
from schemas import FAULTS
from services.report_service import ReportService
from services.suite import CHECKS, SuiteService


@click.group(name='suite')
def suite_cli():
    """Verification suite over every registered invariant"""


@suite_cli.command('list')
def list_checks():
    """Names of the registered checks"""
    emit({'success': True, 'data': list(CHECKS)})


@suite_cli.command('run')
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False),
              help='JSON suite configuration; flags override it')
@click.option('--ring', default=None, help=f"Coefficient ring [default: {Config.RING}]")
@click.option('--bound', type=int, default=None, help=f"Degree bound [default: {Config.BOUND}]")
@click.option('--seed', type=int, default=None, help=f"Seed for sampled checks [default: {Config.SEED}]")
@click.option('--workers', type=click.IntRange(1, 64), default=Config.WORKERS, show_default=True)
@click.option('--check', 'checks', multiple=True, help='Run only this check, repeatable')
@click.option('--space', 'spaces', multiple=True, help='Corpus space, repeatable')
@click.option('--fault', 'faults', multiple=True, type=click.Choice(FAULTS), help='Inject a fault, repeatable')
@click.option('--json', 'json_path', type=click.Path(dir_okay=False), help='Write certificates as JSON')
@click.option('--csv', 'csv_path', type=click.Path(dir_okay=False), help='Write certificates as CSV')
@click.option('--timings', is_flag=True, help='Record wall-clock durations')
def run(config_path, ring, bound, seed, workers, checks, spaces, faults, json_path, csv_path, timings):
    """Run the checks and emit one certificate per instance"""
    config = {}
    if config_path:
        try:
            with open(config_path) as handle:
                config = json.load(handle)
        except ValueError as e:
            fail(f"Cannot read {config_path}: {str(e)}")
        if not isinstance(config, dict):
            fail(f"{config_path} must hold a JSON object")

    # Flags override the file
    overrides = {'ring': ring, 'bound': bound, 'seed': seed,
                 'checks': list(checks) or None, 'spaces': list(spaces) or None, 'faults': list(faults) or None}
    config.update({key: value for key, value in overrides.items() if value is not None})

    certificates, error = SuiteService.run(config, workers)
    if error:
        fail(error)

    if csv_path:
        csv_content, error = ReportService.export_certificates(certificates, include_duration=timings)
        if error:
            fail(error)
        write_text(csv_path, csv_content)

    failed = [c.name for c in certificates if not c.passed]
    emit({
        'success': not failed,
        'data': dump_certificates(certificates, timings),
        'summary': {'total': len(certificates), 'passed': len(certificates) - len(failed), 'failed': sorted(set(failed))}
    }, json_path)
    if failed:
        sys.exit(1)


@suite_cli.command('report')
@click.argument('csv_path', type=click.Path(exists=True, dir_okay=False))
def report(csv_path):
    """Verdict counts of a certificate CSV written by run --csv"""
    with open(csv_path) as handle:
        counts, error = ReportService.read_certificates(handle.read())
    if error:
        fail(error)
    emit({'success': not counts['failed'], 'data': counts})
    if counts['failed']:
        sys.exit(1)
