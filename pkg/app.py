import logging

import click

from config import Config
from routes.common import emit
from routes.freehedra import freehedra_cli
from routes.hochschild import hochschild_cli
from routes.loopmodel import loopmodel_cli
from routes.suite import suite_cli

logging.basicConfig(
    level=getattr(logging, Config.LOG_LEVEL.upper(), logging.WARNING),
    format='%(asctime)s %(levelname)s %(name)s: %(message)s'
)


@click.group()
@click.version_option('1.0.0', prog_name='freeloop')
def cli():
    """Symbolic models of free loop spaces: freehedra, Lambda X and Hochschild products"""


# Register command groups
cli.add_command(freehedra_cli)
cli.add_command(loopmodel_cli)
cli.add_command(hochschild_cli)
cli.add_command(suite_cli)


@cli.command('config')
def show_config():
    """Effective configuration"""
    emit({'success': True, 'data': Config.as_dict()})


if __name__ == '__main__':
    cli()
