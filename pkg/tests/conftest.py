import json

import pytest
from click.testing import CliRunner

from app import cli


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def invoke(runner):
    """Run the CLI and decode its JSON output"""
    def run(*args):
        result = runner.invoke(cli, [str(a) for a in args])
        return result, json.loads(result.output)
    return run


@pytest.fixture
def json_file(tmp_path):
    def write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)
    return write
