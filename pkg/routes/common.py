import json
import sys

import click
from marshmallow import ValidationError

from schemas import CertificateSchema


def emit(payload, json_path=None):
    """Print a JSON payload, optionally writing the same text to a file"""
    text = json.dumps(payload, indent=2, sort_keys=True, default=str)
    if json_path:
        with open(json_path, 'w') as handle:
            handle.write(text + '\n')
    click.echo(text)


def fail(error, code=2):
    click.echo(json.dumps({'success': False, 'error': error}, indent=2))
    sys.exit(code)


def write_text(path, content):
    with open(path, 'w') as handle:
        handle.write(content)


def load_json(path, schema):
    """Load and validate a JSON file; exits with code 2 on bad input"""
    try:
        with open(path) as handle:
            return schema.load(json.load(handle))
    except ValidationError as e:
        fail(f"Invalid {path}: {e.messages}")
    except (OSError, ValueError) as e:
        fail(f"Cannot read {path}: {str(e)}")


def dump_certificates(certificates, timings=False):
    schema = CertificateSchema(many=True, exclude=() if timings else ('duration',))
    return schema.dump(certificates)


def emit_certificate(certificate, json_path=None):
    """Print one certificate; exit 1 unless it passed"""
    emit({'success': True, 'data': dump_certificates([certificate])[0]}, json_path)
    if not certificate.passed:
        sys.exit(1)
