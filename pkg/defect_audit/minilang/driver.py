"""
Minimal test driver process for minilang subjects

Reads protocol requests from stdin and answers on stdout, one JSON line each.
Run as ``python -m defect_audit.minilang.driver``.
"""

import logging
import os
import sys
from typing import Iterable, List

import click

from ..errors import AuditError, ProtocolError
from ..subject import protocol
from ..subject.types import SubjectSettings, Workspace
from .adapter import MiniLangAdapter
from .interpreter import DEFAULT_FUEL

logger = logging.getLogger(__name__)

ALLOWED_MODULES = frozenset({
    'defect_audit',
    'defect_audit.errors',
    'defect_audit.subject',
    'defect_audit.subject.adapter',
    'defect_audit.subject.protocol',
    'defect_audit.subject.types',
    'defect_audit.subject.variant',
})
ALLOWED_PREFIXES = ('defect_audit.minilang',)


def check_loaded_modules(modules: Iterable[str]) -> List[str]:
    """Return the loaded harness modules that may not live in a test process"""
    return sorted(
        name for name in modules
        if (name == 'defect_audit' or name.startswith('defect_audit.'))
        and name not in ALLOWED_MODULES
        and not any(name == p or name.startswith(p + '.') for p in ALLOWED_PREFIXES)
    )


def confine(ws: Workspace) -> None:
    """Refuse workspaces that do not follow the checkout layout, then work inside temp_dir"""
    root = ws.root.resolve()
    temp_dir = ws.temp_dir.resolve()
    if temp_dir.parent != root.parent or not root.is_dir() or not temp_dir.is_dir():
        raise ProtocolError(f"Workspace {ws.root} is not a checkout created by the auditor")
    os.chdir(temp_dir)


def handle(adapter: MiniLangAdapter, line: str) -> str:
    request_id = None
    try:
        request_id, op, ws, args = protocol.decode_request(line)
        confine(ws)
        if op == 'parse':
            result = adapter.parse(ws)
        elif op == 'compile':
            result = adapter.compile(ws)
        elif op == 'run_suite':
            result = adapter.run_suite(ws, args.get('suite_timeout'), args.get('test_timeout'))
        else:
            if 'test_id' not in args:
                raise ProtocolError("run_single needs a test_id")
            result = adapter.run_single(ws, args['test_id'], args.get('test_timeout'))
        return protocol.encode_response(request_id, protocol.RESULT_ENCODERS[op](result))
    except AuditError as e:
        return protocol.encode_error(request_id, type(e).__name__, str(e))
    except Exception as e:
        logger.exception("driver failure")
        return protocol.encode_error(request_id, 'AdapterFailure', f"{type(e).__name__}: {e}")


@click.command()
@click.option('--fuel', type=int, default=DEFAULT_FUEL, show_default=True, help='Step budget per test')
@click.option('--debug', is_flag=True, help='Log to stderr at debug level')
def main(fuel, debug):
    """Serve minilang subjects over the external-adapter protocol"""
    logging.basicConfig(level=logging.DEBUG if debug else logging.WARNING, stream=sys.stderr,
                        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')

    violations = check_loaded_modules(sys.modules)
    if violations:
        sys.stdout.write(protocol.encode_error(None, 'AdapterFailure',
                                               f"harness modules loaded in driver: {', '.join(violations)}"))
        sys.stdout.flush()
        sys.exit(3)

    adapter = MiniLangAdapter(SubjectSettings(fuel=fuel))
    for line in sys.stdin:
        if not line.strip():
            continue
        sys.stdout.write(handle(adapter, line))
        sys.stdout.flush()


if __name__ == '__main__':
    main()
