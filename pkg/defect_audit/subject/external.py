"""
Bridge to adapters living in another process

Every request runs in a fresh process whose working directory and temporary
directory are the workspace's private temp_dir.
"""

import itertools
import logging
import os
import shlex
import subprocess
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from ..errors import AdapterFailure, ProtocolError, SubjectCrash, TimeoutExceeded, UnknownTest
from . import protocol
from .adapter import SubjectAdapter
from .types import (
    CompileResult, CoverageRecord, ParseReport, SubjectSettings, SuiteResult, TestOutcome, TestStatus,
    Workspace,
)

logger = logging.getLogger(__name__)

# process start-up allowance on top of the subject's own time limits
PROCESS_SLACK = 5.0

_ERROR_TYPES = {
    'UnknownTest': UnknownTest,
    'SubjectCrash': SubjectCrash,
    'TimeoutExceeded': TimeoutExceeded,
    'ProtocolError': ProtocolError,
}


def minilang_driver_command(settings: Optional[SubjectSettings] = None) -> List[str]:
    settings = settings or SubjectSettings()
    return [sys.executable, '-m', 'defect_audit.minilang.driver', '--fuel', str(settings.fuel)]


class ExternalAdapter(SubjectAdapter):
    """Adapter that forwards every operation to an external process"""

    adapter_id = 'external'

    def __init__(self, command: List[str], settings: Optional[SubjectSettings] = None):
        super().__init__(settings)
        if not command:
            raise ValueError("External adapter command must not be empty")
        self.command = list(command)
        self._ids = itertools.count(1)

    @classmethod
    def from_command_line(cls, command_line: str, settings: Optional[SubjectSettings] = None) -> 'ExternalAdapter':
        return cls(shlex.split(command_line), settings)

    def _environment(self, ws: Workspace) -> Dict[str, str]:
        env = dict(os.environ)
        package_parent = str(Path(__file__).resolve().parents[2])
        env['PYTHONPATH'] = os.pathsep.join(filter(None, [package_parent, env.get('PYTHONPATH')]))
        for name in ('TMPDIR', 'TEMP', 'TMP'):
            env[name] = str(ws.temp_dir)
        return env

    def _request(self, op: str, ws: Workspace, timeout: float, args: Optional[Dict[str, Any]] = None) -> Any:
        request_id = next(self._ids)
        line = protocol.encode_request(request_id, op, ws, args)
        logger.debug(f"-> {op} #{request_id} for {ws.defect_id} [{ws.label}]")
        try:
            completed = subprocess.run(
                self.command,
                input=line,
                capture_output=True,
                text=True,
                cwd=str(ws.temp_dir),
                env=self._environment(ws),
                timeout=timeout,
            )
        except subprocess.TimeoutExpired as e:
            raise TimeoutExceeded(f"{op} exceeded {timeout:.1f}s in external adapter") from e
        except OSError as e:
            raise AdapterFailure(f"Could not start external adapter {self.command[0]!r}: {e}") from e

        response_line = next((l for l in completed.stdout.splitlines() if l.strip()), '')
        if not response_line:
            stderr = completed.stderr.strip().splitlines()[-1:] or ['no output']
            message = f"external adapter exited with code {completed.returncode}: {stderr[0]}"
            if op in ('run_suite', 'run_single'):
                raise SubjectCrash(message)
            raise AdapterFailure(message)

        response = protocol.decode_response(response_line, request_id)
        if not response['ok']:
            error = response.get('error') or {}
            error_cls = _ERROR_TYPES.get(error.get('type'), AdapterFailure)
            raise error_cls(error.get('message', 'external adapter reported an error'))
        try:
            return protocol.RESULT_DECODERS[op](response['result'])
        except (KeyError, TypeError, ValueError) as e:
            raise ProtocolError(f"Malformed {op} result: {e}") from e

    def parse(self, ws: Workspace) -> ParseReport:
        return self._request('parse', ws, self.settings.suite_timeout + PROCESS_SLACK)

    def compile(self, ws: Workspace) -> CompileResult:
        return self._request('compile', ws, self.settings.suite_timeout + PROCESS_SLACK)

    def run_suite(self, ws: Workspace, suite_timeout: Optional[float] = None,
                  test_timeout: Optional[float] = None) -> SuiteResult:
        suite_timeout = suite_timeout or self.settings.suite_timeout
        args = {'suite_timeout': suite_timeout, 'test_timeout': test_timeout or self.settings.test_timeout}
        return self._request('run_suite', ws, suite_timeout + PROCESS_SLACK, args)

    def run_single(self, ws: Workspace, test_id: str,
                   test_timeout: Optional[float] = None) -> Tuple[TestOutcome, CoverageRecord]:
        test_timeout = test_timeout or self.settings.test_timeout
        args = {'test_id': test_id, 'test_timeout': test_timeout}
        try:
            return self._request('run_single', ws, test_timeout + PROCESS_SLACK, args)
        except TimeoutExceeded as e:
            outcome = TestOutcome(test_id=test_id, status=TestStatus.TIMEOUT, message=str(e),
                                  duration=test_timeout * 1000.0)
            return outcome, CoverageRecord(test_id=test_id, covered=frozenset(), outcome=outcome)
