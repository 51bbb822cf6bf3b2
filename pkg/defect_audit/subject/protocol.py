"""
Line-delimited JSON protocol spoken with external adapter processes

Request:  {"id": 7, "op": "run_single", "workspace": {...}, "args": {"test_id": "A::b"}}
Response: {"id": 7, "ok": true, "result": {...}}
          {"id": 7, "ok": false, "error": {"type": "UnknownTest", "message": "..."}}
One request is in flight per process at any time.
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from ..errors import ProtocolError
from .types import (
    CompileResult, CoverageRecord, Diagnostic, ParseReport, StatementLocation, SuiteResult,
    TestOutcome, TestStatus, Workspace,
)

OPERATIONS = ('parse', 'compile', 'run_suite', 'run_single')


def workspace_to_dict(ws: Workspace) -> Dict[str, Any]:
    return {'defect_id': ws.defect_id, 'root': str(ws.root), 'temp_dir': str(ws.temp_dir), 'label': ws.label}


def workspace_from_dict(data: Dict[str, Any]) -> Workspace:
    return Workspace(defect_id=data['defect_id'], root=Path(data['root']),
                     temp_dir=Path(data['temp_dir']), label=data['label'])


def _diagnostic_to_dict(d: Diagnostic) -> Dict[str, Any]:
    return {'file': d.file, 'line': d.line, 'column': d.column, 'message': d.message, 'severity': d.severity}


def _diagnostic_from_dict(data: Dict[str, Any]) -> Diagnostic:
    return Diagnostic(file=data['file'], line=int(data['line']), message=data['message'],
                      column=int(data.get('column', 0)), severity=data.get('severity', 'error'))


def location_to_dict(loc: StatementLocation) -> Dict[str, Any]:
    return {'file': loc.file, 'statement_index': loc.statement_index}


def location_from_dict(data: Dict[str, Any]) -> StatementLocation:
    return StatementLocation(file=data['file'], statement_index=int(data['statement_index']))


def parse_report_to_dict(report: ParseReport) -> Dict[str, Any]:
    return {
        'ok': report.ok,
        'diagnostics': [_diagnostic_to_dict(d) for d in report.diagnostics],
        'statements': [location_to_dict(s) for s in report.statements],
    }


def parse_report_from_dict(data: Dict[str, Any]) -> ParseReport:
    return ParseReport(
        ok=bool(data['ok']),
        diagnostics=tuple(_diagnostic_from_dict(d) for d in data.get('diagnostics', [])),
        statements=tuple(location_from_dict(s) for s in data.get('statements', [])),
    )


def compile_result_to_dict(result: CompileResult) -> Dict[str, Any]:
    return {'ok': result.ok, 'diagnostics': [_diagnostic_to_dict(d) for d in result.diagnostics]}


def compile_result_from_dict(data: Dict[str, Any]) -> CompileResult:
    return CompileResult(ok=bool(data['ok']),
                         diagnostics=tuple(_diagnostic_from_dict(d) for d in data.get('diagnostics', [])))


def outcome_to_dict(outcome: TestOutcome) -> Dict[str, Any]:
    return {'test_id': outcome.test_id, 'status': outcome.status.value,
            'message': outcome.message, 'duration': outcome.duration}


def outcome_from_dict(data: Dict[str, Any]) -> TestOutcome:
    try:
        status = TestStatus(data['status'])
    except ValueError as e:
        raise ProtocolError(f"Unknown test status {data.get('status')!r}") from e
    return TestOutcome(test_id=data['test_id'], status=status,
                       message=data.get('message'), duration=float(data.get('duration', 0.0)))


def suite_result_to_dict(result: SuiteResult) -> Dict[str, Any]:
    return {'outcomes': [outcome_to_dict(o) for o in result.outcomes.values()], 'wall_time': result.wall_time}


def suite_result_from_dict(data: Dict[str, Any]) -> SuiteResult:
    outcomes: Dict[str, TestOutcome] = {}
    for raw in data.get('outcomes', []):
        outcome = outcome_from_dict(raw)
        if outcome.test_id in outcomes:
            raise ProtocolError(f"Duplicate test id {outcome.test_id!r} in suite result")
        outcomes[outcome.test_id] = outcome
    return SuiteResult(outcomes=outcomes, wall_time=float(data.get('wall_time', 0.0)))


def coverage_to_dict(record: CoverageRecord) -> Dict[str, Any]:
    return {
        'test_id': record.test_id,
        'covered': [location_to_dict(loc) for loc in sorted(record.covered)],
        'outcome': outcome_to_dict(record.outcome),
    }


def coverage_from_dict(data: Dict[str, Any]) -> CoverageRecord:
    return CoverageRecord(
        test_id=data['test_id'],
        covered=frozenset(location_from_dict(loc) for loc in data.get('covered', [])),
        outcome=outcome_from_dict(data['outcome']),
    )


def single_result_to_dict(result: Tuple[TestOutcome, CoverageRecord]) -> Dict[str, Any]:
    outcome, record = result
    return {'outcome': outcome_to_dict(outcome), 'coverage': coverage_to_dict(record)}


def single_result_from_dict(data: Dict[str, Any]) -> Tuple[TestOutcome, CoverageRecord]:
    return outcome_from_dict(data['outcome']), coverage_from_dict(data['coverage'])


RESULT_ENCODERS = {
    'parse': parse_report_to_dict,
    'compile': compile_result_to_dict,
    'run_suite': suite_result_to_dict,
    'run_single': single_result_to_dict,
}

RESULT_DECODERS = {
    'parse': parse_report_from_dict,
    'compile': compile_result_from_dict,
    'run_suite': suite_result_from_dict,
    'run_single': single_result_from_dict,
}


def encode_request(request_id: int, op: str, ws: Workspace, args: Optional[Dict[str, Any]] = None) -> str:
    if op not in OPERATIONS:
        raise ProtocolError(f"Unknown operation {op!r}")
    message = {'id': request_id, 'op': op, 'workspace': workspace_to_dict(ws), 'args': args or {}}
    return json.dumps(message, sort_keys=True) + '\n'


def decode_request(line: str) -> Tuple[int, str, Workspace, Dict[str, Any]]:
    message = _load(line)
    try:
        op = message['op']
        if op not in OPERATIONS:
            raise ProtocolError(f"Unknown operation {op!r}")
        return int(message['id']), op, workspace_from_dict(message['workspace']), dict(message.get('args') or {})
    except (KeyError, TypeError, ValueError) as e:
        raise ProtocolError(f"Malformed request: {e}") from e


def encode_response(request_id: int, result: Dict[str, Any]) -> str:
    return json.dumps({'id': request_id, 'ok': True, 'result': result}, sort_keys=True) + '\n'


def encode_error(request_id: Optional[int], error_type: str, message: str) -> str:
    payload = {'id': request_id, 'ok': False, 'error': {'type': error_type, 'message': message}}
    return json.dumps(payload, sort_keys=True) + '\n'


def decode_response(line: str, expected_id: int) -> Dict[str, Any]:
    """Return the decoded response; error responses are returned unchanged for the caller to raise"""
    message = _load(line)
    if message.get('id') != expected_id:
        raise ProtocolError(f"Response id {message.get('id')!r} does not match request id {expected_id}")
    if 'ok' not in message or ('result' not in message and 'error' not in message):
        raise ProtocolError(f"Malformed response: {line.strip()[:200]}")
    return message


def _load(line: str) -> Dict[str, Any]:
    try:
        message = json.loads(line)
    except json.JSONDecodeError as e:
        raise ProtocolError(f"Not a JSON message: {line.strip()[:200]!r}") from e
    if not isinstance(message, dict):
        raise ProtocolError("Protocol messages must be JSON objects")
    return message
