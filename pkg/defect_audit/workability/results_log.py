"""
Append-only results log

JSON Lines with sorted keys, one record per line. Producers enqueue records
and a single writer thread appends them in enqueue order.
"""

import json
import logging
import queue
import threading
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Union

from ..errors import IoError, ParseError
from ..subject.types import TestStatus
from .verdicts import Disagreement, Outcome, RoundVerdict, WorkabilityVerdict, combine_rounds

logger = logging.getLogger(__name__)

ROUND = 'round'
AUDIT_ERROR = 'audit_error'
TRIAL = 'trial'
ADEQUACY = 'adequacy'
KINDS = (ROUND, AUDIT_ERROR, TRIAL, ADEQUACY)

WORKABILITY_PHASE = 'workability'
ADEQUACY_PHASE = 'adequacy'

_STOP = object()


def round_to_record(verdict: RoundVerdict) -> Dict[str, Any]:
    return {
        'kind': ROUND,
        'defect_id': verdict.defect_id,
        'round_index': verdict.round_index,
        'parallelism_level': verdict.parallelism_level,
        'outcome': verdict.outcome.value,
        'observed_failing': sorted(verdict.observed_failing),
        'expected_failing': sorted(verdict.expected_failing),
        'disagreements': [
            {'test_id': d.test_id, 'suite_status': d.suite_status.value, 'single_status': d.single_status.value}
            for d in verdict.disagreements
        ],
        'diagnostics': list(verdict.diagnostics),
        'crash': verdict.crash,
    }


def round_from_record(record: Dict[str, Any]) -> RoundVerdict:
    try:
        return RoundVerdict(
            defect_id=record['defect_id'],
            outcome=Outcome(record['outcome']),
            observed_failing=frozenset(record.get('observed_failing', [])),
            disagreements=tuple(
                Disagreement(d['test_id'], TestStatus(d['suite_status']), TestStatus(d['single_status']))
                for d in record.get('disagreements', [])
            ),
            diagnostics=tuple(record.get('diagnostics', [])),
            crash=record.get('crash'),
            round_index=int(record['round_index']),
            parallelism_level=int(record.get('parallelism_level', 1)),
            expected_failing=frozenset(record.get('expected_failing', [])),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"Malformed round record: {e}") from e


def audit_error_record(defect_id: str, message: str, round_index: Optional[int] = None,
                       phase: str = WORKABILITY_PHASE) -> Dict[str, Any]:
    return {'kind': AUDIT_ERROR, 'defect_id': defect_id, 'round_index': round_index, 'message': message,
            'phase': phase}


def encode_record(record: Dict[str, Any]) -> str:
    if record.get('kind') not in KINDS:
        raise ValueError(f"Unknown record kind {record.get('kind')!r}")
    return json.dumps(record, sort_keys=True) + '\n'


def read_records(path: Union[str, Path]) -> Iterator[Dict[str, Any]]:
    """
    Yield the records of a log in file order; a missing file yields nothing

    A truncated final line, as left by an interrupted run, is skipped.
    """
    path = Path(path)
    if not path.exists():
        return
    try:
        with open(path, 'r', encoding='utf-8') as f:
            lines = f.readlines()
    except OSError as e:
        raise IoError(f"Cannot read results log {path}: {e}") from e
    for number, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as e:
            if number == len(lines) and not line.endswith('\n'):
                logger.warning(f"Ignoring truncated last line of {path}")
                continue
            raise ParseError(f"{path}:{number}: not a JSON record") from e
        if not isinstance(record, dict) or record.get('kind') not in KINDS:
            raise ParseError(f"{path}:{number}: unknown record")
        yield record


@dataclass
class AuditState:
    """What a results log says about workability"""
    rounds: Dict[str, List[RoundVerdict]] = field(default_factory=lambda: defaultdict(list))
    audit_errors: Dict[str, str] = field(default_factory=dict)

    def completed_rounds(self, defect_id: str) -> set:
        return {r.round_index for r in self.rounds.get(defect_id, [])}

    def verdicts(self) -> Dict[str, WorkabilityVerdict]:
        return {
            defect_id: combine_rounds(defect_id, rounds)
            for defect_id, rounds in self.rounds.items()
            if rounds and defect_id not in self.audit_errors
        }


def replay(path: Union[str, Path]) -> AuditState:
    """Recompute workability verdicts from a results log"""
    state = AuditState()
    for record in read_records(path):
        if record['kind'] == ROUND:
            verdict = round_from_record(record)
            if verdict.round_index not in state.completed_rounds(verdict.defect_id):
                state.rounds[verdict.defect_id].append(verdict)
        elif record['kind'] == AUDIT_ERROR and record.get('phase', WORKABILITY_PHASE) == WORKABILITY_PHASE:
            state.audit_errors[record['defect_id']] = record.get('message', '')
    return state


def _drop_partial_line(path: Path) -> None:
    """Cut a final line left unterminated by an interrupted writer"""
    if not path.is_file():
        return
    with open(path, 'rb+') as f:
        data = f.read()
        if not data or data.endswith(b'\n'):
            return
        keep = data.rfind(b'\n') + 1
        f.truncate(keep)
    logger.warning(f"Dropped a truncated record at the end of {path}")


class ResultsLog:
    """Single-writer appender; use as a context manager or call close()"""

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self._queue: queue.Queue = queue.Queue()
        self._error: Optional[Exception] = None
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            _drop_partial_line(self.path)
            self._file = open(self.path, 'a', encoding='utf-8')
        except OSError as e:
            raise IoError(f"Cannot open results log {self.path}: {e}") from e
        self._writer = threading.Thread(target=self._drain, name='results-log-writer', daemon=True)
        self._writer.start()

    def _drain(self) -> None:
        while True:
            item = self._queue.get()
            try:
                if item is _STOP:
                    return
                self._file.write(item)
                self._file.flush()
            except OSError as e:
                self._error = e
                logger.error(f"Failed to write results log {self.path}: {e}")
            finally:
                self._queue.task_done()

    def append(self, record: Dict[str, Any]) -> None:
        if self._error is not None:
            raise IoError(f"Results log {self.path} is broken: {self._error}")
        self._queue.put(encode_record(record))

    def flush(self) -> None:
        """Block until every enqueued record is on disk"""
        self._queue.join()

    def close(self) -> None:
        if self._writer.is_alive():
            self._queue.put(_STOP)
            self._writer.join()
        self._file.close()

    def __enter__(self) -> 'ResultsLog':
        return self

    def __exit__(self, *exc) -> None:
        self.close()
