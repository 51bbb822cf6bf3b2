"""
Adapter replaying scripted scenarios
"""

import logging
import threading
from collections import defaultdict
from typing import Dict, Optional, Tuple

from ..errors import AdapterFailure, ParseError, SubjectCrash, UnknownTest
from ..subject.adapter import SubjectAdapter
from ..subject.types import (
    CompileResult, CoverageRecord, Diagnostic, ParseReport, SubjectSettings, SuiteResult, TestOutcome, Workspace,
)
from ..subject.variant import read_deletions
from .scenario import FULL, SCENARIO_FILE, SINGLE, STATEMENT_FILE, Scenario, load_scenario, scripted_run

logger = logging.getLogger(__name__)


class ScriptedAdapter(SubjectAdapter):
    """
    Replays ``scenario.yaml`` from the workspace's test tree

    The execution counter of a defect counts its run_suite calls; run_single
    reads the current value without advancing it.
    """

    adapter_id = 'scripted'

    def __init__(self, settings: Optional[SubjectSettings] = None):
        super().__init__(settings)
        self._counters: Dict[str, int] = defaultdict(int)
        self._lock = threading.Lock()

    def _scenario(self, ws: Workspace) -> Scenario:
        try:
            return load_scenario(ws.test_dir / SCENARIO_FILE)
        except ParseError as e:
            raise AdapterFailure(f"{ws.defect_id}: {e}") from e

    def _deletions(self, ws: Workspace, scenario: Scenario) -> Tuple[int, ...]:
        indexes = []
        for loc in read_deletions(ws):
            if loc.file != STATEMENT_FILE or not 1 <= loc.statement_index <= scenario.statements:
                raise SubjectCrash(f"{ws.defect_id}: no statement at {loc}")
            indexes.append(loc.statement_index)
        return tuple(indexes)

    def execution_count(self, defect_id: str) -> int:
        with self._lock:
            return self._counters[defect_id]

    def reset_counters(self) -> None:
        with self._lock:
            self._counters.clear()

    def parse(self, ws: Workspace) -> ParseReport:
        scenario = self._scenario(ws)
        if not scenario.parse_ok:
            return ParseReport(ok=False, diagnostics=(Diagnostic(STATEMENT_FILE, 1, 'scripted parse failure'),))
        return ParseReport(ok=True, statements=scenario.locations)

    def compile(self, ws: Workspace) -> CompileResult:
        scenario = self._scenario(ws)
        if not (scenario.parse_ok and scenario.compile_ok):
            return CompileResult(ok=False, diagnostics=(Diagnostic(STATEMENT_FILE, 1, 'scripted compile failure'),))
        for loc in read_deletions(ws):
            if loc.file != STATEMENT_FILE or not 1 <= loc.statement_index <= scenario.statements:
                return CompileResult(ok=False, diagnostics=(Diagnostic(loc.file, 0, f"no statement at {loc}"),))
        return CompileResult(ok=True)

    def run_suite(self, ws: Workspace, suite_timeout: Optional[float] = None,
                  test_timeout: Optional[float] = None) -> SuiteResult:
        scenario = self._scenario(ws)
        with self._lock:
            self._counters[ws.defect_id] += 1
            counter = self._counters[ws.defect_id]
        if scenario.crash_suite:
            raise SubjectCrash(f"{ws.defect_id}: scripted test process crash")
        result = scripted_run(scenario, FULL, counter, deletions=self._deletions(ws, scenario))
        logger.debug(f"{ws.defect_id} execution {counter}: failing {sorted(result.failing)}")
        return result

    def run_single(self, ws: Workspace, test_id: str,
                   test_timeout: Optional[float] = None) -> Tuple[TestOutcome, CoverageRecord]:
        scenario = self._scenario(ws)
        if scenario.behavior(test_id) is None:
            raise UnknownTest(f"Test '{test_id}' is not part of scenario {scenario.defect_id}")
        outcome = scripted_run(scenario, SINGLE, self.execution_count(ws.defect_id), test_id=test_id,
                               deletions=self._deletions(ws, scenario))
        return outcome, CoverageRecord(test_id=test_id, covered=scenario.covered(test_id), outcome=outcome)
