"""
minilang subject adapter
"""

import json
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from ..errors import SubjectCrash
from ..subject import protocol
from ..subject.adapter import SubjectAdapter
from ..subject.types import (
    CompileResult, CoverageRecord, Diagnostic, ParseReport, SuiteResult, TestOutcome, Workspace,
)
from ..subject.variant import VARIANT_FILE, read_deletions
from . import ast
from .checker import check_program
from .harness import SingleTest, WholeSuite, run_tests
from .mutator import apply_deletions
from .parser import parse_source_tree, parse_test_tree

logger = logging.getLogger(__name__)

SUITE_RESULT_FILE = 'suite-result.json'
COVERAGE_FILE = 'coverage.json'


@dataclass(frozen=True)
class Build:
    program: ast.Program
    suite: ast.TestSuiteDef
    diagnostics: Tuple[Diagnostic, ...]

    @property
    def ok(self) -> bool:
        return not self.diagnostics


class MiniLangAdapter(SubjectAdapter):
    """Runs minilang subjects in the calling process"""

    adapter_id = 'minilang'

    def _parse(self, ws: Workspace) -> Tuple[ast.Program, ast.TestSuiteDef, List[Diagnostic]]:
        program, source_diagnostics = parse_source_tree(ws.source_dir)
        suite, test_diagnostics = parse_test_tree(ws.test_dir)
        return program, suite, source_diagnostics + test_diagnostics

    def build(self, ws: Workspace) -> Build:
        """Parse the unmutated tree, apply the variant's deletions and check the result"""
        program, suite, diagnostics = self._parse(ws)
        if diagnostics:
            return Build(program, suite, tuple(diagnostics))
        deletions = read_deletions(ws)
        unknown = [loc for loc in deletions if loc not in program.statement_table]
        if unknown:
            return Build(program, suite, tuple(
                Diagnostic(file=VARIANT_FILE, line=0, message=f"no statement at {loc}") for loc in unknown))
        program = apply_deletions(program, deletions)
        return Build(program, suite, tuple(check_program(program, suite)))

    def parse(self, ws: Workspace) -> ParseReport:
        program, _, diagnostics = self._parse(ws)
        return ParseReport(ok=not diagnostics, diagnostics=tuple(diagnostics),
                           statements=tuple(sorted(program.statement_table)))

    def compile(self, ws: Workspace) -> CompileResult:
        build = self.build(ws)
        if not build.ok:
            logger.debug(f"{ws.defect_id} [{ws.label}] does not compile: {build.diagnostics[0]}")
        return CompileResult(ok=build.ok, diagnostics=build.diagnostics)

    def _compiled(self, ws: Workspace) -> Build:
        build = self.build(ws)
        if not build.ok:
            raise SubjectCrash(f"{ws.defect_id} cannot run: {build.diagnostics[0]}")
        return build

    def _write(self, ws: Workspace, name: str, payload) -> None:
        with open(ws.temp_dir / name, 'w', encoding='utf-8') as f:
            json.dump(payload, f, indent=2, sort_keys=True)

    def run_suite(self, ws: Workspace, suite_timeout: Optional[float] = None,
                  test_timeout: Optional[float] = None) -> SuiteResult:
        build = self._compiled(ws)
        run = run_tests(build.program, build.suite, WholeSuite(), fuel=self.settings.fuel,
                        test_timeout=test_timeout or self.settings.test_timeout,
                        suite_timeout=suite_timeout or self.settings.suite_timeout)
        self._write(ws, SUITE_RESULT_FILE, protocol.suite_result_to_dict(run.result))
        return run.result

    def run_single(self, ws: Workspace, test_id: str,
                   test_timeout: Optional[float] = None) -> Tuple[TestOutcome, CoverageRecord]:
        build = self._compiled(ws)
        run = run_tests(build.program, build.suite, SingleTest(test_id), fuel=self.settings.fuel,
                        test_timeout=test_timeout or self.settings.test_timeout)
        record = run.coverage[test_id]
        self._write(ws, COVERAGE_FILE, protocol.coverage_to_dict(record))
        return record.outcome, record
