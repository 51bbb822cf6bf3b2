"""
The contract every subject adapter implements
"""

from abc import ABC, abstractmethod
from typing import Optional, Tuple

from .types import CompileResult, CoverageRecord, ParseReport, SubjectSettings, SuiteResult, TestOutcome, Workspace


class SubjectAdapter(ABC):
    """
    Parses, compiles and tests a subject program inside a Workspace

    Implementations must tolerate concurrent calls on distinct workspaces.
    A single workspace is used by at most one call at a time.
    """

    adapter_id: str = ''

    def __init__(self, settings: Optional[SubjectSettings] = None):
        self.settings = settings or SubjectSettings()

    @abstractmethod
    def parse(self, ws: Workspace) -> ParseReport:
        """Parse every source file of the workspace"""

    @abstractmethod
    def compile(self, ws: Workspace) -> CompileResult:
        """Build an executable image of the (possibly mutated) workspace"""

    @abstractmethod
    def run_suite(self, ws: Workspace, suite_timeout: Optional[float] = None,
                  test_timeout: Optional[float] = None) -> SuiteResult:
        """
        Run every test in declared order in one execution context

        Raises:
            SubjectCrash: the test process terminated abnormally
            TimeoutExceeded: the whole-suite budget ran out
        """

    @abstractmethod
    def run_single(self, ws: Workspace, test_id: str,
                   test_timeout: Optional[float] = None) -> Tuple[TestOutcome, CoverageRecord]:
        """
        Run exactly one test in a fresh execution context with coverage

        Raises:
            UnknownTest: test_id is not part of the suite
        """

    def close(self) -> None:
        """Release processes or other resources held by the adapter"""
