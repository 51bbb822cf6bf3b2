"""
Value types exchanged between the auditor and subject adapters
"""

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, FrozenSet, Optional, Tuple


class TestStatus(str, Enum):
    PASS = 'Pass'
    FAIL = 'Fail'
    ERROR = 'Error'
    TIMEOUT = 'Timeout'

    __test__ = False


@dataclass(frozen=True, order=True)
class StatementLocation:
    """A statement in the unmutated source tree; ordered by (file, statement_index)"""
    file: str
    statement_index: int

    def __str__(self) -> str:
        return f"{self.file}#{self.statement_index}"

    @classmethod
    def parse(cls, text: str) -> 'StatementLocation':
        file, _, index = text.rpartition('#')
        return cls(file=file, statement_index=int(index))


@dataclass(frozen=True)
class Workspace:
    """A private copy of one defect plus an execution-private scratch directory"""
    defect_id: str
    root: Path
    temp_dir: Path
    label: str

    @property
    def source_dir(self) -> Path:
        return self.root / 'src'

    @property
    def test_dir(self) -> Path:
        return self.root / 'test'


@dataclass(frozen=True)
class Diagnostic:
    file: str
    line: int
    message: str
    column: int = 0
    severity: str = 'error'

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}: {self.severity}: {self.message}"


@dataclass(frozen=True)
class ParseReport:
    ok: bool
    diagnostics: Tuple[Diagnostic, ...] = ()
    statements: Tuple[StatementLocation, ...] = ()


@dataclass(frozen=True)
class CompileResult:
    ok: bool
    diagnostics: Tuple[Diagnostic, ...] = ()

    def __post_init__(self):
        if self.ok and any(d.severity == 'error' for d in self.diagnostics):
            raise ValueError("a successful compilation cannot carry error diagnostics")


@dataclass(frozen=True)
class TestOutcome:
    test_id: str
    status: TestStatus
    message: Optional[str] = None
    duration: float = 0.0  # milliseconds

    __test__ = False

    def __post_init__(self):
        if self.status is TestStatus.PASS and self.message is not None:
            raise ValueError(f"passing test {self.test_id} cannot carry a message")

    @property
    def passed(self) -> bool:
        return self.status is TestStatus.PASS


@dataclass(frozen=True)
class SuiteResult:
    outcomes: Dict[str, TestOutcome]
    wall_time: float = 0.0  # milliseconds

    @property
    def failing(self) -> FrozenSet[str]:
        """Ids of every test that did not pass"""
        return frozenset(t for t, o in self.outcomes.items() if not o.passed)

    @property
    def all_passed(self) -> bool:
        return bool(self.outcomes) and not self.failing

    def statuses(self) -> Dict[str, TestStatus]:
        return {t: o.status for t, o in self.outcomes.items()}


@dataclass(frozen=True)
class CoverageRecord:
    test_id: str
    covered: FrozenSet[StatementLocation]
    outcome: TestOutcome


@dataclass(frozen=True)
class SubjectSettings:
    """Execution limits handed to adapters"""
    suite_timeout: float = 60.0  # seconds
    test_timeout: float = 10.0  # seconds
    fuel: int = 1_000_000
    extra: Dict[str, str] = field(default_factory=dict)
