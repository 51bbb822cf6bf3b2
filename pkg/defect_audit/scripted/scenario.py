"""
Scenario model, loading and deterministic replay
"""

import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, Optional, Tuple, Union

import yaml

from ..errors import ParseError
from ..subject.types import StatementLocation, SuiteResult, TestOutcome, TestStatus

SCENARIO_FILE = 'scenario.yaml'
STATEMENT_FILE = 'scenario'

FULL = 'full'
SINGLE = 'single'


@dataclass(frozen=True)
class AlwaysPass:
    pass


@dataclass(frozen=True)
class AlwaysFail:
    message: str = 'scripted failure'


@dataclass(frozen=True)
class FlakyFail:
    probability: float


@dataclass(frozen=True)
class FailOnlyInFullSuite:
    pass


@dataclass(frozen=True)
class PassOnlyInFullSuite:
    pass


@dataclass(frozen=True)
class FailAfterNthExecution:
    n: int


Behavior = Union[AlwaysPass, AlwaysFail, FlakyFail, FailOnlyInFullSuite, PassOnlyInFullSuite,
                 FailAfterNthExecution]


@dataclass(frozen=True)
class Scenario:
    defect_id: str
    tests: Tuple[Tuple[str, Behavior], ...]
    seed: int = 0
    compile_ok: bool = True
    parse_ok: bool = True
    crash_suite: bool = False
    statements: int = 0
    coverage: Dict[str, FrozenSet[int]] = field(default_factory=dict)
    plausible_deletions: FrozenSet[int] = frozenset()

    def __post_init__(self):
        ids = [t for t, _ in self.tests]
        if len(ids) != len(set(ids)):
            raise ParseError(f"Scenario {self.defect_id} repeats a test id")
        for test_id, behavior in self.tests:
            if isinstance(behavior, FlakyFail) and not 0.0 <= behavior.probability <= 1.0:
                raise ParseError(f"{test_id}: flaky_fail probability must lie in [0, 1]")
            if isinstance(behavior, FailAfterNthExecution) and behavior.n < 1:
                raise ParseError(f"{test_id}: fail_after_nth_execution needs n >= 1")
        for index in set(self.plausible_deletions).union(*self.coverage.values()):
            if not 1 <= index <= self.statements:
                raise ParseError(f"Scenario {self.defect_id} refers to statement {index} "
                                 f"but declares {self.statements}")

    @property
    def test_ids(self) -> Tuple[str, ...]:
        return tuple(t for t, _ in self.tests)

    def behavior(self, test_id: str) -> Optional[Behavior]:
        return dict(self.tests).get(test_id)

    def location(self, index: int) -> StatementLocation:
        return StatementLocation(file=STATEMENT_FILE, statement_index=index)

    @property
    def locations(self) -> Tuple[StatementLocation, ...]:
        return tuple(self.location(i) for i in range(1, self.statements + 1))

    def covered(self, test_id: str) -> FrozenSet[StatementLocation]:
        return frozenset(self.location(i) for i in self.coverage.get(test_id, ()))


def _parse_behavior(raw: Any, test_id: str) -> Behavior:
    if raw == 'always_pass':
        return AlwaysPass()
    if raw == 'fail_only_in_full_suite':
        return FailOnlyInFullSuite()
    if raw == 'pass_only_in_full_suite':
        return PassOnlyInFullSuite()
    if raw == 'always_fail':
        return AlwaysFail()
    if isinstance(raw, dict) and len(raw) == 1:
        (kind, value), = raw.items()
        try:
            if kind == 'always_fail':
                return AlwaysFail(str(value))
            if kind == 'flaky_fail':
                return FlakyFail(float(value))
            if kind == 'fail_after_nth_execution':
                return FailAfterNthExecution(int(value))
        except (TypeError, ValueError) as e:
            raise ParseError(f"{test_id}: bad value for {kind}: {value!r}") from e
    raise ParseError(f"{test_id}: unknown behavior {raw!r}")


def scenario_from_dict(document: Dict[str, Any]) -> Scenario:
    if not isinstance(document, dict):
        raise ParseError("A scenario must be a mapping")
    try:
        tests = []
        for raw in document.get('tests') or []:
            test_id = str(raw['id'])
            tests.append((test_id, _parse_behavior(raw.get('behavior', 'always_pass'), test_id)))
        return Scenario(
            defect_id=str(document['defect_id']),
            tests=tuple(tests),
            seed=int(document.get('seed', 0)),
            compile_ok=bool(document.get('compile_ok', True)),
            parse_ok=bool(document.get('parse_ok', True)),
            crash_suite=bool(document.get('crash_suite', False)),
            statements=int(document.get('statements', 0)),
            coverage={str(t): frozenset(int(i) for i in indexes)
                      for t, indexes in (document.get('coverage') or {}).items()},
            plausible_deletions=frozenset(int(i) for i in document.get('plausible_deletions') or []),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"Malformed scenario: {e}") from e


def load_scenario(path: Path) -> Scenario:
    """
    Load a scenario file

    Raises:
        ParseError: the file is missing or malformed
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            document = yaml.safe_load(f)
    except OSError as e:
        raise ParseError(f"Cannot read scenario {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ParseError(f"Scenario {path} is not valid YAML: {e}") from e
    return scenario_from_dict(document)


def _status(scenario: Scenario, test_id: str, behavior: Behavior, mode: str,
            execution_counter: int) -> Tuple[TestStatus, Optional[str]]:
    if isinstance(behavior, AlwaysPass):
        failed, message = False, None
    elif isinstance(behavior, AlwaysFail):
        failed, message = True, behavior.message
    elif isinstance(behavior, FlakyFail):
        rng = random.Random(f"{scenario.seed}:{test_id}:{execution_counter}:{mode}")
        failed, message = rng.random() < behavior.probability, 'flaky failure'
    elif isinstance(behavior, FailOnlyInFullSuite):
        failed, message = mode == FULL, 'fails when run after other tests'
    elif isinstance(behavior, PassOnlyInFullSuite):
        failed, message = mode == SINGLE, 'fails when run alone'
    else:
        failed, message = execution_counter >= behavior.n, f"fails from execution {behavior.n} on"
    return (TestStatus.FAIL, message) if failed else (TestStatus.PASS, None)


def scripted_run(scenario: Scenario, mode: str, execution_counter: int,
                 test_id: Optional[str] = None,
                 deletions: Iterable[int] = ()) -> Union[SuiteResult, TestOutcome]:
    """
    Replay the scenario's behaviors

    mode is FULL (returns a SuiteResult over all tests in declared order) or
    SINGLE (returns the TestOutcome of test_id). A variant deleting a
    plausible statement passes every test; any other deletion fails the
    tests covering it.
    """
    deletions = frozenset(deletions)
    plausible = bool(deletions) and deletions <= scenario.plausible_deletions

    def outcome(tid: str, behavior: Behavior) -> TestOutcome:
        if plausible:
            return TestOutcome(test_id=tid, status=TestStatus.PASS)
        if deletions & scenario.coverage.get(tid, frozenset()):
            return TestOutcome(test_id=tid, status=TestStatus.FAIL, message='deleted statement was needed')
        status, message = _status(scenario, tid, behavior, mode, execution_counter)
        return TestOutcome(test_id=tid, status=status, message=message)

    if mode == SINGLE:
        behavior = scenario.behavior(test_id)
        if behavior is None:
            raise KeyError(test_id)
        return outcome(test_id, behavior)
    if mode != FULL:
        raise ValueError(f"Unknown mode {mode!r}")
    return SuiteResult(outcomes={tid: outcome(tid, behavior) for tid, behavior in scenario.tests})
