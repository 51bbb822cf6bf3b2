"""
Test harness: whole-suite and single-test execution of minilang tests
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, Optional, Union

from ..errors import TimeoutExceeded, UnknownTest
from ..subject.types import CoverageRecord, SuiteResult, TestOutcome, TestStatus
from . import ast
from .exceptions import AssertionFailed, FuelExhausted, MiniRuntimeError
from .interpreter import DEFAULT_FUEL, Interpreter

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WholeSuite:
    """All tests in declared order, sharing one interpreter"""


@dataclass(frozen=True)
class SingleTest:
    """Exactly one test in a fresh interpreter"""
    test_id: str


Mode = Union[WholeSuite, SingleTest]


@dataclass
class TestRun:
    result: SuiteResult
    coverage: Dict[str, CoverageRecord] = field(default_factory=dict)

    __test__ = False


def _run_one(interpreter: Interpreter, test: ast.TestCase, fuel: int, deadline: Optional[float]) -> CoverageRecord:
    interpreter.refuel(fuel, deadline)
    interpreter.reset_trace()
    started = time.perf_counter()
    status, message = TestStatus.PASS, None
    try:
        interpreter.initialize()
        interpreter.run_body(test.body, test.file)
    except AssertionFailed as e:
        status, message = TestStatus.FAIL, str(e)
    except FuelExhausted as e:
        status, message = TestStatus.TIMEOUT, str(e)
    except MiniRuntimeError as e:
        status, message = TestStatus.ERROR, str(e)
    except RecursionError:
        status, message = TestStatus.ERROR, "interpreter recursion limit reached"
    duration = (time.perf_counter() - started) * 1000.0
    outcome = TestOutcome(test_id=test.test_id, status=status, message=message, duration=duration)
    return CoverageRecord(test_id=test.test_id, covered=frozenset(interpreter.trace), outcome=outcome)


def run_tests(program: ast.Program, suite: ast.TestSuiteDef, mode: Mode, fuel: int = DEFAULT_FUEL,
              test_timeout: Optional[float] = None, suite_timeout: Optional[float] = None) -> TestRun:
    """
    Execute tests of a statically valid program

    WholeSuite runs every test in declared order in one interpreter, so
    globals written by one test are visible to later ones. SingleTest runs
    one test in a fresh interpreter.

    Raises:
        UnknownTest: the SingleTest id is not part of the suite
        TimeoutExceeded: the whole-suite time budget ran out
    """
    started = time.monotonic()

    if isinstance(mode, SingleTest):
        test = suite.get(mode.test_id)
        if test is None:
            raise UnknownTest(f"Test '{mode.test_id}' is not part of the suite")
        deadline = started + test_timeout if test_timeout else None
        record = _run_one(Interpreter(program, fuel=fuel), test, fuel, deadline)
        result = SuiteResult(outcomes={test.test_id: record.outcome},
                             wall_time=(time.monotonic() - started) * 1000.0)
        return TestRun(result=result, coverage={test.test_id: record})

    suite_deadline = started + suite_timeout if suite_timeout else None
    interpreter = Interpreter(program, fuel=fuel)
    outcomes: Dict[str, TestOutcome] = {}
    coverage: Dict[str, CoverageRecord] = {}
    for test in suite.tests:
        now = time.monotonic()
        if suite_deadline is not None and now >= suite_deadline:
            raise TimeoutExceeded(f"suite time budget of {suite_timeout:.1f}s exhausted before {test.test_id}")
        deadline = now + test_timeout if test_timeout else None
        if suite_deadline is not None:
            deadline = suite_deadline if deadline is None else min(deadline, suite_deadline)
        record = _run_one(interpreter, test, fuel, deadline)
        outcomes[test.test_id] = record.outcome
        coverage[test.test_id] = record
        logger.debug(f"{test.test_id}: {record.outcome.status.value}")
    if suite_deadline is not None and time.monotonic() > suite_deadline:
        raise TimeoutExceeded(f"suite time budget of {suite_timeout:.1f}s exhausted")
    return TestRun(result=SuiteResult(outcomes=outcomes, wall_time=(time.monotonic() - started) * 1000.0),
                   coverage=coverage)
