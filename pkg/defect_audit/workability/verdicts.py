"""
Workability verdict types and their aggregation
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Optional, Sequence, Tuple

from ..subject.types import TestStatus

logger = logging.getLogger(__name__)


class Outcome(str, Enum):
    WORKABLE = 'Workable'
    COMPILATION_FAILS = 'CompilationFails'
    INCONSISTENT_SUITE = 'InconsistentSuite'
    RESULT_DIFFERS = 'ResultDiffers'
    FLAKY = 'Flaky'


ROUND_OUTCOMES = (Outcome.WORKABLE, Outcome.COMPILATION_FAILS, Outcome.INCONSISTENT_SUITE, Outcome.RESULT_DIFFERS)
EXCLUSION_OUTCOMES = (Outcome.COMPILATION_FAILS, Outcome.INCONSISTENT_SUITE, Outcome.RESULT_DIFFERS, Outcome.FLAKY)


@dataclass(frozen=True)
class Disagreement:
    """A test whose status in the whole-suite run differs from its isolated run"""
    test_id: str
    suite_status: TestStatus
    single_status: TestStatus


@dataclass(frozen=True)
class RoundVerdict:
    defect_id: str
    outcome: Outcome
    observed_failing: FrozenSet[str] = frozenset()
    disagreements: Tuple[Disagreement, ...] = ()
    diagnostics: Tuple[str, ...] = ()
    crash: Optional[str] = None
    round_index: int = 0
    parallelism_level: int = 1
    expected_failing: FrozenSet[str] = frozenset()

    def __post_init__(self):
        if self.outcome not in ROUND_OUTCOMES:
            raise ValueError(f"{self.outcome.value} is not a single-round outcome")
        if self.outcome is Outcome.INCONSISTENT_SUITE and not self.disagreements:
            raise ValueError("an inconsistent suite verdict needs at least one disagreement")
        if self.outcome is Outcome.RESULT_DIFFERS and self.crash is None \
                and self.observed_failing == self.expected_failing:
            raise ValueError("a result-differs verdict needs a failing set different from the expected one")

    @property
    def stability_key(self) -> Tuple[Outcome, FrozenSet[str]]:
        """What must agree across rounds for a defect not to be flaky"""
        return self.outcome, self.observed_failing


@dataclass(frozen=True)
class WorkabilityVerdict:
    defect_id: str
    outcome: Outcome
    rounds: Tuple[RoundVerdict, ...] = ()

    @property
    def workable(self) -> bool:
        return self.outcome is Outcome.WORKABLE


@dataclass(frozen=True)
class RoundConfig:
    rounds: int = 20
    parallelism_schedule: Tuple[int, ...] = (1, 5, 10, 15, 20, 25)
    suite_timeout: float = 60.0
    test_timeout: float = 10.0

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError("rounds must be at least 1")
        if not self.parallelism_schedule or any(level < 1 for level in self.parallelism_schedule):
            raise ValueError("every parallelism level must be at least 1")

    def level_for(self, round_index: int) -> int:
        return self.parallelism_schedule[round_index % len(self.parallelism_schedule)]


def combine_rounds(defect_id: str, rounds: Sequence[RoundVerdict]) -> WorkabilityVerdict:
    """Flaky iff two rounds differ in outcome or observed failing set; otherwise the common outcome"""
    if not rounds:
        raise ValueError(f"No rounds recorded for {defect_id}")
    ordered = tuple(sorted(rounds, key=lambda r: r.round_index))
    if len({r.stability_key for r in ordered}) > 1:
        return WorkabilityVerdict(defect_id=defect_id, outcome=Outcome.FLAKY, rounds=ordered)
    return WorkabilityVerdict(defect_id=defect_id, outcome=ordered[0].outcome, rounds=ordered)


@dataclass
class ExclusionSummary:
    """Outcome counts over a dataset; audit errors are counted apart from the five outcomes"""
    total: int = 0
    workable: int = 0
    compilation_fails: int = 0
    inconsistent_suite: int = 0
    result_differs: int = 0
    flaky: int = 0
    audit_errors: int = 0
    workable_ratio: float = 1.0

    @property
    def excluded(self) -> int:
        return self.compilation_fails + self.inconsistent_suite + self.result_differs + self.flaky

    @property
    def counts(self) -> Dict[Outcome, int]:
        return {
            Outcome.WORKABLE: self.workable,
            Outcome.COMPILATION_FAILS: self.compilation_fails,
            Outcome.INCONSISTENT_SUITE: self.inconsistent_suite,
            Outcome.RESULT_DIFFERS: self.result_differs,
            Outcome.FLAKY: self.flaky,
        }


_COUNT_FIELDS = {
    Outcome.WORKABLE: 'workable',
    Outcome.COMPILATION_FAILS: 'compilation_fails',
    Outcome.INCONSISTENT_SUITE: 'inconsistent_suite',
    Outcome.RESULT_DIFFERS: 'result_differs',
    Outcome.FLAKY: 'flaky',
}


def classify_outcomes(outcomes: Iterable[Outcome], audit_errors: int = 0) -> ExclusionSummary:
    summary = ExclusionSummary(audit_errors=audit_errors)
    for outcome in outcomes:
        name = _COUNT_FIELDS[Outcome(outcome)]
        setattr(summary, name, getattr(summary, name) + 1)
    summary.total = summary.workable + summary.excluded + audit_errors
    if summary.total == 0:
        logger.warning("No verdicts to classify; reporting a workable ratio of 1.0")
        summary.workable_ratio = 1.0
    else:
        summary.workable_ratio = summary.workable / summary.total
    return summary


def classify_dataset(verdicts: Iterable[WorkabilityVerdict], audit_errors: int = 0) -> ExclusionSummary:
    """Count verdicts per outcome; the ratio is workable over all audited defects"""
    return classify_outcomes((v.outcome for v in verdicts), audit_errors)
