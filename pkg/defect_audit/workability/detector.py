"""
The setup-test: decide whether one defect is workable in one round
"""

import logging
from pathlib import Path
from typing import List, Optional

from ..dataset.model import DefectEntry
from ..errors import AdapterFailure, AuditError, SubjectCrash, TimeoutExceeded
from ..subject.adapter import SubjectAdapter
from ..subject.types import TestStatus
from ..subject.workspace import checkout, release
from .verdicts import Disagreement, Outcome, RoundConfig, RoundVerdict, WorkabilityVerdict, combine_rounds

logger = logging.getLogger(__name__)


def setup_test(entry: DefectEntry, adapter: SubjectAdapter, round_index: int = 0, parallelism_level: int = 1,
               suite_timeout: Optional[float] = None, test_timeout: Optional[float] = None,
               scratch_root: Optional[Path] = None, keep_workspace: bool = False) -> RoundVerdict:
    """
    Run one round of the workability check on a private checkout

    Phases run in order and the first failing phase decides the verdict:
    parse and compile, the whole-suite run, each test alone, then the
    comparison of the failing set with the expected one.

    Raises:
        AdapterFailure: the adapter broke, as opposed to the subject failing
    """
    verdict = dict(defect_id=entry.id, round_index=round_index, parallelism_level=parallelism_level,
                   expected_failing=entry.expected_failing)
    try:
        ws = checkout(entry, label=f"round{round_index}", scratch_root=scratch_root)
    except AuditError as e:
        raise AdapterFailure(f"{entry.id}: {e}") from e

    try:
        parsed = adapter.parse(ws)
        if not parsed.ok:
            return RoundVerdict(outcome=Outcome.COMPILATION_FAILS,
                                diagnostics=tuple(str(d) for d in parsed.diagnostics), **verdict)
        compiled = adapter.compile(ws)
        if not compiled.ok:
            return RoundVerdict(outcome=Outcome.COMPILATION_FAILS,
                                diagnostics=tuple(str(d) for d in compiled.diagnostics), **verdict)

        try:
            suite = adapter.run_suite(ws, suite_timeout=suite_timeout, test_timeout=test_timeout)
        except (SubjectCrash, TimeoutExceeded) as e:
            logger.info(f"{entry.id} round {round_index}: suite run aborted: {e}")
            return RoundVerdict(outcome=Outcome.RESULT_DIFFERS, crash=f"{type(e).__name__}: {e}", **verdict)

        disagreements: List[Disagreement] = []
        for test_id, outcome in suite.outcomes.items():
            try:
                single, _ = adapter.run_single(ws, test_id, test_timeout=test_timeout)
                single_status = single.status
            except SubjectCrash:
                single_status = TestStatus.ERROR
            if single_status is not outcome.status:
                disagreements.append(Disagreement(test_id, outcome.status, single_status))

        if disagreements:
            return RoundVerdict(outcome=Outcome.INCONSISTENT_SUITE, observed_failing=suite.failing,
                                disagreements=tuple(disagreements), **verdict)
        if suite.failing != entry.expected_failing:
            return RoundVerdict(outcome=Outcome.RESULT_DIFFERS, observed_failing=suite.failing, **verdict)
        return RoundVerdict(outcome=Outcome.WORKABLE, observed_failing=suite.failing, **verdict)
    except AdapterFailure:
        raise
    except Exception as e:
        raise AdapterFailure(f"{entry.id}: adapter '{entry.adapter}' failed: {type(e).__name__}: {e}") from e
    finally:
        release(ws, keep=keep_workspace)


def audit(entry: DefectEntry, adapter: SubjectAdapter, cfg: Optional[RoundConfig] = None,
          scratch_root: Optional[Path] = None, keep_workspaces: bool = False) -> WorkabilityVerdict:
    """
    Run every round of the setup-test for one defect, one round after another

    Rounds of several defects are co-scheduled by AuditRunner; this runs a
    single defect with each round tagged by its scheduled level.
    """
    cfg = cfg or RoundConfig()
    rounds = [
        setup_test(entry, adapter, round_index=i, parallelism_level=cfg.level_for(i),
                   suite_timeout=cfg.suite_timeout, test_timeout=cfg.test_timeout,
                   scratch_root=scratch_root, keep_workspace=keep_workspaces)
        for i in range(cfg.rounds)
    ]
    verdict = combine_rounds(entry.id, rounds)
    logger.info(f"{entry.id}: {verdict.outcome.value} over {cfg.rounds} round(s)")
    return verdict
