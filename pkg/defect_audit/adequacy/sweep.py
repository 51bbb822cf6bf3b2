"""
Single-statement deletion sweep over fault-localization candidates
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from ..dataset.model import DefectEntry
from ..errors import AdapterFailure, AuditError, SubjectCrash, TimeoutExceeded
from ..subject.adapter import SubjectAdapter
from ..subject.types import StatementLocation
from ..subject.variant import record_deletion
from ..subject.workspace import checked_out
from ..workability.results_log import TRIAL

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepBudget:
    """Wall-clock limit for a whole sweep and the time limit of each variant's suite run"""
    wall_clock_limit: float = 60.0
    per_variant_timeout: float = 60.0

    def __post_init__(self):
        if self.wall_clock_limit < 0:
            raise ValueError("the sweep budget must not be negative")
        if self.per_variant_timeout <= 0:
            raise ValueError("the per-variant timeout must be positive")


@dataclass(frozen=True)
class DeletionTrial:
    defect_id: str
    loc: StatementLocation
    compile_ok: bool = False
    suite_passed: bool = False
    evaluated: bool = True

    def __post_init__(self):
        if self.suite_passed and not self.compile_ok:
            raise ValueError("a variant that does not compile cannot pass its suite")
        if not self.evaluated and (self.compile_ok or self.suite_passed):
            raise ValueError("an unevaluated trial carries no results")


def trial_to_record(trial: DeletionTrial) -> Dict[str, Any]:
    return {
        'kind': TRIAL,
        'defect_id': trial.defect_id,
        'file': trial.loc.file,
        'statement_index': trial.loc.statement_index,
        'compile_ok': trial.compile_ok,
        'suite_passed': trial.suite_passed,
        'evaluated': trial.evaluated,
    }


def trial_from_record(record: Dict[str, Any]) -> DeletionTrial:
    return DeletionTrial(
        defect_id=record['defect_id'],
        loc=StatementLocation(record['file'], int(record['statement_index'])),
        compile_ok=bool(record['compile_ok']),
        suite_passed=bool(record['suite_passed']),
        evaluated=bool(record['evaluated']),
    )


def run_trial(entry: DefectEntry, adapter: SubjectAdapter, loc: StatementLocation, budget: SweepBudget,
              scratch_root: Optional[Path] = None, keep_workspace: bool = False) -> DeletionTrial:
    """
    Delete one statement in a fresh variant workspace, compile it and run the full suite

    Raises:
        AdapterFailure: the adapter broke
    """
    try:
        with checked_out(entry, f"del-{loc.file}-{loc.statement_index}", scratch_root, keep=keep_workspace) as ws:
            record_deletion(ws, loc)
            if not adapter.compile(ws).ok:
                return DeletionTrial(entry.id, loc, compile_ok=False)
            test_timeout = min(adapter.settings.test_timeout, budget.per_variant_timeout)
            try:
                result = adapter.run_suite(ws, suite_timeout=budget.per_variant_timeout, test_timeout=test_timeout)
            except (SubjectCrash, TimeoutExceeded) as e:
                logger.debug(f"{entry.id} without {loc}: {e}")
                return DeletionTrial(entry.id, loc, compile_ok=True, suite_passed=False)
            return DeletionTrial(entry.id, loc, compile_ok=True, suite_passed=result.all_passed)
    except AdapterFailure:
        raise
    except AuditError as e:
        raise AdapterFailure(f"{entry.id}: deletion trial at {loc} failed: {e}") from e


def deletion_sweep(entry: DefectEntry, adapter: SubjectAdapter, candidates: Sequence[StatementLocation],
                   budget: Optional[SweepBudget] = None, scratch_root: Optional[Path] = None,
                   workers: int = 1, keep_workspaces: bool = False) -> List[DeletionTrial]:
    """
    Try every candidate deletion in order until the budget expires

    Candidates not started before the deadline are returned unevaluated.
    Trials run on private checkouts, so the dataset tree is never modified.
    The result follows candidate order whatever the number of workers.
    """
    budget = budget or SweepBudget()
    deadline = time.monotonic() + budget.wall_clock_limit

    def attempt(loc: StatementLocation) -> DeletionTrial:
        if time.monotonic() >= deadline:
            return DeletionTrial(entry.id, loc, evaluated=False)
        return run_trial(entry, adapter, loc, budget, scratch_root, keep_workspaces)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers, thread_name_prefix=f'sweep-{entry.id}') as pool:
            trials = list(pool.map(attempt, candidates))
    else:
        trials = [attempt(loc) for loc in candidates]

    skipped = sum(1 for t in trials if not t.evaluated)
    if skipped:
        logger.warning(f"{entry.id}: sweep budget of {budget.wall_clock_limit:g}s expired, "
                       f"{skipped} of {len(trials)} deletion(s) not evaluated")
    logger.info(f"{entry.id}: {sum(t.suite_passed for t in trials)} plausible deletion(s) "
                f"among {len(trials) - skipped} evaluated")
    return trials
