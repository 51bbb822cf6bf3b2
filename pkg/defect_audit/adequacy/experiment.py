"""
Adequacy experiment over the workable defects of a dataset
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from ..dataset.model import DefectEntry
from ..errors import AuditError, NoFailingTest
from ..sbfl.collect import collect_coverage
from ..sbfl.ranking import DEFAULT_CAP, DEFAULT_THRESHOLD, rank, select_candidates
from ..subject.adapter import SubjectAdapter
from ..subject.registry import get_adapter
from ..utils.cache import CoverageCache
from ..workability.results_log import ADEQUACY, ADEQUACY_PHASE, ResultsLog, audit_error_record, read_records
from .sweep import SweepBudget, deletion_sweep, trial_to_record
from .verdict import AdequacyVerdict, adequacy_from_record, adequacy_to_record, adequacy_verdict

logger = logging.getLogger(__name__)


@dataclass
class AdequacyReport:
    verdicts: Dict[str, AdequacyVerdict] = field(default_factory=dict)
    audit_errors: Dict[str, str] = field(default_factory=dict)
    trials: int = 0
    unevaluated: int = 0

    @property
    def all_unevaluated(self) -> bool:
        return self.trials > 0 and self.unevaluated == self.trials


def completed_adequacy(path) -> Dict[str, AdequacyVerdict]:
    """Latest adequacy verdict per defect recorded in a results log"""
    done: Dict[str, AdequacyVerdict] = {}
    for record in read_records(path):
        if record['kind'] == ADEQUACY:
            verdict = adequacy_from_record(record)
            done[verdict.defect_id] = verdict
    return done


class AdequacyRunner:
    """
    Localizes, sweeps and judges each entry in turn, appending trial and
    verdict records to the log. Entries with a recorded verdict are skipped.
    """

    def __init__(self, entries: Sequence[DefectEntry], log: ResultsLog,
                 resolve_adapter: Callable[[str], SubjectAdapter] = get_adapter,
                 threshold: float = DEFAULT_THRESHOLD, cap: int = DEFAULT_CAP,
                 budget: Optional[SweepBudget] = None, workers: int = 1,
                 cache: Optional[CoverageCache] = None, scratch_root: Optional[Path] = None,
                 keep_workspaces: bool = False):
        self.entries = list(entries)
        self.log = log
        self.resolve_adapter = resolve_adapter
        self.threshold = threshold
        self.cap = cap
        self.budget = budget or SweepBudget()
        self.workers = workers
        self.cache = cache
        self.scratch_root = scratch_root
        self.keep_workspaces = keep_workspaces

    def judge(self, entry: DefectEntry) -> tuple:
        """Return (verdict, trials) for one defect"""
        adapter = self.resolve_adapter(entry.adapter)
        coverage = collect_coverage(entry, adapter, self.cache, self.scratch_root,
                                    test_timeout=adapter.settings.test_timeout)
        try:
            ranked = rank(coverage.matrix())
        except NoFailingTest:
            logger.warning(f"{entry.id}: no failing test, nothing to localize")
            ranked = []
        candidates = select_candidates(ranked, self.threshold, self.cap)
        logger.info(f"{entry.id}: {len(candidates)} deletion candidate(s) of {len(ranked)} ranked statement(s)")
        trials = deletion_sweep(entry, adapter, candidates, self.budget, self.scratch_root,
                                workers=self.workers, keep_workspaces=self.keep_workspaces)
        return adequacy_verdict(entry, trials), trials

    def run(self) -> AdequacyReport:
        self.log.flush()
        done = completed_adequacy(self.log.path)
        report = AdequacyReport()
        for entry in self.entries:
            if entry.id in done:
                logger.debug(f"{entry.id}: adequacy verdict already recorded")
                report.verdicts[entry.id] = done[entry.id]
                continue
            try:
                verdict, trials = self.judge(entry)
            except AuditError as e:
                logger.error(f"{entry.id}: adequacy audit error: {e}")
                report.audit_errors[entry.id] = str(e)
                self.log.append(audit_error_record(entry.id, str(e), phase=ADEQUACY_PHASE))
                continue
            for trial in trials:
                self.log.append(trial_to_record(trial))
            self.log.append(adequacy_to_record(verdict))
            report.verdicts[entry.id] = verdict
            report.trials += len(trials)
            report.unevaluated += sum(1 for t in trials if not t.evaluated)
        self.log.flush()
        return report


def workable_entries(entries: Sequence[DefectEntry], workable_ids) -> List[DefectEntry]:
    workable_ids = set(workable_ids)
    return [e for e in entries if e.id in workable_ids]
