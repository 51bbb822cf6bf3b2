"""
Co-scheduled multi-round audits over a whole dataset
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Optional, Sequence

from ..dataset.model import DefectEntry
from ..errors import AuditError
from ..subject.adapter import SubjectAdapter
from ..subject.registry import get_adapter
from .detector import setup_test
from .results_log import AuditState, ResultsLog, audit_error_record, replay, round_to_record
from .verdicts import RoundConfig, RoundVerdict, WorkabilityVerdict

logger = logging.getLogger(__name__)

RoundCallback = Callable[[int, int, int], None]


@dataclass
class AuditReport:
    verdicts: Dict[str, WorkabilityVerdict] = field(default_factory=dict)
    audit_errors: Dict[str, str] = field(default_factory=dict)


class AuditRunner:
    """
    Runs every round of the setup-test for many defects

    All defects of one round run concurrently at the round's parallelism
    level. Once the round is complete its records are appended to the log in
    dataset order. Rounds already present in the log are skipped, so an
    interrupted audit can be resumed by running again on the same log.
    """

    def __init__(self, entries: Sequence[DefectEntry], cfg: RoundConfig, log: ResultsLog,
                 resolve_adapter: Callable[[str], SubjectAdapter] = get_adapter,
                 scratch_root: Optional[Path] = None, keep_workspaces: bool = False,
                 on_round: Optional[RoundCallback] = None):
        self.entries = list(entries)
        self.cfg = cfg
        self.log = log
        self.resolve_adapter = resolve_adapter
        self.scratch_root = scratch_root
        self.keep_workspaces = keep_workspaces
        self.on_round = on_round

    def _run_round(self, entry: DefectEntry, round_index: int, level: int):
        try:
            adapter = self.resolve_adapter(entry.adapter)
            return setup_test(entry, adapter, round_index=round_index, parallelism_level=level,
                              suite_timeout=self.cfg.suite_timeout, test_timeout=self.cfg.test_timeout,
                              scratch_root=self.scratch_root, keep_workspace=self.keep_workspaces)
        except AuditError as e:
            return e

    def run(self) -> AuditReport:
        self.log.flush()
        state: AuditState = replay(self.log.path)
        if state.rounds or state.audit_errors:
            logger.info(f"Resuming from {self.log.path}: {sum(map(len, state.rounds.values()))} round(s) "
                        f"and {len(state.audit_errors)} audit error(s) already recorded")

        for round_index in range(self.cfg.rounds):
            level = self.cfg.level_for(round_index)
            pending = [e for e in self.entries
                       if e.id not in state.audit_errors and round_index not in state.completed_rounds(e.id)]
            if not pending:
                continue
            if self.on_round:
                self.on_round(round_index, level, len(pending))
            logger.info(f"Round {round_index + 1}/{self.cfg.rounds}: {len(pending)} defect(s) at parallelism {level}")

            with ThreadPoolExecutor(max_workers=level, thread_name_prefix=f'round{round_index}') as pool:
                futures = [pool.submit(self._run_round, entry, round_index, level) for entry in pending]
                results = [f.result() for f in futures]

            for entry, result in zip(pending, results):
                if isinstance(result, RoundVerdict):
                    state.rounds[entry.id].append(result)
                    self.log.append(round_to_record(result))
                else:
                    logger.error(f"{entry.id}: audit error in round {round_index}: {result}")
                    state.audit_errors[entry.id] = str(result)
                    self.log.append(audit_error_record(entry.id, str(result), round_index))
            self.log.flush()

        selected = {e.id for e in self.entries}
        verdicts = {k: v for k, v in state.verdicts().items() if k in selected}
        errors = {k: v for k, v in state.audit_errors.items() if k in selected}
        return AuditReport(verdicts={e.id: verdicts[e.id] for e in self.entries if e.id in verdicts},
                           audit_errors=errors)
