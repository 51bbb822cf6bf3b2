"""
Workability auditing: the setup-test, multi-round flakiness detection and
dataset classification
"""

from .detector import audit, setup_test
from .results_log import ResultsLog, replay
from .runner import AuditReport, AuditRunner
from .verdicts import (
    Disagreement, ExclusionSummary, Outcome, RoundConfig, RoundVerdict, WorkabilityVerdict, classify_dataset,
    combine_rounds,
)

__all__ = [
    'AuditReport', 'AuditRunner', 'Disagreement', 'ExclusionSummary', 'Outcome', 'ResultsLog', 'RoundConfig',
    'RoundVerdict', 'WorkabilityVerdict', 'audit', 'classify_dataset', 'combine_rounds', 'replay', 'setup_test',
]
