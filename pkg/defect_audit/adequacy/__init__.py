"""
Test-suite adequacy: deletion sweeps, plausibility verdicts and fix rates
"""

from .experiment import AdequacyReport, AdequacyRunner, completed_adequacy, workable_entries
from .fix_rate import FixRateRow, fix_rate
from .sweep import DeletionTrial, SweepBudget, deletion_sweep, run_trial
from .verdict import AdequacySummary, AdequacyVerdict, adequacy_verdict, dataset_adequacy_summary, percent

__all__ = [
    'AdequacyReport', 'AdequacyRunner', 'AdequacySummary', 'AdequacyVerdict', 'DeletionTrial', 'FixRateRow',
    'SweepBudget', 'adequacy_verdict', 'completed_adequacy', 'dataset_adequacy_summary', 'deletion_sweep',
    'fix_rate', 'percent', 'run_trial', 'workable_entries',
]
