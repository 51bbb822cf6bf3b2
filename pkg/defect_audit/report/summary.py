"""
Report summaries and their structured and human-readable renderings
"""

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

from tabulate import tabulate

from ..adequacy.fix_rate import FixRateRow
from ..adequacy.verdict import (
    AdequacySummary, AdequacyVerdict, adequacy_from_record, dataset_adequacy_summary, percent,
)
from ..errors import ParseError
from ..workability.results_log import ADEQUACY, AuditState, read_records, replay
from ..workability.verdicts import ExclusionSummary, Outcome, classify_outcomes
from .tables import REASON_LABELS, ExclusionRow, exclusion_table, format_exclusion_table

STRUCTURED = 'structured'
HUMAN_READABLE = 'human-readable'


@dataclass
class ReportSummary:
    dataset: str
    version: str = ''
    exclusion: ExclusionSummary = field(default_factory=ExclusionSummary)
    exclusion_table: List[ExclusionRow] = field(default_factory=list)
    adequacy: Optional[AdequacySummary] = None
    fix_rates: List[FixRateRow] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def check_partition(self) -> None:
        """Outcome counts plus audit errors must add up to the number of defects"""
        counted = sum(self.exclusion.counts.values()) + self.exclusion.audit_errors
        if counted != self.exclusion.total:
            raise ValueError(f"Counts add up to {counted}, not {self.exclusion.total}")


def build_summary(dataset: str, outcomes: Dict[str, Outcome], version: str = '', audit_errors: int = 0,
                  adequacy: Optional[Iterable[AdequacyVerdict]] = None, fix_rates: Iterable[FixRateRow] = (),
                  notes: Iterable[str] = ()) -> ReportSummary:
    exclusion = classify_outcomes(outcomes.values(), audit_errors)
    summary = ReportSummary(
        dataset=dataset,
        version=version,
        exclusion=exclusion,
        exclusion_table=exclusion_table(outcomes),
        adequacy=None if adequacy is None else dataset_adequacy_summary(adequacy, exclusion.workable),
        fix_rates=list(fix_rates),
        notes=list(notes),
    )
    summary.check_partition()
    return summary


def summary_from_log(path, dataset: Optional[str] = None) -> ReportSummary:
    """Summarize a results log: workability verdicts plus the latest adequacy verdict per defect"""
    state: AuditState = replay(path)
    outcomes = {k: v.outcome for k, v in state.verdicts().items()}
    adequacy: Dict[str, AdequacyVerdict] = {}
    for record in read_records(path):
        if record['kind'] == ADEQUACY:
            verdict = adequacy_from_record(record)
            adequacy[verdict.defect_id] = verdict
    workable = {k for k, v in outcomes.items() if v is Outcome.WORKABLE}
    return build_summary(
        dataset=dataset or Path(path).stem,
        outcomes=outcomes,
        audit_errors=len(state.audit_errors),
        adequacy=[v for k, v in adequacy.items() if k in workable] if adequacy else None,
    )


def emit(summary: ReportSummary, format: str = STRUCTURED) -> str:
    """Render a summary; the structured form is byte-identical for identical summaries"""
    if format == STRUCTURED:
        return json.dumps(asdict(summary), indent=2, sort_keys=True) + '\n'
    if format == HUMAN_READABLE:
        return render_text(summary)
    raise ValueError(f"Unsupported report format: {format}")


def parse_structured(text: str) -> ReportSummary:
    try:
        data: Dict[str, Any] = json.loads(text)
        adequacy = data.get('adequacy')
        return ReportSummary(
            dataset=data['dataset'],
            version=data.get('version', ''),
            exclusion=ExclusionSummary(**data['exclusion']),
            exclusion_table=[ExclusionRow(**row) for row in data.get('exclusion_table', [])],
            adequacy=AdequacySummary(**adequacy) if adequacy is not None else None,
            fix_rates=[FixRateRow(**row) for row in data.get('fix_rates', [])],
            notes=list(data.get('notes', [])),
        )
    except (json.JSONDecodeError, KeyError, TypeError) as e:
        raise ParseError(f"Not a structured report: {e}") from e


def render_text(summary: ReportSummary) -> str:
    exclusion = summary.exclusion
    lines = [f"# Workability report: {summary.dataset}" + (f" ({summary.version})" if summary.version else ''), '']
    lines.append(f"Defects:  {exclusion.total}")
    workable_rate = percent(exclusion.workable, exclusion.total) if exclusion.total else 100.0
    lines.append(f"Workable: {exclusion.workable} ({workable_rate} %)")
    lines.append(f"Excluded: {exclusion.excluded} ({percent(exclusion.excluded, exclusion.total)} %)")
    if exclusion.audit_errors:
        lines.append(f"Audit errors (not classified): {exclusion.audit_errors}")
    lines.append('')

    counts = [[REASON_LABELS[o], exclusion.counts[o]] for o in REASON_LABELS]
    counts.append(['Total excluded', exclusion.excluded])
    lines += ['## Exclusion reasons', '', tabulate(counts, headers=['Reason', 'Defects'], tablefmt='github'), '']

    if summary.exclusion_table:
        lines += ['## Non-workable defects', '', format_exclusion_table(summary.exclusion_table).rstrip('\n'), '']

    if summary.adequacy is not None:
        a = summary.adequacy
        rows = [
            ['Trivially plausible', a.trivially_plausible, f"{a.trivially_plausible_rate} %"],
            ['Human patch only deletes', a.deletion_only, ''],
            ['Under-specified test suite', a.under_specified, f"{a.under_specified_rate} %"],
        ]
        if a.truncated:
            rows.append(['Sweep truncated by budget', a.truncated, ''])
        lines += [f"## Test-suite adequacy (of {a.workable} workable)", '',
                  tabulate(rows, headers=['', 'Defects', 'Rate'], tablefmt='github'), '']

    if summary.fix_rates:
        rows = [[r.label, r.population, r.fixed, f"{r.rate} %"] for r in summary.fix_rates]
        lines += ['## Fix rates', '',
                  tabulate(rows, headers=['Population', 'Defects', 'Fixed', 'Fix rate'], tablefmt='github'), '']

    if summary.notes:
        lines += ['## Notes', ''] + [f"- {note}" for note in summary.notes] + ['']
    return '\n'.join(lines)
