"""
Exclusion table: non-workable defects collapsed into id ranges
"""

from dataclasses import dataclass
from typing import Iterable, List, Mapping, Optional, Tuple, Union

from ..dataset.ids import RANGE_DASH, split_id
from ..errors import ParseError
from ..workability.verdicts import Outcome, WorkabilityVerdict

REASON_LABELS = {
    Outcome.COMPILATION_FAILS: 'Compilation failed',
    Outcome.INCONSISTENT_SUITE: 'Inconsistent test suite',
    Outcome.RESULT_DIFFERS: 'Result differs from dataset',
    Outcome.FLAKY: 'Flaky',
}

VerdictLike = Union[WorkabilityVerdict, Tuple[str, Outcome]]


@dataclass
class ExclusionRow:
    ids: str
    reason: str

    def __str__(self) -> str:
        return f"{self.ids}\t{self.reason}"


def _pairs(verdicts: Union[Mapping[str, Outcome], Iterable[VerdictLike]]) -> List[Tuple[str, Outcome]]:
    if isinstance(verdicts, Mapping):
        return [(k, Outcome(v)) for k, v in verdicts.items()]
    pairs = []
    for item in verdicts:
        if isinstance(item, WorkabilityVerdict):
            pairs.append((item.defect_id, item.outcome))
        else:
            defect_id, outcome = item
            pairs.append((defect_id, Outcome(outcome)))
    return pairs


def exclusion_table(verdicts: Union[Mapping[str, Outcome], Iterable[VerdictLike]]) -> List[ExclusionRow]:
    """
    Collapse non-workable defects into rows of numerically adjacent ids that
    share project and reason, ordered by project then number

    Ids that are not of the form Project/Number get a row of their own.
    """
    excluded = sorted(
        ((_row_key(defect_id), defect_id, outcome)
         for defect_id, outcome in _pairs(verdicts)
         if outcome is not Outcome.WORKABLE),
        key=lambda item: (item[0][0], -1 if item[0][1] is None else item[0][1], item[1]),
    )
    rows: List[ExclusionRow] = []
    run = None  # (project, start, end, outcome)
    for (project, number), defect_id, outcome in excluded:
        if number is None:
            if run:
                rows.append(_row(*run))
            run = None
            rows.append(ExclusionRow(ids=defect_id, reason=REASON_LABELS[outcome]))
            continue
        if run and run[0] == project and run[3] is outcome and number == run[2] + 1:
            run = (project, run[1], number, outcome)
            continue
        if run:
            rows.append(_row(*run))
        run = (project, number, number, outcome)
    if run:
        rows.append(_row(*run))
    return rows


def _row_key(defect_id: str) -> Tuple[str, Optional[int]]:
    try:
        return split_id(defect_id)
    except ParseError:
        return defect_id, None


def _row(project: str, start: int, end: int, outcome: Outcome) -> ExclusionRow:
    ids = f"{project}/{start}" if start == end else f"{project}/{start}{RANGE_DASH}{end}"
    return ExclusionRow(ids=ids, reason=REASON_LABELS[outcome])


def format_exclusion_table(rows: Iterable[ExclusionRow]) -> str:
    """One row per line: the id range, a tab, the reason"""
    return ''.join(f"{row}\n" for row in rows)
