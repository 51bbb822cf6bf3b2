"""
Adequacy verdicts: trivially plausible defects and under-specified test suites
"""

import logging
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Any, Dict, Iterable, Optional, Sequence, Tuple

from ..dataset.model import DefectEntry
from ..dataset.patch import is_deletion_only
from ..errors import ParseError
from ..subject.types import StatementLocation
from ..workability.results_log import ADEQUACY
from .sweep import DeletionTrial

logger = logging.getLogger(__name__)

SWEEP = 'sweep'
PUBLISHED = 'published'


def percent(part: int, whole: int) -> float:
    """part/whole as a percentage rounded half-up to one decimal; 0.0 when whole is 0"""
    if whole == 0:
        return 0.0
    value = (Decimal(part) * 100 / Decimal(whole)).quantize(Decimal('0.1'), rounding=ROUND_HALF_UP)
    return float(value)


@dataclass(frozen=True)
class AdequacyVerdict:
    """
    Outcome of the deletion sweep for one workable defect

    Verdicts loaded from published data carry no witnessing locations.
    """
    defect_id: str
    trivially_plausible: bool
    human_patch_deletion_only: bool
    plausible_locations: Tuple[StatementLocation, ...] = ()
    under_specified: bool = False
    sweep_truncated: bool = False
    source: str = SWEEP

    def __post_init__(self):
        if self.under_specified != (self.trivially_plausible and not self.human_patch_deletion_only):
            raise ValueError(f"{self.defect_id}: under_specified must equal "
                             f"trivially_plausible and not human_patch_deletion_only")
        if self.source == SWEEP and self.trivially_plausible != bool(self.plausible_locations):
            raise ValueError(f"{self.defect_id}: a plausible verdict needs a witnessing location")


def adequacy_verdict(entry: DefectEntry, trials: Sequence[DeletionTrial]) -> AdequacyVerdict:
    plausible = tuple(t.loc for t in trials if t.evaluated and t.suite_passed)
    deletion_only = is_deletion_only(entry.human_patch)
    return AdequacyVerdict(
        defect_id=entry.id,
        trivially_plausible=bool(plausible),
        human_patch_deletion_only=deletion_only,
        plausible_locations=plausible,
        under_specified=bool(plausible) and not deletion_only,
        sweep_truncated=any(not t.evaluated for t in trials),
    )


def adequacy_to_record(verdict: AdequacyVerdict) -> Dict[str, Any]:
    return {
        'kind': ADEQUACY,
        'defect_id': verdict.defect_id,
        'trivially_plausible': verdict.trivially_plausible,
        'human_patch_deletion_only': verdict.human_patch_deletion_only,
        'plausible_locations': [str(loc) for loc in verdict.plausible_locations],
        'under_specified': verdict.under_specified,
        'sweep_truncated': verdict.sweep_truncated,
        'source': verdict.source,
    }


def adequacy_from_record(record: Dict[str, Any]) -> AdequacyVerdict:
    try:
        return AdequacyVerdict(
            defect_id=record['defect_id'],
            trivially_plausible=bool(record['trivially_plausible']),
            human_patch_deletion_only=bool(record['human_patch_deletion_only']),
            plausible_locations=tuple(StatementLocation.parse(s) for s in record.get('plausible_locations', [])),
            under_specified=bool(record['under_specified']),
            sweep_truncated=bool(record.get('sweep_truncated', False)),
            source=record.get('source', SWEEP),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"Malformed adequacy record: {e}") from e


@dataclass
class AdequacySummary:
    workable: int = 0
    trivially_plausible: int = 0
    deletion_only: int = 0
    under_specified: int = 0
    truncated: int = 0
    trivially_plausible_rate: float = 0.0
    under_specified_rate: float = 0.0


def dataset_adequacy_summary(verdicts: Iterable[AdequacyVerdict], workable: Optional[int] = None) -> AdequacySummary:
    """
    Count trivially plausible defects, those whose human patch only deletes, and
    under-specified suites; rates are percentages of the workable population

    workable defaults to the number of verdicts. Truncated sweeps are counted
    separately and still contribute whatever they found.
    """
    verdicts = list(verdicts)
    population = len(verdicts) if workable is None else workable
    if population < len(verdicts):
        raise ValueError(f"{len(verdicts)} verdicts cannot come from {population} workable defects")
    plausible = [v for v in verdicts if v.trivially_plausible]
    under_specified = sum(1 for v in verdicts if v.under_specified)
    summary = AdequacySummary(
        workable=population,
        trivially_plausible=len(plausible),
        deletion_only=sum(1 for v in plausible if v.human_patch_deletion_only),
        under_specified=under_specified,
        truncated=sum(1 for v in verdicts if v.sweep_truncated),
        trivially_plausible_rate=percent(len(plausible), population),
        under_specified_rate=percent(under_specified, population),
    )
    if summary.truncated:
        logger.info(f"{summary.truncated} sweep(s) were truncated by their budget")
    return summary
