"""
Bundled published results: verdicts, adequacy counts and fix-rate sets

The directory holds:
  defects4j-2.0-summary/manifest.yaml   the audited population
  defects4j-2.0-verdicts.yaml           excluded ids per reason and report notes
  defects4j-2.0-adequacy.yaml           trivially plausible ids, split by patch kind
  jgenprog.yaml                         fix-rate population, removed defects and fixed ids
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Tuple, Union

import yaml

from ..adequacy.fix_rate import FixRateRow, fix_rate
from ..adequacy.verdict import PUBLISHED, AdequacyVerdict
from ..dataset.ids import expand_id_list, expand_id_ranges
from ..dataset.manifest import load_manifest
from ..errors import ParseError, ValidationError
from ..workability.verdicts import EXCLUSION_OUTCOMES, Outcome
from .summary import ReportSummary, build_summary

logger = logging.getLogger(__name__)

MANIFEST = 'defects4j-2.0-summary'
VERDICTS = 'defects4j-2.0-verdicts.yaml'
ADEQUACY = 'defects4j-2.0-adequacy.yaml'
FIX_RATES = 'jgenprog.yaml'


@dataclass
class FixRateData:
    tool: str
    universe: Tuple[str, ...]
    fixed: FrozenSet[str]
    not_in_dataset: FrozenSet[str]
    label: str = 'All defects'


@dataclass
class PublishedData:
    dataset: str
    version: str
    outcomes: Dict[str, Outcome]
    adequacy: List[AdequacyVerdict]
    fix_rates: FixRateData
    notes: List[str] = field(default_factory=list)

    def fix_rate_rows(self) -> List[FixRateRow]:
        """
        Fix rates over the tool's population, removing in turn defects missing from
        the audited dataset, non-workable defects and under-specified ones
        """
        universe = set(self.fix_rates.universe)
        non_workable = {k for k, v in self.outcomes.items() if v is not Outcome.WORKABLE} & universe
        under_specified = {v.defect_id for v in self.adequacy if v.under_specified} & universe
        return fix_rate(
            self.fix_rates.universe,
            self.fix_rates.fixed,
            ('Excluding defects not in the audited dataset', self.fix_rates.not_in_dataset),
            ('Excluding non-workable defects', non_workable),
            ('Excluding under-specified test suites', under_specified),
            label=self.fix_rates.label,
        )

    def summary(self) -> ReportSummary:
        return build_summary(
            dataset=self.dataset,
            version=self.version,
            outcomes=self.outcomes,
            adequacy=self.adequacy,
            fix_rates=self.fix_rate_rows(),
            notes=self.notes,
        )


def _read(path: Path) -> Dict[str, Any]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            document = yaml.safe_load(f)
    except OSError as e:
        raise ParseError(f"Cannot read {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ParseError(f"{path} is not valid YAML: {e}") from e
    if not isinstance(document, dict):
        raise ParseError(f"{path} must be a mapping")
    return document


def _ids(value: Union[str, List[str], None]) -> List[str]:
    if value is None:
        return []
    if isinstance(value, str):
        return expand_id_ranges(value)
    return expand_id_list(value)


def load_published_data(directory: Union[str, Path]) -> PublishedData:
    """
    Load and cross-check the bundled data

    Raises:
        ParseError: a file is missing or malformed
        ValidationError: the files disagree with each other
    """
    directory = Path(directory)
    dataset = load_manifest(directory / MANIFEST)
    population = set(dataset.ids)

    verdicts_doc = _read(directory / VERDICTS)
    outcomes = {defect_id: Outcome.WORKABLE for defect_id in dataset.ids}
    excluded = verdicts_doc.get('excluded') or {}
    for reason, ids in excluded.items():
        try:
            outcome = Outcome(reason)
        except ValueError as e:
            raise ParseError(f"{VERDICTS}: unknown exclusion reason {reason!r}") from e
        if outcome not in EXCLUSION_OUTCOMES:
            raise ParseError(f"{VERDICTS}: {reason} is not an exclusion reason")
        for defect_id in _ids(ids):
            if defect_id not in population:
                raise ValidationError(f"excluded defect is not in {dataset.name}", defect_id, 'excluded')
            if outcomes[defect_id] is not Outcome.WORKABLE:
                raise ValidationError("excluded for more than one reason", defect_id, 'excluded')
            outcomes[defect_id] = outcome

    adequacy_doc = _read(directory / ADEQUACY)
    plausible = adequacy_doc.get('trivially_plausible') or {}
    adequacy = []
    for deletion_only, key in ((True, 'deletion_only'), (False, 'other')):
        for defect_id in _ids(plausible.get(key)):
            if outcomes.get(defect_id) is not Outcome.WORKABLE:
                raise ValidationError("trivially plausible defect is not workable", defect_id, key)
            adequacy.append(AdequacyVerdict(defect_id=defect_id, trivially_plausible=True,
                                            human_patch_deletion_only=deletion_only,
                                            under_specified=not deletion_only, source=PUBLISHED))
    workable_ids = [k for k, v in outcomes.items() if v is Outcome.WORKABLE]
    listed = {v.defect_id for v in adequacy}
    if len(listed) != len(adequacy):
        raise ValidationError("a defect is listed twice", field='trivially_plausible')
    adequacy += [AdequacyVerdict(defect_id=k, trivially_plausible=False, human_patch_deletion_only=False,
                                 source=PUBLISHED) for k in workable_ids if k not in listed]

    fix_doc = _read(directory / FIX_RATES)
    fix_data = FixRateData(
        tool=str(fix_doc.get('tool', '')),
        universe=tuple(_ids(fix_doc.get('universe'))),
        fixed=frozenset(_ids(fix_doc.get('fixed'))),
        not_in_dataset=frozenset(_ids(fix_doc.get('not_in_dataset'))),
        label=str(fix_doc.get('label', 'All defects')),
    )
    stale = set(fix_data.universe) - fix_data.not_in_dataset - population
    if stale:
        raise ValidationError(f"{len(stale)} defect(s) of the fix-rate population are neither in "
                              f"{dataset.name} nor listed as missing, e.g. {sorted(stale)[0]}")

    notes = [str(n) for n in verdicts_doc.get('notes') or []] + [str(n) for n in adequacy_doc.get('notes') or []]
    notes += [str(n) for n in fix_doc.get('notes') or []]
    logger.info(f"Loaded published data for {dataset.name}: {len(outcomes)} verdicts, "
                f"{len(listed)} trivially plausible, {len(fix_data.universe)} fix-rate defects")
    return PublishedData(dataset=dataset.name, version=dataset.version, outcomes=outcomes, adequacy=adequacy,
                     fix_rates=fix_data, notes=notes)
