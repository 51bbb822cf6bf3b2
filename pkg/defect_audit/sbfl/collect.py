"""
Coverage collection for a defect
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

from ..dataset.model import DefectEntry
from ..errors import AdapterFailure, AuditError
from ..subject import protocol
from ..subject.adapter import SubjectAdapter
from ..subject.types import CoverageRecord, StatementLocation
from ..subject.workspace import checked_out
from ..utils.cache import CoverageCache
from .matrix import CoverageMatrix, build_matrix
from .ranking import SuspiciousnessScore, rank

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoverageData:
    records: Tuple[CoverageRecord, ...]
    statements: Tuple[StatementLocation, ...]

    def matrix(self) -> CoverageMatrix:
        return build_matrix(self.records, self.statements)


def _to_payload(data: CoverageData) -> dict:
    return {
        'records': [protocol.coverage_to_dict(r) for r in data.records],
        'statements': [protocol.location_to_dict(s) for s in data.statements],
    }


def _from_payload(payload: dict) -> CoverageData:
    return CoverageData(
        records=tuple(protocol.coverage_from_dict(r) for r in payload['records']),
        statements=tuple(protocol.location_from_dict(s) for s in payload['statements']),
    )


def collect_coverage(entry: DefectEntry, adapter: SubjectAdapter, cache: Optional[CoverageCache] = None,
                     scratch_root: Optional[Path] = None, test_timeout: Optional[float] = None) -> CoverageData:
    """
    Run every test of the unmutated defect alone and record what it executes

    Raises:
        AdapterFailure: the defect does not build or the adapter broke
    """
    with checked_out(entry, 'coverage', scratch_root) as ws:
        adapter_id = entry.adapter
        if cache is not None:
            payload = cache.get(adapter_id, ws)
            if payload is not None:
                logger.debug(f"{entry.id}: coverage from cache")
                return _from_payload(payload)
        try:
            parsed = adapter.parse(ws)
            if not parsed.ok or not adapter.compile(ws).ok:
                raise AdapterFailure(f"{entry.id} does not build; cannot collect coverage")
            suite = adapter.run_suite(ws, test_timeout=test_timeout)
            records: List[CoverageRecord] = []
            for test_id in suite.outcomes:
                _, record = adapter.run_single(ws, test_id, test_timeout=test_timeout)
                records.append(record)
        except AdapterFailure:
            raise
        except AuditError as e:
            raise AdapterFailure(f"{entry.id}: coverage collection failed: {e}") from e
        data = CoverageData(records=tuple(records), statements=tuple(parsed.statements))
        if cache is not None:
            cache.set(adapter_id, ws, _to_payload(data))
        logger.info(f"{entry.id}: coverage of {len(records)} test(s) over {len(data.statements)} statement(s)")
        return data


def localize(entry: DefectEntry, adapter: SubjectAdapter, cache: Optional[CoverageCache] = None,
             scratch_root: Optional[Path] = None) -> List[SuspiciousnessScore]:
    return rank(collect_coverage(entry, adapter, cache, scratch_root).matrix())
