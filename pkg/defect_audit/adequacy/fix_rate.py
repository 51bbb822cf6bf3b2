"""
Fix-rate arithmetic over shrinking defect populations
"""

from dataclasses import dataclass
from typing import Iterable, List, Tuple

from ..errors import InconsistentSets
from .verdict import percent


@dataclass(frozen=True)
class FixRateRow:
    label: str
    population: int
    fixed: int
    rate: float


def fix_rate(total_defects: Iterable[str], fixed_defects: Iterable[str],
             *exclusions: Tuple[str, Iterable[str]], label: str = 'All defects') -> List[FixRateRow]:
    """
    One row for the full population, then one per exclusion applied cumulatively

    Each exclusion is a (label, defect ids) pair.

    Raises:
        InconsistentSets: fixed or excluded defects are not part of the population
    """
    remaining = set(total_defects)
    fixed = set(fixed_defects)
    stray = fixed - remaining
    if stray:
        raise InconsistentSets(f"Fixed defects outside the population: {', '.join(sorted(stray)[:5])}")

    rows = [FixRateRow(label, len(remaining), len(fixed), percent(len(fixed), len(remaining)))]
    population = frozenset(remaining)
    for exclusion_label, excluded in exclusions:
        excluded = set(excluded)
        stray = excluded - population
        if stray:
            raise InconsistentSets(f"'{exclusion_label}' excludes defects outside the population: "
                                   f"{', '.join(sorted(stray)[:5])}")
        remaining -= excluded
        kept_fixed = len(fixed & remaining)
        rows.append(FixRateRow(exclusion_label, len(remaining), kept_fixed, percent(kept_fixed, len(remaining))))
    return rows
