"""
Helpers for "Project/Number" defect ids and id ranges
"""

import re
from typing import Iterable, List, Tuple

from ..errors import ParseError

_ID_PATTERN = re.compile(r'^(?P<project>[A-Za-z][A-Za-z0-9_.-]*)/(?P<number>\d+)$')
_RANGE_PATTERN = re.compile(r'^(?P<start>\d+)\s*(?:[-–]\s*(?P<end>\d+))?$')

RANGE_DASH = '–'


def split_id(defect_id: str) -> Tuple[str, int]:
    """Split "Chart/5" into ("Chart", 5)"""
    match = _ID_PATTERN.match(defect_id.strip())
    if not match:
        raise ParseError(f"Malformed defect id: {defect_id!r}")
    return match.group('project'), int(match.group('number'))


def defect_sort_key(defect_id: str) -> Tuple[str, int]:
    """Order by project name, then numerically by defect number"""
    try:
        return split_id(defect_id)
    except ParseError:
        return defect_id, 0


def expand_id_ranges(spec: str) -> List[str]:
    """
    Expand a compact id specification into individual ids

    "Cli/1-3,5" -> ["Cli/1", "Cli/2", "Cli/3", "Cli/5"]
    Several projects may be joined with ";": "Chart/1-2; Lang/4"
    """
    ids: List[str] = []
    for group in spec.split(';'):
        group = group.strip()
        if not group:
            continue
        if '/' not in group:
            raise ParseError(f"Id range is missing a project: {group!r}")
        project, numbers = group.split('/', 1)
        project = project.strip()
        for part in numbers.split(','):
            match = _RANGE_PATTERN.match(part.strip())
            if not match:
                raise ParseError(f"Malformed id range {part!r} in {group!r}")
            start = int(match.group('start'))
            end = int(match.group('end') or start)
            if end < start:
                raise ParseError(f"Descending id range {part!r} in {group!r}")
            ids.extend(f"{project}/{n}" for n in range(start, end + 1))
    return ids


def expand_id_list(items: Iterable[str]) -> List[str]:
    """Expand every element of a list of id specifications"""
    expanded: List[str] = []
    for item in items:
        expanded.extend(expand_id_ranges(str(item)))
    return expanded
