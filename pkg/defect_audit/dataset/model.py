"""
Dataset domain types
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import FrozenSet, Optional, Tuple


@dataclass(frozen=True)
class Hunk:
    """One hunk of a human patch; context lines are not kept"""
    file: str
    removed: Tuple[str, ...] = ()
    added: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Patch:
    """The human-written fix of a defect"""
    hunks: Tuple[Hunk, ...]

    @property
    def files(self) -> Tuple[str, ...]:
        return tuple(dict.fromkeys(h.file for h in self.hunks))

    @property
    def added_line_count(self) -> int:
        return sum(len(h.added) for h in self.hunks)

    @property
    def removed_line_count(self) -> int:
        return sum(len(h.removed) for h in self.hunks)


@dataclass(frozen=True)
class DefectEntry:
    """One benchmark defect"""
    id: str
    project: str
    source_root: Path
    test_root: Path
    adapter: str
    expected_failing: FrozenSet[str]
    human_patch: Patch
    notes: Optional[str] = None


@dataclass(frozen=True)
class Dataset:
    """A named, versioned collection of defects"""
    name: str
    version: str
    entries: Tuple[DefectEntry, ...] = field(default_factory=tuple)

    def get(self, defect_id: str) -> Optional[DefectEntry]:
        for entry in self.entries:
            if entry.id == defect_id:
                return entry
        return None

    @property
    def ids(self) -> Tuple[str, ...]:
        return tuple(entry.id for entry in self.entries)

    def __len__(self) -> int:
        return len(self.entries)
