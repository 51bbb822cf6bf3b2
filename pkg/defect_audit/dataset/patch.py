"""
Unified-diff parsing and the deletion-only classification of human patches
"""

import logging
import re
from typing import List, Optional

from ..errors import ParseError
from .model import Hunk, Patch

logger = logging.getLogger(__name__)

_HUNK_HEADER = re.compile(r'^@@ -\d+(?:,(?P<old>\d+))? \+\d+(?:,(?P<new>\d+))? @@')


def _strip_prefix(path: str) -> str:
    path = path.split('\t', 1)[0].strip()
    if path.startswith(('a/', 'b/')):
        return path[2:]
    return path


def parse_unified_diff(text: str) -> Patch:
    """
    Parse a unified diff into hunks

    Only the removed and added lines of each hunk are kept. Lines are read as
    hunk body until the old and new line counts of the hunk header are used up,
    so a removed "-- x" followed by an added "++ y" stays inside its hunk.
    """
    hunks: List[Hunk] = []
    current_file: Optional[str] = None
    removed: List[str] = []
    added: List[str] = []
    in_hunk = False
    old_left = new_left = 0
    old_file: Optional[str] = None

    def close_hunk():
        if in_hunk:
            hunks.append(Hunk(file=current_file, removed=tuple(removed), added=tuple(added)))

    lines = text.splitlines()
    for number, line in enumerate(lines, 1):
        if in_hunk and (old_left > 0 or new_left > 0):
            if line.startswith('-'):
                removed.append(line[1:])
                old_left -= 1
            elif line.startswith('+'):
                added.append(line[1:])
                new_left -= 1
            elif line.startswith(' ') or line == '':
                old_left -= 1
                new_left -= 1
            elif not line.startswith('\\'):
                raise ParseError(f"line {number}: unexpected diff line {line!r}")
            continue
        next_line = lines[number] if number < len(lines) else ''
        if line.startswith('--- ') and next_line.startswith('+++ '):
            close_hunk()
            in_hunk = False
            old_file = _strip_prefix(line[4:])
            if old_file == '/dev/null':
                raise ParseError(f"line {number}: file creation is not supported in human patches")
            continue
        if old_file is not None:
            new_file = _strip_prefix(line[4:])
            # a removed file is named by its old path
            current_file = old_file if new_file == '/dev/null' else new_file
            old_file = None
            continue
        if line.startswith('@@'):
            header = _HUNK_HEADER.match(line)
            if not header:
                raise ParseError(f"line {number}: malformed hunk header {line!r}")
            if current_file is None:
                raise ParseError(f"line {number}: hunk before any file header")
            close_hunk()
            in_hunk = True
            removed, added = [], []
            old_left = int(header.group('old') or 1)
            new_left = int(header.group('new') or 1)
            continue
        if not in_hunk:
            # preamble such as "diff --git" or "index" lines
            continue
        if line.startswith('-'):
            removed.append(line[1:])
        elif line.startswith('+'):
            added.append(line[1:])
        elif line.startswith(' ') or line == '' or line.startswith('\\'):
            continue
        else:
            raise ParseError(f"line {number}: unexpected diff line {line!r}")
    close_hunk()

    logger.debug(f"Parsed patch with {len(hunks)} hunks")
    return Patch(hunks=tuple(hunks))


def is_deletion_only(patch: Patch) -> bool:
    """True iff no hunk of the patch adds a line"""
    return all(len(hunk.added) == 0 for hunk in patch.hunks)
