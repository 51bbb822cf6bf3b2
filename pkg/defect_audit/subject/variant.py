"""
Variant bookkeeping: which statements of the unmutated tree a workspace deletes
"""

from typing import List

import yaml

from .types import StatementLocation, Workspace

VARIANT_FILE = '.variant.yaml'


def record_deletion(ws: Workspace, loc: StatementLocation) -> None:
    """Mark a statement of the unmutated tree as deleted in this workspace's variant"""
    deleted = read_deletions(ws)
    if loc not in deleted:
        deleted.append(loc)
    path = ws.root / VARIANT_FILE
    with open(path, 'w', encoding='utf-8') as f:
        yaml.safe_dump({'deleted': [{'file': d.file, 'statement_index': d.statement_index} for d in deleted]}, f)


def read_deletions(ws: Workspace) -> List[StatementLocation]:
    path = ws.root / VARIANT_FILE
    if not path.exists():
        return []
    with open(path, 'r', encoding='utf-8') as f:
        document = yaml.safe_load(f) or {}
    return [StatementLocation(file=str(d['file']), statement_index=int(d['statement_index']))
            for d in document.get('deleted', [])]
