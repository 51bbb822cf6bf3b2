"""
Workspace checkout and isolation

Each workspace owns a private copy of the defect's source and test trees and a
scratch directory for everything the subject writes during execution.
"""

import logging
import re
import shutil
import tempfile
import threading
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional, Set

from ..dataset.model import DefectEntry
from ..errors import IoError
from .types import Workspace

logger = logging.getLogger(__name__)

DEFAULT_SCRATCH_ROOT = Path(tempfile.gettempdir()) / 'defect-audit'

_live: Set[Path] = set()
_live_lock = threading.Lock()


def _slug(text: str) -> str:
    return re.sub(r'[^A-Za-z0-9_.-]+', '_', text).strip('_') or 'ws'


def checkout(entry: DefectEntry, label: str, scratch_root: Optional[Path] = None) -> Workspace:
    """
    Create a private copy of the entry's source and test trees

    The original dataset files are never touched by later operations on the
    returned workspace.

    Raises:
        IoError: the trees could not be copied
    """
    scratch_root = Path(scratch_root) if scratch_root else DEFAULT_SCRATCH_ROOT
    try:
        scratch_root.mkdir(parents=True, exist_ok=True)
        base = Path(tempfile.mkdtemp(prefix=f"{_slug(entry.id)}-{_slug(label)}-", dir=scratch_root))
    except OSError as e:
        raise IoError(f"Failed to check out {entry.id}: {e}") from e
    try:
        root = base / 'tree'
        shutil.copytree(entry.source_root, root / 'src')
        shutil.copytree(entry.test_root, root / 'test')
        temp_dir = base / 'tmp'
        temp_dir.mkdir()
    except OSError as e:
        shutil.rmtree(base, ignore_errors=True)
        raise IoError(f"Failed to check out {entry.id}: {e}") from e

    ws = Workspace(defect_id=entry.id, root=root, temp_dir=temp_dir, label=label)
    with _live_lock:
        if ws.root in _live or ws.temp_dir in _live:
            raise IoError(f"Workspace path collision for {entry.id} ({label})")
        _live.update((ws.root, ws.temp_dir))
    logger.debug(f"Checked out {entry.id} [{label}] into {base}")
    return ws


def release(ws: Workspace, keep: bool = False) -> None:
    """Forget a workspace and delete its files unless asked to keep them"""
    with _live_lock:
        _live.discard(ws.root)
        _live.discard(ws.temp_dir)
    if keep:
        return
    shutil.rmtree(ws.root.parent, ignore_errors=True)


@contextmanager
def checked_out(entry: DefectEntry, label: str, scratch_root: Optional[Path] = None,
                keep: bool = False) -> Iterator[Workspace]:
    ws = checkout(entry, label, scratch_root)
    try:
        yield ws
    finally:
        release(ws, keep=keep)


def live_workspaces() -> int:
    with _live_lock:
        return len(_live) // 2
