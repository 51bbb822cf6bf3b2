"""
Adapter registry resolving DefectEntry.adapter ids
"""

import logging
import threading
from typing import Dict, List

from ..errors import DuplicateAdapter, UnknownAdapter
from .adapter import SubjectAdapter

logger = logging.getLogger(__name__)

_adapters: Dict[str, SubjectAdapter] = {}
_lock = threading.Lock()


def register_adapter(adapter_id: str, adapter: SubjectAdapter, replace: bool = False) -> None:
    """Register an adapter under an id that is not yet in use"""
    with _lock:
        if adapter_id in _adapters and not replace:
            raise DuplicateAdapter(f"Adapter '{adapter_id}' is already registered")
        _adapters[adapter_id] = adapter
    logger.debug(f"Registered adapter '{adapter_id}' ({type(adapter).__name__})")


def unregister_adapter(adapter_id: str) -> None:
    with _lock:
        adapter = _adapters.pop(adapter_id, None)
    if adapter is not None:
        adapter.close()


def get_adapter(adapter_id: str) -> SubjectAdapter:
    with _lock:
        adapter = _adapters.get(adapter_id)
    if adapter is None:
        raise UnknownAdapter(f"No adapter registered under '{adapter_id}'")
    return adapter


def registered_adapters() -> List[str]:
    with _lock:
        return sorted(_adapters)


def clear_adapters() -> None:
    """Unregister and close every adapter"""
    with _lock:
        adapters = list(_adapters.values())
        _adapters.clear()
    for adapter in adapters:
        adapter.close()


def register_default_adapters(settings=None, isolation: str = 'inprocess',
                              external_adapters: Dict[str, str] = None, replace: bool = True) -> None:
    """
    Register the built-in adapters plus any configured external ones

    With isolation "subprocess" the "minilang" id is served by the minilang
    driver process over the external-adapter protocol.
    """
    from ..minilang.adapter import MiniLangAdapter
    from ..scripted.adapter import ScriptedAdapter
    from .external import ExternalAdapter, minilang_driver_command

    if isolation == 'subprocess':
        register_adapter('minilang', ExternalAdapter(minilang_driver_command(settings), settings), replace=replace)
    else:
        register_adapter('minilang', MiniLangAdapter(settings), replace=replace)
    register_adapter('scripted', ScriptedAdapter(settings), replace=replace)

    for adapter_id, command in (external_adapters or {}).items():
        register_adapter(adapter_id, ExternalAdapter.from_command_line(command, settings), replace=replace)
