"""
Runtime and syntax conditions raised inside minilang

None of these leave the adapter: they become diagnostics or test statuses.
"""

from typing import List, Optional, Sequence

from ..subject.types import Diagnostic, StatementLocation


class MiniError(Exception):
    """Base class for minilang conditions"""


class MiniSyntaxError(MiniError):
    def __init__(self, diagnostics: Sequence[Diagnostic]):
        self.diagnostics = tuple(diagnostics)
        super().__init__('; '.join(str(d) for d in self.diagnostics))


class MiniRuntimeError(MiniError):
    """An error raised while a program runs; carries the statements executed so far"""

    def __init__(self, message: str, line: int = 0, file: Optional[str] = None):
        self.line = line
        self.file = file
        self.trace: List[StatementLocation] = []
        where = f"{file}:{line}: " if file and line else ''
        super().__init__(where + message)


class AssertionFailed(MiniRuntimeError):
    pass


class FuelExhausted(MiniRuntimeError):
    """The step budget or the wall-clock deadline ran out"""
