"""
Exception hierarchy for the auditing harness
"""

from typing import Optional


class AuditError(Exception):
    """Base class for all harness errors"""


class ParseError(AuditError):
    """A manifest, patch or scenario file is malformed"""


class ValidationError(AuditError):
    """A dataset invariant does not hold"""

    def __init__(self, message: str, entry_id: Optional[str] = None, field: Optional[str] = None):
        self.entry_id = entry_id
        self.field = field
        prefix = ''
        if entry_id:
            prefix += f"{entry_id}: "
        if field:
            prefix += f"[{field}] "
        super().__init__(prefix + message)


class IoError(AuditError):
    """Copying or writing workspace files failed"""


class SubjectCrash(AuditError):
    """The test process of a subject terminated abnormally"""


class TimeoutExceeded(AuditError):
    """The whole-suite time budget was exhausted"""


class UnknownTest(AuditError):
    """A test id does not exist in the subject's suite"""


class UnknownAdapter(AuditError):
    """No adapter is registered under the requested id"""


class DuplicateAdapter(AuditError):
    """An adapter id is already registered"""


class ProtocolError(AuditError):
    """An external adapter sent a malformed message"""


class AdapterFailure(AuditError):
    """The adapter itself broke, as opposed to the subject failing"""


class NotDeletable(AuditError):
    """A statement location cannot be deleted"""


class DuplicateTest(AuditError):
    """A test appears more than once in coverage records"""


class NoFailingTest(AuditError):
    """Fault localization needs at least one failing test"""


class InconsistentSets(AuditError):
    """Fixed or excluded defects are not contained in the population"""
