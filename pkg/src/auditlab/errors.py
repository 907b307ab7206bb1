class AuditError(Exception):
    """Base class for protocol, attack and harness failures."""


class EmptyFile(AuditError):
    pass


class InvalidTag(AuditError):
    pass


class BadParams(AuditError):
    pass


class IndexOutOfRange(AuditError):
    pass


class MissingKnowledge(AuditError):
    """The attacker lacks a value its forgery procedure needs."""


class NotFound(AuditError):
    """No candidate in the guess space satisfied the check."""


class DegenerateGamma(AuditError):
    """gamma = h(R) is zero, so it has no inverse; the audit round must be redone."""


class ConfigError(AuditError):
    pass


class CorruptTranscript(AuditError):
    pass


class MismatchOnReplay(AuditError):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report
