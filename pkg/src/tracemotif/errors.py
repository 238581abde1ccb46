"""Exception types shared across the toolkit."""


class TraceMotifError(Exception):
    """Base class for all toolkit errors."""


class TraceValidationError(TraceMotifError):
    """A trace candidate violates a structural invariant.

    Carries the offending trace id when known.
    """

    def __init__(self, message: str, trace_id: str | None = None):
        self.trace_id = trace_id
        if trace_id is not None:
            message = f"trace {trace_id!r}: {message}"
        super().__init__(message)


class DuplicatePointId(TraceValidationError):
    pass


class DanglingEdgeEndpoint(TraceValidationError):
    pass


class DuplicateEdge(TraceValidationError):
    pass


class CycleDetected(TraceValidationError):
    pass


class NegativeLatency(TraceValidationError):
    pass


class DisconnectedTrace(TraceValidationError):
    pass


class MalformedDocument(TraceMotifError):
    """Input file is not a well-formed trace document."""


class MissingField(MalformedDocument):
    def __init__(self, name: str, context: str = ""):
        self.name = name
        suffix = f" ({context})" if context else ""
        super().__init__(f"missing field {name!r}{suffix}")


class IoFailure(TraceMotifError):
    pass


class InvalidSpec(TraceMotifError):
    """Synthetic generation spec violates its invariants."""


class InvalidConfig(TraceMotifError):
    """Mining configuration violates its invariants."""


class EmptyStore(TraceMotifError):
    pass


class TraceTooLarge(TraceMotifError):
    """Trace exceeds the brute-force oracle's size guard."""


class DuplicateMotif(TraceMotifError):
    pass


class UnknownMotif(TraceMotifError):
    pass


class ConfigMismatch(TraceMotifError):
    """Two motif sets were mined with different configurations."""


class EmptySample(TraceMotifError):
    pass
