"""Error Hierarchy for the Interpreters, Checkers and CLI"""


class Smc2Error(Exception):
    """Base class. `kind` is a stable identifier used in logs and CLI output."""

    kind = "error"

    def __init__(self, message="", **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def __str__(self):
        return f"{self.kind}: {self.message}" if self.message else self.kind


class ConfigError(Smc2Error):
    kind = "config"


# Source

class SourceError(Smc2Error):
    kind = "source"

    def __init__(self, message="", line=None, col=None, **details):
        super().__init__(message, **details)
        self.line = line
        self.col = col

    def __str__(self):
        if self.line is None:
            return super().__str__()
        return f"{self.kind} at {self.line}:{self.col}: {self.message}"


class SmcSyntaxError(SourceError):
    kind = "syntax"


class UnsupportedConstruct(SourceError):
    kind = "unsupported"


# Typing

class TypeFault(Smc2Error):
    kind = "type"


class UnboundVariable(TypeFault):
    kind = "unbound-variable"


class LabelFault(TypeFault):
    kind = "label"


class ShapeMismatch(TypeFault):
    kind = "shape-mismatch"


# Memory

class MemoryFault(Smc2Error):
    kind = "memory"


class UseAfterFree(MemoryFault):
    kind = "use-after-free"


class DoubleFree(MemoryFault):
    kind = "double-free"


class NotFreeable(MemoryFault):
    kind = "not-freeable"


class AddressBeyondMemory(MemoryFault):
    kind = "address-beyond-memory"


class SizeMismatch(MemoryFault):
    kind = "size-mismatch"


class MalformedPointer(MemoryFault):
    kind = "malformed-pointer"


# Protocols

class ProtocolFault(Smc2Error):
    kind = "protocol"


class NotEnoughShares(ProtocolFault):
    kind = "not-enough-shares"


class DivisionByZero(ProtocolFault):
    kind = "division-by-zero"


class MalformedShare(ProtocolFault):
    kind = "malformed-share"


# Evaluation

class RuntimeFault(Smc2Error):
    kind = "runtime"


class ObliviousFault(RuntimeFault):
    """Public side effect attempted inside a private-conditioned branch."""

    kind = "oblivious"


class PrivateLoopGuard(RuntimeFault):
    kind = "private-loop-guard"


class LoopBudgetExceeded(RuntimeFault):
    kind = "loop-budget-exceeded"


class MissingInput(RuntimeFault):
    kind = "missing-input"


class IndexOutOfParties(RuntimeFault):
    kind = "index-out-of-parties"
