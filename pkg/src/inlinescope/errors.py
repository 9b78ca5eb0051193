"""Exception hierarchy shared by all inlinescope modules."""


class InlineScopeError(Exception):
    """Base class for all errors raised by this package."""


# --- binary / debug-info ingestion ---

class MalformedElf(InlineScopeError):
    """Input bytes are not a usable ELF image."""


class MissingDebugInfo(InlineScopeError):
    """The ELF file carries no debug-info section."""


class MalformedDwarf(InlineScopeError):
    """Debug-info decoding failed; carries the section offset of the failure."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at .debug_info offset {offset:#x})"
        super().__init__(message)


class EmptyFunctionUniverse(InlineScopeError):
    """A report was requested for a binary with zero named subprograms."""


# --- cost model ---

class NegativeCountError(InlineScopeError):
    """A derived instruction count in the cost computation went negative."""


# --- listing / features ---

class ListingSyntaxError(InlineScopeError):
    def __init__(self, message: str, line_number: int):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class UnknownRegistryVersion(InlineScopeError):
    """Requested feature-registry version is not shipped with this build."""


# --- statistics ---

class EmptyInput(InlineScopeError):
    """A statistic was requested over an empty sample set."""


class TooFewSamples(InlineScopeError):
    """The three-sigma filter needs at least two samples."""


class OutOfRange(InlineScopeError):
    """An inlining ratio fell outside [0, 1]."""


class RegistryMismatch(InlineScopeError):
    """Two feature tables carry different registry versions."""


# --- sweep orchestration ---

class GridTooLarge(InlineScopeError):
    """The variant grid exceeds the configured cap."""


class ConfigError(InlineScopeError):
    """A sweep configuration file is invalid."""


class BuildFailed(InlineScopeError):
    def __init__(self, message: str, exit_code: int | None = None, stderr_tail: str = ""):
        self.exit_code = exit_code
        self.stderr_tail = stderr_tail
        super().__init__(message)


class BuildTimeout(InlineScopeError):
    """A variant build exceeded its per-build timeout."""


class ArtifactMissing(InlineScopeError):
    """A build succeeded but produced no artifact matching the glob."""


class NoSuccessfulBuild(InlineScopeError):
    """Every variant in a sweep or search failed to build."""
