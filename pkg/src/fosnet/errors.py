"""Exception taxonomy shared across the package."""


class FosnetError(Exception):
    """Base class for all package errors."""


class ConfigError(FosnetError):
    """Invalid configuration or parameter values."""


class CorpusError(FosnetError):
    """Unreadable, malformed, or inconsistent corpus data."""


class UnknownAuthorError(CorpusError):
    """Author id not present in the corpus."""


class UnknownPaperError(CorpusError):
    """Paper id not present in the corpus."""


class UnknownFieldError(FosnetError):
    """Field id not present in the graph or corpus."""


class UnknownEdgeError(FosnetError):
    """Edge not present in the graph; carries nearby-edge suggestions."""

    def __init__(self, message: str, suggestions: tuple[str, ...] = ()):
        super().__init__(message)
        self.suggestions = suggestions


class GraphStructureError(FosnetError):
    """Graph violates an operation's structural precondition."""


class ConvergenceError(FosnetError):
    """Iterative method failed to converge; carries the last residual."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class CapabilityError(FosnetError):
    """Operation needs data that this build dropped (witnesses, field levels)."""


class SplitError(ConfigError):
    """Invalid temporal split (overlapping or missing windows)."""


class ArtifactError(FosnetError):
    """Missing or unreadable run artifacts on disk."""
