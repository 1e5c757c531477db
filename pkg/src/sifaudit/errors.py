"""Exception hierarchy shared by all sifaudit modules.

The CLI maps these onto exit codes: config/parameter problems -> 1,
unreadable or malformed data -> 2, degenerate results -> 3.
"""


class SifAuditError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(SifAuditError):
    """Invalid configuration, manifest, or missing input path."""


class ParameterError(ConfigError, ValueError):
    """An operation received an out-of-range or inconsistent parameter."""


class DataFormatError(SifAuditError):
    """Input bytes or lines do not match the declared file format."""


class EmptyCorpusError(DataFormatError):
    """The token stream contained no tokens."""


class DegenerateResultError(SifAuditError):
    """The computation is well-formed but its result is undefined
    (zero variance, all-zero input, no usable items)."""


class CoverageError(DegenerateResultError):
    """Every item of an evaluation dataset was out of vocabulary."""


class EmptySentenceError(DegenerateResultError):
    """A sentence had no in-vocabulary token under oov_policy='skip'."""
