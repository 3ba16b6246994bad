"""Exception hierarchy shared by the core pipeline, service and CLI.

Every failure the pipeline can produce carries a stable ``code`` (used in
service error payloads) and a ``category`` that drives the CLI exit code:
``usage`` -> 1, ``data`` -> 2, ``divergence`` -> 3.
"""

from __future__ import annotations


class MarketPulseError(Exception):
    """Base class for all pipeline failures."""

    category = "data"
    code = "data-error"


class SchemaError(MarketPulseError):
    """An input table is missing a mandatory column."""

    code = "missing-column"


class EmptyInputError(MarketPulseError):
    """An input that must contain data rows has none."""

    code = "empty-input"


class WordValidationError(MarketPulseError):
    """A token violates the lowercase letters-only contract."""

    code = "invalid-word"


class DegenerateLexiconError(MarketPulseError):
    """Lexicon construction left one polarity with no prefixes."""

    code = "degenerate-lexicon"


class PrefixCollisionError(MarketPulseError):
    """A prefix of one polarity equals or extends a prefix of the other."""

    code = "prefix-collision"


class BlockNotFoundError(MarketPulseError):
    """The configured news block selector matched nothing in the page."""

    code = "block-not-found"


class FetchError(MarketPulseError):
    """A page could not be retrieved by the active fetcher."""

    code = "fetch-failed"


class NoDataError(MarketPulseError):
    """A crawl produced nothing because the first index page failed."""

    code = "no-data"


class CsvFormatError(MarketPulseError):
    """A CSV payload has a malformed row; message names the line."""

    code = "csv-format"


class DuplicateDateError(MarketPulseError):
    """A quote series contains the same calendar date twice."""

    code = "duplicate-date"


class InsufficientDataError(MarketPulseError):
    """Fewer rows are available than an operation requires."""

    code = "insufficient-data"


class DegenerateColumnError(MarketPulseError):
    """A feature column is constant over the training slice."""

    code = "degenerate-column"


class DimensionError(MarketPulseError):
    """An input vector or matrix has the wrong width for the network."""

    code = "dimension-mismatch"


class DivergenceError(MarketPulseError):
    """Training produced a non-finite loss."""

    category = "divergence"
    code = "diverged"


class ModelFormatError(MarketPulseError):
    """A serialized model file does not follow the expected layout."""

    code = "model-format"
