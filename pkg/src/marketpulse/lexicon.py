"""Sentiment lexicon construction from a master word dictionary.

The pipeline parses a master dictionary CSV (public Loughran-McDonald
layout by default), keeps positive/negative words whose corpus proportion
exceeds a frequency cut-off, and collapses same-root words into shared
prefixes so one prefix matches a whole inflection family.
"""

from __future__ import annotations

import csv
import io
import logging
import re
from dataclasses import dataclass
from enum import Enum

from .errors import (
    CsvFormatError,
    DegenerateLexiconError,
    EmptyInputError,
    PrefixCollisionError,
    SchemaError,
    WordValidationError,
)

logger = logging.getLogger(__name__)

# 0.0001% of all corpus words, expressed as a fraction.
DEFAULT_FREQUENCY_THRESHOLD = 1e-6
# Minimum shared prefix length for two sorted neighbours to be considered
# same-root words (shorter words must be a full prefix of the longer one).
DEFAULT_MIN_SHARED_PREFIX = 5
# Prefixes shorter than this would match far too many unrelated tokens.
MIN_PREFIX_LENGTH = 3

_WORD_RE = re.compile(r"[a-z]+")


class Category(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    OTHER = "other"


@dataclass(frozen=True)
class DictEntry:
    """One master-dictionary row after normalization."""

    word: str
    category: Category
    word_proportion: float
    doc_count: int
    std_dev_proportion: float = 0.0
    word_count: int = 0


@dataclass(frozen=True)
class DictionaryParse:
    """Parsed dictionary plus per-row problems that were not fatal."""

    entries: tuple[DictEntry, ...]
    warnings: tuple[str, ...]


# Column names of the public master-dictionary CSV. Keys are our logical
# names; values can be overridden per input file.
DEFAULT_COLUMNS = {
    "word": "Word",
    "negative": "Negative",
    "positive": "Positive",
    "proportion": "Word Proportion",
    "doc_count": "Doc Count",
    "std_dev": "Std Dev",
    "word_count": "Word Count",
}
MANDATORY_COLUMNS = ("word", "negative", "positive", "proportion", "doc_count")


@dataclass(frozen=True)
class SentimentLexicon:
    """Two prefix-free sets of sentiment prefixes, one per polarity.

    Construction validates the invariants that make counting unambiguous:
    every prefix is a lowercase letter string of length >= MIN_PREFIX_LENGTH,
    no prefix extends another prefix of the same polarity, and no prefix of
    one polarity equals or extends a prefix of the other (so a token can
    match at most one polarity).

    ``threshold_used`` and ``source_counts`` (raw positive/negative entry
    counts before frequency filtering) are recorded by :func:`build_lexicon`
    and absent on lexicons loaded back from CSV.
    """

    positive_prefixes: frozenset[str]
    negative_prefixes: frozenset[str]
    threshold_used: float | None = None
    source_counts: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "positive_prefixes", frozenset(self.positive_prefixes))
        object.__setattr__(self, "negative_prefixes", frozenset(self.negative_prefixes))
        for side, prefixes in (
            ("positive", self.positive_prefixes),
            ("negative", self.negative_prefixes),
        ):
            for p in prefixes:
                if not _WORD_RE.fullmatch(p):
                    raise WordValidationError(
                        f"{side} prefix {p!r} is not a lowercase letter string"
                    )
                if len(p) < MIN_PREFIX_LENGTH:
                    raise WordValidationError(
                        f"{side} prefix {p!r} is shorter than {MIN_PREFIX_LENGTH} letters"
                    )
            _check_prefix_free(prefixes, side)
        for p in self.positive_prefixes:
            for q in self.negative_prefixes:
                if p.startswith(q) or q.startswith(p):
                    raise PrefixCollisionError(
                        f"prefix {min(p, q, key=len)!r} appears in both polarities "
                        f"(positive {p!r} vs negative {q!r})"
                    )


def _check_prefix_free(prefixes: frozenset[str], side: str) -> None:
    ordered = sorted(prefixes)
    for a, b in zip(ordered, ordered[1:]):
        # In sorted order any extension follows its prefix immediately.
        if b.startswith(a):
            raise WordValidationError(
                f"{side} prefixes are not prefix-free: {a!r} is a prefix of {b!r}"
            )


def parse_master_dictionary(
    csv_text: str, columns: dict[str, str] | None = None
) -> DictionaryParse:
    """Parse a master dictionary CSV into normalized entries.

    Rows with unparsable numerics, malformed words or out-of-range values
    are skipped and reported in ``warnings`` rather than silently dropped.
    Rows flagged both positive and negative resolve to negative with a
    warning.
    """
    if not csv_text.strip():
        raise EmptyInputError("dictionary input is empty")
    colmap = dict(DEFAULT_COLUMNS)
    if columns:
        colmap.update(columns)

    reader = csv.reader(io.StringIO(csv_text))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyInputError("dictionary input is empty") from None

    index_by_name = {name.strip().lower(): i for i, name in enumerate(header)}
    positions: dict[str, int | None] = {}
    for logical, column in colmap.items():
        positions[logical] = index_by_name.get(column.strip().lower())
    for logical in MANDATORY_COLUMNS:
        if positions[logical] is None:
            raise SchemaError(f"dictionary is missing mandatory column {colmap[logical]!r}")

    entries: list[DictEntry] = []
    warnings: list[str] = []
    data_rows = 0
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        data_rows += 1
        problem = _parse_row(row, positions, line_no, entries, warnings)
        if problem:
            warnings.append(problem)
    if data_rows == 0:
        raise EmptyInputError("dictionary has a header but no data rows")
    return DictionaryParse(entries=tuple(entries), warnings=tuple(warnings))


def _parse_row(
    row: list[str],
    positions: dict[str, int | None],
    line_no: int,
    entries: list[DictEntry],
    warnings: list[str],
) -> str | None:
    def cell(logical: str) -> str:
        pos = positions[logical]
        if pos is None or pos >= len(row):
            return ""
        return row[pos].strip()

    word = cell("word").lower()
    if not _WORD_RE.fullmatch(word):
        return f"line {line_no}: skipped word {word!r} (letters only expected)"
    try:
        negative_flag = float(cell("negative") or 0)
        positive_flag = float(cell("positive") or 0)
        proportion = float(cell("proportion"))
        doc_count = int(float(cell("doc_count")))
        std_dev = float(cell("std_dev")) if cell("std_dev") else 0.0
        word_count = int(float(cell("word_count"))) if cell("word_count") else 0
    except ValueError:
        return f"line {line_no}: skipped {word!r} (unparsable numeric field)"
    if not 0.0 <= proportion <= 1.0:
        return f"line {line_no}: skipped {word!r} (proportion {proportion} outside [0, 1])"
    if doc_count < 0 or word_count < 0:
        return f"line {line_no}: skipped {word!r} (negative count)"

    if negative_flag > 0 and positive_flag > 0:
        warnings.append(
            f"line {line_no}: {word!r} flagged both positive and negative; kept as negative"
        )
        category = Category.NEGATIVE
    elif negative_flag > 0:
        category = Category.NEGATIVE
    elif positive_flag > 0:
        category = Category.POSITIVE
    else:
        category = Category.OTHER
    entries.append(
        DictEntry(
            word=word,
            category=category,
            word_proportion=proportion,
            doc_count=doc_count,
            std_dev_proportion=std_dev,
            word_count=word_count,
        )
    )
    return None


def filter_by_frequency(
    entries: list[DictEntry], threshold: float = DEFAULT_FREQUENCY_THRESHOLD
) -> list[DictEntry]:
    """Keep entries whose corpus proportion strictly exceeds ``threshold``."""
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    return [e for e in entries if e.word_proportion > threshold]


def _common_prefix(a: str, b: str) -> str:
    limit = min(len(a), len(b))
    i = 0
    while i < limit and a[i] == b[i]:
        i += 1
    return a[:i]


def collapse_roots(
    words: list[str], min_shared_prefix: int = DEFAULT_MIN_SHARED_PREFIX
) -> list[str]:
    """Collapse same-root words into their shared prefixes.

    Words are sorted and grouped greedily: the next word joins the current
    group when it shares a prefix of at least ``min_shared_prefix`` letters
    with the group's running common prefix (when either string is shorter
    than that, the shorter one must be a full prefix of the longer). Each
    group is replaced by its common prefix; the output is deduplicated,
    sorted, and prefix-free (a surviving prefix removes its extensions).
    """
    for w in words:
        if not _WORD_RE.fullmatch(w):
            raise WordValidationError(f"{w!r} is not a lowercase letter string")
    groups: list[str] = []
    running: str | None = None
    for word in sorted(set(words)):
        if running is None:
            running = word
            continue
        shared = _common_prefix(running, word)
        required = min(min_shared_prefix, len(running), len(word))
        if len(shared) >= required:
            running = shared
        else:
            groups.append(running)
            running = word
    if running is not None:
        groups.append(running)

    result: list[str] = []
    for prefix in sorted(set(groups)):
        if result and prefix.startswith(result[-1]):
            continue
        result.append(prefix)
    return result


def build_lexicon(
    entries: list[DictEntry],
    threshold: float = DEFAULT_FREQUENCY_THRESHOLD,
    min_shared_prefix: int = DEFAULT_MIN_SHARED_PREFIX,
) -> SentimentLexicon:
    """Build a validated two-sided lexicon from parsed dictionary entries.

    Raises :class:`DegenerateLexiconError` when either polarity ends up
    empty and :class:`PrefixCollisionError` when the two sides overlap.
    """
    raw_positive = sum(1 for e in entries if e.category is Category.POSITIVE)
    raw_negative = sum(1 for e in entries if e.category is Category.NEGATIVE)
    kept = filter_by_frequency(entries, threshold)
    sides: dict[str, list[str]] = {}
    for side, category in (("positive", Category.POSITIVE), ("negative", Category.NEGATIVE)):
        words = [e.word for e in kept if e.category is category]
        prefixes = collapse_roots(words, min_shared_prefix)
        usable = [p for p in prefixes if len(p) >= MIN_PREFIX_LENGTH]
        for dropped in sorted(set(prefixes) - set(usable)):
            logger.warning(
                "dropped %s prefix %r: shorter than %d letters",
                side,
                dropped,
                MIN_PREFIX_LENGTH,
            )
        if not usable:
            raise DegenerateLexiconError(
                f"no {side} prefixes survive threshold {threshold:g}"
            )
        sides[side] = usable
    return SentimentLexicon(
        positive_prefixes=frozenset(sides["positive"]),
        negative_prefixes=frozenset(sides["negative"]),
        threshold_used=threshold,
        source_counts=(raw_positive, raw_negative),
    )


def lexicon_to_csv(lexicon: SentimentLexicon) -> str:
    """Serialize to the two-column ``prefix,polarity`` CSV (sorted, LF)."""
    rows = [(p, "positive") for p in lexicon.positive_prefixes]
    rows += [(p, "negative") for p in lexicon.negative_prefixes]
    lines = ["prefix,polarity"]
    lines += [f"{prefix},{polarity}" for prefix, polarity in sorted(rows)]
    return "\n".join(lines) + "\n"


def lexicon_from_csv(csv_text: str) -> SentimentLexicon:
    """Load a lexicon CSV produced by :func:`lexicon_to_csv`."""
    if not csv_text.strip():
        raise EmptyInputError("lexicon input is empty")
    lines = csv_text.splitlines()
    if lines[0].strip().lower() != "prefix,polarity":
        raise SchemaError("lexicon CSV must start with header 'prefix,polarity'")
    positive: set[str] = set()
    negative: set[str] = set()
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise CsvFormatError(f"line {line_no}: expected 'prefix,polarity'")
        prefix, polarity = parts[0].strip(), parts[1].strip().lower()
        if polarity == "positive":
            positive.add(prefix)
        elif polarity == "negative":
            negative.add(prefix)
        else:
            raise CsvFormatError(f"line {line_no}: unknown polarity {polarity!r}")
    if not positive or not negative:
        raise DegenerateLexiconError("lexicon CSV must contain both polarities")
    return SentimentLexicon(
        positive_prefixes=frozenset(positive), negative_prefixes=frozenset(negative)
    )
