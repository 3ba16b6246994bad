"""News ingestion: headline crawl, lexicon counting, daily aggregation.

Pages come from a :class:`PageFetcher`; the recorded implementation keeps
test runs hermetic while the live one does polite HTTP. Counting lowercases
each page's visible text, tokenizes on maximal runs of ASCII letters, and
matches tokens that start with any lexicon prefix.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import logging
import re
import time
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from urllib.parse import urljoin

from .errors import BlockNotFoundError, CsvFormatError, FetchError, NoDataError
from .htmlpages import Node, Selector, find_first, parse_html
from .lexicon import SentimentLexicon

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"[a-z]+")
_DATE_FORMATS = ("%A, %B %d, %Y", "%B %d, %Y", "%b %d, %Y", "%d %B %Y", "%m/%d/%Y")


@dataclass(frozen=True)
class HeadlineRef:
    date: dt.date
    url: str
    title: str


@dataclass(frozen=True)
class SentimentCount:
    positive: int = 0
    negative: int = 0

    def __add__(self, other: "SentimentCount") -> "SentimentCount":
        return SentimentCount(self.positive + other.positive, self.negative + other.negative)


@dataclass(frozen=True)
class DailySentiment:
    date: dt.date
    positive: int
    negative: int
    article_count: int


@dataclass(frozen=True)
class ScanSelectors:
    """Where to look in a news site; configuration, not code."""

    news_block: str = "div.headlines"
    date_heading: str = "h3.date"
    older_text: str = "Older Headlines"
    article_body: str | None = None


DEFAULT_SELECTORS = ScanSelectors()


@dataclass(frozen=True)
class HeadlinePage:
    refs: tuple[HeadlineRef, ...]
    older_page: str | None


def _parse_heading_date(text: str) -> dt.date | None:
    text = " ".join(text.split())
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        pass
    for fmt in _DATE_FORMATS:
        try:
            return dt.datetime.strptime(text, fmt).date()
        except ValueError:
            continue
    return None


def extract_headline_links(
    index_html: str, base_url: str, selectors: ScanSelectors = DEFAULT_SELECTORS
) -> HeadlinePage:
    """Pull dated article links out of a news index page.

    Links inside the configured news block are grouped under the nearest
    preceding date heading; relative hrefs are resolved against
    ``base_url``. The pagination anchor (matched by its visible text) is
    searched document-wide and reported separately.
    """
    root = parse_html(index_html)
    block = find_first(root, Selector.parse(selectors.news_block))
    if block is None:
        raise BlockNotFoundError(
            f"news block {selectors.news_block!r} not found in page {base_url}"
        )

    older_needle = " ".join(selectors.older_text.lower().split())
    older_page: str | None = None
    for node in root.iter_nodes():
        if node.tag == "a" and node.attrs.get("href"):
            if node.text().lower() == older_needle:
                older_page = urljoin(base_url, node.attrs["href"])
                break

    date_selector = Selector.parse(selectors.date_heading)
    refs: list[HeadlineRef] = []
    current_date: dt.date | None = None
    for node in block.iter_nodes():
        if node is block:
            continue
        if date_selector.matches(node):
            heading = node.text()
            current_date = _parse_heading_date(heading)
            if current_date is None:
                logger.warning("unparsable date heading %r in %s", heading, base_url)
            continue
        if node.tag != "a" or not node.attrs.get("href"):
            continue
        title = node.text()
        if title.lower() == older_needle:
            continue
        if current_date is None:
            logger.warning("skipping undated link %r in %s", title, base_url)
            continue
        refs.append(
            HeadlineRef(date=current_date, url=urljoin(base_url, node.attrs["href"]), title=title)
        )
    return HeadlinePage(refs=tuple(refs), older_page=older_page)


def extract_article_text(
    article_html: str, selectors: ScanSelectors = DEFAULT_SELECTORS
) -> str:
    """Visible text of the article's main content region.

    Falls back from the configured body selector to ``<body>`` to the whole
    document; script/style content never appears. An empty page yields "".
    """
    root = parse_html(article_html)
    region: Node | None = None
    if selectors.article_body:
        region = find_first(root, Selector.parse(selectors.article_body))
    if region is None:
        region = find_first(root, Selector.parse("body")) or root
    return region.text()


class _PrefixMatcher:
    """Token lookup over a prefix-free set, as a character trie."""

    _END = ""

    def __init__(self, prefixes: frozenset[str]) -> None:
        root: dict = {}
        for prefix in prefixes:
            node = root
            for ch in prefix:
                node = node.setdefault(ch, {})
            node[self._END] = True
        self._root = root

    def matches(self, token: str) -> bool:
        node = self._root
        for ch in token:
            node = node.get(ch)
            if node is None:
                return False
            if self._END in node:
                return True
        return False


@lru_cache(maxsize=8)
def _matchers(lexicon: SentimentLexicon) -> tuple[_PrefixMatcher, _PrefixMatcher]:
    return (
        _PrefixMatcher(lexicon.positive_prefixes),
        _PrefixMatcher(lexicon.negative_prefixes),
    )


def count_sentiment(text: str, lexicon: SentimentLexicon) -> SentimentCount:
    """Count tokens starting with a positive or negative lexicon prefix.

    Lexicon validation guarantees a token can match at most one polarity,
    so each token increments at most one counter.
    """
    positive_matcher, negative_matcher = _matchers(lexicon)
    positive = negative = 0
    for token in _TOKEN_RE.findall(text.lower()):
        if positive_matcher.matches(token):
            positive += 1
        elif negative_matcher.matches(token):
            negative += 1
    return SentimentCount(positive=positive, negative=negative)


def aggregate_daily(items: list[tuple[dt.date, SentimentCount]]) -> list[DailySentiment]:
    """One row per distinct date with summed counts, ascending by date."""
    totals: dict[dt.date, list[int]] = {}
    for date, count in items:
        bucket = totals.setdefault(date, [0, 0, 0])
        bucket[0] += count.positive
        bucket[1] += count.negative
        bucket[2] += 1
    return [
        DailySentiment(date=date, positive=p, negative=n, article_count=a)
        for date, (p, n, a) in sorted(totals.items())
    ]


class PageFetcher:
    """Supplies HTML for a URL; raises :class:`FetchError` on failure."""

    def fetch(self, url: str) -> str:  # pragma: no cover - interface only
        raise NotImplementedError


class RecordedFetcher(PageFetcher):
    """Serves pages from a fixture directory with a URL -> path manifest."""

    def __init__(self, fixture_dir: str | Path) -> None:
        self._dir = Path(fixture_dir)
        manifest = self._dir / "manifest.csv"
        if not manifest.is_file():
            raise FetchError(f"no manifest.csv in {self._dir}")
        self._paths: dict[str, str] = {}
        with manifest.open(newline="") as handle:
            for row in csv.DictReader(handle):
                if row.get("url") and row.get("path"):
                    self._paths[row["url"].strip()] = row["path"].strip()

    def fetch(self, url: str) -> str:
        path = self._paths.get(url)
        if path is None:
            raise FetchError(f"{url} is not in the recorded fixture set")
        try:
            return (self._dir / path).read_text(encoding="utf-8")
        except OSError as exc:
            raise FetchError(f"cannot read recorded page for {url}: {exc}") from exc


class MappingFetcher(PageFetcher):
    """Serves pages from an in-memory URL -> HTML mapping."""

    def __init__(self, pages: dict[str, str]) -> None:
        self._pages = dict(pages)

    def fetch(self, url: str) -> str:
        try:
            return self._pages[url]
        except KeyError:
            raise FetchError(f"{url} is not in the supplied page set") from None


class LiveFetcher(PageFetcher):  # pragma: no cover - not exercised in CI
    """Best-effort HTTP fetcher with a politeness delay between requests."""

    def __init__(self, delay_seconds: float = 1.0, timeout: float = 20.0) -> None:
        self._delay = delay_seconds
        self._timeout = timeout
        self._last_request = 0.0

    def fetch(self, url: str) -> str:
        import httpx

        wait = self._delay - (time.monotonic() - self._last_request)
        if wait > 0:
            time.sleep(wait)
        self._last_request = time.monotonic()
        try:
            response = httpx.get(
                url,
                timeout=self._timeout,
                follow_redirects=True,
                headers={"User-Agent": "marketpulse/0.1"},
            )
            response.raise_for_status()
        except Exception as exc:
            raise FetchError(f"fetch failed for {url}: {exc}") from exc
        return response.text


@dataclass(frozen=True)
class CrawlResult:
    days: tuple[DailySentiment, ...]
    pages_visited: int
    articles_counted: int
    warnings: tuple[str, ...] = ()


def crawl(
    fetcher: PageFetcher,
    start_url: str,
    lexicon: SentimentLexicon,
    max_pages: int = 20,
    selectors: ScanSelectors = DEFAULT_SELECTORS,
) -> CrawlResult:
    """Walk index pages via their pagination link and count every article.

    Articles are deduplicated by URL and fetched once; a failed article is
    skipped with a warning, a failed later index page stops the walk with
    partial results, and an unfetchable first page raises
    :class:`NoDataError`.
    """
    if max_pages < 1:
        raise ValueError("max_pages must be >= 1")
    warnings: list[str] = []
    counted: list[tuple[tuple[dt.date, str], SentimentCount]] = []
    seen_articles: set[str] = set()
    seen_pages: set[str] = set()
    url: str | None = start_url
    pages_visited = 0
    while url and pages_visited < max_pages and url not in seen_pages:
        seen_pages.add(url)
        try:
            index_html = fetcher.fetch(url)
            page = extract_headline_links(index_html, base_url=url, selectors=selectors)
        except (FetchError, BlockNotFoundError) as exc:
            if pages_visited == 0:
                raise NoDataError(f"first index page yields no data: {exc}") from exc
            message = f"index page failed, stopping with partial results: {url}"
            logger.warning(message)
            warnings.append(message)
            break
        pages_visited += 1
        for ref in page.refs:
            if ref.url in seen_articles:
                continue
            seen_articles.add(ref.url)
            try:
                article_html = fetcher.fetch(ref.url)
            except FetchError:
                message = f"article fetch failed, skipped: {ref.url}"
                logger.warning(message)
                warnings.append(message)
                continue
            text = extract_article_text(article_html, selectors=selectors)
            counted.append(((ref.date, ref.url), count_sentiment(text, lexicon)))
        url = page.older_page
    counted.sort(key=lambda item: (item[0][0].toordinal(), item[0][1]))
    days = aggregate_daily([(key[0], count) for key, count in counted])
    return CrawlResult(
        days=tuple(days),
        pages_visited=pages_visited,
        articles_counted=len(counted),
        warnings=tuple(warnings),
    )


SENTIMENT_HEADER = "date,positive,negative,articles"


def write_sentiment_csv(rows: list[DailySentiment]) -> str:
    """Render rows as the sentiment CSV (ISO dates, LF line endings)."""
    lines = [SENTIMENT_HEADER]
    lines += [
        f"{row.date.isoformat()},{row.positive},{row.negative},{row.article_count}"
        for row in rows
    ]
    return "\n".join(lines) + "\n"


def read_sentiment_csv(csv_text: str) -> list[DailySentiment]:
    """Parse a sentiment CSV, reporting the line number of any bad row."""
    reader = csv.reader(io.StringIO(csv_text))
    try:
        header = next(reader)
    except StopIteration:
        raise CsvFormatError("sentiment CSV is empty") from None
    if [cell.strip() for cell in header] != SENTIMENT_HEADER.split(","):
        raise CsvFormatError(f"sentiment CSV header must be {SENTIMENT_HEADER!r}")
    rows: list[DailySentiment] = []
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 4:
            raise CsvFormatError(f"line {line_no}: expected 4 fields, got {len(row)}")
        try:
            date = dt.date.fromisoformat(row[0].strip())
            positive, negative, articles = (int(cell) for cell in row[1:])
        except ValueError as exc:
            raise CsvFormatError(f"line {line_no}: {exc}") from None
        if positive < 0 or negative < 0:
            raise CsvFormatError(f"line {line_no}: counts must be non-negative")
        if articles < 1:
            raise CsvFormatError(f"line {line_no}: articles must be >= 1")
        rows.append(
            DailySentiment(date=date, positive=positive, negative=negative, article_count=articles)
        )
    return rows
