"""Quote/sentiment joining, lagged feature construction, split and scaling.

Feature rows pair same-day news counts with lagged closing prices; the
target is the same day's close (a ``horizon`` of 1 shifts targets to the
next trading day). Scaling is min-max per column, fitted on the training
slice only.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import logging
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    DegenerateColumnError,
    DuplicateDateError,
    EmptyInputError,
    CsvFormatError,
    InsufficientDataError,
    SchemaError,
)
from .ingest import DailySentiment

logger = logging.getLogger(__name__)

# Trading-day lags used by the close-price inputs.
INPUT_LAGS = {"c1": 1, "c2": 2, "c3": 3}
INPUT_NAMES = ("p", "n", "p_over_n", "c1", "c2", "c3", "d", "v")

DEFAULT_TRAIN_LEN = 175
DEFAULT_TEST_LEN = 20


@dataclass(frozen=True)
class QuoteBar:
    date: dt.date
    close: float
    volume: int


@dataclass(frozen=True)
class ObservationRow:
    date: dt.date
    close: float
    volume: int
    positive: int
    negative: int


@dataclass(frozen=True)
class ExperimentConfig:
    """One forecasting setup: input set plus hidden layer sizes."""

    name: str
    inputs: tuple[str, ...]
    hidden_layers: tuple[int, ...]
    paper_row: int | None = None

    def __post_init__(self) -> None:
        if not self.inputs:
            raise ValueError("config needs at least one input")
        unknown = [i for i in self.inputs if i not in INPUT_NAMES]
        if unknown:
            raise ValueError(f"unknown inputs {unknown}; valid: {INPUT_NAMES}")
        if any(size < 1 for size in self.hidden_layers):
            raise ValueError("hidden layer sizes must be >= 1")

    @property
    def max_lag(self) -> int:
        return max((INPUT_LAGS.get(name, 0) for name in self.inputs), default=0)

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        return (len(self.inputs), *self.hidden_layers, 1)

    @property
    def architecture(self) -> str:
        return "-".join(str(size) for size in self.layer_sizes)


@dataclass(frozen=True)
class MinMaxScaler:
    """Per-column affine map to [0, 1], fitted on the training slice."""

    feature_min: np.ndarray
    feature_max: np.ndarray
    target_min: float
    target_max: float

    def transform_features(self, features: np.ndarray) -> np.ndarray:
        return (features - self.feature_min) / (self.feature_max - self.feature_min)

    def inverse_features(self, scaled: np.ndarray) -> np.ndarray:
        return scaled * (self.feature_max - self.feature_min) + self.feature_min

    def transform_targets(self, targets: np.ndarray) -> np.ndarray:
        return (targets - self.target_min) / (self.target_max - self.target_min)

    def inverse_targets(self, scaled: np.ndarray) -> np.ndarray:
        return scaled * (self.target_max - self.target_min) + self.target_min


@dataclass(frozen=True)
class Dataset:
    """Feature matrix and close-price targets for one configuration.

    After :func:`split_and_scale`, ``features`` hold min-max scaled values,
    ``targets`` stay in price units (the scaler converts when training), and
    ``split`` records the (train_len, test_len) windows.
    """

    features: np.ndarray
    targets: np.ndarray
    dates: tuple[dt.date, ...]
    input_names: tuple[str, ...]
    scaler: MinMaxScaler | None = None
    split: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if not (len(self.features) == len(self.targets) == len(self.dates)):
            raise ValueError("features, targets and dates must have equal length")

    @property
    def train_len(self) -> int:
        if self.split is None:
            raise ValueError("dataset is not split yet")
        return self.split[0]

    def train_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return self.features[: self.train_len], self.targets[: self.train_len]

    def test_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return self.features[self.train_len :], self.targets[self.train_len :]


def read_quotes_csv(csv_text: str) -> list[QuoteBar]:
    """Parse a quote-history CSV; Date, Close and Volume are consumed.

    Rows come back sorted ascending by date; duplicate dates and unparsable
    numerics are errors naming the offending line.
    """
    if not csv_text.strip():
        raise EmptyInputError("quotes input is empty")
    reader = csv.reader(io.StringIO(csv_text))
    header = next(reader)
    index_by_name = {name.strip().lower(): i for i, name in enumerate(header)}
    positions = {}
    for column in ("Date", "Close", "Volume"):
        position = index_by_name.get(column.lower())
        if position is None:
            raise SchemaError(f"quotes CSV is missing mandatory column {column!r}")
        positions[column] = position

    bars: list[QuoteBar] = []
    seen: set[dt.date] = set()
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        try:
            date = dt.date.fromisoformat(row[positions["Date"]].strip())
            close = float(row[positions["Close"]])
            volume = int(float(row[positions["Volume"]]))
        except (ValueError, IndexError) as exc:
            raise CsvFormatError(f"line {line_no}: {exc}") from None
        if close <= 0:
            raise CsvFormatError(f"line {line_no}: close must be positive, got {close}")
        if volume < 0:
            raise CsvFormatError(f"line {line_no}: volume must be non-negative")
        if date in seen:
            raise DuplicateDateError(f"line {line_no}: duplicate date {date.isoformat()}")
        seen.add(date)
        bars.append(QuoteBar(date=date, close=close, volume=volume))
    bars.sort(key=lambda bar: bar.date)
    return bars


@dataclass(frozen=True)
class JoinResult:
    rows: tuple[ObservationRow, ...]
    dropped: tuple[DailySentiment, ...]


def join(quotes: list[QuoteBar], sentiments: list[DailySentiment]) -> JoinResult:
    """Left join sentiment onto quote dates.

    Quote dates without news get zero counts; sentiment days without a
    trading day are dropped (returned for accounting, logged as a count).
    """
    by_date = {s.date: s for s in sentiments}
    quote_dates = {q.date for q in quotes}
    rows = tuple(
        ObservationRow(
            date=q.date,
            close=q.close,
            volume=q.volume,
            positive=by_date[q.date].positive if q.date in by_date else 0,
            negative=by_date[q.date].negative if q.date in by_date else 0,
        )
        for q in quotes
    )
    dropped = tuple(s for s in sentiments if s.date not in quote_dates)
    if dropped:
        logger.warning("%d sentiment day(s) without a trading day dropped", len(dropped))
    return JoinResult(rows=rows, dropped=dropped)


def build_features(
    rows: list[ObservationRow] | tuple[ObservationRow, ...],
    config: ExperimentConfig,
    horizon: int = 0,
) -> Dataset:
    """Build the feature matrix and targets for one configuration.

    The first ``max_lag`` rows are consumed as lag context; a usable row t
    gets c1..c3 from previous trading rows, p/n/v from day t, d as the day
    offset from the first usable date, and close[t + horizon] as target.
    """
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    max_lag = config.max_lag
    usable = len(rows) - max_lag - horizon
    if usable < 1:
        raise InsufficientDataError(
            f"need more than {max_lag + horizon} rows for lags and horizon, got {len(rows)}"
        )
    first_usable_date = rows[max_lag].date
    features = np.empty((usable, len(config.inputs)), dtype=np.float64)
    targets = np.empty(usable, dtype=np.float64)
    dates: list[dt.date] = []
    for offset, t in enumerate(range(max_lag, len(rows) - horizon)):
        row = rows[t]
        for j, name in enumerate(config.inputs):
            if name == "p":
                value = float(row.positive)
            elif name == "n":
                value = float(row.negative)
            elif name == "p_over_n":
                value = row.positive / max(row.negative, 1)
            elif name in INPUT_LAGS:
                value = rows[t - INPUT_LAGS[name]].close
            elif name == "d":
                value = float(row.date.toordinal() - first_usable_date.toordinal())
            else:  # "v"
                value = float(row.volume)
            features[offset, j] = value
        targets[offset] = rows[t + horizon].close
        dates.append(row.date)
    return Dataset(
        features=features,
        targets=targets,
        dates=tuple(dates),
        input_names=config.inputs,
    )


def split_and_scale(
    ds: Dataset,
    train_len: int = DEFAULT_TRAIN_LEN,
    test_len: int = DEFAULT_TEST_LEN,
) -> Dataset:
    """Fit a min-max scaler on the first ``train_len`` rows and apply it.

    Rows beyond ``train_len + test_len`` are discarded. Test rows never
    influence the fit; values outside the training range map outside [0, 1]
    without clamping.
    """
    total = train_len + test_len
    if len(ds.features) < total:
        raise InsufficientDataError(
            f"need {total} feature rows ({train_len} train + {test_len} test), "
            f"got {len(ds.features)}"
        )
    features = ds.features[:total]
    targets = ds.targets[:total]
    train_features = features[:train_len]
    train_targets = targets[:train_len]

    feature_min = train_features.min(axis=0)
    feature_max = train_features.max(axis=0)
    for j, name in enumerate(ds.input_names):
        if feature_min[j] == feature_max[j]:
            raise DegenerateColumnError(
                f"feature column {name!r} is constant over the training slice"
            )
    target_min = float(train_targets.min())
    target_max = float(train_targets.max())
    if target_min == target_max:
        raise DegenerateColumnError("target column is constant over the training slice")

    scaler = MinMaxScaler(
        feature_min=feature_min,
        feature_max=feature_max,
        target_min=target_min,
        target_max=target_max,
    )
    return replace(
        ds,
        features=scaler.transform_features(features),
        targets=targets,
        dates=ds.dates[:total],
        scaler=scaler,
        split=(train_len, test_len),
    )
