"""The eight-configuration forecasting experiment.

Joins quotes with daily sentiment once, then trains one seeded network per
configuration on the first 175 usable rows and evaluates forecasts on the
next 20. Configuration seeds are offset by their row number so the eight
runs are reproducible yet start from different parameters.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .charts import PredictionPoint
from .dataset import (
    DEFAULT_TEST_LEN,
    DEFAULT_TRAIN_LEN,
    Dataset,
    ExperimentConfig,
    ObservationRow,
    QuoteBar,
    build_features,
    join,
    split_and_scale,
)
from .errors import InsufficientDataError
from .ingest import DailySentiment
from .metrics import ExperimentResult, adjusted_r2_pct, mse_pct, relative_error_pct
from .neuralnet import Mlp, NetworkSpec, TrainConfig, init_network, predict, train
from .reference import reference_for_row

logger = logging.getLogger(__name__)

# The standard suite: input sets and architectures of the eight studied
# configurations, in row order.
STANDARD_CONFIGS: tuple[ExperimentConfig, ...] = (
    ExperimentConfig("row1", ("p", "n"), (), paper_row=1),
    ExperimentConfig("row2", ("p", "n", "c1"), (), paper_row=2),
    ExperimentConfig("row3", ("p", "n", "c1", "c2"), (2,), paper_row=3),
    ExperimentConfig("row4", ("p", "n", "c1", "c2", "c3"), (3,), paper_row=4),
    ExperimentConfig("row5", ("p", "n", "c1", "c2", "c3", "d"), (3,), paper_row=5),
    ExperimentConfig("row6", ("p", "n", "c1", "c2", "c3", "d", "v"), (3,), paper_row=6),
    ExperimentConfig("row7", ("p_over_n", "c1", "c2", "d"), (2,), paper_row=7),
    ExperimentConfig("row8", ("c1", "c2", "c3", "d"), (3,), paper_row=8),
)

REPORT_FOOTNOTES = (
    "training MSE is mean squared error on min-max scaled values, x100",
    "relative error (MAPE) and adjusted R^2 are computed on the test window",
    "paper_* columns are paper-reported reference values for rows 1-8",
)


def standard_config(name: str) -> ExperimentConfig:
    for config in STANDARD_CONFIGS:
        if config.name == name:
            return config
    valid = ", ".join(c.name for c in STANDARD_CONFIGS)
    raise ValueError(f"unknown config {name!r}; expected one of: {valid}")


@dataclass(frozen=True)
class SingleRun:
    """Everything produced by training one configuration."""

    config: ExperimentConfig
    result: ExperimentResult
    points: tuple[PredictionPoint, ...]
    model: Mlp
    history: tuple[float, ...]
    dataset: Dataset


def run_single(
    rows: tuple[ObservationRow, ...] | list[ObservationRow],
    config: ExperimentConfig,
    seed: int = 0,
    horizon: int = 0,
    train_config: TrainConfig = TrainConfig(),
    train_len: int = DEFAULT_TRAIN_LEN,
    test_len: int = DEFAULT_TEST_LEN,
) -> SingleRun:
    """Train one configuration and evaluate it on the held-out window."""
    ds = split_and_scale(build_features(rows, config, horizon=horizon), train_len, test_len)
    scaler = ds.scaler
    assert scaler is not None
    train_X, train_targets = ds.train_arrays()
    test_X, test_targets = ds.test_arrays()

    network_seed = seed + (config.paper_row or 0)
    spec = NetworkSpec(layer_sizes=config.layer_sizes, seed=network_seed)
    model, history = train(
        init_network(spec), train_X, scaler.transform_targets(train_targets), train_config
    )

    prices = predict(model, scaler, ds.features)
    train_scaled_pred = scaler.transform_targets(prices[:train_len])
    result = ExperimentResult(
        config_name=config.name,
        architecture=config.architecture,
        inputs=config.inputs,
        training_mse_pct=mse_pct(train_scaled_pred, scaler.transform_targets(train_targets)),
        relative_error_pct=relative_error_pct(prices[train_len:], test_targets),
        adjusted_r2_pct=adjusted_r2_pct(prices[train_len:], test_targets, k=len(config.inputs)),
        predictions=tuple(float(v) for v in prices[train_len:]),
        paper_reference_row=reference_for_row(config.paper_row),
    )
    points = tuple(
        PredictionPoint(
            index=i + 1,
            date=ds.dates[i],
            actual=float(ds.targets[i]),
            predicted=float(prices[i]),
            split="train" if i < train_len else "test",
        )
        for i in range(len(ds.dates))
    )
    return SingleRun(
        config=config,
        result=result,
        points=points,
        model=model,
        history=tuple(history),
        dataset=ds,
    )


@dataclass(frozen=True)
class ExperimentRun:
    runs: tuple[SingleRun, ...]
    dropped_sentiment_days: int

    @property
    def results(self) -> list[ExperimentResult]:
        return [run.result for run in self.runs]


def run_experiment(
    quotes: list[QuoteBar],
    sentiments: list[DailySentiment],
    seed: int = 0,
    horizon: int = 0,
    train_config: TrainConfig = TrainConfig(),
    configs: tuple[ExperimentConfig, ...] = STANDARD_CONFIGS,
    train_len: int = DEFAULT_TRAIN_LEN,
    test_len: int = DEFAULT_TEST_LEN,
) -> ExperimentRun:
    """Join the inputs once and run every configuration on the result."""
    joined = join(quotes, sentiments)
    max_lag = max(config.max_lag for config in configs)
    required = train_len + test_len + max_lag + horizon
    if len(joined.rows) < required:
        raise InsufficientDataError(
            f"experiment needs at least {required} joined rows "
            f"({train_len} train + {test_len} test + {max_lag} lag context), "
            f"got {len(joined.rows)}"
        )
    runs = tuple(
        run_single(
            joined.rows,
            config,
            seed=seed,
            horizon=horizon,
            train_config=train_config,
            train_len=train_len,
            test_len=test_len,
        )
        for config in configs
    )
    return ExperimentRun(runs=runs, dropped_sentiment_days=len(joined.dropped))


def dataset_debug_csv(ds: Dataset) -> str:
    """Debug export of raw features and targets: date,target,<inputs>."""
    header = "date,target," + ",".join(ds.input_names)
    lines = [header]
    for i, date in enumerate(ds.dates):
        values = ",".join(repr(float(v)) for v in ds.features[i])
        lines.append(f"{date.isoformat()},{float(ds.targets[i])!r},{values}")
    return "\n".join(lines) + "\n"
