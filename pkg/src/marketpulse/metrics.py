"""Quality metrics: training MSE (percent), relative error, adjusted R².

Training MSE is reported as mean squared error on min-max scaled values,
multiplied by 100. Relative forecasting error defaults to mean absolute
percentage error over the test window; max and RMS readings are available
for sensitivity reporting. Adjusted R² penalizes for the number of network
inputs.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, EmptyInputError, MarketPulseError
from .reference import ReferenceRow

RELATIVE_ERROR_MODES = ("mape", "max", "rms")

RESULTS_HEADER = (
    "config,arch,inputs,train_mse_pct,rel_err_pct,adj_r2_pct,"
    "paper_mse_pct,paper_rel_err_pct,paper_adj_r2_pct"
)


class InsufficientDofError(MarketPulseError):
    """Too few observations for the requested regressor count."""

    code = "insufficient-dof"


class ZeroVarianceError(MarketPulseError):
    """The actual series is constant, so R² is undefined."""

    code = "zero-variance"


class ZeroDenominatorError(MarketPulseError):
    """An actual value is not positive, so relative error is undefined."""

    code = "zero-denominator"


def _paired(pred, actual) -> tuple[np.ndarray, np.ndarray]:
    pred = np.asarray(pred, dtype=np.float64)
    actual = np.asarray(actual, dtype=np.float64)
    if pred.shape != actual.shape or pred.ndim != 1:
        raise DimensionError(f"prediction shape {pred.shape} != actual shape {actual.shape}")
    if len(pred) == 0:
        raise EmptyInputError("metric inputs are empty")
    return pred, actual


def mse_pct(pred, actual) -> float:
    """Mean squared error times 100, intended for normalized-scale values."""
    pred, actual = _paired(pred, actual)
    return float(np.mean((pred - actual) ** 2) * 100.0)


def relative_error_pct(pred, actual, mode: str = "mape") -> float:
    """Relative forecasting error in percent (MAPE by default)."""
    if mode not in RELATIVE_ERROR_MODES:
        raise ValueError(f"mode must be one of {RELATIVE_ERROR_MODES}")
    pred, actual = _paired(pred, actual)
    if (actual <= 0).any():
        raise ZeroDenominatorError("actual values must be positive for relative error")
    ratios = np.abs(pred - actual) / actual
    if mode == "mape":
        return float(np.mean(ratios) * 100.0)
    if mode == "max":
        return float(np.max(ratios) * 100.0)
    return float(np.sqrt(np.mean(ratios**2)) * 100.0)


def adjusted_r2_pct(pred, actual, k: int) -> float:
    """Adjusted coefficient of determination, in percent.

    R² = 1 - SSres/SStot, adjusted by (n-1)/(n-k-1) for ``k`` regressors.
    """
    pred, actual = _paired(pred, actual)
    n = len(actual)
    if n <= k + 1:
        raise InsufficientDofError(f"need more than k+1={k + 1} observations, got {n}")
    ss_res = float(np.sum((actual - pred) ** 2))
    ss_tot = float(np.sum((actual - actual.mean()) ** 2))
    if ss_tot == 0.0:
        raise ZeroVarianceError("actual series is constant")
    r2 = 1.0 - ss_res / ss_tot
    adjusted = 1.0 - (1.0 - r2) * (n - 1) / (n - k - 1)
    return float(adjusted * 100.0)


@dataclass(frozen=True)
class ExperimentResult:
    """Metrics for one trained configuration plus its test predictions."""

    config_name: str
    architecture: str
    inputs: tuple[str, ...]
    training_mse_pct: float
    relative_error_pct: float
    adjusted_r2_pct: float
    predictions: tuple[float, ...]
    paper_reference_row: ReferenceRow | None = None

    def __post_init__(self) -> None:
        if self.adjusted_r2_pct > 100.0:
            raise ValueError("adjusted R² cannot exceed 100%")
        if self.relative_error_pct < 0.0:
            raise ValueError("relative error cannot be negative")


def results_to_csv(results: list[ExperimentResult]) -> str:
    """Render the results table; reference columns are paper-reported."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(RESULTS_HEADER.split(","))
    for result in results:
        ref = result.paper_reference_row
        writer.writerow(
            [
                result.config_name,
                result.architecture,
                ",".join(result.inputs).replace("p_over_n", "p/n"),
                f"{result.training_mse_pct:.6f}",
                f"{result.relative_error_pct:.6f}",
                f"{result.adjusted_r2_pct:.6f}",
                f"{ref.training_mse_pct:.4f}" if ref else "",
                f"{ref.relative_error_pct:.4f}" if ref else "",
                f"{ref.adjusted_r2_pct:.4f}" if ref else "",
            ]
        )
    return buffer.getvalue()
