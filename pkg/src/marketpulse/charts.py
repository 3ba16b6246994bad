"""Deterministic SVG line charts of actual vs predicted price series.

Rendering is a pure function of the prediction rows: coordinates are
rounded to 3 decimals and no timestamps or randomness enter the output, so
identical input bytes yield identical SVG bytes.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
from dataclasses import dataclass

from .errors import CsvFormatError, EmptyInputError

PREDICTIONS_HEADER = "index,date,actual,predicted,split"

ACTUAL_COLOR = "#1f77b4"
PREDICTED_COLOR = "#d62728"

_WIDTH = 880
_HEIGHT = 440
_MARGIN_LEFT = 62
_MARGIN_RIGHT = 16
_MARGIN_TOP = 34
_MARGIN_BOTTOM = 46


@dataclass(frozen=True)
class PredictionPoint:
    index: int
    date: dt.date
    actual: float
    predicted: float
    split: str  # "train" or "test"


def predictions_to_csv(points: list[PredictionPoint]) -> str:
    lines = [PREDICTIONS_HEADER]
    lines += [
        f"{p.index},{p.date.isoformat()},{p.actual!r},{p.predicted!r},{p.split}"
        for p in points
    ]
    return "\n".join(lines) + "\n"


def predictions_from_csv(csv_text: str) -> list[PredictionPoint]:
    reader = csv.reader(io.StringIO(csv_text))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyInputError("predictions CSV is empty") from None
    if [cell.strip() for cell in header] != PREDICTIONS_HEADER.split(","):
        raise CsvFormatError(f"predictions CSV header must be {PREDICTIONS_HEADER!r}")
    points: list[PredictionPoint] = []
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 5:
            raise CsvFormatError(f"line {line_no}: expected 5 fields, got {len(row)}")
        try:
            point = PredictionPoint(
                index=int(row[0]),
                date=dt.date.fromisoformat(row[1].strip()),
                actual=float(row[2]),
                predicted=float(row[3]),
                split=row[4].strip(),
            )
        except ValueError as exc:
            raise CsvFormatError(f"line {line_no}: {exc}") from None
        if point.split not in ("train", "test"):
            raise CsvFormatError(f"line {line_no}: split must be train or test")
        points.append(point)
    if not points:
        raise EmptyInputError("predictions CSV has no data rows")
    return points


def _ticks(low: float, high: float, count: int = 5) -> list[float]:
    if count < 2:
        return [low]
    step = (high - low) / (count - 1)
    return [low + i * step for i in range(count)]


def render_chart(points: list[PredictionPoint]) -> str:
    """Two polylines plus a train/test divider where the split changes."""
    if not points:
        raise EmptyInputError("no prediction points to plot")
    indices = [p.index for p in points]
    values = [p.actual for p in points] + [p.predicted for p in points]
    x_low, x_high = min(indices), max(indices)
    y_low, y_high = min(values), max(values)
    if y_low == y_high:
        y_low -= 1.0
        y_high += 1.0
    pad = 0.05 * (y_high - y_low)
    y_low -= pad
    y_high += pad

    plot_w = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM

    def x_at(index: float) -> float:
        if x_high == x_low:
            return _MARGIN_LEFT + plot_w / 2
        return _MARGIN_LEFT + (index - x_low) / (x_high - x_low) * plot_w

    def y_at(value: float) -> float:
        return _MARGIN_TOP + (y_high - value) / (y_high - y_low) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH / 2:.3f}" y="20" font-family="sans-serif" font-size="14" '
        'text-anchor="middle">actual vs predicted close</text>',
    ]

    axis_bottom = _HEIGHT - _MARGIN_BOTTOM
    for tick in _ticks(y_low, y_high):
        y = y_at(tick)
        parts.append(
            f'<line x1="{_MARGIN_LEFT}" y1="{y:.3f}" x2="{_WIDTH - _MARGIN_RIGHT}" '
            f'y2="{y:.3f}" stroke="#dddddd" stroke-dasharray="3,3"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_LEFT - 6}" y="{y + 4:.3f}" font-family="sans-serif" '
            f'font-size="10" text-anchor="end">{tick:.2f}</text>'
        )
    for tick in _ticks(x_low, x_high, count=min(6, max(2, len(set(indices))))):
        x = x_at(tick)
        parts.append(
            f'<text x="{x:.3f}" y="{axis_bottom + 16}" font-family="sans-serif" '
            f'font-size="10" text-anchor="middle">{tick:.0f}</text>'
        )
    parts.append(
        f'<line x1="{_MARGIN_LEFT}" y1="{axis_bottom}" x2="{_WIDTH - _MARGIN_RIGHT}" '
        f'y2="{axis_bottom}" stroke="black"/>'
    )
    parts.append(
        f'<line x1="{_MARGIN_LEFT}" y1="{_MARGIN_TOP}" x2="{_MARGIN_LEFT}" '
        f'y2="{axis_bottom}" stroke="black"/>'
    )

    train_points = [p for p in points if p.split == "train"]
    test_points = [p for p in points if p.split == "test"]
    if train_points and test_points:
        boundary = (x_at(max(p.index for p in train_points))
                    + x_at(min(p.index for p in test_points))) / 2
        parts.append(
            f'<line x1="{boundary:.3f}" y1="{_MARGIN_TOP}" x2="{boundary:.3f}" '
            f'y2="{axis_bottom}" stroke="#888888" stroke-dasharray="6,4"/>'
        )
        parts.append(
            f'<text x="{boundary - 5:.3f}" y="{_MARGIN_TOP + 12}" font-family="sans-serif" '
            f'font-size="10" text-anchor="end">train</text>'
        )
        parts.append(
            f'<text x="{boundary + 5:.3f}" y="{_MARGIN_TOP + 12}" font-family="sans-serif" '
            f'font-size="10" text-anchor="start">test</text>'
        )

    for color, getter in ((ACTUAL_COLOR, "actual"), (PREDICTED_COLOR, "predicted")):
        coords = [(x_at(p.index), y_at(getattr(p, getter))) for p in points]
        if len(coords) == 1:
            x, y = coords[0]
            parts.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3" fill="{color}"/>')
        else:
            joined = " ".join(f"{x:.3f},{y:.3f}" for x, y in coords)
            parts.append(
                f'<polyline points="{joined}" fill="none" stroke="{color}" stroke-width="1.5"/>'
            )

    legend_x = _MARGIN_LEFT + 10
    for offset, (color, label) in enumerate(
        ((ACTUAL_COLOR, "actual"), (PREDICTED_COLOR, "predicted"))
    ):
        y = _MARGIN_TOP + 10 + 16 * offset
        parts.append(
            f'<rect x="{legend_x}" y="{y - 8}" width="12" height="3" fill="{color}"/>'
        )
        parts.append(
            f'<text x="{legend_x + 18}" y="{y - 3}" font-family="sans-serif" '
            f'font-size="11">{label}</text>'
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
