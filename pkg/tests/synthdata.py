"""Synthetic market series for convergence and comparison oracles.

Two generators: one where the close is an affine function of its own lags
(so a lag-only network must converge), and one where a latent sentiment
signal moves the close and is exposed only through the daily positive and
negative word counts (so sentiment-aware configurations hold a real edge).
"""

from __future__ import annotations

import datetime as dt

import numpy as np

from marketpulse.dataset import QuoteBar
from marketpulse.ingest import DailySentiment

START_DATE = dt.date(2015, 3, 2)


def _dates(n: int) -> list[dt.date]:
    """n consecutive weekdays."""
    dates = []
    current = START_DATE
    while len(dates) < n:
        if current.weekday() < 5:
            dates.append(current)
        current += dt.timedelta(days=1)
    return dates


def affine_lag_series(
    n: int = 200, seed: int = 0, noise: float = 0.15
) -> tuple[list[QuoteBar], list[DailySentiment]]:
    """Close follows an affine function of its three lags plus small noise."""
    rng = np.random.default_rng(seed)
    closes = [50.0, 51.0, 50.5]
    while len(closes) < n:
        nxt = (
            8.0
            + 0.55 * closes[-1]
            + 0.25 * closes[-2]
            + 0.12 * closes[-3]
            + rng.normal(0.0, noise)
        )
        closes.append(nxt)
    dates = _dates(n)
    quotes = [
        QuoteBar(date=dates[i], close=closes[i], volume=int(rng.integers(100_000, 500_000)))
        for i in range(n)
    ]
    sentiments = [
        DailySentiment(
            date=dates[i],
            positive=int(rng.integers(0, 12)),
            negative=int(rng.integers(0, 12)),
            article_count=int(rng.integers(1, 5)),
        )
        for i in range(n)
    ]
    return quotes, sentiments


def sentiment_driven_series(
    n: int = 200, seed: int = 0
) -> tuple[list[QuoteBar], list[DailySentiment]]:
    """A latent sentiment signal moves the close and is visible in p and n.

    The same-day sentiment shock is unpredictable from lagged closes alone,
    so configurations that read the word counts can explain variance that
    lag-only configurations cannot.
    """
    rng = np.random.default_rng(seed)
    closes = [100.0]
    latent = 0.0
    positives = []
    negatives = []
    for _ in range(n):
        latent = 0.7 * latent + rng.normal(0.0, 0.5)
        nxt = 40.0 + 0.6 * closes[-1] + 2.2 * latent + rng.normal(0.0, 0.25)
        closes.append(nxt)
        positives.append(max(0, round(12.0 + 6.0 * latent + rng.normal(0.0, 0.5))))
        negatives.append(max(0, round(12.0 - 6.0 * latent + rng.normal(0.0, 0.5))))
    closes = closes[1:]
    dates = _dates(n)
    quotes = [
        QuoteBar(date=dates[i], close=closes[i], volume=int(rng.integers(100_000, 500_000)))
        for i in range(n)
    ]
    sentiments = [
        DailySentiment(
            date=dates[i],
            positive=positives[i],
            negative=negatives[i],
            article_count=int(rng.integers(1, 6)),
        )
        for i in range(n)
    ]
    return quotes, sentiments


def quotes_to_csv(quotes: list[QuoteBar]) -> str:
    """Render bars in the accepted quote-history layout."""
    lines = ["Date,Open,High,Low,Close,Volume,Adj Close"]
    for bar in quotes:
        close = f"{bar.close:.4f}"
        lines.append(
            f"{bar.date.isoformat()},{close},{close},{close},{close},{bar.volume},{close}"
        )
    return "\n".join(lines) + "\n"
