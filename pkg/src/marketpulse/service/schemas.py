"""Pydantic request/response models for the service API.

Endpoints exchange whole artifacts as text (CSV, SVG, model files) so the
service stays stateless: clients own all file I/O.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str
    version: str


class ErrorDetail(BaseModel):
    category: str  # usage | data | divergence
    code: str
    message: str


class ErrorResponse(BaseModel):
    error: ErrorDetail


class BuildLexiconRequest(BaseModel):
    dictionary_csv: str
    threshold: float = Field(default=1e-6, ge=0.0)
    min_shared_prefix: int = Field(default=5, ge=1)
    columns: dict[str, str] | None = None


class BuildLexiconResponse(BaseModel):
    lexicon_csv: str
    positive_count: int
    negative_count: int
    raw_positive: int
    raw_negative: int
    threshold: float
    warnings: list[str]


class CountSentimentRequest(BaseModel):
    text: str
    lexicon_csv: str


class CountSentimentResponse(BaseModel):
    positive: int
    negative: int


class ScanSelectorsModel(BaseModel):
    news_block: str = "div.headlines"
    date_heading: str = "h3.date"
    older_text: str = "Older Headlines"
    article_body: str | None = None


class ScanNewsRequest(BaseModel):
    lexicon_csv: str
    start_url: str
    max_pages: int = Field(default=20, ge=1)
    # Recorded pages keyed by URL; omit to fetch live over HTTP.
    pages: dict[str, str] | None = None
    politeness_delay: float = Field(default=1.0, ge=0.0)
    selectors: ScanSelectorsModel = ScanSelectorsModel()


class ScanNewsResponse(BaseModel):
    sentiment_csv: str
    pages_visited: int
    articles_counted: int
    warnings: list[str]


class TrainingParams(BaseModel):
    max_epochs: int = Field(default=5000, ge=1)
    learning_rate: float = Field(default=0.05, gt=0.0)
    momentum: float = Field(default=0.9, ge=0.0, lt=1.0)
    target_mse: float = Field(default=1e-4, ge=0.0)


class AssembleRequest(BaseModel):
    quotes_csv: str
    sentiment_csv: str
    config: str = "row4"
    horizon: int = Field(default=0, ge=0)


class AssembleResponse(BaseModel):
    dataset_csv: str
    rows: int
    dropped_sentiment_days: int


class TrainRequest(BaseModel):
    quotes_csv: str
    sentiment_csv: str
    config: str = "row4"
    seed: int = 0
    horizon: int = Field(default=0, ge=0)
    training: TrainingParams = TrainingParams()


class TrainResponse(BaseModel):
    config: str
    architecture: str
    model_text: str
    epochs_run: int
    training_mse_pct: float
    relative_error_pct: float
    adjusted_r2_pct: float
    predictions_csv: str


class ExperimentRequest(BaseModel):
    quotes_csv: str
    sentiment_csv: str
    seed: int = 0
    horizon: int = Field(default=0, ge=0)
    training: TrainingParams = TrainingParams()


class ConfigArtifacts(BaseModel):
    name: str
    architecture: str
    inputs: str
    training_mse_pct: float
    relative_error_pct: float
    adjusted_r2_pct: float
    predictions_csv: str
    chart_svg: str


class ExperimentResponse(BaseModel):
    results_csv: str
    footnotes: list[str]
    configs: list[ConfigArtifacts]
    dropped_sentiment_days: int


class PlotRequest(BaseModel):
    predictions_csv: str


class PlotResponse(BaseModel):
    chart_svg: str
