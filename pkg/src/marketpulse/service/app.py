"""FastAPI application wrapping the core pipeline."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .. import __version__
from ..charts import predictions_from_csv, predictions_to_csv, render_chart
from ..dataset import build_features, join, read_quotes_csv
from ..errors import MarketPulseError
from ..experiment import (
    REPORT_FOOTNOTES,
    dataset_debug_csv,
    run_experiment,
    run_single,
    standard_config,
)
from ..ingest import (
    LiveFetcher,
    MappingFetcher,
    ScanSelectors,
    count_sentiment,
    crawl,
    read_sentiment_csv,
    write_sentiment_csv,
)
from ..lexicon import build_lexicon, lexicon_from_csv, lexicon_to_csv, parse_master_dictionary
from ..metrics import results_to_csv
from ..neuralnet import TrainConfig, save_model
from . import schemas

_STATUS_BY_CATEGORY = {"usage": 400, "data": 422, "divergence": 422}


def _train_config(params: schemas.TrainingParams) -> TrainConfig:
    return TrainConfig(
        max_epochs=params.max_epochs,
        learning_rate=params.learning_rate,
        momentum=params.momentum,
        target_mse=params.target_mse,
    )


def _selectors(model: schemas.ScanSelectorsModel) -> ScanSelectors:
    return ScanSelectors(
        news_block=model.news_block,
        date_heading=model.date_heading,
        older_text=model.older_text,
        article_body=model.article_body,
    )


def create_app() -> FastAPI:
    app = FastAPI(title="marketpulse", version=__version__)

    @app.exception_handler(MarketPulseError)
    async def pipeline_error_handler(request: Request, exc: MarketPulseError):
        return JSONResponse(
            status_code=_STATUS_BY_CATEGORY.get(exc.category, 422),
            content={
                "error": {"category": exc.category, "code": exc.code, "message": str(exc)}
            },
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={
                "error": {
                    "category": "usage",
                    "code": "invalid-request",
                    "message": str(exc.errors()),
                }
            },
        )

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400,
            content={
                "error": {"category": "usage", "code": "invalid-value", "message": str(exc)}
            },
        )

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/lexicon/build", response_model=schemas.BuildLexiconResponse)
    def lexicon_build(req: schemas.BuildLexiconRequest) -> schemas.BuildLexiconResponse:
        parsed = parse_master_dictionary(req.dictionary_csv, columns=req.columns)
        lexicon = build_lexicon(
            list(parsed.entries),
            threshold=req.threshold,
            min_shared_prefix=req.min_shared_prefix,
        )
        raw_positive, raw_negative = lexicon.source_counts or (0, 0)
        return schemas.BuildLexiconResponse(
            lexicon_csv=lexicon_to_csv(lexicon),
            positive_count=len(lexicon.positive_prefixes),
            negative_count=len(lexicon.negative_prefixes),
            raw_positive=raw_positive,
            raw_negative=raw_negative,
            threshold=req.threshold,
            warnings=list(parsed.warnings),
        )

    @app.post("/sentiment/count", response_model=schemas.CountSentimentResponse)
    def sentiment_count(req: schemas.CountSentimentRequest) -> schemas.CountSentimentResponse:
        lexicon = lexicon_from_csv(req.lexicon_csv)
        count = count_sentiment(req.text, lexicon)
        return schemas.CountSentimentResponse(positive=count.positive, negative=count.negative)

    @app.post("/news/scan", response_model=schemas.ScanNewsResponse)
    def news_scan(req: schemas.ScanNewsRequest) -> schemas.ScanNewsResponse:
        lexicon = lexicon_from_csv(req.lexicon_csv)
        if req.pages is not None:
            fetcher = MappingFetcher(req.pages)
        else:
            fetcher = LiveFetcher(delay_seconds=req.politeness_delay)
        result = crawl(
            fetcher,
            req.start_url,
            lexicon,
            max_pages=req.max_pages,
            selectors=_selectors(req.selectors),
        )
        return schemas.ScanNewsResponse(
            sentiment_csv=write_sentiment_csv(list(result.days)),
            pages_visited=result.pages_visited,
            articles_counted=result.articles_counted,
            warnings=list(result.warnings),
        )

    @app.post("/dataset/assemble", response_model=schemas.AssembleResponse)
    def dataset_assemble(req: schemas.AssembleRequest) -> schemas.AssembleResponse:
        quotes = read_quotes_csv(req.quotes_csv)
        sentiments = read_sentiment_csv(req.sentiment_csv)
        joined = join(quotes, sentiments)
        ds = build_features(joined.rows, standard_config(req.config), horizon=req.horizon)
        return schemas.AssembleResponse(
            dataset_csv=dataset_debug_csv(ds),
            rows=len(ds.dates),
            dropped_sentiment_days=len(joined.dropped),
        )

    @app.post("/forecast/train", response_model=schemas.TrainResponse)
    def forecast_train(req: schemas.TrainRequest) -> schemas.TrainResponse:
        quotes = read_quotes_csv(req.quotes_csv)
        sentiments = read_sentiment_csv(req.sentiment_csv)
        joined = join(quotes, sentiments)
        config = standard_config(req.config)
        run = run_single(
            joined.rows,
            config,
            seed=req.seed,
            horizon=req.horizon,
            train_config=_train_config(req.training),
        )
        return schemas.TrainResponse(
            config=config.name,
            architecture=config.architecture,
            model_text=save_model(run.model),
            epochs_run=len(run.history),
            training_mse_pct=run.result.training_mse_pct,
            relative_error_pct=run.result.relative_error_pct,
            adjusted_r2_pct=run.result.adjusted_r2_pct,
            predictions_csv=predictions_to_csv(list(run.points)),
        )

    @app.post("/forecast/experiment", response_model=schemas.ExperimentResponse)
    def forecast_experiment(req: schemas.ExperimentRequest) -> schemas.ExperimentResponse:
        quotes = read_quotes_csv(req.quotes_csv)
        sentiments = read_sentiment_csv(req.sentiment_csv)
        run = run_experiment(
            quotes,
            sentiments,
            seed=req.seed,
            horizon=req.horizon,
            train_config=_train_config(req.training),
        )
        configs = [
            schemas.ConfigArtifacts(
                name=single.config.name,
                architecture=single.config.architecture,
                inputs=",".join(single.config.inputs).replace("p_over_n", "p/n"),
                training_mse_pct=single.result.training_mse_pct,
                relative_error_pct=single.result.relative_error_pct,
                adjusted_r2_pct=single.result.adjusted_r2_pct,
                predictions_csv=predictions_to_csv(list(single.points)),
                chart_svg=render_chart(list(single.points)),
            )
            for single in run.runs
        ]
        return schemas.ExperimentResponse(
            results_csv=results_to_csv(run.results),
            footnotes=list(REPORT_FOOTNOTES),
            configs=configs,
            dropped_sentiment_days=run.dropped_sentiment_days,
        )

    @app.post("/charts/render", response_model=schemas.PlotResponse)
    def charts_render(req: schemas.PlotRequest) -> schemas.PlotResponse:
        points = predictions_from_csv(req.predictions_csv)
        return schemas.PlotResponse(chart_svg=render_chart(points))

    return app
