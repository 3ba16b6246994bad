"""Command-line client for the service.

Every subcommand reads local files, calls the service API (an in-process
application by default, a remote server with ``--server``), and writes the
returned artifacts back to disk. Exit codes: 0 success, 1 usage error,
2 data error, 3 training divergence.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

import click
import httpx

from . import __version__

logger = logging.getLogger(__name__)

EXIT_CODES = {"usage": 1, "data": 2, "divergence": 3}


class ServiceError(Exception):
    """An error payload returned by the service."""

    def __init__(self, category: str, code: str, message: str) -> None:
        super().__init__(message)
        self.category = category
        self.code = code


class ServiceSession:
    """Thin HTTP wrapper; in-process transport unless a server is given."""

    def __init__(self, server: str | None = None) -> None:
        if server:
            self._client = httpx.Client(base_url=server, timeout=600.0)
        else:
            # Run the application in-process so the CLI works offline.
            import warnings

            with warnings.catch_warnings():
                # starlette suggests an httpx2 backend that the package
                # index does not carry; httpx works.
                warnings.filterwarnings(
                    "ignore", message="Using `httpx` with `starlette.testclient`"
                )
                from fastapi.testclient import TestClient

            from .service import create_app

            self._client = TestClient(create_app())

    def post(self, path: str, payload: dict) -> dict:
        response = self._client.post(path, json=payload)
        if response.status_code >= 400:
            try:
                detail = response.json()["error"]
                raise ServiceError(detail["category"], detail["code"], detail["message"])
            except (ValueError, KeyError):
                raise ServiceError("data", "http-error", response.text) from None
        return response.json()


@dataclass
class Settings:
    server: str | None
    seed: int
    threshold: float
    horizon: int
    out_dir: Path

    def session(self) -> ServiceSession:
        return ServiceSession(self.server)


def _read_text(path: str | Path) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="")


def _load_fixture_pages(fixtures_dir: Path) -> dict[str, str]:
    manifest = fixtures_dir / "manifest.csv"
    pages: dict[str, str] = {}
    with manifest.open(newline="") as handle:
        for row in csv.DictReader(handle):
            if row.get("url") and row.get("path"):
                pages[row["url"].strip()] = (fixtures_dir / row["path"].strip()).read_text(
                    encoding="utf-8"
                )
    return pages


@click.group()
@click.version_option(version=__version__, prog_name="marketpulse")
@click.option("--server", default=None, metavar="URL",
              help="Remote service URL; default runs the service in-process.")
@click.option("--seed", default=0, show_default=True, help="Seed for network init.")
@click.option("--threshold", default=1e-6, show_default=True,
              help="Frequency cut-off for lexicon construction.")
@click.option("--horizon", default=0, show_default=True,
              help="Forecast horizon in trading days (0 = same-day close).")
@click.option("--out-dir", default=".", show_default=True, type=click.Path(),
              help="Directory for written artifacts.")
@click.pass_context
def cli(ctx, server, seed, threshold, horizon, out_dir):
    """Build sentiment lexicons, scan news, and forecast closing prices."""
    ctx.obj = Settings(
        server=server,
        seed=seed,
        threshold=threshold,
        horizon=horizon,
        out_dir=Path(out_dir),
    )


@cli.command("build-lexicon")
@click.argument("dictionary", type=click.Path())
@click.option("--out", default=None, type=click.Path(), help="Lexicon CSV path.")
@click.option("--min-shared-prefix", default=5, show_default=True,
              help="Minimum shared prefix length for root collapsing.")
@click.option("--column", "columns", multiple=True, metavar="LOGICAL=NAME",
              help="Override a dictionary column name (e.g. word=Token).")
@click.pass_obj
def build_lexicon_cmd(settings: Settings, dictionary, out, min_shared_prefix, columns):
    """Build a sentiment lexicon from a master dictionary CSV."""
    overrides = {}
    for item in columns:
        logical, _, name = item.partition("=")
        if not name:
            raise click.UsageError(f"--column expects LOGICAL=NAME, got {item!r}")
        overrides[logical.strip()] = name.strip()
    payload = {
        "dictionary_csv": _read_text(dictionary),
        "threshold": settings.threshold,
        "min_shared_prefix": min_shared_prefix,
        "columns": overrides or None,
    }
    data = settings.session().post("/lexicon/build", payload)
    out_path = Path(out) if out else settings.out_dir / "lexicon.csv"
    _write_text(out_path, data["lexicon_csv"])
    for warning in data["warnings"]:
        click.echo(f"warning: {warning}", err=True)
    click.echo(
        f"positive prefixes: {data['positive_count']} (from {data['raw_positive']} raw words)"
    )
    click.echo(
        f"negative prefixes: {data['negative_count']} (from {data['raw_negative']} raw words)"
    )
    click.echo(f"threshold: {data['threshold']:g}")
    click.echo(f"wrote {out_path}")


@cli.command("scan-news")
@click.option("--lexicon", required=True, type=click.Path(), help="Lexicon CSV path.")
@click.option("--start-url", required=True, metavar="URL", help="First index page.")
@click.option("--max-pages", default=20, show_default=True)
@click.option("--fixtures", default=None, type=click.Path(),
              help="Recorded pages directory (manifest.csv maps URL to file); "
                   "omit to fetch live.")
@click.option("--out", default=None, type=click.Path(), help="Sentiment CSV path.")
@click.option("--news-block", default="div.headlines", show_default=True)
@click.option("--date-heading", default="h3.date", show_default=True)
@click.option("--older-text", default="Older Headlines", show_default=True)
@click.option("--article-body", default=None)
@click.pass_obj
def scan_news_cmd(settings: Settings, lexicon, start_url, max_pages, fixtures, out,
                  news_block, date_heading, older_text, article_body):
    """Crawl a news index and count lexicon matches per day."""
    payload = {
        "lexicon_csv": _read_text(lexicon),
        "start_url": start_url,
        "max_pages": max_pages,
        "pages": _load_fixture_pages(Path(fixtures)) if fixtures else None,
        "selectors": {
            "news_block": news_block,
            "date_heading": date_heading,
            "older_text": older_text,
            "article_body": article_body,
        },
    }
    data = settings.session().post("/news/scan", payload)
    out_path = Path(out) if out else settings.out_dir / "sentiment.csv"
    _write_text(out_path, data["sentiment_csv"])
    for warning in data["warnings"]:
        click.echo(f"warning: {warning}", err=True)
    click.echo(
        f"visited {data['pages_visited']} page(s), counted {data['articles_counted']} article(s)"
    )
    click.echo(f"wrote {out_path}")


@cli.command("assemble")
@click.option("--quotes", required=True, type=click.Path(), help="Quote history CSV.")
@click.option("--sentiment", required=True, type=click.Path(), help="Daily sentiment CSV.")
@click.option("--config", default="row4", show_default=True,
              help="Configuration name (row1..row8).")
@click.option("--out", default=None, type=click.Path(), help="Dataset CSV path.")
@click.pass_obj
def assemble_cmd(settings: Settings, quotes, sentiment, config, out):
    """Join quotes with sentiment and export one config's feature table."""
    payload = {
        "quotes_csv": _read_text(quotes),
        "sentiment_csv": _read_text(sentiment),
        "config": config,
        "horizon": settings.horizon,
    }
    data = settings.session().post("/dataset/assemble", payload)
    out_path = Path(out) if out else settings.out_dir / f"dataset_{config}.csv"
    _write_text(out_path, data["dataset_csv"])
    if data["dropped_sentiment_days"]:
        click.echo(
            f"warning: {data['dropped_sentiment_days']} sentiment day(s) without "
            "a trading day dropped",
            err=True,
        )
    click.echo(f"{data['rows']} feature rows")
    click.echo(f"wrote {out_path}")


def _training_options(fn):
    fn = click.option("--epochs", default=5000, show_default=True,
                      help="Maximum training epochs.")(fn)
    fn = click.option("--learning-rate", default=0.05, show_default=True)(fn)
    fn = click.option("--momentum", default=0.9, show_default=True)(fn)
    fn = click.option("--target-mse", default=1e-4, show_default=True,
                      help="Early-stop threshold on normalized training MSE.")(fn)
    return fn


@cli.command("train")
@click.option("--quotes", required=True, type=click.Path())
@click.option("--sentiment", required=True, type=click.Path())
@click.option("--config", default="row4", show_default=True)
@click.option("--model-out", default=None, type=click.Path(), help="Model file path.")
@click.option("--predictions-out", default=None, type=click.Path(),
              help="Optional prediction series CSV path.")
@_training_options
@click.pass_obj
def train_cmd(settings: Settings, quotes, sentiment, config, model_out, predictions_out,
              epochs, learning_rate, momentum, target_mse):
    """Train one configuration and save the model."""
    payload = {
        "quotes_csv": _read_text(quotes),
        "sentiment_csv": _read_text(sentiment),
        "config": config,
        "seed": settings.seed,
        "horizon": settings.horizon,
        "training": {
            "max_epochs": epochs,
            "learning_rate": learning_rate,
            "momentum": momentum,
            "target_mse": target_mse,
        },
    }
    data = settings.session().post("/forecast/train", payload)
    model_path = Path(model_out) if model_out else settings.out_dir / f"model_{config}.txt"
    _write_text(model_path, data["model_text"])
    if predictions_out:
        _write_text(Path(predictions_out), data["predictions_csv"])
    click.echo(f"{data['config']} ({data['architecture']}), {data['epochs_run']} epoch(s)")
    click.echo(f"training mse: {data['training_mse_pct']:.4f} %")
    click.echo(f"relative error: {data['relative_error_pct']:.4f} %")
    click.echo(f"adjusted R^2: {data['adjusted_r2_pct']:.4f} %")
    click.echo(f"wrote {model_path}")


@cli.command("experiment")
@click.option("--quotes", required=True, type=click.Path())
@click.option("--sentiment", required=True, type=click.Path())
@_training_options
@click.pass_obj
def experiment_cmd(settings: Settings, quotes, sentiment,
                   epochs, learning_rate, momentum, target_mse):
    """Run all eight configurations and write results, series and charts."""
    payload = {
        "quotes_csv": _read_text(quotes),
        "sentiment_csv": _read_text(sentiment),
        "seed": settings.seed,
        "horizon": settings.horizon,
        "training": {
            "max_epochs": epochs,
            "learning_rate": learning_rate,
            "momentum": momentum,
            "target_mse": target_mse,
        },
    }
    data = settings.session().post("/forecast/experiment", payload)
    out_dir = settings.out_dir
    _write_text(out_dir / "results.csv", data["results_csv"])
    for config in data["configs"]:
        _write_text(out_dir / f"predictions_{config['name']}.csv", config["predictions_csv"])
        _write_text(out_dir / f"chart_{config['name']}.svg", config["chart_svg"])
    if data["dropped_sentiment_days"]:
        click.echo(
            f"warning: {data['dropped_sentiment_days']} sentiment day(s) without "
            "a trading day dropped",
            err=True,
        )
    header = f"{'config':<7}{'arch':<8}{'inputs':<18}{'mse %':>10}{'rel err %':>11}{'adj R2 %':>10}"
    click.echo(header)
    for config in data["configs"]:
        click.echo(
            f"{config['name']:<7}{config['architecture']:<8}{config['inputs']:<18}"
            f"{config['training_mse_pct']:>10.4f}{config['relative_error_pct']:>11.4f}"
            f"{config['adjusted_r2_pct']:>10.4f}"
        )
    for note in data["footnotes"]:
        click.echo(f"note: {note}")
    click.echo(f"wrote results.csv, 8 prediction CSVs and 8 charts to {out_dir}")


@cli.command("plot")
@click.option("--predictions", required=True, type=click.Path(),
              help="Prediction series CSV (index,date,actual,predicted,split).")
@click.option("--out", default=None, type=click.Path(), help="SVG path.")
@click.pass_obj
def plot_cmd(settings: Settings, predictions, out):
    """Render an actual-vs-predicted SVG chart from a prediction series."""
    data = settings.session().post(
        "/charts/render", {"predictions_csv": _read_text(predictions)}
    )
    out_path = Path(out) if out else settings.out_dir / "chart.svg"
    _write_text(out_path, data["chart_svg"])
    click.echo(f"wrote {out_path}")


@cli.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve_cmd(host, port):
    """Run the service with uvicorn."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show()
        return EXIT_CODES["usage"]
    except click.ClickException as exc:
        exc.show()
        return EXIT_CODES["usage"]
    except ServiceError as exc:
        click.echo(f"error ({exc.category}/{exc.code}): {exc}", err=True)
        return EXIT_CODES.get(exc.category, 2)
    except OSError as exc:
        click.echo(f"error (data): {exc}", err=True)
        return EXIT_CODES["data"]


if __name__ == "__main__":
    raise SystemExit(main())
