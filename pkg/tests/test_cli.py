"""CLI subcommands end-to-end against the in-process service."""

from __future__ import annotations

from pathlib import Path

import pytest

from marketpulse.cli import main
from marketpulse.ingest import write_sentiment_csv

from conftest import MASTER_DICTIONARY_CSV, NEWSITE_START_URL
from synthdata import quotes_to_csv, sentiment_driven_series

FAST = ["--epochs", "300"]


@pytest.fixture()
def dictionary_file(tmp_path) -> Path:
    path = tmp_path / "dictionary.csv"
    path.write_text(MASTER_DICTIONARY_CSV)
    return path


@pytest.fixture()
def lexicon_file(tmp_path, dictionary_file) -> Path:
    out = tmp_path / "lexicon.csv"
    assert main(["build-lexicon", str(dictionary_file), "--out", str(out)]) == 0
    return out


@pytest.fixture(scope="module")
def market_files(tmp_path_factory) -> tuple[Path, Path]:
    base = tmp_path_factory.mktemp("market")
    quotes, sentiments = sentiment_driven_series(200, seed=0)
    quotes_path = base / "quotes.csv"
    quotes_path.write_text(quotes_to_csv(quotes))
    sentiment_path = base / "sentiment.csv"
    sentiment_path.write_text(write_sentiment_csv(sentiments))
    return quotes_path, sentiment_path


class TestBuildLexicon:
    def test_writes_lexicon_and_prints_counts(self, tmp_path, dictionary_file, capsys):
        out = tmp_path / "lex.csv"
        code = main(["build-lexicon", str(dictionary_file), "--out", str(out)])
        assert code == 0
        printed = capsys.readouterr().out
        assert "positive prefixes: 2" in printed
        assert "negative prefixes: 3" in printed
        body = out.read_text()
        assert body.startswith("prefix,polarity\n")
        assert "bankrupt,negative" in body

    def test_missing_file_is_data_error(self, tmp_path, capsys):
        code = main(["build-lexicon", str(tmp_path / "absent.csv")])
        assert code == 2
        assert "error" in capsys.readouterr().err.lower()

    def test_all_below_threshold_is_data_error(self, dictionary_file, tmp_path):
        code = main(
            ["--threshold", "0.5", "build-lexicon", str(dictionary_file),
             "--out", str(tmp_path / "x.csv")]
        )
        assert code == 2

    def test_unknown_subcommand_is_usage_error(self):
        assert main(["frobnicate"]) == 1


class TestScanNews:
    def test_fixture_crawl_matches_golden(self, tmp_path, lexicon_file, newsite_dir,
                                          expected_sentiment_csv):
        out = tmp_path / "sentiment.csv"
        code = main([
            "scan-news",
            "--lexicon", str(lexicon_file),
            "--start-url", NEWSITE_START_URL,
            "--fixtures", str(newsite_dir),
            "--out", str(out),
        ])
        assert code == 0
        assert out.read_text() == expected_sentiment_csv

    def test_unreachable_live_url_is_no_data(self, tmp_path, lexicon_file):
        # No --fixtures means live HTTP; port 1 on localhost refuses instantly.
        code = main([
            "scan-news",
            "--lexicon", str(lexicon_file),
            "--start-url", "http://127.0.0.1:1/news.html",
            "--max-pages", "1",
            "--out", str(tmp_path / "out.csv"),
        ])
        assert code == 2

    def test_empty_fixture_set_is_no_data(self, tmp_path, lexicon_file):
        fixtures = tmp_path / "empty"
        fixtures.mkdir()
        (fixtures / "manifest.csv").write_text("url,path\n")
        code = main([
            "scan-news",
            "--lexicon", str(lexicon_file),
            "--start-url", "http://nowhere.test/",
            "--fixtures", str(fixtures),
            "--out", str(tmp_path / "out.csv"),
        ])
        assert code == 2


class TestAssembleAndTrain:
    def test_assemble_writes_dataset(self, tmp_path, market_files, capsys):
        quotes, sentiment = market_files
        out = tmp_path / "ds.csv"
        code = main([
            "assemble", "--quotes", str(quotes), "--sentiment", str(sentiment),
            "--config", "row4", "--out", str(out),
        ])
        assert code == 0
        assert out.read_text().startswith("date,target,p,n,c1,c2,c3\n")
        assert "197 feature rows" in capsys.readouterr().out

    def test_train_writes_model(self, tmp_path, market_files, capsys):
        quotes, sentiment = market_files
        model = tmp_path / "model.txt"
        code = main([
            "--seed", "5", "train",
            "--quotes", str(quotes), "--sentiment", str(sentiment),
            "--config", "row8", "--model-out", str(model), *FAST,
        ])
        assert code == 0
        assert model.read_text().startswith("marketpulse-mlp v1\n")
        assert "adjusted R^2" in capsys.readouterr().out

    def test_divergent_training_exit_code(self, tmp_path, market_files):
        quotes, sentiment = market_files
        code = main([
            "train", "--quotes", str(quotes), "--sentiment", str(sentiment),
            "--config", "row8", "--model-out", str(tmp_path / "m.txt"),
            "--epochs", "400", "--learning-rate", "1000",
        ])
        assert code == 3


class TestExperiment:
    EXPECTED_FILES = ["results.csv"] + [
        name.format(i) for i in range(1, 9)
        for name in ("predictions_row{}.csv", "chart_row{}.svg")
    ]

    def run(self, market_files, out_dir: Path, seed="7") -> int:
        quotes, sentiment = market_files
        return main([
            "--seed", seed, "--out-dir", str(out_dir), "experiment",
            "--quotes", str(quotes), "--sentiment", str(sentiment), *FAST,
        ])

    def test_writes_all_artifacts(self, tmp_path, market_files, capsys):
        out_dir = tmp_path / "run"
        assert self.run(market_files, out_dir) == 0
        for name in self.EXPECTED_FILES:
            assert (out_dir / name).is_file(), name
        printed = capsys.readouterr().out
        assert "row4" in printed and "note:" in printed

    def test_repeat_run_is_byte_identical(self, tmp_path, market_files):
        first = tmp_path / "first"
        second = tmp_path / "second"
        assert self.run(market_files, first) == 0
        assert self.run(market_files, second) == 0
        for name in self.EXPECTED_FILES:
            assert (first / name).read_bytes() == (second / name).read_bytes(), name

    def test_insufficient_data_exit_code(self, tmp_path):
        quotes, sentiments = sentiment_driven_series(100, seed=0)
        quotes_path = tmp_path / "q.csv"
        quotes_path.write_text(quotes_to_csv(quotes))
        sentiment_path = tmp_path / "s.csv"
        sentiment_path.write_text(write_sentiment_csv(sentiments))
        code = main([
            "--out-dir", str(tmp_path), "experiment",
            "--quotes", str(quotes_path), "--sentiment", str(sentiment_path),
        ])
        assert code == 2


class TestPlot:
    def test_golden_chart(self, tmp_path, capsys):
        fixtures = Path(__file__).parent / "fixtures"
        out = tmp_path / "chart.svg"
        code = main([
            "plot", "--predictions", str(fixtures / "golden_predictions.csv"),
            "--out", str(out),
        ])
        assert code == 0
        assert out.read_text() == (fixtures / "golden_chart.svg").read_text()

    def test_malformed_csv_is_data_error(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("index,date\n1,2016-01-04\n")
        assert main(["plot", "--predictions", str(bad), "--out", str(tmp_path / "c.svg")]) == 2
