"""Shared fixtures: the 12-row master dictionary and the recorded news site."""

from __future__ import annotations

from pathlib import Path

import pytest

from marketpulse.lexicon import build_lexicon, parse_master_dictionary

FIXTURES = Path(__file__).parent / "fixtures"

# 12 rows: 6 negative and 3 positive above the 1e-6 cut-off, 3 below
# (ABERRATION sits exactly on the boundary and must be dropped by strict >).
MASTER_DICTIONARY_CSV = """\
Word,Sequence Number,Word Count,Word Proportion,Average Proportion,Std Dev,Doc Count,Negative,Positive
ABANDON,1,5000,1e-07,0,1.1e-08,1200,2009,0
ABERRATION,2,4000,1e-06,0,9e-08,900,2009,0
ACHIEVE,3,30000,9e-07,0,2e-07,15000,0,2009
BANKRUPT,4,60000,5e-06,0,4e-07,21000,2009,0
BANKRUPTCIES,5,22000,2e-06,0,2e-07,9000,2009,0
BANKRUPTCY,6,41000,4e-06,0,3e-07,15000,2009,0
GAIN,7,52000,5e-06,0,5e-07,30000,0,2009
LOSS,8,90000,9e-06,0,8e-07,42000,2009,0
LOSSES,9,71000,7e-06,0,6e-07,35000,2009,0
PROFIT,10,63000,6e-06,0,5e-07,31000,0,2009
PROFITABLE,11,30000,3e-06,0,3e-07,18000,0,2009
RECESSION,12,80000,8e-06,0,7e-07,26000,2009,0
"""

# Hand-derived expectation for the fixture above: sorted negatives collapse
# as bankrupt+bankruptcies+bankruptcy -> "bankrupt", loss+losses -> "loss",
# recession alone; positives as gain alone, profit+profitable -> "profit".
EXPECTED_NEGATIVE_PREFIXES = frozenset({"bankrupt", "loss", "recession"})
EXPECTED_POSITIVE_PREFIXES = frozenset({"gain", "profit"})

NEWSITE_START_URL = "http://fixture.test/news/index.html"


@pytest.fixture(scope="session")
def master_dictionary_csv() -> str:
    return MASTER_DICTIONARY_CSV


@pytest.fixture(scope="session")
def fixture_lexicon():
    parsed = parse_master_dictionary(MASTER_DICTIONARY_CSV)
    return build_lexicon(list(parsed.entries))


@pytest.fixture(scope="session")
def newsite_dir() -> Path:
    return FIXTURES / "newsite"


@pytest.fixture(scope="session")
def expected_sentiment_csv(newsite_dir: Path) -> str:
    return (newsite_dir / "expected_sentiment.csv").read_text()
