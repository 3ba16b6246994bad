"""News-sentiment lexicon pipeline and neural close-price forecasting.

The package builds a two-sided financial sentiment lexicon from a master
word dictionary, counts lexicon matches in company news, joins daily counts
with quote history, and trains small feedforward networks to forecast the
daily closing price. A FastAPI service wraps the core; the CLI is a thin
client of that service.
"""

__version__ = "0.1.0"
