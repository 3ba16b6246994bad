"""Previously reported results for the eight standard configurations.

Shipped so experiment reports can show a side-by-side "paper-reported"
column next to fresh runs. Values are reference points only: they came
from a news corpus that is not distributed with this package, so runs on
other data are not expected to match them.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ReferenceRow:
    row: int
    inputs: str
    architecture: str
    training_mse_pct: float
    relative_error_pct: float
    adjusted_r2_pct: float


REFERENCE_ROWS: tuple[ReferenceRow, ...] = (
    ReferenceRow(1, "p,n", "2-1", 4.9047, 19.28, 97.188),
    ReferenceRow(2, "p,n,c1", "3-1", 0.2138, 1.04, 99.497),
    ReferenceRow(3, "p,n,c1,c2", "4-2-1", 0.2128, 1.35, 99.956),
    ReferenceRow(4, "p,n,c1,c2,c3", "5-3-1", 0.1825, 0.55, 99.955),
    ReferenceRow(5, "p,n,c1,c2,c3,d", "6-3-1", 0.1639, 0.88, 99.959),
    ReferenceRow(6, "p,n,c1,c2,c3,d,v", "7-3-1", 0.1236, 3.92, 99.802),
    ReferenceRow(7, "p/n,c1,c2,d", "4-2-1", 0.1715, 2.10, 99.925),
    ReferenceRow(8, "c1,c2,c3,d", "4-3-1", 0.1929, 4.28, 99.710),
)


def reference_for_row(row: int | None) -> ReferenceRow | None:
    if row is None:
        return None
    for ref in REFERENCE_ROWS:
        if ref.row == row:
            return ref
    return None
