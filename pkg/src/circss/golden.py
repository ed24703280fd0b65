"""Reference height tables for small moduli, used as regression anchors.

Each row is (ascending class representative, height, triangle-free). The d=2
tables for N=7 and N=8 are complete class lists; the d=3 tables list one row
per connection-*set* class, so tuple-class enumeration legitimately produces
extra triangle-free rows that are set-equivalent to a listed one (the table
checker verifies exactly that).
"""
from __future__ import annotations

Row = tuple[tuple[int, ...], int, bool]

REFERENCE_TABLES: dict[tuple[int, int], tuple[Row, ...]] = {
    (2, 7): (
        ((1, 2), 3, True),
        ((1, 3), 4, False),
        ((1, 4), 3, True),
        ((1, 5), 4, False),
        ((1, 6), 7, False),
    ),
    (2, 8): (
        ((1, 2), 3, True),
        ((1, 3), 4, True),
        ((1, 4), 5, False),
        ((1, 5), 6, True),
        ((1, 6), 5, False),
        ((1, 7), 8, False),
        ((2, 3), 5, False),
        ((2, 4), 6, False),
        ((2, 5), 3, True),
        ((2, 6), 8, False),
        ((4, 5), 5, False),
        ((4, 6), 6, False),
    ),
    (3, 10): (
        ((1, 2, 3), 6, True),
        ((1, 4, 7), 6, True),
    ),
    (3, 11): (
        ((1, 2, 3), 6, True),
        ((1, 2, 4), 7, True),
        ((1, 2, 6), 7, True),
        ((1, 3, 6), 7, True),
        ((1, 4, 8), 6, True),
        ((1, 6, 7), 6, True),
    ),
    (3, 12): (
        ((1, 2, 3), 6, True),
        ((1, 2, 7), 10, True),
        ((1, 3, 5), 9, True),
        ((1, 3, 7), 11, True),
        ((1, 5, 9), 15, True),
        ((1, 7, 9), 11, True),
    ),
}

#: Tables whose reference rows are the complete tuple-class list; the generated
#: table must match these row for row. The d=3 tables are reference-complete
#: only up to set equivalence.
COMPLETE_TABLE_KEYS = frozenset({(2, 7), (2, 8)})
