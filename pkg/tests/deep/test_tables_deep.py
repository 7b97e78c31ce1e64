from __future__ import annotations

import pytest

from ffsturm.tables import cmd_compare_bounds, cmd_table_v2

pytestmark = pytest.mark.deep


T_ROWS = {
    2: {
        1: [5, 5, 5, 5, 5, 5, 5],
        2: [None, 11, 11, 10, 9, 9, 8],
        3: [None, None, 33, 30, 27, 23, 23],
    },
    3: {
        1: [12, 10, 10, 10, 10],
        2: [None, 64, 55, 48, 43],
    },
}

B_TRUE = {2: [1, 3, 5, 6, 8, 9, 10, 11], 3: [1, 3, 4, 6, 8, 9, 10, 11]}
B_PRIME = {2: [2, 5, 6, 7, 8, 9, 10, 13], 3: [2, 3, 6, 7, 8, 9, 10, 11]}


@pytest.mark.parametrize("q", [2, 3])
def test_t_grid(q: int) -> None:
    rows = T_ROWS[q]
    n_max = 3 + len(next(iter(rows.values())))
    table = cmd_table_v2(q, sorted(rows), n_max, jobs=4)
    for m, expected in rows.items():
        got = [e.value for e in table.rows[m][4:]]
        assert got == expected, f"q={q} m={m}"


@pytest.mark.parametrize("q", [2, 3])
def test_bound_comparison(q: int) -> None:
    rows = cmd_compare_bounds(q, 3, 10, jobs=4)
    assert [r.b_true for r in rows] == B_TRUE[q]
    assert [r.b_prime for r in rows] == B_PRIME[q]
