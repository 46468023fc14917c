"""Colorings that forbid rainbow cycles."""

from __future__ import annotations

from typing import Optional

from .latin import LatinRectangle, direct_product, validate

L2 = LatinRectangle(((0, 1), (1, 0)))

# A 3 x 7 rectangle with no rainbow 6-cycle: the first witness of the
# normalised backtracking search (first row 0..6, first column ascending).
# tests/test_constructions.py re-derives it.
K37 = LatinRectangle(
    (
        (0, 1, 2, 3, 4, 5, 6),
        (1, 0, 3, 2, 5, 6, 4),
        (2, 3, 0, 1, 6, 4, 5),
    )
)


class KNotOdd(ValueError):
    pass


class MOutOfRange(ValueError):
    pass


def cyclic_square(order: int) -> LatinRectangle:
    return LatinRectangle(tuple(tuple((i + j) % order for j in range(order)) for i in range(order)))


def restrict_rows(rect: LatinRectangle, m: int) -> LatinRectangle:
    if not 1 <= m <= rect.rows:
        raise MOutOfRange(f"cannot keep {m} of {rect.rows} rows")
    return LatinRectangle(rect.grid[:m])


def theorem22_coloring(k: int, m: int, square: Optional[LatinRectangle] = None) -> LatinRectangle:
    """Top m rows of L2 x M, a 2k-coloring of K_{m,2k} with no rainbow 2k-cycle (k odd).

    ``square`` is M, any latin square of order k; the cyclic square by default.
    """
    if k < 3 or k % 2 == 0:
        raise KNotOdd(f"k must be odd and at least 3, got {k}")
    if not k <= m <= 2 * k:
        raise MOutOfRange(f"m must lie in [{k}, {2 * k}], got {m}")
    if square is None:
        square = cyclic_square(k)
    elif square.rows != k or not square.is_square:
        raise ValueError(f"M must be a latin square of order {k}")
    else:
        validate(square.grid)
    return restrict_rows(direct_product(L2, square), m)


def km8_coloring(m: int) -> LatinRectangle:
    """Top m rows of L2 x L2 x L2, an 8-coloring of K_{m,8} with no rainbow 6-cycle."""
    if not 3 <= m <= 8:
        raise MOutOfRange(f"m must lie in [3, 8], got {m}")
    return restrict_rows(direct_product(direct_product(L2, L2), L2), m)


def k37_coloring() -> LatinRectangle:
    return K37
