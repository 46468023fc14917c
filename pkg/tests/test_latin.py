import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbow_forbid.constructions import L2, cyclic_square
from rainbow_forbid.latin import (
    DuplicateInColumn,
    DuplicateInRow,
    GridFormatError,
    Intercalate,
    LatinError,
    LatinRectangle,
    NotSquare,
    NotSquareView,
    ShapeError,
    SubArrayView,
    SymbolOutOfRange,
    apply_isotopy,
    canonical_array,
    canonical_form,
    direct_product,
    disjoint_transversal_pairs,
    distinct_symbol_count,
    find_column_triple_latin_square,
    find_intercalate,
    format_grid,
    iter_latin_rectangles,
    parse_grid,
    transversals,
    validate,
)

from conftest import CYCLIC3, random_isotope, random_rectangle

RAINBOW_VIEW = ((0, 1, 2), (1, 2, 3), (4, 5, 6))
INTERCALATE_VIEW = ((0, 1, 2), (1, 0, 3), (4, 5, 6))


def all_squares(order):
    return list(iter_latin_rectangles(order, order))


# --- validate -----------------------------------------------------------------------


def test_validate_inline_examples():
    r = validate([[0, 1, 2], [2, 0, 1]])
    assert (r.rows, r.cols) == (2, 3)
    s = validate([[0, 1], [1, 0]])
    assert s.is_square


def test_validate_repeated_row_is_column_duplicate():
    with pytest.raises(DuplicateInColumn) as exc:
        validate([[0, 1], [0, 1]])
    assert (exc.value.col, exc.value.symbol) == (0, 0)


@pytest.mark.parametrize(
    "grid, error",
    [
        ([[0, 0, 1]], DuplicateInRow),
        ([[0, 1, 3]], SymbolOutOfRange),
        ([[0, -1]], SymbolOutOfRange),
        ([[0, 1], [1, 0], [0, 1]], ShapeError),
        ([[0, 1], [1]], ShapeError),
        ([], ShapeError),
    ],
)
def test_validate_errors(grid, error):
    with pytest.raises(error):
        validate(grid)


# --- direct product -----------------------------------------------------------------


def test_direct_product_identity_factor():
    one = LatinRectangle(((0,),))
    assert direct_product(L2, one) == L2


def test_direct_product_index_formula():
    h = direct_product(L2, cyclic_square(3))
    assert h.rows == 6
    # x = 3*1 + 0, y = 3*1 + 1
    assert h[3, 4] == 3 * L2[1, 1] + CYCLIC3[0][1] == 1
    for x in range(6):
        for y in range(6):
            a, c = divmod(x, 3)
            b, d = divmod(y, 3)
            assert h[x, y] == 3 * L2[a, b] + CYCLIC3[c][d]


def test_direct_product_rejects_rectangles():
    with pytest.raises(NotSquare):
        direct_product(L2, LatinRectangle(((0, 1, 2), (1, 2, 0))))


def test_direct_product_closure():
    factors = all_squares(1) + all_squares(2) + all_squares(3)
    rng = random.Random(4)
    factors += rng.sample(all_squares(4), 6)
    for left in factors:
        for right in factors:
            validate(direct_product(left, right).grid)


# --- transversals -----------------------------------------------------------------------


def brute_transversals(a):
    # Independent of permutations(): every map row -> column, keep bijective ones.
    r = len(a)
    out = []
    for cols in itertools.product(range(r), repeat=r):
        if len(set(cols)) == r and len({a[i][cols[i]] for i in range(r)}) == r:
            out.append(tuple(enumerate(cols)))
    return sorted(out)


def test_cyclic_square_has_diagonal_transversal():
    ts = transversals(CYCLIC3)
    diag = [t for t in ts if t.cells == ((0, 0), (1, 1), (2, 2))]
    assert diag and diag[0].symbols == (0, 2, 1)


def test_l2_has_no_transversal():
    assert transversals(L2) == []


def test_l2_times_cyclic3_has_no_transversal():
    sq = direct_product(L2, cyclic_square(3))
    assert transversals(sq.full_view()) == []


@pytest.mark.parametrize("order", [1, 2, 3, 4])
def test_transversals_match_brute_force(order):
    for sq in all_squares(order):
        got = transversals(sq)
        assert sorted(t.cells for t in got) == brute_transversals(sq.grid)
        for t in got:
            assert sorted(i for i, _ in t.cells) == list(range(order))
            assert sorted(j for _, j in t.cells) == list(range(order))
            assert len(set(t.symbols)) == order


def test_transversals_need_square_view():
    with pytest.raises(NotSquareView):
        transversals(((0, 1, 2), (1, 2, 0)))


# --- disjoint transversal pairs -----------------------------------------------------------


def rainbow_six_cell_sets(a):
    """Six-cell subsets with two cells per row and column, all symbols distinct.

    In K_{3,3} such a set is always a Hamiltonian 6-cycle.
    """
    cells = [(i, j) for i in range(3) for j in range(3)]
    hits = []
    for sub in itertools.combinations(cells, 6):
        if all(sum(1 for i, _ in sub if i == r) == 2 for r in range(3)) and all(
            sum(1 for _, j in sub if j == c) == 2 for c in range(3)
        ):
            if len({a[i][j] for i, j in sub}) == 6:
                hits.append(frozenset(sub))
    return hits


def test_disjoint_pairs_rainbow_example():
    pairs = disjoint_transversal_pairs(RAINBOW_VIEW)
    keyed = {(s.cells, t.cells): (s, t) for s, t in pairs}
    s, t = keyed[((0, 0), (1, 1), (2, 2)), ((0, 1), (1, 2), (2, 0))]
    assert set(s.symbols) == {0, 2, 6} and set(t.symbols) == {1, 3, 4}


def test_disjoint_pairs_empty_with_intercalate():
    assert disjoint_transversal_pairs(INTERCALATE_VIEW) == []
    assert find_intercalate(INTERCALATE_VIEW) is not None


def test_disjoint_pairs_need_six_symbols():
    assert disjoint_transversal_pairs(CYCLIC3) == []


def test_disjoint_pairs_shape():
    with pytest.raises(NotSquareView):
        disjoint_transversal_pairs(L2)


def test_disjoint_pairs_match_cell_set_oracle():
    rng = random.Random(7)
    views = [RAINBOW_VIEW, INTERCALATE_VIEW, CYCLIC3]
    for _ in range(60):
        rect = random_rectangle(rng, 3, rng.randint(3, 9))
        cols = sorted(rng.sample(range(rect.cols), 3))
        views.append(rect.view(range(3), cols).array)
    for v in views:
        assert len(disjoint_transversal_pairs(v)) == len(rainbow_six_cell_sets(v))


# --- intercalates, symbol counts, column triples --------------------------------------------


def test_find_intercalate_examples():
    assert find_intercalate(L2) == Intercalate((0, 1), (0, 1), (0, 1))
    assert find_intercalate(CYCLIC3) is None
    assert find_intercalate(INTERCALATE_VIEW) == Intercalate((0, 1), (0, 1), (0, 1))


def test_find_intercalate_scan_order():
    # rows (0, 1) have none; (0, 2) is scanned before (1, 2)
    a = cyclic_square(4)
    assert find_intercalate(a) == Intercalate((0, 2), (0, 2), (0, 2))


def test_distinct_symbol_count():
    assert distinct_symbol_count(RAINBOW_VIEW) == 7
    assert distinct_symbol_count(CYCLIC3) == 3
    for n in (2, 3, 5):
        assert distinct_symbol_count(cyclic_square(n)) == n


def test_column_triple_found():
    rect = validate([[0, 1, 2, 3, 4, 5], [1, 2, 0, 4, 5, 3], [2, 0, 1, 5, 3, 4]])
    trip, sq = find_column_triple_latin_square(rect)
    assert trip == (0, 1, 2)
    assert sq == CYCLIC3


def test_column_triple_absent():
    rect = validate([[0, 1, 2, 3], [1, 2, 3, 0], [2, 3, 0, 1]])
    assert find_column_triple_latin_square(rect) is None


def test_column_triple_needs_three_rows():
    with pytest.raises(ShapeError):
        find_column_triple_latin_square(L2)


# --- views ------------------------------------------------------------------------------------


def test_subarray_view_bounds():
    sq = cyclic_square(4)
    v = sq.view((0, 2), (1, 3))
    assert v.array == ((1, 3), (3, 1))
    assert v.base_cell((1, 0)) == (2, 1)
    with pytest.raises(LatinError):
        SubArrayView(sq, (1, 0), (0, 1))
    with pytest.raises(LatinError):
        SubArrayView(sq, (0, 4), (0, 1))


# --- canonical form ---------------------------------------------------------------------------


def test_canonical_l2_symbol_swap():
    assert canonical_form(L2) == canonical_form(LatinRectangle(((1, 0), (0, 1))))


def test_canonical_row_swap():
    r = validate([[0, 1, 2, 3, 4], [1, 2, 3, 4, 0], [3, 4, 0, 1, 2]])
    swapped = LatinRectangle((r.grid[2], r.grid[0], r.grid[1]))
    assert canonical_form(r) == canonical_form(swapped)


@pytest.mark.parametrize("shape", [(2, 3), (2, 5), (3, 3), (3, 4), (3, 5), (4, 4), (4, 5)])
def test_canonical_matches_brute_force_lexmin(shape):
    rng = random.Random(hash(shape) & 0xFFFF)
    for _ in range(8):
        r = random_rectangle(rng, *shape)
        assert canonical_form(r).grid == canonical_array(r)


def test_canonical_separates_classes():
    # 3 x 4 rectangles: classes by brute-force lex-min agree with classes by canonical_form
    rects = list(iter_latin_rectangles(3, 4))
    by_brute = {}
    for r in rects[::7]:
        by_brute.setdefault(canonical_array(r), set()).add(canonical_form(r).grid)
    assert all(len(v) == 1 for v in by_brute.values())
    assert len({next(iter(v)) for v in by_brute.values()}) == len(by_brute)


@settings(max_examples=60, deadline=None)
@given(
    shape=st.sampled_from([(3, 6), (4, 7), (5, 8), (3, 9)]),
    seed=st.integers(0, 2**32 - 1),
)
def test_canonical_is_isotopy_invariant_and_idempotent(shape, seed):
    rng = random.Random(seed)
    r = random_rectangle(rng, *shape)
    c = canonical_form(r)
    assert canonical_form(c) == c
    assert canonical_form(random_isotope(rng, r)) == c
    validate(c.grid)


# --- text format ------------------------------------------------------------------------------


def test_grid_text_round_trip():
    sq = direct_product(L2, cyclic_square(3))
    text = format_grid(sq)
    assert text.splitlines()[0] == "6 6"
    assert text.splitlines()[1] == "0 1 2 3 4 5"
    assert parse_grid(text) == sq


@pytest.mark.parametrize(
    "text",
    [
        "",
        "2\n0 1\n1 0\n",
        "2 2\n0 1\n",
        "2 2\n0 1\n1 .\n",
        "2 2\n0 1\n1 x\n",
        "2 2\n0 1 1\n1 0\n",
    ],
)
def test_parse_rejects_malformed(text):
    with pytest.raises(GridFormatError):
        parse_grid(text)


def test_parse_validates():
    with pytest.raises(DuplicateInColumn):
        parse_grid("2 2\n0 1\n0 1\n")


def test_apply_isotopy_keeps_latin():
    rng = random.Random(3)
    r = random_rectangle(rng, 4, 6)
    validate(apply_isotopy(r, [3, 1, 0, 2], [5, 4, 3, 2, 1, 0], [1, 2, 3, 4, 5, 0]).grid)
