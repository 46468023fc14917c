"""Latin rectangles, sub-array views, transversals, intercalates and isotopy.

Symbols are the integers ``0..n-1``.  A :class:`LatinRectangle` is always fully
filled: every row is a permutation of the alphabet and no symbol repeats in a
column.  Square r x r analyses (transversals, intercalates, symbol counts) run
on :class:`SubArrayView` objects, i.e. r chosen rows and r chosen columns of a
rectangle, or directly on a small array given as nested sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Iterator, Optional, Sequence, Union

Grid = tuple[tuple[int, ...], ...]
Cell = tuple[int, int]


class LatinError(ValueError):
    """Base class for malformed grids and views."""


class DuplicateInRow(LatinError):
    def __init__(self, row: int, symbol: int):
        super().__init__(f"symbol {symbol} repeated in row {row}")
        self.row = row
        self.symbol = symbol


class DuplicateInColumn(LatinError):
    def __init__(self, col: int, symbol: int):
        super().__init__(f"symbol {symbol} repeated in column {col}")
        self.col = col
        self.symbol = symbol


class SymbolOutOfRange(LatinError):
    def __init__(self, cell: Cell, symbol):
        super().__init__(f"cell {cell} holds {symbol!r}, outside the alphabet")
        self.cell = cell
        self.symbol = symbol


class ShapeError(LatinError):
    pass


class NotSquare(LatinError):
    pass


class NotSquareView(LatinError):
    pass


class GridFormatError(LatinError):
    """Raised by :func:`parse_grid` on text that is not a valid grid file."""


@dataclass(frozen=True)
class LatinRectangle:
    grid: Grid

    @property
    def rows(self) -> int:
        return len(self.grid)

    @property
    def cols(self) -> int:
        return len(self.grid[0])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, rc: Cell) -> int:
        return self.grid[rc[0]][rc[1]]

    def view(self, row_indices: Iterable[int], col_indices: Iterable[int]) -> "SubArrayView":
        return SubArrayView(self, tuple(row_indices), tuple(col_indices))

    def full_view(self) -> "SubArrayView":
        return self.view(range(self.rows), range(self.cols))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.grid]

    def __str__(self) -> str:
        return format_grid(self)


@dataclass(frozen=True)
class SubArrayView:
    """The sub-grid of ``base`` on the given rows and columns (both strictly sorted)."""

    base: LatinRectangle
    row_indices: tuple[int, ...]
    col_indices: tuple[int, ...]

    def __post_init__(self):
        for name, idx, bound in (
            ("row", self.row_indices, self.base.rows),
            ("column", self.col_indices, self.base.cols),
        ):
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise LatinError(f"{name} indices must be strictly increasing: {idx}")
            if idx and (idx[0] < 0 or idx[-1] >= bound):
                raise LatinError(f"{name} indices out of bounds: {idx}")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_indices), len(self.col_indices)

    @property
    def array(self) -> Grid:
        g = self.base.grid
        return tuple(tuple(g[i][j] for j in self.col_indices) for i in self.row_indices)

    def base_cell(self, cell: Cell) -> Cell:
        """Translate view coordinates to coordinates in the base rectangle."""
        return self.row_indices[cell[0]], self.col_indices[cell[1]]


ArrayLike = Union[SubArrayView, LatinRectangle, Sequence[Sequence[int]]]


def as_array(view: ArrayLike) -> Grid:
    if isinstance(view, SubArrayView):
        return view.array
    if isinstance(view, LatinRectangle):
        return view.grid
    return tuple(tuple(int(x) for x in row) for row in view)


@dataclass(frozen=True)
class Transversal:
    cells: tuple[Cell, ...]
    symbols: tuple[int, ...]


@dataclass(frozen=True)
class Intercalate:
    rows: tuple[int, int]
    cols: tuple[int, int]
    symbols: tuple[int, int]


def validate(grid: Sequence[Sequence[int]]) -> LatinRectangle:
    """Check a filled m x n grid over ``0..n-1`` and wrap it as a rectangle."""
    rows = [list(r) for r in grid]
    if not rows or not rows[0]:
        raise ShapeError("grid must have at least one row and one column")
    m, n = len(rows), len(rows[0])
    if any(len(r) != n for r in rows):
        raise ShapeError("rows have unequal lengths")
    if m > n:
        raise ShapeError(f"{m} x {n} grid has more rows than symbols")
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < n:
                raise SymbolOutOfRange((i, j), x)
    for i, row in enumerate(rows):
        seen = set()
        for x in row:
            if x in seen:
                raise DuplicateInRow(i, x)
            seen.add(x)
    for j in range(n):
        seen = set()
        for i in range(m):
            x = rows[i][j]
            if x in seen:
                raise DuplicateInColumn(j, x)
            seen.add(x)
    return LatinRectangle(tuple(tuple(r) for r in rows))


def is_latin_array(array: Sequence[Sequence[int]]) -> bool:
    """Row/column condition only, any alphabet (used for partial views)."""
    a = as_array(array)
    if any(len(set(r)) != len(r) for r in a):
        return False
    return all(len(set(col)) == len(col) for col in zip(*a))


def direct_product(left: LatinRectangle, right: LatinRectangle) -> LatinRectangle:
    """Direct product of an s x s and a t x t square.

    Entry ``(t*a + c, t*b + d)`` is ``t * left[a][b] + right[c][d]``.
    """
    if not left.is_square or not right.is_square:
        raise NotSquare("direct product needs two latin squares")
    s, t = left.rows, right.rows
    L, M = left.grid, right.grid
    h = [[t * L[x // t][y // t] + M[x % t][y % t] for y in range(s * t)] for x in range(s * t)]
    return LatinRectangle(tuple(tuple(r) for r in h))


def _square(view: ArrayLike) -> Grid:
    a = as_array(view)
    if any(len(row) != len(a) for row in a):
        raise NotSquareView(f"view of shape {len(a)} x {len(a[0]) if a else 0} is not square")
    return a


def transversals(view: ArrayLike) -> list[Transversal]:
    """All transversals of a square view, ordered lexicographically by column assignment."""
    a = _square(view)
    r = len(a)
    out = []
    for perm in permutations(range(r)):
        syms = tuple(a[i][perm[i]] for i in range(r))
        if len(set(syms)) == r:
            out.append(Transversal(tuple(enumerate(perm)), syms))
    return out


def disjoint_transversal_pairs(view: ArrayLike) -> list[tuple[Transversal, Transversal]]:
    """Cell-disjoint transversal pairs of a 3 x 3 view covering six distinct symbols.

    Each pair is the edge set of a rainbow 6-cycle in the corresponding K_{3,3}.
    """
    a = _square(view)
    if len(a) != 3:
        raise NotSquareView("disjoint transversal pairs are defined on 3 x 3 views")
    ts = transversals(a)
    pairs = []
    for s, t in combinations(ts, 2):
        if set(s.cells).isdisjoint(t.cells) and len(set(s.symbols) | set(t.symbols)) == 6:
            pairs.append((s, t))
    return pairs


def find_intercalate(view: ArrayLike) -> Optional[Intercalate]:
    a = as_array(view)
    ncols = len(a[0]) if a else 0
    for r1, r2 in combinations(range(len(a)), 2):
        for c1, c2 in combinations(range(ncols), 2):
            x, y = a[r1][c1], a[r1][c2]
            if x != y and a[r2][c1] == y and a[r2][c2] == x:
                return Intercalate((r1, r2), (c1, c2), (x, y))
    return None


def distinct_symbol_count(view: ArrayLike) -> int:
    return len({x for row in as_array(view) for x in row})


def find_column_triple_latin_square(
    rect: LatinRectangle,
) -> Optional[tuple[tuple[int, int, int], Grid]]:
    """First column triple (lexicographic) whose 3 x 3 view is a latin square of order 3."""
    if rect.rows != 3:
        raise ShapeError("column triples are searched in 3-row rectangles")
    sets = [frozenset(col) for col in zip(*rect.grid)]
    for trip in combinations(range(rect.cols), 3):
        if sets[trip[0]] == sets[trip[1]] == sets[trip[2]]:
            return trip, rect.view(range(3), trip).array
    return None


# --- isotopy -----------------------------------------------------------------


def _relabel(rows: Iterable[Sequence[int]]) -> Grid:
    # Symbol relabelling by first appearance in row-major order is the
    # lexicographically smallest relabelling for a fixed row/column order.
    labels: dict[int, int] = {}
    out = []
    for row in rows:
        out.append(tuple(labels.setdefault(x, len(labels)) for x in row))
    return tuple(out)


def canonical_array(array: ArrayLike) -> Grid:
    """Lex-min isotope of a small array by brute force over row and column orders.

    Symbols are relabelled to ``0, 1, ...`` so arrays over any alphabet compare.
    Cost is m! * n!; meant for views up to about 4 x 5.
    """
    a = as_array(array)
    m, n = len(a), len(a[0])
    best = None
    for rp in permutations(range(m)):
        for cp in permutations(range(n)):
            cand = _relabel([a[i][j] for j in cp] for i in rp)
            if best is None or cand < best:
                best = cand
    return best


def _lexmin_conjugators(perm: Sequence[int]) -> list[list[int]]:
    """All column orders tau making tau^-1 . perm . tau lexicographically least.

    The least conjugate lays cycles out consecutively by nondecreasing length;
    the optimal orders differ only in the order of equal-length cycles and the
    starting point of each cycle.
    """
    n = len(perm)
    seen = [False] * n
    cycles = []
    for s in range(n):
        if not seen[s]:
            cyc = []
            x = s
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = perm[x]
            cycles.append(cyc)
    by_len: dict[int, list[list[int]]] = {}
    for cyc in cycles:
        by_len.setdefault(len(cyc), []).append(cyc)

    # For each length class: every ordering of its cycles times every rotation.
    blocks = []
    for length in sorted(by_len):
        options = []
        for order in permutations(by_len[length]):
            partial = [[]]
            for cyc in order:
                partial = [p + cyc[r:] + cyc[:r] for p in partial for r in range(length)]
            options.extend(partial)
        blocks.append(options)
    taus = [[]]
    for options in blocks:
        taus = [t + o for t in taus for o in options]
    return taus


def canonical_form(rect: LatinRectangle) -> LatinRectangle:
    """Lexicographically least rectangle in the isotopy class of ``rect``.

    After relabelling, the first row is always ``0..n-1`` and every later row
    is the conjugate of a fixed permutation by the column order.  So the
    search only ranges over ordered choices of the first two rows and the
    column orders that minimise the second row; later rows are then sorted.
    """
    g = rect.grid
    m, n = rect.rows, rect.cols
    if m == 1:
        return LatinRectangle((tuple(range(n)),))
    pos = [{x: j for j, x in enumerate(row)} for row in g]

    def rel(p: int, q: int) -> list[int]:
        return [pos[p][g[q][c]] for c in range(n)]

    best = None
    for p in range(m):
        for q in range(m):
            if q == p:
                continue
            for tau in _lexmin_conjugators(rel(p, q)):
                inv = [0] * n
                for j, c in enumerate(tau):
                    inv[c] = j
                rows = []
                for r in range(m):
                    if r == p:
                        continue
                    pr = rel(p, r)
                    rows.append(tuple(inv[pr[tau[j]]] for j in range(n)))
                second = tuple(inv[rel(p, q)[tau[j]]] for j in range(n))
                rows.remove(second)
                cand = (tuple(range(n)), second) + tuple(sorted(rows))
                if best is None or cand < best:
                    best = cand
    return LatinRectangle(best)


def apply_isotopy(
    rect: LatinRectangle,
    row_perm: Sequence[int],
    col_perm: Sequence[int],
    sym_perm: Sequence[int],
) -> LatinRectangle:
    """Row ``i`` of the result is row ``row_perm[i]``; symbol ``x`` becomes ``sym_perm[x]``."""
    g = rect.grid
    return LatinRectangle(
        tuple(tuple(sym_perm[g[i][j]] for j in col_perm) for i in row_perm)
    )


def iter_latin_rectangles(m: int, n: int) -> Iterator[LatinRectangle]:
    """Every m x n latin rectangle on ``0..n-1`` in lexicographic order (no symmetry breaking)."""
    grid = [[-1] * n for _ in range(m)]
    col_used = [0] * n
    total = m * n

    def rec(pos: int, row_used: int):
        if pos == total:
            yield LatinRectangle(tuple(tuple(r) for r in grid))
            return
        i, j = divmod(pos, n)
        if j == 0:
            row_used = 0
        for x in range(n):
            bit = 1 << x
            if row_used & bit or col_used[j] & bit:
                continue
            grid[i][j] = x
            col_used[j] |= bit
            yield from rec(pos + 1, row_used | bit)
            col_used[j] &= ~bit
        grid[i][j] = -1

    yield from rec(0, 0)


# --- text format -------------------------------------------------------------


def format_grid(rect: Union[LatinRectangle, Sequence[Sequence[int]]]) -> str:
    a = as_array(rect)
    lines = [f"{len(a)} {len(a[0])}"]
    lines += [" ".join(str(x) for x in row) for row in a]
    return "\n".join(lines) + "\n"


def parse_grid(text: str) -> LatinRectangle:
    """Parse the ``m n`` header plus m rows format and validate the result."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise GridFormatError("empty grid file")
    head = lines[0].split()
    if len(head) != 2 or not all(t.isdigit() for t in head):
        raise GridFormatError(f"bad header line: {lines[0]!r}")
    m, n = int(head[0]), int(head[1])
    body = lines[1:]
    if len(body) != m:
        raise GridFormatError(f"header announces {m} rows, found {len(body)}")
    rows = []
    for i, ln in enumerate(body):
        toks = ln.split()
        if len(toks) != n:
            raise GridFormatError(f"row {i} has {len(toks)} entries, expected {n}")
        if "." in toks:
            raise GridFormatError(f"row {i} has an empty cell; partial grids are not accepted")
        if not all(t.isdigit() for t in toks):
            raise GridFormatError(f"row {i} has a non-integer token")
        rows.append([int(t) for t in toks])
    return validate(rows)
