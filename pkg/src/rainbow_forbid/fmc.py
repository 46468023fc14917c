"""Exhaustive search for colorings of K_{m,n} without rainbow 2k-cycles.

The search fills an m x n latin rectangle cell by cell in row-major order,
trying symbols in ascending order.  Partial grids are cut unless they agree
with the least member of their isotopy class on what that member is known
to look like: first row ``0..n-1``, first column ascending, and a second row
made of consecutive cycles ordered by length (see second_row_candidates).
A partial grid is also cut as soon as it holds a rainbow 2k-cycle among its
filled cells.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .constructions import k37_coloring, km8_coloring, theorem22_coloring
from .latin import (
    Grid,
    LatinRectangle,
    canonical_array,
    canonical_form,
    find_column_triple_latin_square,
    is_latin_array,
    iter_latin_rectangles,
    validate,
)
from .rainbow import classify_3x3, find_rainbow_cycle

DEFAULT_BUDGET = 10**9
BUDGET_ENV = "RAINBOW_FORBID_BUDGET"

# The six 6-cycles of K_{3,3}, as cell lists of a 3 x 3 window.  Each is the
# union of two cell-disjoint permutations of the same parity.
_EVEN = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
_ODD = [(0, 2, 1), (1, 0, 2), (2, 1, 0)]
WINDOW_CYCLES = tuple(
    tuple((i, p[i]) for i in range(3)) + tuple((i, q[i]) for i in range(3))
    for group in (_EVEN, _ODD)
    for p, q in combinations(group, 2)
)


class InvalidDimensions(ValueError):
    pass


class ViolationFound(AssertionError):
    def __init__(self, message: str, example=None):
        super().__init__(message)
        self.example = example


class BudgetExceeded(RuntimeError):
    def __init__(self, stats: "SearchStats", partial=None):
        super().__init__(f"node budget exhausted after {stats.nodes} expansions")
        self.stats = stats
        self.partial = partial


def default_budget() -> int:
    env = os.environ.get(BUDGET_ENV)
    return int(env) if env else DEFAULT_BUDGET


@dataclass
class SearchStats:
    nodes: int = 0
    prunes_rainbow: int = 0
    prunes_canonicity: int = 0
    leaves: int = 0
    wall_time: float = 0.0

    def add(self, other: "SearchStats") -> None:
        self.nodes += other.nodes
        self.prunes_rainbow += other.prunes_rainbow
        self.prunes_canonicity += other.prunes_canonicity
        self.leaves += other.leaves

    def to_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "prunes_rainbow": self.prunes_rainbow,
            "prunes_canonicity": self.prunes_canonicity,
            "leaves": self.leaves,
            "wall_time": round(self.wall_time, 3),
        }


@dataclass
class SearchOutcome:
    m: int
    n: int
    k: int
    witness: Optional[LatinRectangle]
    stats: SearchStats
    classes: Optional[tuple[LatinRectangle, ...]] = None

    @property
    def found(self) -> bool:
        return self.witness is not None

    @property
    def verdict(self) -> str:
        return "Found" if self.found else "ExhaustedNone"

    def to_dict(self) -> dict:
        d = {
            "m": self.m,
            "n": self.n,
            "k": self.k,
            "verdict": self.verdict,
            "witness": self.witness.tolist() if self.witness else None,
            "stats": self.stats.to_dict(),
        }
        if self.classes is not None:
            d["classes"] = len(self.classes)
        return d


class _OutOfBudget(Exception):
    pass


def _partitions(n: int, least: int = 2):
    """Partitions of n into parts >= least, parts nondecreasing."""
    if n == 0:
        yield ()
        return
    for part in range(least, n + 1):
        for rest in _partitions(n - part, part):
            yield (part,) + rest


def second_row_candidates(n: int) -> list[tuple[int, ...]]:
    """Second rows allowed after a first row 0..n-1.

    The least isotope of a rectangle has as second row the least conjugate of
    a fixed-point-free permutation: its cycles laid out on consecutive
    columns, shortest first.  One such row per cycle type.
    """
    rows = []
    for parts in _partitions(n):
        row, start = [], 0
        for length in parts:
            row += [start + i + 1 for i in range(length - 1)] + [start]
            start += length
        rows.append(tuple(row))
    return sorted(rows)


class _Searcher:
    def __init__(self, m: int, n: int, k: int, budget: int, collect: bool,
                 split_row: int = 0, symmetry: str = "lex-leader"):
        self.m, self.n, self.k = m, n, k
        self.budget = budget
        self.collect = collect
        self.split_row = split_row
        self.stats = SearchStats()
        self.grid = [[-1] * n for _ in range(m)]
        self.col_used = [0] * n
        self.witness: Optional[Grid] = None
        self.classes: set[Grid] = set()
        self.prefixes: list[Grid] = []
        self.prefix_stats: list[SearchStats] = []
        self.row1_prefixes = None
        if symmetry == "lex-leader":
            self.row1_prefixes = {
                row[:j] for row in second_row_candidates(n) for j in range(1, n + 1)
            }
        elif symmetry != "basic":
            raise ValueError(f"unknown symmetry scheme {symmetry!r}")

    def load(self, rows: Grid) -> None:
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                self.grid[i][j] = x
                self.col_used[j] |= 1 << x

    def run(self, start_row: int) -> None:
        try:
            self._rec(start_row * self.n, 0)
        except _StopSearch:
            pass

    # cell-level DFS; returns nothing, raises _StopSearch on first witness
    def _rec(self, pos: int, row_used: int) -> None:
        m, n = self.m, self.n
        grid, col_used = self.grid, self.col_used
        r, c = divmod(pos, n)
        if c == 0:
            if r == m:
                self._leaf()
                return
            if self.split_row and r == self.split_row:
                st = self.stats
                self.prefixes.append(tuple(tuple(row) for row in grid[:r]))
                self.prefix_stats.append(
                    SearchStats(st.nodes, st.prunes_rainbow, st.prunes_canonicity))
                return
            row_used = 0
        floor = grid[r - 1][0] if c == 0 else -1
        stats = self.stats
        for x in range(n):
            bit = 1 << x
            if row_used & bit or col_used[c] & bit:
                continue
            if x <= floor:
                stats.prunes_canonicity += 1
                continue
            grid[r][c] = x
            if r == 1 and self.row1_prefixes and tuple(grid[1][: c + 1]) not in self.row1_prefixes:
                stats.prunes_canonicity += 1
                continue
            stats.nodes += 1
            if stats.nodes > self.budget:
                raise _OutOfBudget
            if self._rainbow_through(r, c):
                stats.prunes_rainbow += 1
                continue
            col_used[c] |= bit
            self._rec(pos + 1, row_used | bit)
            col_used[c] &= ~bit
        grid[r][c] = -1

    def _leaf(self) -> None:
        self.stats.leaves += 1
        g = tuple(tuple(row) for row in self.grid)
        if self.witness is None:
            self.witness = g
        if not self.collect:
            raise _StopSearch
        self.classes.add(canonical_form(LatinRectangle(g)).grid)

    def _rainbow_through(self, r: int, c: int) -> bool:
        if r < self.k - 1:
            return False
        if self.k == 3:
            return self._window_check(r, c)
        return self._cycle_through(r, c)

    def _window_check(self, r: int, c: int) -> bool:
        # Every 3 x 3 window completed by cell (r, c).
        g = self.grid
        if c < 2:
            return False
        rows_r = g[r]
        for r1 in range(r - 1):
            g1 = g[r1]
            for r2 in range(r1 + 1, r):
                g2 = g[r2]
                for c1 in range(c - 1):
                    for c2 in range(c1 + 1, c):
                        w = ((g1[c1], g1[c2], g1[c]), (g2[c1], g2[c2], g2[c]),
                             (rows_r[c1], rows_r[c2], rows_r[c]))
                        for cyc in WINDOW_CYCLES:
                            if len({w[i][j] for i, j in cyc}) == 6:
                                return True
        return False

    def _cycle_through(self, r: int, c: int) -> bool:
        # Rainbow 2k-cycle u_r v_c ... v_y u_r over filled cells only.  Rows
        # below r are empty and row r is filled up to column c, so the other
        # A-vertices lie above r and the closing column lies left of c.
        g, k, n = self.grid, self.k, self.n
        row_r = g[r]
        start = 1 << row_r[c]

        def rec(at_b: int, depth: int, colors: int, amask: int, bmask: int) -> bool:
            # path ends at v_{at_b}; pick next A-vertex, then the next B-vertex
            for a in range(r):
                if amask >> a & 1:
                    continue
                ca = g[a][at_b]
                if colors >> ca & 1:
                    continue
                cs = colors | (1 << ca)
                ga = g[a]
                if depth == k - 1:
                    for y in range(c):
                        if bmask >> y & 1:
                            continue
                        c1, c2 = ga[y], row_r[y]
                        if c1 != c2 and not (cs >> c1 & 1) and not (cs >> c2 & 1):
                            return True
                    continue
                for y in range(n):
                    if bmask >> y & 1:
                        continue
                    cy = ga[y]
                    if cs >> cy & 1:
                        continue
                    if rec(y, depth + 1, cs | (1 << cy), amask | (1 << a), bmask | (1 << y)):
                        return True
            return False

        return rec(c, 1, start, 0, 1 << c)


class _StopSearch(Exception):
    pass


def _check_dims(m: int, n: int, k: int) -> None:
    if k < 2 or not (k <= m <= n) or n < 2 * k:
        raise InvalidDimensions(f"need 2 <= k <= m <= n and n >= 2k, got m={m}, n={n}, k={k}")


def _run_subtree(args):
    m, n, k, budget, collect, symmetry, prefix = args
    s = _Searcher(m, n, k, budget, collect, symmetry=symmetry)
    s.load(prefix)
    try:
        s.run(len(prefix))
        exceeded = False
    except _OutOfBudget:
        exceeded = True
    return s.witness, s.stats, s.classes, exceeded


def decide_membership(
    m: int,
    n: int,
    k: int,
    budget: Optional[int] = None,
    threads: int = 1,
    collect: bool = False,
    symmetry: str = "lex-leader",
) -> SearchOutcome:
    """Decide whether some n-coloring of K_{m,n} has no rainbow 2k-cycle.

    ``collect=True`` runs the search to completion and records the canonical
    form of every rainbow-free rectangle it meets.  Exceeding ``budget`` node
    expansions raises BudgetExceeded; it is never reported as nonexistence.
    ``symmetry="basic"`` drops the second-row constraint and keeps only the
    first-row and first-column ones; it exists to cross-check the default.
    With ``threads > 1`` the subtrees below each admissible second row are
    searched in worker processes and merged in DFS order, which reproduces
    the serial verdict, witness and node count.
    """
    _check_dims(m, n, k)
    budget = default_budget() if budget is None else budget
    t0 = time.perf_counter()
    first_row = (tuple(range(n)),)

    if threads <= 1 or m < 3:
        s = _Searcher(m, n, k, budget, collect, symmetry=symmetry)
        s.load(first_row)
        try:
            s.run(1)
        except _OutOfBudget:
            s.stats.wall_time = time.perf_counter() - t0
            raise BudgetExceeded(s.stats) from None
        witness, stats, classes = s.witness, s.stats, s.classes
    else:
        # Second rows are enumerated up front; prefix_stats[i] holds the
        # splitter's counters at the moment prefix i was emitted, which is what
        # the serial search has spent on second rows when it enters subtree i.
        splitter = _Searcher(m, n, k, budget, collect, split_row=2, symmetry=symmetry)
        splitter.budget = float("inf")
        splitter.load(first_row)
        splitter.run(1)
        jobs = [(m, n, k, budget, collect, symmetry, p) for p in splitter.prefixes]
        witness, classes = None, set()
        sub_total = SearchStats()
        stats = SearchStats()
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for i, (w, st, cl, exceeded) in enumerate(pool.map(_run_subtree, jobs)):
                sub_total.add(st)
                stats = SearchStats()
                stats.add(splitter.prefix_stats[i])
                stats.add(sub_total)
                if exceeded or stats.nodes > budget:
                    stats.wall_time = time.perf_counter() - t0
                    raise BudgetExceeded(stats)
                classes |= cl
                if w is not None and witness is None:
                    witness = w
                    if not collect:
                        break
        if witness is None or collect:
            stats = SearchStats()
            stats.add(splitter.stats)
            stats.add(sub_total)
            if stats.nodes > budget:
                stats.wall_time = time.perf_counter() - t0
                raise BudgetExceeded(stats)

    stats.wall_time = time.perf_counter() - t0
    rect = None
    if witness is not None:
        rect = validate(witness)
        if find_rainbow_cycle(rect, k) is not None:
            raise AssertionError("search emitted a witness containing a rainbow cycle")
    return SearchOutcome(
        m, n, k, rect, stats,
        tuple(LatinRectangle(g) for g in sorted(classes)) if collect else None,
    )


def brute_force_membership(m: int, n: int, k: int) -> Optional[LatinRectangle]:
    """First rectangle in lexicographic order with no rainbow 2k-cycle, or None.

    No symmetry breaking and no partial pruning: every complete rectangle is
    checked with the cycle finder.  Only practical for tiny cases.
    """
    _check_dims(m, n, k)
    for rect in iter_latin_rectangles(m, n):
        if find_rainbow_cycle(rect, k) is None:
            return rect
    return None


# --- classification verifiers --------------------------------------------------


def enumerate_3x3_classes(distinct: int) -> list[Grid]:
    """Isotopy classes of filled 3 x 3 row/column-latin arrays with the given symbol count."""
    reps = set()
    cells = [(i, j) for i in range(3) for j in range(3)]
    a = [[-1] * 3 for _ in range(3)]

    def rec(p: int, used: int):
        if p == 9:
            if used == distinct:
                reps.add(canonical_array(a))
            return
        if used + (9 - p) < distinct:
            return
        i, j = cells[p]
        # symbols enter in order of first appearance
        for x in range(min(used + 1, distinct)):
            if x in a[i][:j] or any(a[r][j] == x for r in range(i)):
                continue
            a[i][j] = x
            rec(p + 1, max(used, x + 1))
        a[i][j] = -1

    rec(0, 0)
    return sorted(reps)


@dataclass
class Prop31Report:
    classes: int
    rainbow_free: int
    violations: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"classes": self.classes, "rainbow_free": self.rainbow_free,
                "violations": len(self.violations)}


def verify_prop_3_1() -> Prop31Report:
    """Seven-symbol 3 x 3 arrays: no rainbow 6-cycle exactly when an intercalate is present."""
    classes = enumerate_3x3_classes(7)
    report = Prop31Report(len(classes), 0)
    for rep in classes:
        assert is_latin_array(rep)
        cl = classify_3x3(rep)
        report.rainbow_free += cl.rainbow_c6_free
        if cl.rainbow_c6_free != cl.has_intercalate:
            report.violations.append(rep)
    if report.violations:
        raise ViolationFound("7-symbol biconditional fails", report.violations[0])
    return report


@dataclass
class Prop32Report:
    classes: int
    rainbow_free: int
    condition_counts: dict
    violations: dict
    free_without_condition: int

    def to_dict(self) -> dict:
        return {
            "classes": self.classes,
            "rainbow_free": self.rainbow_free,
            "condition_counts": self.condition_counts,
            "violations": {key: len(v) for key, v in self.violations.items()},
            "free_without_condition": self.free_without_condition,
        }


def verify_prop_3_2() -> Prop32Report:
    """Six-symbol 3 x 3 arrays: each of the three conditions rules out a rainbow 6-cycle.

    ``free_without_condition`` counts rainbow-free classes meeting none of the
    conditions; it is informational only.
    """
    classes = enumerate_3x3_classes(6)
    names = ("two_lines_on_3_symbols", "has_tripled_element", "has_intercalate")
    counts = {name: 0 for name in names}
    violations: dict = {name: [] for name in names}
    free = gap = 0
    for rep in classes:
        cl = classify_3x3(rep)
        free += cl.rainbow_c6_free
        for name in names:
            if getattr(cl, name):
                counts[name] += 1
                if not cl.rainbow_c6_free:
                    violations[name].append(rep)
        if cl.rainbow_c6_free and not cl.prop_conditions:
            gap += 1
    report = Prop32Report(len(classes), free, counts, violations, gap)
    bad = [v for vs in violations.values() for v in vs]
    if bad:
        raise ViolationFound("a sufficient condition admits a rainbow 6-cycle", bad[0])
    return report


def has_disjoint_columns(rect: LatinRectangle) -> bool:
    sets = [set(col) for col in zip(*rect.grid)]
    return any(s.isdisjoint(t) for s, t in combinations(sets, 2))


@dataclass
class Lemma34Report:
    classes: int
    contains_reference: bool
    triple_violations: list
    disjoint_violations: list
    stats: SearchStats

    def to_dict(self) -> dict:
        return {
            "classes": self.classes,
            "contains_reference": self.contains_reference,
            "triple_violations": len(self.triple_violations),
            "disjoint_violations": len(self.disjoint_violations),
            "stats": self.stats.to_dict(),
        }


def verify_lemma_3_4_structure(budget: Optional[int] = None, threads: int = 1) -> Lemma34Report:
    """Every rainbow-6-cycle-free 3 x 7 rectangle has an order-3 latin column triple
    and two columns with disjoint symbol sets."""
    outcome = decide_membership(3, 7, 3, budget=budget, threads=threads, collect=True)
    triples, disjoint = [], []
    for rect in outcome.classes:
        if find_column_triple_latin_square(rect) is None:
            triples.append(rect)
        if not has_disjoint_columns(rect):
            disjoint.append(rect)
    ref = canonical_form(k37_coloring())
    report = Lemma34Report(
        len(outcome.classes), ref in outcome.classes, triples, disjoint, outcome.stats
    )
    if triples or disjoint:
        raise ViolationFound("a rainbow-free 3 x 7 class lacks the expected structure",
                             (triples + disjoint)[0])
    return report


# --- FMC report ------------------------------------------------------------------

PROV_L2XM = "construction (l2xm) + exhaustive check"
PROV_KM8 = "construction (km8) + exhaustive check"
PROV_WITNESS = "search witness"
PROV_EXHAUSTED = "nonexistence proof (exhaustive search)"
PROV_MONOTONE = "nonexistence proof (row monotonicity from m={m})"
PROV_BOUND = "theorem bound (5k-6)"


@dataclass
class PairRecord:
    m: int
    n: int
    k: int
    member: bool
    provenance: str
    witness: Optional[LatinRectangle] = None

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "k": self.k,
            "member": self.member,
            "provenance": self.provenance,
            "witness": self.witness.tolist() if self.witness else None,
        }


@dataclass
class FmcReport:
    k: int
    pairs: dict = field(default_factory=dict)
    complete: bool = True

    def members(self) -> set[tuple[int, int]]:
        return {key for key, rec in self.pairs.items() if rec.member}

    def is_row_monotone(self) -> bool:
        for (m, n), rec in self.pairs.items():
            if rec.member:
                for mm in range(self.k, m):
                    if (mm, n) in self.pairs and not self.pairs[mm, n].member:
                        return False
        return True

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "complete": self.complete,
            "pairs": [self.pairs[key].to_dict() for key in sorted(self.pairs, key=lambda p: (p[1], p[0]))],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _forbids(rect: LatinRectangle, k: int) -> bool:
    return find_rainbow_cycle(rect, k) is None


def compute_fmc(
    k: int,
    max_m: int = 8,
    max_n: int = 9,
    budget: Optional[int] = None,
    threads: int = 1,
) -> FmcReport:
    """Membership of every (m, n) with k <= m <= min(n, max_m) and 2k <= n <= max_n.

    Columns n >= 5k - 6 are settled by the path-extension bound.  Otherwise a
    known construction is used when one applies; the remaining pairs are
    searched for increasing m, and once a row count is exhausted all larger
    row counts follow by restriction.  On BudgetExceeded the partial report
    is attached to the exception.
    """
    report = FmcReport(k)
    for n in range(2 * k, max_n + 1):
        ms = range(k, min(n, max_m) + 1)
        if n >= 5 * k - 6:
            for m in ms:
                report.pairs[m, n] = PairRecord(m, n, k, False, PROV_BOUND)
            continue
        if k % 2 == 1 and n == 2 * k:
            for m in ms:
                rect = theorem22_coloring(k, m)
                if not _forbids(rect, k):
                    raise AssertionError(f"construction for ({m}, {n}) has a rainbow cycle")
                report.pairs[m, n] = PairRecord(m, n, k, True, PROV_L2XM, rect)
            continue
        if k == 3 and n == 8:
            for m in ms:
                rect = km8_coloring(m)
                if not _forbids(rect, k):
                    raise AssertionError(f"construction for ({m}, 8) has a rainbow cycle")
                report.pairs[m, n] = PairRecord(m, n, k, True, PROV_KM8, rect)
            continue
        empty_from = None
        for m in ms:
            if empty_from is not None:
                report.pairs[m, n] = PairRecord(m, n, k, False, PROV_MONOTONE.format(m=empty_from))
                continue
            try:
                out = decide_membership(m, n, k, budget=budget, threads=threads)
            except BudgetExceeded as exc:
                report.complete = False
                exc.partial = report
                raise
            if out.found:
                report.pairs[m, n] = PairRecord(m, n, k, True, PROV_WITNESS, out.witness)
            else:
                report.pairs[m, n] = PairRecord(m, n, k, False, PROV_EXHAUSTED)
                empty_from = m
    return report


def compute_fmc6(max_m: int = 8, max_n: int = 9, budget: Optional[int] = None,
                 threads: int = 1) -> FmcReport:
    return compute_fmc(3, max_m, max_n, budget, threads)


FMC6_EXPECTED = (
    {(m, 6) for m in range(3, 7)} | {(3, 7)} | {(m, 8) for m in range(3, 9)}
)
