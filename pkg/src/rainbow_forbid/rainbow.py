"""Rainbow (multicolored) even cycles in edge-colored complete bipartite graphs.

An m x n latin rectangle ``L`` is the proper n-edge-coloring of K_{m,n} that
gives edge ``u_i v_j`` color ``L[i][j]``.  A 2k-cycle is written as the
alternating sequence ``u_{a1} v_{b1} u_{a2} v_{b2} ... u_{ak} v_{bk}``; its
canonical form has ``a1`` smallest among the A-vertices and ``b1 < bk``, so
every unoriented cycle has exactly one representation.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Iterator, Optional

from .latin import (
    ArrayLike,
    Grid,
    LatinError,
    LatinRectangle,
    NotSquareView,
    as_array,
    disjoint_transversal_pairs,
    distinct_symbol_count,
    find_intercalate,
)


class KTooLarge(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class InvalidCertificate(ValueError):
    pass


@dataclass(frozen=True)
class EdgeColoring:
    m: int
    n: int
    colors: Grid

    def color(self, i: int, j: int) -> int:
        """Color of the edge u_i v_j."""
        return self.colors[i][j]

    def is_proper(self) -> bool:
        rows_ok = all(len(set(r)) == self.n for r in self.colors)
        return rows_ok and all(len(set(c)) == self.m for c in zip(*self.colors))


@dataclass(frozen=True)
class RainbowCycleCertificate:
    a_vertices: tuple[int, ...]
    b_vertices: tuple[int, ...]
    colors: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.a_vertices)

    def edges(self) -> list[tuple[int, int]]:
        """Cells (A-index, B-index) of the cycle's edges in traversal order."""
        a, b, k = self.a_vertices, self.b_vertices, self.k
        out = []
        for i in range(k):
            out.append((a[i], b[i]))
            out.append((a[(i + 1) % k], b[i]))
        return out

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "a_vertices": list(self.a_vertices),
            "b_vertices": list(self.b_vertices),
            "colors": list(self.colors),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "RainbowCycleCertificate":
        cert = cls(tuple(d["a_vertices"]), tuple(d["b_vertices"]), tuple(d["colors"]))
        if d.get("k", cert.k) != cert.k:
            raise InvalidCertificate("k does not match the vertex lists")
        return cert

    @classmethod
    def from_json(cls, text: str) -> "RainbowCycleCertificate":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class QuadrantProfile:
    """Edge counts of a cycle in the blocks A (top-left), B (top-right),
    C (bottom-right) and D (bottom-left) of a 2k x 2k array."""

    a: int
    b: int
    c: int
    d: int

    @property
    def parity_ok(self) -> bool:
        return (self.a + self.b) % 2 == 0 and (self.b + self.c) % 2 == 0

    @property
    def ac_sum(self) -> int:
        return self.a + self.c


@dataclass(frozen=True)
class Classification3x3:
    distinct_count: int
    has_intercalate: bool
    has_tripled_element: bool
    two_lines_on_3_symbols: bool
    rainbow_c6_free: bool

    @property
    def prop_conditions(self) -> bool:
        """Whether any of the three sufficient conditions for a 6-symbol view holds."""
        return self.two_lines_on_3_symbols or self.has_tripled_element or self.has_intercalate

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class PathState:
    """A rainbow path a_1 b_1 a_2 ... b_{t-1} a_t with both ends in A."""

    a_path: list[int]
    b_path: list[int]
    used_colors: set[int]

    def blocked(self, coloring: EdgeColoring, a: int) -> set[int]:
        """S_a: B-vertices joined to ``a`` by an edge whose color is already used."""
        return {j for j in range(coloring.n) if coloring.color(a, j) in self.used_colors}


def to_coloring(rect: LatinRectangle) -> EdgeColoring:
    return EdgeColoring(rect.rows, rect.cols, rect.grid)


def to_rectangle(coloring: EdgeColoring) -> LatinRectangle:
    return LatinRectangle(coloring.colors)


def _as_coloring(c) -> EdgeColoring:
    if isinstance(c, EdgeColoring):
        return c
    if isinstance(c, LatinRectangle):
        return to_coloring(c)
    g = as_array(c)
    return EdgeColoring(len(g), len(g[0]), g)


def _check_k(coloring: EdgeColoring, k: int) -> None:
    if k < 2:
        raise ValueError("cycle half-length k must be at least 2")
    if k > min(coloring.m, coloring.n):
        raise KTooLarge(f"no {2 * k}-cycle fits in K_{{{coloring.m},{coloring.n}}}")


def _walk(
    g: Grid,
    m: int,
    n: int,
    k: int,
    a1: int,
    visit: Callable[[list[int], list[int]], bool],
    rainbow: bool = True,
) -> bool:
    """DFS over canonical 2k-cycles anchored at ``a1``; stops once ``visit`` returns True."""
    a = [a1]
    b: list[int] = []
    first = g[a1]

    def rec(colors: int, amask: int, bmask: int) -> bool:
        row = g[a[-1]]
        last = len(a) == k
        for bt in range(n):
            if bmask >> bt & 1:
                continue
            c1 = row[bt]
            if rainbow and colors >> c1 & 1:
                continue
            if last:
                if bt <= b[0]:
                    continue
                c2 = first[bt]
                if rainbow and (colors >> c2 & 1 or c2 == c1):
                    continue
                b.append(bt)
                stop = visit(a, b)
                b.pop()
                if stop:
                    return True
                continue
            cs = colors | (1 << c1)
            b.append(bt)
            for an in range(a1 + 1, m):
                if amask >> an & 1:
                    continue
                c2 = g[an][bt]
                if rainbow and cs >> c2 & 1:
                    continue
                a.append(an)
                if rec(cs | (1 << c2), amask | (1 << an), bmask | (1 << bt)):
                    return True
                a.pop()
            b.pop()
        return False

    return rec(0, 1 << a1, 0)


def _certificate(g: Grid, a: list[int], b: list[int]) -> RainbowCycleCertificate:
    k = len(a)
    colors = []
    for i in range(k):
        colors.append(g[a[i]][b[i]])
        colors.append(g[a[(i + 1) % k]][b[i]])
    return RainbowCycleCertificate(tuple(a), tuple(b), tuple(colors))


def _first_from_anchor(args) -> Optional[RainbowCycleCertificate]:
    g, m, n, k, a1 = args
    found = []

    def visit(a, b):
        found.append(_certificate(g, a, b))
        return True

    _walk(g, m, n, k, a1, visit)
    return found[0] if found else None


def find_rainbow_cycle(coloring, k: int, threads: int = 1) -> Optional[RainbowCycleCertificate]:
    """Lexicographically first rainbow 2k-cycle, or None if the coloring has none.

    With ``threads > 1`` the anchors are searched in separate processes; the
    result is the one from the smallest anchor, identical to the serial run.
    """
    col = _as_coloring(coloring)
    _check_k(col, k)
    g, m, n = col.colors, col.m, col.n
    anchors = range(m - k + 1)
    if threads <= 1:
        for a1 in anchors:
            cert = _first_from_anchor((g, m, n, k, a1))
            if cert is not None:
                return cert
        return None
    with ProcessPoolExecutor(max_workers=threads) as pool:
        for cert in pool.map(_first_from_anchor, [(g, m, n, k, a1) for a1 in anchors]):
            if cert is not None:
                return cert
    return None


def iter_rainbow_cycles(coloring, k: int) -> Iterator[RainbowCycleCertificate]:
    col = _as_coloring(coloring)
    _check_k(col, k)
    for a, b in _collect(col, k, rainbow=True):
        yield _certificate(col.colors, a, b)


def _collect(col: EdgeColoring, k: int, rainbow: bool) -> list[tuple[tuple, tuple]]:
    out = []

    def visit(a, b):
        out.append((tuple(a), tuple(b)))
        return False

    for a1 in range(col.m - k + 1):
        _walk(col.colors, col.m, col.n, k, a1, visit, rainbow=rainbow)
    return out


def count_rainbow_cycles(coloring, k: int) -> int:
    col = _as_coloring(coloring)
    _check_k(col, k)
    return len(_collect(col, k, rainbow=True))


def iter_cycles(m: int, n: int, k: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Every 2k-cycle of K_{m,n} in canonical form, colors ignored."""
    if k < 2 or k > min(m, n):
        raise KTooLarge(f"no {2 * k}-cycle fits in K_{{{m},{n}}}")
    zero = EdgeColoring(m, n, tuple(tuple(0 for _ in range(n)) for _ in range(m)))
    yield from _collect(zero, k, rainbow=False)


def validate_certificate(coloring, cert: RainbowCycleCertificate) -> None:
    """Re-check a certificate from scratch; raises InvalidCertificate on any defect."""
    col = _as_coloring(coloring)
    a, b = cert.a_vertices, cert.b_vertices
    k = len(a)
    if k < 2 or len(b) != k:
        raise InvalidCertificate("a cycle needs k >= 2 vertices on each side")
    if len(set(a)) != k or len(set(b)) != k:
        raise InvalidCertificate("repeated vertex")
    if not all(0 <= x < col.m for x in a) or not all(0 <= y < col.n for y in b):
        raise InvalidCertificate("vertex index out of range")
    if len(cert.colors) != 2 * k:
        raise InvalidCertificate("a 2k-cycle has 2k colors")
    actual = [col.color(i, j) for i, j in cert.edges()]
    if list(cert.colors) != actual:
        raise InvalidCertificate(f"recorded colors {list(cert.colors)} differ from {actual}")
    if len(set(actual)) != 2 * k:
        raise InvalidCertificate("cycle is not rainbow")


def constructive_find(coloring, k: int) -> RainbowCycleCertificate:
    """Build a rainbow 2k-cycle in an n-colored K_{k,n} with n >= 5k - 6.

    Grows the rainbow path a_1 b_1 ... a_t one A-vertex at a time.  While
    t < k, at most 5t - 6 B-vertices are ruled out as the next b (used colors
    seen from a_t or a_{t+1}, plus the path's own b's), so one is always left.
    At t = k the same count gives at most 5k - 7 bad closing vertices.
    A-vertices are taken in index order and the smallest usable b is chosen.
    """
    col = _as_coloring(coloring)
    if col.m != k:
        raise PreconditionViolated(f"expected K_{{{k},n}}, got {col.m} A-vertices")
    if k < 2:
        raise PreconditionViolated("k must be at least 2")
    if col.n < 5 * k - 6:
        raise PreconditionViolated(f"n = {col.n} < 5k - 6 = {5 * k - 6}")

    state = PathState([0], [], set())
    for nxt in range(1, k):
        at = state.a_path[-1]
        bad = state.blocked(col, at) | state.blocked(col, nxt) | set(state.b_path)
        free = [j for j in range(col.n) if j not in bad]
        if not free:
            raise AssertionError("extension bound failed; coloring is not proper")
        b = free[0]
        state.b_path.append(b)
        state.used_colors |= {col.color(at, b), col.color(nxt, b)}
        state.a_path.append(nxt)

    first, last = state.a_path[0], state.a_path[-1]
    bad = state.blocked(col, first) | state.blocked(col, last) | set(state.b_path)
    free = [j for j in range(col.n) if j not in bad]
    if not free:
        raise AssertionError("closing bound failed; coloring is not proper")
    state.b_path.append(free[0])

    cert = _certificate(col.colors, state.a_path, state.b_path)
    validate_certificate(col, cert)
    return cert


def quadrant_profile(
    cert: RainbowCycleCertificate, block: int, coloring: Optional[EdgeColoring] = None
) -> QuadrantProfile:
    """Count the cycle's edges in each block of a 2*block x 2*block array."""
    if coloring is not None:
        col = _as_coloring(coloring)
        if (col.m, col.n) != (2 * block, 2 * block):
            raise DimensionMismatch(f"{col.m} x {col.n} coloring is not {2 * block} x {2 * block}")
    counts = {"a": 0, "b": 0, "c": 0, "d": 0}
    for i, j in cert.edges():
        if not (0 <= i < 2 * block and 0 <= j < 2 * block):
            raise DimensionMismatch(f"edge ({i}, {j}) lies outside the {2 * block}-square")
        top, left = i < block, j < block
        key = {(True, True): "a", (True, False): "b", (False, False): "c", (False, True): "d"}
        counts[key[top, left]] += 1
    return QuadrantProfile(**counts)


def classify_3x3(view: ArrayLike) -> Classification3x3:
    a = as_array(view)
    if len(a) != 3 or any(len(r) != 3 for r in a):
        raise NotSquareView("classification is defined on 3 x 3 views")
    flat = [x for r in a for x in r]
    lines = list(a) + list(zip(*a))
    two_lines = any(
        len(set(lines[i]) | set(lines[j])) == 3
        for group in ((0, 1, 2), (3, 4, 5))
        for i in group
        for j in group
        if i < j
    )
    return Classification3x3(
        distinct_count=distinct_symbol_count(a),
        has_intercalate=find_intercalate(a) is not None,
        has_tripled_element=any(flat.count(x) >= 3 for x in set(flat)),
        two_lines_on_3_symbols=two_lines,
        rainbow_c6_free=not disjoint_transversal_pairs(a),
    )


__all__ = [
    "Classification3x3",
    "DimensionMismatch",
    "EdgeColoring",
    "InvalidCertificate",
    "KTooLarge",
    "LatinError",
    "PathState",
    "PreconditionViolated",
    "QuadrantProfile",
    "RainbowCycleCertificate",
    "classify_3x3",
    "constructive_find",
    "count_rainbow_cycles",
    "find_rainbow_cycle",
    "iter_cycles",
    "iter_rainbow_cycles",
    "quadrant_profile",
    "to_coloring",
    "to_rectangle",
    "validate_certificate",
]
