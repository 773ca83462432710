"""Faces of chessboard and matching complexes.

A face of a chessboard complex is a matching of a complete bipartite graph,
stored as a sorted tuple of ``(row, col)`` pairs; ``(3, 1)`` is the edge
between row vertex 3 and barred column vertex 1.  Faces of the matching
complex of ``K_N`` are sorted tuples of ``(u, v)`` pairs with ``u < v``.

All enumeration is in canonical order: lexicographic on the sorted edge
sequence.  Labels of sub-boards are kept as given so that faces of disjoint
sub-boards can be wedged together without relabelling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

Edge = tuple[int, int]
Face = tuple[Edge, ...]


class NotAFace(ValueError):
    """Raised when an edge set is not a face of the requested complex."""


class ComplexSpec:
    """Base class for the complexes this package knows how to build.

    Subclasses describe a graph (its ordered edge list), whether it is
    bipartite, and optionally a predicate excluding some matchings.
    """

    bipartite = True

    def edges(self) -> tuple[Edge, ...]:
        raise NotImplementedError

    def admits(self, face: Face) -> bool:
        return True

    def dim_bound(self) -> int:
        raise NotImplementedError

    @property
    def key(self) -> str:
        return repr(self)


def _vertices(edge: Edge, bipartite: bool) -> tuple[int, int]:
    # row r -> r, column c -> -c keeps the two blocks apart
    return (edge[0], -edge[1]) if bipartite else edge


@dataclass(frozen=True)
class Chessboard(ComplexSpec):
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"chessboard needs m, n >= 1, got ({self.m}, {self.n})")

    def edges(self):
        return tuple((i, j) for i in range(1, self.m + 1) for j in range(1, self.n + 1))

    def dim_bound(self):
        return min(self.m, self.n) - 1


@dataclass(frozen=True)
class MatchingKn(ComplexSpec):
    N: int
    bipartite = False

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"K_N needs N >= 1, got {self.N}")

    def edges(self):
        return tuple((u, v) for u in range(1, self.N + 1) for v in range(u + 1, self.N + 1))

    def dim_bound(self):
        return self.N // 2 - 1


@dataclass(frozen=True)
class Gamma(ComplexSpec):
    """Matchings of ``K_{m,n}`` avoiding the edges ``s 1`` for ``s >= 3``."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 2 or self.n < 1:
            raise ValueError(f"Gamma needs m >= 2, n >= 1, got ({self.m}, {self.n})")

    def edges(self):
        return tuple(
            (i, j)
            for i in range(1, self.m + 1)
            for j in range(1, self.n + 1)
            if not (j == 1 and i >= 3)
        )

    def dim_bound(self):
        return min(self.m, self.n) - 1


@dataclass(frozen=True)
class FiltrationStage(ComplexSpec):
    """Stage ``i`` of the filtration ``D0 < D1 < D2 = Gamma(m, n)``.

    ``D1`` drops every face holding both ``1 s`` and ``2 t`` with
    ``s, t >= 2``; ``D0`` further drops the vertices ``1 s`` and ``2 s`` for
    ``s >= 2``, leaving ``M({1,2},{1}) * M([3,m],[2,n])``.
    """

    m: int
    n: int
    i: int

    def __post_init__(self):
        if self.m < 2 or self.n < 3:
            raise ValueError(f"filtration needs m >= 2, n >= 3, got ({self.m}, {self.n})")
        if self.i not in (0, 1, 2):
            raise ValueError(f"filtration stage must be 0, 1 or 2, got {self.i}")

    def edges(self):
        gamma = Gamma(self.m, self.n).edges()
        if self.i == 0:
            return tuple(e for e in gamma if not (e[0] <= 2 and e[1] >= 2))
        return gamma

    def admits(self, face):
        if self.i != 1:
            return True
        has1 = has2 = False
        for r, c in face:
            if c >= 2:
                if r == 1:
                    has1 = True
                elif r == 2:
                    has2 = True
        return not (has1 and has2)

    def dim_bound(self):
        return min(self.m, self.n) - 1


@dataclass(frozen=True)
class SubBoard(ComplexSpec):
    """Chessboard complex on row labels ``rows`` and column labels ``cols``.

    ``exclude`` removes individual edges; an empty row or column set gives
    the complex whose only face is the empty face.
    """

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    exclude: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(sorted(set(self.rows))))
        object.__setattr__(self, "cols", tuple(sorted(set(self.cols))))
        object.__setattr__(self, "exclude", frozenset(tuple(e) for e in self.exclude))
        if any(r < 1 for r in self.rows) or any(c < 1 for c in self.cols):
            raise ValueError("sub-board labels must be positive")

    def edges(self):
        return tuple((i, j) for i in self.rows for j in self.cols if (i, j) not in self.exclude)

    def dim_bound(self):
        return min(len(self.rows), len(self.cols)) - 1

    @property
    def key(self):
        ex = ",".join(f"{r}:{c}" for r, c in sorted(self.exclude))
        return f"SubBoard(rows={list(self.rows)},cols={list(self.cols)},exclude=[{ex}])"


@dataclass(frozen=True)
class Void(ComplexSpec):
    """The void complex: no faces at all, not even the empty one."""

    def edges(self):
        return ()

    def dim_bound(self):
        return -2


def board(m: int, n: int) -> ComplexSpec:
    """``M_{m,n}`` for any ``m, n >= 0``; degenerate boards become sub-boards."""
    if m >= 1 and n >= 1:
        return Chessboard(m, n)
    return SubBoard(tuple(range(1, m + 1)), tuple(range(1, n + 1)))


def _generate(spec: ComplexSpec, size: int) -> Iterator[Face]:
    edges = spec.edges()
    bip = spec.bipartite
    verts = [_vertices(e, bip) for e in edges]
    used: set[int] = set()
    chosen: list[Edge] = []

    def rec(start: int) -> Iterator[Face]:
        if len(chosen) == size:
            face = tuple(chosen)
            if spec.admits(face):
                yield face
            return
        need = size - len(chosen)
        for k in range(start, len(edges) - need + 1):
            a, b = verts[k]
            if a in used or b in used:
                continue
            used.add(a)
            used.add(b)
            chosen.append(edges[k])
            yield from rec(k + 1)
            chosen.pop()
            used.discard(a)
            used.discard(b)

    yield from rec(0)


@lru_cache(maxsize=256)
def _faces_cached(spec: ComplexSpec, d: int) -> tuple[Face, ...]:
    if isinstance(spec, Void) or d < -1 or d > spec.dim_bound():
        return ()
    return tuple(_generate(spec, d + 1))


def enumerate_faces(spec: ComplexSpec, d: int) -> list[Face]:
    """All ``d``-faces of ``spec`` in canonical order (``d = -1`` is the empty face)."""
    return list(_faces_cached(spec, d))


def faces(spec: ComplexSpec, d: int) -> tuple[Face, ...]:
    """Like :func:`enumerate_faces` but returns the shared cached tuple."""
    return _faces_cached(spec, d)


@lru_cache(maxsize=256)
def _index_map(spec: ComplexSpec, d: int) -> dict[Face, int]:
    return {f: k for k, f in enumerate(_faces_cached(spec, d))}


def index_map(spec: ComplexSpec, d: int) -> dict[Face, int]:
    return _index_map(spec, d)


def is_matching(face, bipartite: bool = True) -> bool:
    seen: set[int] = set()
    for e in face:
        for v in _vertices(tuple(e), bipartite):
            if v in seen:
                return False
            seen.add(v)
    return True


def face_index(spec: ComplexSpec, d: int, face) -> int:
    """Position of ``face`` in the canonical order of ``d``-faces of ``spec``."""
    face = tuple(sorted(tuple(e) for e in face))
    if len(face) != d + 1:
        raise NotAFace(f"{face} has {len(face)} edges, expected {d + 1}")
    if not is_matching(face, spec.bipartite):
        raise NotAFace(f"{face} is not a matching")
    try:
        return _index_map(spec, d)[face]
    except KeyError:
        raise NotAFace(f"{face} is not a face of {spec.key}") from None


def contains(spec: ComplexSpec, face: Face) -> bool:
    face = tuple(sorted(face))
    return face in _index_map(spec, len(face) - 1)


def complex_dimension(spec: ComplexSpec) -> int:
    """Top dimension of ``spec`` (``-1`` for ``{empty}``, ``-2`` for the void complex)."""
    if isinstance(spec, Chessboard):
        return min(spec.m, spec.n) - 1
    if isinstance(spec, MatchingKn):
        return spec.N // 2 - 1
    for d in range(spec.dim_bound(), -2, -1):
        if next(_generate(spec, d + 1), None) is not None:
            return d
    return -2


def face_count(m: int, n: int, d: int) -> int:
    """Number of ``d``-faces of ``M_{m,n}``."""
    k = d + 1
    if k < 0 or k > min(m, n):
        return 0
    return math.comb(m, k) * math.comb(n, k) * math.factorial(k)


def nu(m: int, n: int) -> int:
    """Bottom degree of nonvanishing homology, ``min(m-1, ceil((m+n-4)/3))``."""
    if not 1 <= m <= n:
        raise ValueError(f"nu needs 1 <= m <= n, got ({m}, {n})")
    return min(m - 1, -((4 - m - n) // 3))


def embed_face(face: Face, m: int) -> Face:
    """Image of a face of ``M_{m,n}`` in ``M_{m+n}`` under ``j -> m + j``."""
    return tuple(sorted((i, m + j) for i, j in face))


def max_faces_per_degree(spec: ComplexSpec) -> int:
    """Largest chain-group dimension, from closed forms where available."""
    if isinstance(spec, (Chessboard, Gamma, FiltrationStage)):
        return max(face_count(spec.m, spec.n, d) for d in range(-1, spec.dim_bound() + 1))
    if isinstance(spec, SubBoard):
        m, n = len(spec.rows), len(spec.cols)
        return max(face_count(m, n, d) for d in range(-1, min(m, n)))
    if isinstance(spec, MatchingKn):
        N = spec.N
        return max(
            math.comb(N, 2 * k) * math.prod(range(2 * k - 1, 0, -2)) for k in range(N // 2 + 1)
        )
    return 1


def parse_spec(kind: str, m: int | None = None, n: int | None = None,
               N: int | None = None, stage: int | None = None) -> ComplexSpec:
    """Build a spec from CLI-style arguments."""
    kind = kind.lower()
    if kind == "chessboard":
        return Chessboard(m, n)
    if kind == "matching":
        return MatchingKn(N)
    if kind == "gamma":
        return Gamma(m, n)
    if kind in ("stage", "filtration"):
        return FiltrationStage(m, n, stage)
    raise ValueError(f"unknown complex kind {kind!r}")
