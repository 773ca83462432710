"""Sparse chains, wedge products, relabelling and boundary matrices.

The canonical generator of a face is the wedge of its edges in increasing
order.  A wedge written in any other order is stored as the sign of the
sorting permutation times the canonical face, so chain identities can be
compared term by term.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from .complexes import ComplexSpec, Face, Void, _vertices, faces, index_map


class DisjointnessViolation(ValueError):
    """Two wedge factors share a vertex."""


class CollisionError(ValueError):
    """A relabelling merges two labels that are in use."""


class NotASubcomplex(ValueError):
    """The small member of a pair is not contained in the big one."""


@dataclass(frozen=True)
class Ring:
    """``p=None`` is the integers; otherwise the prime field ``Z/p``."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def reduce(self, x: int) -> int:
        return x if self.p is None else x % self.p

    @property
    def label(self) -> str:
        return "Z" if self.p is None else f"Zp:{self.p}"

    @classmethod
    def parse(cls, text: str) -> "Ring":
        text = text.strip()
        if text in ("Z", "ZZ"):
            return cls(None)
        if text in ("Q", "QQ"):
            raise ValueError("rational coefficients are obtained from the Z computation")
        for prefix in ("Zp:", "Z/", "GF", "Z"):
            if text.startswith(prefix):
                return cls(int(text[len(prefix):]))
        raise ValueError(f"unknown ring {text!r}")

    def __repr__(self):
        return self.label


ZZ = Ring(None)


def GF(p: int) -> Ring:
    return Ring(p)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


def _sort_sign(edges: list) -> tuple[Face, int]:
    """Sorted tuple and the sign of the sorting permutation."""
    sign = 1
    n = len(edges)
    for i in range(n):
        for j in range(i + 1, n):
            if edges[i] > edges[j]:
                sign = -sign
    return tuple(sorted(edges)), sign


def _norm_edge(e, bipartite: bool) -> tuple[int, int]:
    e = (int(e[0]), int(e[1]))
    if not bipartite and e[0] > e[1]:
        e = (e[1], e[0])
    return e


class Chain:
    """A formal sum of faces of one dimension with coefficients in ``ring``."""

    __slots__ = ("ring", "dim", "terms", "bipartite")

    def __init__(self, terms: Mapping[Face, int] | None = None, dim: int | None = None,
                 ring: Ring = ZZ, bipartite: bool = True):
        clean: dict[Face, int] = {}
        for f, c in (terms or {}).items():
            c = ring.reduce(c)
            if c:
                clean[f] = c
        if dim is None:
            dim = len(next(iter(clean))) - 1 if clean else 0
        for f in clean:
            if len(f) != dim + 1:
                raise ValueError(f"face {f} does not have dimension {dim}")
        self.ring = ring
        self.dim = dim
        self.terms = clean
        self.bipartite = bipartite

    @classmethod
    def from_wedges(cls, monomials: Iterable[tuple[int, Iterable]], ring: Ring = ZZ,
                    bipartite: bool = True, dim: int | None = None) -> "Chain":
        """Sum of ``coef * e_0 ^ ... ^ e_d`` with edges in the order written."""
        acc: dict[Face, int] = {}
        for coef, edges in monomials:
            edges = [_norm_edge(e, bipartite) for e in edges]
            if not _disjoint(edges, bipartite):
                raise DisjointnessViolation(f"edges {edges} share a vertex")
            face, sign = _sort_sign(edges)
            acc[face] = acc.get(face, 0) + sign * coef
            if dim is None:
                dim = len(face) - 1
        return cls(acc, dim, ring, bipartite)

    @classmethod
    def face(cls, face, ring: Ring = ZZ, bipartite: bool = True) -> "Chain":
        return cls.from_wedges([(1, face)], ring, bipartite)

    @classmethod
    def zero(cls, dim: int, ring: Ring = ZZ, bipartite: bool = True) -> "Chain":
        return cls({}, dim, ring, bipartite)

    def _like(self, terms) -> "Chain":
        return Chain(terms, self.dim, self.ring, self.bipartite)

    def __add__(self, other: "Chain") -> "Chain":
        self._check_compatible(other)
        acc = dict(self.terms)
        for f, c in other.terms.items():
            acc[f] = acc.get(f, 0) + c
        return self._like(acc)

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __neg__(self) -> "Chain":
        return self._like({f: -c for f, c in self.terms.items()})

    def __rmul__(self, k: int) -> "Chain":
        return self._like({f: k * c for f, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return (self.dim, self.ring, self.terms) == (other.dim, other.ring, other.terms)

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return f"Chain(0, dim={self.dim})"
        parts = []
        for f, c in sorted(self.terms.items()):
            parts.append(f"{c:+d}*" + "^".join(f"{a}.{b}" for a, b in f))
        return "Chain(" + " ".join(parts) + ")"

    def _check_compatible(self, other: "Chain"):
        if self.ring != other.ring:
            raise ValueError("chains over different rings")
        if (self.terms and other.terms) and self.dim != other.dim:
            raise ValueError(f"dimension mismatch {self.dim} vs {other.dim}")

    def boundary(self) -> "Chain":
        return boundary(self)

    def rows(self) -> set[int]:
        return {e[0] for f in self.terms for e in f}

    def cols(self) -> set[int]:
        return {e[1] for f in self.terms for e in f}

    def to_ring(self, ring: Ring) -> "Chain":
        return Chain(self.terms, self.dim, ring, self.bipartite)

    def to_json(self) -> dict:
        out = {
            "ring": self.ring.label,
            "dim": self.dim,
            "terms": [{"c": c, "f": [list(e) for e in f]} for f, c in sorted(self.terms.items())],
        }
        if not self.bipartite:
            out["graph"] = "complete"
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict | str) -> "Chain":
        if isinstance(data, str):
            data = json.loads(data)
        bip = data.get("graph", "bipartite") != "complete"
        ring = Ring.parse(data["ring"])
        chain = cls.from_wedges(((t["c"], t["f"]) for t in data["terms"]), ring, bip,
                                dim=data["dim"])
        return chain


def _disjoint(edges, bipartite: bool) -> bool:
    seen: set[int] = set()
    for e in edges:
        for v in _vertices(e, bipartite):
            if v in seen:
                return False
            seen.add(v)
    return True


def boundary(c: Chain) -> Chain:
    """Alternating-sum boundary; faces of dimension 0 map to the empty face."""
    if c.dim < 0:
        return Chain.zero(c.dim - 1, c.ring, c.bipartite)
    acc: dict[Face, int] = {}
    for f, coef in c.terms.items():
        for i in range(len(f)):
            g = f[:i] + f[i + 1:]
            acc[g] = acc.get(g, 0) + (coef if i % 2 == 0 else -coef)
    return Chain(acc, c.dim - 1, c.ring, c.bipartite)


def wedge(a: Chain, b: Chain) -> Chain:
    """Bilinear wedge of chains on disjoint vertex sets."""
    if a.ring != b.ring:
        raise ValueError("chains over different rings")
    if a.bipartite != b.bipartite:
        raise ValueError("cannot wedge bipartite and complete-graph chains")
    bip = a.bipartite
    acc: dict[Face, int] = {}
    for fa, ca in a.terms.items():
        va = {v for e in fa for v in _vertices(e, bip)}
        for fb, cb in b.terms.items():
            if any(v in va for e in fb for v in _vertices(e, bip)):
                raise DisjointnessViolation(f"{fa} and {fb} share a vertex")
            # both sorted: sign counts pairs (x in fa, y in fb) with x > y
            inv = 0
            for x in fa:
                for y in fb:
                    if x > y:
                        inv += 1
            face = tuple(sorted(fa + fb))
            acc[face] = acc.get(face, 0) + (-1) ** inv * ca * cb
    return Chain(acc, a.dim + b.dim + 1, a.ring, bip)


def wedge_all(*chains: Chain) -> Chain:
    out = chains[0]
    for c in chains[1:]:
        out = wedge(out, c)
    return out


def relabel(c: Chain, rowmap: Mapping[int, int] | None = None,
            colmap: Mapping[int, int] | None = None) -> Chain:
    """Apply a vertex relabelling and renormalize signs.

    Labels missing from a map are fixed.  For complete-graph chains only
    ``rowmap`` is used and it acts on both endpoints.
    """
    rowmap = dict(rowmap or {})
    colmap = dict(colmap or {})
    if c.bipartite:
        _check_injective(c.rows(), rowmap, "row")
        _check_injective(c.cols(), colmap, "column")
    else:
        _check_injective({v for f in c.terms for e in f for v in e}, rowmap, "vertex")
    acc: dict[Face, int] = {}
    for f, coef in c.terms.items():
        if c.bipartite:
            edges = [(rowmap.get(r, r), colmap.get(s, s)) for r, s in f]
        else:
            edges = [_norm_edge((rowmap.get(u, u), rowmap.get(v, v)), False) for u, v in f]
        face, sign = _sort_sign(edges)
        acc[face] = acc.get(face, 0) + sign * coef
    return Chain(acc, c.dim, c.ring, c.bipartite)


def _check_injective(labels, mapping, what):
    images: dict[int, int] = {}
    for x in labels:
        y = mapping.get(x, x)
        if y in images and images[y] != x:
            raise CollisionError(f"{what} labels {images[y]} and {x} both map to {y}")
        images[y] = x


def shift(c: Chain, drow: int, dcol: int) -> Chain:
    """Relabel ``i j`` as ``(i + drow) (j + dcol)``."""
    return relabel(c, {r: r + drow for r in c.rows()}, {s: s + dcol for s in c.cols()})


def transpose(c: Chain) -> Chain:
    """Replace every edge ``i j`` by ``j i``."""
    acc: dict[Face, int] = {}
    for f, coef in c.terms.items():
        face, sign = _sort_sign([(b, a) for a, b in f])
        acc[face] = acc.get(face, 0) + sign * coef
    return Chain(acc, c.dim, c.ring, c.bipartite)


def embed(c: Chain, m: int) -> Chain:
    """View a chain on ``M_{m,n}`` inside ``M_{m+n}`` via ``j -> m + j``."""
    acc: dict[Face, int] = {}
    for f, coef in c.terms.items():
        face, sign = _sort_sign([(i, m + j) for i, j in f])
        acc[face] = acc.get(face, 0) + sign * coef
    return Chain(acc, c.dim, c.ring, bipartite=False)


class SparseMatrix:
    """Column-major sparse matrix with exact integer (or ``Z/p``) entries."""

    __slots__ = ("nrows", "ncols", "columns")

    def __init__(self, nrows: int, ncols: int, columns: list[dict[int, int]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.columns = columns if columns is not None else [dict() for _ in range(ncols)]
        if len(self.columns) != ncols:
            raise ValueError("column count mismatch")

    @classmethod
    def from_dense(cls, rows: list[list[int]]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        cols = [{i: rows[i][j] for i in range(nrows) if rows[i][j]} for j in range(ncols)]
        return cls(nrows, ncols, cols)

    @classmethod
    def from_triplets(cls, nrows, ncols, triplets) -> "SparseMatrix":
        M = cls(nrows, ncols)
        for i, j, v in triplets:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError((i, j))
            if v:
                M.columns[j][i] = M.columns[j].get(i, 0) + v
                if not M.columns[j][i]:
                    del M.columns[j][i]
        return M

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def triplets(self):
        for j, col in enumerate(self.columns):
            for i in sorted(col):
                yield i, j, col[i]

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, j, v in self.triplets():
            out[i][j] = v
        return out

    def mod(self, p: int) -> "SparseMatrix":
        cols = [{i: v % p for i, v in c.items() if v % p} for c in self.columns]
        return SparseMatrix(self.nrows, self.ncols, cols)

    def transpose(self) -> "SparseMatrix":
        T = SparseMatrix(self.ncols, self.nrows)
        for i, j, v in self.triplets():
            T.columns[i][j] = v
        return T

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = []
        for col in other.columns:
            acc: dict[int, int] = {}
            for k, v in col.items():
                for i, w in self.columns[k].items():
                    acc[i] = acc.get(i, 0) + v * w
            out.append({i: x for i, x in acc.items() if x})
        return SparseMatrix(self.nrows, other.ncols, out)

    def is_zero(self) -> bool:
        return all(not c for c in self.columns)

    def select_columns(self, keep: Iterable[int]) -> "SparseMatrix":
        cols = [self.columns[j] for j in keep]
        return SparseMatrix(self.nrows, len(cols), cols)

    def dumps(self, dim: int | None = None) -> str:
        """Sparse triplet text: header ``%dim rows cols nnz``, then ``row col value``."""
        lines = [f"%{'' if dim is None else dim} {self.nrows} {self.ncols} {self.nnz}"]
        lines.extend(f"{i} {j} {v}" for i, j, v in self.triplets())
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "SparseMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = lines[0].lstrip("%").split()
        nrows, ncols, nnz = (int(x) for x in head[-3:])
        trip = [tuple(int(x) for x in ln.split()) for ln in lines[1:]]
        if len(trip) != nnz:
            raise ValueError(f"expected {nnz} entries, found {len(trip)}")
        return cls.from_triplets(nrows, ncols, trip)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.columns == other.columns

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


def _boundary_columns(dfaces, rowindex, ring: Ring):
    p = ring.p
    neg = -1 if p is None else p - 1
    cols = []
    for f in dfaces:
        col = {}
        for i in range(len(f)):
            r = rowindex.get(f[:i] + f[i + 1:])
            if r is not None:
                col[r] = 1 if i % 2 == 0 else neg
        cols.append(col)
    return cols


def boundary_matrix(spec: ComplexSpec, d: int, ring: Ring = ZZ) -> SparseMatrix:
    """Matrix of ``C_d -> C_{d-1}``; rows are (d-1)-faces, columns d-faces."""
    cols_f = faces(spec, d)
    rowindex = index_map(spec, d - 1)
    return SparseMatrix(len(rowindex), len(cols_f), _boundary_columns(cols_f, rowindex, ring))


def check_subcomplex(big: ComplexSpec, small: ComplexSpec) -> None:
    if isinstance(small, Void):
        return
    top = max(small.dim_bound(), -1)
    for d in range(-1, top + 1):
        idx = index_map(big, d)
        for f in faces(small, d):
            if f not in idx:
                raise NotASubcomplex(f"{f} lies in {small.key} but not in {big.key}")


def relative_faces(big: ComplexSpec, small: ComplexSpec, d: int) -> tuple[Face, ...]:
    small_idx = index_map(small, d) if not isinstance(small, Void) else {}
    return tuple(f for f in faces(big, d) if f not in small_idx)


def relative_boundary_matrix(pair: tuple[ComplexSpec, ComplexSpec], d: int,
                             ring: Ring = ZZ) -> SparseMatrix:
    """Boundary of the quotient complex ``C(big) / C(small)`` in degree ``d``."""
    big, small = pair
    check_subcomplex(big, small)
    cols_f = relative_faces(big, small, d)
    rows_f = relative_faces(big, small, d - 1)
    rowindex = {f: k for k, f in enumerate(rows_f)}
    return SparseMatrix(len(rows_f), len(cols_f), _boundary_columns(cols_f, rowindex, ring))


def chain_vector(c: Chain, index: Mapping[Face, int]) -> dict[int, int]:
    """Coordinates of ``c`` in a face basis; faces outside ``index`` raise KeyError."""
    out = {}
    for f, coef in c.terms.items():
        try:
            out[index[f]] = coef
        except KeyError:
            raise KeyError(f"face {f} of the chain is not in the complex") from None
    return out
