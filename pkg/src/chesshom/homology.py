"""Integral and mod-p homology of the complexes in :mod:`chesshom.complexes`.

All boundary maps of a complex are reduced together.  Low degrees are
processed bottom-up and high degrees top-down, meeting at the largest matrix;
each matrix drops the columns indexed by the unit-pivot rows of the map above
it and the rows indexed by the unit-pivot columns of the map below it.  Both
reductions keep the relevant lattices intact over the integers, so the
invariant factors are unchanged while the hard middle matrix shrinks from
both sides.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Callable

from . import __version__
from ._dense import diagonalize, invariant_factors, smith_with_transforms
from ._elim import eliminate
from .chains import (Chain, Ring, SparseMatrix, ZZ, boundary, boundary_matrix, chain_vector,
                     check_subcomplex, relative_boundary_matrix, relative_faces)
from .complexes import ComplexSpec, Void, _faces_cached, _index_map, faces, index_map

STRATEGIES = ("markowitz", "first")


class NotACycle(ValueError):
    """The chain handed to :func:`class_order` has nonzero boundary."""


@dataclass(frozen=True)
class HomologyGroup:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(sorted(int(t) for t in self.torsion)))
        ts = self.torsion
        if any(t < 2 for t in ts) or any(ts[i + 1] % ts[i] for i in range(len(ts) - 1)):
            raise ValueError(f"torsion {ts} is not a divisibility chain of invariants > 1")

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def to_json(self) -> dict:
        return {"free": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data: dict) -> "HomologyGroup":
        return cls(int(data["free"]), tuple(data["torsion"]))

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        # repeated invariants are collapsed, Z_3 ⊕ Z_3 prints as Z_3^2
        for t in sorted(set(self.torsion)):
            k = self.torsion.count(t)
            parts.append(f"Z_{t}" if k == 1 else f"Z_{t}^{k}")
        return " ⊕ ".join(parts) if parts else "0"


@dataclass(frozen=True)
class ClassOrder:
    """Order of a homology class: ``zero``, ``finite`` (with ``n >= 2``) or ``infinite``."""

    kind: str
    n: int | None = None

    def __post_init__(self):
        if self.kind not in ("zero", "finite", "infinite"):
            raise ValueError(self.kind)
        if self.kind == "finite" and (self.n is None or self.n < 2):
            raise ValueError("a finite nonzero class has order at least 2")

    def __str__(self):
        if self.kind == "finite":
            return f"Finite({self.n})"
        return self.kind.capitalize()

    def to_json(self):
        return {"order": str(self), "n": self.n if self.kind == "finite" else None}


ZERO_CLASS = ClassOrder("zero")
INFINITE_CLASS = ClassOrder("infinite")


def group_exponent(g: HomologyGroup) -> int:
    """Largest torsion invariant, 0 when the torsion part is trivial."""
    return g.torsion[-1] if g.torsion else 0


@dataclass
class SNFResult:
    invariants: tuple[int, ...]
    shape: tuple[int, int]
    # set only by snf(..., transforms=True): U M V = D
    U: list | None = None
    V: list | None = None

    @property
    def rank(self) -> int:
        return len(self.invariants)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariants if d > 1)


@dataclass
class MapReduction:
    """Outcome of reducing one boundary map."""

    shape: tuple[int, int]
    rank: int
    torsion: tuple[int, ...] = ()
    pivot_rows: frozenset = field(default_factory=frozenset)
    pivot_cols: frozenset = field(default_factory=frozenset)


def _reduce_map(M: SparseMatrix, ring: Ring, strategy: str,
                drop_cols=frozenset(), drop_rows=frozenset()) -> MapReduction:
    keep = [j for j in range(M.ncols) if j not in drop_cols]
    if drop_rows:
        cols = [{i: v for i, v in M.columns[j].items() if i not in drop_rows} for j in keep]
    else:
        cols = [M.columns[j] for j in keep]
    red = eliminate(cols, M.nrows, modulus=ring.p, strategy=strategy)
    torsion: tuple[int, ...] = ()
    extra = 0
    if red.remainder:
        if ring.p is not None:
            raise AssertionError("nonzero remainder over a field")
        diag = _remainder_diagonal(red.remainder)
        extra = len(diag)
        torsion = tuple(d for d in invariant_factors(diag) if d > 1)
    return MapReduction(
        shape=M.shape,
        rank=len(red.pivots) + extra,
        torsion=torsion,
        pivot_rows=frozenset(r for r, _ in red.pivots),
        pivot_cols=frozenset(keep[c] for _, c in red.pivots),
    )


def _remainder_diagonal(remainder: dict[int, dict[int, int]]) -> list[int]:
    rows = sorted({i for c in remainder.values() for i in c})
    pos = {r: k for k, r in enumerate(rows)}
    cols = list(remainder.values())
    dense = [[0] * len(cols) for _ in rows]
    for j, c in enumerate(cols):
        for i, v in c.items():
            dense[pos[i]][j] = v
    diag, _, _ = diagonalize(dense)
    return diag


def reduce_chain_complex(matrix: Callable[[int], SparseMatrix], lo: int, hi: int,
                         ring: Ring = ZZ, strategy: str = "markowitz") -> dict[int, MapReduction]:
    """Reduce the boundary maps ``matrix(d)`` for ``lo <= d <= hi`` with two-sided clearing."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown pivot strategy {strategy!r}")
    if hi < lo:
        return {}
    mats = {d: matrix(d) for d in range(lo, hi + 1)}
    meet = max(mats, key=lambda d: (mats[d].nrows + mats[d].ncols, mats[d].nnz))
    out: dict[int, MapReduction] = {}
    for d in range(lo, meet):
        below = out.get(d - 1)
        out[d] = _reduce_map(mats[d], ring, strategy,
                             drop_rows=below.pivot_cols if below else frozenset())
    for d in range(hi, meet, -1):
        above = out.get(d + 1)
        out[d] = _reduce_map(mats[d], ring, strategy,
                             drop_cols=above.pivot_rows if above else frozenset())
    below, above = out.get(meet - 1), out.get(meet + 1)
    out[meet] = _reduce_map(mats[meet], ring, strategy,
                            drop_cols=above.pivot_rows if above else frozenset(),
                            drop_rows=below.pivot_cols if below else frozenset())
    return out


@lru_cache(maxsize=32)
def complex_reduction(spec: ComplexSpec, ring: Ring = ZZ,
                      strategy: str = "markowitz") -> dict[int, MapReduction]:
    """All boundary maps ``d = 0 .. dim`` of ``spec`` (``d = 0`` is the augmentation)."""
    if isinstance(spec, Void):
        return {}
    return reduce_chain_complex(lambda d: boundary_matrix(spec, d, ring), 0, spec.dim_bound(),
                                ring, strategy)


@lru_cache(maxsize=32)
def pair_reduction(big: ComplexSpec, small: ComplexSpec, ring: Ring = ZZ,
                   strategy: str = "markowitz") -> dict[int, MapReduction]:
    check_subcomplex(big, small)
    return reduce_chain_complex(lambda d: relative_boundary_matrix((big, small), d, ring),
                                0, big.dim_bound(), ring, strategy)


def clear_caches() -> None:
    """Drop the in-memory face tables and reductions (the disk cache is untouched)."""
    for fn in (complex_reduction, pair_reduction, _faces_cached, _index_map):
        fn.cache_clear()


def _group(dim_c: int, red: dict[int, MapReduction], d: int, ring: Ring) -> HomologyGroup:
    r_out = red[d].rank if d in red else 0
    r_in = red[d + 1].rank if d + 1 in red else 0
    free = dim_c - r_out - r_in
    torsion = red[d + 1].torsion if (d + 1 in red and ring.p is None) else ()
    return HomologyGroup(free, torsion)


class HomologyCache:
    """JSON files keyed by (spec, degree, ring, code version); writes are atomic renames."""

    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = os.fspath(directory or os.environ.get("CHESSHOM_CACHE", ".chesshom-cache"))

    @staticmethod
    def key(spec_key: str, d: int, ring: Ring) -> str:
        return f"{spec_key}|{d}|{ring.label}|{__version__}"

    def _path(self, key: str) -> str:
        h = hashlib.sha256(key.encode()).hexdigest()[:32]
        return os.path.join(self.directory, h + ".json")

    def get(self, key: str) -> HomologyGroup | None:
        try:
            with open(self._path(key)) as fh:
                data = json.load(fh)
        except (OSError, ValueError):
            return None
        if data.get("key") != key:
            return None
        return HomologyGroup.from_json(data["group"])

    def put(self, key: str, group: HomologyGroup) -> None:
        os.makedirs(self.directory, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump({"key": key, "group": group.to_json()}, fh, sort_keys=True)
            os.replace(tmp, self._path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def default_cache() -> HomologyCache | None:
    """A cache when ``CHESSHOM_CACHE`` is set, otherwise ``None``."""
    return HomologyCache() if os.environ.get("CHESSHOM_CACHE") else None


_ENV = object()


def homology(spec: ComplexSpec, d: int, ring: Ring = ZZ, strategy: str = "markowitz",
             cache=_ENV) -> HomologyGroup:
    """Reduced homology of ``spec`` in degree ``d``.

    Degrees above the dimension (or below -1) give the zero group.  Over a
    prime field the result has ``free_rank`` equal to the dimension.  By
    default the on-disk cache is used only when ``CHESSHOM_CACHE`` is set;
    pass ``cache=None`` to bypass it or a :class:`HomologyCache` to force it.
    """
    if d < -1 or d > spec.dim_bound():
        return HomologyGroup()
    if cache is _ENV:
        cache = default_cache()
    key = None
    if cache is not None:
        key = HomologyCache.key(spec.key, d, ring)
        hit = cache.get(key)
        if hit is not None:
            return hit
    red = complex_reduction(spec, ring, strategy)
    g = _group(len(faces(spec, d)), red, d, ring)
    if cache is not None:
        cache.put(key, g)
    return g


def betti_numbers(spec: ComplexSpec, ring: Ring = ZZ, strategy: str = "markowitz") -> dict[int, HomologyGroup]:
    """Homology in every degree ``-1 .. dim``."""
    red = complex_reduction(spec, ring, strategy)
    return {d: _group(len(faces(spec, d)), red, d, ring) for d in range(-1, spec.dim_bound() + 1)}


def relative_homology(big: ComplexSpec, small: ComplexSpec, d: int, ring: Ring = ZZ,
                      strategy: str = "markowitz") -> HomologyGroup:
    """Homology of ``C(big) / C(small)`` in degree ``d``."""
    check_subcomplex(big, small)
    if d < -1 or d > big.dim_bound():
        return HomologyGroup()
    red = pair_reduction(big, small, ring, strategy)
    return _group(len(relative_faces(big, small, d)), red, d, ring)


def snf(M: SparseMatrix, strategy: str = "markowitz", transforms: bool = False) -> SNFResult:
    """Invariant factors of an integer matrix (units included).

    With ``transforms=True`` the matrix is handled densely and unimodular
    ``U``, ``V`` with ``U M V`` diagonal are returned as well.
    """
    if transforms:
        D, U, V, _ = smith_with_transforms(M.to_dense())
        inv = tuple(D[k][k] for k in range(min(M.shape)) if D[k][k])
        return SNFResult(inv, M.shape, U, V)
    red = eliminate(M.columns, M.nrows, strategy=strategy)
    diag = _remainder_diagonal(red.remainder) if red.remainder else []
    inv = [1] * len(red.pivots) + invariant_factors(diag)
    return SNFResult(tuple(sorted(inv)), M.shape)


def rank_mod_p(M: SparseMatrix, p: int, strategy: str = "markowitz") -> int:
    """Rank over ``Z/p`` by sparse elimination."""
    Ring(p)  # validates primality
    return len(eliminate(M.columns, M.nrows, modulus=p, strategy=strategy).pivots)


def _check_cycle(z: Chain, spec: ComplexSpec):
    if z.bipartite != spec.bipartite:
        raise ValueError("chain and complex disagree on bipartiteness")
    if boundary(z):
        raise NotACycle(f"chain of dimension {z.dim} has nonzero boundary")


def _cleared_boundary(spec: ComplexSpec, d: int, ring: Ring, strategy: str):
    """Columns and dropped rows of the ``d+1`` boundary after two-sided clearing."""
    red = complex_reduction(spec, ring, strategy)
    M = boundary_matrix(spec, d + 1, ring)
    above = red.get(d + 2)
    below = red.get(d)
    drop_cols = above.pivot_rows if above else frozenset()
    drop_rows = below.pivot_cols if below else frozenset()
    cols = [{i: v for i, v in M.columns[j].items() if i not in drop_rows}
            for j in range(M.ncols) if j not in drop_cols]
    return cols, M.nrows, drop_rows


def class_order(z: Chain, spec: ComplexSpec, strategy: str = "markowitz") -> ClassOrder:
    """Order of the class of the integral cycle ``z`` in the homology of ``spec``."""
    _check_cycle(z, spec)
    if z.ring != ZZ:
        raise ValueError("class_order works over the integers; use is_boundary for Z/p")
    if not z:
        return ZERO_CLASS
    d = z.dim
    vec = chain_vector(z, index_map(spec, d))
    cols, nrows, drop_rows = _cleared_boundary(spec, d, ZZ, strategy)
    # a cycle is determined by its coordinates off the pivot columns of the map below
    vec = {i: v for i, v in vec.items() if i not in drop_rows}
    red = eliminate(cols, nrows, protected=[vec], strategy=strategy)
    zr = red.protected[0]
    if not zr:
        return ZERO_CLASS
    rows = sorted({i for c in red.remainder.values() for i in c})
    pos = {r: k for k, r in enumerate(rows)}
    if any(i not in pos for i in zr):
        return INFINITE_CLASS
    rcols = list(red.remainder.values())
    dense = [[0] * len(rcols) for _ in rows]
    for j, c in enumerate(rcols):
        for i, v in c.items():
            dense[pos[i]][j] = v
    target = [zr.get(r, 0) for r in rows]
    diag, _, tracked = diagonalize(dense, track=[target])
    t = tracked[0]
    if any(t[k] for k in range(len(diag), len(t))):
        return INFINITE_CLASS
    order = 1
    for dk, tk in zip(diag, t):
        need = dk // gcd(dk, int(tk))
        order = order * need // gcd(order, need)
    return ZERO_CLASS if order == 1 else ClassOrder("finite", order)


def is_boundary(z: Chain, spec: ComplexSpec, ring: Ring | None = None,
                strategy: str = "markowitz") -> bool:
    """Whether ``z`` (reduced into ``ring``) lies in the image of the boundary map."""
    ring = ring or z.ring
    if ring == ZZ:
        return class_order(z, spec, strategy).kind == "zero"
    z = z.to_ring(ring)
    _check_cycle(z, spec)
    if not z:
        return True
    d = z.dim
    vec = chain_vector(z, index_map(spec, d))
    cols, nrows, drop_rows = _cleared_boundary(spec, d, ring, strategy)
    vec = {i: v for i, v in vec.items() if i not in drop_rows}
    red = eliminate(cols, nrows, modulus=ring.p, protected=[vec], strategy=strategy)
    return not red.protected[0]


class HomologyBasis:
    """Explicit integral homology of a small complex in one degree.

    Built from dense Smith forms with transforms, so it is meant for chain
    groups of at most a few hundred faces.  ``coordinates(z)`` returns the
    class of a cycle as a tuple ``(c_1, ..., c_k)`` with ``c_i`` taken
    modulo ``orders[i]`` (``0`` marks a free summand).
    """

    def __init__(self, spec: ComplexSpec, d: int):
        self.spec, self.d = spec, d
        dn = boundary_matrix(spec, d, ZZ).to_dense()
        up = boundary_matrix(spec, d + 1, ZZ).to_dense()
        n = len(faces(spec, d))
        if dn and dn[0]:
            D, _, _, W = smith_with_transforms(dn)
            r = sum(1 for k in range(min(len(D), n)) if D[k][k])
        else:
            W = [[int(i == j) for j in range(n)] for i in range(n)]
            r = 0
        self._W = W
        self._r = r
        # boundaries expressed in the kernel coordinates
        ncols = len(up[0]) if up else 0
        Y = [[sum(W[i][k] * up[k][j] for k in range(n) if up[k][j]) for j in range(ncols)]
             for i in range(r, n)]
        if Y and ncols:
            D2, U2, _, _ = smith_with_transforms(Y)
            diag = [D2[k][k] if k < ncols else 0 for k in range(len(Y))]
        else:
            U2 = [[int(i == j) for j in range(len(Y))] for i in range(len(Y))]
            diag = [0] * len(Y)
        self._U2 = U2
        keep = [k for k, dk in enumerate(diag) if dk != 1]
        self._keep = keep
        self.orders = tuple(diag[k] for k in keep)

    @property
    def group(self) -> HomologyGroup:
        return HomologyGroup(sum(1 for o in self.orders if o == 0),
                             tuple(o for o in self.orders if o > 1))

    def coordinates(self, z: Chain) -> tuple[int, ...]:
        _check_cycle(z, self.spec)
        n = len(faces(self.spec, self.d))
        vec = chain_vector(z, index_map(self.spec, self.d)) if z else {}
        x = [sum(self._W[i][k] * v for k, v in vec.items()) for i in range(n)]
        if any(x[:self._r]):
            raise NotACycle("chain is not in the kernel")
        y = x[self._r:]
        c = [sum(row[k] * y[k] for k in range(len(y))) for row in self._U2]
        out = []
        for k, o in zip(self._keep, self.orders):
            out.append(c[k] % o if o else c[k])
        return tuple(out)
