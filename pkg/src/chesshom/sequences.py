"""Long exact sequences of pairs, the maps in them, and betti-number inequalities.

Exactness is checked over a prime field: each complex gets an explicit
homology basis, the inclusion and quotient maps are pushed through those
bases, and the connecting map is realized by lifting a relative cycle,
taking its boundary and reading it in the subcomplex.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from ._modp import FieldHomology, as_array, rank
from .chains import (GF, Chain, SparseMatrix, boundary, boundary_matrix, chain_vector,
                     check_subcomplex, relative_boundary_matrix, relative_faces, wedge)
from .complexes import (ComplexSpec, FiltrationStage, SubBoard, Void, board, contains,
                        faces, index_map)
from .cycles import m55_chain
from .homology import HomologyBasis, homology, relative_homology, snf

__all__ = ["relative_homology", "pair_exactness_audit", "SequenceReport", "phi_audit",
           "gamma_tail_audit", "dmt_inequality_audit", "kab_transform", "kab_inverse",
           "betti_p", "sharpness_check", "suspension_check"]


def kab_transform(m: int, n: int, d: int) -> tuple[int, int, int]:
    """``(m, n, d) -> (k, a, b)``: distance above the bottom degree, gap, codimension."""
    return (-m - n + 3 * d + 4, n - m, m - d - 1)


def kab_inverse(k: int, a: int, b: int) -> tuple[int, int, int]:
    return (k + a + 3 * b - 1, k + 2 * a + 3 * b - 1, k + a + 2 * b - 2)


# --- exactness ---------------------------------------------------------------

@dataclass
class SequenceReport:
    big: str
    small: str
    p: int
    nodes: list[dict] = field(default_factory=list)
    map_ranks: dict[str, int] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return all(nd["exact"] for nd in self.nodes)

    @property
    def euler_balance(self) -> int:
        """Alternating sum of all dimensions in the sequence (zero when exact)."""
        total = 0
        for nd in self.nodes:
            sign = 1 if nd["node"] != "X" else -1
            total += (-1) ** (nd["degree"] % 2) * sign * nd["dim"]
        return total

    def dims(self, node: str) -> dict[int, int]:
        return {nd["degree"]: nd["dim"] for nd in self.nodes if nd["node"] == node}

    def to_json(self) -> dict:
        return {"big": self.big, "small": self.small, "p": self.p, "exact": self.exact,
                "nodes": self.nodes, "map_ranks": dict(sorted(self.map_ranks.items()))}

    def to_tsv(self) -> str:
        buf = io.StringIO()
        cols = ["degree", "node", "dim", "rank_in", "rank_out", "composition_zero", "exact"]
        w = csv.writer(buf, delimiter="\t", lineterminator="\n")
        w.writerow(cols)
        for nd in self.nodes:
            w.writerow([nd[c] for c in cols])
        return buf.getvalue()


def _dense_boundary(M: SparseMatrix) -> np.ndarray:
    return as_array(M)


class _PairData:
    """Chain maps and field homology for ``(big, small)`` in degrees ``-1 .. top``."""

    def __init__(self, big: ComplexSpec, small: ComplexSpec, p: int, top: int):
        check_subcomplex(big, small)
        self.big, self.small, self.p = big, small, p
        ring = GF(p)
        self.H: dict[tuple[str, int], FieldHomology] = {}
        self.incl: dict[int, np.ndarray] = {}
        self.proj: dict[int, np.ndarray] = {}
        self.dX: dict[int, np.ndarray] = {}
        for d in range(-1, top + 2):
            fx = faces(big, d)
            fa = faces(small, d) if not isinstance(small, Void) else ()
            ix = index_map(big, d)
            rel = relative_faces(big, small, d)
            I = np.zeros((len(fx), len(fa)), dtype=np.int64)
            for k, f in enumerate(fa):
                I[ix[f], k] = 1
            J = np.zeros((len(rel), len(fx)), dtype=np.int64)
            for k, f in enumerate(rel):
                J[k, ix[f]] = 1
            self.incl[d], self.proj[d] = I, J
        for d in range(-1, top + 2):
            self.dX[d] = _dense_boundary(boundary_matrix(big, d, ring))
        for d in range(-1, top + 1):
            self.H["X", d] = FieldHomology(self.dX[d], self.dX[d + 1], p)
            if isinstance(small, Void):
                self.H["A", d] = FieldHomology(np.zeros((0, 0), np.int64), np.zeros((0, 0), np.int64), p)
            else:
                self.H["A", d] = FieldHomology(_dense_boundary(boundary_matrix(small, d, ring)),
                                               _dense_boundary(boundary_matrix(small, d + 1, ring)), p)
            self.H["R", d] = FieldHomology(
                _dense_boundary(relative_boundary_matrix((big, small), d, ring)),
                _dense_boundary(relative_boundary_matrix((big, small), d + 1, ring)), p)

    def i_star(self, d):
        return self.H["X", d].coords(self.incl[d] @ self.H["A", d].reps) if self.H["A", d].dim else \
            np.zeros((self.H["X", d].dim, 0), np.int64)

    def j_star(self, d):
        if not self.H["X", d].dim:
            return np.zeros((self.H["R", d].dim, 0), np.int64)
        return self.H["R", d].coords(self.proj[d] @ self.H["X", d].reps)

    def connecting(self, d):
        """``H_d(big, small) -> H_{d-1}(small)``."""
        target = self.H.get(("A", d - 1))
        src = self.H["R", d]
        tdim = target.dim if target is not None else 0
        if not src.dim or not tdim:
            return np.zeros((tdim, src.dim), np.int64)
        lifted = self.proj[d].T @ src.reps
        bd = self.dX[d] @ lifted % self.p
        if (self.proj[d - 1] @ bd % self.p).any():
            raise AssertionError("boundary of a lifted relative cycle leaves the subcomplex")
        restricted = self.incl[d - 1].T @ bd
        return target.coords(restricted)


def pair_exactness_audit(big: ComplexSpec, small: ComplexSpec, p: int = 3,
                         dmax: int | None = None) -> SequenceReport:
    """Realize the long exact sequence of ``(big, small)`` over ``Z/p`` and check every node."""
    top = big.dim_bound() if dmax is None else dmax
    data = _PairData(big, small, p, top)
    maps: dict[tuple[str, int], np.ndarray] = {}
    for d in range(-1, top + 1):
        maps["i", d] = data.i_star(d)
        maps["j", d] = data.j_star(d)
        maps["delta", d] = data.connecting(d)
    dims = {(k, d): h.dim for (k, d), h in data.H.items()}

    def rk(key):
        M = maps.get(key)
        return 0 if M is None or M.size == 0 else rank(M, p)

    def zero(a, b):
        # composition b after a
        A, B = maps.get(a), maps.get(b)
        if A is None or B is None or A.size == 0 or B.size == 0:
            return True
        return not (B @ A % p).any()

    report = SequenceReport(big.key, small.key, p)
    for d in range(top, -2, -1):
        nodes = [
            ("X/A", ("j", d), ("delta", d)),
            ("X", ("i", d), ("j", d)),
            ("A", ("delta", d + 1), ("i", d)),
        ]
        for name, into, out in nodes:
            key = {"X/A": "R", "X": "X", "A": "A"}[name]
            dim = dims[key, d]
            r_in = rk(into) if into in maps else 0
            r_out = rk(out)
            comp = zero(into, out)
            report.nodes.append({"degree": d, "node": name, "dim": dim, "rank_in": r_in,
                                 "rank_out": r_out, "composition_zero": comp,
                                 "exact": bool(comp and dim == r_in + r_out)})
    for (name, d), _ in sorted(maps.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        report.map_ranks[f"{name}_{d}"] = rk((name, d))
    return report


# --- the phi map on the 5 x 5 filtration ------------------------------------

def _vec(c: Chain, spec: ComplexSpec, d: int) -> np.ndarray:
    v = np.zeros(len(faces(spec, d)), dtype=np.int64)
    for i, x in chain_vector(c, index_map(spec, d)).items():
        v[i] = x
    return v


def phi_audit(p: int = 3) -> dict:
    """Check the connecting map of ``(D2, D1)`` on ``1s ^ 2t ^ z_uv`` against ``(11 - 21) ^ z_uv``.

    Returns the chain identities, the class comparison and the two ranks.
    """
    X, A = FiltrationStage(5, 5, 2), FiltrationStage(5, 5, 1)
    data = _PairData(X, A, p, 3)
    delta = data.connecting(3)
    HR, HA = data.H["R", 3], data.H["A", 2]
    rel = relative_faces(X, A, 3)
    relidx = {f: k for k, f in enumerate(rel)}
    a = Chain.from_wedges([(1, [(1, 1)]), (-1, [(2, 1)])])
    identities, classes_agree = True, True
    phi_vals = []
    for s, t in itertools.permutations(range(2, 6), 2):
        u, v = sorted(set(range(2, 6)) - {s, t})
        z = m55_chain("z_uv", (u, v))
        src = wedge(Chain.from_wedges([(1, [(1, s), (2, t)])]), z)
        image = wedge(a, z)
        corr = wedge(Chain.from_wedges([(1, [(1, 1), (2, t)]), (1, [(1, s), (2, 1)])]), z)
        ok = (boundary(src) - boundary(corr) == image
              and all(contains(A, f) for f in corr.terms)
              and all(contains(A, f) for f in image.terms))
        identities &= ok
        r = np.zeros(len(rel), dtype=np.int64)
        for f, c in src.terms.items():
            r[relidx[f]] = c
        realized = delta @ HR.coords(r) % p
        expected = HA.coords(_vec(image, A, 2))
        classes_agree &= bool(((realized - expected) % p == 0).all())
        phi_vals.append(expected)
    phi_rank = rank(np.array(phi_vals).T, p) if phi_vals else 0
    delta_rank = rank(delta, p) if delta.size else 0
    return {"identities": bool(identities), "classes_agree": bool(classes_agree),
            "phi_rank": int(phi_rank), "delta_rank": int(delta_rank),
            "ok": bool(identities and classes_agree and phi_rank == delta_rank)}


# --- H_1 of the 3 x 4 board inside the 5 x 5 argument -------------------------

TAIL_BOARD = SubBoard((3, 4, 5), (2, 3, 4, 5))
TAIL_GAMMA = SubBoard((3, 4, 5), (2, 3, 4, 5), exclude=frozenset({(5, 2)}))


def _index_of(vectors) -> int:
    """Index of the lattice spanned by ``vectors`` in ``Z^k`` (0 if not full rank)."""
    M = SparseMatrix.from_dense([list(r) for r in np.array(vectors, dtype=object).T])
    res = snf(M)
    k = len(vectors[0])
    if res.rank < k:
        return 0
    out = 1
    for d in res.invariants:
        out *= d
    return out


def gamma_tail_audit() -> dict:
    """Integral checks on ``H_1`` of the board ``[3,5] x [2,5]``.

    The classes of ``z_uv`` span a subgroup of index 3, ``e_4, e_5`` form a
    basis both there and in the ``Gamma``-type sub-board, and for ``s = 2``
    every ``z_uv`` is one of ``-e4-e5``, ``2e4-e5``, ``-e4+2e5``.
    """
    HB = HomologyBasis(TAIL_BOARD, 1)
    HG = HomologyBasis(TAIL_GAMMA, 1)
    e = [m55_chain("e", (i,)) for i in (4, 5)]
    eB = [HB.coordinates(x) for x in e]
    eG = [HG.coordinates(x) for x in e]
    basis_B = HB.orders == (0, 0) and abs(int(np.linalg.det(np.array(eB, dtype=float)).round())) == 1
    basis_G = HG.orders == (0, 0) and abs(int(np.linalg.det(np.array(eG, dtype=float)).round())) == 1
    zs = {}
    for u, v in itertools.combinations(range(2, 6), 2):
        zs[u, v] = HB.coordinates(m55_chain("z_uv", (u, v)))
    index = _index_of(list(zs.values()))
    # coordinates in the e-basis: solve eB^T x = c
    E = np.array(eB, dtype=float).T
    allowed = {(-1, -1), (2, -1), (-1, 2)}
    in_e = {}
    for (u, v), c in zs.items():
        if 2 in (u, v):
            continue
        x = np.linalg.solve(E, np.array(c, dtype=float)).round().astype(int)
        in_e[f"{u}{v}"] = tuple(int(t) for t in x)
    z_ok = all(x in allowed for x in in_e.values())
    return {"h1_board": str(HB.group), "h1_gamma": str(HG.group), "index": index,
            "e_basis_board": bool(basis_B), "e_basis_gamma": bool(basis_G),
            "iota_iso": bool(basis_B and basis_G), "z_in_e": in_e, "z_ok": bool(z_ok),
            "ok": bool(index == 3 and basis_B and basis_G and z_ok)}


# --- betti inequalities --------------------------------------------------------

@lru_cache(maxsize=None)
def betti_p(m: int, n: int, d: int, p: int = 3) -> int:
    """``dim H_d(M_{m,n}; Z/p)`` for any ``m, n >= 0`` (negative sizes give 0)."""
    if m < 0 or n < 0:
        return 0
    m, n = min(m, n), max(m, n)
    return homology(board(m, n), d, GF(p)).free_rank


def dmt_inequality_audit(m: int, n: int, d: int, p: int = 3) -> dict:
    """Both forms of the recursive bound on ``betti_p(m, n, d)``.

    First form for ``m >= 2, n >= 3``; the transposed form for ``m >= 3, n >= 2``.
    A form that does not apply is reported as ``None``.
    """
    lhs = betti_p(m, n, d, p)
    out = {"m": m, "n": n, "d": d, "p": p, "lhs": lhs}
    if m >= 2 and n >= 3:
        rhs1 = (betti_p(m - 2, n - 1, d - 1, p) + (m - 2) * betti_p(m - 1, n - 1, d - 1, p)
                + 2 * comb(n - 1, 2) * betti_p(m - 2, n - 3, d - 2, p))
        out["rhs1"], out["holds1"] = rhs1, lhs <= rhs1
    else:
        out["rhs1"] = out["holds1"] = None
    if m >= 3 and n >= 2:
        rhs2 = (betti_p(m - 1, n - 2, d - 1, p) + (n - 2) * betti_p(m - 1, n - 1, d - 1, p)
                + 2 * comb(m - 1, 2) * betti_p(m - 3, n - 2, d - 2, p))
        out["rhs2"], out["holds2"] = rhs2, lhs <= rhs2
    else:
        out["rhs2"] = out["holds2"] = None
    out["holds"] = out["holds1"] is not False and out["holds2"] is not False
    return out


def sharpness_check(a: int, b: int, p: int = 3) -> dict:
    """Equality in the transposed bound at ``k = 0`` (bottom degree, ``m + n = 1 mod 3``)."""
    m, n, d = kab_inverse(0, a, b)
    res = dmt_inequality_audit(m, n, d, p)
    res["sharp"] = res["rhs2"] == res["lhs"]
    return res


def suspension_check(m: int, n: int, p: int = 3) -> dict:
    """``H(D1) = H(D0)`` and ``H_d(D0_{m,n}) = H_{d-1}(M_{m-2,n-1})`` over ``Z/p``."""
    ring = GF(p)
    d0, d1 = FiltrationStage(m, n, 0), FiltrationStage(m, n, 1)
    mismatches = []
    for d in range(-1, d1.dim_bound() + 1):
        h0 = homology(d0, d, ring).free_rank
        h1 = homology(d1, d, ring).free_rank
        hs = homology(board(m - 2, n - 1), d - 1, ring).free_rank
        if not (h0 == h1 == hs):
            mismatches.append({"d": d, "D0": h0, "D1": h1, "shifted": hs})
    return {"m": m, "n": n, "ok": not mismatches, "mismatches": mismatches}
