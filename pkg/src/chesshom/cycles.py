"""Explicit chains and cycles on chessboard and matching complexes.

Every chain is first written as a list of wedge monomials in the order they
are usually displayed (``TRANSCRIPTIONS`` keeps the raw lists for the fixed
5 x 5 chains) and only then normalized, so sign slips are visible when the
two are diffed.

Vertices in the path-factor helpers are tagged ``("r", i)`` for row ``i``
and ``("c", j)`` for column ``j``.
"""

from __future__ import annotations

from itertools import permutations

from .chains import Chain, boundary, relabel, transpose, wedge, wedge_all
from .complexes import Chessboard, ComplexSpec, MatchingKn


class DomainError(ValueError):
    """Recipe parameters outside the range where the chain is defined."""


class LabelError(ValueError):
    """Malformed label set for one of the 5 x 5 chains."""


def is_cycle(c: Chain) -> bool:
    return not boundary(c)


def _perm_sign(p) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def z_top(k: int) -> Chain:
    """Fundamental cycle of ``M_{k,k+1}``: signed sum over all bijections onto ``k`` of ``k+1`` columns."""
    if k < 1:
        raise DomainError("z_top needs k >= 1")
    mons = []
    for p in permutations(range(k + 1)):
        mons.append((_perm_sign(p), [(i + 1, p[i] + 1) for i in range(k)]))
    return Chain.from_wedges(mons, dim=k - 1)


def gamma_3r(r: int) -> Chain:
    """``(12 - 23) ^ (45 - 56) ^ ...`` with ``r`` factors, a chain on ``K_{3r}``."""
    if r < 1:
        raise DomainError("gamma_3r needs r >= 1")
    factors = []
    for k in range(r):
        a, b, c = 3 * k + 1, 3 * k + 2, 3 * k + 3
        factors.append(Chain.from_wedges([(1, [(a, b)]), (-1, [(b, c)])], bipartite=False))
    return wedge_all(*factors)


def gamma_factors(m: int, n: int) -> list[tuple]:
    """Path factors ``(x, y, w)`` of ``gamma_{m,n}``; each stands for ``xy - yw``."""
    if m < 1 or n < 1 or (m + n) % 3:
        raise DomainError(f"gamma_mn needs m + n divisible by 3, got ({m}, {n})")
    if m > n:
        if m > 2 * n:
            raise DomainError(f"gamma_mn needs n <= m <= 2n when m > n, got ({m}, {n})")
        swap = {"r": "c", "c": "r"}
        return [tuple((swap[t], v) for t, v in f) for f in gamma_factors(n, m)]
    if n > 2 * m:
        raise DomainError(f"gamma_mn needs m <= n <= 2m, got ({m}, {n})")
    if (m, n) == (1, 2):
        return [(("c", 1), ("r", 1), ("c", 2))]
    if m < n:
        return gamma_factors(m - 1, n - 2) + [(("c", n - 1), ("r", m), ("c", n))]
    return gamma_factors(m - 2, n - 1) + [(("r", m - 1), ("c", n), ("r", m))]


def _edge(u, v):
    # bipartite edge from two tagged vertices
    if u[0] == "r":
        return (u[1], v[1])
    return (v[1], u[1])


def _factor_chain(f) -> Chain:
    x, y, w = f
    return Chain.from_wedges([(1, [_edge(x, y)]), (-1, [_edge(y, w)])])


def gamma_mn(m: int, n: int) -> Chain:
    """Recursive cycle on ``M_{m,n}`` for ``m + n`` divisible by 3.

    For ``m > n`` the chain is the transpose of ``gamma_{n,m}`` with
    ``i j`` replaced by ``j i``.
    """
    if m > n:
        gamma_factors(m, n)  # domain check
        return transpose(gamma_mn(n, m))
    return wedge_all(*(_factor_chain(f) for f in gamma_factors(m, n)))


def _shift_factors(factors, dr, dc):
    return [tuple((t, v + (dr if t == "r" else dc)) for t, v in f) for f in factors]


def w_k_params(k: int, a: int, b: int) -> dict:
    """Board size, degree and the inner ``gamma`` board for :func:`w_k`."""
    if k < 0:
        raise DomainError("w_k needs k >= 0")
    if a >= 1 and b >= 2:
        g = (a + 3 * b - 2, 2 * a + 3 * b - 4)
    elif a == 0 and b >= 3:
        g = (3 * b - 2, 3 * b - 4)
    else:
        raise DomainError(f"w_k needs a >= 1, b >= 2 or a = 0, b >= 3; got a={a}, b={b}")
    m = k + a + 3 * b - 1
    n = k + 2 * a + 3 * b - 1
    d = k + a + 2 * b - 2
    return {"m": m, "n": n, "d": d, "gamma": g}


def w_k(k: int, a: int, b: int) -> Chain:
    """``z_top(k+1)`` wedged with the inner ``gamma`` shifted by ``(k+1, k+2)``.

    A ``d``-cycle on ``M_{m,n}`` with ``(m, n, d)`` the inverse of the
    ``(k, a, b)`` coordinates; its columns lie in ``[1, n-1]``.
    """
    prm = w_k_params(k, a, b)
    gm, gn = prm["gamma"]
    inner = gamma_mn(gm, gn)
    inner = relabel(inner, {i: i + k + 1 for i in inner.rows()}, {j: j + k + 2 for j in inner.cols()})
    return wedge(z_top(k + 1), inner)


def w1_factors(a: int, b: int) -> list[tuple]:
    """Path factors of ``w_k(0, a, b)``; the first one is ``z_top(1)``."""
    prm = w_k_params(0, a, b)
    return [(("c", 1), ("r", 1), ("c", 2))] + _shift_factors(gamma_factors(*prm["gamma"]), 1, 2)


# --- the fixed chains on the 5 x 5 board -------------------------------------

def _labels(labels, count, name):
    try:
        labs = tuple(int(x) for x in labels)
    except (TypeError, ValueError):
        raise LabelError(f"{name}: labels must be integers, got {labels!r}") from None
    if len(labs) != count or len(set(labs)) != count or not all(2 <= x <= 5 for x in labs):
        raise LabelError(f"{name}: expected {count} distinct labels from 2..5, got {labels!r}")
    return labs


def _z_uv_monomials(u, v):
    return [(1, [(3, u), (4, v)]), (1, [(4, v), (5, u)]), (1, [(5, u), (3, v)]),
            (1, [(3, v), (4, u)]), (1, [(4, u), (5, v)]), (1, [(5, v), (3, u)])]


def _gamma12_monomials(s, t, u, v):
    return [
        (1, [(3, u), (5, s), (4, v)]), (-1, [(5, s), (4, v), (3, t)]),
        (1, [(4, v), (3, t), (5, u)]), (-1, [(3, t), (5, u), (4, s)]),
        (1, [(5, u), (4, s), (3, v)]), (-1, [(4, s), (3, v), (5, t)]),
        (1, [(3, v), (5, t), (4, u)]), (-1, [(5, t), (4, u), (3, s)]),
        (1, [(4, u), (3, s), (5, v)]), (-1, [(3, s), (5, v), (4, t)]),
        (1, [(5, v), (4, t), (3, u)]), (-1, [(4, t), (3, u), (5, s)]),
    ]


def _w_uv_monomials(s, t, u, v):
    return [
        (1, [(5, u), (4, s), (3, v)]), (-1, [(4, s), (3, v), (5, t)]),
        (1, [(3, v), (5, t), (4, u)]), (-1, [(5, t), (4, u), (3, s)]),
        (1, [(4, u), (3, s), (5, v)]),
    ]


def _rho_factors():
    return [[(1, [(1, 1)]), (-1, [(2, 1)])],
            [(1, [(3, 2)]), (-1, [(4, 2)])],
            [(1, [(5, 3)]), (-1, [(5, 4)])]]


def _e_factors(i):
    return [[(1, [(3, 2)]), (-1, [(4, 2)])], [(1, [(5, 3)]), (-1, [(5, i)])]]


TRANSCRIPTIONS = {
    "z_uv": _z_uv_monomials,
    "gamma12": _gamma12_monomials,
    "w_uv": _w_uv_monomials,
}

M55_NAMES = ("z_uv", "gamma12", "w_uv", "rho", "e")


def m55_chain(name: str, labels=()) -> Chain:
    """Named chain on the 5 x 5 board.

    ``z_uv``: labels ``(u, v)``.  ``gamma12`` and ``w_uv``: labels
    ``(s, t, u, v)``, a permutation of ``2..5`` (``w_uv`` requires ``s = 2``).
    ``rho``: no labels.  ``e``: label ``(i,)`` with ``i`` in ``{4, 5}``.
    """
    if name == "z_uv":
        u, v = _labels(labels, 2, name)
        if not {u, v} <= {2, 3, 4, 5}:
            raise LabelError("z_uv labels must lie in 2..5")
        return Chain.from_wedges(_z_uv_monomials(u, v))
    if name in ("gamma12", "w_uv"):
        s, t, u, v = _labels(labels, 4, name)
        if name == "w_uv" and s != 2:
            raise LabelError("w_uv is defined for s = 2")
        return Chain.from_wedges(TRANSCRIPTIONS[name](s, t, u, v))
    if name == "rho":
        if tuple(labels):
            raise LabelError("rho takes no labels")
        return wedge_all(*(Chain.from_wedges(f) for f in _rho_factors()))
    if name == "e":
        labs = tuple(labels)
        if len(labs) != 1 or labs[0] not in (4, 5):
            raise LabelError(f"e takes one label from {{4, 5}}, got {labels!r}")
        return wedge_all(*(Chain.from_wedges(f) for f in _e_factors(labs[0])))
    raise LabelError(f"unknown 5x5 chain {name!r}")


def w_pair_rhs(s: int, t: int, u: int, v: int) -> Chain:
    """``(4s - 3s) ^ (2*5t - 5u - 5v) - z_uv``."""
    left = Chain.from_wedges([(1, [(4, s)]), (-1, [(3, s)])])
    right = Chain.from_wedges([(2, [(5, t)]), (-1, [(5, u)]), (-1, [(5, v)])])
    return wedge(left, right) - m55_chain("z_uv", (u, v))


# --- recipes by name ---------------------------------------------------------

RECIPES = ("z_top", "gamma_3r", "gamma_mn", "z_uv", "gamma12", "w_uv", "rho", "e", "w_k")


def parse_recipe(text: str) -> tuple[str, tuple[int, ...]]:
    name, _, args = text.strip().partition(":")
    if name not in RECIPES:
        raise DomainError(f"unknown recipe {name!r}; known: {', '.join(RECIPES)}")
    try:
        params = tuple(int(x) for x in args.split(",") if x.strip()) if args else ()
    except ValueError:
        raise DomainError(f"bad parameters in {text!r}") from None
    return name, params


_ARITY = {"z_top": 1, "gamma_3r": 1, "gamma_mn": 2, "w_k": 3}


def build_recipe(text: str) -> Chain:
    """Chain for a recipe string such as ``"rho"``, ``"z_top:3"`` or ``"w_k:0,1,2"``."""
    name, params = parse_recipe(text)
    if name in M55_NAMES:
        return m55_chain(name, params)
    if len(params) != _ARITY[name]:
        raise DomainError(f"{name} takes {_ARITY[name]} parameter(s), got {len(params)}")
    return {"z_top": z_top, "gamma_3r": gamma_3r, "gamma_mn": gamma_mn, "w_k": w_k}[name](*params)


def recipe_complex(text: str) -> ComplexSpec:
    """The complex a recipe's chain is meant to live in.

    ``gamma_3r:r`` goes to ``M_{3r+1}``, where its class is torsion.
    """
    name, params = parse_recipe(text)
    if name in M55_NAMES:
        return Chessboard(5, 5)
    if len(params) != _ARITY[name]:
        raise DomainError(f"{name} takes {_ARITY[name]} parameter(s), got {len(params)}")
    if name == "z_top":
        return Chessboard(params[0], params[0] + 1)
    if name == "gamma_3r":
        return MatchingKn(3 * params[0] + 1)
    if name == "gamma_mn":
        return Chessboard(*params)
    prm = w_k_params(*params)
    return Chessboard(prm["m"], prm["n"])
