import random

import pytest
from hypothesis import given, settings, strategies as st

from chesshom.chains import GF, ZZ, Chain, SparseMatrix, boundary, boundary_matrix, relabel
from chesshom.complexes import Chessboard, Gamma, MatchingKn, SubBoard, Void, board, faces
from chesshom.cycles import gamma_3r, gamma_mn, m55_chain, z_top
from chesshom.homology import (ClassOrder, HomologyBasis, HomologyCache, HomologyGroup, NotACycle,
                               betti_numbers, class_order, group_exponent, homology, is_boundary,
                               rank_mod_p, relative_homology, snf)
from oracles import oracle_homology, small_complexes, sympy_invariants

SMALL = small_complexes()


@pytest.mark.parametrize("spec", SMALL, ids=lambda s: s.key)
def test_homology_matches_sympy_oracle(spec):
    for d in range(-1, spec.dim_bound() + 1):
        free, tors = oracle_homology(spec, d)
        g = homology(spec, d, ZZ, cache=None)
        assert (g.free_rank, g.torsion) == (free, tors)


@pytest.mark.parametrize("spec", SMALL, ids=lambda s: s.key)
def test_first_pivot_strategy_agrees(spec):
    assert betti_numbers(spec, ZZ, "first") == betti_numbers(spec, ZZ, "markowitz")


@pytest.mark.parametrize("spec", SMALL + [Chessboard(5, 5), MatchingKn(7), Chessboard(4, 6)],
                         ids=lambda s: s.key)
def test_universal_coefficients_and_euler(spec):
    bz = betti_numbers(spec, ZZ)
    for p in (2, 3, 5):
        bp = betti_numbers(spec, GF(p))
        for d, g in bz.items():
            t_here = sum(1 for t in g.torsion if t % p == 0)
            t_below = sum(1 for t in bz.get(d - 1, HomologyGroup()).torsion if t % p == 0)
            assert bp[d].free_rank == g.free_rank + t_here + t_below
    chi = sum((-1) ** d * len(faces(spec, d)) for d in range(-1, spec.dim_bound() + 1))
    assert chi == sum((-1) ** d * g.free_rank for d, g in bz.items())


def test_known_groups():
    assert homology(Chessboard(5, 5), 2) == HomologyGroup(0, (3,))
    assert homology(MatchingKn(7), 1) == HomologyGroup(0, (3,))
    assert homology(Chessboard(2, 3), 1) == HomologyGroup(1)
    assert homology(Chessboard(2, 2), 0) == HomologyGroup(1)
    assert homology(Chessboard(1, 1), 0).is_zero
    assert str(homology(Chessboard(5, 5), 3)) == "Z^56"


def test_reduced_homology_conventions():
    # {empty} is acyclic only in the unreduced sense: H_{-1} = Z
    assert homology(board(0, 3), -1) == HomologyGroup(1)
    assert homology(Void(), -1).is_zero
    assert homology(Chessboard(3, 3), 7).is_zero
    assert homology(Chessboard(3, 3), -3).is_zero


def test_relative_homology_of_pair_with_void_is_reduced():
    X = Chessboard(3, 4)
    for d in range(-1, 3):
        assert relative_homology(X, Void(), d) == homology(X, d)
    # relative to the empty face the augmentation disappears
    empty = board(0, 0)
    assert relative_homology(X, SubBoard((), ()), 0).free_rank == homology(X, 0).free_rank + 1
    assert homology(empty, -1) == HomologyGroup(1)


def test_group_printing_and_validation():
    g = HomologyGroup(588, (3,) * 66)
    assert str(g) == "Z^588 ⊕ Z_3^66"
    assert str(HomologyGroup()) == "0"
    assert str(HomologyGroup(1, (2, 6))) == "Z ⊕ Z_2 ⊕ Z_6"
    with pytest.raises(ValueError):
        HomologyGroup(0, (2, 3))
    assert HomologyGroup.from_json(g.to_json()) == g
    assert group_exponent(HomologyGroup(0, (2, 6))) == 6
    assert group_exponent(HomologyGroup(4)) == 0


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_snf_against_sympy(nr, nc, data):
    rows = data.draw(st.lists(st.lists(st.integers(-6, 6), min_size=nc, max_size=nc),
                              min_size=nr, max_size=nr))
    M = SparseMatrix.from_dense(rows)
    res = snf(M)
    assert list(res.invariants) == sympy_invariants(M)
    inv = res.invariants
    assert all(inv[i + 1] % inv[i] == 0 for i in range(len(inv) - 1))
    withT = snf(M, transforms=True)
    assert withT.invariants == res.invariants
    U, V = withT.U, withT.V
    D = [[sum(U[i][k] * rows[k][l] * V[l][j] for k in range(nr) for l in range(nc))
          for j in range(nc)] for i in range(nr)]
    for i in range(nr):
        for j in range(nc):
            assert D[i][j] == (inv[i] if i == j and i < len(inv) else 0)


@pytest.mark.parametrize("spec", [Chessboard(4, 5), MatchingKn(7), Gamma(4, 4)], ids=str)
def test_rank_mod_p_against_rational_rank(spec):
    for d in range(0, spec.dim_bound() + 1):
        M = boundary_matrix(spec, d)
        inv = snf(M).invariants
        for p in (2, 3, 5):
            assert rank_mod_p(M, p) == sum(1 for x in inv if x % p)


def test_class_orders():
    assert class_order(gamma_3r(2), MatchingKn(7)) == ClassOrder("finite", 3)
    assert str(class_order(z_top(3), Chessboard(3, 4))) == "Infinite"
    assert str(class_order(m55_chain("rho"), Gamma(5, 5))) == "Finite(3)"
    assert class_order(boundary(Chain.face(((1, 1), (2, 2), (3, 3)))), Chessboard(3, 3)).kind == "zero"
    assert class_order(3 * gamma_mn(3, 3), Chessboard(3, 3)).kind == "infinite"
    with pytest.raises(NotACycle):
        class_order(Chain.face(((1, 1),)), Chessboard(2, 2))


def test_class_order_divides_exponent():
    spec = Chessboard(5, 5)
    e = group_exponent(homology(spec, 2))
    rho = m55_chain("rho")
    for rows, cols in [({}, {}), ({1: 3, 3: 1}, {}), ({}, {1: 5, 5: 1}), ({2: 4, 4: 2}, {2: 3, 3: 2})]:
        o = class_order(relabel(rho, rows, cols), spec)
        assert o.kind != "infinite"
        if o.kind == "finite":
            assert e % o.n == 0


@pytest.mark.parametrize("spec,d", [(Chessboard(3, 4), 1), (Chessboard(2, 3), 0),
                                    (SubBoard((3, 4, 5), (2, 3, 4, 5)), 1), (MatchingKn(6), 1)],
                         ids=str)
def test_class_order_agrees_with_explicit_basis(spec, d):
    rng = random.Random(7)
    hb = HomologyBasis(spec, d)
    assert hb.group == homology(spec, d)
    # random cycles: integer combinations of boundaries of (d+1)-faces plus known cycles
    up = faces(spec, d + 1)
    for _ in range(10):
        z = Chain.zero(d, bipartite=spec.bipartite)
        for f in rng.sample(up, min(3, len(up))):
            z = z + rng.randint(-2, 2) * boundary(Chain({f: 1}, d + 1, bipartite=spec.bipartite))
        coords = hb.coordinates(z)
        assert all(c == 0 for c in coords)
        assert class_order(z, spec).kind == "zero"


def test_is_boundary_mod_p():
    spec = Chessboard(5, 5)
    z = m55_chain("rho")
    assert not is_boundary(z, spec, GF(3))
    assert not is_boundary(z, spec, ZZ)
    assert is_boundary(3 * z, spec, ZZ)
    assert is_boundary(z, spec, GF(2))
    # a 1-cycle on this board always bounds
    assert is_boundary(m55_chain("z_uv", (2, 3)), spec, GF(3))


def test_cache_roundtrip(tmp_path):
    cache = HomologyCache(tmp_path)
    rng = random.Random(0)
    stored = {}
    for i in range(100):
        free = rng.randint(0, 50)
        tors = tuple(sorted(rng.choice([(), (2,), (3,), (3, 3), (2, 6)])))
        key = HomologyCache.key(f"Spec{i}", rng.randint(-1, 6), rng.choice([ZZ, GF(3)]))
        g = HomologyGroup(free, tors)
        cache.put(key, g)
        stored[key] = g
    fresh = HomologyCache(tmp_path)
    for key, g in stored.items():
        assert fresh.get(key) == g
    assert fresh.get("missing") is None
    assert not list(tmp_path.glob("*.tmp"))


def test_homology_uses_cache(tmp_path):
    cache = HomologyCache(tmp_path)
    spec = Chessboard(3, 4)
    g = homology(spec, 1, cache=cache)
    assert cache.get(HomologyCache.key(spec.key, 1, ZZ)) == g
    assert homology(spec, 1, cache=cache) == g
