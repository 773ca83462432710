import json

import pytest
from hypothesis import given, settings, strategies as st

from chesshom.chains import (GF, ZZ, Chain, CollisionError, DisjointnessViolation, NotASubcomplex,
                             Ring, SparseMatrix, boundary, boundary_matrix, chain_vector,
                             check_subcomplex, embed, relabel, relative_boundary_matrix, shift,
                             transpose, wedge)
from chesshom.complexes import (Chessboard, FiltrationStage, Gamma, MatchingKn, faces, index_map)


@st.composite
def chains(draw, max_m=5, max_n=5):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, max_n))
    spec = Chessboard(m, n)
    d = draw(st.integers(0, min(m, n) - 1))
    fs = faces(spec, d)
    picked = draw(st.lists(st.sampled_from(fs), max_size=8))
    coefs = draw(st.lists(st.integers(-5, 5), min_size=len(picked), max_size=len(picked)))
    terms = {}
    for f, c in zip(picked, coefs):
        terms[f] = terms.get(f, 0) + c
    return spec, Chain(terms, d)


@settings(max_examples=150, deadline=None)
@given(chains())
def test_boundary_squares_to_zero_on_random_chains(sc):
    _, c = sc
    assert not boundary(boundary(c))


def all_small_specs(max_sum=10):
    for m in range(1, max_sum):
        for n in range(m, max_sum - m + 1):
            yield Chessboard(m, n)
            if m >= 2:
                yield Gamma(m, n)
            if m >= 2 and n >= 3:
                for i in range(3):
                    yield FiltrationStage(m, n, i)
    for N in range(2, max_sum + 1):
        yield MatchingKn(N)


@pytest.mark.parametrize("spec", list(all_small_specs()), ids=lambda s: s.key)
def test_boundary_matrices_compose_to_zero(spec):
    for d in range(0, spec.dim_bound() + 1):
        assert (boundary_matrix(spec, d) @ boundary_matrix(spec, d + 1)).is_zero()


def test_boundary_matrix_columns_agree_with_chain_boundary():
    spec = Chessboard(3, 4)
    for d in range(0, 3):
        M = boundary_matrix(spec, d)
        rows = index_map(spec, d - 1)
        for j, f in enumerate(faces(spec, d)):
            assert M.columns[j] == chain_vector(boundary(Chain({f: 1}, d)), rows)


def test_wedge_sign_from_written_order():
    a = Chain.from_wedges([(1, [(1, 2), (2, 1)])])
    b = Chain.from_wedges([(1, [(2, 1), (1, 2)])])
    assert a == -b
    assert a.terms == {((1, 2), (2, 1)): 1}


@settings(max_examples=100, deadline=None)
@given(st.permutations([(1, 1), (2, 3), (3, 2), (4, 4)]))
def test_from_wedges_sign_is_permutation_sign(edges):
    c = Chain.from_wedges([(1, edges)])
    inv = sum(1 for i in range(4) for j in range(i + 1, 4) if edges[i] > edges[j])
    assert c.terms == {tuple(sorted(edges)): (-1) ** inv}


def test_wedge_anticommutes_by_degree():
    a = Chain.from_wedges([(1, [(1, 1)]), (-1, [(2, 1)])])
    b = Chain.from_wedges([(1, [(3, 2), (4, 3)])])
    assert wedge(a, b) == (-1) ** ((a.dim + 1) * (b.dim + 1)) * wedge(b, a)


def test_leibniz_rule():
    a = Chain.from_wedges([(1, [(1, 1)]), (-1, [(2, 1)])])
    b = Chain.from_wedges([(1, [(3, 2), (4, 3)]), (2, [(4, 2), (5, 3)])])
    lhs = boundary(wedge(a, b))
    rhs = wedge(boundary(a), b) + (-1) ** (a.dim + 1) * wedge(a, boundary(b))
    assert lhs == rhs


def test_disjointness_and_collision():
    with pytest.raises(DisjointnessViolation):
        Chain.from_wedges([(1, [(1, 1), (1, 2)])])
    a = Chain.from_wedges([(1, [(1, 1)])])
    with pytest.raises(DisjointnessViolation):
        wedge(a, Chain.from_wedges([(1, [(2, 1)])]))
    c = Chain.from_wedges([(1, [(1, 1), (2, 2)])])
    with pytest.raises(CollisionError):
        relabel(c, {1: 2})


@settings(max_examples=80, deadline=None)
@given(chains(max_m=4, max_n=4), st.permutations(range(1, 5)), st.permutations(range(1, 5)))
def test_relabel_is_a_chain_map(sc, rp, cp):
    _, c = sc
    rmap = {i + 1: v for i, v in enumerate(rp)}
    cmap = {i + 1: v for i, v in enumerate(cp)}
    assert boundary(relabel(c, rmap, cmap)) == relabel(boundary(c), rmap, cmap)


@settings(max_examples=80, deadline=None)
@given(chains())
def test_transpose_shift_embed_commute_with_boundary(sc):
    _, c = sc
    assert boundary(transpose(c)) == transpose(boundary(c))
    assert boundary(shift(c, 2, 3)) == shift(boundary(c), 2, 3)
    assert boundary(embed(c, 5)) == embed(boundary(c), 5)
    assert transpose(transpose(c)) == c


@settings(max_examples=80, deadline=None)
@given(chains())
def test_chain_json_roundtrip(sc):
    _, c = sc
    assert Chain.from_json(c.dumps()) == c
    assert Chain.from_json(json.loads(c.dumps())) == c


def test_ring_reduction():
    c = Chain.from_wedges([(4, [(1, 1)]), (3, [(2, 2)])], ring=GF(3))
    assert c.terms == {((1, 1),): 1}
    assert Ring.parse("Zp:5") == GF(5)
    assert Ring.parse("Z") == ZZ
    with pytest.raises(ValueError):
        GF(4)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_sparse_matrix_roundtrips(nr, nc, data):
    rows = data.draw(st.lists(st.lists(st.integers(-3, 3), min_size=nc, max_size=nc),
                              min_size=nr, max_size=nr))
    M = SparseMatrix.from_dense(rows)
    assert M.to_dense() == rows
    assert SparseMatrix.loads(M.dumps(dim=2)) == M
    assert M.transpose().transpose() == M
    assert SparseMatrix.from_triplets(nr, nc, list(M.triplets())) == M


def test_sparse_dump_format():
    M = SparseMatrix.from_dense([[1, 0], [0, -1]])
    assert M.dumps(dim=1).splitlines() == ["%1 2 2 2", "0 0 1", "1 1 -1"]
    with pytest.raises(ValueError):
        SparseMatrix.loads("%1 2 2 3\n0 0 1\n")


def test_relative_boundary_and_subcomplex_check():
    big, small = Chessboard(3, 3), Gamma(3, 3)
    check_subcomplex(big, small)
    with pytest.raises(NotASubcomplex):
        check_subcomplex(small, big)
    for d in range(0, 3):
        A = relative_boundary_matrix((big, small), d)
        B = relative_boundary_matrix((big, small), d + 1)
        assert (A @ B).is_zero()
