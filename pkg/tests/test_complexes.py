import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from chesshom.complexes import (Chessboard, FiltrationStage, Gamma, MatchingKn, NotAFace, SubBoard,
                                Void, board, complex_dimension, contains, embed_face,
                                enumerate_faces, face_count, face_index, faces, is_matching,
                                max_faces_per_degree, nu, parse_spec)


def brute_faces(edges, size, bipartite=True):
    return sorted(f for f in itertools.combinations(sorted(edges), size) if is_matching(f, bipartite))


@pytest.mark.parametrize("m,n", [(1, 1), (2, 3), (3, 3), (3, 5), (4, 4)])
def test_chessboard_counts_match_formula_and_brute_force(m, n):
    spec = Chessboard(m, n)
    for d in range(-1, min(m, n) + 1):
        fs = enumerate_faces(spec, d)
        assert len(fs) == face_count(m, n, d)
        assert fs == brute_faces(spec.edges(), d + 1)


@pytest.mark.parametrize("N", [1, 2, 4, 5, 6])
def test_matching_counts(N):
    spec = MatchingKn(N)
    for k in range(0, N // 2 + 1):
        expected = math.comb(N, 2 * k) * math.prod(range(2 * k - 1, 0, -2))
        assert len(faces(spec, k - 1)) == expected
        assert list(faces(spec, k - 1)) == brute_faces(spec.edges(), k, bipartite=False)


def test_gamma_is_filter_of_chessboard():
    big, small = Chessboard(4, 5), Gamma(4, 5)
    for d in range(-1, 4):
        want = [f for f in faces(big, d) if not any(c == 1 and r >= 3 for r, c in f)]
        assert list(faces(small, d)) == want


def test_filtration_is_increasing_and_differences_are_as_described():
    m, n = 4, 5
    d0, d1, d2 = (FiltrationStage(m, n, i) for i in range(3))
    assert all(faces(d2, d) == faces(Gamma(m, n), d) for d in range(-1, 4))
    for d in range(-1, 4):
        s0, s1, s2 = set(faces(d0, d)), set(faces(d1, d)), set(faces(d2, d))
        assert s0 <= s1 <= s2
        for f in s2 - s1:
            assert any(r == 1 and c >= 2 for r, c in f) and any(r == 2 and c >= 2 for r, c in f)
        for f in s1 - s0:
            assert any(r in (1, 2) and c >= 2 for r, c in f)


def test_d0_is_a_join():
    # faces of D0 split into a face of M({1,2},{1}) and one of M([3,m],[2,n])
    spec = FiltrationStage(4, 5, 0)
    left = SubBoard((1, 2), (1,))
    right = SubBoard((3, 4), (2, 3, 4, 5))
    for d in range(-1, 3):
        for f in faces(spec, d):
            a = tuple(e for e in f if e[0] <= 2)
            b = tuple(e for e in f if e[0] > 2)
            assert contains(left, a) and contains(right, b)


def test_face_index_roundtrip_and_errors():
    spec = Chessboard(3, 4)
    for d in range(-1, 3):
        for k, f in enumerate(faces(spec, d)):
            assert face_index(spec, d, f) == k
    assert face_index(spec, 1, [(2, 1), (1, 2)]) == face_index(spec, 1, ((1, 2), (2, 1)))
    with pytest.raises(NotAFace):
        face_index(spec, 1, [(1, 1), (1, 2)])
    with pytest.raises(NotAFace):
        face_index(spec, 0, [(1, 1), (2, 2)])
    with pytest.raises(NotAFace):
        face_index(spec, 0, [(4, 1)])
    with pytest.raises(NotAFace):
        face_index(Gamma(3, 3), 0, [(3, 1)])


@pytest.mark.parametrize("m,n,expected", [(1, 1, 0), (2, 3, 1), (3, 3, 1), (5, 5, 2), (6, 7, 3),
                                          (3, 9, 2), (7, 9, 4), (8, 8, 4)])
def test_nu(m, n, expected):
    assert nu(m, n) == expected


def test_nu_domain():
    with pytest.raises(ValueError):
        nu(3, 2)


def test_complex_dimension():
    assert complex_dimension(Chessboard(3, 5)) == 2
    assert complex_dimension(MatchingKn(7)) == 2
    assert complex_dimension(Gamma(5, 5)) == 4
    assert complex_dimension(SubBoard((), (1, 2))) == -1
    assert complex_dimension(Void()) == -2
    assert complex_dimension(SubBoard((1,), (1,), exclude={(1, 1)})) == -1


def test_degenerate_boards():
    spec = board(0, 3)
    assert faces(spec, -1) == ((),)
    assert faces(spec, 0) == ()
    assert faces(Void(), -1) == ()


def test_embedding_lands_in_matching_complex():
    m, n = 2, 3
    big = MatchingKn(m + n)
    for d in range(-1, 2):
        imgs = [embed_face(f, m) for f in faces(Chessboard(m, n), d)]
        assert all(contains(big, f) for f in imgs)
        assert len(set(imgs)) == len(imgs)


def test_max_faces_per_degree():
    assert max_faces_per_degree(Chessboard(5, 5)) == 600
    assert max_faces_per_degree(Chessboard(7, 8)) == 141120
    assert max_faces_per_degree(MatchingKn(6)) == 45


def test_parse_spec():
    assert parse_spec("chessboard", m=2, n=3) == Chessboard(2, 3)
    assert parse_spec("matching", N=5) == MatchingKn(5)
    assert parse_spec("stage", m=3, n=4, stage=1) == FiltrationStage(3, 4, 1)
    with pytest.raises(ValueError):
        parse_spec("torus", m=1, n=1)
    with pytest.raises(ValueError):
        FiltrationStage(3, 4, 3)


@settings(max_examples=60, deadline=None)
@given(m=st.integers(1, 5), n=st.integers(1, 5), data=st.data())
def test_faces_closed_under_removal(m, n, data):
    spec = Chessboard(m, n)
    d = data.draw(st.integers(0, min(m, n) - 1))
    f = data.draw(st.sampled_from(faces(spec, d)))
    i = data.draw(st.integers(0, d))
    assert contains(spec, f[:i] + f[i + 1:])
