import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chesshom import _modp
from chesshom.chains import GF, SparseMatrix
from chesshom.complexes import Chessboard, FiltrationStage, Gamma, SubBoard, Void, faces
from chesshom.homology import homology, rank_mod_p, relative_homology
from chesshom.sequences import (SequenceReport, betti_p, dmt_inequality_audit, gamma_tail_audit,
                                kab_inverse, kab_transform, pair_exactness_audit, phi_audit,
                                sharpness_check, suspension_check)


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20))
def test_kab_roundtrip(m, n, d):
    assert kab_inverse(*kab_transform(m, n, d)) == (m, n, d)
    assert kab_transform(*kab_inverse(m, n, d)) == (m, n, d)


def test_kab_examples():
    assert kab_transform(8, 9, 5) == (2, 1, 2)
    assert kab_inverse(0, 1, 2) == (6, 7, 3)
    # k = 0 is the bottom degree when m + n = 1 mod 3
    m, n, d = kab_inverse(0, 2, 3)
    assert (m + n) % 3 == 1 and d == (m + n - 4) // 3


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.integers(1, 7), st.sampled_from([2, 3, 5]), st.data())
def test_dense_rank_matches_sparse(nr, nc, p, data):
    rows = data.draw(st.lists(st.lists(st.integers(-4, 4), min_size=nc, max_size=nc),
                              min_size=nr, max_size=nr))
    A = np.array(rows, dtype=np.int64) % p
    assert _modp.rank(A, p) == rank_mod_p(SparseMatrix.from_dense(rows), p)
    N = _modp.nullspace(A, p)
    assert not (A @ N % p).any()
    assert N.shape[1] == nc - _modp.rank(A, p)


@pytest.mark.parametrize("big,small", [(Chessboard(4, 4), Gamma(4, 4)),
                                       (FiltrationStage(4, 5, 2), FiltrationStage(4, 5, 1)),
                                       (FiltrationStage(4, 5, 1), FiltrationStage(4, 5, 0)),
                                       (Chessboard(3, 5), Void())], ids=str)
def test_pairs_are_exact(big, small):
    rep = pair_exactness_audit(big, small, p=3)
    assert rep.exact
    assert rep.euler_balance == 0
    for nd in rep.nodes:
        assert nd["composition_zero"]


def test_pair_dims_agree_with_homology():
    big, small = Chessboard(4, 5), Gamma(4, 5)
    rep = pair_exactness_audit(big, small, p=3)
    for d, dim in rep.dims("X").items():
        assert dim == homology(big, d, GF(3)).free_rank
    for d, dim in rep.dims("A").items():
        assert dim == homology(small, d, GF(3)).free_rank
    for d, dim in rep.dims("X/A").items():
        assert dim == relative_homology(big, small, d, GF(3)).free_rank


def test_pair_with_void_gives_reduced_homology():
    X = Chessboard(3, 4)
    rep = pair_exactness_audit(X, Void(), p=3)
    assert rep.dims("X/A") == rep.dims("X")
    assert all(v == 0 for v in rep.dims("A").values())


def test_pair_with_empty_face_gives_unreduced_homology():
    X = Chessboard(2, 2)
    empty = SubBoard((), ())
    rep = pair_exactness_audit(X, empty, p=3)
    assert rep.exact
    assert rep.dims("A")[-1] == 1
    assert rep.dims("X/A")[0] == rep.dims("X")[0] + 1
    assert rep.map_ranks["delta_0"] == 1


@pytest.mark.parametrize("big,small", [(Chessboard(4, 5), Gamma(4, 5)),
                                       (FiltrationStage(3, 5, 1), FiltrationStage(3, 5, 0))], ids=str)
def test_euler_characteristic_is_additive(big, small):
    def chi(spec):
        return sum((-1) ** d * len(faces(spec, d)) for d in range(-1, spec.dim_bound() + 1))
    rel = sum((-1) ** d * relative_homology(big, small, d).free_rank for d in range(-1, big.dim_bound() + 1))
    assert chi(big) == chi(small) + rel


def test_report_serialization():
    rep = pair_exactness_audit(Chessboard(3, 3), Gamma(3, 3), p=3)
    assert isinstance(rep, SequenceReport)
    tsv = rep.to_tsv().splitlines()
    assert tsv[0].split("\t") == ["degree", "node", "dim", "rank_in", "rank_out",
                                  "composition_zero", "exact"]
    assert len(tsv) == len(rep.nodes) + 1
    js = rep.to_json()
    assert js["exact"] is True and js["p"] == 3


def test_phi_audit():
    res = phi_audit(3)
    assert res["ok"] and res["identities"] and res["classes_agree"]
    assert res["phi_rank"] == res["delta_rank"] == 1


def test_gamma_tail_audit():
    res = gamma_tail_audit()
    assert res["ok"]
    assert res["index"] == 3
    assert res["h1_board"] == res["h1_gamma"] == "Z^2"
    assert res["z_in_e"] == {"34": (-1, 2), "35": (2, -1), "45": (-1, -1)}


def test_betti_p_symmetry_and_edges():
    assert betti_p(5, 5, 2, 3) == 1
    assert betti_p(4, 6, 2, 3) == betti_p(6, 4, 2, 3)
    assert betti_p(-1, 3, 0) == 0
    assert betti_p(0, 0, -1) == 1


def test_dmt_example():
    r = dmt_inequality_audit(5, 5, 2, 3)
    assert (r["lhs"], r["rhs1"], r["rhs2"]) == (1, 2, 2)
    assert r["holds"]
    small = dmt_inequality_audit(1, 4, 0, 3)
    assert small["rhs1"] is None and small["rhs2"] is None and small["holds"]


def test_sharpness_and_suspension():
    s = sharpness_check(1, 2, 3)
    assert (s["m"], s["n"], s["d"]) == (6, 7, 3)
    assert s["sharp"] and s["lhs"] == s["rhs2"] == 1
    assert suspension_check(5, 5)["ok"]
    assert suspension_check(2, 3)["ok"]
