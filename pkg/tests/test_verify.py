import pytest

from chesshom.complexes import Chessboard
from chesshom.verify import (REGISTRY, RunConfig, SizeExceeded, UnknownCase, case, exactness_pairs,
                             pair_specs, parallel_map, run_case, table1)


def test_registry_has_every_case():
    assert {"m55", "bouc", "m67", "connectivity", "fh", "exactness", "dmt", "gamma-mn",
            "properties", "identities", "gamma55", "table1"} <= set(REGISTRY)


def test_unknown_case():
    with pytest.raises(UnknownCase):
        run_case("nope", RunConfig())


def test_guard_refuses_large_boards():
    cfg = RunConfig()
    cfg.guard(Chessboard(7, 8))
    with pytest.raises(SizeExceeded) as info:
        cfg.guard(Chessboard(7, 9))
    assert info.value.estimate == 423360


def test_oversized_case_reports_skip():
    @case("_tmp_big", "refuses a large board")
    def _big(cfg):
        cfg.guard(Chessboard(9, 9))
        return True, {}
    try:
        res = run_case("_tmp_big", RunConfig())
        assert res["pass"] and res["evidence"]["skipped"].startswith("skipped: size")
    finally:
        del REGISTRY["_tmp_big"]


def test_table1_respects_cap():
    rows = table1(RunConfig(max_faces=1000), [(5, 5, 5, 3), (5, 6, 7, 3)])
    assert rows[0]["status"] == "pass"
    assert rows[1]["status"].startswith("skipped")


def test_parallel_map_keeps_order():
    assert parallel_map(abs, [-3, 1, -2, 5], threads=2) == [3, 1, 2, 5]


def test_small_sweeps_pass():
    for cid in ("identities", "connectivity", "exactness", "gamma-mn"):
        assert run_case(cid, RunConfig(max_size=7))["pass"], cid


def test_pair_catalog():
    kinds = {k for k, _, _ in exactness_pairs(6)}
    assert kinds == {"M-Gamma", "D2-D1", "D1-D0"}
    with pytest.raises(ValueError):
        pair_specs("X-Y", 3, 3)
    with pytest.raises(ValueError):
        RunConfig(threads=0)
