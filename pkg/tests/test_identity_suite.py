from fractions import Fraction

import pytest

from stirling_records import identity_suite as suite
from stirling_records.identity_suite import REGISTRY, GridSpec, run_suite, suite_passed
from stirling_records.partition_oracle import stirling_recurrence
from stirling_records.poly_engine import printed_inversion


@pytest.fixture(scope="module")
def reports8():
    return run_suite(GridSpec(n_max=8))


def test_all_identities_pass_at_8(reports8):
    by_id = {r.identity_id: r for r in reports8}
    for i in range(1, 13):
        assert by_id[f"I{i}"].status == "pass", by_id[f"I{i}"]
        assert by_id[f"I{i}"].worst_deviation == 0
    assert by_id["S1"].status == "pass"
    assert suite_passed(reports8)


def test_printed_inversion_diagnostic(reports8):
    d1 = next(r for r in reports8 if r.identity_id == "D1")
    assert d1.diagnostic and d1.status == "fail"
    cx = d1.counterexample
    assert cx is not None and cx.lhs != cx.rhs
    # replaying the counterexample reproduces the mismatch
    assert str(printed_inversion(cx.n, cx.d, cx.x)) == cx.lhs
    assert str(stirling_recurrence(cx.n, cx.d)) == cx.rhs


def test_n_max_1_ruiz():
    (r,) = run_suite(GridSpec(n_max=1), ["I2"])
    assert r.status == "pass"
    poly_cell = next(c for c in r.cells if c.x is None)
    assert poly_cell.routes == {"g_dd": "[1]", "d!": "[1]"}


def test_duality_pinned_cell():
    (r,) = run_suite(GridSpec(n_max=6), ["I9"])
    cell = next(c for c in r.cells if (c.n, c.d) == (6, 4))
    assert cell.lhs == cell.rhs == "65"


def test_canonical_order_and_determinism():
    grid = GridSpec(n_max=5, seed=9, trials=2000)
    a = run_suite(grid, ["S1", "I3", "I1"])
    b = run_suite(grid, ["I1", "S1", "I3"], threads=3)
    assert [r.identity_id for r in a] == ["I1", "I3", "S1"]
    assert a == b


def test_skips_come_from_caps():
    (r,) = run_suite(GridSpec(n_max=6, cap=1000), ["I8"])
    skipped = [c for c in r.cells if c.skipped]
    assert skipped and all("exceeds enumeration cap 1000" in c.skipped for c in skipped)
    assert r.status == "pass" and r.cells_skipped == len(skipped)


def test_failure_carries_counterexample(monkeypatch):
    real = suite.se.stirling_record_dp
    monkeypatch.setattr(suite.se, "stirling_record_dp", lambda n, d: real(n, d) + (n == 5 and d == 2))
    (r,) = run_suite(GridSpec(n_max=6), ["I5"])
    assert r.status == "fail"
    assert (r.counterexample.n, r.counterexample.d) == (5, 2)
    assert r.worst_deviation == 1
    assert not suite_passed([r])


def test_unknown_id_and_bad_grid():
    with pytest.raises(ValueError):
        run_suite(GridSpec(n_max=2), ["I99"])
    with pytest.raises(ValueError):
        GridSpec(n_max=0)
    with pytest.raises(ValueError):
        GridSpec(n_max=3, x_samples=(Fraction(0),))


def test_registry_minimum_set():
    assert {f"I{i}" for i in range(1, 13)} | {"D1"} <= set(REGISTRY)
