import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rotforge.synthesis import (
    PQFModel,
    PrecisionValue,
    SRAnalytic,
    SRRecord,
    SRTable,
    approximate_angle,
    convert_precision,
    diamond_bracket,
    gs_rotation_cost,
    largest_feasible_eps_gs,
    pqf_tcount,
    reachable_angles,
    sr_tcount,
)
from rotforge.quantum import theta

from oracles import best_angle, pqf_tcount as oracle_pqf


def test_pqf_values():
    assert pqf_tcount(1e-10) == pytest.approx(55.21, abs=0.01)
    assert pqf_tcount(1e-15) == pytest.approx(74.1, abs=0.05)
    assert pqf_tcount(1e-10) < pqf_tcount(1e-20)
    for eps in (1e-3, 1e-8, 1e-17, 1e-30):
        assert pqf_tcount(eps) == pytest.approx(oracle_pqf(eps), rel=1e-13)
    with pytest.raises(ValueError):
        pqf_tcount(0.0)


def test_sr_models(tmp_path):
    assert sr_tcount(1e-10, SRAnalytic(3.0)) == pytest.approx(99.66, abs=0.01)
    table = SRTable((SRRecord(1e-10, 102), SRRecord(1e-11, 110)))
    assert table.tcount(1e-10) == 102
    assert table.tcount(5e-11) == 110
    with pytest.raises(ValueError):
        table.tcount(1e-12)
    path = tmp_path / "sr.csv"
    path.write_text("epsilon,tcount,angle\n1e-10,102,0.3\n1e-11,110,\n")
    loaded = SRTable.from_csv(path)
    assert loaded.tcount(2e-11) == 110
    bad = tmp_path / "bad.csv"
    bad.write_text("eps,count\n1,2\n")
    with pytest.raises(ValueError):
        SRTable.from_csv(bad)
    with pytest.raises(ValueError):
        SRTable((SRRecord(-1.0, 3),))


def test_packaged_sr_template_is_empty():
    from importlib import resources

    path = resources.files("rotforge.data").joinpath("sr_table_template.csv")
    table = SRTable.from_csv(str(path))
    assert table.records == ()
    with pytest.raises(ValueError):
        table.tcount(1e-10)


def test_tcounts_nonincreasing():
    grid = np.logspace(-30, -1, 200)
    for model in (PQFModel(), SRAnalytic()):
        counts = [model.tcount(e) for e in grid]
        assert all(a >= b for a, b in zip(counts, counts[1:]))


def test_gs_cost_dominates_equal_split():
    frontier = [(10.0 ** -k, 10.0 * k) for k in range(3, 26)]
    target = 1e-12
    best = gs_rotation_cost(PQFModel(), frontier, target)
    assert best.error <= target
    t = pqf_tcount(target / 2)
    split = min(c for e, c in frontier if e <= target / (2 * t))
    assert best.cost <= t * split


def test_gs_degenerate_loose_target():
    class One:
        name = "one"

        def tcount(self, eps):
            return 1.0

    got = gs_rotation_cost(One(), [(1e-3, 1.0), (1e-6, 30.0)], 0.1)
    assert got.cost == 1.0 and got.m3_cost == 1.0


def test_gs_unreachable():
    with pytest.raises(ValueError):
        gs_rotation_cost(PQFModel(), [(1e-3, 1.0)], 1e-6)
    with pytest.raises(ValueError):
        gs_rotation_cost(PQFModel(), [], 1e-6)
    assert largest_feasible_eps_gs(PQFModel(), 0.5, 1e-6) is None


def test_precision_conversions():
    phi = PrecisionValue(1e-6, "angle")
    assert convert_precision(phi, "spectral").value == pytest.approx(1e-6, rel=1e-9)
    assert convert_precision(phi, "pqf").value == pytest.approx(7.071e-7, rel=1e-4)
    pqf = convert_precision(phi, "pqf")
    back = convert_precision(convert_precision(pqf, "angle"), "pqf")
    assert back.value == pytest.approx(pqf.value, rel=1e-12)
    with pytest.raises(ValueError):
        convert_precision(PrecisionValue(0.5, "angle"), "pqf")
    with pytest.raises(ValueError):
        PrecisionValue(1.0, "furlongs")


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-12, 0.1))
def test_pqf_is_diamond_over_sqrt2(phi):
    p = PrecisionValue(phi, "angle")
    ratio = convert_precision(p, "pqf").value / convert_precision(p, "diamond").value
    assert ratio == pytest.approx(1 / math.sqrt(2), abs=1e-12)


def test_diamond_bracket():
    lo, hi = diamond_bracket(1e-3)
    assert lo <= hi
    assert hi == pytest.approx(convert_precision(PrecisionValue(1e-3, "angle"), "diamond").value)


def test_angle_examples():
    a = approximate_angle(0.1, 1e-3)
    assert a.reduced() == (11, 65)
    assert a.achieved_error == pytest.approx(2.91e-4, rel=1e-2)
    assert approximate_angle(1.0, 1e-10).level == 35
    exact = approximate_angle(theta(5), 1e-3)
    assert exact.achieved_error == pytest.approx(0.0, abs=1e-15)
    lvl, n = exact.reduced()
    assert (lvl, n) == (5, 1)
    with pytest.raises(ValueError):
        approximate_angle(7.0, 1e-3)


def test_angle_matches_brute_force():
    rng = np.random.default_rng(2)
    for _ in range(1000):
        phi = float(rng.uniform(0, 2 * math.pi))
        tol = float(10 ** rng.uniform(-9, -1))
        got = approximate_angle(phi, tol)
        level, n, err = best_angle(phi, tol)
        assert (got.level, got.n) == (level, n)
        assert got.achieved_error <= math.pi / 2 ** (got.level + 1) + 1e-15
        assert got.achieved_error <= tol


@pytest.mark.parametrize("level", range(0, 13))
def test_reachable_angles_uniform(level):
    a = reachable_angles(level)
    assert len(a) == 2 ** (level + 1)
    assert a[-1] == pytest.approx(2 * math.pi)
    assert np.allclose(np.diff(a), math.pi / 2**level)
