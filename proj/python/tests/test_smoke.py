import math

import numpy as np
import pytest

import cusplab


@pytest.fixture(scope="module")
def table():
    return cusplab.generate_tau(20000)


def test_first_coefficients(table):
    assert [table.tau(n) for n in range(1, 6)] == [1, -24, 252, -1472, 4830]
    assert table.tau(10) == -115920
    assert table.a(2) == pytest.approx(-24 / 2**5.5, rel=1e-15)
    assert len(table) == 20000


def test_hecke_relation(table):
    assert table.tau(6) == table.tau(2) * table.tau(3)
    assert table.tau(4) == table.tau(2) ** 2 - 2**11


def test_deligne(table):
    assert cusplab.deligne_check(table).max_ratio <= 1.0 + 1e-12


def test_cache_round_trip(table, tmp_path):
    path = tmp_path / "tau.bin"
    cusplab.save_cache(table, path)
    back = cusplab.load_cache(path)
    assert back.checksum() == table.checksum()
    with pytest.raises(cusplab.IoError):
        cusplab.load_cache(tmp_path / "missing.bin")


def test_rational_point():
    p = cusplab.RationalPoint(3, 7)
    assert (p.h, p.k, p.h_bar) == (3, 7, 5)
    q = cusplab.RationalPoint(2, 4)
    assert (q.h, q.k) == (1, 2)
    with pytest.raises(cusplab.ValidationError):
        cusplab.RationalPoint(1, 1)
    assert cusplab.e_k(1, 4) == pytest.approx(1j)


def test_weight_vectorised():
    w = cusplab.WeightProfile(1000.0, 100.0, 10.0)
    xs = np.array([990.0, 1050.0, 1110.0])
    assert np.allclose(w(xs), [0.0, 1.0, 0.0])
    assert w(1050.0) == 1.0


def test_short_sum_matches_direct(table):
    x = 5000.3
    p = cusplab.RationalPoint(1, 3)
    win = cusplab.short_window(x)
    direct = sum(table.a(n) * cusplab.e_k(n, 3) for n in range(win.first, win.last + 1))
    assert cusplab.short_sum(x, p, table) == pytest.approx(direct, abs=1e-12)


def test_mean_square_and_step_series(table):
    w = cusplab.WeightProfile.with_default_rise(4000.0, 400.0)
    p = cusplab.RationalPoint(1, 2)
    exact = cusplab.theorem_integral(w, p, table)
    quad = cusplab.theorem_integral(w, p, table, cusplab.IntegralMethod.QUADRATURE)
    assert exact.integral > 0
    assert quad.integral == pytest.approx(exact.integral, rel=1e-6)
    series = cusplab.step_series(4000.0, 400.0, p, table)
    assert series.edges[0] == 4000.0 and series.edges[-1] == 4400.0


def test_oscillatory_lemma(table):
    w = cusplab.WeightProfile.with_default_rise(1e4, 1e3)
    spec = cusplab.PhaseSpec(cusplab.PhaseFamily.SUM, 2, 3, cusplab.RationalPoint(1, 2))
    check = cusplab.lemma_bound_check(spec, 1, w)
    assert check.accurate
    assert math.isfinite(check.ratio)


def test_voronoi_and_omega(table):
    v = cusplab.voronoi_main_term(5000.0, cusplab.RationalPoint(1, 3), 100, table=table)
    assert math.isfinite(abs(v))
    starts = cusplab.seeded_window_starts(1, 5, 1, 10000)
    assert starts == cusplab.seeded_window_starts(1, 5, 1, 10000)
    stat = cusplab.omega_statistic(starts, 1000.0, table)
    assert stat.max >= max(stat.normalized) - 1e-15


def test_config_round_trip():
    c = cusplab.ExperimentConfig.parse("seed = 9\nk = 1, 2\n")
    assert c.seed == 9 and c.ks == [1, 2]
    again = cusplab.ExperimentConfig.parse(c.text())
    assert again.hash() == c.hash()
    with pytest.raises(cusplab.ValidationError):
        cusplab.ExperimentConfig.parse("no_such_key = 1\n")
