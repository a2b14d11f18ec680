import math
from fractions import Fraction

import pytest

from linkshom.engine import BettiEntry, BettiTable, betti_table
from linkshom.series import (
    PowerSeries,
    euler_series_links,
    euler_series_pair,
    growth_ratios,
    knot_bound,
    link_bound,
    poincare_series,
    radius_report,
)


def long_division(m, t_max):
    """Coefficients of 1/prod_{i<=m}(1 - i y) by power-series long division."""
    den = [Fraction(1)]
    for i in range(1, m + 1):
        den = [a - i * b for a, b in zip(den + [0], [0] + den)]
    out = []
    rem = [Fraction(1)] + [Fraction(0)] * t_max
    for k in range(t_max + 1):
        c = rem[k] / den[0]
        out.append(c)
        for j, d in enumerate(den):
            if k + j <= t_max:
                rem[k + j] -= c * d
    return out


def test_link_series_examples():
    assert euler_series_links(2, 4, 6).integers() == [1, 0, 0, 3, 0, 0, 7]
    assert euler_series_links(3, 6, 15)[15] == 90
    s = euler_series_links(1, 5, 12)
    assert [s[k] for k in range(13)] == [1 if k % 4 == 0 else 0 for k in range(13)]


def test_series_against_long_division():
    for m in range(1, 5):
        for d in (4, 5, 7):
            s = euler_series_links(m, d, 8 * (d - 1))
            want = long_division(m, 8)
            for t in range(9):
                assert s[t * (d - 1)] == want[t]
            assert all(s[k] == 0 for k in range(s.order + 1) if k % (d - 1))


def test_partial_fraction_closed_forms():
    for t in range(10):
        s2 = euler_series_links(2, 4, 3 * t)
        s3 = euler_series_links(3, 4, 3 * t)
        assert s2[3 * t] == 2 ** (t + 1) - 1
        assert s3[3 * t] == Fraction(1, 2) - 4 * 2**t + Fraction(9, 2) * 3**t


def test_pair_series():
    for d in (4, 6):
        assert all(c == 0 for c in euler_series_pair(1, d, 20).coefficients)
    assert euler_series_pair(2, 4, 6).integers() == [0, 0, 0, 1, 0, 0, 4]
    for m in range(1, 5):
        links, pair = euler_series_links(m, 5, 40), euler_series_pair(m, 5, 40)
        assert pair[0] == 0
        assert all(0 <= p <= l for p, l in zip(pair.coefficients, links.coefficients))


def test_growth_ratio_approaches_m():
    for m in (2, 3, 4):
        ratios = growth_ratios(euler_series_pair(m, 4, 3 * 40), 3)
        assert abs(float(ratios[-1]) - m) < 0.05


def test_radius_examples():
    assert radius_report(1, 7).link_bound == 1.0
    assert math.isclose(radius_report(3, 6).link_bound, 3 ** (-1 / 5), rel_tol=1e-12)
    assert math.isclose(radius_report(3, 6).knot_bound, 2 ** (-1 / 10), rel_tol=1e-12)
    assert link_bound(10, 5) < link_bound(2, 5)
    r = radius_report(3, 6)
    assert r.minimum == min(r.link_bound, r.knot_bound)
    assert r.link_beats_knot and not radius_report(1, 6).link_beats_knot
    with pytest.raises(ValueError):
        radius_report(0, 6)
    data = r.to_json()
    assert "(1/m)^(1/(d-1))" in data["formulas"]["link"]
    assert "m > 1/R^(d-1)" in data["formulas"]["conditional"]


def test_bounds_in_unit_interval():
    for d in (4, 5, 9):
        assert 0 < knot_bound(d) <= 1
        for m in range(1, 30):
            assert 0 < link_bound(m, d) <= 1
            assert link_bound(m + 1, d) < link_bound(m, d)


def test_poincare_series():
    assert poincare_series(betti_table(0, 1, 6, 5), 5).integers() == [1, 0, 0, 0, 0, 0]
    assert poincare_series(betti_table(1, 1, 7, 4), 4).integers() == [1, 0, 0, 0, 1]
    partial = BettiTable(1, 2, 9, [BettiEntry(0, 1, False)], "user", "multimodular")
    with pytest.raises(ValueError):
        poincare_series(partial, 0)
    with pytest.raises(ValueError):
        poincare_series(betti_table(1, 1, 7, 2), 3)


def test_json_format():
    s = PowerSeries.from_list([1, Fraction(1, 2), 0])
    assert s.to_json() == {"order": 2, "coeffs": ["1", "1/2", "0"]}
    assert not s.is_integral()
    with pytest.raises(ValueError):
        s.integers()
    with pytest.raises(ValueError):
        PowerSeries((Fraction(1),), 3)
