"""Closed-form Euler series and radius-of-convergence bounds.

With y = x^(d-1), the Euler characteristic series of the link complex is
1/((1-y)(1-2y)...(1-my)); the pair series subtracts (1-y)^(-m).  All
arithmetic is exact; radii are floats and only reported.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .arnold import format_coefficient


@dataclass(frozen=True)
class PowerSeries:
    coefficients: tuple[Fraction, ...]
    order: int

    def __post_init__(self):
        if len(self.coefficients) != self.order + 1:
            raise ValueError("need order + 1 coefficients")

    @classmethod
    def from_list(cls, coeffs) -> "PowerSeries":
        cs = tuple(Fraction(c) for c in coeffs)
        return cls(cs, len(cs) - 1)

    def __getitem__(self, k: int) -> Fraction:
        return self.coefficients[k]

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        order = min(self.order, other.order)
        return PowerSeries(tuple(a - b for a, b in zip(self.coefficients, other.coefficients)), order)

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        order = min(self.order, other.order)
        out = [Fraction(0)] * (order + 1)
        for i, a in enumerate(self.coefficients[: order + 1]):
            if a:
                for j in range(order + 1 - i):
                    out[i + j] += a * other.coefficients[j]
        return PowerSeries(tuple(out), order)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coefficients)

    def integers(self) -> list[int]:
        if not self.is_integral():
            raise ValueError("series has non-integral coefficients")
        return [int(c) for c in self.coefficients]

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [format_coefficient(c) for c in self.coefficients]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True) + "\n"


def _check(m: int, d: int, order: int):
    if m < 1 or d < 4 or order < 0:
        raise ValueError("need m >= 1, d >= 4, order >= 0")


def _geometric(ratio: int, step: int, order: int) -> PowerSeries:
    """1/(1 - ratio * x^step) truncated at ``order``."""
    out = [Fraction(0)] * (order + 1)
    for t in range(order // step + 1):
        out[t * step] = Fraction(ratio) ** t
    return PowerSeries(tuple(out), order)


def euler_series_links(m: int, d: int, order: int) -> PowerSeries:
    """Expansion of 1/((1-x^(d-1))(1-2x^(d-1))...(1-mx^(d-1)))."""
    _check(m, d, order)
    s = _geometric(1, d - 1, order)
    for i in range(2, m + 1):
        s = s * _geometric(i, d - 1, order)
    if not s.is_integral():
        raise ArithmeticError("Euler series coefficient is not an integer")
    return s


def binomial_series(m: int, d: int, order: int) -> PowerSeries:
    """Expansion of (1 - x^(d-1))^(-m)."""
    step = d - 1
    out = [Fraction(0)] * (order + 1)
    for t in range(order // step + 1):
        out[t * step] = Fraction(math.comb(t + m - 1, m - 1))
    return PowerSeries(tuple(out), order)


def euler_series_pair(m: int, d: int, order: int) -> PowerSeries:
    _check(m, d, order)
    s = euler_series_links(m, d, order) - binomial_series(m, d, order)
    if not s.is_integral():
        raise ArithmeticError("pair series coefficient is not an integer")
    return s


def growth_ratios(series: PowerSeries, step: int) -> list[Fraction]:
    """Ratios of successive nonzero coefficients at multiples of ``step``."""
    cs = [series[k] for k in range(0, series.order + 1, step)]
    return [b / a for a, b in zip(cs, cs[1:]) if a]


LINK_FORMULA = "radius <= (1/m)^(1/(d-1))"
KNOT_FORMULA = "radius <= (1/sqrt(2))^(1/(d-1))"
CONDITIONAL_FORMULA = "if the knot radius R is positive, the pair radius is < R whenever m > 1/R^(d-1)"


@dataclass(frozen=True)
class RadiusBound:
    m: int
    d: int
    link_bound: float
    knot_bound: float

    @property
    def minimum(self) -> float:
        return min(self.link_bound, self.knot_bound)

    @property
    def link_beats_knot(self) -> bool:
        return self.link_bound < self.knot_bound

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "d": self.d,
            "link_bound": self.link_bound,
            "knot_bound": self.knot_bound,
            "minimum": self.minimum,
            "link_bound_is_smaller": self.link_beats_knot,
            "formulas": {"link": LINK_FORMULA, "knot": KNOT_FORMULA, "conditional": CONDITIONAL_FORMULA},
            "growth_rate": f"exponential growth of rate m^(1/(d-1)) = {self.m ** (1 / (self.d - 1))!r}",
        }


def link_bound(m: int, d: int) -> float:
    return (1.0 / m) ** (1.0 / (d - 1))


def knot_bound(d: int) -> float:
    return (1.0 / math.sqrt(2.0)) ** (1.0 / (d - 1))


def radius_report(m: int, d: int) -> RadiusBound:
    if m < 1 or d < 4:
        raise ValueError("need m >= 1, d >= 4")
    return RadiusBound(m, d, link_bound(m, d), knot_bound(d))


def poincare_series(table, order: int) -> PowerSeries:
    """Poincare series of a Betti table, refusing incomplete or missing degrees."""
    if order < 0:
        raise ValueError("order must be non-negative")
    by_u = {e.u: e for e in table.entries}
    out = []
    for u in range(order + 1):
        e = by_u.get(u)
        if e is None:
            raise ValueError(f"degree {u} not in the table")
        if not e.complete:
            raise ValueError(f"degree {u} is incomplete")
        out.append(Fraction(e.betti))
    return PowerSeries(tuple(out), order)
