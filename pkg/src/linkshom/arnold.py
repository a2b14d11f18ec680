"""The cohomology algebra H^*(Conf(n, R^d); Q) in its Arnold presentation.

Generators w(a,b), 1 <= a < b <= n, have degree d-1 and satisfy

    w(b,a) = (-1)^d w(a,b),   w(a,b)^2 = 0,
    w(i,j) w(j,k) + w(j,k) w(k,i) + w(k,i) w(i,j) = 0.

A monomial is stored as a tuple of pairs sorted by (second index, first
index).  It is *admissible* when the second indices are strictly
increasing; admissible monomials of word length t form a basis of the
degree t(d-1) part, whose size is the coefficient of x^t in
prod_{i<n}(1 + i x).

Only the parity of d-1 enters the algebra, so every routine takes a
:class:`GenParity` rather than d itself.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

Pair = tuple[int, int]
Factors = tuple[Pair, ...]


class GenParity(enum.Enum):
    EVEN = "even"
    ODD = "odd"

    @classmethod
    def from_d(cls, d: int) -> "GenParity":
        return cls.ODD if (d - 1) % 2 else cls.EVEN

    @property
    def odd(self) -> bool:
        return self is GenParity.ODD

    @property
    def swap_sign(self) -> int:
        # sign picked up by exchanging two adjacent generators
        return -1 if self.odd else 1

    @property
    def flip_sign(self) -> int:
        # w(b,a) = flip_sign * w(a,b); equals (-1)^d
        return 1 if self.odd else -1


def as_parity(parity) -> GenParity:
    if isinstance(parity, GenParity):
        return parity
    if isinstance(parity, str):
        return GenParity(parity)
    raise TypeError(f"expected GenParity, got {parity!r}")


class OmegaMonomial(NamedTuple):
    n: int
    factors: Factors

    @property
    def t(self) -> int:
        return len(self.factors)

    def degree(self, d: int) -> int:
        return self.t * (d - 1)

    def __str__(self) -> str:
        return format_monomial(self.factors)


@dataclass(frozen=True)
class AlgebraElement:
    """A Q-linear combination of admissible monomials of one word length."""

    n: int
    t: int
    terms: Mapping[Factors, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for mono, c in self.terms.items():
            if len(mono) != self.t:
                raise ValueError(f"monomial {format_monomial(mono)} has word length != {self.t}")
            c = Fraction(c)
            if c:
                clean[mono] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def zero(cls, n: int, t: int) -> "AlgebraElement":
        return cls(n, t, {})

    @classmethod
    def unit(cls, n: int) -> "AlgebraElement":
        return cls(n, 0, {(): Fraction(1)})

    @classmethod
    def generator(cls, a: int, b: int, n: int, parity) -> "AlgebraElement":
        return normal_form([(a, b)], parity, n=n)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if (self.n, self.t) != (other.n, other.t):
            raise ValueError("cannot add elements of different (n, t)")
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, 0) + c
        return AlgebraElement(self.n, self.t, out)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.n, self.t, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, c) -> "AlgebraElement":
        c = Fraction(c)
        return AlgebraElement(self.n, self.t, {m: c * v for m, v in self.terms.items()})

    def __str__(self) -> str:
        return format_element(self)


# ---------------------------------------------------------------- dimensions

def dimension(n: int, t: int) -> int:
    """Coefficient of x^t in prod_{i=1}^{n-1} (1 + i x)."""
    if n < 0 or t < 0:
        raise ValueError("n and t must be non-negative")
    coeffs = [1]
    for i in range(1, n):
        nxt = coeffs + [0]
        for k in range(1, len(nxt)):
            nxt[k] += i * coeffs[k - 1]
        coeffs = nxt
    return coeffs[t] if t < len(coeffs) else 0


def basis_key(factors: Factors) -> tuple[int, ...]:
    """Sort key realizing the basis order: lexicographic in (b1, a1, b2, a2, ...)."""
    return tuple(x for a, b in factors for x in (b, a))


def iter_basis(n: int, t: int) -> Iterator[Factors]:
    def rec(lo: int, left: int, acc: list[Pair]):
        if left == 0:
            yield tuple(acc)
            return
        for b in range(lo, n - left + 2):
            for a in range(1, b):
                acc.append((a, b))
                yield from rec(b + 1, left - 1, acc)
                acc.pop()

    if n < 0 or t < 0:
        raise ValueError("n and t must be non-negative")
    yield from rec(2, t, [])


def enumerate_basis(n: int, t: int) -> list[OmegaMonomial]:
    return [OmegaMonomial(n, f) for f in iter_basis(n, t)]


@lru_cache(maxsize=256)
def basis_index(n: int, t: int) -> dict[Factors, int]:
    return {f: i for i, f in enumerate(iter_basis(n, t))}


def is_admissible(factors: Sequence[Pair]) -> bool:
    prev = 0
    for a, b in factors:
        if not (1 <= a < b) or b <= prev:
            return False
        prev = b
    return True


# ------------------------------------------------------------- rewriting

def _perm_sign(seq: Sequence) -> int:
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[j] < seq[i]:
                inv += 1
    return -1 if inv % 2 else 1


def _canon(pairs: Sequence[Pair], odd: bool) -> tuple[int, Factors]:
    """Orient every factor and sort by (b, a); sign 0 means the product vanishes."""
    sign = 1
    flip = 1 if odd else -1
    oriented = []
    for a, b in pairs:
        if a == b or a == 0 or b == 0:
            return 0, ()
        if a > b:
            a, b = b, a
            sign *= flip
        oriented.append((b, a))
    order = sorted(range(len(oriented)), key=oriented.__getitem__)
    if odd:
        sign *= _perm_sign(order)
    fac = tuple((oriented[i][1], oriented[i][0]) for i in order)
    for i in range(len(fac) - 1):
        if fac[i] == fac[i + 1]:
            return 0, ()
    return sign, fac


def _compress(fac: Factors) -> tuple[Factors, list[int]]:
    labels = sorted({x for p in fac for x in p})
    pos = {x: i + 1 for i, x in enumerate(labels)}
    return tuple((pos[a], pos[b]) for a, b in fac), labels


@lru_cache(maxsize=1 << 16)
def _reduce_compressed(fac: Factors, odd: bool) -> tuple[tuple[Factors, int], ...]:
    out: dict[Factors, int] = {}
    i = len(fac) - 2
    while i >= 0 and fac[i][1] != fac[i + 1][1]:
        i -= 1
    if i < 0:
        return ((fac, 1),)
    (a, b), (a2, _) = fac[i], fac[i + 1]
    head, tail = fac[:i], fac[i + 2:]
    # w(a,b) w(a2,b) = w(a,a2) w(a2,b) - w(a,a2) w(a,b)
    for repl, c in ((((a, a2), (a2, b)), 1), (((a, a2), (a, b)), -1)):
        sign, g = _canon(head + repl + tail, odd)
        if not sign:
            continue
        for mono, v in _reduce_canonical(g, odd).items():
            out[mono] = out.get(mono, 0) + c * sign * v
    return tuple((m, v) for m, v in out.items() if v)


def _reduce_canonical(fac: Factors, odd: bool) -> dict[Factors, int]:
    if all(fac[i][1] < fac[i + 1][1] for i in range(len(fac) - 1)):
        return {fac: 1}
    small, labels = _compress(fac)
    res = {}
    for mono, v in _reduce_compressed(small, odd):
        res[tuple((labels[a - 1], labels[b - 1]) for a, b in mono)] = v
    return res


def _reduce_randomized(pairs: Sequence[Pair], odd: bool, rng) -> dict[Factors, int]:
    """Same rewriting system, but the repeated pair to eliminate is picked at random."""
    out: dict[Factors, int] = {}
    stack = [(tuple(pairs), 1)]
    while stack:
        raw, c = stack.pop()
        sign, fac = _canon(raw, odd)
        if not sign:
            continue
        c *= sign
        groups: dict[int, list[int]] = {}
        for idx, (_, b) in enumerate(fac):
            groups.setdefault(b, []).append(idx)
        repeated = [g for g in groups.values() if len(g) > 1]
        if not repeated:
            out[fac] = out.get(fac, 0) + c
            continue
        i, j = rng.sample(rng.choice(repeated), 2)
        rest = [k for k in range(len(fac)) if k not in (i, j)]
        order = [i, j] + rest
        s = _perm_sign(order) if odd else 1
        (a, b), (a2, _) = fac[i], fac[j]
        tail = tuple(fac[k] for k in rest)
        stack.append((((a, a2), (a2, b)) + tail, c * s))
        stack.append((((a, a2), (a, b)) + tail, -c * s))
    return {m: v for m, v in out.items() if v}


def reduce_pairs(pairs: Sequence[Pair], parity, rng=None) -> dict[Factors, int]:
    """Expand a product of generators in the admissible basis (integer coefficients)."""
    odd = as_parity(parity).odd
    if rng is not None:
        return _reduce_randomized(pairs, odd, rng)
    sign, fac = _canon(pairs, odd)
    if not sign:
        return {}
    return {m: sign * v for m, v in _reduce_canonical(fac, odd).items()}


def normal_form(raw: Iterable[Pair], parity, n: int | None = None, rng=None) -> AlgebraElement:
    pairs = [(int(a), int(b)) for a, b in raw]
    top = max((max(p) for p in pairs), default=0)
    if n is None:
        n = top
    for a, b in pairs:
        if min(a, b) < 0 or max(a, b) > n:
            raise ValueError(f"index out of range 0..{n} in w({a},{b})")
    terms = reduce_pairs(pairs, parity, rng=rng)
    return AlgebraElement(n, len(pairs), terms)


def multiply(x: AlgebraElement, y: AlgebraElement, parity) -> AlgebraElement:
    if x.n != y.n:
        raise ValueError(f"point counts differ: {x.n} != {y.n}")
    out: dict[Factors, Fraction] = {}
    for mx, cx in x.terms.items():
        for my, cy in y.terms.items():
            for mono, v in reduce_pairs(mx + my, parity).items():
                out[mono] = out.get(mono, 0) + cx * cy * v
    return AlgebraElement(x.n, x.t + y.t, out)


# ------------------------------------------------------------- text format

_FACTOR = re.compile(r"^w\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)$")


def format_monomial(factors: Sequence[Pair]) -> str:
    if not factors:
        return "1"
    return "*".join(f"w({a},{b})" for a, b in factors)


def parse_monomial(text: str) -> list[Pair]:
    text = text.strip()
    if text == "1":
        return []
    pairs = []
    for chunk in text.split("*"):
        m = _FACTOR.match(chunk.strip())
        if not m:
            raise ValueError(f"cannot parse factor {chunk!r}")
        pairs.append((int(m.group(1)), int(m.group(2))))
    return pairs


def format_coefficient(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_element(x: AlgebraElement) -> str:
    rows = sorted(x.terms.items(), key=lambda kv: basis_key(kv[0]))
    return "\n".join(f"{format_coefficient(c)} {format_monomial(m)}" for m, c in rows)


def parse_element(text: str, n: int, parity) -> AlgebraElement:
    """Parse ``coef monomial`` lines; non-admissible monomials are normalized."""
    total: AlgebraElement | None = None
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        coef, _, mono = line.partition(" ")
        term = normal_form(parse_monomial(mono), parity, n=n).scale(Fraction(coef))
        total = term if total is None else total + term
    if total is None:
        raise ValueError("empty element")
    return total
