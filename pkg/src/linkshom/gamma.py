"""Morphisms of finite pointed sets and their action on the Arnold algebra.

A pointed map f: k_+ -> l_+ is a table of length k with entries in 0..l,
0 being the basepoint.  In cohomology it induces the algebra map
H^*(Conf(k)) -> H^*(Conf(l)), w(a,b) |-> w(f(a), f(b)), where the image is
zero as soon as f(a) or f(b) is the basepoint or f(a) = f(b).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .arnold import Factors, GenParity, as_parity, basis_index, iter_basis, reduce_pairs
from .linalg import SparseRationalMatrix


@dataclass(frozen=True)
class PointedMap:
    k: int
    l: int
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(x) for x in self.table))
        if self.k < 0 or self.l < 0:
            raise ValueError("negative pointed-set size")
        if len(self.table) != self.k:
            raise ValueError(f"table has length {len(self.table)}, expected {self.k}")
        for x in self.table:
            if not 0 <= x <= self.l:
                raise ValueError(f"entry {x} outside 0..{self.l}")

    def __call__(self, i: int) -> int:
        return self.table[i - 1] if i else 0

    @classmethod
    def identity(cls, k: int) -> "PointedMap":
        return cls(k, k, tuple(range(1, k + 1)))

    @classmethod
    def constant(cls, k: int, l: int) -> "PointedMap":
        return cls(k, l, (0,) * k)

    def is_monotone_injection(self) -> bool:
        """True when non-base elements go injectively and order-preservingly to non-base elements."""
        return all(x > 0 for x in self.table) and all(
            self.table[i] < self.table[i + 1] for i in range(self.k - 1)
        )

    def __str__(self) -> str:
        return format_pointed_map(self)


def compose(f: PointedMap, g: PointedMap) -> PointedMap:
    """g after f."""
    if f.l != g.k:
        raise ValueError(f"cannot compose {f.k}->{f.l} with {g.k}->{g.l}")
    return PointedMap(f.k, g.l, tuple(g(x) for x in f.table))


def format_pointed_map(f: PointedMap) -> str:
    return f"{f.k} {f.l} : " + " ".join(map(str, f.table))


def parse_pointed_map(text: str) -> PointedMap:
    head, sep, body = text.partition(":")
    if not sep:
        raise ValueError(f"missing ':' in pointed map {text!r}")
    sizes = head.split()
    if len(sizes) != 2:
        raise ValueError(f"expected 'k l' before ':' in {text!r}")
    return PointedMap(int(sizes[0]), int(sizes[1]), tuple(int(x) for x in body.split()))


def image_terms(f: PointedMap, mono: Sequence[tuple[int, int]], parity) -> dict[Factors, int]:
    """Image of one monomial, expanded in the admissible basis of Conf(f.l)."""
    pairs = []
    for a, b in mono:
        fa, fb = f(a), f(b)
        if fa == 0 or fb == 0 or fa == fb:
            return {}
        pairs.append((fa, fb))
    return reduce_pairs(pairs, parity)


@dataclass(frozen=True)
class InducedMap:
    f: PointedMap
    t: int
    parity: GenParity
    matrix: SparseRationalMatrix  # rows: basis of Conf(l), columns: basis of Conf(k)


@lru_cache(maxsize=4096)
def _induced(f: PointedMap, t: int, parity: GenParity) -> InducedMap:
    target = basis_index(f.l, t)
    columns = []
    for mono in iter_basis(f.k, t):
        columns.append({target[m]: c for m, c in image_terms(f, mono, parity).items()})
    matrix = SparseRationalMatrix(len(target), len(columns), columns)
    return InducedMap(f, t, parity, matrix)


def induced_map(f: PointedMap, t: int, parity) -> InducedMap:
    return _induced(f, t, as_parity(parity))
