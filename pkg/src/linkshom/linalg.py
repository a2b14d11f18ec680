"""Exact linear algebra over Q for sparse matrices.

Matrices are stored column-wise as ``{row: value}`` dicts with ``int`` or
``Fraction`` values.  Ranks are computed either modulo random word-size
primes (the rank over F_p never exceeds the rank over Q, so the maximum
over several primes is a lower bound that is exact with overwhelming
probability) or by fraction-free integer elimination.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import gmpy2

Number = int | Fraction
Column = dict[int, Number]


def _clean(col: Mapping[int, Number]) -> Column:
    out = {}
    for r, v in col.items():
        if v:
            if isinstance(v, Fraction) and v.denominator == 1:
                v = v.numerator
            out[r] = v
    return out


class SparseRationalMatrix:
    __slots__ = ("rows", "cols", "_cols")

    def __init__(self, rows: int, cols: int, columns: Sequence[Mapping[int, Number]] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimension")
        self.rows = rows
        self.cols = cols
        if columns is None:
            self._cols = [{} for _ in range(cols)]
        else:
            if len(columns) != cols:
                raise ValueError(f"expected {cols} columns, got {len(columns)}")
            self._cols = [_clean(c) for c in columns]
            for col in self._cols:
                for r in col:
                    if not 0 <= r < rows:
                        raise ValueError(f"row index {r} out of range 0..{rows - 1}")

    # -- construction
    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Mapping[tuple[int, int], Number]):
        columns: list[Column] = [{} for _ in range(cols)]
        for (r, c), v in entries.items():
            if not 0 <= c < cols:
                raise ValueError(f"column index {c} out of range")
            columns[c][r] = columns[c].get(r, 0) + v
        return cls(rows, cols, columns)

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[Number]]):
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        return cls(rows, cols, [{r: dense[r][c] for r in range(rows)} for c in range(cols)])

    @classmethod
    def from_scipy(cls, mat):
        csc = mat.tocsc()
        columns = []
        for j in range(csc.shape[1]):
            lo, hi = csc.indptr[j], csc.indptr[j + 1]
            columns.append({int(r): int(v) for r, v in zip(csc.indices[lo:hi], csc.data[lo:hi])})
        return cls(csc.shape[0], csc.shape[1], columns)

    # -- access
    def column(self, j: int) -> Column:
        return self._cols[j]

    def columns(self) -> list[Column]:
        return self._cols

    @property
    def entries(self) -> dict[tuple[int, int], Number]:
        return {(r, c): v for c, col in enumerate(self._cols) for r, v in col.items()}

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self._cols)

    def is_zero(self) -> bool:
        return not any(self._cols)

    def is_integral(self) -> bool:
        return all(isinstance(v, int) for col in self._cols for v in col.values())

    def __getitem__(self, rc: tuple[int, int]) -> Number:
        r, c = rc
        return self._cols[c].get(r, 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseRationalMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self._cols == other._cols

    def __repr__(self) -> str:
        return f"SparseRationalMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    # -- arithmetic
    def transpose(self) -> "SparseRationalMatrix":
        columns: list[Column] = [{} for _ in range(self.rows)]
        for c, col in enumerate(self._cols):
            for r, v in col.items():
                columns[r][c] = v
        return SparseRationalMatrix(self.cols, self.rows, columns)

    def __add__(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        out = []
        for a, b in zip(self._cols, other._cols):
            col = dict(a)
            for r, v in b.items():
                col[r] = col.get(r, 0) + v
            out.append(col)
        return SparseRationalMatrix(self.rows, self.cols, out)

    def scale(self, c: Number) -> "SparseRationalMatrix":
        return SparseRationalMatrix(self.rows, self.cols, [{r: c * v for r, v in col.items()} for col in self._cols])

    def apply(self, vec: Mapping[int, Number]) -> Column:
        out: Column = {}
        for c, x in vec.items():
            for r, v in self._cols[c].items():
                out[r] = out.get(r, 0) + x * v
        return _clean(out)

    def __matmul__(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        return SparseRationalMatrix(self.rows, other.cols, [self.apply(col) for col in other._cols])

    def to_dense(self) -> list[list[Fraction]]:
        dense = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for c, col in enumerate(self._cols):
            for r, v in col.items():
                dense[r][c] = Fraction(v)
        return dense

    def to_scipy(self):
        import numpy as np
        import scipy.sparse as sp

        if not self.is_integral():
            raise ValueError("only integral matrices convert to scipy")
        rows, cols, data = [], [], []
        for c, col in enumerate(self._cols):
            for r, v in col.items():
                rows.append(r)
                cols.append(c)
                data.append(v)
        return sp.csc_matrix((np.array(data, dtype=np.int64), (rows, cols)), shape=(self.rows, self.cols))

    # -- interchange format: "rows cols" then "r c p/q" per nonzero
    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        for (r, c), v in sorted(self.entries.items()):
            v = Fraction(v)
            val = str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
            lines.append(f"{r} {c} {val}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SparseRationalMatrix":
        lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines or len(lines[0]) != 2:
            raise ValueError("missing 'rows cols' header")
        rows, cols = int(lines[0][0]), int(lines[0][1])
        entries: dict[tuple[int, int], Number] = {}
        for parts in lines[1:]:
            if len(parts) != 3:
                raise ValueError(f"bad triplet line: {' '.join(parts)}")
            r, c = int(parts[0]), int(parts[1])
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry ({r},{c}) out of range")
            entries[(r, c)] = entries.get((r, c), 0) + Fraction(parts[2])
        return cls.from_entries(rows, cols, entries)


# ------------------------------------------------------------------- rank

@dataclass(frozen=True)
class RankResult:
    rank: int
    method: str
    primes_used: tuple[int, ...] = ()
    verified: bool = False


def _vectors(A: SparseRationalMatrix) -> list[Column]:
    vecs = A.columns() if A.cols <= A.rows else A.transpose().columns()
    return sorted((v for v in vecs if v), key=len)


def _rank_mod_p(vecs: Iterable[Column], p: int) -> int:
    pivots: dict[int, dict[int, int]] = {}
    for vec in vecs:
        v = {}
        for r, x in vec.items():
            if isinstance(x, Fraction):
                x = x.numerator * pow(x.denominator, -1, p)
            x %= p
            if x:
                v[r] = x
        while v:
            r = min(v)
            w = pivots.get(r)
            if w is None:
                inv = pow(v[r], -1, p)
                pivots[r] = {k: x * inv % p for k, x in v.items()}
                break
            f = v[r]
            for k, x in w.items():
                y = (v.get(k, 0) - f * x) % p
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
    return len(pivots)


def _integer_vector(vec: Column) -> dict[int, int]:
    dens = [x.denominator for x in vec.values() if isinstance(x, Fraction)]
    scale = math.lcm(*dens) if dens else 1
    return {r: int(x * scale) for r, x in vec.items()}


def _rank_fraction_free(vecs: Iterable[Column]) -> int:
    pivots: dict[int, dict[int, int]] = {}
    for vec in vecs:
        v = _integer_vector(vec)
        while v:
            r = min(v)
            w = pivots.get(r)
            if w is None:
                g = math.gcd(*v.values())
                pivots[r] = {k: x // g for k, x in v.items()} if g > 1 else v
                break
            a, b = w[r], v[r]
            g = math.gcd(a, b)
            a, b = a // g, b // g
            new = {k: a * x for k, x in v.items()}
            for k, x in w.items():
                y = new.get(k, 0) - b * x
                if y:
                    new[k] = y
                else:
                    new.pop(k, None)
            if new:
                g = math.gcd(*new.values())
                if g > 1:
                    new = {k: x // g for k, x in new.items()}
            v = new
    return len(pivots)


def draw_primes(count: int, seed: int, avoid: Iterable[int] = ()) -> list[int]:
    """Deterministic list of distinct ~62-bit primes not dividing any of ``avoid``."""
    rng = random.Random(seed)
    avoid = [abs(a) for a in avoid if abs(a) > 1]
    primes: list[int] = []
    while len(primes) < count:
        p = int(gmpy2.next_prime(rng.randrange(1 << 61, 1 << 62)))
        if p in primes or any(a % p == 0 for a in avoid):
            continue  # re-draw on collision with a denominator
        primes.append(p)
    return primes


def rank(A: SparseRationalMatrix, policy: str = "multimodular", seed: int = 0, n_primes: int = 2) -> RankResult:
    """Rank over Q.  ``policy`` is ``multimodular``, ``exact`` or ``both``."""
    if policy not in ("multimodular", "exact", "both"):
        raise ValueError(f"unknown rank policy {policy!r}")
    vecs = _vectors(A)
    if not vecs:
        return RankResult(0, "exact" if policy == "exact" else "multimodular", (), policy != "multimodular")
    exact = _rank_fraction_free(vecs) if policy in ("exact", "both") else None
    if policy == "exact":
        return RankResult(exact, "exact", (), True)
    dens = {x.denominator for v in vecs for x in v.values() if isinstance(x, Fraction)}
    primes = draw_primes(n_primes, seed, dens)
    modular = max(_rank_mod_p(vecs, p) for p in primes)
    if exact is not None and exact != modular:
        from .errors import RankInconsistencyError

        raise RankInconsistencyError(f"multimodular rank {modular} != exact rank {exact}")
    return RankResult(modular, "multimodular", tuple(primes), exact is not None)


# --------------------------------------------------------- quotients

@dataclass
class QuotientBasis:
    """Basis of V / span given by the coordinates left free by a reduced echelon form of span."""

    dim: int
    complement: list[int]
    pivots: dict[int, dict[int, Fraction]] = field(repr=False)

    def __post_init__(self):
        self.position = {c: i for i, c in enumerate(self.complement)}

    @property
    def size(self) -> int:
        return len(self.complement)

    def project(self, vec: Mapping[int, Number]) -> Column:
        """Coordinates of the class of ``vec`` in the complement basis."""
        out: dict[int, Number] = {}
        for r, x in vec.items():
            piv = self.pivots.get(r)
            if piv is None:
                k = self.position[r]
                out[k] = out.get(k, 0) + x
                continue
            for c, y in piv.items():
                if c != r:
                    k = self.position[c]
                    out[k] = out.get(k, 0) - x * y
        return _clean(out)

    @property
    def projection(self) -> SparseRationalMatrix:
        return SparseRationalMatrix(self.size, self.dim, [self.project({i: 1}) for i in range(self.dim)])

    @property
    def inclusion(self) -> SparseRationalMatrix:
        return SparseRationalMatrix(self.dim, self.size, [{c: 1} for c in self.complement])

    def span_vectors(self) -> list[dict[int, Fraction]]:
        return list(self.pivots.values())


def quotient_basis(V_dim: int, span: SparseRationalMatrix) -> QuotientBasis:
    if span.rows != V_dim:
        raise ValueError(f"span has {span.rows} rows, expected {V_dim}")
    pivots: dict[int, dict[int, Fraction]] = {}
    for col in span.columns():
        v = {r: Fraction(x) for r, x in col.items()}
        for r in [r for r in v if r in pivots]:
            f = v.get(r)
            if not f:
                continue
            for k, y in pivots[r].items():
                z = v.get(k, 0) - f * y
                if z:
                    v[k] = z
                else:
                    v.pop(k, None)
        if not v:
            continue
        r = min(v)
        inv = 1 / v[r]
        v = {k: x * inv for k, x in v.items()}
        for other in pivots.values():
            f = other.get(r)
            if f:
                for k, y in v.items():
                    z = other.get(k, 0) - f * y
                    if z:
                        other[k] = z
                    else:
                        other.pop(k, None)
        pivots[r] = v
    complement = [i for i in range(V_dim) if i not in pivots]
    return QuotientBasis(V_dim, complement, pivots)


def descend(B: SparseRationalMatrix, src: QuotientBasis, dst: QuotientBasis, check: bool = True) -> SparseRationalMatrix:
    """The map V_src/span_src -> V_dst/span_dst induced by B."""
    if (B.rows, B.cols) != (dst.dim, src.dim):
        raise ValueError("boundary shape does not match the quotients")
    if check:
        for s in src.span_vectors():
            if dst.project(B.apply(s)):
                from .errors import WellDefinednessError

                raise WellDefinednessError("boundary does not preserve the degenerate span")
    return SparseRationalMatrix(dst.size, src.size, [dst.project(B.column(c)) for c in src.complement])
