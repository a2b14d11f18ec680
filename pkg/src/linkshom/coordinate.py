"""Normalized complexes whose degenerate span is a coordinate subspace.

Every degeneracy of the wedge model sends non-base elements injectively
and monotonically to non-base elements.  The induced algebra map then
relabels an admissible monomial into another admissible monomial, so the
span of degenerate chains is spanned by basis monomials: those whose
touched points all lie in the image of a single degeneracy.  The
normalized quotient therefore has the remaining monomials as a basis, and
boundaries descend by dropping degenerate terms.  This lets large slices
be built without ever materializing a full level.

Two interchangeable backends are provided: compiled kernels working on
packed int64 keys, and a pure-Python reference.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .arnold import Factors, GenParity, as_parity, basis_key
from .errors import BoundarySquareError, NormalizationError, WellDefinednessError
from .gamma import PointedMap, compose, image_terms
from .simplicial import PointedSimplicialSet

CHUNK = 1 << 18


@dataclass
class LevelCover:
    """Per element id, bitmask of the degeneracies j whose image misses it."""

    npts: int
    cov: list[int]
    full: int

    @property
    def maxcov(self) -> int:
        return max((bin(c).count("1") for c in self.cov), default=0)

    def covers(self, points) -> int:
        mk = 0
        for x in points:
            mk |= self.cov[x]
        return mk


def level_cover(X: PointedSimplicialSet, p: int) -> LevelCover:
    npts = X.points(p)
    cov = [0] * (npts + 1)
    full = 0
    for j in range(p):
        s = X.degeneracy(p - 1, j)
        if not s.is_monotone_injection():
            raise NormalizationError("degeneracy is not a monotone injection", p=p)
        image = set(s.table)
        full |= 1 << j
        for x in range(1, npts + 1):
            if x not in image:
                cov[x] |= 1 << j
    return LevelCover(npts, cov, full)


def key_bits(X: PointedSimplicialSet) -> int:
    return max(1, max(X.points(p) for p in range(X.p_max + 1)).bit_length())


def kernel_fits(X: PointedSimplicialSet, t: int) -> bool:
    return 2 * t * key_bits(X) <= 62 and max(X.points(p) for p in range(X.p_max + 1)) < 128


# ------------------------------------------------------------ pure Python

def iter_normalized(cover: LevelCover, t: int):
    """Admissible monomials touching a point outside every degeneracy image, in basis order."""
    npts, cov, full = cover.npts, cover.cov, cover.full
    maxcov = cover.maxcov

    def rec(k: int, lo: int, mask: int, acc: list):
        r = t - k
        if r == 0:
            if mask == full:
                yield tuple(acc)
            return
        for b in range(lo, npts - r + 2):
            for a in range(1, b):
                m2 = mask | cov[a] | cov[b]
                if bin(full & ~m2).count("1") > 2 * (r - 1) * maxcov:
                    continue
                acc.append((a, b))
                yield from rec(k + 1, b + 1, m2, acc)
                acc.pop()

    yield from rec(0, 2, 0, [])


def _apply_python(f: PointedMap, basis: list[Factors], target: dict[Factors, int], tcover: LevelCover, parity,
                  skip_degenerate: bool = False):
    rows, cols, vals = [], [], []
    for col, mono in enumerate(basis):
        touched = {f(x) for pair in mono for x in pair}
        if skip_degenerate and (0 in touched or tcover.covers(touched) != tcover.full):
            continue
        for term, c in image_terms(f, mono, parity).items():
            if {x for pair in term for x in pair} != touched:
                raise WellDefinednessError("rewriting changed the touched points")
            row = target.get(term)
            if row is not None:
                rows.append(row)
                cols.append(col)
                vals.append(c)
            elif tcover.covers(x for pair in term for x in pair) == tcover.full:
                raise NormalizationError("non-degenerate term missing from the normalized basis")
    return np.array(rows, np.int64), np.array(cols, np.int64), np.array(vals, np.int64)


# ------------------------------------------------------------ complex

@dataclass
class CoordinateComplex:
    X: PointedSimplicialSet
    t: int
    parity: GenParity
    backend: str = "auto"
    _bases: dict = field(default_factory=dict, repr=False)
    _covers: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.parity = as_parity(self.parity)
        if self.backend == "auto":
            self.backend = "kernel" if kernel_fits(self.X, self.t) else "python"
        if self.backend not in ("kernel", "python"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.backend == "kernel" and not kernel_fits(self.X, self.t):
            raise ValueError("slice too large for packed keys")
        self.bits = key_bits(self.X)

    def cover(self, p: int) -> LevelCover:
        if p not in self._covers:
            self._covers[p] = level_cover(self.X, p)
        return self._covers[p]

    def basis(self, p: int):
        """Sorted int64 keys (kernel backend) or a list of monomials (python backend)."""
        if p not in self._bases:
            cv = self.cover(p)
            if self.backend == "kernel":
                cov = np.array(cv.cov, np.int64)
                self._bases[p] = _kernels.enumerate_normalized(cv.npts, self.t, cov, cv.full, cv.maxcov, self.bits)
            else:
                self._bases[p] = list(iter_normalized(cv, self.t))
        return self._bases[p]

    def dim(self, p: int) -> int:
        return len(self.basis(p))

    def monomials(self, p: int) -> list[Factors]:
        b = self.basis(p)
        if self.backend == "python":
            return b
        return [decode_key(int(k), self.t, self.bits) for k in b]

    def forget(self, p: int):
        self._bases.pop(p, None)

    def _apply(self, f: PointedMap, p_src: int, p_dst: int, skip_degenerate: bool = False):
        src, dst = self.basis(p_src), self.basis(p_dst)
        if self.backend == "kernel":
            table = np.array((0,) + f.table, np.int64)
            tcov = np.array(self.cover(p_dst).cov, np.int64)
            rows, cols, vals, err = _kernels.apply_table(
                src, self.t, self.bits, table, self.parity.odd, dst, tcov, self.cover(p_dst).full, skip_degenerate
            )
            if err == _kernels.ERR_MISSING:
                raise NormalizationError("non-degenerate term missing from the normalized basis", t=self.t, p=p_dst)
            if err == _kernels.ERR_SUPPORT:
                raise WellDefinednessError("rewriting changed the touched points", t=self.t, p=p_dst)
            if err == _kernels.ERR_OVERFLOW:
                raise RuntimeError("rewrite stack overflow")
            return rows, cols, vals
        target = {m: i for i, m in enumerate(dst)}
        return _apply_python(f, src, target, self.cover(p_dst), self.parity, skip_degenerate)

    def _alternating(self, maps: list[PointedMap], p_src: int, p_dst: int) -> sp.csc_matrix:
        R, C, V = [], [], []
        for i, f in enumerate(maps):
            rows, cols, vals = self._apply(f, p_src, p_dst)
            R.append(rows)
            C.append(cols)
            V.append(vals if i % 2 == 0 else -vals)
        shape = (self.dim(p_dst), self.dim(p_src))
        if not R:
            return sp.csc_matrix(shape, dtype=np.int64)
        mat = sp.coo_matrix((np.concatenate(V), (np.concatenate(R), np.concatenate(C))), shape=shape).tocsc()
        mat.sum_duplicates()
        mat.eliminate_zeros()
        return mat

    def boundary(self, p: int) -> sp.csc_matrix:
        """Descended boundary N_p -> N_{p-1} as an integer matrix."""
        return self._alternating([self.X.face(p, i) for i in range(p + 1)], p, p - 1)

    def check_well_defined(self, p: int, skip_degenerate: bool = True):
        """The boundary of every s_j(x), x in N_{p-1}, must vanish modulo degenerate chains.

        By default images whose touched points are already degenerate are
        dropped before rewriting (see ``apply_table``); pass False to
        rewrite every image.
        """
        for j in range(p):
            s = self.X.degeneracy(p - 1, j)
            # composites with equal tables are the same linear map; merge their signs first
            net: dict[PointedMap, int] = {}
            for i in range(p + 1):
                g = compose(s, self.X.face(p, i))
                net[g] = net.get(g, 0) + (-1) ** i
            R, C, V = [], [], []
            for g, c in net.items():
                if c:
                    rows, cols, vals = self._apply(g, p - 1, p - 1, skip_degenerate)
                    R.append(rows)
                    C.append(cols)
                    V.append(c * vals)
            if R and sum(len(r) for r in R):
                shape = (self.dim(p - 1),) * 2
                residue = sp.coo_matrix((np.concatenate(V), (np.concatenate(R), np.concatenate(C))), shape=shape).tocsc()
                residue.sum_duplicates()
                if residue.count_nonzero():
                    raise WellDefinednessError("boundary does not preserve the degenerate span", t=self.t, p=p)


def decode_key(key: int, t: int, bits: int) -> Factors:
    mask = (1 << bits) - 1
    out = []
    for _ in range(t):
        a = key & mask
        key >>= bits
        b = key & mask
        key >>= bits
        out.append((a, b))
    return tuple(reversed(out))


def encode_key(mono: Factors, bits: int) -> int:
    key = 0
    for x in basis_key(mono):
        key = (key << bits) | x
    return key


def check_square_zero(outer: sp.csc_matrix, inner: sp.csc_matrix, **context):
    """Raise unless outer @ inner == 0, multiplying in column chunks to bound memory."""
    if outer.shape[1] != inner.shape[0]:
        raise ValueError("incompatible boundary shapes")
    for lo in range(0, inner.shape[1], CHUNK):
        prod = outer @ inner[:, lo:lo + CHUNK]
        if prod.count_nonzero():
            raise BoundarySquareError("boundary squared is nonzero", **context)
