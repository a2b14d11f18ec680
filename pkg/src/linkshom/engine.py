"""The normalized complex of H^*(Conf(-)) evaluated on a wedge of spheres.

Level p of the simplicial vector space is H^*(Conf(m C(p,n), R^d); Q)
with faces and degeneracies induced by the wedge model.  Because every
level has zero internal differential, the homology of the normalized
complex in word length t and simplicial degree p is the whole E^2 = E^oo
contribution to total degree u = t(d-1) - p.  Over Q the cohomology-side
complex has the same Betti numbers as the homology-side totalization.

Two ways of building a slice (fixed t):

* ``generic``: materialize each full level, compute the degenerate span as
  the column span of all induced degeneracies, quotient it out and
  descend the alternating face sum (exact, for small levels);
* ``coordinate``: enumerate the normalized basis directly and build the
  descended boundary by dropping degenerate terms (see ``coordinate``).
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb

from . import __version__
from .arnold import GenParity, dimension
from .cache import RankCache
from .coordinate import CoordinateComplex, check_square_zero
from .errors import BoundarySquareError, NormalizationError, RankInconsistencyError
from .gamma import induced_map
from .linalg import QuotientBasis, SparseRationalMatrix, descend, quotient_basis, rank
from .simplicial import wedge_model

GENERIC_LIMIT = 1200


def full_dim(m: int, n: int, p: int, t: int) -> int:
    return dimension(m * comb(p, n), t)


def choose_method(m: int, n: int, t: int, p_bound: int) -> str:
    biggest = max(full_dim(m, n, p, t) for p in range(p_bound + 1))
    return "generic" if biggest <= GENERIC_LIMIT else "coordinate"


@dataclass
class ComplexSlice:
    m: int
    n: int
    d: int
    t: int
    p_bound: int
    method: str
    dims: list[int]
    full_dims: list[int]
    _boundaries: dict = field(default_factory=dict, repr=False)

    @property
    def parity(self) -> GenParity:
        return GenParity.from_d(self.d)

    def boundary(self, p: int) -> SparseRationalMatrix:
        """Descended boundary N_{p,t} -> N_{p-1,t}."""
        if not 1 <= p <= self.p_bound:
            raise ValueError(f"boundary index {p} outside 1..{self.p_bound}")
        B = self._boundaries[p]
        if not isinstance(B, SparseRationalMatrix):
            B = SparseRationalMatrix.from_scipy(B)
            self._boundaries[p] = B
        return B

    @property
    def closed(self) -> bool:
        """True when the top computed level vanishes, so no boundary above it matters."""
        return self.dims[self.p_bound] == 0

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * d for p, d in enumerate(self.dims))


def _assert_vanishing(m, n, d, t, dims_by_p: dict[int, int]):
    if n != 1:
        return
    for p, dim in dims_by_p.items():
        if p > 2 * t and dim:
            raise NormalizationError(f"dim N = {dim} above p = 2t", m=m, n=n, d=d, t=t, p=p)


def _probe_dims(m: int, n: int, t: int, ps: list[int]) -> dict[int, int]:
    X = wedge_model(m, n, max(ps) + 1)
    cc = CoordinateComplex(X, t, GenParity.ODD)
    return {p: cc.dim(p) for p in ps}


def _assemble_generic(m, n, d, t, p_bound, with_boundaries):
    parity = GenParity.from_d(d)
    X = wedge_model(m, n, p_bound)
    quotients: list[QuotientBasis] = []
    boundaries: dict[int, SparseRationalMatrix] = {}
    for p in range(p_bound + 1):
        V = dimension(X.points(p), t)
        span_cols = []
        for j in range(p):
            span_cols.extend(induced_map(X.degeneracy(p - 1, j), t, parity).matrix.columns())
        Q = quotient_basis(V, SparseRationalMatrix(V, len(span_cols), span_cols))
        quotients.append(Q)
        if p >= 1 and with_boundaries:
            B = None
            for i in range(p + 1):
                Fi = induced_map(X.face(p, i), t, parity).matrix
                Fi = Fi if i % 2 == 0 else Fi.scale(-1)
                B = Fi if B is None else B + Fi
            boundaries[p] = descend(B, Q, quotients[p - 1], check=True)
            if p >= 2 and not (boundaries[p - 1] @ boundaries[p]).is_zero():
                raise BoundarySquareError("boundary squared is nonzero", m=m, n=n, d=d, t=t, p=p)
    dims = [Q.size for Q in quotients]
    return dims, boundaries


def _assemble_coordinate(m, n, d, t, p_bound, with_boundaries, keep_boundaries=True):
    X = wedge_model(m, n, p_bound + 1)
    cc = CoordinateComplex(X, t, GenParity.from_d(d))
    dims = [cc.dim(p) for p in range(p_bound + 1)]
    boundaries = {}
    prev = None
    for p in range(1, p_bound + 1) if with_boundaries else ():
        B = cc.boundary(p)
        cc.check_well_defined(p)
        if prev is not None:
            check_square_zero(prev, B, m=m, n=n, d=d, t=t, p=p)
        if keep_boundaries:
            boundaries[p] = B
        prev = B
        cc.forget(p - 1)
    return dims, boundaries


def assemble_slice(
    m: int,
    n: int,
    d: int,
    t: int,
    p_bound: int,
    method: str = "auto",
    with_boundaries: bool = True,
    keep_boundaries: bool = True,
) -> ComplexSlice:
    """Build N_{p,t} for p <= p_bound with descended boundaries, verifying the complex.

    Raises :class:`BoundarySquareError`, :class:`WellDefinednessError` or
    :class:`NormalizationError` when a structural invariant fails.
    """
    if m < 0 or n < 1 or t < 0 or p_bound < 0:
        raise ValueError("need m >= 0, n >= 1, t >= 0, p_bound >= 0")
    if d < 3:
        raise ValueError("need d >= 3")
    if method == "auto":
        method = choose_method(m, n, t, p_bound)
    if method == "generic":
        dims, boundaries = _assemble_generic(m, n, d, t, p_bound, with_boundaries)
    elif method == "coordinate":
        dims, boundaries = _assemble_coordinate(m, n, d, t, p_bound, with_boundaries, keep_boundaries)
    else:
        raise ValueError(f"unknown method {method!r}")
    full = [full_dim(m, n, p, t) for p in range(p_bound + 1)]
    for p, (dn, df) in enumerate(zip(dims, full)):
        if not 0 <= dn <= df:
            raise NormalizationError(f"normalized dim {dn} outside 0..{df}", m=m, n=n, d=d, t=t, p=p)
    probes = dict(enumerate(dims))
    if n == 1:
        extra = [p for p in (2 * t + 1, 2 * t + 2) if p > p_bound]
        if extra:
            probes.update(_probe_dims(m, n, t, extra))
    _assert_vanishing(m, n, d, t, probes)
    return ComplexSlice(m, n, d, t, p_bound, method, dims, full, boundaries)


def normalized_dims(m: int, n: int, t: int, p_bound: int, method: str = "auto") -> list[int]:
    """dim N_{p,t} for p <= p_bound (independent of d)."""
    return assemble_slice(m, n, 4, t, p_bound, method=method, with_boundaries=False).dims


def homology_dims(sl: ComplexSlice, policy: str = "multimodular", seed: int = 0, ranks: dict | None = None):
    """List of (p, dim H_p) for the slice; the top level is included only when the slice is closed."""
    ranks = dict(ranks or {})
    for p in range(1, sl.p_bound + 1):
        if p not in ranks:
            ranks[p] = 0 if not sl.dims[p] or not sl.dims[p - 1] else rank(sl.boundary(p), policy, seed).rank
    return _homology_from_ranks(sl.m, sl.n, sl.d, sl.t, sl.dims, ranks, sl.closed)


def _homology_from_ranks(m, n, d, t, dims, ranks, closed):
    top = len(dims) - 1
    out = []
    for p in range(top + 1 if closed else top):
        h = dims[p] - ranks.get(p, 0) - ranks.get(p + 1, 0)
        if h < 0:
            raise RankInconsistencyError(f"negative homology dimension {h}", m=m, n=n, d=d, t=t, p=p)
        out.append((p, h))
    return out


# ------------------------------------------------------------------ tables

CAVEAT_N1 = "Betti numbers of the space of long links modulo immersions when d > 5; below that only the E2 page is computed."
CAVEAT_HIGH = "Topological meaning requires d > 2n+3; truncated at the user bound p_max, so entries are flagged incomplete."


@dataclass
class BettiEntry:
    u: int
    betti: int
    complete: bool


@dataclass
class BettiTable:
    m: int
    n: int
    d: int
    entries: list[BettiEntry]
    p_bound_policy: str
    rank_method: str
    provenance: dict = field(default_factory=dict)
    caveat: str = ""

    def betti(self, u: int) -> int:
        for e in self.entries:
            if e.u == u:
                return e.betti
        raise KeyError(u)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "d": self.d,
            "entries": [{"u": e.u, "betti": e.betti, "complete": e.complete} for e in self.entries],
            "p_bound_policy": self.p_bound_policy,
            "rank_method": self.rank_method,
            "provenance": self.provenance,
            "caveat": self.caveat,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "n", "d", "u", "betti", "complete", "p_bound_policy", "rank_method"])
        for e in self.entries:
            w.writerow([self.m, self.n, self.d, e.u, e.betti, str(e.complete).lower(), self.p_bound_policy, self.rank_method])
        return buf.getvalue()

    def to_markdown(self) -> str:
        lines = [
            f"Betti numbers, m={self.m}, n={self.n}, d={self.d} "
            f"(p bound: {self.p_bound_policy}, ranks: {self.rank_method})",
            "",
            "| u | betti | complete |",
            "|---|---|---|",
        ]
        lines += [f"| {e.u} | {e.betti} | {str(e.complete).lower()} |" for e in self.entries]
        if self.caveat:
            lines += ["", self.caveat]
        return "\n".join(lines) + "\n"


def slice_homology(m, n, d, t, p_bound, policy="multimodular", seed=0, cache: RankCache | None = None, method="auto"):
    """(dims, ranks, homology) for one slice, reusing cached dimensions and ranks."""
    parity = GenParity.from_d(d)
    dims = ranks = None
    if cache is not None:
        dims = [cache.get(m, n, parity, t, p, "dim") for p in range(p_bound + 1)]
        ranks = {p: cache.get(m, n, parity, t, p, "rank") for p in range(1, p_bound + 1)}
        if None in dims or None in ranks.values():
            dims = ranks = None
    if dims is None:
        sl = assemble_slice(m, n, d, t, p_bound, method=method)
        ranks = {}
        for p in range(1, p_bound + 1):
            ranks[p] = 0 if not sl.dims[p] or not sl.dims[p - 1] else rank(sl.boundary(p), policy, seed).rank
        dims = sl.dims
        if cache is not None:
            for p, v in enumerate(dims):
                cache.put(m, n, parity, t, p, "dim", v)
            for p, v in ranks.items():
                cache.put(m, n, parity, t, p, "rank", v)
    closed = dims[p_bound] == 0
    return dims, ranks, _homology_from_ranks(m, n, d, t, dims, ranks, closed)


def _slice_job(args):
    return slice_homology(*args)


def betti_table(
    m: int,
    n: int,
    d: int,
    u_max: int,
    p_max: int | None = None,
    policy: str = "multimodular",
    seed: int = 0,
    cache: RankCache | None = None,
    jobs: int = 1,
    method: str = "auto",
) -> BettiTable:
    if u_max < 0:
        raise ValueError("u_max must be non-negative")
    if m < 0 or n < 1:
        raise ValueError("need m >= 0 and n >= 1")
    if n == 1:
        if d < 4:
            raise ValueError("n = 1 needs d >= 4 for a finite computation per degree")
        t_range = range(0, u_max // (d - 3) + 1)
        bounds = {t: 2 * t + 1 for t in t_range}
        policy_name, caveat = "2t", CAVEAT_N1
    else:
        if p_max is None:
            raise ValueError("n >= 2 requires an explicit p_max")
        if p_max < 0:
            raise ValueError("p_max must be non-negative")
        if d < 3:
            raise ValueError("need d >= 3")
        t_range = range(0, (u_max + p_max) // (d - 1) + 1)
        bounds = {t: p_max + 1 for t in t_range}
        policy_name, caveat = "user", CAVEAT_HIGH
    jobs_args = [(m, n, d, t, bounds[t], policy, seed, cache, method) for t in t_range]
    if jobs > 1 and len(jobs_args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_slice_job, jobs_args))
    else:
        results = [_slice_job(a) for a in jobs_args]
    betti = [0] * (u_max + 1)
    computed = {}
    for t, (dims, _ranks, homology) in zip(t_range, results):
        computed[str(t)] = {"p_range": [0, bounds[t]], "dims": dims}
        for p, h in homology:
            if n != 1 and p > p_max:
                continue
            u = t * (d - 1) - p
            if 0 <= u <= u_max:
                betti[u] += h
    entries = [BettiEntry(u, b, n == 1) for u, b in enumerate(betti)]
    provenance = {"engine_version": __version__, "slices": computed, "seed": seed}
    return BettiTable(m, n, d, entries, policy_name, policy if policy != "both" else "exact", provenance, caveat)


# ------------------------------------------------------------------ euler

@dataclass
class EulerRow:
    t: int
    computed: int
    expected: int
    passed: bool
    sign: int  # +1 or -1: which global sign matched (0 when none did)

    def to_json(self) -> dict:
        return {"t": self.t, "computed": self.computed, "expected": self.expected, "pass": self.passed, "sign": self.sign}


def euler_check(m: int, d: int, t_max: int, method: str = "auto") -> list[EulerRow]:
    """Alternating sums of normalized dimensions against the closed-form Euler series."""
    from .series import euler_series_links

    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    series = euler_series_links(m, d, t_max * (d - 1))
    rows = []
    for t in range(t_max + 1):
        dims = normalized_dims(m, 1, t, 2 * t + 2, method=method)
        computed = sum((-1) ** p * x for p, x in enumerate(dims))
        expected = int(series.coefficients[t * (d - 1)])
        sign = 1 if computed == expected else (-1 if computed == -expected else 0)
        rows.append(EulerRow(t, computed, expected, sign != 0, sign))
    return rows
