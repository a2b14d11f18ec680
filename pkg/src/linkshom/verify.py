"""Invariant suites behind ``linkshom verify``.

Each suite runs the module invariants at desk scale and returns a list of
:class:`Check` records; nothing here raises on a failed invariant except
for the structural errors thrown by the engine itself, which the suite
catches and reports.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import asdict, dataclass

from .arnold import AlgebraElement, GenParity, dimension, enumerate_basis, multiply, normal_form, reduce_pairs
from .errors import InvariantError
from .gamma import PointedMap, compose, induced_map
from .simplicial import expected_size, wedge_model

SUITES = ("arnold", "gamma", "simplicial", "complex", "euler")


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def to_json(self) -> dict:
        return asdict(self)


def _timed(suite: str, name: str, fn) -> Check:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except InvariantError as exc:
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return Check(suite, name, bool(ok), detail, round(time.perf_counter() - t0, 3))


def poly_coefficients(n: int) -> list[int]:
    """Coefficients of prod_{i=1}^{n-1} (1 + i x)."""
    coeffs = [1]
    for i in range(1, n):
        coeffs = [a + i * b for a, b in zip(coeffs + [0], [0] + coeffs)]
    return coeffs


def random_element(rng: random.Random, n: int, t: int, parity, terms: int = 3) -> AlgebraElement:
    basis = enumerate_basis(n, t)
    x = AlgebraElement.zero(n, t)
    for _ in range(terms if basis else 0):
        mono = rng.choice(basis)
        x = x + normal_form(mono.factors, parity, n=n).scale(rng.randint(-3, 3))
    return x


def random_map(rng: random.Random, k: int, l: int) -> PointedMap:
    return PointedMap(k, l, tuple(rng.randint(0, l) for _ in range(k)))


# ------------------------------------------------------------------ arnold

def arnold_suite(seed: int = 0) -> list[Check]:
    rng = random.Random(seed)

    def dims():
        bad = []
        for n in range(0, 9):
            poly = poly_coefficients(n)
            for t in range(0, 8):
                want = poly[t] if t < len(poly) else 0
                if dimension(n, t) != want or len(enumerate_basis(n, t)) != want:
                    bad.append((n, t))
        return not bad, f"mismatches: {bad}" if bad else "n <= 8, t <= 7"

    def confluence():
        bad = 0
        for parity in GenParity:
            for _ in range(500):
                n = rng.randint(2, 6)
                t = rng.randint(1, 4)
                raw = []
                for _ in range(t):
                    a, b = rng.sample(range(1, n + 1), 2)
                    raw.append((a, b))
                r1 = reduce_pairs(raw, parity, rng=random.Random(rng.random()))
                r2 = reduce_pairs(raw, parity, rng=random.Random(rng.random()))
                bad += r1 != r2 or r1 != reduce_pairs(raw, parity)
        return bad == 0, f"{bad} disagreements in 1000 randomized reductions"

    def idempotent():
        for parity in GenParity:
            for n in range(0, 6):
                for t in range(0, n):
                    for mono in enumerate_basis(n, t):
                        if normal_form(mono.factors, parity, n=n).terms != {mono.factors: 1}:
                            return False, f"{mono} not fixed"
        return True, "n <= 5"

    def commutativity():
        for parity in GenParity:
            for _ in range(60):
                n = rng.randint(2, 6)
                tx, ty = rng.randint(0, 2), rng.randint(0, 2)
                x, y = random_element(rng, n, tx, parity), random_element(rng, n, ty, parity)
                sign = -1 if parity.odd and (tx * ty) % 2 else 1
                if multiply(x, y, parity) != multiply(y, x, parity).scale(sign):
                    return False, f"graded commutativity fails for n={n}"
        return True, "120 random pairs"

    def associativity():
        for parity in GenParity:
            for _ in range(40):
                n = rng.randint(3, 6)
                x, y, z = (random_element(rng, n, rng.randint(0, 1), parity) for _ in range(3))
                left = multiply(multiply(x, y, parity), z, parity)
                right = multiply(x, multiply(y, z, parity), parity)
                if left != right:
                    return False, f"associativity fails for n={n}"
        return True, "80 random triples"

    return [
        _timed("arnold", "dimension oracle", dims),
        _timed("arnold", "confluence", confluence),
        _timed("arnold", "normal form idempotent", idempotent),
        _timed("arnold", "graded commutativity", commutativity),
        _timed("arnold", "associativity", associativity),
    ]


# ------------------------------------------------------------------ gamma

def gamma_suite(seed: int = 0) -> list[Check]:
    from .leibniz import leibniz_oracle

    rng = random.Random(seed)

    def functoriality():
        for parity in GenParity:
            for _ in range(100):
                k, l, r = (rng.randint(1, 6) for _ in range(3))
                f, g = random_map(rng, k, l), random_map(rng, l, r)
                t = rng.randint(0, 3)
                lhs = induced_map(compose(f, g), t, parity).matrix
                rhs = induced_map(g, t, parity).matrix @ induced_map(f, t, parity).matrix
                if lhs != rhs:
                    return False, f"f={f} g={g} t={t}"
        return True, "200 composable pairs"

    def algebra_map():
        for parity in GenParity:
            for _ in range(40):
                k, l = rng.randint(2, 5), rng.randint(2, 5)
                f = random_map(rng, k, l)
                x, y = (random_element(rng, k, rng.randint(0, 2), parity) for _ in range(2))

                def push(z):
                    M = induced_map(f, z.t, parity).matrix
                    src = {m.factors: i for i, m in enumerate(enumerate_basis(k, z.t))}
                    tgt = enumerate_basis(l, z.t)
                    col = M.apply({src[m]: c for m, c in z.terms.items()})
                    return AlgebraElement(l, z.t, {tgt[r].factors: c for r, c in col.items()})

                if push(multiply(x, y, parity)) != multiply(push(x), push(y), parity):
                    return False, f"f={f}"
        return True, "80 random products"

    def relations():
        for parity in GenParity:
            for _ in range(100):
                k, l = rng.randint(3, 6), rng.randint(1, 6)
                f = random_map(rng, k, l)
                i, j, q = rng.sample(range(1, k + 1), 3)
                img = lambda a, b: (f(a), f(b))
                arnold = [[img(i, j), img(j, q)], [img(j, q), img(q, i)], [img(q, i), img(i, j)]]
                total = AlgebraElement.zero(l, 2)
                for raw in arnold:
                    total = total + normal_form(raw, parity, n=l)
                if not total.is_zero():
                    return False, f"Arnold relation image nonzero for f={f}"
                if not normal_form([img(i, j), img(i, j)], parity, n=l).is_zero():
                    return False, f"square image nonzero for f={f}"
        return True, "200 relation instances"

    def duality():
        exact = total = 0
        for parity in GenParity:
            for k in range(0, 4):
                for l in range(0, 4):
                    for table in itertools.product(range(l + 1), repeat=k):
                        f = PointedMap(k, l, table)
                        for t in range(0, 3):
                            M = induced_map(f, t, parity).matrix.transpose()
                            O = leibniz_oracle(f, t, parity)
                            total += 1
                            if any(abs(O[i, j]) != abs(M[i, j]) for i in range(O.rows) for j in range(O.cols)):
                                return False, f"|entries| differ for f={f}, t={t}"
                            exact += O == M
        return True, f"|entries| agree on {total} maps; signs agree on {exact}"

    return [
        _timed("gamma", "functoriality", functoriality),
        _timed("gamma", "algebra map", algebra_map),
        _timed("gamma", "relations map to zero", relations),
        _timed("gamma", "duality with the Poisson oracle", duality),
    ]


# ------------------------------------------------------------------ simplicial

def simplicial_identities(X) -> list[str]:
    """All simplicial identities of X, checked on the full face/degeneracy tables."""
    bad = []
    P = X.p_max
    eq = lambda f, g: f.table == g.table
    for p in range(2, P + 1):
        for i, j in itertools.combinations(range(p + 1), 2):
            # d_i d_j = d_{j-1} d_i for i < j
            if not eq(compose(X.face(p, j), X.face(p - 1, i)), compose(X.face(p, i), X.face(p - 1, j - 1))):
                bad.append(f"dd p={p} i={i} j={j}")
    for p in range(0, P - 1):
        for i in range(p + 1):
            for j in range(i, p + 1):
                # s_i s_j = s_{j+1} s_i for i <= j
                if not eq(compose(X.degeneracy(p, j), X.degeneracy(p + 1, i)),
                          compose(X.degeneracy(p, i), X.degeneracy(p + 1, j + 1))):
                    bad.append(f"ss p={p} i={i} j={j}")
    for p in range(0, P):
        for j in range(p + 1):
            s = X.degeneracy(p, j)
            for i in range(p + 2):
                lhs = compose(s, X.face(p + 1, i))
                if i < j:
                    rhs = compose(X.face(p, i), X.degeneracy(p - 1, j - 1)) if p >= 1 else None
                elif i in (j, j + 1):
                    rhs = PointedMap.identity(X.points(p))
                else:
                    rhs = compose(X.face(p, i - 1), X.degeneracy(p - 1, j)) if p >= 1 else None
                if rhs is None or not eq(lhs, rhs):
                    bad.append(f"ds p={p} i={i} j={j}")
    return bad


def simplicial_suite(seed: int = 0) -> list[Check]:
    def sizes():
        for n in (1, 2):
            for m in range(0, 4):
                X = wedge_model(m, n, 8)
                for p in range(9):
                    want = m * p + 1 if n == 1 else expected_size(m, n, p)
                    if X.size(p) != want:
                        return False, f"m={m} n={n} p={p}: {X.size(p)} != {want}"
        return True, "m <= 3, n <= 2, p <= 8"

    def identities():
        for n in (1, 2):
            for m in range(0, 4):
                bad = simplicial_identities(wedge_model(m, n, 8))
                if bad:
                    return False, f"m={m} n={n}: {bad[:3]}"
        return True, "faces, degeneracies and mixed identities, p <= 8"

    return [
        _timed("simplicial", "cardinality", sizes),
        _timed("simplicial", "simplicial identities", identities),
    ]


# ------------------------------------------------------------------ complex

def complex_slices(m_max: int = 3, t_max: int = 4, n2_t_max: int = 3):
    """(m, n, t, p_bound) of the slices covered by the structural checks."""
    out = [(m, 1, t, 2 * t + 2) for m in range(0, m_max + 1) for t in range(0, t_max + 1)]
    out += [(1, 2, t, 4 * t + 1) for t in range(0, n2_t_max + 1)]
    return out


def complex_suite(m_max: int = 3, t_max: int = 4, n2_t_max: int = 3, dims=(6, 7)) -> list[Check]:
    """Boundary squared, well-definedness and normalized vanishing for every listed slice."""
    from .engine import assemble_slice

    checks = []
    for m, n, t, p_bound in complex_slices(m_max, t_max, n2_t_max):
        for d in dims:
            def run(m=m, n=n, t=t, p_bound=p_bound, d=d):
                sl = assemble_slice(m, n, d, t, p_bound, keep_boundaries=False)
                if n == 1 and any(sl.dims[2 * t + 1:]):
                    return False, f"nonzero dims above 2t: {sl.dims}"
                return True, f"dims {sl.dims} via {sl.method}"
            checks.append(_timed("complex", f"m={m} n={n} t={t} d={d}", run))
    return checks


# ------------------------------------------------------------------ euler

EULER_RANGE = {1: 4, 2: 4, 3: 3}


def euler_suite(ms=(1, 2, 3), d: int = 4) -> list[Check]:
    from .engine import euler_check

    checks = []
    for m in ms:
        t_max = EULER_RANGE.get(m, 2)

        def run(m=m, t_max=t_max):
            rows = euler_check(m, d, t_max)
            bad = [r.t for r in rows if not r.passed]
            text = ", ".join(f"t={r.t}: {r.computed} vs {r.expected}" for r in rows)
            return not bad, text

        checks.append(_timed("euler", f"m={m} t<={t_max}", run))
    return checks


def run_suite(name: str, m: int | None = None, seed: int = 0) -> list[Check]:
    if name == "all":
        out = []
        for s in SUITES:
            out += run_suite(s, m, seed)
        return out
    if name == "arnold":
        return arnold_suite(seed)
    if name == "gamma":
        return gamma_suite(seed)
    if name == "simplicial":
        return simplicial_suite(seed)
    if name == "complex":
        return complex_suite(m_max=3 if m is None else m)
    if name == "euler":
        return euler_suite((1, 2, 3) if m is None else (m,))
    raise ValueError(f"unknown suite {name!r}")
