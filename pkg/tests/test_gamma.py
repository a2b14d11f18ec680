import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linkshom.arnold import AlgebraElement, GenParity, enumerate_basis, multiply, normal_form
from linkshom.gamma import PointedMap, compose, format_pointed_map, induced_map, parse_pointed_map
from linkshom.leibniz import bracket, dual_basis, leibniz_oracle, pair, substitute
from linkshom.linalg import SparseRationalMatrix

EVEN, ODD = GenParity.EVEN, GenParity.ODD


def pm(text):
    return parse_pointed_map(text)


def test_pointed_map_validation():
    with pytest.raises(ValueError):
        PointedMap(2, 1, (1, 2))
    with pytest.raises(ValueError):
        PointedMap(2, 2, (1,))
    f = pm("3 2 : 0 2 1")
    assert (f(0), f(1), f(2), f(3)) == (0, 0, 2, 1)


def test_text_roundtrip():
    f = PointedMap(3, 4, (4, 0, 1))
    assert format_pointed_map(f) == "3 4 : 4 0 1"
    assert parse_pointed_map(format_pointed_map(f)) == f
    with pytest.raises(ValueError):
        parse_pointed_map("3 4 4 0 1")


def test_compose_examples():
    f = pm("2 3 : 1 3")
    assert compose(PointedMap.identity(2), f) == f
    assert compose(f, PointedMap.constant(3, 4)) == PointedMap.constant(2, 4)
    assert compose(pm("2 1 : 1 1"), pm("1 2 : 2")) == pm("2 2 : 2 2")
    with pytest.raises(ValueError):
        compose(f, PointedMap.identity(2))


def test_induced_examples():
    for parity in GenParity:
        assert induced_map(PointedMap.identity(3), 1, parity).matrix == SparseRationalMatrix.identity(3)
        assert induced_map(pm("2 1 : 1 1"), 1, parity).matrix.is_zero()
    for d in (4, 5):
        M = induced_map(pm("2 2 : 2 1"), 1, GenParity.from_d(d)).matrix
        assert M.to_dense() == [[(-1) ** d]]


def random_map(rng, k, l):
    return PointedMap(k, l, tuple(rng.randint(0, l) for _ in range(k)))


def test_functoriality_random_pairs():
    rng = random.Random(3)
    for parity in GenParity:
        for _ in range(100):
            k, l, r = (rng.randint(1, 6) for _ in range(3))
            f, g = random_map(rng, k, l), random_map(rng, l, r)
            t = rng.randint(0, 3)
            lhs = induced_map(compose(f, g), t, parity).matrix
            assert lhs == induced_map(g, t, parity).matrix @ induced_map(f, t, parity).matrix


@settings(max_examples=80, deadline=None)
@given(
    st.integers(2, 5).flatmap(
        lambda k: st.tuples(
            st.just(k),
            st.integers(2, 5).flatmap(lambda l: st.tuples(st.just(l), st.lists(st.integers(0, l), min_size=k, max_size=k))),
            st.lists(st.tuples(st.integers(1, k), st.integers(1, k)), max_size=2),
            st.lists(st.tuples(st.integers(1, k), st.integers(1, k)), max_size=1),
            st.sampled_from(list(GenParity)),
        )
    )
)
def test_induced_is_an_algebra_map(data):
    k, (l, table), gx, gy, parity = data
    f = PointedMap(k, l, tuple(table))
    x, y = normal_form(gx, parity, n=k), normal_form(gy, parity, n=k)

    def push(z):
        src = {m.factors: i for i, m in enumerate(enumerate_basis(k, z.t))}
        tgt = enumerate_basis(l, z.t)
        col = induced_map(f, z.t, parity).matrix.apply({src[m]: c for m, c in z.terms.items()})
        return AlgebraElement(l, z.t, {tgt[r].factors: c for r, c in col.items()})

    assert push(multiply(x, y, parity)) == multiply(push(x), push(y), parity)


def test_relations_map_to_zero():
    rng = random.Random(11)
    for parity in GenParity:
        for _ in range(100):
            k, l = rng.randint(3, 6), rng.randint(1, 6)
            f = random_map(rng, k, l)
            i, j, q = rng.sample(range(1, k + 1), 3)
            im = lambda a, b: (f(a), f(b))
            total = AlgebraElement.zero(l, 2)
            for raw in ([im(i, j), im(j, q)], [im(j, q), im(q, i)], [im(q, i), im(i, j)]):
                total = total + normal_form(raw, parity, n=l)
            assert total.is_zero()
            assert normal_form([im(i, j), im(i, j)], parity, n=l).is_zero()


# ------------------------------------------------------------------ Poisson oracle

def test_oracle_doubling_and_unit_bracket():
    for parity in GenParity:
        assert substitute(pm("2 1 : 1 1"), (1,), parity) == {(1, 2): 1}
        assert substitute(pm("1 2 : 1"), ((1, 2),), parity) == {}
        assert bracket((1,), (), parity) == {}


def test_oracle_swap_scales_bracket():
    for d in (4, 5):
        parity = GenParity.from_d(d)
        f = pm("2 2 : 2 1")
        assert substitute(f, (1, 2), parity) == {(2, 1): 1}
        image = substitute(f, ((1, 2),), parity)
        assert image == {((2, 1),): 1}
        # [x2, x1] = (-1)^d [x1, x2] in the pairing
        assert pair([(1, 2)], ((2, 1),), parity) == (-1) ** d * pair([(1, 2)], ((1, 2),), parity)


def test_pairing_is_perfect_on_combs():
    for parity in GenParity:
        for k in range(1, 5):
            for t in range(0, k):
                duals = dual_basis(k, t, parity)
                for a, g in enumerate(enumerate_basis(k, t)):
                    for b, P in enumerate(duals):
                        assert sum(c * pair(g.factors, F, parity) for F, c in P.items()) == (a == b)


def test_duality_with_oracle_exhaustive():
    for parity in GenParity:
        for k in range(0, 4):
            for l in range(0, 4):
                for table in itertools.product(range(l + 1), repeat=k):
                    f = PointedMap(k, l, table)
                    for t in range(0, 3):
                        M = induced_map(f, t, parity).matrix.transpose()
                        O = leibniz_oracle(f, t, parity)
                        assert (O.rows, O.cols) == (M.rows, M.cols)
                        for i in range(O.rows):
                            for j in range(O.cols):
                                assert abs(O[i, j]) == abs(M[i, j])
                        # with the documented pairing the signs agree as well
                        assert O == M


def test_oracle_on_four_points_sample():
    rng = random.Random(5)
    for parity in GenParity:
        for _ in range(15):
            k, l = rng.randint(1, 4), rng.randint(1, 4)
            f = random_map(rng, k, l)
            t = rng.randint(0, min(k, l) - 1) if min(k, l) else 0
            assert leibniz_oracle(f, t, parity) == induced_map(f, t, parity).matrix.transpose()


def test_oracle_frozen_fixture(fixture_json):
    frozen = fixture_json("leibniz_tables.json")
    for text, mats in frozen.items():
        f = pm(text)
        for key, body in mats.items():
            par, t = key.split("/")
            parity = GenParity(par)
            got = leibniz_oracle(f, int(t), parity)
            assert got == SparseRationalMatrix.from_text(body)
            assert got == induced_map(f, int(t), parity).matrix.transpose()


def test_oracle_size_limit():
    with pytest.raises(ValueError):
        leibniz_oracle(PointedMap.identity(5), 1, ODD)
