import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linkshom.arnold import (
    AlgebraElement,
    GenParity,
    basis_index,
    dimension,
    enumerate_basis,
    format_element,
    format_monomial,
    is_admissible,
    multiply,
    normal_form,
    parse_element,
    parse_monomial,
    reduce_pairs,
)
from linkshom.leibniz import comb_forests, pair

EVEN, ODD = GenParity.EVEN, GenParity.ODD


def expand_product(n):
    """Coefficients of prod_{i<n}(1 + i x) by repeated polynomial multiplication."""
    poly = {0: 1}
    for i in range(1, n):
        nxt = {}
        for k, c in poly.items():
            nxt[k] = nxt.get(k, 0) + c
            nxt[k + 1] = nxt.get(k + 1, 0) + i * c
        poly = nxt
    return poly


def test_parity_from_d():
    assert GenParity.from_d(4) is ODD
    assert GenParity.from_d(7) is EVEN
    assert GenParity.from_d(6) is GenParity.from_d(8)


@pytest.mark.parametrize("n,t,want", [(2, 0, 1), (3, 2, 2), (8, 4, 6769), (1, 1, 0), (0, 0, 1), (4, 4, 0)])
def test_dimension_examples(n, t, want):
    assert dimension(n, t) == want


def test_dimension_matches_polynomial_expansion():
    for n in range(0, 9):
        poly = expand_product(n)
        for t in range(0, 8):
            assert dimension(n, t) == poly.get(t, 0)
            assert len(enumerate_basis(n, t)) == poly.get(t, 0)


def test_enumerate_basis_examples():
    assert [m.factors for m in enumerate_basis(3, 1)] == [((1, 2),), ((1, 3),), ((2, 3),)]
    assert enumerate_basis(1, 1) == []
    assert len(enumerate_basis(4, 3)) == 6


def test_basis_is_admissible_and_sorted():
    for n in range(1, 7):
        for t in range(0, n):
            basis = [m.factors for m in enumerate_basis(n, t)]
            assert all(is_admissible(f) for f in basis)
            assert len(set(basis)) == len(basis)
            assert basis_index(n, t) == {f: i for i, f in enumerate(basis)}


def test_normal_form_examples():
    assert normal_form([(1, 2), (1, 2)], ODD).is_zero()
    assert normal_form([(1, 2), (1, 2)], EVEN).is_zero()
    # d even means odd generator degree
    x = normal_form([(1, 3), (2, 3)], ODD)
    assert x.terms == {((1, 2), (2, 3)): 1, ((1, 2), (1, 3)): -1}
    for d in (4, 5, 6, 7):
        y = normal_form([(2, 1)], GenParity.from_d(d))
        assert y.terms == {((1, 2),): (-1) ** d}


def test_normal_form_zero_cases():
    assert normal_form([(1, 1)], ODD, n=2).is_zero()
    assert normal_form([(0, 2)], EVEN, n=2).is_zero()
    assert normal_form([(1, 2), (3, 4), (2, 1)], ODD, n=4).is_zero()


def test_normal_form_rejects_out_of_range():
    with pytest.raises(ValueError):
        normal_form([(1, 5)], ODD, n=4)
    with pytest.raises(ValueError):
        normal_form([(-1, 2)], ODD, n=4)


def test_relation_span_rank_by_dense_elimination():
    # the three products of two distinct generators at n=3 span a space of dimension 2
    for parity in GenParity:
        basis = basis_index(3, 2)
        rows = []
        for g, h in itertools.combinations([(1, 2), (1, 3), (2, 3)], 2):
            x = normal_form([g, h], parity, n=3)
            rows.append([Fraction(x.terms.get(m, 0)) for m in basis])
        assert _dense_rank(rows) == dimension(3, 2) == 2


def _dense_rank(rows):
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def test_normal_form_agrees_with_poisson_pairing():
    # the pairing with forests is defined on raw edge lists, independently of any rewriting;
    # it is perfect on the admissible basis, so it pins down the normal form
    for parity in GenParity:
        for k in range(2, 5):
            for t in range(1, k):
                forests = comb_forests(k, t)
                edges = [(a, b) for a in range(1, k + 1) for b in range(1, k + 1) if a != b]
                for raw in itertools.product(edges, repeat=t):
                    nf = normal_form(list(raw), parity, n=k)
                    for F in forests:
                        want = pair(raw, F, parity)
                        got = sum(c * pair(m, F, parity) for m, c in nf.terms.items())
                        assert got == want, (raw, F, parity)


def test_confluence_randomized_orders():
    rng = random.Random(7)
    for parity in GenParity:
        for _ in range(500):
            n = rng.randint(2, 6)
            raw = [tuple(rng.sample(range(1, n + 1), 2)) for _ in range(rng.randint(1, 4))]
            a = reduce_pairs(raw, parity, rng=random.Random(rng.random()))
            b = reduce_pairs(raw, parity, rng=random.Random(rng.random()))
            assert a == b == reduce_pairs(raw, parity)


def test_idempotent_on_basis():
    for parity in GenParity:
        for mono in enumerate_basis(6, 3):
            assert normal_form(mono.factors, parity, n=6).terms == {mono.factors: 1}


elements = st.integers(min_value=2, max_value=6).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.tuples(st.integers(1, n), st.integers(1, n)), min_size=0, max_size=2),
        st.lists(st.tuples(st.integers(1, n), st.integers(1, n)), min_size=0, max_size=2),
        st.lists(st.tuples(st.integers(1, n), st.integers(1, n)), min_size=0, max_size=1),
        st.sampled_from(list(GenParity)),
    )
)


@settings(max_examples=150, deadline=None)
@given(elements)
def test_graded_commutativity_and_associativity(data):
    n, gx, gy, gz, parity = data
    x, y, z = (normal_form(g, parity, n=n) for g in (gx, gy, gz))
    sign = -1 if parity.odd and (x.t * y.t) % 2 else 1
    assert multiply(x, y, parity) == multiply(y, x, parity).scale(sign)
    assert multiply(multiply(x, y, parity), z, parity) == multiply(x, multiply(y, z, parity), parity)


def test_multiply_examples():
    for parity in GenParity:
        y = normal_form([(1, 3)], parity, n=3)
        assert multiply(AlgebraElement.unit(3), y, parity) == y
        w = AlgebraElement.generator(1, 2, 3, parity)
        assert multiply(w, w, parity).is_zero()
    x = multiply(normal_form([(1, 3)], ODD, n=3), normal_form([(2, 3)], ODD, n=3), ODD)
    assert x.terms == {((1, 2), (2, 3)): 1, ((1, 2), (1, 3)): -1}
    with pytest.raises(ValueError):
        multiply(AlgebraElement.unit(2), AlgebraElement.unit(3), ODD)


def test_element_arithmetic():
    a = normal_form([(1, 2)], ODD, n=3)
    b = normal_form([(1, 3)], ODD, n=3)
    assert (a + b - b) == a
    assert (a - a).is_zero()
    assert (-a).scale(-1) == a
    with pytest.raises(ValueError):
        a + AlgebraElement.unit(3)


def test_text_format_roundtrip():
    assert format_monomial([(1, 2), (2, 3)]) == "w(1,2)*w(2,3)"
    assert parse_monomial("w(1,2)*w(2,3)") == [(1, 2), (2, 3)]
    assert format_monomial([]) == "1"
    x = normal_form([(1, 3), (2, 3)], ODD, n=3).scale(Fraction(2, 3))
    text = format_element(x)
    assert "2/3 w(1,2)*w(2,3)" in text
    assert parse_element(text, 3, ODD) == x
