"""Homology-side structure maps on Poisson monomials, used as a test oracle.

H_*(Conf(k, R^d); Q) is the multilinear part of the free Poisson algebra
on x_1..x_k with a bracket of degree s = d-1.  A pointed map f: k+ -> l+
acts contravariantly, Pois(l) -> Pois(k), by substituting
x_j -> prod_{f(i)=j} x_i (the empty product is 1, and [a, 1] = 0),
expanding brackets of products by the Leibniz rule and appending the
bare factors x_i with f(i) = 0.

Forests are tuples of trees; a tree is a leaf label (int) or a pair
(left, right) standing for [left, right].  Forests are never normalized:
coordinates are read off through the pairing with graph monomials.

Pairing <w(a1,b1)...w(at,bt), T1...Tr>: every edge must join two leaves of
one tree, and sending an edge to the node where its endpoints split must
be a bijection onto the bracket nodes.  Each edge whose first index lies
in the right branch contributes the orientation sign (-1)^d.  For odd s
the edges and the nodes (taken in in-order, trees left to right) are
odd objects and contribute the sign of the induced permutation.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .arnold import GenParity, as_parity, enumerate_basis
from .gamma import PointedMap
from .linalg import SparseRationalMatrix

MAX_POINTS = 4

Tree = object  # int | tuple[Tree, Tree]
Forest = tuple


def nodes(tree) -> int:
    return 0 if isinstance(tree, int) else 1 + nodes(tree[0]) + nodes(tree[1])


def leaves(tree) -> frozenset[int]:
    return frozenset((tree,)) if isinstance(tree, int) else leaves(tree[0]) | leaves(tree[1])


def _odd(trees, parity: GenParity) -> int:
    """Parity of the total degree of a product of trees."""
    return sum(nodes(x) for x in trees) % 2 if parity.odd else 0


def _add(acc: dict, key, c):
    v = acc.get(key, 0) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def bracket(P: Forest, Q: Forest, parity: GenParity) -> dict:
    """[P, Q] for products of trees P, Q, expanded by the graded Leibniz rule."""
    s = 1 if parity.odd else 0
    out: dict = {}
    if not P or not Q:
        return out
    if len(Q) > 1:
        shift = (_odd(P, parity) + s) % 2
        for j in range(len(Q)):
            sign = -1 if shift and _odd(Q[:j], parity) else 1
            for mono, c in bracket(P, (Q[j],), parity).items():
                _add(out, Q[:j] + mono + Q[j + 1:], sign * c)
        return out
    q = Q[0]
    shift = (_odd((q,), parity) + s) % 2
    for i in range(len(P)):
        sign = -1 if shift and _odd(P[i + 1:], parity) else 1
        _add(out, P[:i] + ((P[i], q),) + P[i + 1:], sign)
    return out


def _product(polys: list[dict]) -> dict:
    acc = {(): 1}
    for poly in polys:
        nxt: dict = {}
        for m1, c1 in acc.items():
            for m2, c2 in poly.items():
                _add(nxt, m1 + m2, c1 * c2)
        acc = nxt
    return acc


def substitute(f: PointedMap, forest: Forest, parity: GenParity) -> dict:
    """Image of a Poisson monomial on x_1..x_l under the action of f: k+ -> l+."""
    pre = {j: tuple(i for i in range(1, f.k + 1) if f(i) == j) for j in range(1, f.l + 1)}

    def sub(tree) -> dict:
        if isinstance(tree, int):
            return {pre[tree]: 1}
        left, right = sub(tree[0]), sub(tree[1])
        out: dict = {}
        for m1, c1 in left.items():
            for m2, c2 in right.items():
                for mono, c in bracket(m1, m2, parity).items():
                    _add(out, mono, c * c1 * c2)
        return out

    body = _product([sub(x) for x in forest])
    tail = tuple(i for i in range(1, f.k + 1) if f(i) == 0)
    return {mono + tail: c for mono, c in body.items()}


def _splits(tree, out: list):
    """Append (left leaves, right leaves) of each bracket node in in-order."""
    if isinstance(tree, int):
        return
    _splits(tree[0], out)
    out.append((leaves(tree[0]), leaves(tree[1])))
    _splits(tree[1], out)


def _perm_sign(seq: list[int]) -> int:
    sign = 1
    for i, j in itertools.combinations(range(len(seq)), 2):
        if seq[i] > seq[j]:
            sign = -sign
    return sign


def pair(graph, forest: Forest, parity) -> int:
    """Pairing of an ordered, oriented edge list with a forest."""
    parity = as_parity(parity)
    splits: list = []
    for tree in forest:
        _splits(tree, splits)
    if len(splits) != len(graph):
        return 0
    hit = []
    sign = 1
    for a, b in graph:
        for idx, (lf, rt) in enumerate(splits):
            if a in lf and b in rt:
                break
            if b in lf and a in rt:
                sign *= parity.flip_sign
                break
        else:
            return 0
        hit.append(idx)
    if len(set(hit)) != len(hit):
        return 0
    if parity.odd:
        sign *= _perm_sign(hit)
    return sign


def comb_forests(k: int, t: int) -> list[Forest]:
    """Products of left-normed combs [..[x_i1, x_i2].., x_ir] with i1 minimal; blocks sorted by minimum."""
    out = []

    def partitions(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for part in partitions(rest):
            for i in range(len(part)):
                yield part[:i] + [[first] + part[i]] + part[i + 1:]
            yield [[first]] + part

    for part in partitions(list(range(1, k + 1))):
        if len(part) != k - t:
            continue
        blocks = sorted(part, key=min)
        choices = []
        for blk in blocks:
            lo = min(blk)
            trees = []
            for order in itertools.permutations(sorted(set(blk) - {lo})):
                tree = lo
                for x in order:
                    tree = (tree, x)
                trees.append(tree)
            choices.append(trees)
        out.extend(itertools.product(*choices))
    return sorted(out, key=repr)


def _solve(A: list[list[Fraction]], B: list[list[Fraction]]) -> list[list[Fraction]]:
    """Solve A X = B for square invertible A by Gauss-Jordan elimination."""
    n = len(A)
    M = [list(A[i]) + list(B[i]) for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            raise ArithmeticError("pairing matrix is singular")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                fac = M[r][c]
                M[r] = [x - fac * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def dual_basis(k: int, t: int, parity) -> list[dict]:
    """Poisson elements P_b with <g_a, P_b> = delta_ab for the admissible basis g."""
    parity = as_parity(parity)
    basis = enumerate_basis(k, t)
    combs = comb_forests(k, t)
    if len(combs) != len(basis):
        raise ArithmeticError("comb count differs from the cohomology dimension")
    Pi = [[Fraction(pair(g.factors, c, parity)) for c in combs] for g in basis]
    ident = [[Fraction(int(i == j)) for j in range(len(basis))] for i in range(len(basis))]
    # coefficients C with Pi C = I; column b gives P_b = sum_c C[c][b] comb_c
    C = _solve(Pi, ident)
    out = []
    for b in range(len(basis)):
        out.append({combs[c]: C[c][b] for c in range(len(combs)) if C[c][b]})
    return out


def leibniz_oracle(f: PointedMap, t: int, parity) -> SparseRationalMatrix:
    """Matrix of the homology action Pois(l) -> Pois(k) of f in the bases dual to the admissible monomials.

    Rows index the admissible basis on k points, columns the one on l points,
    so the result is comparable with the transpose of the cohomology matrix.
    """
    if f.k > MAX_POINTS or f.l > MAX_POINTS:
        raise ValueError(f"oracle limited to at most {MAX_POINTS} points")
    parity = as_parity(parity)
    src = enumerate_basis(f.k, t)
    duals = dual_basis(f.l, t, parity)
    cols = []
    for P in duals:
        image: dict = {}
        for forest, c in P.items():
            for mono, e in substitute(f, forest, parity).items():
                _add(image, mono, c * e)
        col = {}
        for r, g in enumerate(src):
            v = sum((c * pair(g.factors, forest, parity) for forest, c in image.items()), Fraction(0))
            if v:
                col[r] = v
        cols.append(col)
    return SparseRationalMatrix(len(src), len(duals), cols)
