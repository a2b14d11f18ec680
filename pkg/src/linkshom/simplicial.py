"""Pointed simplicial models of wedges of spheres.

Level p of S^n = Delta^n / boundary is the set of surjective monotone maps
[p] ->> [n] plus a basepoint collecting every non-surjective map.  A
surjection is recorded by its jump set J = {k in 1..p : g(k) > g(k-1)},
a strictly increasing n-subset of {1..p}.  The m-fold wedge tags each
non-base element with a strand c in 1..m, so |level p| = m C(p,n) + 1.

Elements of a level get integer ids: 0 is the basepoint, then (c, J) in
order of strand and lexicographic jump set, starting at 1.
"""

from __future__ import annotations

import itertools
import json
from functools import cached_property
from math import comb

from .gamma import PointedMap

Element = tuple[int, tuple[int, ...]]


def face_jumps(J: tuple[int, ...], p: int, i: int) -> tuple[int, ...]:
    """Jump set of g composed with the i-th coface [p-1] -> [p]; may lose surjectivity."""
    out = []
    for j in J:
        if j < i:
            out.append(j)
        elif j > i + 1:
            out.append(j - 1)
        elif 1 <= i <= p - 1 and (not out or out[-1] != i):
            out.append(i)  # j in {i, i+1}: the merged step survives
    return tuple(out)


def degeneracy_jumps(J: tuple[int, ...], j: int) -> tuple[int, ...]:
    return tuple(x if x <= j else x + 1 for x in J)


class PointedSimplicialSet:
    def __init__(self, m: int, n: int, p_max: int):
        if m < 0 or n < 1 or p_max < 0:
            raise ValueError("need m >= 0, n >= 1, p_max >= 0")
        self.m = m
        self.n = n
        self.p_max = p_max
        self.levels: list[list[Element]] = []
        self._ids: list[dict[Element, int]] = []
        for p in range(p_max + 1):
            elems = [(c, J) for c in range(1, m + 1) for J in itertools.combinations(range(1, p + 1), n)]
            self.levels.append(elems)
            self._ids.append({e: i + 1 for i, e in enumerate(elems)})
        self._faces: dict[tuple[int, int], PointedMap] = {}
        self._degens: dict[tuple[int, int], PointedMap] = {}

    def size(self, p: int) -> int:
        """Cardinality of level p, basepoint included."""
        return len(self.levels[p]) + 1

    def points(self, p: int) -> int:
        return len(self.levels[p])

    def element(self, p: int, idx: int) -> Element | None:
        return None if idx == 0 else self.levels[p][idx - 1]

    def index(self, p: int, elem: Element | None) -> int:
        return 0 if elem is None else self._ids[p][elem]

    def _check(self, p: int, lo: int = 0):
        if not lo <= p <= self.p_max:
            raise ValueError(f"level {p} outside {lo}..{self.p_max}")

    def face(self, p: int, i: int) -> PointedMap:
        self._check(p, 1)
        if not 0 <= i <= p:
            raise ValueError(f"face index {i} outside 0..{p}")
        key = (p, i)
        if key not in self._faces:
            table = []
            for c, J in self.levels[p]:
                K = face_jumps(J, p, i)
                table.append(self._ids[p - 1][(c, K)] if len(K) == self.n else 0)
            self._faces[key] = PointedMap(self.points(p), self.points(p - 1), tuple(table))
        return self._faces[key]

    def degeneracy(self, p: int, j: int) -> PointedMap:
        self._check(p)
        if p >= self.p_max:
            raise ValueError(f"degeneracy from level {p} needs p < p_max={self.p_max}")
        if not 0 <= j <= p:
            raise ValueError(f"degeneracy index {j} outside 0..{p}")
        key = (p, j)
        if key not in self._degens:
            table = tuple(self._ids[p + 1][(c, degeneracy_jumps(J, j))] for c, J in self.levels[p])
            self._degens[key] = PointedMap(self.points(p), self.points(p + 1), table)
        return self._degens[key]

    @cached_property
    def columns(self) -> list[list[int]]:
        """For each level, bitmask per element id of the coordinates 1..p its jump set contains."""
        out = []
        for p in range(self.p_max + 1):
            masks = [0]
            for _, J in self.levels[p]:
                mk = 0
                for j in J:
                    mk |= 1 << (j - 1)
                masks.append(mk)
            out.append(masks)
        return out

    def to_json(self) -> dict:
        levels = []
        for p in range(self.p_max + 1):
            entry = {
                "p": p,
                "size": self.size(p),
                "elements": [{"id": i + 1, "strand": c, "jumps": list(J)} for i, (c, J) in enumerate(self.levels[p])],
            }
            if p >= 1:
                entry["faces"] = [list(self.face(p, i).table) for i in range(p + 1)]
            if p < self.p_max:
                entry["degeneracies"] = [list(self.degeneracy(p, j).table) for j in range(p + 1)]
            levels.append(entry)
        return {"m": self.m, "n": self.n, "p_max": self.p_max, "levels": levels}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def wedge_model(m: int, n: int, p_max: int) -> PointedSimplicialSet:
    return PointedSimplicialSet(m, n, p_max)


def expected_size(m: int, n: int, p: int) -> int:
    return m * comb(p, n) + 1
