"""Finite graded lower semilattices used as index categories of diagrams."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable

from .complexes import MAX_VERTICES


class PosetError(ValueError):
    pass


@dataclass
class ValidationReport:
    """Outcome of a structural check; ``failures`` holds (kind, witness) pairs."""

    name: str
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, kind: str, witness) -> None:
        self.failures.append((kind, witness))

    def kinds(self) -> set[str]:
        return {k for k, _ in self.failures}

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "check": self.name,
            "status": "PASS" if self.ok else "FAIL",
            "failures": [{"kind": k, "witness": repr(w)} for k, w in self.failures],
        }


class GradedLowerSemilattice:
    """A finite poset given by its order relation and a grade function.

    Meets are derived from the order on construction; pairs without a
    greatest lower bound get no entry in the meet table (``validate``
    reports them).
    """

    def __init__(self, elements: Iterable[Hashable], leq: Iterable[tuple], grade: dict):
        self.elements = list(elements)
        self._index = {e: i for i, e in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise PosetError("duplicate elements")
        self._leq = {(p, p) for p in self.elements}
        for p, q in leq:
            if p not in self._index or q not in self._index:
                raise PosetError(f"relation ({p!r}, {q!r}) mentions unknown element")
            self._leq.add((p, q))
        self.grade = dict(grade)
        missing = [e for e in self.elements if e not in self.grade]
        if missing:
            raise PosetError(f"no grade for {missing[0]!r}")
        self._below = {p: {q for q in self.elements if (q, p) in self._leq} for p in self.elements}
        self.meet_table = self._compute_meets()

    def _compute_meets(self) -> dict:
        table = {}
        for i, p in enumerate(self.elements):
            for q in self.elements[i:]:
                lower = self._below[p] & self._below[q]
                tops = [r for r in lower if all(self.leq(s, r) for s in lower)]
                if len(tops) == 1:
                    table[(p, q)] = table[(q, p)] = tops[0]
        return table

    def leq(self, p, q) -> bool:
        return (p, q) in self._leq

    def lt(self, p, q) -> bool:
        return p != q and (p, q) in self._leq

    def meet(self, p, q):
        try:
            return self.meet_table[(p, q)]
        except KeyError:
            raise PosetError(f"{p!r} and {q!r} have no meet") from None

    def __contains__(self, p) -> bool:
        return p in self._index

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def max_grade(self) -> int:
        return max(self.grade.values(), default=0)

    def strict_lower_cone(self, p) -> list:
        if p not in self:
            raise PosetError(f"{p!r} not in poset")
        return [q for q in self.elements if self.lt(q, p)]

    def truncate(self, n: int) -> GradedLowerSemilattice:
        if n < 0:
            raise PosetError("truncation level must be >= 0")
        keep = [e for e in self.elements if self.grade[e] <= n]
        keep_set = set(keep)
        rel = [(p, q) for p, q in self._leq if p in keep_set and q in keep_set]
        return GradedLowerSemilattice(keep, rel, {e: self.grade[e] for e in keep})

    def comparable_pairs(self) -> list[tuple]:
        return [(p, q) for p in self.elements for q in self.elements if self.lt(p, q)]

    def chains3(self) -> list[tuple]:
        return [
            (p, q, r)
            for p, q in self.comparable_pairs()
            for r in self.elements
            if self.lt(q, r)
        ]

    def validate(self) -> ValidationReport:
        rep = ValidationReport("graded lower semilattice")
        els = self.elements
        pairs = [(p, q) for p in els for q in els if self.leq(p, q)]
        for p, q in pairs:
            if p != q and self.leq(q, p):
                rep.fail("antisymmetry", (p, q))
            if p != q and not self.grade[p] < self.grade[q]:
                rep.fail("grading", (p, q))
            for r in els:
                if self.leq(q, r) and not self.leq(p, r):
                    rep.fail("transitivity", (p, q, r))
        for e in els:
            g = self.grade[e]
            if not isinstance(g, int) or g < 0:
                rep.fail("grade value", e)
        for i, p in enumerate(els):
            for q in els[i:]:
                try:
                    w = self.meet(p, q)
                except PosetError:
                    rep.fail("meet", (p, q))
                    continue
                if not (self.leq(w, p) and self.leq(w, q)):
                    rep.fail("meet not a lower bound", (p, q, w))
                elif any(self.leq(r, p) and self.leq(r, q) and not self.leq(r, w) for r in els):
                    rep.fail("meet not greatest", (p, q, w))
        return rep

    def to_json(self) -> dict:
        return {
            "elements": [_jsonable(e) for e in self.elements],
            "leq": sorted(
                ([_jsonable(p), _jsonable(q)] for p, q in self._leq if p != q), key=json.dumps
            ),
            "grade": {json.dumps(_jsonable(e)): self.grade[e] for e in self.elements},
        }

    @classmethod
    def from_json(cls, data: dict) -> GradedLowerSemilattice:
        try:
            elements = [_hashable(e) for e in data["elements"]]
            leq = [(_hashable(p), _hashable(q)) for p, q in data["leq"]]
            grade = {}
            for k, v in data["grade"].items():
                try:
                    key = _hashable(json.loads(k))
                except json.JSONDecodeError:
                    key = k
                grade[key] = int(v)
        except (KeyError, TypeError, ValueError) as exc:
            raise PosetError(f"malformed poset JSON: {exc}") from exc
        return cls(elements, leq, grade)

    def __repr__(self) -> str:
        return f"GradedLowerSemilattice({len(self.elements)} elements)"


def _jsonable(e):
    if isinstance(e, frozenset):
        return sorted(e)
    return e


def _hashable(e):
    if isinstance(e, list):
        return frozenset(e)
    return e


class BooleanLattice(GradedLowerSemilattice):
    """Subsets of ``[m]`` ordered by inclusion and graded by cardinality."""

    def __init__(self, m: int):
        if not 0 <= m <= MAX_VERTICES:
            raise PosetError(f"m={m} outside 0..{MAX_VERTICES}")
        self.m = m
        self.elements = [
            frozenset(c) for r in range(m + 1) for c in combinations(range(1, m + 1), r)
        ]
        self._index = {e: i for i, e in enumerate(self.elements)}
        self.grade = {e: len(e) for e in self.elements}
        self._leq = None

    # the order and meets are computed rather than tabulated
    def leq(self, p, q) -> bool:
        return p <= q

    def lt(self, p, q) -> bool:
        return p < q

    def meet(self, p, q):
        return p & q

    @property
    def meet_table(self) -> dict:
        return {(p, q): p & q for p in self.elements for q in self.elements}

    def strict_lower_cone(self, p) -> list:
        if p not in self:
            raise PosetError(f"{p!r} not in poset")
        return [q for q in self.elements if q < p]

    def truncate(self, n: int) -> GradedLowerSemilattice:
        if n < 0:
            raise PosetError("truncation level must be >= 0")
        keep = [e for e in self.elements if len(e) <= n]
        rel = [(p, q) for p in keep for q in keep if p < q]
        return GradedLowerSemilattice(keep, rel, {e: len(e) for e in keep})

    def to_json(self) -> dict:
        return {
            "elements": [sorted(e) for e in self.elements],
            "leq": [[sorted(p), sorted(q)] for p in self.elements for q in self.elements if p < q],
            "grade": {json.dumps(sorted(e)): len(e) for e in self.elements},
        }

    def __repr__(self) -> str:
        return f"BooleanLattice({self.m})"


def boolean_lattice(m: int) -> BooleanLattice:
    return BooleanLattice(m)


def validate(P: GradedLowerSemilattice) -> ValidationReport:
    return P.validate()


def truncate(P: GradedLowerSemilattice, n: int) -> GradedLowerSemilattice:
    return P.truncate(n)


def strict_lower_cone(P: GradedLowerSemilattice, p) -> list:
    return P.strict_lower_cone(p)
