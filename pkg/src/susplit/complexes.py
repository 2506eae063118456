"""Finite abstract simplicial complexes on the vertex set [m]."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

MAX_VERTICES = 20
MAX_FACES = 2**20

Face = frozenset


def face(*vertices: int) -> frozenset:
    return frozenset(vertices)


def _sorted(f: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(f))


def _face_key(f: frozenset) -> tuple:
    return (len(f), _sorted(f))


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class SimplicialComplex:
    """A downward-closed family of subsets of ``{1, ..., m}``.

    ``faces`` always contains the empty face.  ``relabel`` records, for
    complexes produced by :func:`full_subcomplex`, the original vertex of
    each new vertex ``1..len(relabel)``.
    """

    m: int
    faces: frozenset
    relabel: tuple[int, ...] | None = field(default=None, compare=False)

    @property
    def facets(self) -> list[frozenset]:
        fs = [f for f in self.faces if not any(f < g for g in self.faces if len(g) > len(f))]
        return sorted(fs, key=_face_key)

    @property
    def dimension(self) -> int:
        return max(len(f) for f in self.faces) - 1

    def f_vector(self) -> list[int]:
        counts = [0] * (self.dimension + 2)
        for f in self.faces:
            counts[len(f)] += 1
        return counts

    def sorted_faces(self) -> list[frozenset]:
        return sorted(self.faces, key=_face_key)

    def __contains__(self, f) -> bool:
        return frozenset(f) in self.faces

    def __le__(self, other: SimplicialComplex) -> bool:
        return self.m == other.m and self.faces <= other.faces

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(range(1, self.m + 1))

    def ghost_vertices(self) -> list[int]:
        used = set().union(*self.faces)
        return [i for i in range(1, self.m + 1) if i not in used]

    def is_void_of_vertices(self) -> bool:
        return self.faces == frozenset([frozenset()])

    def to_json(self) -> dict:
        facets = sorted((_sorted(f) for f in self.facets))
        return {"m": self.m, "facets": [list(f) for f in facets]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> SimplicialComplex:
        try:
            m = int(data["m"])
            facets = [frozenset(int(v) for v in f) for f in data["facets"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ComplexError(f"malformed complex JSON: {exc}") from exc
        return from_facets(m, facets)

    def __repr__(self) -> str:
        fs = ", ".join("{" + ",".join(map(str, _sorted(f))) + "}" for f in self.facets)
        return f"SimplicialComplex(m={self.m}, facets=[{fs}])"


def from_facets(m: int, facets: Iterable[Iterable[int]]) -> SimplicialComplex:
    """Downward closure of ``facets`` on ``[m]`` (always including the empty face)."""
    if not 0 <= m <= MAX_VERTICES:
        raise ComplexError(f"vertex count {m} outside 0..{MAX_VERTICES}")
    faces: set[frozenset] = {frozenset()}
    for raw in facets:
        f = frozenset(raw)
        bad = [v for v in f if not (isinstance(v, int) and 1 <= v <= m)]
        if bad:
            raise ComplexError(f"vertex {bad[0]!r} out of range 1..{m}")
        if frozenset(f) in faces:
            continue
        verts = _sorted(f)
        for r in range(len(verts) + 1):
            faces.update(frozenset(c) for c in combinations(verts, r))
        if len(faces) > MAX_FACES:
            raise ComplexError(f"more than {MAX_FACES} faces")
    return SimplicialComplex(m, frozenset(faces))


def full_simplex(m: int) -> SimplicialComplex:
    return from_facets(m, [range(1, m + 1)])


def boundary_simplex(m: int) -> SimplicialComplex:
    """Boundary of the (m-1)-simplex on ``[m]``."""
    return from_facets(m, [set(c) for c in combinations(range(1, m + 1), m - 1)])


def discrete(m: int) -> SimplicialComplex:
    return from_facets(m, [{i} for i in range(1, m + 1)])


def void(m: int = 0) -> SimplicialComplex:
    """The complex ``{∅}`` on ``[m]``: every vertex is a ghost."""
    return from_facets(m, [])


def full_subcomplex(K: SimplicialComplex, I: Iterable[int]) -> SimplicialComplex:
    """``K_I`` relabelled order-preservingly onto ``1..|I|``.

    The original vertex of new vertex ``j`` is ``result.relabel[j - 1]``.
    """
    idx = _sorted(set(I))
    if any(not 1 <= v <= K.m for v in idx):
        raise ComplexError(f"{idx} is not a subset of [{K.m}]")
    new = {v: j for j, v in enumerate(idx, start=1)}
    I_set = set(idx)
    faces = frozenset(frozenset(new[v] for v in f) for f in K.faces if f <= I_set)
    return SimplicialComplex(len(idx), faces, relabel=idx)


def skeleton(K: SimplicialComplex, d: int) -> SimplicialComplex:
    if d < -1:
        raise ComplexError("skeleton dimension must be >= -1")
    return SimplicialComplex(K.m, frozenset(f for f in K.faces if len(f) <= d + 1))


def normalize_hypergraph(m: int, edges: Iterable[Iterable[int]]):
    """Drop vertices outside the union of ``edges`` and relabel onto ``1..k``.

    Returns ``(K, vertex_map)`` with ``vertex_map[old] = new``.
    """
    edges = [frozenset(e) for e in edges]
    if not edges:
        raise ComplexError("hypergraph needs at least one edge")
    for e in edges:
        for v in e:
            if not 1 <= v <= m:
                raise ComplexError(f"vertex {v!r} out of range 1..{m}")
    used = sorted(set().union(*edges))
    vertex_map = {v: j for j, v in enumerate(used, start=1)}
    if not used:
        warnings.warn("hypergraph has only empty edges; result is {∅}", stacklevel=2)
    return from_facets(len(used), [{vertex_map[v] for v in e} for e in edges]), vertex_map


def face_label(f: Iterable[int]) -> str:
    return "{" + ",".join(map(str, _sorted(f))) + "}"
