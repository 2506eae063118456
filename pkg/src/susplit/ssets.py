"""Finite simplicial sets, their products, simplicial subsets and chains.

A simplex is always held in Eilenberg-Zilber normal form: a nondegenerate
target together with the monotone surjection ``[n] -> [p]`` through which
it is degenerated.  The decreasing degeneracy word is derived from that
surjection, so two simplices are equal exactly when their references are.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Hashable, Iterable, Sequence

from .chains import ChainComplex, Homology, reduced_chains, reduced_homology, tensor_many, with_basepoint
from .complexes import SimplicialComplex
from .posets import ValidationReport

DEFAULT_MAX_CELLS = 10**6


class SSetError(ValueError):
    pass


class CellOverflow(SSetError):
    pass


class ClosureError(SSetError):
    def __init__(self, msg: str, simplex=None, face_index=None):
        super().__init__(msg)
        self.simplex = simplex
        self.face_index = face_index


def max_cells() -> int:
    raw = os.environ.get("SUSPLIT_MAX_CELLS")
    return int(raw) if raw else DEFAULT_MAX_CELLS


@dataclass(frozen=True)
class SimplexRef:
    """``X(surj)(target)``: the target degenerated along a monotone surjection."""

    target: Hashable
    surj: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.surj) - 1

    @property
    def target_degree(self) -> int:
        return self.surj[-1]

    @property
    def word(self) -> tuple[int, ...]:
        """Degeneracy indices ``i_1 > ... > i_k`` with ``self = s_{i_1}...s_{i_k} target``."""
        s = self.surj
        return tuple(i for i in range(len(s) - 2, -1, -1) if s[i] == s[i + 1])

    @property
    def is_nondegenerate(self) -> bool:
        return not self.word

    @classmethod
    def from_word(cls, target, target_degree: int, word: Sequence[int] = ()) -> SimplexRef:
        w = list(word)
        if any(a <= b for a, b in zip(w, w[1:])):
            raise SSetError(f"degeneracy word {w} is not strictly decreasing")
        n = target_degree + len(w)
        if any(not 0 <= i < n for i in w):
            raise SSetError(f"degeneracy index out of range in {w}")
        J = set(w)
        return cls(target, tuple(j - sum(1 for i in J if i < j) for j in range(n + 1)))

    def degenerate(self, i: int) -> SimplexRef:
        """``s_i`` applied to this simplex."""
        if not 0 <= i <= self.degree:
            raise SSetError(f"s_{i} undefined in degree {self.degree}")
        s = self.surj
        return SimplexRef(self.target, s[: i + 1] + s[i:])

    def __repr__(self) -> str:
        if self.is_nondegenerate:
            return f"⟨{self.target!r}⟩"
        return "s" + "s".join(map(str, self.word)) + f"⟨{self.target!r}⟩"


def nondeg(target, degree: int) -> SimplexRef:
    return SimplexRef(target, tuple(range(degree + 1)))


def surjections(n: int, p: int) -> list[tuple[int, ...]]:
    """All monotone surjections ``[n] -> [p]``."""
    out = []
    for steps in combinations(range(n), p):
        st = set(steps)
        v, f = 0, [0]
        for j in range(n):
            v += j in st
            f.append(v)
        out.append(tuple(f))
    return out


class FiniteSSet:
    """A simplicial set with finitely many nondegenerate simplices.

    ``nondeg[k]`` lists the degree-k nondegenerate ids (hashable, unique
    across degrees); ``faces[(x, i)]`` is the SimplexRef of ``d_i x``.
    """

    def __init__(self, nondeg: Sequence[Sequence[Hashable]], faces: dict, basepoint, name: str = ""):
        self.nondeg = [list(b) for b in nondeg]
        while self.nondeg and not self.nondeg[-1]:
            self.nondeg.pop()
        self.degree = {}
        for k, ids in enumerate(self.nondeg):
            for x in ids:
                if x in self.degree:
                    raise SSetError(f"simplex id {x!r} listed twice")
                self.degree[x] = k
        self.faces = dict(faces)
        for x, k in self.degree.items():
            if k == 0:
                continue
            for i in range(k + 1):
                ref = self.faces.get((x, i))
                if ref is None:
                    raise SSetError(f"missing face d_{i} of {x!r}")
                if ref.degree != k - 1 or self.degree.get(ref.target) != ref.target_degree:
                    raise SSetError(f"face d_{i} of {x!r} is malformed: {ref!r}")
        if self.degree.get(basepoint) != 0:
            raise SSetError(f"basepoint {basepoint!r} is not a vertex")
        self.basepoint = basepoint
        self.name = name
        self._powers: dict = {}

    @property
    def dim(self) -> int:
        return len(self.nondeg) - 1

    def __len__(self) -> int:
        return len(self.degree)

    def __contains__(self, x) -> bool:
        return x in self.degree

    def ids(self) -> Iterable[Hashable]:
        for b in self.nondeg:
            yield from b

    def ref(self, x) -> SimplexRef:
        return nondeg(x, self.degree[x])

    def base(self, n: int) -> SimplexRef:
        """The basepoint degenerated to degree n."""
        return SimplexRef(self.basepoint, (0,) * (n + 1))

    def face(self, s: SimplexRef, i: int) -> SimplexRef:
        """``d_i s`` in normal form."""
        n = s.degree
        if n == 0 or not 0 <= i <= n:
            raise SSetError(f"d_{i} undefined in degree {n}")
        g = s.surj[:i] + s.surj[i + 1 :]
        p = s.target_degree
        if g[0] == 0 and g[-1] == p and all(b - a <= 1 for a, b in zip(g, g[1:])):
            return SimplexRef(s.target, g)
        # exactly one value v of [p] is missed: d_i s = X(g') d_v target
        v = next(j for j in range(p + 1) if j not in set(g))
        g2 = tuple(x - (x > v) for x in g)
        inner = self.faces[(s.target, v)]
        return SimplexRef(inner.target, tuple(inner.surj[x] for x in g2))

    def simplices(self, n: int) -> list[SimplexRef]:
        """All degree-n simplices, degenerate ones included."""
        out = []
        for p in range(min(n, self.dim) + 1):
            surjs = surjections(n, p)
            for x in self.nondeg[p]:
                out.extend(SimplexRef(x, f) for f in surjs)
        return out

    def audit(self) -> ValidationReport:
        """Check ``d_i d_j = d_{j-1} d_i`` (i < j) on every nondegenerate simplex."""
        rep = ValidationReport("simplicial identities")
        for k in range(2, len(self.nondeg)):
            for x in self.nondeg[k]:
                s = self.ref(x)
                for j in range(k + 1):
                    for i in range(j):
                        a = self.face(self.face(s, j), i)
                        b = self.face(self.face(s, i), j - 1)
                        if a != b:
                            rep.fail("d_i d_j ≠ d_{j-1} d_i", (x, i, j, a, b))
        return rep

    def counts(self) -> list[int]:
        return [len(b) for b in self.nondeg]

    def euler(self) -> int:
        return sum((-1) ** k * len(b) for k, b in enumerate(self.nondeg))

    def power(self, m: int) -> ProductSSet:
        if m < 1:
            raise SSetError("power needs m >= 1")
        if m not in self._powers:
            self._powers[m] = product_many([self] * m)
        return self._powers[m]

    def __repr__(self) -> str:
        return f"FiniteSSet({self.name or '?'}, counts={self.counts()})"

    # JSON ---------------------------------------------------------------

    def to_json(self) -> dict:
        order = {x: i for i, x in enumerate(self.ids())}
        faces = {}
        for x in self.ids():
            for i in range(self.degree[x] + 1 if self.degree[x] else 0):
                ref = self.faces[(x, i)]
                faces[f"{order[x]},{i}"] = {"target": order[ref.target], "word": list(ref.word)}
        return {"nondeg": self.counts(), "faces": faces, "basepoint": order[self.basepoint]}

    @classmethod
    def from_json(cls, data: dict, name: str = "") -> FiniteSSet:
        try:
            counts = [int(c) for c in data["nondeg"]]
            nd, nxt = [], 0
            for c in counts:
                nd.append(list(range(nxt, nxt + c)))
                nxt += c
            deg = {x: k for k, ids in enumerate(nd) for x in ids}
            faces = {}
            for key, val in data["faces"].items():
                x, i = (int(t) for t in key.split(","))
                t = int(val["target"])
                if t not in deg:
                    raise SSetError(f"unknown face target {t}")
                faces[(x, i)] = SimplexRef.from_word(t, deg[t], val.get("word", []))
            bp = int(data["basepoint"])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, SSetError):
                raise
            raise SSetError(f"malformed simplicial set JSON: {exc}") from exc
        return cls(nd, faces, bp, name=name)


def sphere_sset(n: int) -> FiniteSSet:
    """``Δ[n] / ∂Δ[n]``: one vertex and one nondegenerate n-simplex."""
    if n < 1:
        raise SSetError("sphere dimension must be >= 1")
    top = f"S{n}"
    faces = {(top, i): SimplexRef("*", (0,) * n) for i in range(n + 1)}
    return FiniteSSet([["*"]] + [[] for _ in range(n - 1)] + [[top]], faces, "*", name=f"S{n}")


def interval_sset() -> FiniteSSet:
    faces = {("01", 0): nondeg(1, 0), ("01", 1): nondeg(0, 0)}
    return FiniteSSet([[0, 1], ["01"]], faces, 0, name="Δ[1]")


def point_sset() -> FiniteSSet:
    return FiniteSSet([["*"]], {}, "*", name="pt")


def from_ordered_complex(K: SimplicialComplex, basepoint: int | None = None) -> FiniteSSet:
    """One nondegenerate simplex per nonempty face, vertices in increasing order."""
    faces_by_dim: list[list[tuple]] = [[] for _ in range(K.dimension + 1)]
    for f in K.sorted_faces():
        if f:
            faces_by_dim[len(f) - 1].append(tuple(sorted(f)))
    if not faces_by_dim or not faces_by_dim[0]:
        raise SSetError("complex has no vertices")
    table = {}
    for k, fs in enumerate(faces_by_dim):
        if k == 0:
            continue
        for f in fs:
            for i in range(k + 1):
                table[(f, i)] = nondeg(f[:i] + f[i + 1 :], k - 1)
    bp = (basepoint,) if basepoint is not None else faces_by_dim[0][0]
    return FiniteSSet(faces_by_dim, table, bp, name=f"K[{K.m}]")


def wedge(X: FiniteSSet, Y: FiniteSSet) -> FiniteSSet:
    """``X ∨ Y`` with basepoints identified."""

    def tag(side, x):
        return "*" if x == (X, Y)[side].basepoint else (side, x)

    nd: list[list] = [[] for _ in range(max(X.dim, Y.dim) + 1)]
    nd[0].append("*")
    faces = {}
    for side, Z in enumerate((X, Y)):
        for x in Z.ids():
            if x == Z.basepoint:
                continue
            nd[Z.degree[x]].append((side, x))
            for i in range(Z.degree[x] + 1 if Z.degree[x] else 0):
                r = Z.faces[(x, i)]
                faces[((side, x), i)] = SimplexRef(tag(side, r.target), r.surj)
    return FiniteSSet(nd, faces, "*", name=f"{X.name}∨{Y.name}")


class ProductSSet(FiniteSSet):
    """Product of finite simplicial sets.

    Nondegenerate simplices are tuples of factor SimplexRefs of a common
    degree whose surjections share no repeated position.
    """

    def __init__(self, factors: Sequence[FiniteSSet], limit: int | None = None):
        self.factors = list(factors)
        limit = max_cells() if limit is None else limit
        top = sum(F.dim for F in self.factors)
        nd: list[list[tuple]] = []
        total = 0
        for n in range(top + 1):
            level = _enumerate_level([F.simplices(n) for F in self.factors], n)
            total += len(level)
            if total > limit:
                raise CellOverflow(
                    f"product has more than {limit} nondegenerate simplices "
                    "(raise SUSPLIT_MAX_CELLS to allow)"
                )
            nd.append(level)
        table = {}
        for n in range(1, len(nd)):
            for x in nd[n]:
                for i in range(n + 1):
                    table[(x, i)] = self._normalize(
                        tuple(F.face(c, i) for F, c in zip(self.factors, x))
                    )
        bp = tuple(F.base(0) for F in self.factors)
        super().__init__(nd, table, bp, name="×".join(F.name for F in self.factors))

    @staticmethod
    def _normalize(coords: tuple[SimplexRef, ...]) -> SimplexRef:
        """Split a tuple of degree-n refs into its nondegenerate core and joint surjection."""
        n = coords[0].degree
        J = [j for j in range(n) if all(c.surj[j] == c.surj[j + 1] for c in coords)]
        if not J:
            return nondeg(coords, n)
        Js = set(J)
        keep = [j for j in range(n + 1) if j == 0 or (j - 1) not in Js]
        core = tuple(SimplexRef(c.target, tuple(c.surj[j] for j in keep)) for c in coords)
        F = tuple(j - sum(1 for i in J if i < j) for j in range(n + 1))
        return SimplexRef(core, F)

    def coords(self, x) -> tuple[SimplexRef, ...]:
        return x

    def tuple_face(self, coords: tuple[SimplexRef, ...], i: int) -> tuple[SimplexRef, ...]:
        """Componentwise ``d_i`` without renormalising."""
        return tuple(F.face(c, i) for F, c in zip(self.factors, coords))

    def expand(self, s: SimplexRef) -> tuple[SimplexRef, ...]:
        """Coordinates of an arbitrary (possibly degenerate) product simplex."""
        return tuple(SimplexRef(c.target, tuple(c.surj[j] for j in s.surj)) for c in s.target)


def _enumerate_level(choices: list[list[SimplexRef]], n: int) -> list[tuple]:
    out = []
    full = frozenset(range(n))

    def repeats(s: SimplexRef) -> frozenset:
        return frozenset(j for j in range(n) if s.surj[j] == s.surj[j + 1])

    tagged = [[(c, repeats(c)) for c in cs] for cs in choices]

    def rec(i, acc, common):
        if i == len(tagged):
            if not common:
                out.append(tuple(acc))
            return
        for c, r in tagged[i]:
            acc.append(c)
            rec(i + 1, acc, common & r)
            acc.pop()

    rec(0, [], full)
    return out


def product_many(factors: Sequence[FiniteSSet]) -> ProductSSet:
    return ProductSSet(factors)


def product(X: FiniteSSet, Y: FiniteSSet) -> ProductSSet:
    return ProductSSet([X, Y])


def power(X: FiniteSSet, m: int) -> ProductSSet:
    return X.power(m)


@dataclass(frozen=True)
class SSubset:
    parent: FiniteSSet
    membership: frozenset

    def __len__(self) -> int:
        return len(self.membership)

    def __contains__(self, x) -> bool:
        return x in self.membership

    def __le__(self, other: SSubset) -> bool:
        return self.membership <= other.membership

    def counts(self) -> list[int]:
        return [sum(1 for x in ids if x in self.membership) for ids in self.parent.nondeg]

    def euler(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.counts()))

    def union(self, other: SSubset) -> SSubset:
        return SSubset(self.parent, self.membership | other.membership)

    def intersection(self, other: SSubset) -> SSubset:
        return SSubset(self.parent, self.membership & other.membership)


def check_closure(X: FiniteSSet, members: frozenset) -> None:
    for x in members:
        k = X.degree[x]
        for i in range(k + 1 if k else 0):
            t = X.faces[(x, i)].target
            if t not in members:
                raise ClosureError(
                    f"face d_{i} of {x!r} lands on {t!r} outside the subset", simplex=x, face_index=i
                )


def simplicial_subset(X: FiniteSSet, pred: Callable[[Hashable], bool]) -> SSubset:
    """Nondegenerate simplices satisfying ``pred``; closure under faces is verified."""
    members = frozenset(x for x in X.ids() if pred(x))
    check_closure(X, members)
    return SSubset(X, members)


def normalized_chains(X) -> ChainComplex:
    """Normalized chains of a FiniteSSet or SSubset (augmented, based)."""
    if isinstance(X, SSubset):
        S, members = X.parent, X.membership
    else:
        S, members = X, None
    basis = [[x for x in ids if members is None or x in members] for ids in S.nondeg]
    boundary = {}
    for k, ids in enumerate(basis):
        for x in ids:
            bd: dict = {}
            if k:
                for i in range(k + 1):
                    r = S.faces[(x, i)]
                    if r.is_nondegenerate:
                        bd[r.target] = bd.get(r.target, 0) + (-1) ** i
            boundary[x] = bd
    bp = S.basepoint if members is None or S.basepoint in members else None
    return ChainComplex(basis, boundary, augmented=True, basepoint=bp)


def sset_homology(X) -> Homology:
    from .chains import homology

    return homology(normalized_chains(X))


def is_connected(X: FiniteSSet) -> bool:
    return sset_homology(X)[0].rank == 1


def smash_power_chains(X: FiniteSSet, k: int) -> ChainComplex:
    """Chains of the k-fold smash power: tensor of reduced chains plus a basepoint."""
    if k == 0:
        from .chains import point

        return point()
    red = reduced_chains(normalized_chains(X))
    return with_basepoint(tensor_many([red] * k), "*∧")


def smash_power_homology(X: FiniteSSet, k: int) -> Homology:
    if k < 0:
        raise SSetError("smash exponent must be >= 0")
    return reduced_homology(smash_power_chains(X, k))


def sset_dumps(X: FiniteSSet) -> str:
    return json.dumps(X.to_json(), sort_keys=True)
