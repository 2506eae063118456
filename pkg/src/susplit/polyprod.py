"""Chain models of polyhedral products and smash polyhedral products.

The polyhedral product is realised as the span, inside the tensor product of
the ambient chain complexes, of those generators whose support (the set of
coordinates not lying in the sub-pair) is a face of K.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .chains import (
    BasedSubcomplex,
    ChainComplex,
    ChainError,
    Homology,
    based_subcomplex,
    direct_sum,
    reduced_chains,
    reduced_homology,
    tensor_many,
    with_basepoint,
)
from .complexes import SimplicialComplex, face_label, full_subcomplex
from .report import Report
from .ssets import normalized_chains, sphere_sset


@dataclass(frozen=True)
class BasedPair:
    """A chain model of a pair ``(X, A)`` with ``A`` a based subcomplex."""

    ambient: ChainComplex
    sub: frozenset
    label: str = ""

    def __post_init__(self):
        if not self.ambient.augmented or self.ambient.basepoint is None:
            raise ChainError(f"pair {self.label!r}: ambient must be augmented and based")
        BasedSubcomplex(self.ambient, self.sub, self.ambient.basepoint)

    @property
    def basepoint(self):
        return self.ambient.basepoint

    @property
    def is_based_space(self) -> bool:
        return self.sub == frozenset([self.basepoint])

    def sub_chains(self) -> ChainComplex:
        from .chains import subcomplex

        return subcomplex(self.ambient, self.sub)


def pair(ambient: ChainComplex, sub, label: str = "") -> BasedPair:
    S = sub.selected if isinstance(sub, BasedSubcomplex) else frozenset(sub)
    return BasedPair(ambient, S, label)


def based_space(X: ChainComplex, label: str = "") -> BasedPair:
    """The pair ``(X, *)``."""
    return BasedPair(X, frozenset([X.basepoint]), label or "(X,*)")


def disk1() -> BasedPair:
    """``(D¹, S⁰)``: two vertices joined by an edge."""
    C = ChainComplex([["v0", "v1"], ["e"]], {"e": {"v1": 1, "v0": -1}}, augmented=True, basepoint="v0")
    return BasedPair(C, frozenset(["v0", "v1"]), "(D1,S0)")


def disk2() -> BasedPair:
    """``(D², S¹)``: one vertex, a loop, and a 2-cell bounding it."""
    C = ChainComplex([["v"], ["e"], ["c"]], {"c": {"e": 1}}, augmented=True, basepoint="v")
    return BasedPair(C, frozenset(["v", "e"]), "(D2,S1)")


def circle() -> ChainComplex:
    return normalized_chains(sphere_sset(1))


def circle_pair() -> BasedPair:
    return based_space(circle(), "(S1,*)")


def cone(X: ChainComplex) -> ChainComplex:
    """Unreduced cone on a based complex, with a new cone vertex ``("c", "apex")``."""
    basis = [list(b) for b in X.basis] + [[]]
    boundary = {g: dict(X.boundary[g]) for g in X.generators()}
    apex = ("c", "apex")
    basis[0].append(apex)
    for k, b in enumerate(X.basis):
        for g in b:
            cg = ("c", g)
            basis[k + 1].append(cg)
            bd = {g: 1}
            if k == 0:
                bd[apex] = -1
            for h, e in X.boundary[g].items():
                bd[("c", h)] = bd.get(("c", h), 0) - e
            boundary[cg] = bd
    return ChainComplex(basis, boundary, augmented=True, basepoint=X.basepoint)


def cone_pair(X: ChainComplex, label: str = "(CX,X)") -> BasedPair:
    return BasedPair(cone(X), frozenset(X.generators()), label)


MODELS = {
    "disk1": disk1,
    "disk2": disk2,
    "circle": circle_pair,
}


# ---------------------------------------------------------------------------


def support(pairs: Sequence[BasedPair], gen: tuple) -> frozenset:
    """Coordinates (1-based) whose factor lies outside the sub-pair."""
    return frozenset(i + 1 for i, (P, g) in enumerate(zip(pairs, gen)) if g not in P.sub)


def nonbase(pairs: Sequence[BasedPair], gen: tuple) -> frozenset:
    """Coordinates (1-based) that are not the basepoint."""
    return frozenset(i + 1 for i, (P, g) in enumerate(zip(pairs, gen)) if g != P.basepoint)


def _check_inputs(K: SimplicialComplex, pairs: Sequence[BasedPair]) -> None:
    if len(pairs) != K.m:
        raise ChainError(f"{len(pairs)} pairs supplied for {K.m} vertices")
    for P in pairs:
        if not isinstance(P, BasedPair):
            raise ChainError(f"invalid pair {P!r}")


def polyhedral_chains(K: SimplicialComplex, pairs: Sequence[BasedPair]) -> ChainComplex:
    _check_inputs(K, pairs)
    faces = K.faces
    C = tensor_many([P.ambient for P in pairs], keep=lambda g: support(pairs, g) in faces)
    C.basepoint = tuple(P.basepoint for P in pairs)
    return C


def smash_polyhedral_chains(K: SimplicialComplex, pairs: Sequence[BasedPair]) -> ChainComplex:
    """Polyhedral span inside the smash product, with the collapsed basepoint ``*``."""
    _check_inputs(K, pairs)
    if K.m == 0:
        from .chains import point

        return point()
    faces = K.faces
    reduced = [reduced_chains(P.ambient) for P in pairs]
    R = tensor_many(reduced, keep=lambda g: support(pairs, g) in faces)
    return with_basepoint(R, "*")


def restrict_pairs(pairs: Sequence[BasedPair], I) -> list[BasedPair]:
    return [pairs[i - 1] for i in sorted(I)]


def nonempty_subsets(m: int):
    for r in range(1, m + 1):
        for I in combinations(range(1, m + 1), r):
            yield frozenset(I)


def bbcg_summands(K: SimplicialComplex, pairs: Sequence[BasedPair]) -> list[tuple[frozenset, Homology]]:
    out = []
    for I in nonempty_subsets(K.m):
        KI = full_subcomplex(K, I)
        out.append((I, reduced_homology(smash_polyhedral_chains(KI, restrict_pairs(pairs, I)))))
    return out


def bbcg_predicted(K: SimplicialComplex, pairs: Sequence[BasedPair]) -> Homology:
    return direct_sum(h for _, h in bbcg_summands(K, pairs))


def bbcg_verify(K: SimplicialComplex, pairs: Sequence[BasedPair], predicted: Homology | None = None) -> Report:
    """Compare H̃ of the polyhedral product with the wedge of smash summands."""
    lhs = reduced_homology(polyhedral_chains(K, pairs))
    summands = bbcg_summands(K, pairs)
    rhs = direct_sum(h for _, h in summands) if predicted is None else predicted
    return Report(
        "bbcg",
        lhs,
        rhs,
        left_name="polyhedral product",
        right_name="wedge of smash summands",
        extra={
            "complex": K.to_json(),
            "pairs": [P.label for P in pairs],
            "summands": [
                {"I": face_label(I), "homology": h.to_json()} for I, h in summands if not h.is_zero
            ],
        },
    )


def fat_wedge_stage(K: SimplicialComplex, pairs: Sequence[BasedPair], n: int) -> ChainComplex:
    """Generators of the polyhedral product with at most n non-basepoint coordinates."""
    if not 0 <= n <= K.m:
        raise ChainError(f"stage {n} outside 0..{K.m}")
    faces = K.faces
    return tensor_many(
        [P.ambient for P in pairs],
        keep=lambda g: support(pairs, g) in faces and len(nonbase(pairs, g)) <= n,
    )


def smash_power(C: ChainComplex, k: int) -> ChainComplex:
    if k == 0:
        from .chains import point

        return point()
    return with_basepoint(tensor_many([reduced_chains(C)] * k), "*")


def dj_census(K: SimplicialComplex, pairs: Sequence[BasedPair] | BasedPair) -> list[tuple[frozenset, Homology]]:
    """One smash power ``X^{∧|σ|}`` per nonempty face σ, for pairs ``(X, *)``."""
    if isinstance(pairs, BasedPair):
        pairs = [pairs] * K.m
    _check_inputs(K, pairs)
    if pairs:
        X = pairs[0]
        for P in pairs:
            if not P.is_based_space:
                raise ChainError(f"pair {P.label!r} is not of the form (X, *)")
            if P.ambient is not X.ambient and P.ambient.to_json() != X.ambient.to_json():
                raise ChainError("census needs all pairs equal")
    cache: dict[int, Homology] = {}
    out = []
    for sigma in K.sorted_faces():
        if not sigma:
            continue
        k = len(sigma)
        if k not in cache:
            cache[k] = reduced_homology(smash_power(pairs[0].ambient, k))
        out.append((sigma, cache[k]))
    return out


def census_report(K: SimplicialComplex, pairs) -> Report:
    census = dj_census(K, pairs)
    if isinstance(pairs, BasedPair):
        pairs = [pairs] * K.m
    return Report(
        "census",
        direct_sum(h for _, h in census),
        bbcg_predicted(K, pairs),
        left_name="census total",
        right_name="bbcg prediction",
        extra={"census": [{"face": face_label(s), "homology": h.to_json()} for s, h in census]},
    )


def pair_from_json(data: dict) -> BasedPair:
    """``{"model": "disk1" | "disk2" | "circle" | "custom", ...}``."""
    model = data.get("model")
    if model in MODELS:
        return MODELS[model]()
    if model == "custom":
        amb = ChainComplex.from_json(data["ambient"])
        amb.augmented = True
        if amb.basepoint is None:
            amb.basepoint = data.get("basepoint") or amb.basis[0][0]
        return pair(amb, data.get("sub", [amb.basepoint]), data.get("label", "custom"))
    raise ChainError(f"unknown pair model {model!r}")


def based_subcomplex_of(P: BasedPair) -> BasedSubcomplex:
    return based_subcomplex(P.ambient, P.sub)
