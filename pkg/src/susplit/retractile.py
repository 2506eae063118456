"""Diagrams of based subcomplexes over a graded lower semilattice.

A diagram assigns to every poset element a boundary-closed, based span of
generators of one ambient complex; arrows are the inclusions.  Colimits over
sub-posets are unions of spans.  A retraction system supplies a chain map
``ρ[p, q]: S_q -> S_p`` for every ``p < q``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .chains import (
    BasedSubcomplex,
    ChainComplex,
    ChainError,
    ChainMap,
    Homology,
    check_chain_map,
    direct_sum,
    map_from_matrices,
    quotient,
    reduced_homology,
    subcomplex,
    tensor_many,
)
from .complexes import SimplicialComplex
from .polyprod import BasedPair, polyhedral_chains
from .posets import BooleanLattice, GradedLowerSemilattice, ValidationReport, boolean_lattice
from .report import HypothesisError, Report


@dataclass
class PosetDiagram:
    P: GradedLowerSemilattice
    ambient: ChainComplex
    assign: dict
    factor_degrees: list | None = field(default=None, repr=False)
    _chains: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        bp = self.ambient.basepoint
        for p in self.P:
            if p not in self.assign:
                raise ChainError(f"no subcomplex assigned to {p!r}")
            sel = frozenset(self.assign[p])
            BasedSubcomplex(self.ambient, sel, bp)
            self.assign[p] = sel
        for p in self.P:
            for q in self.P:
                if self.P.lt(p, q) and not self.assign[p] <= self.assign[q]:
                    raise ChainError(f"diagram not monotone at {p!r} < {q!r}")

    def chains(self, p) -> ChainComplex:
        if p not in self._chains:
            self._chains[p] = subcomplex(self.ambient, self.assign[p])
        return self._chains[p]

    def union(self, elements) -> frozenset:
        out: set = set()
        for q in elements:
            out |= self.assign[q]
        return frozenset(out)


@dataclass
class RetractionSystem:
    maps: dict = field(default_factory=dict)

    def __getitem__(self, pq) -> ChainMap:
        return self.maps[pq]

    def get(self, p, q, D: PosetDiagram | None = None) -> ChainMap | None:
        if p == q and D is not None:
            from .chains import identity_map

            return identity_map(D.chains(p))
        return self.maps.get((p, q))

    def copy(self) -> RetractionSystem:
        return RetractionSystem(
            {k: ChainMap(f.source, f.target, {g: dict(v) for g, v in f.images.items()}) for k, f in self.maps.items()}
        )


def validate_diagram(D: PosetDiagram) -> ValidationReport:
    rep = D.P.validate()
    rep.name = "poset diagram"
    return rep


def validate_retractile(D: PosetDiagram, R: RetractionSystem) -> ValidationReport:
    """Exact checks of the retraction axioms.

    For ``p < q < r``: ``ρ[p,q] ∘ ι[q,p] = id``, ``ρ[p,r] ∘ ι[r,q] = ρ[p,q]``,
    ``ρ[p,r] = ρ[p,q] ∘ ρ[q,r]``; every ρ must be a chain map into ``S_p``.
    """
    rep = validate_diagram(D)
    rep.name = "retractile"
    P = D.P
    ok_maps = {}
    for p, q in P.comparable_pairs():
        f = R.maps.get((p, q))
        if f is None:
            rep.fail("missing retraction", (p, q))
            continue
        if set(f.source.degree) != D.assign[q] or set(f.target.degree) != D.assign[p]:
            rep.fail("retraction has wrong source or target", (p, q))
            continue
        cm = check_chain_map(f)
        for _, w in cm.failures:
            rep.fail("not a chain map", (p, q, w))
        for g in D.assign[p]:
            if f.image(g) != {g: 1}:
                rep.fail("ρ∘ι ≠ id", (p, q, g, f.image(g)))
                break
        ok_maps[(p, q)] = f
    for p, q, r in P.chains3():
        fpr, fpq, fqr = ok_maps.get((p, r)), ok_maps.get((p, q)), ok_maps.get((q, r))
        if fpr is None or fpq is None or fqr is None:
            continue
        for g in D.assign[q]:
            if fpr.image(g) != fpq.image(g):
                rep.fail("ρ[p,r]∘ι[r,q] ≠ ρ[p,q]", (p, q, r, g))
                break
        for g in D.assign[r]:
            if fpr.image(g) != fpq(fqr.image(g)):
                rep.fail("ρ[p,r] ≠ ρ[p,q]∘ρ[q,r]", (p, q, r, g))
                break
    return rep


def filtration_stage(D: PosetDiagram, n: int) -> ChainComplex:
    """Union of all ``S_p`` with grade at most n."""
    if n < 0:
        raise ChainError("stage must be >= 0")
    return subcomplex(D.ambient, D.union(p for p in D.P if D.P.grade[p] <= n))


def summand(D: PosetDiagram, p) -> ChainComplex:
    """``S_p`` with the union of the strictly lower ``S_q`` collapsed to the basepoint."""
    lower = D.P.strict_lower_cone(p)
    if not lower:
        return D.chains(p)
    return quotient(D.chains(p), D.union(lower))


def splitting_verify(D: PosetDiagram, R: RetractionSystem, n: int) -> Report:
    """Compare H̃ of stage n with the sum of H̃ of the summands of grade <= n."""
    rep = validate_retractile(D, R)
    if not rep.ok:
        raise HypothesisError(f"retraction system invalid: {rep.failures[0]}")
    lhs = reduced_homology(filtration_stage(D, n))
    parts = [(p, reduced_homology(summand(D, p))) for p in D.P if D.P.grade[p] <= n]
    return Report(
        "retractile splitting",
        lhs,
        direct_sum(h for _, h in parts),
        left_name="filtration stage",
        right_name="sum of summands",
        extra={
            "stage": n,
            "summands": [
                {"element": _el_json(p), "homology": h.to_json()} for p, h in parts if not h.is_zero
            ],
        },
    )


def _el_json(p):
    return sorted(p) if isinstance(p, frozenset) else p


def colimit_retraction(D: PosetDiagram, R: RetractionSystem, p, n: int) -> tuple[ChainMap, ValidationReport]:
    """The retraction ``stage n -> S_p`` assembled from ``ρ[p∧q, q]``.

    Requires ``grade(p) <= n``.  The report records any generator on which
    different q give different values.
    """
    rep = ValidationReport("colimit retraction")
    P = D.P
    if P.grade[p] > n:
        raise ChainError(f"{p!r} has grade above {n}")
    stage = filtration_stage(D, n)
    target = D.chains(p)
    images: dict = {}
    for q in P:
        if P.grade[q] > n:
            continue
        r = P.meet(p, q)
        f = R.get(r, q, D)
        for g in D.assign[q]:
            img = f.image(g)
            if g in images and images[g] != img:
                rep.fail("ill-defined on overlap", (g, q))
            images.setdefault(g, img)
    return ChainMap(stage, target, images), rep


def check_colimit_retractions(D: PosetDiagram, R: RetractionSystem) -> ValidationReport:
    """Well-definedness, retraction and restriction properties of the colimit retractions."""
    rep = ValidationReport("colimit retractions")
    top = D.P.max_grade()
    for p in D.P:
        k = D.P.grade[p]
        maps = {}
        for n in range(k, top + 1):
            f, sub = colimit_retraction(D, R, p, n)
            rep.failures.extend(sub.failures)
            for _, w in check_chain_map(f).failures:
                rep.fail("not a chain map", (p, n, w))
            if any(f.image(g) != {g: 1} for g in D.assign[p]):
                rep.fail("not a retraction", (p, n))
            maps[n] = f
        for n in range(k + 1, top + 1):
            lower = maps[n - 1]
            if any(maps[n].image(g) != lower.image(g) for g in lower.source.generators()):
                rep.fail("restriction mismatch", (p, n))
    return rep


# ---------------------------------------------------------------------------
# Builders


def _collapse_retractions(D: PosetDiagram, basepoints: Sequence) -> RetractionSystem:
    """ρ[I, J]: keep coordinates in I, send the rest through the augmentation."""
    maps = {}
    for I, J in D.P.comparable_pairs():
        src, tgt = D.chains(J), D.chains(I)
        drop = [i - 1 for i in J - I]
        images = {}
        for g in D.assign[J]:
            if any(D.factor_degrees[i][g[i]] for i in drop):
                continue
            h = list(g)
            for i in drop:
                h[i] = basepoints[i]
            images[g] = {tuple(h): 1}
        maps[(I, J)] = ChainMap(src, tgt, images)
    return RetractionSystem(maps)


def _boolean_diagram(ambient: ChainComplex, factors: Sequence[ChainComplex]) -> tuple[PosetDiagram, RetractionSystem]:
    m = len(factors)
    P = boolean_lattice(m)
    bps = [F.basepoint for F in factors]
    assign = {
        I: frozenset(g for g in ambient.generators() if all(g[i] == bps[i] for i in range(m) if i + 1 not in I))
        for I in P
    }
    D = PosetDiagram(P, ambient, assign, factor_degrees=[F.degree for F in factors])
    return D, _collapse_retractions(D, bps)


def product_diagram(spaces: Sequence[ChainComplex]) -> tuple[PosetDiagram, RetractionSystem]:
    """Diagram ``I ↦ ∏_{i∈I} X_i`` over ``2^[m]`` with projection retractions."""
    for X in spaces:
        if not X.augmented or X.basepoint is None:
            raise ChainError("product_diagram needs augmented, based complexes")
    ambient = tensor_many(list(spaces))
    return _boolean_diagram(ambient, list(spaces))


def polyprod_diagram(K: SimplicialComplex, pairs: Sequence[BasedPair]) -> tuple[PosetDiagram, RetractionSystem]:
    """Diagram ``I ↦ Z_{K_I}(X_I, A_I)`` (embedded by basepoints) over ``2^[m]``."""
    ambient = polyhedral_chains(K, pairs)
    return _boolean_diagram(ambient, [P.ambient for P in pairs])


def square_identity(D: PosetDiagram, R: RetractionSystem) -> ValidationReport:
    """``ρ[I∩J, I]∘ρ[I, I∪J] = ρ[I∩J, J]∘ρ[J, I∪J]`` for all I, J (Boolean posets)."""
    rep = ValidationReport("retraction square")
    if not isinstance(D.P, BooleanLattice):
        raise ChainError("square identity needs a Boolean lattice")
    for I in D.P:
        for J in D.P:
            lo, hi = I & J, I | J
            a1, a2 = R.get(lo, I, D), R.get(I, hi, D)
            b1, b2 = R.get(lo, J, D), R.get(J, hi, D)
            for g in D.assign[hi]:
                if a1(a2.image(g)) != b1(b2.image(g)):
                    rep.fail("square", (I, J, g))
                    break
    return rep


def perturb(R: RetractionSystem, key, generator, delta: int = 1) -> RetractionSystem:
    """Copy of R with one matrix entry of ``R[key]`` changed by ``delta``."""
    out = R.copy()
    f = out.maps[key]
    img = dict(f.image(generator))
    k = f.source.degree[generator]
    targets = f.target.basis[k] if k < len(f.target.basis) else []
    if not targets:
        raise ChainError("no target generator in that degree to perturb")
    h = targets[0]
    img[h] = img.get(h, 0) + delta
    images = dict(f.images)
    images[generator] = img
    out.maps[key] = ChainMap(f.source, f.target, images)
    return out


# ---------------------------------------------------------------------------
# JSON


def diagram_to_json(D: PosetDiagram, R: RetractionSystem) -> dict:
    """Generator lists per element and dense retraction matrices per comparable pair."""
    from .chains import label_str

    amb = D.ambient
    names = {g: label_str(g) for g in amb.generators()}
    retr = []
    for (p, q), f in sorted(R.maps.items(), key=lambda kv: json.dumps([_el_json(kv[0][0]), _el_json(kv[0][1])])):
        retr.append(
            {
                "p": _el_json(p),
                "q": _el_json(q),
                "d": [f.matrix(k) for k in range(len(f.source.basis))],
            }
        )
    return {
        "poset": D.P.to_json(),
        "ambient": amb.to_json(),
        "assign": {
            json.dumps(_el_json(p)): sorted(names[g] for g in D.assign[p]) for p in D.P
        },
        "retractions": retr,
    }


def diagram_from_json(data: dict) -> tuple[PosetDiagram, RetractionSystem]:
    from .complexes import SimplicialComplex as _SC
    from .polyprod import pair_from_json
    from .ssets import normalized_chains

    builder = data.get("builder")
    if builder == "product":
        from .spaces import space

        return product_diagram([normalized_chains(space(s)) for s in data["spaces"]])
    if builder == "polyprod":
        return polyprod_diagram(_SC.from_json(data["K"]), [pair_from_json(p) for p in data["pairs"]])
    try:
        P = GradedLowerSemilattice.from_json(data["poset"])
        amb = ChainComplex.from_json(data["ambient"])
        amb.augmented = True
        if amb.basepoint is None:
            amb.basepoint = amb.basis[0][0]
        assign = {}
        for key, labels in data["assign"].items():
            assign[_el_key(json.loads(key))] = frozenset(labels)
        D = PosetDiagram(P, amb, assign)
        maps = {}
        for entry in data.get("retractions", []):
            p, q = _el_key(entry["p"]), _el_key(entry["q"])
            maps[(p, q)] = map_from_matrices(D.chains(q), D.chains(p), entry["d"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ChainError(f"malformed diagram JSON: {exc}") from exc
    return D, RetractionSystem(maps)


def _el_key(e):
    return frozenset(e) if isinstance(e, list) else e


def summand_homologies(D: PosetDiagram, n: int) -> list[tuple[object, Homology]]:
    return [(p, reduced_homology(summand(D, p))) for p in D.P if D.P.grade[p] <= n]
