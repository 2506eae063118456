"""Diagonal arrangements in powers of a simplicial set.

Polydiagonals (coordinates equal within the blocks of a partition of [m])
are the single primitive: the diagonal subspace of a face σ is the
polydiagonal whose only non-singleton block is ``[m] - σ``, and the
degeneracy strata of ``X^n`` are unions of consecutive-run polydiagonals.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .chains import Homology, direct_sum, quotient, reduced_homology, subcomplex
from .complexes import SimplicialComplex
from .report import HypothesisError, Report
from .ssets import (
    FiniteSSet,
    SimplexRef,
    SSetError,
    SSubset,
    check_closure,
    is_connected,
    normalized_chains,
    simplicial_subset,
    smash_power_homology,
)


@dataclass(frozen=True)
class Partition:
    """Blocks covering ``[m]``, sorted by their least element."""

    blocks: tuple[frozenset, ...]

    @classmethod
    def of(cls, m: int, blocks: Iterable[Iterable[int]]) -> Partition:
        bs = [frozenset(b) for b in blocks]
        if any(not b for b in bs):
            raise ValueError("partition blocks must be nonempty")
        seen: set = set()
        for b in bs:
            if seen & b:
                raise ValueError("partition blocks overlap")
            seen |= b
        if seen != set(range(1, m + 1)):
            raise ValueError(f"blocks do not cover [{m}] exactly")
        return cls(tuple(sorted(bs, key=min)))

    @classmethod
    def discrete(cls, m: int) -> Partition:
        return cls.of(m, [{i} for i in range(1, m + 1)])

    @classmethod
    def for_face(cls, m: int, sigma: Iterable[int]) -> Partition:
        """One block ``[m] - σ`` plus singletons for σ."""
        sigma = frozenset(sigma)
        rest = frozenset(range(1, m + 1)) - sigma
        return cls.of(m, ([rest] if rest else []) + [{i} for i in sigma])

    @classmethod
    def consecutive(cls, m: int, merges: Iterable[int]) -> Partition:
        """Runs of ``[m]`` where ``i`` and ``i+1`` are joined for each i in merges."""
        merges = set(merges)
        blocks, cur = [], [1]
        for i in range(1, m):
            if i in merges:
                cur.append(i + 1)
            else:
                blocks.append(cur)
                cur = [i + 1]
        blocks.append(cur)
        return cls.of(m, blocks if m else [])

    @property
    def m(self) -> int:
        return sum(len(b) for b in self.blocks)

    def __str__(self) -> str:
        return "|".join(",".join(map(str, sorted(b))) for b in self.blocks)


def _block_pred(partition: Partition):
    idx = [sorted(i - 1 for i in b) for b in partition.blocks if len(b) > 1]

    def pred(x) -> bool:
        return all(x[b[0]] == x[j] for b in idx for j in b[1:])

    return pred


def partition_diagonal(X: FiniteSSet, m: int, partition: Partition) -> SSubset:
    if partition.m != m:
        raise ValueError("partition size does not match m")
    return simplicial_subset(X.power(m), _block_pred(partition))


def diagonal_subspace(X: FiniteSSet, m: int, sigma: Iterable[int]) -> SSubset:
    return partition_diagonal(X, m, Partition.for_face(m, sigma))


def thin_diagonal(X: FiniteSSet, m: int) -> SSubset:
    return partition_diagonal(X, m, Partition.of(m, [range(1, m + 1)]))


def union(parts: Sequence[SSubset]) -> SSubset:
    out = parts[0]
    for p in parts[1:]:
        out = out.union(p)
    return out


def hypothesis_holds(K: SimplicialComplex) -> bool:
    return 2 * (K.dimension + 1) < K.m


def _require_hypothesis(K: SimplicialComplex) -> None:
    if not hypothesis_holds(K):
        raise HypothesisError(
            f"need 2(dim K + 1) < m, got 2({K.dimension} + 1) = {2 * (K.dimension + 1)} "
            f"and m = {K.m}"
        )


@dataclass
class ArrangementModel:
    X: FiniteSSet
    m: int
    K: SimplicialComplex
    carrier: SSubset

    @property
    def power(self) -> FiniteSSet:
        return self.carrier.parent

    def chains(self):
        return normalized_chains(self.carrier)


def diagonal_arrangement(X: FiniteSSet, K: SimplicialComplex) -> ArrangementModel:
    """``Δ_K(X)``: the union of the diagonal subspaces of all faces of K."""
    if K.m < 1:
        raise HypothesisError("arrangement needs m >= 1")
    ghosts = K.ghost_vertices()
    if ghosts and not K.is_void_of_vertices():
        raise HypothesisError(
            f"vertices {ghosts} lie in no face; normalize the hypergraph first "
            "(complexes.normalize_hypergraph)"
        )
    if not is_connected(X):
        raise HypothesisError("X must be connected")
    parts = [diagonal_subspace(X, K.m, f) for f in K.facets]
    carrier = union(parts)
    check_closure(carrier.parent, carrier.membership)
    return ArrangementModel(X, K.m, K, carrier)


@lru_cache(maxsize=None)
def _smash_cached(X: FiniteSSet, k: int) -> Homology:
    return smash_power_homology(X, k)


def second_decomp_predicted(X: FiniteSSet, K: SimplicialComplex) -> Homology:
    """Sum over σ ∈ K of H̃(X^∧|σ|) + H̃(X^∧(|σ|+1)), with X^∧0 a point."""
    sizes = Counter(len(f) for f in K.faces)
    total = Homology()
    for k, mult in sorted(sizes.items()):
        h = _smash_cached(X, k) + _smash_cached(X, k + 1)
        for _ in range(mult):
            total = total + h
    return total


def second_decomp_verify(X: FiniteSSet, K: SimplicialComplex) -> Report:
    _require_hypothesis(K)
    model = diagonal_arrangement(X, K)
    lhs = reduced_homology(model.chains())
    rhs = second_decomp_predicted(X, K)
    notes = []
    if frozenset() in K.faces:
        notes.append("the empty face contributes the thin diagonal and the summand pt ∨ X")
    return Report(
        "diagonal arrangement splitting",
        lhs,
        rhs,
        left_name="arrangement",
        right_name="wedge of smash powers",
        notes=notes,
        extra={
            "complex": K.to_json(),
            "space": X.name,
            "m": K.m,
            "carrier_cells": model.carrier.counts(),
        },
    )


# ---------------------------------------------------------------------------
# The majority projection


def majority(coords: Sequence[SimplexRef]):
    """The value occupying more than half the coordinates, or None."""
    value, count = Counter(coords).most_common(1)[0]
    return value if 2 * count > len(coords) else None


def majority_projection(model: ArrangementModel, simplex) -> SimplexRef:
    _require_hypothesis(model.K)
    coords = model.power.expand(simplex) if isinstance(simplex, SimplexRef) else tuple(simplex)
    value = majority(coords)
    if value is None:
        raise HypothesisError(f"no majority coordinate in {simplex!r}")
    return value


def zk_fiber(model: ArrangementModel) -> SSubset:
    """``Z_K(X, *)`` inside ``X^m``: simplices whose non-basepoint coordinates form a face."""
    X, faces = model.X, model.K.faces

    def pred(x) -> bool:
        base = X.base(x[0].degree)
        return frozenset(i + 1 for i, c in enumerate(x) if c != base) in faces

    return simplicial_subset(model.power, pred)


def fibration_audit(model: ArrangementModel) -> Report:
    """Check that the majority projection is simplicial and that its basepoint fibre is Z_K(X,*)."""
    from .polyprod import based_space, dj_census

    _require_hypothesis(model.K)
    X, Pw = model.X, model.power
    failures = []
    fiber = set()
    for x in model.carrier.membership:
        k = Pw.degree[x]
        px = majority(x)
        if px is None:
            failures.append(f"no majority at {x!r}")
            continue
        if px == X.base(k):
            fiber.add(x)
        for i in range(k + 1 if k else 0):
            lhs = majority(Pw.tuple_face(x, i))
            rhs = X.face(px, i)
            if lhs != rhs:
                failures.append(f"π∘d_{i} ≠ d_{i}∘π at {x!r}")
    zk = zk_fiber(model)
    if not zk.membership <= model.carrier.membership:
        failures.append("Z_K(X,*) is not contained in the arrangement")
    if fiber != set(zk.membership):
        extra = sorted(map(repr, set(zk.membership) ^ fiber))[:3]
        failures.append(f"fibre over the basepoint differs from Z_K(X,*): {extra}")
    fiber_h = reduced_homology(normalized_chains(zk))
    Xc = normalized_chains(X)
    census = dj_census(model.K, based_space(Xc))
    return Report(
        "majority fibration",
        fiber_h,
        direct_sum(h for _, h in census),
        left_name="fibre Z_K(X,*)",
        right_name="census of smash powers",
        failures=failures,
        extra={"fiber_cells": zk.counts(), "carrier_cells": model.carrier.counts()},
    )


# ---------------------------------------------------------------------------
# Euler characteristics


def euler_complement(chi_X: int, n: int, m: int, K: SimplicialComplex) -> int:
    """Euler characteristic of ``X^m - Δ_K(X)`` for a closed connected n-manifold X."""
    if K.m != m:
        raise HypothesisError(f"complex has {K.m} vertices but m = {m}")
    _require_hypothesis(K)
    s = 1 + sum((chi_X - 1) ** len(f) for f in K.faces if f)
    return chi_X**m - (-1) ** (m * n) * chi_X * s


def euler_arrangement(chi_X: int, K: SimplicialComplex) -> int:
    """χ(Δ_K(X)) by inclusion-exclusion over facets, using Δ_σ ∩ Δ_τ = Δ_{σ∩τ} and Δ_σ ≅ X^{|σ|+1}."""
    _require_hypothesis(K)
    facets = K.facets
    total = 0
    for r in range(1, len(facets) + 1):
        for S in combinations(facets, r):
            inter = frozenset.intersection(*S)
            total += (-1) ** (r + 1) * chi_X ** (len(inter) + 1)
    return total


def euler_decomposition(X: FiniteSSet, K: SimplicialComplex) -> int:
    """1 + Σ_σ [χ̃(X^∧|σ|) + χ̃(X^∧(|σ|+1))] from computed smash-power homology."""
    sizes = Counter(len(f) for f in K.faces)
    return 1 + sum(
        mult * (_smash_cached(X, k).euler() + _smash_cached(X, k + 1).euler())
        for k, mult in sizes.items()
    )


def euler_cross_check(X: FiniteSSet, K: SimplicialComplex, manifold_dim: int | None = None) -> dict:
    _require_hypothesis(K)
    chi = X.euler()
    model = diagonal_arrangement(X, K)
    values = {
        "inclusion_exclusion": euler_arrangement(chi, K),
        "carrier_cells": model.carrier.euler(),
        "decomposition": euler_decomposition(X, K),
    }
    out = {
        "check": "euler cross-check",
        "chi_X": chi,
        "values": values,
        "status": "PASS" if len(set(values.values())) == 1 else "FAIL",
    }
    if manifold_dim is not None:
        out["complement"] = euler_complement(chi, manifold_dim, K.m, K)
        out["complement_via_duality"] = chi**K.m - (-1) ** (K.m * manifold_dim) * values["carrier_cells"]
        if out["complement"] != out["complement_via_duality"]:
            out["status"] = "FAIL"
    if out["status"] == "FAIL":
        ref = values["carrier_cells"]
        out["witnesses"] = [
            {"quantity": f"χ via {k}", "value": v, "carrier_cells": ref} for k, v in values.items() if v != ref
        ]
        if out.get("complement") != out.get("complement_via_duality"):
            out["witnesses"].append(
                {"quantity": "χ of complement", "value": out["complement"], "via_duality": out["complement_via_duality"]}
            )
    return out


# ---------------------------------------------------------------------------
# Degeneracy strata of X^n


def degeneracy_stratum(X: FiniteSSet, n: int, k: int) -> SSubset:
    """Points of ``X^n`` with at least k consecutive equalities; k = n gives the basepoint."""
    if n < 1 or not 0 <= k <= n:
        raise SSetError(f"stratum S^{k} undefined for n = {n}")
    Pw = X.power(n)
    if k == n:
        return simplicial_subset(Pw, lambda x: x == Pw.basepoint)
    parts = [
        partition_diagonal(X, n, Partition.consecutive(n, T)) for T in combinations(range(1, n), k)
    ]
    return union(parts)


def abbcg_verify(X: FiniteSSet, n: int) -> Report:
    """H̃(X^n) against the sum of H̃(S^k / S^{k+1}) for k = 0..n-1."""
    if n < 1:
        raise SSetError("power must be >= 1")
    if not is_connected(X):
        raise HypothesisError("X must be connected")
    Pw = X.power(n)
    lhs = reduced_homology(normalized_chains(Pw))
    strata = [degeneracy_stratum(X, n, k) for k in range(n + 1)]
    failures = []
    if strata[0].membership != frozenset(Pw.ids()):
        failures.append("S^0 ≠ X^n")
    if strata[n - 1].membership != thin_diagonal(X, n).membership:
        failures.append("S^{n-1} ≠ thin diagonal")
    for k in range(n):
        if not strata[k + 1] <= strata[k]:
            failures.append(f"S^{k + 1} ⊄ S^{k}")
    parts = []
    for k in range(n):
        Ck = normalized_chains(strata[k])
        parts.append(reduced_homology(quotient(Ck, strata[k + 1].membership)))
    return Report(
        "simplicial strata splitting",
        lhs,
        direct_sum(parts),
        left_name="X^n",
        right_name="sum of stratum quotients",
        failures=failures,
        extra={
            "space": X.name,
            "n": n,
            "quotients": [h.to_json() for h in parts],
            "stratum_cells": [s.counts() for s in strata],
        },
    )


def carrier_subcomplex(model: ArrangementModel):
    return subcomplex(normalized_chains(model.power), model.carrier.membership)
