from itertools import combinations

import pytest

from susplit.chains import Homology, reduced_homology
from susplit.complexes import discrete, from_facets, full_simplex, skeleton, void
from susplit.corpus import complex_corpus
from susplit.diagonal import (
    Partition,
    abbcg_verify,
    degeneracy_stratum,
    diagonal_arrangement,
    diagonal_subspace,
    euler_arrangement,
    euler_complement,
    euler_cross_check,
    euler_decomposition,
    fibration_audit,
    hypothesis_holds,
    majority,
    majority_projection,
    partition_diagonal,
    second_decomp_predicted,
    second_decomp_verify,
    thin_diagonal,
    zk_fiber,
)
from susplit.report import HypothesisError
from susplit.spaces import space
from susplit.ssets import FiniteSSet, SSetError, interval_sset, normalized_chains, point_sset, sphere_sset, sset_homology, wedge

S1 = sphere_sset(1)
SKEL0_D2 = skeleton(full_simplex(3), 0)


def test_partitions():
    assert str(Partition.of(3, [{2, 3}, {1}])) == "1|2,3"
    assert Partition.for_face(4, {1, 3}).blocks == (frozenset({1}), frozenset({2, 4}), frozenset({3}))
    assert Partition.for_face(2, {1, 2}) == Partition.discrete(2)
    assert Partition.consecutive(4, {1, 3}).blocks == (frozenset({1, 2}), frozenset({3, 4}))
    for bad in ([{1}, {1, 2}], [{1}], [set(), {1, 2}]):
        with pytest.raises(ValueError):
            Partition.of(2, bad)


def test_polydiagonals():
    P = S1.power(3)
    assert partition_diagonal(S1, 3, Partition.discrete(3)).membership == frozenset(P.ids())
    thin = thin_diagonal(S1, 3)
    assert sset_homology(thin) == sset_homology(S1)
    D = partition_diagonal(S1, 3, Partition.of(3, [{2, 3}, {1}]))
    assert sset_homology(D) == sset_homology(S1.power(2))
    with pytest.raises(ValueError):
        partition_diagonal(S1, 2, Partition.discrete(3))


@pytest.mark.parametrize("X", [S1, sphere_sset(2), interval_sset()], ids=["s1", "s2", "interval"])
def test_face_diagonals_intersect_as_faces(X):
    m = 3
    faces = [frozenset(c) for r in range(m + 1) for c in combinations(range(1, m + 1), r)]
    D = {f: diagonal_subspace(X, m, f) for f in faces}
    for a in faces:
        for b in faces:
            if len(a | b) < m:
                assert D[a].intersection(D[b]).membership == D[a & b].membership
            if a <= b:
                assert D[a] <= D[b]
    assert D[frozenset()].membership == thin_diagonal(X, m).membership


def test_intersection_needs_a_common_free_coordinate():
    # with σ ∪ τ = [m] both diagonals can be everything while Δ_{σ∩τ} is proper
    a, b = frozenset({1, 2}), frozenset({1, 3})
    full = frozenset(S1.power(3).ids())
    assert diagonal_subspace(S1, 3, a).membership == full == diagonal_subspace(S1, 3, b).membership
    assert diagonal_subspace(S1, 3, a & b).membership != full


def test_arrangement_of_void_is_thin_diagonal():
    model = diagonal_arrangement(S1, void(2))
    assert model.carrier.membership == thin_diagonal(S1, 2).membership


def test_three_subtori():
    model = diagonal_arrangement(S1, SKEL0_D2)
    assert model.carrier.euler() == 0
    assert reduced_homology(model.chains()) == Homology.from_ranks([0, 4, 3])


def test_braid_carrier_is_fat_diagonal():
    K = skeleton(full_simplex(4), 1)
    model = diagonal_arrangement(S1, K)
    Pw = S1.power(4)
    brute = {x for x in Pw.ids() if any(x[i] == x[j] for i, j in combinations(range(4), 2))}
    assert model.carrier.membership == brute
    assert not hypothesis_holds(K)


def test_arrangement_rejections():
    with pytest.raises(HypothesisError):
        diagonal_arrangement(S1, from_facets(3, [{1}, {2}]))
    two_points = FiniteSSet([["a", "b"]], {}, "a")
    with pytest.raises(HypothesisError):
        diagonal_arrangement(two_points, discrete(3))
    with pytest.raises(HypothesisError):
        diagonal_arrangement(S1, void(0))


def test_hypothesis_gate():
    K = skeleton(full_simplex(3), 1)
    assert not hypothesis_holds(K)
    with pytest.raises(HypothesisError):
        second_decomp_verify(S1, K)
    with pytest.raises(HypothesisError):
        euler_complement(2, 2, 3, K)
    assert hypothesis_holds(SKEL0_D2) and hypothesis_holds(skeleton(full_simplex(5), 1))


def test_predicted_profiles():
    assert second_decomp_predicted(S1, void(2)) == Homology.from_ranks([0, 1])
    assert second_decomp_predicted(S1, SKEL0_D2) == Homology.from_ranks([0, 4, 3])
    assert second_decomp_predicted(S1, skeleton(full_simplex(5), 1)) == Homology.from_ranks([0, 6, 15, 10])


@pytest.mark.parametrize(
    "X, K",
    [
        (S1, void(2)),
        (S1, SKEL0_D2),
        (sphere_sset(2), SKEL0_D2),
        (wedge(S1, S1), SKEL0_D2),
        (S1, from_facets(5, [{1, 2}, {3}, {4}, {5}])),
    ],
    ids=["void", "s1_skel0", "s2_skel0", "wedge_skel0", "s1_m5_mixed"],
)
def test_second_decomposition(X, K):
    rep = second_decomp_verify(X, K)
    assert rep.ok, rep.summary()


def test_majority():
    a, b = S1.ref("S1"), S1.base(1)
    assert majority((a, a, a)) == a
    assert majority((a, a, b)) == a
    assert majority((a, b)) is None
    model = diagonal_arrangement(S1, SKEL0_D2)
    assert majority_projection(model, (a, a, b)) == a
    x = next(x for x in model.carrier.membership if S1.power(3).degree[x] == 1)
    assert majority_projection(model, S1.power(3).ref(x)) == majority(x)


def test_fibration_audit():
    model = diagonal_arrangement(S1, SKEL0_D2)
    rep = fibration_audit(model)
    assert rep.ok, rep.failures
    fiber = zk_fiber(model)
    assert reduced_homology(normalized_chains(fiber)) == Homology.from_ranks([0, 3])
    rep2 = fibration_audit(diagonal_arrangement(sphere_sset(2), SKEL0_D2))
    assert rep2.ok


def test_euler_formulas():
    assert euler_complement(2, 2, 3, SKEL0_D2) == 8 - 2 * (1 + 3)
    assert euler_complement(2, 2, 5, skeleton(full_simplex(5), 1)) == 32 - 2 * (1 + 5 + 10)
    assert euler_complement(2, 2, 5, skeleton(full_simplex(5), 1)) == 0
    assert euler_arrangement(2, void(2)) == 2
    assert euler_arrangement(0, SKEL0_D2) == 0
    with pytest.raises(HypothesisError):
        euler_complement(2, 2, 4, SKEL0_D2)


def brute_carrier_euler(chi, K):
    """χ of Δ_K by inclusion-exclusion over all faces via Möbius inversion on the face poset."""
    # χ(∪ Δ_σ) over facets equals Σ over nonempty facet families; cross-check with all faces
    fs = K.facets
    total = 0
    for r in range(1, len(fs) + 1):
        for S in combinations(fs, r):
            total += (-1) ** (r + 1) * chi ** (len(frozenset.intersection(*S)) + 1)
    return total


@pytest.mark.parametrize("name", sorted(complex_corpus()))
def test_euler_vanishes_for_chi_zero(name):
    K = complex_corpus()[name]
    for n in (1, 3):
        if hypothesis_holds(K):
            assert euler_complement(0, n, K.m, K) == 0
        else:
            with pytest.raises(HypothesisError):
                euler_complement(0, n, K.m, K)


def test_corpus_has_hypothesis_instances():
    assert sum(hypothesis_holds(K) for K in complex_corpus().values()) >= 3


@pytest.mark.parametrize("sp", ["s1", "s2"])
def test_euler_cross_check(sp):
    X = space(sp)
    cases = [SKEL0_D2, void(2)] + ([from_facets(5, [{1, 2}, {3}, {4}, {5}])] if sp == "s1" else [])
    for K in cases:
        out = euler_cross_check(X, K, manifold_dim=int(sp[1:]))
        assert out["status"] == "PASS", out
        assert out["values"]["inclusion_exclusion"] == brute_carrier_euler(X.euler(), K)
        assert euler_decomposition(X, K) == out["values"]["carrier_cells"]


def test_strata():
    S = degeneracy_stratum(S1, 3, 0)
    assert S.membership == frozenset(S1.power(3).ids())
    S11 = degeneracy_stratum(S1, 3, 1)
    brute = {x for x in S1.power(3).ids() if x[0] == x[1] or x[1] == x[2]}
    assert S11.membership == brute
    assert S11.euler() == 0
    assert degeneracy_stratum(S1, 3, 2).membership == thin_diagonal(S1, 3).membership
    assert len(degeneracy_stratum(S1, 3, 3)) == 1
    with pytest.raises(SSetError):
        degeneracy_stratum(S1, 2, 3)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_abbcg(n):
    rep = abbcg_verify(S1, n)
    assert rep.ok, rep.summary()
    if n == 2:
        assert rep.left == Homology.from_ranks([0, 2, 1])


def test_abbcg_other_spaces():
    assert abbcg_verify(sphere_sset(2), 2).ok
    assert abbcg_verify(point_sset(), 2).ok
