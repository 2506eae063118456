import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import ZZ, Matrix
from sympy.matrices.normalforms import invariant_factors as sympy_invariant_factors

from susplit.chains import (
    ChainComplex,
    ChainError,
    ChainMap,
    Group,
    Homology,
    SubcomplexError,
    based_subcomplex,
    check_chain_map,
    closure,
    compose,
    determinant,
    elementary_divisors,
    euler_characteristic,
    homology,
    identity_map,
    inclusion_map,
    invariant_factors,
    is_identity,
    map_from_matrices,
    matmul,
    point,
    quotient,
    reduced_euler,
    reduced_homology,
    smith_normal_form,
    subcomplex,
    suspension,
    tensor,
    verify,
)
from susplit.polyprod import circle

from conftest import circle2, rp2_complex, scrambled_complexes

matrices = st.integers(0, 5).flatmap(
    lambda r: st.integers(0, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def sympy_torsion(M):
    if not M or not M[0]:
        return ()
    facs = sympy_invariant_factors(Matrix(M), domain=ZZ)
    return tuple(int(abs(f)) for f in facs if abs(f) > 1)


def sympy_rank(M):
    return Matrix(M).rank() if M and M[0] else 0


# -- Smith normal form ----------------------------------------------------


def test_snf_small_examples():
    U, D, V = smith_normal_form([[2]])
    assert D == [[2]]
    U, D, V = smith_normal_form([[1, 0], [0, 0]])
    assert D == [[1, 0], [0, 0]]
    U, D, V = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert [D[i][i] for i in range(3)] == [2, 6, 12]
    assert matmul(matmul(U, [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]), V) == D


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_snf_against_sympy(M):
    U, D, V = smith_normal_form(M)
    r, c = len(M), len(M[0]) if M else 0
    if r:
        assert abs(determinant(U)) == 1
    if c:
        assert abs(determinant(V)) == 1
    if r and c:
        assert matmul(matmul(U, M), V) == D
    diag = [D[i][i] for i in range(min(r, c))]
    assert all(D[i][j] == 0 for i in range(r) for j in range(c) if i != j)
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert diag[: len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert len(nz) == sympy_rank(M)
    assert invariant_factors(nz) == sympy_torsion(M)


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_sparse_divisors_match_dense(M):
    cols = {j: {i: M[i][j] for i in range(len(M))} for j in range(len(M[0]) if M else 0)}
    divs = elementary_divisors(cols)
    assert len(divs) == sympy_rank(M)
    assert invariant_factors(divs) == sympy_torsion(M)


def test_invariant_factors_canonical():
    assert invariant_factors([4, 6]) == (2, 12)
    assert invariant_factors([1, -1, 0]) == ()
    assert invariant_factors([2, 3]) == (6,)


# -- complexes and homology ----------------------------------------------


def test_verify_catches_bad_boundary():
    T = tensor(circle2(), circle2())
    assert verify(T).ok
    g = next(x for x in T.basis[2])
    bd = dict(T.boundary)
    bd[g] = {h: (c if i else -c) for i, (h, c) in enumerate(T.boundary[g].items())}
    bad = ChainComplex(T.basis, bd)
    rep = verify(bad)
    assert not rep.ok
    assert rep.failures[0][1][1] == g
    assert verify(ChainComplex([])).ok


def test_construction_rejects_wrong_degree():
    with pytest.raises(ChainError):
        ChainComplex([["a"], ["e"]], {"e": {"e": 1}})
    with pytest.raises(ChainError):
        ChainComplex([["a"], ["e"]], basepoint="e")


def test_circle_and_rp2(rp2):
    assert homology(circle2()) == Homology.from_ranks([1, 1])
    assert reduced_homology(circle2()) == Homology.from_ranks([0, 1])
    H = homology(rp2)
    assert H == Homology((Group(1), Group(0, (2,))))
    assert str(H[1]) == "Z/2"
    assert euler_characteristic(rp2) == 1


def test_rp2_torsion_from_sympy(rp2):
    """Torsion read directly off the boundary matrix by an independent SNF."""
    assert sympy_torsion(rp2.matrix(2)) == (2,)
    assert invariant_factors(elementary_divisors({g: rp2.boundary[g] for g in rp2.basis[2]})) == (2,)


def test_torus_by_tensor():
    T = tensor(circle(), circle())
    assert [len(b) for b in T.basis] == [1, 2, 1]
    assert homology(T) == Homology.from_ranks([1, 2, 1])


def test_tensor_with_point_is_identity(rp2):
    assert homology(tensor(rp2, point())) == homology(rp2)
    assert homology(tensor(point(), circle2())) == homology(circle2())


def test_koszul_signs_give_chain_complex(rp2):
    T = tensor(rp2, tensor(circle2(), rp2))
    assert verify(T).ok


def test_subcomplex_and_quotient():
    C = circle2()
    arc = based_subcomplex(C, {"a", "b", "e"}, "a")
    assert homology(subcomplex(C, arc)) == Homology.from_ranks([1])
    Q = quotient(C, arc)
    assert homology(Q) == Homology.from_ranks([1, 1])
    assert reduced_homology(Q) == Homology.from_ranks([0, 1])
    full = based_subcomplex(C, set(C.generators()), "a")
    assert homology(quotient(C, full)) == homology(point())


def test_open_selection_is_rejected():
    C = circle2()
    with pytest.raises(SubcomplexError) as ei:
        based_subcomplex(C, {"a", "e"}, "a")
    assert ei.value.witness == "e"
    assert closure(C, {"e"}) == {"a", "b", "e"}


def test_quotient_euler_identity(rp2):
    S = based_subcomplex(rp2, closure(rp2, {(1, 2), (2, 3)}), (1,))
    Q = quotient(rp2, S)
    assert verify(Q).ok
    assert euler_characteristic(rp2) == euler_characteristic(subcomplex(rp2, S)) + euler_characteristic(Q) - 1


def test_suspension():
    assert reduced_homology(suspension(circle2())) == Homology.from_ranks([0, 0, 1])
    assert reduced_homology(suspension(rp2_complex())) == Homology((Group(), Group(), Group(0, (2,))))
    with pytest.raises(ChainError):
        suspension(ChainComplex([["a"]]))


def test_point_and_euler():
    assert homology(point()) == Homology.from_ranks([1])
    assert reduced_euler(point()) == 0
    with pytest.raises(ChainError):
        reduced_homology(ChainComplex([["a"]]))


def test_json_round_trip_with_big_coefficients():
    big = 2**70
    C = ChainComplex([["a", "b"], ["e"]], {"e": {"a": big, "b": -big}}, augmented=True, basepoint="a")
    data = json.loads(json.dumps(C.to_json()))
    assert data["d"][1][0][0] == str(big)
    D = ChainComplex.from_json(data)
    assert D.boundary == C.boundary and D.basepoint == "a" and D.augmented
    with pytest.raises(ChainError):
        ChainComplex.from_json({"basis": [["a"], ["e"]], "d": [[], [[1], [2]]]})


# -- chain maps -----------------------------------------------------------


def test_maps_compose_and_check():
    C = circle2()
    f = identity_map(C)
    assert is_identity(compose(f, f))
    assert check_chain_map(f).ok
    swap = ChainMap(C, C, {"a": {"b": 1}, "b": {"a": 1}, "e": {"f": 1}, "f": {"e": 1}})
    assert check_chain_map(swap).ok
    assert is_identity(compose(swap, swap))
    broken = ChainMap(C, C, {"a": {"a": 1}, "b": {"b": 1}, "e": {"f": 1}})
    rep = check_chain_map(broken)
    assert not rep.ok and rep.failures[0][1][0] == "e"


def test_inclusion_and_matrices():
    C = circle2()
    S = subcomplex(C, based_subcomplex(C, {"a", "b", "e"}, "a"))
    i = inclusion_map(S, C)
    assert check_chain_map(i).ok
    g = map_from_matrices(C, C, [[[0, 1], [1, 0]], [[0, 1], [1, 0]]])
    assert g.matrix(0) == [[0, 1], [1, 0]]
    with pytest.raises(ChainError):
        map_from_matrices(C, C, [[[1]]])
    with pytest.raises(ChainError):
        ChainMap(C, C, {"a": {"e": 1}})


# -- randomized oracles ----------------------------------------------------


@given(scrambled_complexes())
@settings(max_examples=120, deadline=None)
def test_homology_of_scrambled_elementary_complexes(case):
    C, expected = case
    assert verify(C).ok
    assert homology(C) == expected
    assert euler_characteristic(C) == expected.euler()


def kunneth(HA, HB):
    """Integral Kunneth formula, including the Tor term."""
    from math import gcd

    n = len(HA.groups) + len(HB.groups)
    out = []
    for k in range(n):
        rank, tors = 0, []
        for i in range(k + 1):
            a, b = HA[i], HB[k - i]
            rank += a.rank * b.rank
            tors += [t for t in a.torsion for _ in range(b.rank)]
            tors += [t for t in b.torsion for _ in range(a.rank)]
            tors += [gcd(s, t) for s in a.torsion for t in b.torsion]
        for i in range(k):
            a, b = HA[i], HB[k - 1 - i]
            tors += [gcd(s, t) for s in a.torsion for t in b.torsion]
        out.append(Group(rank, invariant_factors(tors)))
    return Homology(tuple(out))


@given(scrambled_complexes(4), scrambled_complexes(3))
@settings(max_examples=60, deadline=None)
def test_kunneth(a, b):
    (A, HA), (B, HB) = a, b
    T = tensor(A, B)
    assert verify(T).ok
    assert homology(T) == kunneth(HA, HB)
    assert euler_characteristic(T) == euler_characteristic(A) * euler_characteristic(B)


def test_kunneth_rp2_squared(rp2):
    H = homology(tensor(rp2, rp2))
    assert H == kunneth(homology(rp2), homology(rp2))
    assert H[1].torsion == (2, 2) and H[2].torsion == (2,) and H[3].torsion == (2,)
