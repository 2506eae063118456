import random

import pytest
from hypothesis import strategies as st

from susplit.chains import ChainComplex, Group, Homology, invariant_factors
from susplit.complexes import from_facets
from susplit.spaces import RP2_FACETS


def circle2() -> ChainComplex:
    """Circle with two vertices and two edges."""
    return ChainComplex(
        [["a", "b"], ["e", "f"]],
        {"e": {"b": 1, "a": -1}, "f": {"a": 1, "b": -1}},
        augmented=True,
        basepoint="a",
    )


def rp2_complex() -> ChainComplex:
    """Simplicial chains of the 6-vertex RP^2, built directly from the facets."""
    from itertools import combinations

    faces = set()
    for f in RP2_FACETS:
        for r in (1, 2, 3):
            faces.update(combinations(f, r))
    basis = [sorted(x for x in faces if len(x) == k) for k in (1, 2, 3)]
    boundary = {}
    for k in (1, 2):
        for s in basis[k]:
            boundary[s] = {s[:i] + s[i + 1 :]: (-1) ** i for i in range(len(s))}
    return ChainComplex(basis, boundary, augmented=True, basepoint=(1,))


def random_unimodular(n: int, rng: random.Random, steps: int = 8) -> list[list[int]]:
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        q = rng.choice([-2, -1, 1, 2])
        U[i] = [x + q * y for x, y in zip(U[i], U[j])]
    if n and rng.random() < 0.5:
        U[0] = [-x for x in U[0]]
    return U


def inverse_unimodular(U):
    """Exact inverse via fraction-free Gauss-Jordan (entries stay integral)."""
    from fractions import Fraction

    n = len(U)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(U)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    out = [[int(x) for x in row[n:]] for row in A]
    assert all(x.denominator == 1 for row in A for x in row[n:])
    return out


def elementary_complex(pieces, rng: random.Random):
    """Direct sum of ``Z`` (free) and ``Z --t--> Z`` pieces, then scrambled.

    ``pieces`` is a list of ("free", k) or ("cyl", k, t) where the cylinder
    has generators in degrees k+1 -> k.  Returns (complex, expected homology).
    """
    from susplit.chains import matmul

    gens: dict[int, list] = {}
    bd: dict = {}
    ranks: dict[int, int] = {}
    tors: dict[int, list] = {}
    for idx, pc in enumerate(pieces):
        if pc[0] == "free":
            k = pc[1]
            gens.setdefault(k, []).append(f"f{idx}")
            ranks[k] = ranks.get(k, 0) + 1
        else:
            _, k, t = pc
            lo, hi = f"c{idx}_{k}", f"c{idx}_{k + 1}"
            gens.setdefault(k, []).append(lo)
            gens.setdefault(k + 1, []).append(hi)
            bd[hi] = {lo: t}
            if t == 0:
                ranks[k] = ranks.get(k, 0) + 1
                ranks[k + 1] = ranks.get(k + 1, 0) + 1
            elif abs(t) > 1:
                tors.setdefault(k, []).append(abs(t))
    top = max(gens, default=-1)
    basis = [gens.get(k, []) for k in range(top + 1)]
    # change of basis: new generator j in degree k = sum_i U[i][j] old_i
    mats = {}
    for k in range(top + 1):
        n = len(basis[k])
        U = random_unimodular(n, rng)
        mats[k] = (U, inverse_unimodular(U))
    new_basis = [[f"g{k}_{j}" for j in range(len(basis[k]))] for k in range(top + 1)]
    boundary = {}
    for k in range(1, top + 1):
        old_cols, old_rows = basis[k], basis[k - 1]
        D = [[bd.get(c, {}).get(r, 0) for c in old_cols] for r in old_rows]
        if not old_rows or not old_cols:
            for g in new_basis[k]:
                boundary[g] = {}
            continue
        # new d = Uinv_{k-1} D U_k
        Dn = matmul(matmul(mats[k - 1][1], D), mats[k][0])
        for j, g in enumerate(new_basis[k]):
            boundary[g] = {new_basis[k - 1][i]: Dn[i][j] for i in range(len(Dn)) if Dn[i][j]}
    C = ChainComplex(new_basis, boundary)
    H = Homology(
        tuple(Group(ranks.get(k, 0), invariant_factors(tors.get(k, []))) for k in range(top + 1))
    )
    return C, H


piece = st.one_of(
    st.tuples(st.just("free"), st.integers(0, 3)),
    st.tuples(st.just("cyl"), st.integers(0, 2), st.sampled_from([0, 1, -1, 2, 3, 4, 6])),
)


@st.composite
def scrambled_complexes(draw, max_pieces: int = 6):
    pieces = draw(st.lists(piece, min_size=1, max_size=max_pieces))
    seed = draw(st.integers(0, 2**16))
    return elementary_complex(pieces, random.Random(seed))


@st.composite
def small_complexes(draw, max_m: int = 4):
    m = draw(st.integers(1, max_m))
    facets = draw(
        st.lists(st.frozensets(st.integers(1, m), min_size=1, max_size=m), min_size=1, max_size=5)
    )
    return from_facets(m, facets)


@pytest.fixture
def circle():
    from susplit.polyprod import circle as _c

    return _c()


@pytest.fixture
def rp2():
    return rp2_complex()


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
