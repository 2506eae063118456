"""Exact integral chain algebra.

Chain complexes are stored sparsely: every generator (an arbitrary hashable
label) has a degree and a boundary ``{label: coefficient}``.  Dense boundary
matrices are available through :meth:`ChainComplex.matrix`.  All arithmetic
is on Python integers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Hashable, Iterable, Sequence

from .posets import ValidationReport

Label = Hashable


class ChainError(ValueError):
    pass


class SubcomplexError(ChainError):
    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


# ---------------------------------------------------------------------------
# Homology values


@dataclass(frozen=True, order=True)
class Group:
    """A finitely generated abelian group ``Z^rank + Z/t1 + ... + Z/tk``."""

    rank: int = 0
    torsion: tuple[int, ...] = ()

    @property
    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __add__(self, other: Group) -> Group:
        return Group(self.rank + other.rank, invariant_factors(self.torsion + other.torsion))

    def __str__(self) -> str:
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}


ZERO = Group()


@dataclass(frozen=True)
class Homology:
    """Graded homology; ``groups[k]`` is the degree-k group.

    Trailing zero groups are trimmed so that equality is canonical.
    """

    groups: tuple[Group, ...] = ()

    def __post_init__(self):
        gs = list(self.groups)
        while gs and gs[-1].is_zero:
            gs.pop()
        object.__setattr__(self, "groups", tuple(gs))

    @classmethod
    def from_ranks(cls, ranks: Sequence[int], torsion: dict | None = None) -> Homology:
        torsion = torsion or {}
        top = max([len(ranks) - 1] + list(torsion))
        return cls(
            tuple(
                Group(ranks[k] if k < len(ranks) else 0, invariant_factors(torsion.get(k, ())))
                for k in range(top + 1)
            )
        )

    def __getitem__(self, k: int) -> Group:
        if 0 <= k < len(self.groups):
            return self.groups[k]
        return ZERO

    def __add__(self, other: Homology) -> Homology:
        n = max(len(self.groups), len(other.groups))
        return Homology(tuple(self[k] + other[k] for k in range(n)))

    def shift(self, s: int) -> Homology:
        if s < 0 and any(not g.is_zero for g in self.groups[:-s]):
            raise ChainError("shift would move classes below degree 0")
        if s >= 0:
            return Homology((ZERO,) * s + self.groups)
        return Homology(self.groups[-s:])

    @property
    def is_zero(self) -> bool:
        return not self.groups

    def betti(self) -> list[int]:
        return [g.rank for g in self.groups]

    def euler(self) -> int:
        return sum((-1) ** k * g.rank for k, g in enumerate(self.groups))

    def top_degree(self) -> int:
        return len(self.groups) - 1

    def __str__(self) -> str:
        if not self.groups:
            return "0"
        return ", ".join(f"H{k}={g}" for k, g in enumerate(self.groups) if not g.is_zero)

    def to_json(self) -> list:
        return [g.to_json() for g in self.groups]

    @classmethod
    def from_json(cls, data: list) -> Homology:
        return cls(tuple(Group(int(g["rank"]), tuple(int(t) for t in g["torsion"])) for g in data))


def direct_sum(hs: Iterable[Homology]) -> Homology:
    total = Homology()
    for h in hs:
        total = total + h
    return total


def invariant_factors(diag: Iterable[int]) -> tuple[int, ...]:
    """Divisibility-ordered torsion coefficients (> 1) of ``diag(d1, d2, ...)``."""
    ds = [abs(d) for d in diag if d not in (0, 1, -1)]
    # pairwise gcd/lcm sweep puts any diagonal matrix into Smith form
    for i in range(len(ds)):
        for j in range(i + 1, len(ds)):
            a, b = ds[i], ds[j]
            g = gcd(a, b)
            ds[i], ds[j] = g, a * b // g
    return tuple(d for d in ds if d != 1)


# ---------------------------------------------------------------------------
# Smith normal form


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M: Sequence[Sequence[int]]):
    """Return ``(U, D, V)`` with ``U @ M @ V == D`` and U, V unimodular.

    ``D`` is diagonal with nonnegative entries, each dividing the next.
    Pivots are nonzero entries of least absolute value (ties: lowest row,
    then lowest column) within the active block.
    """
    A = [list(map(int, row)) for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    U = _identity(rows)
    V = _identity(cols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in A:
            R[i], R[j] = R[j], R[i]
        for R in V:
            R[i], R[j] = R[j], R[i]

    def add_row(src, dst, q):  # row_dst += q * row_src
        if q:
            A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
            U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, q):  # col_dst += q * col_src
        if q:
            for R in A:
                R[dst] += q * R[src]
            for R in V:
                R[dst] += q * R[src]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                a = A[i][j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, cols):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                best = None
                for i in range(t, rows):
                    if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                        best = (abs(A[i][t]), i, "r")
                for j in range(t, cols):
                    if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                        best = (abs(A[t][j]), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, A, V


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[int]]:
    if not A:
        return []
    inner = len(B)
    if any(len(r) != inner for r in A):
        raise ChainError("matrix dimension mismatch")
    cols = len(B[0]) if B else 0
    Bt = list(zip(*B)) if B else [()] * cols
    return [[sum(x * y for x, y in zip(r, c)) for c in Bt] for r in A]


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    A = [list(r) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def elementary_divisors(columns: dict) -> list[int]:
    """Nonzero diagonal of a sparse integer matrix reduced by unimodular moves.

    ``columns`` maps a column key to ``{row_key: value}``.  The result has
    one entry per unit of rank; pass it through :func:`invariant_factors`
    for the torsion part.
    """
    cols: dict = {}
    rows: dict = {}
    for c, entries in columns.items():
        ce = {r: v for r, v in entries.items() if v}
        if ce:
            cols[c] = ce
            for r, v in ce.items():
                rows.setdefault(r, {})[c] = v
    diag = []

    def add_row(src, dst, q):
        rd = rows[dst]
        for c, v in rows[src].items():
            nv = rd.get(c, 0) + q * v
            if nv:
                rd[c] = nv
                cols[c][dst] = nv
            else:
                rd.pop(c, None)
                cols[c].pop(dst, None)
                if not cols[c]:
                    del cols[c]
        if not rd:
            del rows[dst]

    def add_col(src, dst, q):
        cd = cols[dst]
        for r, v in cols[src].items():
            nv = cd.get(r, 0) + q * v
            if nv:
                cd[r] = nv
                rows[r][dst] = nv
            else:
                cd.pop(r, None)
                rows[r].pop(dst, None)
                if not rows[r]:
                    del rows[r]
        if not cd:
            del cols[dst]

    while cols:
        best = None
        for c, ce in cols.items():
            for r, v in ce.items():
                key = (abs(v), (len(ce) - 1) * (len(rows[r]) - 1))
                if best is None or key < best[0]:
                    best = (key, r, c)
            if best[0] == (1, 0):
                break
        _, r, c = best
        while True:
            p = rows[r][c]
            for r2 in [x for x in cols[c] if x != r]:
                add_row(r, r2, -(cols[c][r2] // p))
            if len(cols[c]) > 1:
                # a remainder survived; continue with the smallest entry in column c
                r = min((x for x in cols[c]), key=lambda x: abs(cols[c][x]))
                continue
            for c2 in [x for x in rows[r] if x != c]:
                add_col(c, c2, -(rows[r][c2] // p))
            if len(rows[r]) > 1:
                c = min((x for x in rows[r]), key=lambda x: abs(rows[r][x]))
                continue
            break
        diag.append(abs(rows[r][c]))
        del rows[r]
        del cols[c]
    return diag


# ---------------------------------------------------------------------------
# Chain complexes


class ChainComplex:
    """A finitely generated free chain complex over the integers.

    ``basis[k]`` lists degree-k generators; ``boundary[g]`` is the sparse
    boundary of ``g``.  When ``augmented`` is set, the augmentation sends
    every degree-0 generator to 1.
    """

    def __init__(
        self,
        basis: Sequence[Sequence[Label]],
        boundary: dict | None = None,
        augmented: bool = False,
        basepoint: Label | None = None,
    ):
        self.basis = [list(b) for b in basis]
        while self.basis and not self.basis[-1]:
            self.basis.pop()
        self.degree = {}
        for k, b in enumerate(self.basis):
            for g in b:
                if g in self.degree:
                    raise ChainError(f"generator {g!r} listed twice")
                self.degree[g] = k
        boundary = boundary or {}
        self.boundary = {}
        for g in self.degree:
            bd = {h: c for h, c in boundary.get(g, {}).items() if c}
            for h in bd:
                if self.degree.get(h) != self.degree[g] - 1:
                    raise ChainError(f"boundary of {g!r} hits {h!r} outside degree {self.degree[g] - 1}")
            self.boundary[g] = bd
        self.augmented = augmented
        if basepoint is not None and self.degree.get(basepoint) != 0:
            raise ChainError(f"basepoint {basepoint!r} is not a degree-0 generator")
        self.basepoint = basepoint

    @property
    def top(self) -> int:
        return len(self.basis) - 1

    def dim(self, k: int) -> int:
        return len(self.basis[k]) if 0 <= k < len(self.basis) else 0

    def generators(self) -> Iterable[Label]:
        for b in self.basis:
            yield from b

    def __len__(self) -> int:
        return len(self.degree)

    def __contains__(self, g) -> bool:
        return g in self.degree

    def matrix(self, k: int) -> list[list[int]]:
        """Dense ``d_k``: rows index degree k-1, columns degree k."""
        rows = self.basis[k - 1] if k >= 1 and k - 1 < len(self.basis) else []
        index = {h: i for i, h in enumerate(rows)}
        cols = self.basis[k] if 0 <= k < len(self.basis) else []
        M = [[0] * len(cols) for _ in rows]
        for j, g in enumerate(cols):
            for h, c in self.boundary[g].items():
                M[index[h]][j] = c
        return M

    def d(self, chain: dict) -> dict:
        out: dict = {}
        for g, c in chain.items():
            for h, e in self.boundary[g].items():
                out[h] = out.get(h, 0) + c * e
        return {h: v for h, v in out.items() if v}

    def __repr__(self) -> str:
        dims = [len(b) for b in self.basis]
        return f"ChainComplex(dims={dims}, augmented={self.augmented})"

    # JSON ---------------------------------------------------------------

    def to_json(self) -> dict:
        def enc(x):
            return x if -(2**63) <= x < 2**63 else str(x)

        return {
            "basis": [[label_str(g) for g in b] for b in self.basis],
            "d": [[[enc(x) for x in row] for row in self.matrix(k)] for k in range(len(self.basis))],
            "augmented": self.augmented,
            "basepoint": None if self.basepoint is None else label_str(self.basepoint),
        }

    @classmethod
    def from_json(cls, data: dict) -> ChainComplex:
        try:
            basis = [list(b) for b in data["basis"]]
            ds = data.get("d", [])
            boundary = {}
            for k in range(1, len(basis)):
                M = ds[k] if k < len(ds) else []
                if M and (len(M) != len(basis[k - 1]) or any(len(r) != len(basis[k]) for r in M)):
                    raise ChainError(f"d[{k}] has wrong shape")
                for j, g in enumerate(basis[k]):
                    boundary[g] = {
                        basis[k - 1][i]: int(M[i][j]) for i in range(len(M)) if int(M[i][j])
                    }
        except (KeyError, TypeError, IndexError) as exc:
            raise ChainError(f"malformed chain complex JSON: {exc}") from exc
        return cls(
            basis,
            boundary,
            augmented=bool(data.get("augmented", False)),
            basepoint=data.get("basepoint"),
        )


def label_str(g) -> str:
    if isinstance(g, str):
        return g
    if isinstance(g, tuple):
        return "(" + ",".join(label_str(x) for x in g) + ")"
    return str(g)


def verify(C: ChainComplex) -> ValidationReport:
    """List every generator whose boundary has nonzero boundary."""
    rep = ValidationReport("d∘d = 0")
    for g in C.generators():
        dd = C.d(C.boundary[g])
        if dd:
            rep.fail("d∘d", (C.degree[g], g, dd))
    if C.augmented:
        for g in C.basis[1] if C.top >= 1 else []:
            if sum(C.boundary[g].values()):
                rep.fail("augmentation", g)
    return rep


def _check(C: ChainComplex) -> ChainComplex:
    rep = verify(C)
    if not rep.ok:
        raise ChainError(f"not a chain complex: {rep.failures[0]}")
    return C


def _divisors_by_degree(C: ChainComplex, augmented: bool) -> dict[int, list[int]]:
    out = {}
    for k in range(1, len(C.basis)):
        out[k] = elementary_divisors({g: C.boundary[g] for g in C.basis[k]})
    if augmented:
        out[0] = [1] if C.dim(0) else []
    return out


def _homology(C: ChainComplex, reduced: bool) -> Homology:
    divs = _divisors_by_degree(C, reduced)
    groups = []
    for k in range(len(C.basis)):
        rank_out = len(divs.get(k, []))
        rank_in = len(divs.get(k + 1, []))
        groups.append(
            Group(C.dim(k) - rank_out - rank_in, invariant_factors(divs.get(k + 1, [])))
        )
    return Homology(tuple(groups))


def homology(C: ChainComplex) -> Homology:
    return _homology(C, reduced=False)


def reduced_homology(C: ChainComplex) -> Homology:
    """Homology of the augmented complex ``... -> C_0 -> Z``."""
    if not C.augmented:
        raise ChainError("reduced homology needs an augmented complex")
    if C.dim(0) == 0:
        raise ChainError("augmented complex has no vertices")
    return _homology(C, reduced=True)


def euler_characteristic(C: ChainComplex) -> int:
    return sum((-1) ** k * len(b) for k, b in enumerate(C.basis))


def reduced_euler(C: ChainComplex) -> int:
    return euler_characteristic(C) - 1


def point() -> ChainComplex:
    return ChainComplex([["*"]], augmented=True, basepoint="*")


def is_connected(C: ChainComplex) -> bool:
    return homology(C)[0].rank == 1


# ---------------------------------------------------------------------------
# Constructions


def tensor_many(
    factors: Sequence[ChainComplex],
    keep: Callable[[tuple], bool] | None = None,
) -> ChainComplex:
    """Tensor product with tuple labels, optionally restricted to a sub-span.

    ``keep`` selects generators; the selection must be closed under the
    boundary, which is checked.  Signs follow the Koszul rule.
    """
    combos: list[tuple] = [()]
    for F in factors:
        combos = [c + (g,) for c in combos for g in F.generators()]
    if keep is not None:
        combos = [c for c in combos if keep(c)]
    degs = {c: sum(F.degree[g] for F, g in zip(factors, c)) for c in combos}
    top = max(degs.values(), default=-1)
    basis = [[] for _ in range(top + 1)]
    for c in combos:
        basis[degs[c]].append(c)
    boundary = {}
    for c in combos:
        bd: dict = {}
        sign_deg = 0
        for i, (F, g) in enumerate(zip(factors, c)):
            sign = -1 if sign_deg % 2 else 1
            for h, e in F.boundary[g].items():
                t = c[:i] + (h,) + c[i + 1 :]
                bd[t] = bd.get(t, 0) + sign * e
            sign_deg += F.degree[g]
        bd = {t: v for t, v in bd.items() if v}
        for t in bd:
            if t not in degs:
                raise SubcomplexError(f"selection not boundary-closed at {c!r}", witness=c)
        boundary[c] = bd
    augmented = all(F.augmented for F in factors)
    if all(F.basepoint is not None for F in factors):
        bp = tuple(F.basepoint for F in factors)
        bp = bp if bp in degs else None
    else:
        bp = None
    return ChainComplex(basis, boundary, augmented=augmented, basepoint=bp)


def tensor(A: ChainComplex, B: ChainComplex) -> ChainComplex:
    """``A ⊗ B`` with pair labels and ``d(a⊗b) = da⊗b + (-1)^|a| a⊗db``."""
    return tensor_many([A, B])


@dataclass(frozen=True)
class BasedSubcomplex:
    parent: ChainComplex
    selected: frozenset
    basepoint: Label | None = None

    def __post_init__(self):
        bad = next((g for g in self.selected if g not in self.parent), None)
        if bad is not None:
            raise SubcomplexError(f"{bad!r} is not a generator of the parent", witness=bad)
        for g in self.selected:
            for h in self.parent.boundary[g]:
                if h not in self.selected:
                    raise SubcomplexError(
                        f"boundary of {g!r} leaves the selection at {h!r}", witness=g
                    )
        if self.basepoint is not None and self.basepoint not in self.selected:
            raise SubcomplexError("basepoint not selected", witness=self.basepoint)


def based_subcomplex(C: ChainComplex, labels: Iterable[Label], basepoint=None) -> BasedSubcomplex:
    bp = C.basepoint if basepoint is None else basepoint
    return BasedSubcomplex(C, frozenset(labels), bp)


def closure(C: ChainComplex, labels: Iterable[Label]) -> frozenset:
    """Smallest boundary-closed selection containing ``labels``."""
    out = set()
    stack = list(labels)
    while stack:
        g = stack.pop()
        if g not in out:
            out.add(g)
            stack.extend(C.boundary[g])
    return frozenset(out)


def _selection(C: ChainComplex, S) -> frozenset:
    if isinstance(S, BasedSubcomplex):
        if S.parent is not C:
            # same generators is enough; allows rebuilt parents
            missing = [g for g in S.selected if g not in C]
            if missing:
                raise SubcomplexError("subcomplex not inside this complex", witness=missing[0])
        return S.selected
    sel = frozenset(S)
    BasedSubcomplex(C, sel)
    return sel


def subcomplex(C: ChainComplex, S) -> ChainComplex:
    sel = _selection(C, S)
    basis = [[g for g in b if g in sel] for b in C.basis]
    bp = C.basepoint if C.basepoint in sel else getattr(S, "basepoint", None)
    return ChainComplex(
        basis, {g: C.boundary[g] for g in sel}, augmented=C.augmented, basepoint=bp
    )


def relative(C: ChainComplex, S) -> ChainComplex:
    """``C / S`` as a relative complex: generators of S deleted, not augmented."""
    sel = _selection(C, S)
    basis = [[g for g in b if g not in sel] for b in C.basis]
    boundary = {
        g: {h: c for h, c in C.boundary[g].items() if h not in sel}
        for b in basis
        for g in b
    }
    return ChainComplex(basis, boundary)


def with_basepoint(R: ChainComplex, basepoint: Label = "*") -> ChainComplex:
    """Re-attach a basepoint to a relative complex, giving an augmented one.

    Each degree-1 generator gets the coefficient on the basepoint that makes
    its augmented boundary vanish, as when the deleted part collapses to it.
    """
    if basepoint in R:
        raise ChainError(f"label {basepoint!r} already in use")
    basis = [list(b) for b in R.basis] or [[]]
    basis[0] = [basepoint] + basis[0]
    boundary = {g: dict(R.boundary[g]) for g in R.generators()}
    for g in R.basis[1] if len(R.basis) > 1 else []:
        s = sum(boundary[g].values())
        if s:
            boundary[g][basepoint] = -s
    return ChainComplex(basis, boundary, augmented=True, basepoint=basepoint)


def quotient(C: ChainComplex, S) -> ChainComplex:
    """Collapse the based subcomplex S to its basepoint."""
    sel = _selection(C, S)
    bp = getattr(S, "basepoint", None) or C.basepoint
    if bp is None or bp not in sel:
        raise SubcomplexError("quotient needs a basepoint inside the subcomplex", witness=bp)
    if not sel:
        return C
    return with_basepoint(relative(C, sel), bp)


def reduced_chains(C: ChainComplex) -> ChainComplex:
    """``C / basepoint`` as a relative complex (no basepoint generator)."""
    if C.basepoint is None:
        raise ChainError("complex has no basepoint")
    return relative(C, {C.basepoint})


def shift(C: ChainComplex, s: int = 1) -> ChainComplex:
    """Degree shift by ``s`` with boundary ``(-1)^s d``."""
    sign = -1 if s % 2 else 1
    basis = [[] for _ in range(s)] + [list(b) for b in C.basis]
    boundary = {g: {h: sign * c for h, c in C.boundary[g].items()} for g in C.generators()}
    return ChainComplex(basis, boundary)


def suspension(C: ChainComplex) -> ChainComplex:
    """Reduced suspension of a based complex."""
    if not C.augmented or C.basepoint is None:
        raise ChainError("suspension needs an augmented, based complex")
    return _check(with_basepoint(shift(reduced_chains(C), 1), ("Σ", C.basepoint)))


# ---------------------------------------------------------------------------
# Chain maps


@dataclass
class ChainMap:
    """A degree-0 map ``source -> target`` given on generators.

    ``images[g]`` is a sparse chain of ``target``; omitted generators map to 0.
    """

    source: ChainComplex
    target: ChainComplex
    images: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for g, img in self.images.items():
            if g not in self.source:
                raise ChainError(f"{g!r} is not in the source")
            img = {h: c for h, c in img.items() if c}
            for h in img:
                if self.target.degree.get(h) != self.source.degree[g]:
                    raise ChainError(f"image of {g!r} has {h!r} in the wrong degree")
            if img:
                clean[g] = img
        self.images = clean

    def __call__(self, chain: dict) -> dict:
        out: dict = {}
        for g, c in chain.items():
            for h, e in self.images.get(g, {}).items():
                out[h] = out.get(h, 0) + c * e
        return {h: v for h, v in out.items() if v}

    def image(self, g) -> dict:
        return self.images.get(g, {})

    def matrix(self, k: int) -> list[list[int]]:
        rows = self.target.basis[k] if k < len(self.target.basis) else []
        cols = self.source.basis[k] if k < len(self.source.basis) else []
        index = {h: i for i, h in enumerate(rows)}
        M = [[0] * len(cols) for _ in rows]
        for j, g in enumerate(cols):
            for h, c in self.image(g).items():
                M[index[h]][j] = c
        return M

    def equals(self, other: ChainMap) -> bool:
        return self.images == other.images


def compose(f: ChainMap, g: ChainMap) -> ChainMap:
    """``f ∘ g`` (apply g first)."""
    if set(g.target.degree) != set(f.source.degree) or any(
        g.target.degree[x] != f.source.degree[x] for x in g.target.degree
    ):
        raise ChainError("composition: target of g is not the source of f")
    return ChainMap(g.source, f.target, {x: f(g.image(x)) for x in g.source.generators()})


def identity_map(C: ChainComplex) -> ChainMap:
    return ChainMap(C, C, {g: {g: 1} for g in C.generators()})


def inclusion_map(sub: ChainComplex, C: ChainComplex) -> ChainMap:
    return ChainMap(sub, C, {g: {g: 1} for g in sub.generators()})


def is_identity(f: ChainMap) -> bool:
    if set(f.source.degree) != set(f.target.degree):
        return False
    return all(f.image(g) == {g: 1} for g in f.source.generators())


def check_chain_map(f: ChainMap) -> ValidationReport:
    rep = ValidationReport("chain map")
    for g in f.source.generators():
        lhs = f.target.d(f.image(g))
        rhs = f(f.source.boundary[g])
        if lhs != rhs:
            rep.fail("d∘f ≠ f∘d", (g, lhs, rhs))
    return rep


def map_from_matrices(
    source: ChainComplex, target: ChainComplex, mats: Sequence[Sequence[Sequence[int]]]
) -> ChainMap:
    """Build a chain map from per-degree matrices (rows: target, columns: source)."""
    if len(mats) < max(len(source.basis), 0):
        raise ChainError("one matrix per source degree is required")
    images = {}
    for k, M in enumerate(mats):
        rows = target.basis[k] if k < len(target.basis) else []
        cols = source.basis[k] if k < len(source.basis) else []
        if len(M) != len(rows) or any(len(r) != len(cols) for r in M):
            raise ChainError(f"matrix in degree {k} has wrong shape")
        for j, g in enumerate(cols):
            images[g] = {rows[i]: M[i][j] for i in range(len(rows)) if M[i][j]}
    return ChainMap(source, target, images)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)
