"""Exact integer-lattice primitives.

Points are plain tuples of Python ints, matrices are lists of lists of Python
ints (arbitrary precision, so adversarial inputs cannot overflow).  The main
entry points are :func:`snf`, :func:`hnf` and :func:`generated_lattice`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd, prod
from typing import Iterable, Sequence

from .errors import DimensionMismatch

Point = tuple[int, ...]
Matrix = list[list[int]]


# ---------------------------------------------------------------------------
# Sets and tuples of lattice points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeSet:
    """A finite nonempty set of points in Z^n, stored sorted and deduplicated."""

    points: tuple[Point, ...]
    dim: int

    def __init__(self, points: Iterable[Sequence[int]], dim: int | None = None):
        pts = sorted({tuple(int(c) for c in p) for p in points})
        if not pts:
            raise ValueError("a lattice set must be nonempty")
        d = len(pts[0]) if dim is None else dim
        if any(len(p) != d for p in pts):
            raise DimensionMismatch("all points must share the ambient dimension")
        object.__setattr__(self, "points", tuple(pts))
        object.__setattr__(self, "dim", d)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p) -> bool:
        return tuple(p) in self.points

    def shift(self, v: Sequence[int]) -> "LatticeSet":
        return LatticeSet([tuple(a - b for a, b in zip(p, v)) for p in self.points], self.dim)

    def lexmin(self) -> Point:
        return self.points[0]

    def normalized(self) -> "LatticeSet":
        """Shift so that the lexicographically least point is the origin."""
        return self.shift(self.points[0])

    def differences(self) -> list[Point]:
        """Differences from the first point; they generate the set's difference lattice."""
        base = self.points[0]
        return [tuple(a - b for a, b in zip(p, base)) for p in self.points[1:]]

    def transform(self, U: Matrix) -> "LatticeSet":
        """Image under the linear map p -> U p."""
        return LatticeSet([mat_vec(U, p) for p in self.points], len(U))


@dataclass(frozen=True)
class LatticeTuple:
    """An ordered tuple (A_1, ..., A_k) of finite sets in a common Z^n."""

    sets: tuple[LatticeSet, ...]
    dim: int

    def __init__(self, sets: Iterable, dim: int | None = None):
        ss = tuple(s if isinstance(s, LatticeSet) else LatticeSet(s, dim) for s in sets)
        if not ss:
            raise ValueError("a lattice tuple needs at least one set")
        d = ss[0].dim if dim is None else dim
        if any(s.dim != d for s in ss):
            raise DimensionMismatch("all sets must share the ambient dimension")
        object.__setattr__(self, "sets", ss)
        object.__setattr__(self, "dim", d)

    @classmethod
    def from_lists(cls, sets, dim: int | None = None) -> "LatticeTuple":
        return cls([LatticeSet(s, dim) for s in sets], dim)

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __getitem__(self, i):
        return self.sets[i]

    @property
    def is_square(self) -> bool:
        return len(self.sets) == self.dim

    def require_square(self) -> None:
        if not self.is_square:
            raise DimensionMismatch(
                f"expected a square tuple, got {len(self.sets)} sets in Z^{self.dim}"
            )

    def normalized(self) -> "LatticeTuple":
        return LatticeTuple([s.normalized() for s in self.sets], self.dim)

    def transform(self, U: Matrix) -> "LatticeTuple":
        return LatticeTuple([s.transform(U) for s in self.sets], len(U))

    def subtuple(self, idx: Iterable[int]) -> "LatticeTuple":
        return LatticeTuple([self.sets[i] for i in idx], self.dim)

    def to_lists(self) -> list[list[list[int]]]:
        return [[list(p) for p in s.points] for s in self.sets]


def difference_vectors(sets: Iterable[LatticeSet]) -> list[Point]:
    out: list[Point] = []
    for s in sets:
        out.extend(s.differences())
    return out


# ---------------------------------------------------------------------------
# Small exact matrix helpers
# ---------------------------------------------------------------------------


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def mat_vec(A: Matrix, v: Sequence[int]) -> Point:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in A)


def vec_mat(v: Sequence[int], A: Matrix) -> Point:
    """Row vector times matrix."""
    if not A:
        return ()
    return tuple(sum(v[k] * A[k][j] for k in range(len(A))) for j in range(len(A[0])))


def transpose(A: Matrix) -> Matrix:
    return [list(r) for r in zip(*A)] if A else []


def det(A: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rank(vectors: Sequence[Sequence[int]]) -> int:
    """Rank over Q, by integer cross-multiplication elimination."""
    rows = [list(v) for v in vectors]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        for i in range(r + 1, len(rows)):
            a = rows[i][c]
            if a:
                rows[i] = [p * x - a * y for x, y in zip(rows[i], rows[r])]
                g = 0
                for x in rows[i]:
                    g = gcd(g, x)
                if g > 1:
                    rows[i] = [x // g for x in rows[i]]
        r += 1
        if r == len(rows):
            break
    return r


def adjugate(A: Matrix) -> tuple[Matrix, int]:
    """(adj(A), det(A)) so that A @ adj(A) == det(A) * I."""
    n = len(A)
    d = det(A)
    if n == 1:
        return [[1]], d
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[A[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            adj[j][i] = (-1) ** (i + j) * det(minor)
    return adj, d


def inverse_rational(A: Matrix) -> list[list[Fraction]]:
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next(i for i in range(c, n) if M[i][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        p = M[c][c]
        M[c] = [x / p for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return [row[n:] for row in M]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


# ---------------------------------------------------------------------------
# Smith and Hermite normal forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SnfDecomposition:
    """left @ M @ right == diag(divisors) (padded with zeros to M's shape)."""

    left: Matrix
    right: Matrix
    right_inv: Matrix
    divisors: tuple[int, ...]
    rank: int
    diagonal: Matrix = field(repr=False)


def snf(M: Sequence[Sequence[int]]) -> SnfDecomposition:
    """Smith normal form by elementary row/column reduction.

    The pivot is always the entry of minimal nonzero absolute value in the
    remaining block.  Transformations are accumulated so that
    ``left @ M @ right`` is diagonal; ``right_inv`` is kept as well since
    lattice bases are read off from it.
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    L = identity(m)
    R = identity(n)
    Rinv = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]
        Rinv[i], Rinv[j] = Rinv[j], Rinv[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        if q:
            A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
            L[dst] = [a + q * b for a, b in zip(L[dst], L[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        if q:
            for row in A:
                row[dst] += q * row[src]
            for row in R:
                row[dst] += q * row[src]
            Rinv[src] = [a - q * b for a, b in zip(Rinv[src], Rinv[dst])]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, m):
                    if A[i][t] and (best is None or abs(A[i][t]) < abs(A[best][t])):
                        best = i
                bcol = None
                for j in range(t, n):
                    if A[t][j] and (bcol is None or abs(A[t][j]) < abs(A[t][bcol])):
                        bcol = j
                if abs(A[best][t]) <= abs(A[t][bcol]):
                    swap_rows(t, best)
                else:
                    swap_cols(t, bcol)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            L[t] = [-x for x in L[t]]

    divs = tuple(A[i][i] for i in range(min(m, n)))
    return SnfDecomposition(
        left=L,
        right=R,
        right_inv=Rinv,
        divisors=divs,
        rank=sum(1 for d in divs if d),
        diagonal=A,
    )


def hnf(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form: returns (H, U) with U @ M == H, U unimodular.

    H is in row echelon form, pivots positive, entries above a pivot reduced
    into [0, pivot).  H is unique for the row lattice of M.
    """
    H = [[int(x) for x in row] for row in M]
    m = len(H)
    n = len(H[0]) if m else 0
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            if H[i][c] == 0:
                continue
            a, b = H[r][c], H[i][c]
            g, s, t = xgcd(a, b)
            u, v = -b // g, a // g
            H[r], H[i] = (
                [s * x + t * y for x, y in zip(H[r], H[i])],
                [u * x + v * y for x, y in zip(H[r], H[i])],
            )
            U[r], U[i] = (
                [s * x + t * y for x, y in zip(U[r], U[i])],
                [u * x + v * y for x, y in zip(U[r], U[i])],
            )
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        p = H[r][c]
        for i in range(r):
            q = H[i][c] // p
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return H, U


# ---------------------------------------------------------------------------
# Sublattices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SublatticeInfo:
    """The lattice generated by a list of vectors in Z^n.

    ``basis`` spans the lattice itself, ``saturation_basis`` spans its
    saturation, and ``saturation_basis + complement_basis`` is a basis of
    Z^n (rows).  ``saturation_index`` is the product of the nonzero elementary
    divisors; it is 1 exactly when the lattice is saturated.
    """

    basis: tuple[Point, ...]
    rank: int
    saturation_index: int
    dim: int
    divisors: tuple[int, ...] = ()
    saturation_basis: tuple[Point, ...] = ()
    complement_basis: tuple[Point, ...] = ()
    # Columns 0..rank-1 of to_coords give coordinates in saturation_basis,
    # columns rank.. give coordinates in complement_basis (x = c @ full basis).
    to_coords: Matrix = field(default_factory=list, repr=False)

    @property
    def is_saturated(self) -> bool:
        return self.saturation_index == 1

    @property
    def cokernel(self) -> tuple[int, ...]:
        """Invariant factors > 1 of the finite group saturation / lattice."""
        return tuple(d for d in self.divisors if d > 1)

    def coords(self, v: Sequence[int]) -> Point:
        return vec_mat(v, self.to_coords)

    def saturation_coords(self, v: Sequence[int]) -> Point:
        return self.coords(v)[: self.rank]

    def quotient_coords(self, v: Sequence[int]) -> Point:
        """Image of v in the free quotient Z^n / saturation."""
        return self.coords(v)[self.rank :]


def generated_lattice(vectors: Sequence[Sequence[int]], dim: int | None = None) -> SublatticeInfo:
    vecs = [tuple(int(x) for x in v) for v in vectors]
    if dim is None:
        if not vecs:
            raise ValueError("dimension needed for an empty vector list")
        dim = len(vecs[0])
    if any(len(v) != dim for v in vecs):
        raise DimensionMismatch("vectors must share a dimension")
    if not vecs:
        I = identity(dim)
        return SublatticeInfo(
            basis=(), rank=0, saturation_index=1, dim=dim,
            complement_basis=tuple(tuple(r) for r in I), to_coords=I,
        )
    dec = snf(vecs)
    r = dec.rank
    divs = dec.divisors[:r]
    Vinv = dec.right_inv
    return SublatticeInfo(
        basis=tuple(tuple(d * x for x in Vinv[i]) for i, d in enumerate(divs)),
        rank=r,
        saturation_index=prod(divs) if divs else 1,
        dim=dim,
        divisors=divs,
        saturation_basis=tuple(tuple(Vinv[i]) for i in range(r)),
        complement_basis=tuple(tuple(Vinv[i]) for i in range(r, dim)),
        to_coords=dec.right,
    )


def in_lattice(v: Sequence[int], basis: Sequence[Sequence[int]]) -> bool:
    """Membership of v in the lattice with the given (independent) basis rows."""
    if not basis:
        return all(x == 0 for x in v)
    H0, _ = hnf([list(b) for b in basis])
    H1, _ = hnf([list(b) for b in basis] + [list(v)])
    return [r for r in H0 if any(r)] == [r for r in H1 if any(r)]


def express(v: Sequence[int], basis: Sequence[Sequence[int]]) -> Point:
    """Integer coordinates of v in a basis of a full-rank lattice of rank len(basis).

    Raises ValueError if v is not in the lattice.
    """
    B = [list(b) for b in basis]
    k = len(B)
    # Solve c @ B = v restricted to k independent columns.
    cols = _independent_columns(B)
    sq = [[B[i][j] for j in cols] for i in range(k)]
    inv = inverse_rational(sq)
    rhs = [v[j] for j in cols]
    c = [sum(Fraction(rhs[t]) * inv[t][i] for t in range(k)) for i in range(k)]
    if any(x.denominator != 1 for x in c):
        raise ValueError("vector not in lattice")
    c_int = tuple(int(x) for x in c)
    if vec_mat(c_int, B) != tuple(v):
        raise ValueError("vector not in the span")
    return c_int


def _independent_columns(B: Matrix) -> list[int]:
    k = len(B)
    n = len(B[0])
    for cols in combinations(range(n), k):
        if det([[B[i][j] for j in cols] for i in range(k)]) != 0:
            return list(cols)
    raise ValueError("basis is not independent")


def primitive(v: Sequence[int]) -> Point:
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v) if g else tuple(v)


def intermediate_lattices(info: SublatticeInfo) -> list[tuple[tuple[Point, ...], int]]:
    """All lattices M with L <= M <= saturation(L), for L given by ``info``.

    Returned as (basis rows in Z^n, index of M inside the saturation).  They
    correspond to subgroups of the finite quotient saturation/L, which is
    ``prod Z/d_i`` in the SNF coordinates; the subgroups are enumerated by
    closure and deduplicated.
    """
    r = info.rank
    divs = info.divisors
    if r == 0:
        return [((), 1)]
    order = prod(divs)
    # Elements of Q = prod Z/d_i as tuples.
    elements = [()]
    for d in divs:
        elements = [e + (x,) for e in elements for x in range(d)]
    zero = tuple(0 for _ in divs)

    def span(gens):
        seen = {zero}
        frontier = [zero]
        while frontier:
            nxt = []
            for e in frontier:
                for g in gens:
                    s = tuple((a + b) % d for a, b, d in zip(e, g, divs))
                    if s not in seen:
                        seen.add(s)
                        nxt.append(s)
            frontier = nxt
        return frozenset(seen)

    subgroups = {frozenset([zero])}
    frontier = [frozenset([zero])]
    while frontier:
        nxt = []
        for H in frontier:
            for e in elements:
                if e in H:
                    continue
                K = span(list(H) + [e])
                if K not in subgroups:
                    subgroups.add(K)
                    nxt.append(K)
        frontier = nxt

    sat = info.saturation_basis
    out = []
    for H in sorted(subgroups, key=lambda h: (len(h), sorted(h))):
        # M in saturation coordinates: generated by diag(divs) rows plus H.
        gens = [[d if j == i else 0 for j in range(r)] for i, d in enumerate(divs)]
        gens += [list(h) for h in H if h != zero]
        Hm, _ = hnf(gens)
        rows = [row for row in Hm if any(row)]
        basis = tuple(vec_mat(row, [list(s) for s in sat]) for row in rows)
        out.append((basis, order // len(H)))
    return out
