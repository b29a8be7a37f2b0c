"""Structural predicates of lattice tuples.

All predicates are decided by subset enumeration over the tuple plus exact
lattice computations (SNF of difference vectors, mixed volumes measured in a
sublattice).  Subsets are visited in order of size, then lexicographically,
so every witness is the lexicographically least minimal one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import gcd, isqrt
from typing import Iterator

from .errors import DimensionMismatch, PreconditionViolated
from .lattice import (
    LatticeSet,
    LatticeTuple,
    Point,
    SublatticeInfo,
    det,
    express,
    generated_lattice,
    intermediate_lattices,
    rank,
)
from .polytope import mixed_volume


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def subsets(k: int, proper: bool = False) -> Iterator[tuple[int, ...]]:
    top = k - 1 if proper else k
    for size in range(1, top + 1):
        yield from combinations(range(k), size)


def diff_lattice(t: LatticeTuple, S) -> SublatticeInfo:
    """Lattice generated by the within-set differences of the sets indexed by S."""
    return generated_lattice([v for i in S for v in t[i].differences()], t.dim)


def sets_in_basis(t: LatticeTuple, S, basis) -> LatticeTuple:
    """The sets of S, each shifted to its first point, in coordinates of ``basis``."""
    k = len(basis)
    return LatticeTuple(
        [LatticeSet([express(v, basis) for v in [(0,) * t.dim] + t[i].differences()], k) for i in S], k
    )


def mv_in_lattice(t: LatticeTuple, S, basis) -> int:
    """Mixed volume of the S-sets measured in the lattice spanned by ``basis``."""
    if len(basis) != len(S):
        raise DimensionMismatch("basis rank must equal the number of sets")
    if not S:
        return 1
    return mixed_volume(sets_in_basis(t, S, basis))


def quotient_tuple(t: LatticeTuple, S, info: SublatticeInfo) -> LatticeTuple:
    """Images of the sets outside S in the free quotient Z^n / saturation."""
    rest = [i for i in range(len(t)) if i not in S]
    q = t.dim - info.rank
    return LatticeTuple(
        [LatticeSet([info.quotient_coords(p) for p in t[i].points], q) for i in rest], q
    )


def saturated_part(t: LatticeTuple, S, info: SublatticeInfo) -> LatticeTuple:
    return sets_in_basis(t, S, info.saturation_basis)


def smallest_prime_factor(m: int) -> int:
    for p in range(2, isqrt(m) + 1):
        if m % p == 0:
            return p
    return m


def is_prime(m: int) -> bool:
    return m >= 2 and smallest_prime_factor(m) == m


# ---------------------------------------------------------------------------
# Def. reduced / irreducible / linearly independent
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NonReducedWitness:
    """A subset S whose sets sit in a lattice M of rank |S| that is not saturated."""

    subset: tuple[int, ...]
    basis: tuple[Point, ...]
    index: int  # [saturation : M]
    mv_in_m: int


@dataclass(frozen=True)
class SplitWitness:
    subset: tuple[int, ...]
    saturation_basis: tuple[Point, ...]
    mv_inner: int
    mv_quotient: int


@dataclass
class StructureFlags:
    reduced: bool
    irreducible: bool
    linearly_independent: bool
    numerically_reduced: bool
    numerically_irreducible: bool
    prime: int | None
    witnesses: dict = field(default_factory=dict)


def is_reduced(t: LatticeTuple) -> tuple[bool, SublatticeInfo]:
    info = diff_lattice(t, range(len(t)))
    return info.rank == t.dim and info.saturation_index == 1, info


def dependency_witness(t: LatticeTuple):
    """First S with rank(S) < |S|, or None when the tuple is linearly independent."""
    for S in subsets(len(t)):
        if diff_lattice(t, S).rank < len(S):
            return S
    return None


def reducibility_witness(t: LatticeTuple):
    """First proper S with rank(S) <= |S|, or None when the tuple is irreducible."""
    for S in subsets(len(t), proper=True):
        if diff_lattice(t, S).rank <= len(S):
            return S
    return None


def numerical_reduction_witness(t: LatticeTuple) -> NonReducedWitness | None:
    """Search every S and every lattice M_gen <= M < M_sat for MV measured in M > 1."""
    for S in subsets(len(t)):
        info = diff_lattice(t, S)
        if info.rank != len(S) or info.saturation_index == 1:
            continue
        for basis, index in intermediate_lattices(info):
            if index == 1:
                continue
            mv = mv_in_lattice(t, S, basis)
            if mv > 1:
                return NonReducedWitness(S, basis, index, mv)
    return None


def numerically_non_reduced_closed_form(t: LatticeTuple) -> bool:
    """Independent route: MV in the saturation exceeds the smallest prime of the index.

    MV measured in M equals MV in the saturation divided by [M_sat : M], and
    the smallest proper index is the least prime dividing |M_sat / M_gen|.
    """
    for S in subsets(len(t)):
        info = diff_lattice(t, S)
        if info.rank != len(S) or info.saturation_index == 1:
            continue
        if mv_in_lattice(t, S, info.saturation_basis) > smallest_prime_factor(info.saturation_index):
            return True
    return False


def numerical_split_witness(t: LatticeTuple) -> SplitWitness | None:
    for S in subsets(len(t), proper=True):
        info = diff_lattice(t, S)
        if info.rank != len(S):
            continue
        inner = mv_in_lattice(t, S, info.saturation_basis)
        if inner <= 1:
            continue
        outer = mixed_volume(quotient_tuple(t, S, info))
        if outer > 1:
            return SplitWitness(S, info.saturation_basis, inner, outer)
    return None


# ---------------------------------------------------------------------------
# Descent used for the monodromy prediction and the prime-tuple test
# ---------------------------------------------------------------------------


@dataclass
class Descent:
    """Outcome of walking down MV-1 splits until a decisive case is met.

    kind: 'trivial' (MV 1), 'dependent' (MV 0), 'non_reduced', 'split',
    'symmetric', or 'cyclic' (non-reduced bottom with prime index and
    reduction of MV 1).
    """

    kind: str
    tuple: LatticeTuple
    mv: int
    path: list = field(default_factory=list)
    witness: object = None


def split_parts(t: LatticeTuple, S) -> tuple[LatticeTuple, LatticeTuple, SublatticeInfo]:
    info = diff_lattice(t, S)
    return saturated_part(t, S, info), quotient_tuple(t, S, info), info


def descend(t: LatticeTuple) -> Descent:
    t.require_square()
    path = []
    while True:
        mv = mixed_volume(t)
        if mv == 0:
            return Descent("dependent", t, 0, path)
        if mv == 1:
            return Descent("trivial", t, 1, path)
        w = numerical_reduction_witness(t)
        if w is not None:
            return Descent("non_reduced", t, mv, path, w)
        s = numerical_split_witness(t)
        if s is not None:
            return Descent("split", t, mv, path, s)
        reduced, info = is_reduced(t)
        S = reducibility_witness(t)
        if reduced and S is None:
            return Descent("symmetric", t, mv, path)
        if not reduced:
            # Numerically reduced forces mv == index == prime with a reduction of MV 1.
            return Descent("cyclic", t, mv, path, info)
        inner, outer, _ = split_parts(t, S)
        mv_inner = mixed_volume(inner)
        nxt = inner if mv_inner > 1 else outer
        path.append((S, "inner" if mv_inner > 1 else "quotient"))
        t = nxt


def prime_order(t: LatticeTuple) -> int | None:
    d = descend(t)
    if d.kind == "cyclic" and is_prime(d.mv) and d.mv % 2 == 1:
        return d.mv
    return None


def structure_flags(t: LatticeTuple) -> StructureFlags:
    t.require_square()
    witnesses: dict = {}
    reduced, info = is_reduced(t)
    if not reduced:
        witnesses["reduced"] = {"basis": info.basis, "index": info.saturation_index, "rank": info.rank}
    dep = dependency_witness(t)
    if dep is not None:
        witnesses["linearly_independent"] = {"subset": dep}
    red = reducibility_witness(t)
    if red is not None:
        witnesses["irreducible"] = {"subset": red}
    nr = numerical_reduction_witness(t)
    if nr is not None:
        witnesses["numerically_reduced"] = nr
    ns = numerical_split_witness(t)
    if ns is not None:
        witnesses["numerically_irreducible"] = ns
    p = prime_order(t) if dep is None else None
    if p is not None:
        witnesses["prime"] = {"p": p}
    return StructureFlags(
        reduced=reduced,
        irreducible=red is None,
        linearly_independent=dep is None,
        numerically_reduced=nr is None,
        numerically_irreducible=ns is None,
        prime=p,
        witnesses=witnesses,
    )


# ---------------------------------------------------------------------------
# Dual effectiveness criterion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimplexWitness:
    """Frame in which every set is a translate of a subset of the standard simplex.

    ``vertices`` are v_0 = 0, v_1, ..., v_n (v_1..v_n a lattice basis);
    ``shifts[i]`` is t_i with A_i - t_i contained in {v_0, ..., v_n}.
    """

    vertices: tuple[Point, ...]
    shifts: tuple[Point, ...]


def simplex_fit(t: LatticeTuple) -> SimplexWitness | None:
    """Search labelings of the points by simplex vertices, exactly.

    Every point gets a vertex label (injective within a set).  A labeling
    forces v_a - v_b = x - y for same-set points labelled a, b; for reduced
    tuples the label graph must be connected, which pins every v_j once v_0 = 0.
    """
    n = t.dim
    sets = [list(s.points) for s in t]
    if any(len(s) > n + 1 for s in sets):
        return None
    labels = list(range(n + 1))
    first = [tuple(range(len(sets[0])))]  # vertex symmetry fixes the first set
    choices = [first] + [list(permutations(labels, len(s))) for s in sets[1:]]

    def solve(assignment):
        # union-find with potentials: pos[label] = v_label - v_root
        parent = list(range(n + 1))
        pot = [tuple([0] * n) for _ in range(n + 1)]

        def find(a):
            if parent[a] == a:
                return a, tuple([0] * n)
            r, p = find(parent[a])
            parent[a] = r
            pot[a] = tuple(x + y for x, y in zip(pot[a], p))
            return r, pot[a]

        for pts, lab in zip(sets, assignment):
            for x, la in zip(pts[1:], lab[1:]):
                y, lb = pts[0], lab[0]
                d = tuple(p - q for p, q in zip(x, y))  # v_la - v_lb
                ra, pa = find(la)
                rb, pb = find(lb)
                if ra == rb:
                    if tuple(p - q for p, q in zip(pa, pb)) != d:
                        return None
                else:
                    parent[ra] = rb
                    pot[ra] = tuple(di + q - p for di, p, q in zip(d, pa, pb))
        roots = {find(a)[0] for a in range(n + 1)}
        if len(roots) != 1:
            return None
        _, p0 = find(0)
        vs = [tuple(a - b for a, b in zip(find(j)[1], p0)) for j in range(n + 1)]
        if abs(det([list(v) for v in vs[1:]])) != 1:
            return None
        shifts = tuple(
            tuple(a - b for a, b in zip(pts[0], vs[lab[0]])) for pts, lab in zip(sets, assignment)
        )
        return SimplexWitness(tuple(vs), shifts)

    def rec(i, acc):
        if i == len(sets):
            return solve(acc)
        for lab in choices[i]:
            w = rec(i + 1, acc + [lab])
            if w is not None:
                return w
        return None

    return rec(0, [])


def dual_effective(t: LatticeTuple) -> tuple[bool, SimplexWitness | None]:
    t.require_square()
    reduced, _ = is_reduced(t)
    if not reduced or reducibility_witness(t) is not None:
        raise PreconditionViolated("dual_effective needs a reduced irreducible tuple")
    w = simplex_fit(t)
    return (w is None), w


# ---------------------------------------------------------------------------
# Cayley configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CayleyConfig:
    points: LatticeSet
    origin: LatticeTuple
    index_set: tuple[int, ...]


def cayley_config(t: LatticeTuple, I) -> CayleyConfig:
    """Union over i in I of {e_i} x A_i inside Z^k x Z^n (I is 0-based)."""
    I = tuple(sorted(set(I)))
    if not I:
        raise ValueError("index set must be nonempty")
    k = len(t)
    pts = []
    for i in I:
        e = tuple(int(j == i) for j in range(k))
        pts.extend(e + p for p in t[i].points)
    return CayleyConfig(LatticeSet(pts, k + t.dim), t, I)
