import random
from itertools import combinations, permutations
from math import factorial, gcd

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from conftest import lattice_sets, square_tuples
from sparsegalois.errors import DimensionMismatch
from sparsegalois.lattice import LatticeSet, LatticeTuple, rank
from sparsegalois.polytope import (
    embed,
    hull_2d,
    lattice_volume,
    minkowski_sum,
    mixed_volume,
    product_formula_check,
    vertices,
)


def simplex(n, scale=1):
    return LatticeSet([tuple(0 for _ in range(n))] + [tuple(scale * (i == j) for j in range(n)) for i in range(n)], n)


def scipy_volume(pts):
    P = np.array(pts, dtype=float)
    n = P.shape[1]
    if len(P) <= n or np.linalg.matrix_rank(P[1:] - P[0]) < n:
        return 0
    if n == 1:
        return int(P.max() - P.min())
    return int(round(ConvexHull(P).volume * factorial(n)))


def edge_formula_mv(P, Q):
    """MV of two planar sets: sum over edges of conv P of length * support of Q."""
    h = hull_2d(P)
    if len(h) < 2:
        return 0
    total = 0
    cyc = list(zip(h, h[1:] + h[:1])) if len(h) > 2 else [(h[0], h[1]), (h[1], h[0])]
    for a, b in cyc:
        dx, dy = b[0] - a[0], b[1] - a[1]
        g = gcd(dx, dy)
        u = (dy // g, -dx // g)
        total += g * max(u[0] * q[0] + u[1] * q[1] for q in Q)
    return total


def dependent(t):
    """Some subset S has difference-lattice rank < |S| (brute force)."""
    k = len(t)
    for r in range(1, k + 1):
        for S in combinations(range(k), r):
            diffs = [v for i in S for v in t[i].differences()]
            if (rank(diffs) if diffs else 0) < r:
                return True
    return False


def test_simplex_and_segment_values():
    for n in (1, 2, 3):
        assert mixed_volume(LatticeTuple([simplex(n)] * n, n)) == 1
    for d in range(1, 9):
        assert mixed_volume(LatticeTuple([LatticeSet([(0,), (d,)], 1)], 1)) == d
    assert mixed_volume(LatticeTuple([simplex(2, 2)] * 2, 2)) == 4
    sq = LatticeSet([(0, 0), (1, 0), (0, 1), (1, 1)], 2)
    assert mixed_volume(LatticeTuple([sq, sq], 2)) == 2
    assert mixed_volume(LatticeTuple([sq, simplex(2)], 2)) == 2


def test_triangle_plus_square_volume():
    sq = LatticeSet([(0, 0), (1, 0), (0, 1), (1, 1)], 2)
    S = minkowski_sum(sq, simplex(2))
    assert sorted(hull_2d(S.points)) == [(0, 0), (0, 2), (1, 2), (2, 0), (2, 1)]
    # shoelace area 7/2, normalized by 2!
    assert lattice_volume(S) == 7
    assert round(2 * ConvexHull(np.array(sorted(S.points))).volume) == 7


def test_multilinear_scaling():
    # MV(2D, D, D) = 2 and MV(aD, bD, cD) = abc in Z^3
    for a, b, c in [(1, 1, 2), (2, 3, 1), (2, 2, 2)]:
        t = LatticeTuple([simplex(3, a), simplex(3, b), simplex(3, c)], 3)
        assert mixed_volume(t) == a * b * c


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(st.just(n), lattice_sets(n, 1, 6))))
def test_mv_of_equal_sets_is_volume(arg):
    n, A = arg
    t = LatticeTuple([A] * n, n)
    assert mixed_volume(t) == lattice_volume(A) == scipy_volume(A.points)


def test_mv_equals_volume_50_random():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.choice([2, 3])
        pts = {tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(rng.randint(n + 1, 7))}
        A = LatticeSet(sorted(pts), n)
        assert mixed_volume(LatticeTuple([A] * n, n)) == scipy_volume(A.points)


@given(lattice_sets(2, 1, 6), lattice_sets(2, 1, 6))
def test_planar_mv_edge_formula(P, Q):
    assert mixed_volume(LatticeTuple([P, Q], 2)) == edge_formula_mv(P.points, Q.points)


@given(square_tuples(3, 4))
def test_3d_polarization_against_scipy(t):
    # Alternating sum of normalized volumes of subsums, divided by 3!.
    total = 0
    for r in range(1, 4):
        for S in combinations(range(3), r):
            acc = t[S[0]]
            for i in S[1:]:
                acc = minkowski_sum(acc, t[i])
            total += (-1) ** (3 - r) * scipy_volume(acc.points)
    assert total % 6 == 0
    assert mixed_volume(t) == total // 6


@given(square_tuples(), st.randoms(use_true_random=False))
def test_symmetry_and_shift_invariance(t, rnd):
    mv = mixed_volume(t)
    order = list(range(len(t)))
    rnd.shuffle(order)
    assert mixed_volume(t.subtuple(order)) == mv
    moved = LatticeTuple([a.shift([rnd.randint(-4, 4) for _ in range(t.dim)]) for a in t], t.dim)
    assert mixed_volume(moved) == mv


@given(square_tuples(), st.data())
def test_monotone_under_adding_points(t, data):
    i = data.draw(st.integers(0, len(t) - 1))
    p = data.draw(st.tuples(*[st.integers(-3, 3)] * t.dim))
    bigger = list(t.sets)
    bigger[i] = LatticeSet(set(bigger[i].points) | {p}, t.dim)
    assert mixed_volume(LatticeTuple(bigger, t.dim)) >= mixed_volume(t)


@given(square_tuples(max_size=3))
def test_zero_iff_dependent(t):
    assert (mixed_volume(t) == 0) == dependent(t)


def test_zero_iff_dependent_100_random():
    rng = random.Random(5)
    for _ in range(100):
        n = rng.choice([1, 2, 3])
        sets = [LatticeSet({tuple(rng.randint(-1, 1) for _ in range(n)) for _ in range(rng.randint(1, 3))}, n)
                for _ in range(n)]
        t = LatticeTuple(sets, n)
        assert (mixed_volume(t) == 0) == dependent(t)


@given(square_tuples(max_size=4))
def test_af_descendants(t):
    # Replacing A_j by A_i keeps MV below MV(t)^2 whenever the result stays independent.
    mv = mixed_volume(t)
    if mv == 0:
        return
    for i, j in permutations(range(len(t)), 2):
        sets = list(t.sets)
        sets[j] = sets[i]
        d = LatticeTuple(sets, t.dim)
        md = mixed_volume(d)
        if md > 0:
            assert md <= mv * mv


def _random_block(rng, N, M):
    b = LatticeTuple(
        [LatticeSet({tuple(rng.randint(0, 2) for _ in range(N)) for _ in range(rng.randint(2, 4))}, N) for _ in range(N)],
        N,
    )
    a = LatticeTuple(
        [LatticeSet({tuple(rng.randint(-1, 2) for _ in range(N + M)) for _ in range(rng.randint(2, 4))}, N + M)
         for _ in range(M)],
        N + M,
    )
    return b, a


def test_product_formula_100_blocks():
    rng = random.Random(17)
    nonzero = 0
    for _ in range(100):
        N = rng.choice([1, 2])
        M = rng.choice([1, 2]) if N == 1 else 1
        b, a = _random_block(rng, N, M)
        lhs, rhs = product_formula_check(b, a)
        assert lhs == rhs
        nonzero += lhs > 0
    assert nonzero > 20


def test_product_formula_shape_errors():
    b = LatticeTuple([simplex(1)], 1)
    a = LatticeTuple([simplex(3)], 3)
    with pytest.raises(DimensionMismatch):
        product_formula_check(b, a)


def test_vertices_and_embed():
    sq = LatticeSet([(0, 0), (1, 0), (0, 1), (1, 1), (1, 0)], 2)
    assert set(vertices(sq)) == {(0, 0), (1, 0), (0, 1), (1, 1)}
    e = embed(simplex(2), 1, 4)
    assert e.dim == 4 and all(p[0] == 0 and p[3] == 0 for p in e.points)
    with pytest.raises(DimensionMismatch):
        minkowski_sum(simplex(2), simplex(3))
    with pytest.raises(DimensionMismatch):
        mixed_volume(LatticeTuple([simplex(2)], 2))
