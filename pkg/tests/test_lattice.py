import random
from functools import reduce
from itertools import combinations, product
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_unimodular, square_tuples
from sparsegalois.lattice import (
    LatticeSet,
    LatticeTuple,
    det,
    generated_lattice,
    hnf,
    in_lattice,
    intermediate_lattices,
    mat_mul,
    rank,
    snf,
)
from sparsegalois.normalform import canonical_tuple, unimodular_normal_form

small_matrix = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


def _minors_gcd(rows, r):
    n = len(rows[0])
    vals = []
    for ri in combinations(range(len(rows)), r):
        for ci in combinations(range(n), r):
            vals.append(abs(det([[rows[i][j] for j in ci] for i in ri])))
    return reduce(gcd, vals, 0)


@given(small_matrix)
def test_snf_diagonalizes(M):
    d = snf(M)
    D = mat_mul(mat_mul(d.left, M), d.right)
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    diag = [D[i][i] for i in range(min(len(M), len(M[0])))]
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert abs(det(d.left)) == 1 and abs(det(d.right)) == 1
    assert mat_mul(d.right, d.right_inv) == [[int(i == j) for j in range(len(M[0]))] for i in range(len(M[0]))]


@given(small_matrix)
def test_snf_divisors_match_minor_gcds(M):
    # d_1 * ... * d_k equals the gcd of the k x k minors.
    d = snf(M)
    nz = [x for x in d.divisors if x]
    assert d.rank == rank(M) == len(nz)
    acc = 1
    for k, x in enumerate(nz, start=1):
        acc *= x
        assert acc == _minors_gcd(M, k)


@given(small_matrix, st.integers(0, 10**6))
def test_hnf_unique_for_row_lattice(M, s):
    H, U = hnf(M)
    assert mat_mul(U, M) == H
    assert abs(det(U)) == 1
    W = random_unimodular(len(M), random.Random(s))
    H2, _ = hnf(mat_mul(W, M))
    assert H2 == H


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=3))
def test_saturation_index_brute_force(vs):
    info = generated_lattice(vs, 3)
    r = info.rank
    assert r == rank(vs)
    if r == 0:
        assert info.saturation_index == 1
        return
    # Index of L in its saturation is the gcd of the r x r minors of a basis.
    assert info.saturation_index == _minors_gcd([list(b) for b in info.basis], r)
    # Brute force: every small integer point of the rational span lies in L iff saturated.
    span_pts = [p for p in product(range(-3, 4), repeat=3) if rank(list(info.basis) + [p]) == r]
    all_in = all(in_lattice(p, info.basis) for p in span_pts)
    if info.saturation_index == 1:
        assert all_in
    else:
        assert not all(in_lattice(b, info.basis) for b in info.saturation_basis)
    for b in info.saturation_basis:
        assert rank(list(info.basis) + [b]) == r


def test_intermediate_lattices_of_cyclic_quotient():
    info = generated_lattice([(6, 0), (0, 1)], 2)
    idx = sorted(i for _, i in intermediate_lattices(info))
    assert info.cokernel == (6,)
    assert idx == [1, 2, 3, 6]


def test_intermediate_lattices_klein():
    info = generated_lattice([(2, 0), (0, 2)], 2)
    lats = intermediate_lattices(info)
    assert info.cokernel == (2, 2)
    assert sorted(i for _, i in lats) == [1, 2, 2, 2, 4]


@given(square_tuples(), st.integers(0, 10**6))
def test_normal_form_invariant(t, s):
    rng = random.Random(s)
    key = unimodular_normal_form(t)
    U = random_unimodular(t.dim, rng)
    moved = LatticeTuple([a.shift([rng.randint(-3, 3) for _ in range(t.dim)]) for a in t.transform(U)], t.dim)
    assert unimodular_normal_form(moved) == key


def test_normal_form_100_transforms():
    rng = random.Random(11)
    t = LatticeTuple.from_lists([[(0, 0), (2, 1), (1, 3), (3, 3)], [(0, 0), (1, 0), (1, 2)]])
    key = unimodular_normal_form(t)
    for _ in range(100):
        U = random_unimodular(2, rng)
        u = t.transform(U)
        u = LatticeTuple([a.shift([rng.randint(-5, 5), rng.randint(-5, 5)]) for a in u], 2)
        assert unimodular_normal_form(u) == key


def test_normal_form_separates_and_orders():
    a = LatticeTuple.from_lists([[(0, 0), (1, 0), (0, 1)], [(0, 0), (1, 0), (0, 1), (1, 1)]])
    b = LatticeTuple.from_lists([[(0, 0), (1, 0), (0, 1), (1, 1)], [(0, 0), (1, 0), (0, 1)]])
    assert unimodular_normal_form(a) != unimodular_normal_form(b)
    assert unimodular_normal_form(a, unordered=True) == unimodular_normal_form(b, unordered=True)
    c = LatticeTuple.from_lists([[(0, 0), (2, 0), (0, 2)], [(0, 0), (1, 0), (0, 1)]])
    assert unimodular_normal_form(a, unordered=True) != unimodular_normal_form(c, unordered=True)


def test_canonical_tuple_equivalent():
    t = LatticeTuple.from_lists([[(3, 1), (4, 3), (5, 4)], [(1, 1), (2, 2), (0, 1)]])
    c = canonical_tuple(t)
    assert unimodular_normal_form(c) == unimodular_normal_form(t)


def test_set_shift_and_differences():
    s = LatticeSet([(2, 3), (1, 1), (4, 0)], 2)
    assert s.normalized().points[0] == (0, 0)
    assert len(s.differences()) == 2
    with pytest.raises(Exception):
        LatticeSet([(1, 2), (1,)], 2)
