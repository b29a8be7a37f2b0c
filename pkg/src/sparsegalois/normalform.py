"""Canonical encodings of lattice tuples up to GL(n, Z) and per-set shifts.

Every candidate linear frame is taken from data that transforms
equivariantly (hull edge vectors of the sets), the tuple is mapped into each
frame, each set is translated so its lexicographic minimum is the origin,
and the lexicographically least serialization wins.  Since the candidate
pool of an equivalent tuple is the image of the original pool, the minimum
is an invariant.  The frame from an ordered basis B is the unique unimodular
U making U @ B Hermite-normal, so the construction is exact in any
dimension; it is exhaustive over the pool, hence cost grows like
|pool|^n.  In Z^2 a cheaper frame (edge direction + sign + a canonical shear)
is used.
"""

from __future__ import annotations

import json
from itertools import permutations
from math import gcd

from .lattice import (
    LatticeSet,
    LatticeTuple,
    Point,
    generated_lattice,
    hnf,
    adjugate,
    rank,
    xgcd,
    primitive,
)
from .polytope import hull_2d, vertices


def _edge_pool(sets: list[list[Point]], n: int) -> list[tuple[tuple, Point]]:
    """Hull edge vectors (both orientations) keyed by a GL-invariant label."""
    pool = set()
    for i, pts in enumerate(sets):
        if len(pts) < 2:
            continue
        if n == 2:
            h = hull_2d(pts)
            if len(h) == 2:
                pairs = [(h[0], h[1])]
            else:
                pairs = [(h[k], h[(k + 1) % len(h)]) for k in range(len(h))]
        else:
            vs = vertices(pts)
            pairs = [(a, b) for k, a in enumerate(vs) for b in vs[k + 1 :]]
        for a, b in pairs:
            v = tuple(x - y for x, y in zip(a, b))
            g = 0
            for x in v:
                g = gcd(g, x)
            on_line = sum(1 for p in pts if rank([v, [x - y for x, y in zip(p, b)]]) < 2)
            key = (i, g, -on_line)
            pool.add((key, v))
            pool.add((key, tuple(-x for x in v)))
    return sorted(pool)


def _serialize(sets: list[list[Point]]) -> tuple:
    out = []
    for pts in sets:
        m = min(pts)
        out.append(tuple(sorted(tuple(a - b for a, b in zip(p, m)) for p in pts)))
    return tuple(out)


def _apply(U, sets):
    return [[tuple(sum(u * x for u, x in zip(row, p)) for row in U) for p in pts] for pts in sets]


def _canonical_general(sets: list[list[Point]], n: int) -> tuple:
    if n == 0:
        return tuple(((),) for _ in sets)
    pool = _edge_pool(sets, n)
    best = None

    def extend(chosen):
        nonlocal best
        if len(chosen) == n:
            B = [[chosen[j][i] for j in range(n)] for i in range(n)]  # columns = vectors
            H, _ = hnf(B)
            adj, d = adjugate(B)
            U = [[sum(H[i][k] * adj[k][j] for k in range(n)) // d for j in range(n)] for i in range(n)]
            enc = _serialize(_apply(U, sets))
            if best is None or enc < best:
                best = enc
            return
        free = []
        for key, v in pool:
            if rank(chosen + [v]) == len(chosen) + 1:
                # Index of the partial frame in its saturation is GL-invariant.
                idx = generated_lattice(chosen + [v], n).saturation_index
                free.append(((idx, key), v))
        kmin = min(k for k, _ in free)
        for k, v in free:
            if k == kmin:
                extend(chosen + [v])

    extend([])
    return best


def _canonical_2d(sets: list[list[Point]]) -> tuple:
    pool = {primitive(v) for _, v in _edge_pool(sets, 2)}
    diffs = {
        (p[0] - q[0], p[1] - q[1]) for pts in sets for p in pts for q in pts if p != q
    }
    best = None
    for a, b in sorted(pool):
        _, s, t = xgcd(a, b)
        for sign in (1, -1):
            U = [[s, t], [-b * sign, a * sign]]
            ys = [(U[1][0] * dx + U[1][1] * dy, U[0][0] * dx + U[0][1] * dy) for dx, dy in diffs]
            pos = [(y, x) for y, x in ys if y > 0]
            if pos:
                y0 = min(y for y, _ in pos)
                xmin = min(x for y, x in pos if y == y0)
                k = (xmin % y0 - xmin) // y0
                U = [[U[0][0] + k * U[1][0], U[0][1] + k * U[1][1]], U[1]]
            enc = _serialize(_apply(U, sets))
            if best is None or enc < best:
                best = enc
    return best


def _canonical(sets: list[list[Point]], n: int, method: str) -> tuple:
    if n == 1:
        return min(_serialize(sets), _serialize([[(-p[0],) for p in pts] for pts in sets]))
    if method == "2d":
        return _canonical_2d(sets)
    return _canonical_general(sets, n)


def canonical_form(t: LatticeTuple, unordered: bool = False, method: str = "auto") -> tuple:
    """Canonical representative (as nested tuples) of the equivalence class of t."""
    n = t.dim
    sets = [list(s.points) for s in t]
    diffs = [tuple(a - b for a, b in zip(p, pts[0])) for pts in sets for p in pts[1:]]
    info = generated_lattice(diffs, n) if diffs else None
    r = info.rank if info is not None else 0
    if r < n:
        # Work inside the saturated span; any basis of it differs by GL(r).
        sets = [
            [info.saturation_coords(tuple(a - b for a, b in zip(p, pts[0]))) if info else () for p in pts]
            for pts in sets
        ]
    if method == "auto":
        method = "2d" if r == 2 else "general"
    orders = permutations(range(len(sets))) if unordered else [tuple(range(len(sets)))]
    best = None
    for order in orders:
        enc = _canonical([sets[i] for i in order], r, method)
        if best is None or enc < best:
            best = enc
    return (n, r, best)


def unimodular_normal_form(t: LatticeTuple, unordered: bool = False, method: str = "auto") -> bytes:
    """Deterministic byte encoding, equal for tuples related by GL(n, Z) and shifts.

    With ``unordered=True`` the order of the sets is ignored as well.
    """
    n, r, sets = canonical_form(t, unordered, method)
    return json.dumps({"n": n, "rank": r, "sets": sets}, separators=(",", ":")).encode()


def canonical_tuple(t: LatticeTuple, unordered: bool = False) -> LatticeTuple:
    """The canonical representative as a tuple (only when full rank)."""
    n, r, sets = canonical_form(t, unordered)
    if r != n:
        return t.normalized()
    return LatticeTuple([LatticeSet(s, n) for s in sets], n)
