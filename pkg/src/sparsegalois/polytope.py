"""Convex hulls, lattice volumes and lattice mixed volumes, all exact.

Volumes are *normalized*: ``lattice_volume`` is n! times the Euclidean volume,
so the standard simplex has volume 1.  The mixed volume uses the same
normalization (MV(A, ..., A) == lattice_volume(A)).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import factorial

from .errors import DimensionMismatch
from .lattice import LatticeSet, LatticeTuple, Point, det, generated_lattice, rank


@dataclass(frozen=True)
class Polytope:
    vertices: tuple[Point, ...]
    dim: int
    intrinsic_dim: int


# ---------------------------------------------------------------------------
# Low-dimensional fast paths
# ---------------------------------------------------------------------------


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_2d(points) -> list[Point]:
    """Strict convex hull vertices in counterclockwise order (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull


def area2(hull: list[Point]) -> int:
    """Twice the area of a polygon given by ordered vertices (= lattice volume)."""
    s = 0
    k = len(hull)
    for i in range(k):
        x1, y1 = hull[i]
        x2, y2 = hull[(i + 1) % k]
        s += x1 * y2 - x2 * y1
    return abs(s)


# ---------------------------------------------------------------------------
# Placing triangulation in any dimension
# ---------------------------------------------------------------------------


def _facet_normal(pts: list[Point]) -> list[int]:
    d = len(pts[0])
    rows = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
    normal = []
    for j in range(d):
        minor = [[r[c] for c in range(d) if c != j] for r in rows]
        normal.append((-1) ** j * det(minor))
    return normal


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


@dataclass
class _Placing:
    volume: int
    facets: list  # (index tuple, normal, offset)
    points: list


def _placing_triangulation(points: list[Point], d: int) -> _Placing | None:
    """Placing triangulation of full-dimensional ``points``; None if not full-dim."""
    pts = sorted(set(points))
    base = [pts[0]]
    diffs: list[list[int]] = []
    for p in pts[1:]:
        v = [a - b for a, b in zip(p, pts[0])]
        if rank(diffs + [v]) > len(diffs):
            diffs.append(v)
            base.append(p)
            if len(base) == d + 1:
                break
    if len(base) < d + 1:
        return None
    center = [sum(c) for c in zip(*base)]  # (d+1) * barycenter
    index = {p: i for i, p in enumerate(pts)}

    def make_facet(idx):
        fp = [pts[i] for i in idx]
        nrm = _facet_normal(fp)
        off = _dot(nrm, fp[0])
        if _dot(nrm, center) > (d + 1) * off:
            nrm = [-x for x in nrm]
            off = -off
        return (tuple(sorted(idx)), nrm, off)

    bidx = [index[p] for p in base]
    volume = abs(det([[a - b for a, b in zip(pts[i], base[0])] for i in bidx[1:]]))
    facets = [make_facet([i for i in bidx if i != skip]) for skip in bidx]
    in_base = set(bidx)
    for pi, p in enumerate(pts):
        if pi in in_base:
            continue
        visible = [f for f in facets if _dot(f[1], p) > f[2]]
        if not visible:
            continue
        ridges: Counter = Counter()
        for idx, _, _ in visible:
            volume += abs(det([[a - b for a, b in zip(pts[i], p)] for i in idx]))
            for r in combinations(idx, d - 1):
                ridges[r] += 1
        vis_ids = {f[0] for f in visible}
        facets = [f for f in facets if f[0] not in vis_ids]
        for r, cnt in ridges.items():
            if cnt == 1:
                facets.append(make_facet(list(r) + [pi]))
    return _Placing(volume=volume, facets=facets, points=pts)


def _affine_chart(points: list[Point]):
    """Integer coordinates of ``points`` in their affine span, plus its rank."""
    p0 = points[0]
    info = generated_lattice([[a - b for a, b in zip(p, p0)] for p in points], len(p0))
    coords = [info.saturation_coords([a - b for a, b in zip(p, p0)]) for p in points]
    return coords, info.rank


@lru_cache(maxsize=65536)
def _vertices(points: tuple[Point, ...]) -> tuple[Point, ...]:
    pts = sorted(set(points))
    if len(pts) <= 2:
        return tuple(pts)
    d = len(pts[0])
    if d == 1:
        return (pts[0], pts[-1])
    coords, r = _affine_chart(pts)
    if r < d:
        back = dict(zip(coords, pts))
        return tuple(sorted(back[c] for c in _vertices(tuple(coords)))) if r > 0 else (pts[0],)
    if d == 2:
        return tuple(sorted(hull_2d(pts)))
    pl = _placing_triangulation(pts, d)
    normals: dict[int, list] = {}
    for idx, nrm, _ in pl.facets:
        for i in idx:
            normals.setdefault(i, []).append(nrm)
    return tuple(sorted(pl.points[i] for i, ns in normals.items() if rank(ns) == d))


def vertices(s) -> tuple[Point, ...]:
    """Extreme points of the convex hull of a point collection."""
    pts = s.points if isinstance(s, LatticeSet) else tuple(tuple(p) for p in s)
    return _vertices(tuple(sorted(set(pts))))


def polytope(s: LatticeSet) -> Polytope:
    vs = vertices(s)
    r = generated_lattice([[a - b for a, b in zip(p, vs[0])] for p in vs], s.dim).rank
    return Polytope(vertices=vs, dim=s.dim, intrinsic_dim=r)


@lru_cache(maxsize=65536)
def _normalized_volume(points: tuple[Point, ...]) -> int:
    d = len(points[0])
    if d == 1:
        return max(p[0] for p in points) - min(p[0] for p in points)
    if d == 2:
        return area2(hull_2d(points))
    pl = _placing_triangulation(list(points), d)
    return 0 if pl is None else pl.volume


def lattice_volume(s) -> int:
    """n! times the Euclidean volume of conv(s); 0 for lower-dimensional sets."""
    pts = s.points if isinstance(s, LatticeSet) else tuple(tuple(p) for p in s)
    if not pts:
        return 0
    return _normalized_volume(vertices(pts))


def minkowski_sum(a, b) -> LatticeSet:
    pa = a.points if isinstance(a, LatticeSet) else a
    pb = b.points if isinstance(b, LatticeSet) else b
    if len(pa[0]) != len(pb[0]):
        raise DimensionMismatch("Minkowski summands live in different lattices")
    return LatticeSet({tuple(x + y for x, y in zip(p, q)) for p in pa for q in pb})


# ---------------------------------------------------------------------------
# Mixed volume
# ---------------------------------------------------------------------------


def _mixed_volume_points(sets: list[tuple[Point, ...]], n: int) -> int:
    if n == 1:
        return _normalized_volume(sets[0])
    verts = [vertices(s) for s in sets]
    if n == 2:
        p, q = verts
        pq = vertices(minkowski_sum(p, q).points)
        return (lattice_volume(pq) - lattice_volume(p) - lattice_volume(q)) // 2
    total = 0
    for size in range(1, n + 1):
        sign = -1 if (n - size) % 2 else 1
        for S in combinations(range(n), size):
            acc = verts[S[0]]
            for i in S[1:]:
                acc = vertices(minkowski_sum(acc, verts[i]).points)
            total += sign * lattice_volume(acc)
    q, r = divmod(total, factorial(n))
    assert r == 0, "inclusion-exclusion did not produce an integer"
    return q


def mixed_volume(t: LatticeTuple) -> int:
    """Lattice mixed volume of a square tuple (n sets in Z^n).

    Inclusion-exclusion over the 2^n - 1 Minkowski subsums; the n! of the
    normalization cancels the 1/n! of the polarization formula.
    """
    t.require_square()
    n = t.dim
    diff = generated_lattice([v for s in t for v in s.differences()], n)
    if diff.rank < n:
        return 0
    return _mixed_volume_points([s.points for s in t], n)


def embed(s: LatticeSet, offset: int, total_dim: int) -> LatticeSet:
    """Place s in coordinates offset..offset+dim-1 of Z^total_dim."""
    return LatticeSet(
        [(0,) * offset + p + (0,) * (total_dim - offset - s.dim) for p in s.points], total_dim
    )


def project(s: LatticeSet, coords) -> LatticeSet:
    return LatticeSet([tuple(p[i] for i in coords) for p in s.points], len(coords))


def product_formula_check(b_tuple: LatticeTuple, a_tuple: LatticeTuple) -> tuple[int, int]:
    """Both sides of MV(A, B) = MV(pA) * MV(B).

    ``b_tuple`` has N sets in Z^N, ``a_tuple`` has M sets in Z^N + Z^M and
    p projects onto the last M coordinates.
    """
    N = b_tuple.dim
    M = len(a_tuple)
    if len(b_tuple) != N or a_tuple.dim != N + M:
        raise DimensionMismatch("shapes do not fit the product formula")
    combined = LatticeTuple([*a_tuple.sets, *(embed(b, 0, N + M) for b in b_tuple)], N + M)
    lhs = mixed_volume(combined)
    pa = LatticeTuple([project(a, range(N, N + M)) for a in a_tuple], M)
    rhs = mixed_volume(pa) * mixed_volume(b_tuple)
    return lhs, rhs
