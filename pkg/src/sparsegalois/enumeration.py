"""Irreducible pairs of lattice polygons of small mixed volume in Z^2.

Mixed volume only sees convex hulls, so the search runs over lattice
polygons (sets equal to all lattice points of their hull).  Every
2-dimensional lattice polygon contains a unimodular triangle, so up to
GL(2, Z) and shifts the first polygon P contains the standard simplex D.
Then MV(D, Q) <= V, and MV(D, Q) = max(x + y) - min x - min y, so after a
shift Q lies in the dilate V * D.  For each such Q the polygons P containing
D are grown point by point; MV is monotone under inclusion, so a branch is
cut as soon as MV exceeds V.  Pairs are deduplicated by the unordered normal
form, and a pair is maximal when no single added lattice point (on either
side) keeps MV <= V.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations

from .errors import BoundsTooLarge
from .lattice import LatticeSet, LatticeTuple
from .normalform import unimodular_normal_form
from .polytope import area2, hull_2d

log = logging.getLogger(__name__)

Poly = frozenset  # of (x, y) lattice points

SIMPLEX = frozenset({(0, 0), (1, 0), (0, 1)})
# Affine automorphisms of Z^2 mapping the standard simplex to itself.
_SIMPLEX_SYMMETRIES = [
    lambda x, y: (x, y),
    lambda x, y: (y, x),
    lambda x, y: (1 - x - y, y),
    lambda x, y: (y, 1 - x - y),
    lambda x, y: (1 - x - y, x),
    lambda x, y: (x, 1 - x - y),
]


@dataclass
class EnumerationBounds:
    V_max: int
    n: int = 2
    box_radius: int | None = None  # None: 3 * V_max + 2
    max_points: int | None = None  # per set, optional safety cap
    volume_cap: int | None = None  # None: N^N V^(2^N) = 4 V^4

    def __post_init__(self):
        if self.n not in (1, 2):
            raise BoundsTooLarge("enumeration is implemented for n = 1 and n = 2")
        if self.V_max < 1:
            raise ValueError("V_max must be positive")
        if self.V_max > 4:
            raise BoundsTooLarge("V_max > 4 is outside desk scale")
        if self.box_radius is None:
            self.box_radius = 3 * self.V_max + 2
        bound = self.n**self.n * self.V_max ** (2**self.n)
        if self.volume_cap is None:
            self.volume_cap = bound
        if self.volume_cap > bound:
            raise ValueError("volume cap cannot exceed N^N V^(2^N)")


@dataclass
class EnumerationResult:
    bounds: EnumerationBounds
    tuples: list[LatticeTuple]
    maximal: list[LatticeTuple]
    mixed_volumes: list[int]
    encodings: list[bytes]
    box_saturated: bool = False
    stats: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "V_max": self.bounds.V_max,
            "n": self.bounds.n,
            "box_radius": self.bounds.box_radius,
            "count": len(self.tuples),
            "maximal_count": len(self.maximal),
            "maximal": [t.to_lists() for t in self.maximal],
            "box_saturated": self.box_saturated,
            "stats": self.stats,
        }


# ---------------------------------------------------------------------------
# 2D polygon helpers
# ---------------------------------------------------------------------------


def lattice_points(points) -> Poly:
    """All lattice points of conv(points) (points span a polygon, segment or point)."""
    h = hull_2d(points)
    if len(h) <= 2:
        if len(h) == 1:
            return frozenset(h)
        (x0, y0), (x1, y1) = h
        from math import gcd

        g = gcd(x1 - x0, y1 - y0)
        return frozenset((x0 + k * (x1 - x0) // g, y0 + k * (y1 - y0) // g) for k in range(g + 1))
    xs = [p[0] for p in h]
    ys = [p[1] for p in h]
    edges = [(h[i], h[(i + 1) % len(h)]) for i in range(len(h))]
    out = []
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            if all((b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]) >= 0 for a, b in edges):
                out.append((x, y))
    return frozenset(out)


def _msum_hull(h1, h2):
    return hull_2d([(a[0] + b[0], a[1] + b[1]) for a in h1 for b in h2])


def mv2(P, Q) -> int:
    """Mixed volume of two point sets in Z^2."""
    hp, hq = hull_2d(P), hull_2d(Q)
    vp = area2(hp) if len(hp) > 2 else 0
    vq = area2(hq) if len(hq) > 2 else 0
    hs = _msum_hull(hp, hq)
    vs = area2(hs) if len(hs) > 2 else 0
    return (vs - vp - vq) // 2


def _normalize_shift(P) -> Poly:
    mx = min(p[0] for p in P)
    my = min(p[1] for p in P)
    return frozenset((x - mx, y - my) for x, y in P)


def _is_2d(P) -> bool:
    return len(hull_2d(P)) >= 3


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------


def _q_candidates(V: int) -> list[Poly]:
    """2-dim lattice polygons in V*D touching both axes, up to the symmetries of D."""
    box = [(x, y) for x in range(V + 1) for y in range(V + 1 - x)]
    seen: set = set()
    reps = []
    frontier = set()
    for tri in combinations(box, 3):
        if _is_2d(tri):
            frontier.add(lattice_points(tri))
    allpolys = set(frontier)
    while frontier:
        nxt = set()
        for P in frontier:
            for p in box:
                if p not in P:
                    R = lattice_points(P | {p})
                    if R not in allpolys:
                        allpolys.add(R)
                        nxt.add(R)
        frontier = nxt
    for P in sorted(allpolys, key=lambda s: (len(s), sorted(s))):
        Q = _normalize_shift(P)
        key = min(tuple(sorted(_normalize_shift({f(x, y) for x, y in Q}))) for f in _SIMPLEX_SYMMETRIES)
        if key not in seen:
            seen.add(key)
            reps.append(frozenset(key))
    return reps


def _grow(base: Poly, Q: Poly, cand: list, V: int, visited: dict, max_points):
    """All polygons containing ``base`` using points of ``cand`` with MV(., Q) <= V."""
    cset = frozenset(cand)
    stack = [base]
    while stack:
        P = stack.pop()
        for p in cand:
            if p in P:
                continue
            R = lattice_points(P | {p})
            if R in visited:
                continue
            if not R <= cset or (max_points and len(R) > max_points):
                visited[R] = None
                continue
            m = mv2(R, Q)
            visited[R] = m if m <= V else None
            if m <= V:
                stack.append(R)


def _enumerate_1d(bounds: EnumerationBounds) -> EnumerationResult:
    V = bounds.V_max
    tuples = [LatticeTuple([LatticeSet([(k,) for k in range(d + 1)], 1)], 1) for d in range(1, V + 1)]
    return EnumerationResult(
        bounds, tuples, [tuples[-1]], list(range(1, V + 1)), [unimodular_normal_form(t) for t in tuples]
    )


def enumerate_irreducible(bounds: EnumerationBounds) -> EnumerationResult:
    """All irreducible lattice-polygon tuples with MV <= V_max, up to equivalence."""
    if bounds.n == 1:
        return _enumerate_1d(bounds)
    V = bounds.V_max
    R = bounds.box_radius
    box = [(x, y) for x in range(-R, R + 1) for y in range(-R, R + 1)]
    pairs: dict[bytes, tuple] = {}
    saturated = False
    qs = _q_candidates(V)
    n_polys = 0
    for Q in qs:
        if mv2(SIMPLEX, Q) > V:
            continue
        cand = [p for p in box if mv2(SIMPLEX | {p}, Q) <= V]
        if any(max(abs(p[0]), abs(p[1])) == R for p in cand):
            saturated = True
        visited: dict = {SIMPLEX: mv2(SIMPLEX, Q)}
        _grow(SIMPLEX, Q, cand, V, visited, bounds.max_points)
        for P, m in visited.items():
            if m is None:
                continue
            n_polys += 1
            t = LatticeTuple([LatticeSet(sorted(P), 2), LatticeSet(sorted(Q), 2)], 2)
            key = unimodular_normal_form(t, unordered=True)
            if key not in pairs:
                pairs[key] = (t, m, P, Q)
    tuples, mvs, encs, maximal = [], [], [], []
    for key in sorted(pairs):
        t, m, P, Q = pairs[key]
        tuples.append(t)
        mvs.append(m)
        encs.append(key)
        if _is_maximal(P, Q, V, R):
            maximal.append(t)
    stats = {"q_polygons": len(qs), "pairs_visited": n_polys}
    if saturated:
        log.warning("candidate region touches the box; increase box_radius")
    return EnumerationResult(bounds, tuples, maximal, mvs, encs, saturated, stats)


def _is_maximal(P: Poly, Q: Poly, V: int, R: int) -> bool:
    """No single lattice point can be added to P or to Q keeping MV <= V."""
    for A, B in ((P, Q), (Q, P)):
        xs = [p[0] for p in A]
        ys = [p[1] for p in A]
        # Any admissible extension point lies within MV-distance V of A; a box of
        # half-width R around A is enough since the candidate regions fit in R.
        for x in range(min(xs) - R, max(xs) + R + 1):
            for y in range(min(ys) - R, max(ys) + R + 1):
                if (x, y) in A:
                    continue
                if mv2(A | {(x, y)}, B) <= V:
                    return False
    return True
