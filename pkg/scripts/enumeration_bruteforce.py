"""Brute-force cross-check of the polygon-pair enumeration.

Lists every pair of lattice polygons inside the box [0, B]^2 (up to shift),
computes mixed volumes with the edge formula
    MV(P, Q) = sum over edges e of P of  length(e) * h_Q(outer normal of e),
keeps the pairs that cannot be enlarged inside the box, and checks that
every globally maximal one is in the growth search's maximal list.

    python scripts/enumeration_bruteforce.py --vmax 3 --box 3
"""

from __future__ import annotations

import argparse
import time
from itertools import combinations
from math import gcd

import numpy as np

from sparsegalois.enumeration import (
    EnumerationBounds,
    _is_2d,
    _is_maximal,
    enumerate_irreducible,
    lattice_points,
)
from sparsegalois.lattice import LatticeTuple
from sparsegalois.normalform import unimodular_normal_form
from sparsegalois.polytope import hull_2d


def polygons(B: int) -> list[frozenset]:
    box = [(x, y) for x in range(B + 1) for y in range(B + 1)]
    front = {lattice_points(t) for t in combinations(box, 3) if _is_2d(t)}
    seen = set(front)
    while front:
        nxt = set()
        for P in front:
            for p in box:
                if p not in P:
                    R = lattice_points(P | {p})
                    if R not in seen:
                        seen.add(R)
                        nxt.add(R)
        front = nxt
    out = set()
    for P in seen:
        mx = min(p[0] for p in P)
        my = min(p[1] for p in P)
        out.add(frozenset((x - mx, y - my) for x, y in P))
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def edges(P):
    h = hull_2d(P)
    out = []
    for a, b in zip(h, h[1:] + h[:1]):
        dx, dy = b[0] - a[0], b[1] - a[1]
        g = gcd(dx, dy)
        out.append((g, (dy // g, -dx // g)))  # outer normal of a CCW edge
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--vmax", type=int, default=3)
    ap.add_argument("--box", type=int, default=3)
    ap.add_argument("--all", action="store_true", help="also compare every class, not only maximal ones")
    a = ap.parse_args()
    V, B = a.vmax, a.box
    t0 = time.time()
    ps = polygons(B)
    E = [edges(P) for P in ps]
    dirs = sorted({u for es in E for _, u in es})
    didx = {u: i for i, u in enumerate(dirs)}
    pts = [np.array(sorted(P)) for P in ps]
    H = np.array([[int((p @ np.array(u)).max()) for p in pts] for u in dirs])  # (dirs, polys)
    print(f"{len(ps)} polygons, {len(dirs)} normal directions ({time.time() - t0:.1f}s)")
    index = {P: i for i, P in enumerate(ps)}
    mv = {}
    for i, es in enumerate(E):
        row = sum(l * H[didx[u]] for l, u in es)
        for j in np.flatnonzero(row <= V):
            mv[(i, int(j))] = int(row[j])
    print(f"{len(mv)} ordered pairs with MV <= {V}")

    box = [(x, y) for x in range(B + 1) for y in range(B + 1)]

    def extensions(P):
        out = []
        for p in box:
            if p not in P:
                R = lattice_points(P | {p})
                mx = min(q[0] for q in R)
                my = min(q[1] for q in R)
                out.append(index[frozenset((x - mx, y - my) for x, y in R)])
        return out

    ext = [None] * len(ps)
    cand = []
    for (i, j), m in mv.items():
        if ext[i] is None:
            ext[i] = extensions(ps[i])
        if ext[j] is None:
            ext[j] = extensions(ps[j])
        # Shifts within the box are also enlargements; box-maximal means none fits.
        if any((k, j) in mv for k in ext[i]) or any((i, k) in mv for k in ext[j]):
            continue
        cand.append((i, j))
    print(f"{len(cand)} box-maximal pairs")
    classes = {}
    for i, j in cand:
        if not _is_maximal(ps[i], ps[j], V, 3 * V + 2):
            continue
        t = LatticeTuple.from_lists([sorted(ps[i]), sorted(ps[j])])
        classes.setdefault(unimodular_normal_form(t, unordered=True), t)
    res = enumerate_irreducible(EnumerationBounds(V))
    mine = {unimodular_normal_form(t, unordered=True) for t in res.maximal}
    missing = [t for k, t in classes.items() if k not in mine]
    print(f"globally maximal classes in the box: {len(classes)}; growth search maximal: {len(mine)}")
    print(f"missing from the growth search: {len(missing)}")
    for t in missing:
        print("  ", t.to_lists())
    if a.all:
        allc = {}
        for (i, j), m in mv.items():
            if i <= j:
                t = LatticeTuple.from_lists([sorted(ps[i]), sorted(ps[j])])
                allc.setdefault(unimodular_normal_form(t, unordered=True), t)
        lost = [t for k, t in allc.items() if k not in set(res.encodings)]
        print(f"all classes in the box: {len(allc)}; growth search: {len(res.encodings)}; missing: {len(lost)}")
        for t in lost:
            print("  ", t.to_lists())


if __name__ == "__main__":
    main()
