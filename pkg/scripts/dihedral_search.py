"""Search small reducible planar pairs for a sampled monodromy group D8.

Candidates are pairs of lattice sets in [0, B]^2 with MV = 4 whose prediction
is two blocks of two.  Each class (up to unimodular maps and shifts) is
sampled once; the group names are tallied and the D8 hits printed.  The
result is reported only; nothing here is asserted.

    python scripts/dihedral_search.py --box 2 --limit 40 --budget 150
"""

from __future__ import annotations

import argparse
from collections import Counter
from itertools import combinations

from sparsegalois.classify import predict_monodromy
from sparsegalois.errors import DegenerateSystem, Inconclusive
from sparsegalois.lattice import LatticeTuple
from sparsegalois.monodromy import monodromy_group
from sparsegalois.normalform import unimodular_normal_form
from sparsegalois.polytope import mixed_volume


def candidates(B: int, max_size: int):
    box = [(x, y) for x in range(B + 1) for y in range(B + 1)]
    sets = [s for k in range(2, max_size + 1) for s in combinations(box, k) if (0, 0) in s]
    seen = set()
    for i, A in enumerate(sets):
        for Bs in sets[i:]:
            t = LatticeTuple.from_lists([list(A), list(Bs)])
            if mixed_volume(t) != 4:
                continue
            key = unimodular_normal_form(t, unordered=True)
            if key in seen:
                continue
            seen.add(key)
            pred = predict_monodromy(t)
            if pred.verdict == "Imprimitive" and (pred.block_count, pred.block_size) == (2, 2):
                yield t, pred


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--box", type=int, default=2)
    ap.add_argument("--max-size", type=int, default=3)
    ap.add_argument("--limit", type=int, default=40)
    ap.add_argument("--budget", type=int, default=150)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    tally = Counter()
    for k, (t, pred) in enumerate(candidates(args.box, args.max_size)):
        if k >= args.limit:
            break
        sets = [sorted(s.points) for s in t.sets]
        try:
            g = monodromy_group(t, args.budget, args.seed, strict=False).group
        except (Inconclusive, DegenerateSystem) as e:
            tally["inconclusive"] += 1
            print(f"{sets}  inconclusive: {e}")
            continue
        tally[g.name()] += 1
        mark = "  <-- dihedral" if g.name() == "D8" else ""
        print(f"{sets}  {g.name()} |G|={g.order}{mark}")
    print("tally:", dict(tally))


if __name__ == "__main__":
    main()
