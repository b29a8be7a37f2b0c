"""Predicted vs sampled monodromy for every bundled tuple.

    python scripts/corpus_monodromy.py --budget 400 --seed 7 [--out table.json]
"""

from __future__ import annotations

import argparse
import json
import time

from sparsegalois.monodromy import verify_prediction
from sparsegalois.polytope import mixed_volume
from sparsegalois.tuplefile import corpus_names, load_corpus


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--budget", type=int, default=400)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--max-mv", type=int, default=8)
    ap.add_argument("--out")
    args = ap.parse_args()

    rows = []
    for name in corpus_names():
        t = load_corpus(name).to_tuple()
        mv = mixed_volume(t) if t.is_square else None
        if not mv or mv > args.max_mv:
            print(f"{name:20s} skipped (mv={mv})")
            continue
        t0 = time.perf_counter()
        r = verify_prediction(t, args.budget, args.seed)
        g = r.get("sampled", {}).get("group", {})
        row = {
            "name": name,
            "mv": mv,
            "predicted": r["prediction"]["label"],
            "sampled": g.get("name"),
            "order": g.get("order"),
            "verdict": r["verdict"],
            "seconds": round(time.perf_counter() - t0, 2),
        }
        rows.append(row)
        print(f"{name:20s} mv={mv:<2d} {row['predicted']:28s} {str(row['sampled']):8s} "
              f"|G|={row['order']!s:6s} {row['verdict']:12s} {row['seconds']}s")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
