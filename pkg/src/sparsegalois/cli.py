"""Command-line front end.  Every command prints one JSON report.

Exit codes: 0 success, 1 usage or parse error, 2 computation error
(degenerate, inconclusive, unsupported ...), 3 verification MISMATCH.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time
import warnings

import numpy as np

from . import __version__
from .analysis import cayley_config, dual_effective, structure_flags
from .classify import classify_solvability, cone_over, cone_reduce, predict_monodromy
from .enumeration import EnumerationBounds, enumerate_irreducible
from .errors import DimensionMismatch, SparseGaloisError
from .lattice import LatticeTuple
from .monodromy import MonodromyConfig, monodromy_group, verify_prediction
from .polytope import mixed_volume
from .systems import PolySystem, sample_generic, solve_system
from .tuplefile import TupleFile, TupleFileError, load

SCHEMA = "sparsegalois.report/1"
SEED_ENV = "SPARSEGALOIS_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _default_seed() -> int:
    try:
        return int(os.environ.get(SEED_ENV, "0"))
    except ValueError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sparsegalois", description="Lattice tuples, solvability and monodromy of sparse systems.")
    p.add_argument("--version", action="version", version=__version__)
    common = _Parser(add_help=False)
    common.add_argument("--quiet", action="store_true", help="print only the headline verdict")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for loop tracking")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_, with_file=True):
        sp = sub.add_parser(name, help=help_, parents=[common])
        if with_file:
            sp.add_argument("file", help="tuple file (JSON) or corpus name")
        return sp

    add("mv", "lattice mixed volume")
    add("flags", "structural predicates with witnesses")
    sp = add("classify", "solvability by radicals")
    sp.add_argument("--k-radical", type=int, default=4, dest="k")
    sp = add("solve", "torus roots of a generic system")
    sp.add_argument("--seed", type=int, default=None)
    for name in ("monodromy", "verify"):
        sp = add(name, "sampled monodromy group" if name == "monodromy" else "prediction vs. sampled group")
        sp.add_argument("--budget", type=int, default=400)
        sp.add_argument("--seed", type=int, default=None)
    sp = add("enumerate", "irreducible pairs of small mixed volume", with_file=False)
    sp.add_argument("--vmax", type=int, default=1)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--box", type=int, default=None)
    sp = add("cayley", "Cayley configuration of a subtuple")
    sp.add_argument("--subset", default=None, help="comma separated 1-based set indices (default: all)")
    sp = add("cone-reduce", "reduce a generic system on a cone to its base")
    sp.add_argument("--height", type=int, default=1)
    sp.add_argument("--seed", type=int, default=None)
    return p


def _digest(tf: TupleFile | None) -> str | None:
    if tf is None:
        return None
    return hashlib.sha256(json.dumps(tf.to_json(), sort_keys=True).encode()).hexdigest()


def _cx(z) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def _roots_json(X) -> list:
    return [[_cx(v) for v in row] for row in X]


def _flags_json(t: LatticeTuple) -> dict:
    f = structure_flags(t)
    w = {}
    for k, v in f.witnesses.items():
        w[k] = v if isinstance(v, dict) else {kk: vv for kk, vv in vars(v).items()}
    out = {
        "reduced": f.reduced,
        "irreducible": f.irreducible,
        "linearly_independent": f.linearly_independent,
        "numerically_reduced": f.numerically_reduced,
        "numerically_irreducible": f.numerically_irreducible,
        "prime": f.prime,
        "witnesses": json.loads(json.dumps(w, default=list)),
    }
    if f.reduced and f.irreducible:
        eff, wit = dual_effective(t)
        out["dual_effective"] = eff
        if wit is not None:
            out["simplex_witness"] = {"vertices": [list(v) for v in wit.vertices], "shifts": [list(s) for s in wit.shifts]}
    return out


def _run(args, tf: TupleFile | None, seed: int | None) -> tuple[dict, str, int]:
    """Returns (results, headline, exit code)."""
    cmd = args.command
    t = tf.to_tuple() if tf is not None else None
    if cmd == "mv":
        v = mixed_volume(t)
        return {"mixed_volume": v}, str(v), 0
    if cmd == "flags":
        r = _flags_json(t)
        head = " ".join(f"{k}={str(r[k]).lower()}" for k in ("reduced", "irreducible", "linearly_independent"))
        return r, head, 0
    if cmd == "classify":
        rep = classify_solvability(t, args.k)
        r = rep.to_dict()
        r["prediction"] = predict_monodromy(t).to_dict() if mixed_volume(t) > 0 else None
        return r, f"solvable={str(rep.solvable).lower()}", 0
    if cmd == "solve":
        s = sample_generic(t, seed)
        rs = solve_system(s, seed=seed)
        r = {
            "mixed_volume": rs.expected,
            "count": len(rs),
            "method": rs.method,
            "roots": _roots_json(rs.roots),
            "max_residual": float(rs.residuals.max()) if len(rs) else 0.0,
            "diagnostics": rs.diagnostics,
        }
        return r, f"{len(rs)} roots", 0
    if cmd == "monodromy":
        run = monodromy_group(t, args.budget, seed, MonodromyConfig(budget=args.budget, jobs=args.jobs))
        r = run.to_dict()
        return r, f"{run.group.name()} order={run.group.order}", 0
    if cmd == "verify":
        r = verify_prediction(t, args.budget, seed, MonodromyConfig(budget=args.budget, jobs=args.jobs))
        code = {"MATCH": 0, "MISMATCH": 3, "INCONCLUSIVE": 2}[r["verdict"]]
        name = r.get("sampled", {}).get("group", {}).get("name", "?")
        return r, f"{r['verdict']} predicted={r['prediction']['label']} sampled={name}", code
    if cmd == "enumerate":
        res = enumerate_irreducible(EnumerationBounds(args.vmax, n=args.n, box_radius=args.box))
        r = res.to_dict()
        return r, f"{len(res.tuples)} tuples, {len(res.maximal)} maximal", 0
    if cmd == "cayley":
        idx = range(len(t)) if args.subset is None else [int(x) - 1 for x in args.subset.split(",")]
        if any(i < 0 or i >= len(t) for i in idx):
            raise UsageError("subset index out of range")
        cc = cayley_config(t, idx)
        r = {"subset": [i + 1 for i in cc.index_set], "dim": cc.points.dim, "points": [list(p) for p in cc.points.points]}
        return r, f"{len(cc.points)} points in Z^{cc.points.dim}", 0
    if cmd == "cone-reduce":
        return _cone_reduce(t, args.height, seed)
    raise UsageError(f"unknown command {cmd}")


def _cone_reduce(t: LatticeTuple, h: int, seed: int):
    if len(t) != 1:
        raise UsageError("cone-reduce expects a single base set B")
    B = t[0]
    c = cone_over(B, h)
    m = B.dim
    cone_t = LatticeTuple([c] * (m + 1), m + 1)
    f = sample_generic(cone_t, seed)
    g = cone_reduce(f, h)
    r = {
        "cone": [list(p) for p in c.points],
        "base": [list(p) for p in g.tuple[0].points],
        "g_coefficients": [[_cx(z) for z in cs] for cs in g.coeffs],
        "degenerate": g.is_zero(),
    }
    if not g.is_zero() and m <= 2:
        rf = solve_system(f, seed=seed)
        rg = solve_system(g, seed=seed)
        proj = rf.roots[:, :m]
        dist = max((np.abs(rg.roots - p).max(axis=1).min() for p in proj), default=0.0)
        r["roots_f"] = len(rf)
        r["roots_g"] = len(rg)
        r["max_projection_distance"] = float(dist)
    return r, ("degenerate" if r["degenerate"] else f"{len(g.tuple[0])} base monomials"), 0


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    report: dict = {"schema": SCHEMA, "version": __version__, "argv": argv}
    t0 = time.perf_counter()
    code = 0
    headline = ""
    quiet = "--quiet" in argv
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.WARNING)
        report["command"] = args.command
        tf = None
        if hasattr(args, "file"):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                tf = load(args.file)
            report["input"] = tf.to_json()
            report["input_digest"] = _digest(tf)
            if tf.warnings:
                report["warnings"] = list(tf.warnings)
                for w in tf.warnings:
                    print(f"warning: {w}", file=sys.stderr)
        seed = getattr(args, "seed", None)
        if "seed" in vars(args):
            seed = _default_seed() if seed is None else seed
            report["seed"] = seed
        results, headline, code = _run(args, tf, seed)
        report["results"] = results
        report["status"] = {0: "ok", 2: "inconclusive", 3: "mismatch"}[code]
    except (UsageError, TupleFileError, DimensionMismatch) as e:
        code, headline = 1, f"error: {e}"
        report["status"] = "usage_error"
        report["error"] = {"type": type(e).__name__, "message": str(e)}
    except SparseGaloisError as e:
        code, headline = 2, f"error: {e}"
        report["status"] = "computation_error"
        report["error"] = {"type": type(e).__name__, "message": str(e)}
    report["timing"] = {"elapsed_s": round(time.perf_counter() - t0, 6)}
    if quiet:
        print(headline, file=out)
    else:
        print(json.dumps(report, sort_keys=True, indent=2, default=_json_default), file=out)
    return code


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (set, frozenset, tuple)):
        return list(o)
    raise TypeError(f"not serializable: {type(o).__name__}")
