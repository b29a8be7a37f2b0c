"""Numerical monodromy: track root sets around loops in coefficient space.

Loops are concatenations of segments in the flattened coefficient vector.
Paths of all roots are tracked in lockstep so that a step is refused if any
corrector update comes close to the distance between neighbouring roots;
the endpoint set is then matched back to the base roots.  Any ambiguity or
tracking failure raises PathFailure and the loop is dropped.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .classify import MonodromyPrediction, predict_monodromy
from .analysis import NonReducedWitness, SplitWitness
from .errors import DegenerateSystem, Inconclusive, PathFailure, PreconditionViolated
from .groups import PermutationGroup, analyze_group, closure, identity, preserves
from .lattice import LatticeTuple
from .polytope import mixed_volume
from .systems import (
    CoefficientHomotopy,
    CompiledSupport,
    PolySystem,
    RootSet,
    newton,
    sample_generic,
    shifted,
    solve_system,
)
from .tracking import TrackerOptions, track

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Loops
# ---------------------------------------------------------------------------


@dataclass
class Arc:
    """c(u) = (1 - u) a + u b + u (1 - u) w, u in [0, 1]."""

    a: np.ndarray
    b: np.ndarray
    w: np.ndarray

    def __call__(self, u: np.ndarray):
        uu = u[:, None]
        c = (1 - uu) * self.a + uu * self.b + uu * (1 - uu) * self.w
        dc = (self.b - self.a) + (1 - 2 * uu) * self.w
        return c, dc

    def start(self):
        return self.a

    def end(self):
        return self.b


@dataclass
class Circle:
    """c(u) = center + radius * exp(2 pi i s (u + phase)) * direction, s = orientation."""

    center: np.ndarray
    direction: np.ndarray
    radius: float
    phase: float = 0.0
    orientation: int = 1

    def __call__(self, u: np.ndarray):
        w = 2j * np.pi * self.orientation
        z = self.radius * np.exp(w * (u[:, None] + self.phase))
        return self.center + z * self.direction, w * z * self.direction

    def start(self):
        return self.center + self.radius * np.exp(2j * np.pi * self.orientation * self.phase) * self.direction

    def end(self):
        return self.start()


@dataclass
class Loop:
    kind: str  # "SegmentPair", "DiscriminantCircle", "Custom"
    segments: list
    seed: object = None

    def base(self) -> np.ndarray:
        return self.segments[0].start()

    def reversed(self) -> "Loop":
        segs = []
        for s in reversed(self.segments):
            if isinstance(s, Arc):
                segs.append(Arc(s.b, s.a, s.w))
            else:
                segs.append(Circle(s.center, s.direction, s.radius, -s.phase, -s.orientation))
        return Loop(self.kind, segs, self.seed)

    def then(self, other: "Loop") -> "Loop":
        return Loop("Custom", self.segments + other.segments, (self.seed, other.seed))

    def is_closed(self, tol: float = 1e-12) -> bool:
        ends = [s.start() for s in self.segments] + [self.segments[-1].end()]
        chain = all(np.abs(self.segments[k].end() - self.segments[k + 1].start()).max() <= tol for k in range(len(self.segments) - 1))
        return chain and np.abs(ends[0] - ends[-1]).max() <= tol


def segment_pair_loop(c0: np.ndarray, seed, bulge: float = 1.0) -> Loop:
    """Out to a random system along one random arc and back along another."""
    rng = np.random.default_rng(seed)
    m = c0.size

    def gauss():
        return (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / np.sqrt(2)

    c1 = gauss()
    w1, w2 = bulge * gauss(), bulge * gauss()
    return Loop("SegmentPair", [Arc(c0, c1, w1), Arc(c1, c0, w2)], seed)


def constant_loop(c0: np.ndarray) -> Loop:
    return Loop("Custom", [Arc(c0, c0, np.zeros_like(c0))])


# ---------------------------------------------------------------------------
# Tracking one loop
# ---------------------------------------------------------------------------

LOOP_TRACKER = TrackerOptions(
    h_start=0.01, h_max=0.05, newton_tol=1e-9, max_newton=4,
    max_first_correction=0.02, lockstep=True, separation_guard=0.1,
)


def _support(s: PolySystem) -> CompiledSupport:
    return CompiledSupport(shifted(s).exponents)


def match_roots(end: np.ndarray, base: np.ndarray, tol: float) -> tuple[int, ...]:
    """Bijection end[i] -> base[perm[i]]; PathFailure unless it is unambiguous."""
    V = base.shape[0]
    perm = []
    for x in end:
        d = np.abs(base - x).max(axis=1) / np.maximum(1.0, np.abs(base).max(axis=1))
        close = np.flatnonzero(d <= tol)
        if close.size != 1:
            raise PathFailure(f"endpoint matched {close.size} base roots")
        perm.append(int(close[0]))
    if len(set(perm)) != V:
        raise PathFailure("endpoint matching is not a bijection")
    return tuple(perm)


def track_loop(s: PolySystem, base_roots, loop: Loop, match_tol: float = 1e-8,
               options: TrackerOptions | None = None) -> tuple[int, ...]:
    """Permutation of the base roots induced by continuing them around ``loop``.

    The system ``s`` fixes the supports; its coefficients must equal the loop
    base point.
    """
    opts = options or LOOP_TRACKER
    base = base_roots.roots if isinstance(base_roots, RootSet) else np.asarray(base_roots)
    if not loop.is_closed():
        raise PreconditionViolated("loop is not closed")
    if np.abs(loop.base() - s.flat()).max() > 1e-12 * max(1.0, np.abs(s.flat()).max()):
        raise PreconditionViolated("loop does not start at the system's coefficients")
    sup = _support(s)
    X = base.astype(complex).copy()
    for seg in loop.segments:
        H = CoefficientHomotopy(sup, seg)
        res = track(H, X, 0.0, 1.0, opts)
        if (res.status != 0).any():
            raise PathFailure(f"tracking failed on {(res.status != 0).sum()} path(s)")
        X = res.X
    sh = shifted(s)
    X, conv = newton(sh, X, iters=8)
    if not np.isfinite(X).all():
        raise PathFailure("endpoint polish diverged")
    return match_roots(X, base, match_tol)


# ---------------------------------------------------------------------------
# Discriminant circles on univariate families
# ---------------------------------------------------------------------------

QUADRATIC = LatticeTuple.from_lists([[[0], [1], [2]]])
CUBIC = LatticeTuple.from_lists([[[0], [1], [3]]])


def discriminant_probe(family: str, seed, radius: float | None = None):
    """(system, loop) with the loop circling one simple discriminant point.

    quadratic: x^2 + b x + c0 circling c0 = b^2 / 4.  quadratic0: x^2 + c0
    circling c0 = 0.  cubic: x^3 + p x + q circling a root of 4 p^3 + 27 q^2.
    Coefficients are ordered by exponent.
    """
    rng = np.random.default_rng(seed)
    if family == "quadratic":
        b = complex(rng.standard_normal(), rng.standard_normal())
        star = b * b / 4
        r = radius if radius is not None else min(0.1, 0.5 * abs(star))
        center = np.array([star, b, 1.0], dtype=complex)
        t = QUADRATIC
    elif family == "quadratic0":
        r = radius or 0.1
        center = np.array([0.0, 1.0], dtype=complex)
        t = LatticeTuple.from_lists([[[0], [2]]])
    elif family == "cubic":
        p = complex(rng.standard_normal(), rng.standard_normal())
        q1 = np.sqrt(-4 * p**3 / 27)
        star = q1 if rng.random() < 0.5 else -q1
        r = radius if radius is not None else min(0.1, 0.25 * abs(2 * q1))
        center = np.array([star, p, 1.0], dtype=complex)
        t = CUBIC
    else:
        raise ValueError(f"unknown family {family!r}")
    direction = np.zeros_like(center)
    direction[0] = 1.0
    phase = rng.random()
    loop = Loop("DiscriminantCircle", [Circle(center, direction, r, phase)], seed)
    return PolySystem(t, [loop.base()]), loop


def probe_transposition(family: str, seed) -> tuple[int, ...]:
    s, loop = discriminant_probe(family, seed)
    roots = solve_system(s, seed=0)
    return track_loop(s, roots, loop)


# ---------------------------------------------------------------------------
# Group sampling
# ---------------------------------------------------------------------------


@dataclass
class MonodromyConfig:
    budget: int = 400
    window: int = 25
    max_V: int = 8
    resamples: int = 10
    jobs: int = 1


@dataclass
class MonodromyRun:
    group: PermutationGroup
    trace: list[dict]
    base: PolySystem
    roots: RootSet
    stabilized: bool
    loops: int
    failures: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "group": self.group.to_dict(),
            "stabilized": self.stabilized,
            "loops": self.loops,
            "path_failures": self.failures,
            "trace": self.trace,
        }


def base_system(t: LatticeTuple, seed: int, resamples: int = 10) -> tuple[PolySystem, RootSet]:
    last = None
    for r in range(resamples + 1):
        s = sample_generic(t, [seed, r])
        try:
            return s, solve_system(s, seed=seed)
        except DegenerateSystem as e:
            last = e
            log.info("base system %d degenerate, resampling", r)
    raise DegenerateSystem(f"no generic base system after {resamples} resamples: {last}")


def _loop_perm(args):
    s, roots, seed = args
    loop = segment_pair_loop(s.flat(), seed)
    try:
        return track_loop(s, roots, loop), None
    except PathFailure as e:
        return None, str(e)


def monodromy_group(t: LatticeTuple, budget: int = 400, seed: int = 0,
                    config: MonodromyConfig | None = None, strict: bool = True) -> MonodromyRun:
    """Sample the monodromy group until it stops growing for ``window`` loops."""
    cfg = config or MonodromyConfig(budget=budget)
    cfg.budget = budget
    t.require_square()
    V = mixed_volume(t)
    if V < 1:
        raise PreconditionViolated("mixed volume 0: no roots")
    if V > cfg.max_V:
        raise PreconditionViolated(f"mixed volume {V} exceeds the cap {cfg.max_V}")
    s, roots = base_system(t, seed, cfg.resamples)
    gens: list = []
    elems = {identity(V)}
    trace: list[dict] = []
    quiet = failures = 0
    stabilized = V == 1
    i = 0
    pool = ProcessPoolExecutor(cfg.jobs) if cfg.jobs > 1 else None
    try:
        while not stabilized and i < cfg.budget:
            batch = range(i, min(cfg.budget, i + max(1, cfg.jobs)))
            args = [(s, roots.roots, (seed, k)) for k in batch]
            results = list(pool.map(_loop_perm, args)) if pool else [_loop_perm(a) for a in args]
            for k, (perm, err) in zip(batch, results):
                i = k + 1
                entry = {"index": k, "seed": [seed, k], "kind": "SegmentPair"}
                if perm is None:
                    failures += 1
                    entry.update(status="path_failure", error=err)
                    trace.append(entry)
                    continue
                new = perm not in elems
                if new:
                    gens.append(perm)
                    elems = closure(gens, V)
                    quiet = 0
                else:
                    quiet += 1
                entry.update(status="ok", perm=list(perm), new=new, order=len(elems))
                trace.append(entry)
                if quiet >= cfg.window:
                    stabilized = True
                    break
    finally:
        if pool:
            pool.shutdown()
    group = analyze_group(gens, V)
    run = MonodromyRun(group, trace, s, roots, stabilized, i, failures, seed)
    if not stabilized and strict:
        err = Inconclusive(f"group did not stabilize within {cfg.budget} loops")
        err.partial = run
        raise err
    return run


# ---------------------------------------------------------------------------
# Prediction vs. sampled group
# ---------------------------------------------------------------------------


def _character(roots: np.ndarray, basis) -> np.ndarray:
    B = np.array(basis, dtype=float)
    out = np.ones((roots.shape[0], B.shape[0]), dtype=complex)
    for j in range(B.shape[1]):
        out *= roots[:, j : j + 1] ** B[:, j][None, :]
    return out


def witness_partition(pred: MonodromyPrediction, roots: np.ndarray, tol: float = 1e-6):
    """Fibres of the torus map defined by the witness lattice, as a partition of root indices."""
    w = pred.witness
    if isinstance(w, NonReducedWitness):
        basis = w.basis
    elif isinstance(w, SplitWitness):
        basis = w.saturation_basis
    else:
        return None
    img = _character(roots, basis)
    blocks: list[list[int]] = []
    reps: list[np.ndarray] = []
    for i, y in enumerate(img):
        for b, r in zip(blocks, reps):
            if np.abs(y - r).max() <= tol * max(1.0, np.abs(r).max()):
                b.append(i)
                break
        else:
            blocks.append([i])
            reps.append(y)
    return tuple(sorted(tuple(b) for b in blocks))


def verify_prediction(t: LatticeTuple, budget: int = 400, seed: int = 0,
                      config: MonodromyConfig | None = None) -> dict:
    pred = predict_monodromy(t)
    report = {"prediction": pred.to_dict()}
    try:
        run = monodromy_group(t, budget, seed, config)
    except (Inconclusive, DegenerateSystem) as e:
        report.update(verdict="INCONCLUSIVE", reason=str(e))
        part = getattr(e, "partial", None)
        if part is not None:
            report["sampled"] = part.to_dict()
        return report
    G = run.group
    report["sampled"] = run.to_dict()
    checks = {}
    if pred.verdict == "Symmetric":
        checks["symmetric"] = G.is_symmetric
    elif pred.verdict == "PrimeCyclic":
        checks["cyclic_of_order_p"] = G.is_cyclic and G.order == pred.p
    else:
        checks["transitive"] = G.transitive
        checks["block_structure"] = G.has_blocks(pred.block_count, pred.block_size)
        if not pred.notes:  # witness is in the input coordinates
            part = witness_partition(pred, run.roots.roots)
            report["witness_partition"] = [list(b) for b in part]
            checks["partition_shape"] = len(part) == pred.block_count and all(len(b) == pred.block_size for b in part)
            checks["generators_preserve_partition"] = all(preserves(g, part) for g in G.generators)
    if pred.wreath is not None:
        report["conjecture"] = {
            "predicted_order": pred.wreath.order,
            "observed_order": G.order,
            "consistent": G.order == pred.wreath.order,
        }
    report["checks"] = checks
    report["verdict"] = "MATCH" if all(checks.values()) else "MISMATCH"
    return report
