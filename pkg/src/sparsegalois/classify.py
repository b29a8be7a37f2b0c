"""Solvability classification, monodromy prediction, and cones.

The classification tree normalizes each set to contain the origin, factors
non-reduced tuples through their difference lattice, splits reducible tuples
along the saturated lattice of the least witness subset, and decides at
reduced irreducible leaves by comparing the mixed volume with k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial, prod

import numpy as np

from .analysis import (
    NonReducedWitness,
    SplitWitness,
    descend,
    diff_lattice,
    is_reduced,
    quotient_tuple,
    reducibility_witness,
    saturated_part,
    sets_in_basis,
)
from .errors import PreconditionViolated, ZeroConstantTerm
from .lattice import LatticeSet, LatticeTuple
from .polytope import mixed_volume


# ---------------------------------------------------------------------------
# Solvability tree
# ---------------------------------------------------------------------------


@dataclass
class ReductionNode:
    kind: str  # "Shift", "LatticeReduce", "Split", "Leaf"
    tuple: LatticeTuple
    mv: int
    children: list["ReductionNode"] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def leaves(self) -> list["ReductionNode"]:
        if self.kind == "Leaf":
            return [self]
        return [leaf for c in self.children for leaf in c.leaves()]

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.tuple.dim,
            "sets": self.tuple.to_lists(),
            "mv": self.mv,
            "data": _jsonable(self.data),
            "children": [c.to_dict() for c in self.children],
        }


@dataclass
class ClassificationReport:
    root: ReductionNode
    k: int
    solvable: bool

    @property
    def leaves(self) -> list[ReductionNode]:
        return self.root.leaves()

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "solvable": self.solvable,
            "leaf_mvs": [leaf.mv for leaf in self.leaves],
            "tree": self.root.to_dict(),
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, LatticeTuple):
        return x.to_lists()
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def _reduce(t: LatticeTuple, k: int) -> ReductionNode:
    mv = mixed_volume(t)
    if mv == 0:
        # Dependent tuple: generic systems have no torus roots, nothing to solve.
        return ReductionNode("Leaf", t, 0, data={"solvable": True, "dependent": True})
    reduced, info = is_reduced(t)
    if not reduced:
        child_t = sets_in_basis(t, range(len(t)), info.basis)
        child = _reduce(child_t, k)
        return ReductionNode(
            "LatticeReduce",
            t,
            mv,
            [child],
            {"embedding": [list(b) for b in info.basis], "coker": list(info.cokernel), "index": info.saturation_index},
        )
    S = reducibility_witness(t)
    if S is not None:
        sinfo = diff_lattice(t, S)
        inner = saturated_part(t, S, sinfo).normalized()
        outer = quotient_tuple(t, S, sinfo).normalized()
        return ReductionNode(
            "Split",
            t,
            mv,
            [_reduce(inner, k), _reduce(outer, k)],
            {"subset": list(S), "sublattice": [list(b) for b in sinfo.saturation_basis]},
        )
    return ReductionNode("Leaf", t, mv, data={"solvable": mv <= k})


def classify_solvability(t: LatticeTuple, k: int = 4) -> ClassificationReport:
    """Reduction tree and verdict: solvable iff every leaf has mixed volume <= k."""
    t.require_square()
    if k < 1:
        raise ValueError("k must be positive")
    norm = t.normalized()
    child = _reduce(norm, k)
    root = ReductionNode("Shift", t, child.mv, [child], {"shifts": [list(s.lexmin()) for s in t]})
    solvable = all(leaf.data["solvable"] for leaf in root.leaves())
    return ClassificationReport(root, k, solvable)


# ---------------------------------------------------------------------------
# Monodromy prediction
# ---------------------------------------------------------------------------


@dataclass
class WreathRefinement:
    """Conjectured group: coker wreath S_d, of order |coker|^d * d!."""

    coker: tuple[int, ...]
    d: int

    @property
    def order(self) -> int:
        return prod(self.coker) ** self.d * factorial(self.d)


@dataclass
class MonodromyPrediction:
    verdict: str  # "Symmetric", "Imprimitive", "PrimeCyclic"
    V: int
    conjectural: bool = False
    block_count: int | None = None
    block_size: int | None = None
    p: int | None = None
    witness: object = None
    wreath: WreathRefinement | None = None
    descent_kind: str = ""
    notes: list[str] = field(default_factory=list)

    def label(self) -> str:
        if self.verdict == "Symmetric":
            return f"Symmetric({self.V})"
        if self.verdict == "PrimeCyclic":
            return f"PrimeCyclic({self.p})"
        return f"Imprimitive({self.block_count} blocks of {self.block_size})"

    def to_dict(self) -> dict:
        out = {
            "verdict": self.verdict,
            "label": self.label(),
            "V": self.V,
            "conjectural": self.conjectural,
            "descent": self.descent_kind,
        }
        if self.verdict == "Imprimitive":
            out["block_count"] = self.block_count
            out["block_size"] = self.block_size
            w = self.witness
            if isinstance(w, NonReducedWitness):
                out["witness"] = {"type": "sublattice", "subset": list(w.subset), "basis": [list(b) for b in w.basis], "index": w.index, "mv_in_sublattice": w.mv_in_m}
            elif isinstance(w, SplitWitness):
                out["witness"] = {"type": "split", "subset": list(w.subset), "saturation_basis": [list(b) for b in w.saturation_basis], "mv_inner": w.mv_inner, "mv_quotient": w.mv_quotient}
        if self.p is not None:
            out["p"] = self.p
        if self.wreath is not None:
            out["wreath"] = {"coker": list(self.wreath.coker), "d": self.wreath.d, "order": self.wreath.order, "conjectural": True}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _wreath_refinement(t: LatticeTuple) -> WreathRefinement | None:
    reduced, info = is_reduced(t)
    if reduced or info.rank != t.dim:
        return None
    b = sets_in_basis(t, range(len(t)), info.basis)
    if reducibility_witness(b) is not None:
        return None
    return WreathRefinement(info.cokernel, mixed_volume(b))


def predict_monodromy(t: LatticeTuple) -> MonodromyPrediction:
    """Predicted monodromy group, following MV-1 factors down to a decisive case."""
    t.require_square()
    d = descend(t.normalized())
    V = d.mv
    if d.kind == "dependent":
        raise PreconditionViolated("mixed volume is 0; there are no roots to permute")
    notes = []
    if d.path:
        notes.append(f"descended through {len(d.path)} split(s) with a mixed volume 1 factor")
    wreath = _wreath_refinement(d.tuple)
    if d.kind == "trivial":
        return MonodromyPrediction("Symmetric", 1, descent_kind=d.kind, notes=notes)
    if d.kind == "symmetric":
        return MonodromyPrediction("Symmetric", V, descent_kind=d.kind, notes=notes)
    if d.kind == "cyclic":
        if V == 2:
            notes.append("index 2 quotient: the cyclic group of order 2 is S_2")
            return MonodromyPrediction("Symmetric", 2, descent_kind=d.kind, wreath=wreath, notes=notes)
        return MonodromyPrediction("PrimeCyclic", V, p=V, descent_kind=d.kind, wreath=wreath, notes=notes)
    if d.kind == "non_reduced":
        w: NonReducedWitness = d.witness
        return MonodromyPrediction(
            "Imprimitive", V, block_count=w.mv_in_m, block_size=V // w.mv_in_m,
            witness=w, wreath=wreath, descent_kind=d.kind, notes=notes,
        )
    w: SplitWitness = d.witness
    return MonodromyPrediction(
        "Imprimitive", V, block_count=w.mv_inner, block_size=w.mv_quotient,
        witness=w, descent_kind=d.kind, notes=notes,
    )


# ---------------------------------------------------------------------------
# Cones
# ---------------------------------------------------------------------------


def cone_over(b: LatticeSet, h: int = 1) -> LatticeSet:
    """{0} together with B placed at height h, in one more dimension."""
    if h < 1:
        raise ValueError("cone height must be positive")
    m = b.dim
    return LatticeSet([(0,) * (m + 1)] + [p + (h,) for p in b.points], m + 1)


def cone_reduce(system, h: int | None = None):
    """From m + 1 equations on a cone c(B) to m equations on the base B.

    g_i = f_i / f_i(0) - f_0 / f_0(0), read off at height h.  Each f_i must
    have a nonzero constant term.
    """
    from .systems import PolySystem

    t = system.tuple
    m = t.dim - 1
    if len(t) != m + 1:
        raise PreconditionViolated("a cone system has one more equation than the base dimension")
    origin = (0,) * (m + 1)
    consts = []
    tops = []
    for i, s in enumerate(t):
        cmap = system.coefficient_map(i)
        c0 = cmap.get(origin, 0)
        if c0 == 0:
            raise ZeroConstantTerm(f"equation {i} has no constant term")
        consts.append(c0)
        top = {p[:m]: c for p, c in cmap.items() if p != origin}
        heights = {p[m] for p in cmap if p != origin}
        if len(heights) > 1 or (h is not None and heights and heights != {h}):
            raise PreconditionViolated("support is not a cone over a base at a single height")
        tops.append(top)
    base = sorted(set().union(*[set(tp) for tp in tops]))
    bset = LatticeSet(base, m)
    coeffs = []
    for i in range(1, m + 1):
        g = [tops[i].get(p, 0) / consts[i] - tops[0].get(p, 0) / consts[0] for p in bset.points]
        coeffs.append(np.array(g, dtype=complex))
    return PolySystem(LatticeTuple([bset] * m, m), coeffs)
