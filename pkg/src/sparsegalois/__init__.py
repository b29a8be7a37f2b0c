"""Lattice tuples, solvability by radicals, and monodromy of sparse polynomial systems."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BoundsTooLarge,
    CapExceeded,
    DegenerateSystem,
    DimensionMismatch,
    Inconclusive,
    PathFailure,
    PreconditionViolated,
    SparseGaloisError,
    Unsupported,
    ZeroConstantTerm,
)
from .lattice import LatticeSet, LatticeTuple, generated_lattice, hnf, snf  # noqa: E402
from .polytope import lattice_volume, minkowski_sum, mixed_volume, vertices  # noqa: E402
from .normalform import unimodular_normal_form  # noqa: E402
from .analysis import cayley_config, dual_effective, structure_flags  # noqa: E402
from .classify import classify_solvability, cone_over, cone_reduce, predict_monodromy  # noqa: E402
from .systems import PolySystem, evaluate_and_jacobian, sample_generic, solve_system  # noqa: E402
from .groups import analyze_group  # noqa: E402
from .monodromy import monodromy_group, track_loop, verify_prediction  # noqa: E402
from .enumeration import EnumerationBounds, enumerate_irreducible  # noqa: E402
