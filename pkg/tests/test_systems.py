import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import square_tuples
from sparsegalois.errors import DegenerateSystem, Unsupported
from sparsegalois.lattice import LatticeSet, LatticeTuple
from sparsegalois.polytope import mixed_volume
from sparsegalois.systems import (
    CoefficientHomotopy,
    CompiledSupport,
    PolySystem,
    SolverConfig,
    _homotopy_candidates,
    _solve_bivariate,
    certify,
    eval_batch,
    evaluate_and_jacobian,
    newton,
    sample_generic,
    shifted,
    solve_system,
)
from sparsegalois.tracking import TrackerOptions, track
from sparsegalois.tuplefile import load_corpus


def C(name):
    return load_corpus(name).to_tuple()


def _distinct(X, tol=1e-6):
    for i in range(len(X)):
        for j in range(i):
            if np.abs(X[i] - X[j]).max() < tol:
                return False
    return True


@pytest.mark.parametrize("name", ["quartic", "prime5", "square_pair", "square_triangle", "segment_split",
                                  "hexagon_pair", "simplex3", "mixed3"])
def test_root_count_equals_mv(name):
    t = C(name)
    V = mixed_volume(t)
    for seed in range(5):
        rs = solve_system(sample_generic(t, seed), seed=seed)
        assert len(rs) == V == rs.expected
        assert rs.residuals.max() < 1e-9
        assert (np.abs(rs.roots) > 0).all()
        assert _distinct(rs.roots)


def test_univariate_vieta():
    # Independent check: the monic polynomial with the returned roots matches.
    t = C("deg5")
    s = sample_generic(t, 3)
    rs = solve_system(s)
    c = s.coeffs[0]  # ascending powers 0..5
    recon = np.poly(rs.roots[:, 0])[::-1] * c[-1]
    assert np.allclose(recon, c, atol=1e-9)


def test_laurent_support():
    t = LatticeTuple.from_lists([[(-1, 0), (1, 0), (0, 1), (0, -2)], [(0, 0), (1, 1), (-1, 0)]])
    s = sample_generic(t, 2)
    rs = solve_system(s)
    assert len(rs) == mixed_volume(t)
    F, _ = evaluate_and_jacobian(s, rs.roots)
    assert np.abs(F).max() < 1e-9


@given(square_tuples(max_size=4), st.integers(0, 1000))
def test_jacobian_finite_differences(t, seed):
    s = sample_generic(t, seed)
    rng = np.random.default_rng(seed)
    x = np.exp(rng.uniform(-0.3, 0.3, t.dim) + 2j * np.pi * rng.random(t.dim))
    F, J = evaluate_and_jacobian(s, x)
    eps = 1e-6
    for j in range(t.dim):
        e = np.zeros(t.dim, dtype=complex)
        e[j] = eps
        Fp, _ = evaluate_and_jacobian(s, x + e)
        Fm, _ = evaluate_and_jacobian(s, x - e)
        fd = (Fp - Fm) / (2 * eps)
        scale = max(1.0, np.abs(J[:, j]).max())
        assert np.abs(fd - J[:, j]).max() / scale < 1e-6


def test_compiled_support_matches_direct():
    t = C("mixed3")
    s = shifted(sample_generic(t, 0))
    cs = CompiledSupport(s.exponents)
    rng = np.random.default_rng(1)
    Z = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
    Cm = np.broadcast_to(s.flat(), (6, s.flat().size))
    F, J, _ = cs.evaluate(Z, Cm)
    F2, J2 = eval_batch(s.exponents, s.coeffs, Z)
    assert np.allclose(F, F2) and np.allclose(J, J2)


def test_newton_converges_quadratically():
    t = C("square_triangle")
    s = sample_generic(t, 5)
    rs = solve_system(s)
    root = rs.roots[:1]
    X = root + 1e-3 * (1 + 1j)
    errs = []
    for _ in range(4):
        X, _ = newton(s, X, iters=1)
        errs.append(np.abs(X - root).max())
    # e_{k+1} <= K e_k^2 while the error is above round-off
    for a, b in zip(errs, errs[1:]):
        if a > 1e-12:
            assert b <= 1e3 * a * a + 1e-14


def test_resultant_and_homotopy_agree():
    cfg = SolverConfig()
    for name in ("square_triangle", "hexagon_pair", "pentagon_triangle"):
        s = shifted(sample_generic(C(name), 9))
        a = certify(s, _solve_bivariate(s), cfg, {})
        rng = np.random.default_rng(3)
        b = np.zeros((0, 2), dtype=complex)
        for _ in range(3):
            if len(b) == mixed_volume(s.tuple):
                break
            b = certify(s, np.vstack([b, _homotopy_candidates(s, rng, {})]), cfg, {})
        assert len(a) == len(b) == mixed_volume(s.tuple)
        for x in a:
            assert np.abs(b - x).max(axis=1).min() < 1e-8 * max(1, np.abs(x).max())


def test_solution_is_deterministic():
    s = sample_generic(C("cube_simplex_simplex"), 4)
    a = solve_system(s, seed=1).roots
    b = solve_system(s, seed=1).roots
    assert np.array_equal(a, b)


def test_degenerate_system_raises():
    # x + y = 1 and x + y = 2 have no common root although MV = 1.
    t = LatticeTuple.from_lists([[(0, 0), (1, 0), (0, 1)]] * 2)
    s = PolySystem(t, [np.array([-1, 1, 1], dtype=complex), np.array([-2, 1, 1], dtype=complex)])
    with pytest.raises(DegenerateSystem):
        solve_system(s, SolverConfig(retries=1))


def test_dimension_cap():
    n = 5
    simplex = LatticeSet([tuple(0 for _ in range(n))] + [tuple(int(i == j) for j in range(n)) for i in range(n)], n)
    with pytest.raises(Unsupported):
        solve_system(sample_generic(LatticeTuple([simplex] * n, n), 0))


def test_zero_mv_gives_no_roots():
    t = LatticeTuple.from_lists([[(0, 0), (1, 0)], [(0, 0), (2, 0)]])
    rs = solve_system(sample_generic(t, 0))
    assert len(rs) == 0


def test_off_torus_evaluation_rejected():
    s = sample_generic(C("square_pair"), 0)
    with pytest.raises(ValueError):
        evaluate_and_jacobian(s, [0.0, 1.0])


def test_flat_round_trip():
    s = sample_generic(C("mixed3"), 0)
    back = s.unflatten(s.flat())
    assert all(np.array_equal(a, b) for a, b in zip(back, s.coeffs))
    assert s.with_coeffs(back).coeffs[0] is not None


def test_sample_generic_is_seeded():
    t = C("square_pair")
    assert np.array_equal(sample_generic(t, 3).flat(), sample_generic(t, 3).flat())
    assert not np.array_equal(sample_generic(t, 3).flat(), sample_generic(t, 4).flat())


# -- tracker ---------------------------------------------------------------


def _sqrt_homotopy():
    # x^2 - (1 + t): exact path x(t) = sqrt(1 + t)
    cs = CompiledSupport([np.array([[0], [2]])])

    def path(t):
        P = t.size
        c = np.column_stack([-(1 + t), np.ones(P)]).astype(complex)
        dc = np.column_stack([-np.ones(P), np.zeros(P)]).astype(complex)
        return c, dc

    return CoefficientHomotopy(cs, path)


@pytest.mark.parametrize("lockstep", [False, True])
def test_tracker_follows_exact_path(lockstep):
    H = _sqrt_homotopy()
    X0 = np.array([[1.0 + 0j], [-1.0 + 0j]])
    res = track(H, X0, 0.0, 3.0, TrackerOptions(lockstep=lockstep))
    assert (res.status == 0).all()
    assert np.allclose(res.X[:, 0], [2.0, -2.0], atol=1e-9)
    back = track(H, res.X, 3.0, 0.0, TrackerOptions(lockstep=lockstep))
    assert np.allclose(back.X, X0, atol=1e-9)


def test_tracker_reports_failure_at_singularity():
    # the path sqrt(1 + t) hits the branch point at t = -1
    H = _sqrt_homotopy()
    res = track(H, np.array([[1.0 + 0j]]), 0.0, -1.0, TrackerOptions(max_steps=2000))
    assert res.status[0] != 0 or abs(res.X[0, 0]) < 1e-3
