"""Sparse Laurent polynomial systems and a desk-scale torus root finder.

Solver strategy by dimension: n = 1 companion eigenvalues, n = 2 hidden
variable Sylvester resultant (determinant interpolated from values on a
circle), n >= 3 total-degree homotopy with the gamma trick.  Every candidate
is Newton-polished on the original system, certified by its residual, and
deduplicated; the final count is compared with the mixed volume.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSystem, DimensionMismatch, Unsupported
from .lattice import LatticeSet, LatticeTuple
from .polytope import mixed_volume
from .tracking import TrackerOptions, track

log = logging.getLogger(__name__)


@dataclass
class SolverConfig:
    dedup_tol: float = 1e-8
    residual_tol: float = 1e-9
    torus_bounds: tuple[float, float] = (1e-8, 1e8)
    max_dim: int = 4
    retries: int = 4
    newton_iters: int = 30


class PolySystem:
    """Coefficients aligned with the sorted points of each support set."""

    def __init__(self, tuple_: LatticeTuple, coeffs):
        self.tuple = tuple_
        self.coeffs = [np.asarray(c, dtype=complex).copy() for c in coeffs]
        if len(self.coeffs) != len(tuple_):
            raise DimensionMismatch("one coefficient vector per set")
        for s, c in zip(tuple_, self.coeffs):
            if c.shape != (len(s),):
                raise DimensionMismatch("coefficient count must match the support size")
        self.exponents = [np.array(s.points, dtype=float).reshape(len(s), tuple_.dim) for s in tuple_]

    @property
    def n(self) -> int:
        return self.tuple.dim

    def coefficient_map(self, i: int) -> dict:
        return dict(zip(self.tuple[i].points, self.coeffs[i]))

    def with_coeffs(self, coeffs) -> "PolySystem":
        return PolySystem(self.tuple, coeffs)

    def flat(self) -> np.ndarray:
        return np.concatenate(self.coeffs)

    def unflatten(self, flat: np.ndarray) -> list[np.ndarray]:
        out, k = [], 0
        for s in self.tuple:
            out.append(np.asarray(flat[k : k + len(s)]))
            k += len(s)
        return out

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(np.all(np.abs(c) <= tol) for c in self.coeffs)

    def __repr__(self) -> str:
        return f"PolySystem(n={self.n}, sizes={[len(s) for s in self.tuple]})"


@dataclass
class RootSet:
    roots: np.ndarray  # (count, n)
    residuals: np.ndarray
    expected: int
    method: str
    diagnostics: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return self.roots.shape[0]


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def _monomials(X: np.ndarray, E: np.ndarray) -> np.ndarray:
    """X (P, n) complex, E (m, n) integer-valued -> (P, m) values of x^a."""
    if E.shape[0] == 0:
        return np.zeros((X.shape[0], 0), dtype=complex)
    out = np.ones((X.shape[0], E.shape[0]), dtype=complex)
    for j in range(E.shape[1]):
        col = E[:, j]
        if np.any(col != 0):
            out *= X[:, j : j + 1] ** col[None, :]
    return out


def eval_batch(exponents, coeffs, X: np.ndarray):
    """Values (P, k) and Jacobians (P, k, n) of a system at the rows of X.

    ``coeffs[i]`` may be (m_i,) or (P, m_i) for per-point coefficients.
    """
    P, n = X.shape
    k = len(exponents)
    F = np.empty((P, k), dtype=complex)
    J = np.empty((P, k, n), dtype=complex)
    inv = 1.0 / X
    for i, (E, c) in enumerate(zip(exponents, coeffs)):
        M = _monomials(X, E)
        Mc = M * c if np.ndim(c) == 2 else M * c[None, :]
        F[:, i] = Mc.sum(axis=1)
        J[:, i, :] = (Mc @ E) * inv
    return F, J


def evaluate_and_jacobian(s: PolySystem, x):
    """Values f_i(x) and the matrix of partials d f_i / d x_j at one torus point."""
    X = np.atleast_2d(np.asarray(x, dtype=complex))
    if np.any(X == 0):
        raise ValueError("evaluation point must lie in the torus")
    F, J = eval_batch(s.exponents, s.coeffs, X)
    if np.ndim(x) == 1:
        return F[0], J[0]
    return F, J


def _residual_scale(s: PolySystem, X: np.ndarray) -> np.ndarray:
    """Per-point sum |c_a| |x^a| per equation (for backward errors)."""
    out = np.zeros((X.shape[0], len(s.coeffs)))
    for i, (E, c) in enumerate(zip(s.exponents, s.coeffs)):
        out[:, i] = np.abs(_monomials(X, E)) @ np.abs(c)
    return out


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def sample_generic(t: LatticeTuple, seed: int) -> PolySystem:
    """Independent standard complex Gaussian coefficients, deterministic per seed."""
    rng = np.random.default_rng(seed)
    coeffs = []
    for s in t:
        m = len(s)
        coeffs.append((rng.standard_normal(m) + 1j * rng.standard_normal(m)) / np.sqrt(2))
    return PolySystem(t, coeffs)


def shifted(s: PolySystem) -> PolySystem:
    """Same torus roots, supports moved so every exponent is nonnegative with a 0 minimum."""
    sets = []
    for st in s.tuple:
        lo = [min(p[j] for p in st.points) for j in range(st.dim)]
        sets.append(LatticeSet([tuple(a - b for a, b in zip(p, lo)) for p in st.points], st.dim))
    # Shifting keeps the sorted order of points, so coefficients stay aligned.
    return PolySystem(LatticeTuple(sets, s.tuple.dim), s.coeffs)


# ---------------------------------------------------------------------------
# Newton polishing, certification, dedup
# ---------------------------------------------------------------------------


def newton(s: PolySystem, X: np.ndarray, iters: int = 30, tol: float = 1e-14):
    """Batched Newton on the rows of X; returns (X, converged mask)."""
    X = np.array(X, dtype=complex, copy=True)
    conv = np.zeros(X.shape[0], dtype=bool)
    for _ in range(iters):
        live = ~conv & np.isfinite(X).all(axis=1) & (X != 0).all(axis=1)
        if not live.any():
            break
        F, J = eval_batch(s.exponents, s.coeffs, X[live])
        try:
            dx = np.linalg.solve(J, -F[..., None])[..., 0]
        except np.linalg.LinAlgError:
            dx = np.stack([np.linalg.lstsq(Ji, -Fi, rcond=None)[0] for Ji, Fi in zip(J, F)])
        idx = np.flatnonzero(live)
        X[idx] += dx
        small = np.abs(dx).max(axis=1) <= tol * (1 + np.abs(X[idx]).max(axis=1))
        conv[idx[small]] = True
    return X, conv


def residuals(s: PolySystem, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(absolute max |f_i|, backward error max |f_i| / sum |c_a x^a|) per row."""
    if X.shape[0] == 0:
        return np.zeros(0), np.zeros(0)
    F, _ = eval_batch(s.exponents, s.coeffs, X)
    scale = _residual_scale(s, X)
    return np.abs(F).max(axis=1), (np.abs(F) / np.maximum(scale, 1e-300)).max(axis=1)


def dedup(X: np.ndarray, tol: float) -> np.ndarray:
    keep: list[np.ndarray] = []
    for x in X:
        if all(np.abs(x - y).max() > tol * max(1.0, np.abs(y).max()) for y in keep):
            keep.append(x)
    return np.array(keep).reshape(len(keep), X.shape[1])


def canonical_order(X: np.ndarray) -> np.ndarray:
    if X.shape[0] == 0:
        return X
    keys = []
    for j in reversed(range(X.shape[1])):
        keys += [np.round(X[:, j].imag, 10), np.round(X[:, j].real, 10)]
    return X[np.lexsort(keys)]


def certify(s: PolySystem, cand: np.ndarray, cfg: SolverConfig, diag: dict) -> np.ndarray:
    """Polish candidates and keep distinct certified torus roots."""
    cand = cand[np.isfinite(cand).all(axis=1)]
    if cand.shape[0] == 0:
        return cand
    lo, hi = cfg.torus_bounds
    cand = cand[(np.abs(cand) > lo * 1e-2).all(axis=1) & (np.abs(cand) < hi * 1e2).all(axis=1)]
    X, _ = newton(s, cand, cfg.newton_iters)
    X = X[np.isfinite(X).all(axis=1)]
    mod = np.abs(X)
    on = ((mod >= lo) & (mod <= hi)).all(axis=1)
    diag["off_torus"] = diag.get("off_torus", 0) + int((~on).sum())
    X = X[on]
    absres, berr = residuals(s, X)
    good = (absres < cfg.residual_tol) | (berr < 1e-13)
    diag["uncertified"] = diag.get("uncertified", 0) + int((~good).sum())
    return dedup(X[good], cfg.dedup_tol)


# ---------------------------------------------------------------------------
# n = 1
# ---------------------------------------------------------------------------


def _solve_univariate(s: PolySystem) -> np.ndarray:
    e = [p[0] for p in s.tuple[0].points]
    deg = max(e)
    poly = np.zeros(deg + 1, dtype=complex)
    for a, c in zip(e, s.coeffs[0]):
        poly[deg - a] += c
    nz = np.flatnonzero(poly)
    if nz.size == 0:
        return np.zeros((0, 1), dtype=complex)
    poly = poly[nz[0] : nz[-1] + 1]  # strip leading zeros and the zero roots
    return np.roots(poly).reshape(-1, 1)


# ---------------------------------------------------------------------------
# n = 2: hidden variable resultant
# ---------------------------------------------------------------------------


def _sylvester(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Sylvester matrix of polynomials with coefficient arrays in increasing degree."""
    dp, dq = len(p) - 1, len(q) - 1
    N = dp + dq
    S = np.zeros((N, N), dtype=complex)
    for r in range(dq):
        S[r, r : r + dp + 1] = p[::-1]
    for r in range(dp):
        S[dq + r, r : r + dq + 1] = q[::-1]
    return S


def _coeffs_in_x(E: np.ndarray, c: np.ndarray, y: complex, xvar: int) -> np.ndarray:
    """Coefficients (increasing degree in x) of f(x, y) at a fixed y value."""
    yvar = 1 - xvar
    deg = int(E[:, xvar].max())
    out = np.zeros(deg + 1, dtype=complex)
    for a, ci in zip(E, c):
        out[int(a[xvar])] += ci * y ** int(a[yvar])
    return out


def _solve_bivariate(s: PolySystem) -> np.ndarray:
    E0, E1 = s.exponents
    c0, c1 = s.coeffs
    bounds = []
    for xvar in (0, 1):
        yvar = 1 - xvar
        d0, d1 = E0[:, xvar].max(), E1[:, xvar].max()
        bounds.append((d0 * E1[:, yvar].max() + d1 * E0[:, yvar].max(), xvar))
    D, xvar = min(bounds)
    D = int(D)
    d0, d1 = int(E0[:, xvar].max()), int(E1[:, xvar].max())
    if D == 0 or d0 + d1 == 0:
        return np.zeros((0, 2), dtype=complex)
    K = 1 << int(np.ceil(np.log2(D + 1)))
    ys = np.exp(2j * np.pi * np.arange(K) / K)
    vals = np.empty(K, dtype=complex)
    for k, y in enumerate(ys):
        p = _coeffs_in_x(E0, c0, y, xvar)
        q = _coeffs_in_x(E1, c1, y, xvar)
        vals[k] = np.linalg.det(_sylvester(p, q))
    res = np.fft.fft(vals) / K  # coefficient of y^j at index j
    res = res[: D + 1]
    scale = np.abs(res).max()
    if scale == 0:
        return np.zeros((0, 2), dtype=complex)
    nz = np.flatnonzero(np.abs(res) > 1e-12 * scale)
    res = res[nz[0] : nz[-1] + 1]
    yroots = np.roots(res[::-1]) if len(res) > 1 else np.zeros(0, dtype=complex)
    cand = []
    for y in yroots:
        if not np.isfinite(y) or y == 0:
            continue
        for E, c in ((E0, c0), (E1, c1)):
            p = _coeffs_in_x(E, c, y, xvar)
            nzp = np.flatnonzero(p)
            if nzp.size == 0 or nzp[-1] == nzp[0]:
                continue
            for x in np.roots(p[nzp[0] : nzp[-1] + 1][::-1]):
                pt = [0j, 0j]
                pt[xvar], pt[1 - xvar] = x, y
                cand.append(pt)
    return np.array(cand, dtype=complex).reshape(-1, 2)


# ---------------------------------------------------------------------------
# n >= 3 (and fallback): total-degree homotopy in a random affine chart
# ---------------------------------------------------------------------------


class CompiledSupport:
    """All terms of a system with nonnegative exponents, evaluated in one pass.

    Values and Jacobians come from a table of coordinate powers, so zero
    coordinates are fine.  Coefficients are supplied per evaluation point,
    which covers both fixed systems and coefficient paths.
    """

    def __init__(self, exponents):
        self.k = len(exponents)
        self.E = np.vstack([np.asarray(E, dtype=np.int64) for E in exponents])
        if self.E.min() < 0:
            raise ValueError("compiled supports need nonnegative exponents")
        self.eq = np.concatenate([np.full(len(E), i) for i, E in enumerate(exponents)])
        self.N = self.E.shape[1]
        self.D = int(self.E.max()) if self.E.size else 0
        self.S = np.zeros((self.E.shape[0], self.k))
        self.S[np.arange(self.E.shape[0]), self.eq] = 1.0
        self.Em1 = np.maximum(self.E - 1, 0)
        self._cols = np.arange(self.N)[None, :]

    def terms(self, Z: np.ndarray):
        P = Z.shape[0]
        pw = np.empty((P, self.N, self.D + 1), dtype=complex)
        pw[:, :, 0] = 1.0
        for d in range(1, self.D + 1):
            pw[:, :, d] = pw[:, :, d - 1] * Z
        A = pw[:, self._cols, self.E]  # (P, m, N)
        M = A.prod(axis=2)
        dM = np.empty(A.shape, dtype=complex)
        for j in range(self.N):
            B = A.copy()
            B[:, :, j] = pw[:, j, self.Em1[:, j]] * self.E[:, j]
            dM[:, :, j] = B.prod(axis=2)
        return M, dM

    def evaluate(self, Z: np.ndarray, C: np.ndarray, dC: np.ndarray | None = None):
        """C, dC: (P, m) term coefficients.  Returns F, J and (if dC) F with dC."""
        M, dM = self.terms(Z)
        F = (M * C) @ self.S
        J = np.einsum("pmn,mk->pkn", dM * C[:, :, None], self.S)
        Ft = (M * dC) @ self.S if dC is not None else None
        return F, J, Ft


class CoefficientHomotopy:
    """H(x, t) = F(x; c(t)) for a coefficient path c, optionally with a linear chart row."""

    def __init__(self, support: CompiledSupport, path, chart: np.ndarray | None = None):
        self.support = support
        self.path = path  # t (P,) -> (c (P, m), dc/dt (P, m))
        self.chart = chart

    def eval(self, Z: np.ndarray, t: np.ndarray):
        C, dC = self.path(t)
        H, Hx, Ht = self.support.evaluate(Z, C, dC)
        if self.chart is None:
            return H, Hx, Ht
        P = Z.shape[0]
        H = np.column_stack([H, Z @ self.chart - 1])
        Hx = np.concatenate([Hx, np.broadcast_to(self.chart, (P, 1, Z.shape[1]))], axis=1)
        Ht = np.column_stack([Ht, np.zeros(P)])
        return H, Hx, Ht


class _TotalDegreeHomotopy(CoefficientHomotopy):
    """(1 - t) F^h(z) + t gamma G^h(z), G_i = z_i^{d_i} - r_i z_0^{d_i}, chart xi . z = 1."""

    def __init__(self, s: PolySystem, rng: np.random.Generator):
        n = s.n
        self.n = n
        self.degrees = [int(E.sum(axis=1).max()) for E in s.exponents]
        self.r = np.exp(2j * np.pi * rng.random(n))
        self.gamma = np.exp(2j * np.pi * rng.random())
        exps, cf, cg = [], [], []
        for i, (d, E) in enumerate(zip(self.degrees, s.exponents)):
            Eh = np.column_stack([d - E.sum(axis=1), E])
            g = np.zeros((2, n + 1))
            g[0, i + 1] = d
            g[1, 0] = d
            exps.append(np.vstack([Eh, g]))
            cf.append(np.concatenate([s.coeffs[i], [0, 0]]))
            cg.append(np.concatenate([np.zeros(len(E)), [1.0, -self.r[i]]]))
        cf = np.concatenate(cf)
        cg = self.gamma * np.concatenate(cg)

        def path(t):
            tt = t[:, None]
            return (1 - tt) * cf + tt * cg, np.broadcast_to(cg - cf, (t.size, cf.size))

        xi = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
        super().__init__(CompiledSupport(exps), path, chart=xi)
        self.xi = xi

    def start_points(self) -> np.ndarray:
        axes = [self.r[i] ** (1 / d) * np.exp(2j * np.pi * np.arange(d) / d) for i, d in enumerate(self.degrees)]
        grid = np.array(np.meshgrid(*axes, indexing="ij")).reshape(self.n, -1).T
        Z = np.column_stack([np.ones(grid.shape[0]), grid])
        return Z / (Z @ self.xi)[:, None]


def _homotopy_candidates(s: PolySystem, rng: np.random.Generator, diag: dict) -> np.ndarray:
    H = _TotalDegreeHomotopy(s, rng)
    Z0 = H.start_points()
    # t runs from 1 (start system) to 0 (target); stop slightly early, then polish.
    opts = TrackerOptions(h_start=0.02, h_max=0.1, newton_tol=1e-8, max_newton=4)
    res = track(H, Z0, 1.0, 1e-7, opts)
    diag["paths"] = diag.get("paths", 0) + Z0.shape[0]
    diag["path_failures"] = diag.get("path_failures", 0) + int((res.status != 0).sum())
    Z = res.X
    finite = np.abs(Z[:, 0]) > 1e-7 * np.abs(Z).max(axis=1)
    diag["at_infinity"] = diag.get("at_infinity", 0) + int((~finite).sum())
    X = Z[finite, 1:] / Z[finite, 0:1]
    return X


def solve_system(s: PolySystem, config: SolverConfig | None = None, seed: int = 0) -> RootSet:
    """All isolated torus roots of a generic square system."""
    cfg = config or SolverConfig()
    t = s.tuple
    t.require_square()
    n = t.dim
    if n > cfg.max_dim:
        raise Unsupported(f"dimension {n} exceeds the solver cap {cfg.max_dim}")
    V = mixed_volume(t)
    sh = shifted(s)
    diag: dict = {}
    if V == 0:
        return RootSet(np.zeros((0, n), dtype=complex), np.zeros(0), 0, "none", diag)
    if n == 1:
        method = "companion"
        roots = certify(sh, _solve_univariate(sh), cfg, diag)
    elif n == 2:
        method = "resultant"
        roots = certify(sh, _solve_bivariate(sh), cfg, diag)
    else:
        method = "homotopy"
        roots = np.zeros((0, n), dtype=complex)
    rng = np.random.default_rng([seed, 0x5eed])
    attempt = 0
    while roots.shape[0] != V and attempt < cfg.retries and n >= 2:
        if n == 2 and attempt == 0:
            method = "resultant+homotopy"
        cand = _homotopy_candidates(sh, rng, diag)
        roots = certify(sh, np.vstack([roots, cand]), cfg, diag)
        attempt += 1
    diag["attempts"] = attempt
    if roots.shape[0] != V:
        raise DegenerateSystem(f"found {roots.shape[0]} torus roots, expected {V}")
    roots = canonical_order(roots)
    absres, _ = residuals(s, roots)
    return RootSet(roots, absres, V, method, diag)
