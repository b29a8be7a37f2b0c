"""Batched predictor-corrector path tracking.

A homotopy is any object with ``eval(X, t) -> (H, Hx, Ht)`` where ``X`` is a
(P, N) complex array of points, ``t`` a (P,) real array, ``H`` the (P, N)
residuals, ``Hx`` the (P, N, N) Jacobians in X and ``Ht`` the (P, N)
derivatives in t.  Paths are advanced together with numpy; each path keeps
its own step size unless ``lockstep`` is set, in which case a single step is
shared and a step is accepted only if every path accepts it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class TrackerOptions:
    h_start: float = 0.02
    h_max: float = 0.1
    h_min: float = 1e-12
    newton_tol: float = 1e-10  # relative size of the last corrector update
    max_newton: int = 3
    max_first_correction: float = 0.05  # relative; guards against path jumping
    max_steps: int = 20000
    lockstep: bool = False
    separation_guard: float = 0.25  # lockstep only: |first correction| < guard * nearest root


@dataclass
class TrackResult:
    X: np.ndarray
    t: np.ndarray
    status: np.ndarray  # 0 = reached t1, 1 = step underflow, 2 = singular Jacobian, 3 = max steps
    steps: int
    rejections: int
    min_separation: float = field(default=np.inf)


def _solve(A: np.ndarray, b: np.ndarray):
    """Batched solve; rows with singular or non-finite systems come back as nan."""
    try:
        out = np.linalg.solve(A, b[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out = np.full_like(b, np.nan)
        for i in range(A.shape[0]):
            try:
                out[i] = np.linalg.solve(A[i], b[i])
            except np.linalg.LinAlgError:
                pass
    bad = ~np.isfinite(out).all(axis=1)
    if bad.any():
        out[bad] = np.nan
    return out


def _rel(v: np.ndarray, X: np.ndarray) -> np.ndarray:
    return np.abs(v).max(axis=1) / (1.0 + np.abs(X).max(axis=1))


def _nearest(X: np.ndarray) -> np.ndarray:
    if X.shape[0] < 2:
        return np.full(X.shape[0], np.inf)
    d = np.abs(X[:, None, :] - X[None, :, :]).max(axis=2)
    np.fill_diagonal(d, np.inf)
    return d.min(axis=1)


def track(homotopy, X0, t0: float, t1: float, options: TrackerOptions | None = None) -> TrackResult:
    """Track every row of X0 from parameter t0 to t1."""
    opt = options or TrackerOptions()
    X = np.array(X0, dtype=complex, copy=True)
    P = X.shape[0]
    direction = 1.0 if t1 >= t0 else -1.0
    span = abs(t1 - t0)
    t = np.full(P, float(t0))
    h = np.full(P, opt.h_start * span)
    streak = np.zeros(P, dtype=int)
    status = np.full(P, -1)  # -1 = still running
    steps = rejections = 0
    min_sep = np.inf
    h_max = opt.h_max * span
    h_min = opt.h_min * span

    while (status < 0).any():
        steps += 1
        if steps > opt.max_steps:
            status[status < 0] = 3
            break
        act = np.flatnonzero(status < 0)
        if opt.lockstep:
            hs = min(h[act].min(), abs(t1 - t[act[0]]))
            hh = np.full(act.size, hs)
        else:
            hh = np.minimum(h[act], np.abs(t1 - t[act]))
        Xa, ta = X[act], t[act]
        _, Hx, Ht = homotopy.eval(Xa, ta)
        dX = _solve(Hx, -Ht)
        tn = ta + direction * hh
        Xp = Xa + (direction * hh)[:, None] * dX
        ok = np.isfinite(Xp).all(axis=1)
        first = np.zeros(act.size)
        last = np.full(act.size, np.inf)
        prev = np.full(act.size, np.inf)
        for it in range(opt.max_newton):
            H, Hx, _ = homotopy.eval(Xp, tn)
            dx = _solve(Hx, -H)
            ok &= np.isfinite(dx).all(axis=1)
            dx[~ok] = 0
            size = _rel(dx, Xp)
            if it == 0:
                first = size
            elif it == 1:
                # quadratic convergence region: the second update must shrink fast
                ok &= (size <= 0.5 * first) | (first < opt.newton_tol)
            prev, last = last, size
            Xp = Xp + dx
            if (size[ok] < opt.newton_tol).all():
                break
        ok &= last < opt.newton_tol
        ok &= first < opt.max_first_correction
        ok &= np.isfinite(Xp).all(axis=1)
        if opt.lockstep and act.size > 1:
            near = _nearest(Xa)
            firstabs = first * (1.0 + np.abs(Xp).max(axis=1))
            ok &= firstabs < opt.separation_guard * near
            sep = _nearest(Xp).min()
            if ok.all():
                min_sep = min(min_sep, sep)
            if not ok.all():
                ok[:] = False

        acc = act[ok]
        rej = act[~ok]
        X[acc] = Xp[ok]
        t[acc] = tn[ok]
        streak[acc] += 1
        grow = acc[streak[acc] >= 2]
        h[grow] = np.minimum(h[grow] * 2.0, h_max)
        streak[grow] = 0
        rejections += rej.size
        h[rej] *= 0.5
        streak[rej] = 0
        if opt.lockstep:
            if rej.size:
                h[act] = h[rej].min()
            else:
                h[act] = h[acc].min()
        done = acc[np.abs(t[acc] - t1) <= 1e-15 * max(1.0, span)]
        t[done] = t1
        status[done] = 0
        under = act[(h[act] < h_min) & (status[act] < 0)]
        status[under] = 1
    return TrackResult(X=X, t=t, status=status, steps=steps, rejections=rejections, min_separation=min_sep)
