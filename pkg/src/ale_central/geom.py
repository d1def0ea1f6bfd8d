"""Shared surface numerics: Gaussian curvature, Gauss-Bonnet quadrature,
metrics from an area density and a conformal coordinate, and the round
solution of g_tt = 4 kappa g.

A *sampler* maps arrays ``(p, theta)`` to metric components, either
``(g_pp, g_tt)`` for a diagonal metric or ``(g_pp, g_tt, g_pt)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exact import Poly1, as_fraction

__all__ = [
    "MetricSampler",
    "GaussBonnetResult",
    "curvature",
    "gauss_bonnet",
    "metric_from_omega_w",
    "evolve_round",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class MetricSampler:
    """A chart on ``p_range x [0, 2pi)`` returning metric components."""

    metric: Callable
    p_range: tuple[float, float]

    def __call__(self, p, theta):
        return self.metric(p, theta)


def _components(sampler, p, theta):
    out = tuple(np.asarray(c, dtype=float) for c in sampler(p, theta))
    if len(out) == 2:
        return out[0], out[1], None
    if len(out) == 3:
        return out
    raise ValueError(f"sampler must return 2 or 3 components, got {len(out)}")


def _step(p, h, p_range, rel_margin, adaptive):
    p = np.asarray(p, dtype=float)
    h = np.full_like(p, float(h))
    if p_range is None:
        return h
    lo, hi = p_range
    dist = np.minimum(p - lo, hi - p)
    if np.any(dist <= 0):
        raise ValueError("curvature requested on or outside the chart boundary")
    if adaptive:
        return np.minimum(h, rel_margin * dist)
    if np.any(dist < 2 * h):
        raise ValueError(f"margin violation: need distance >= 2h = {2 * float(h.max())}")
    return h


def curvature(sampler, p, theta, h: float = 1e-4, *, p_range=None,
              adaptive: bool = True, rel_margin: float = 1e-3, h_theta: float | None = None):
    """Gaussian curvature by centered finite differences.

    Diagonal metrics use the divergence form
    ``K = -(1/2W) [ (G_p/W)_p + (E_t/W)_t ]`` with ``W = sqrt(E G)``, which
    stays well conditioned where one component blows up at a pole of the
    chart.  Metrics with a cross term use Brioschi's formula.

    ``p_range`` defaults to ``sampler.p_range`` when available; with
    ``adaptive`` the step shrinks to ``rel_margin`` times the distance to
    the chart edge, otherwise a margin below ``2h`` raises ``ValueError``.
    ``h_theta`` (default ``h``) is the step in theta; charts whose metric does
    not depend on theta can take a large one and lose no accuracy.
    """
    if p_range is None:
        p_range = getattr(sampler, "p_range", None)
    p = np.asarray(p, dtype=float)
    theta = np.asarray(theta, dtype=float)
    p, theta = np.broadcast_arrays(p, theta)
    hp = _step(p, h, p_range, rel_margin, adaptive)
    ht = np.full_like(p, float(h if h_theta is None else h_theta))

    E0, G0, F0 = _components(sampler, p, theta)
    if F0 is None:
        return _curvature_diagonal(sampler, p, theta, hp, ht, E0, G0)
    return _curvature_brioschi(sampler, p, theta, hp, ht, E0, G0, F0)


def _curvature_diagonal(sampler, p, theta, hp, ht, E0, G0):
    def W(pp, tt):
        e, g, _ = _components(sampler, pp, tt)
        return np.sqrt(e * g)

    Gplus = _components(sampler, p + hp, theta)[1]
    Gminus = _components(sampler, p - hp, theta)[1]
    Gp = ((Gplus - G0) / W(p + hp / 2, theta) - (G0 - Gminus) / W(p - hp / 2, theta)) / hp**2

    Eplus = _components(sampler, p, theta + ht)[0]
    Eminus = _components(sampler, p, theta - ht)[0]
    Et = ((Eplus - E0) / W(p, theta + ht / 2) - (E0 - Eminus) / W(p, theta - ht / 2)) / ht**2
    return -(Gp + Et) / (2.0 * np.sqrt(E0 * G0))


def _curvature_brioschi(sampler, p, theta, hp, ht, E0, G0, F0):
    def at(dp, dt):
        return _components(sampler, p + dp * hp, theta + dt * ht)

    Epp, Gpp_, Fpp = at(1, 0)
    Emp, Gmp, Fmp = at(-1, 0)
    Ept, Gpt, Fpt = at(0, 1)
    Emt, Gmt, Fmt = at(0, -1)
    _, _, F11 = at(1, 1)
    _, _, F1m = at(1, -1)
    _, _, Fm1 = at(-1, 1)
    _, _, Fmm = at(-1, -1)

    E_u, E_v = (Epp - Emp) / (2 * hp), (Ept - Emt) / (2 * ht)
    F_u, F_v = (Fpp - Fmp) / (2 * hp), (Fpt - Fmt) / (2 * ht)
    G_u, G_v = (Gpp_ - Gmp) / (2 * hp), (Gpt - Gmt) / (2 * ht)
    E_vv = (Ept - 2 * E0 + Emt) / ht**2
    G_uu = (Gpp_ - 2 * G0 + Gmp) / hp**2
    F_uv = (F11 - F1m - Fm1 + Fmm) / (4 * hp * ht)

    E, F, G = E0, F0, G0
    a11 = -E_vv / 2 + F_uv - G_uu / 2
    a12, a13 = E_u / 2, F_u - E_v / 2
    a21, a31 = F_v - G_u / 2, G_v / 2
    det1 = (
        a11 * (E * G - F * F)
        - a12 * (a21 * G - F * a31)
        + a13 * (a21 * F - E * a31)
    )
    b12, b13 = E_v / 2, G_u / 2
    det2 = -b12 * (b12 * G - F * b13) + b13 * (b12 * F - E * b13)
    return (det1 - det2) / (E * G - F * F) ** 2


@dataclass(frozen=True)
class GaussBonnetResult:
    value: float
    error: float
    coarse_value: float
    grid: tuple[int, int]

    @property
    def extrapolated(self) -> float:
        return self.value + (self.value - self.coarse_value) / 3.0

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "error": self.error,
            "coarse_value": self.coarse_value,
            "extrapolated": self.extrapolated,
            "grid": list(self.grid),
        }


def _midpoint_total(sampler, p_range, n_p, n_t, h, **kw):
    lo, hi = p_range
    dp, dt = (hi - lo) / n_p, TWO_PI / n_t
    pc = lo + (np.arange(n_p) + 0.5) * dp
    tc = (np.arange(n_t) + 0.5) * dt
    P, T = np.meshgrid(pc, tc, indexing="ij")
    k = curvature(sampler, P, T, h, p_range=p_range, **kw)
    E, G, F = _components(sampler, P, T)
    dens = np.sqrt(E * G - (F * F if F is not None else 0.0))
    # row sums then a fixed-order total keep the reduction deterministic
    return float(np.sum(np.sum(k * dens, axis=1)) * dp * dt)


def gauss_bonnet(sampler, grid=(200, 200), p_range=None, h: float = 1e-4,
                 tol: float | None = None, **kw) -> GaussBonnetResult:
    """Midpoint-rule total curvature over ``p_range x [0, 2pi)``.

    Midpoint nodes never touch the polar edges of the chart.  The error
    estimate is the Richardson difference against a grid halved in each
    direction (second-order rule, so ``|I_n - I_{n/2}| / 3``).
    """
    if p_range is None:
        p_range = getattr(sampler, "p_range", None)
    if p_range is None:
        raise ValueError("gauss_bonnet needs a p_range")
    n_p, n_t = (int(v) for v in grid)
    if n_p < 2 or n_t < 1:
        raise ValueError(f"grid {grid} too small")
    fine = _midpoint_total(sampler, p_range, n_p, n_t, h, **kw)
    coarse = _midpoint_total(sampler, p_range, max(1, n_p // 2), max(1, n_t // 2), h, **kw)
    err = abs(fine - coarse) / 3.0
    if tol is not None and err > tol:
        raise ValueError(f"grid too coarse: error estimate {err:.3e} exceeds {tol:.3e}")
    return GaussBonnetResult(fine, err, coarse, (n_p, n_t))


def metric_from_omega_w(rho, dw_dp, dw_dtheta):
    """Metric determined by area density ``rho`` and conformal coordinate ``w``.

    Returns ``(g_pp, g_tt, g_pt)`` with ``g = rho |dw|^2 / J``,
    ``J = Im(conj(w_p) w_t)``.  If ``J < 0`` the coordinate is conjugated,
    which flips the sign of ``J`` and leaves ``|dw|^2`` unchanged.  The
    determinant equals ``rho**2``.
    """
    rho = np.asarray(rho, dtype=float)
    wp = np.asarray(dw_dp, dtype=complex)
    wt = np.asarray(dw_dtheta, dtype=complex)
    J = np.imag(np.conj(wp) * wt)
    if np.any(J == 0) or not np.all(np.isfinite(J)):
        raise ValueError("conformal chart degenerate: Im(conj(w_p) w_t) = 0")
    if np.any(rho <= 0):
        raise ValueError("area density must be positive")
    J = np.abs(J)
    g_pp = rho * np.abs(wp) ** 2 / J
    g_tt = rho * np.abs(wt) ** 2 / J
    g_pt = rho * np.real(np.conj(wp) * wt) / J
    if g_pp.ndim == 0:
        return float(g_pp), float(g_tt), float(g_pt)
    return g_pp, g_tt, g_pt


def evolve_round(kappa0, t):
    """Round solution ``g(t) = lambda(t) g0`` of ``g_tt = 4 kappa g``.

    Curvature scales as ``kappa(lambda g0) = kappa0 / lambda`` so the
    equation reduces to ``lambda'' = 4 kappa0`` with ``lambda(0) = 1``,
    ``lambda'(0) = 0``.  Arithmetic is exact; returns ``(lambda, residual)``.
    """
    k0 = as_fraction(kappa0)
    if k0 <= 0:
        raise ValueError("kappa0 must be positive")
    tt = as_fraction(t)
    lam_poly = Poly1([1, 0, 2 * k0], "t")
    lam = lam_poly(tt)
    lam_dd = lam_poly.derivative().derivative()(tt)
    kappa_t = k0 / lam
    residual = lam_dd - 4 * kappa_t * lam
    return lam, residual
