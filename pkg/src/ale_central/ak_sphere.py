"""Type A_{2l-1}: Gibbons-Hawking data on the central sphere.

Points a_1 < ... < a_{2l} lie on the x_1-axis of R^3.  Over the axis the
metric on the sphere above ``[a_j, a_{j+1}]`` is ``V dz^2 + V^{-1} dtheta^2``
with ``V = sum 1/(2|z - a_i|)``; the central sphere is ``j = l``.

Roots are translated to sum zero on ingestion, and every coordinate taken or
returned by this module is in that translated frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import geom

__all__ = [
    "ModuliA",
    "AkSample",
    "potential",
    "potential_gradient",
    "lift_function",
    "lift_gradient",
    "morse_function",
    "morse_area_check",
    "sphere_interval",
    "conformal_coordinate",
    "sphere_metric",
    "metric_sampler",
    "symplectic_area",
    "twistor_line_check",
    "alf_chart",
    "alf_transform",
    "alf_transform_check",
    "grid_nodes",
    "sample_grid",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("z", "theta", "V", "g_zz", "g_tt", "re_w", "im_w", "kappa")
DEFAULT_MARGIN = 1e-6
# the chart metric is independent of theta, so the theta step only feeds roundoff
THETA_STEP = 0.05


@dataclass(frozen=True)
class ModuliA:
    roots: tuple[float, ...]
    original: tuple[float, ...] = field(default=(), compare=False)

    def __post_init__(self):
        r = tuple(float(a) for a in self.roots)
        if len(r) < 2 or len(r) % 2:
            raise ValueError(f"need an even number (>= 2) of roots, got {len(r)}")
        if not all(np.isfinite(r)):
            raise ValueError("roots must be finite")
        bad = [i for i in range(len(r) - 1) if not r[i] < r[i + 1]]
        if bad:
            i = bad[0]
            raise ValueError(f"roots must increase strictly: a{i + 1} < a{i + 2} fails")
        object.__setattr__(self, "roots", r)
        if not self.original:
            object.__setattr__(self, "original", r)

    @classmethod
    def from_roots(cls, roots: Sequence[float], normalize: bool = True) -> "ModuliA":
        raw = tuple(float(a) for a in roots)
        if not normalize:
            return cls(raw, raw)
        shift = math.fsum(raw) / len(raw) if raw else 0.0
        return cls(tuple(a - shift for a in raw), raw)

    @property
    def ell(self) -> int:
        return len(self.roots) // 2

    @property
    def shift(self) -> float:
        return self.original[0] - self.roots[0]

    @property
    def scale(self) -> float:
        return max(1.0, max(abs(a) for a in self.roots))


@dataclass
class AkSample:
    z: np.ndarray
    theta: np.ndarray
    V: np.ndarray
    g_zz: np.ndarray
    g_tt: np.ndarray
    g_zt: np.ndarray
    w: np.ndarray
    dw_dz: np.ndarray
    dw_dtheta: np.ndarray
    kappa: np.ndarray

    def rows(self):
        cols = [np.ravel(np.asarray(c)) for c in (
            self.z, self.theta, self.V, self.g_zz, self.g_tt,
            np.real(self.w), np.imag(self.w), self.kappa,
        )]
        n = max(len(c) for c in cols)
        cols = [np.broadcast_to(c, (n,)) for c in cols]
        return [tuple(float(c[i]) for c in cols) for i in range(n)]


def _axial(x):
    """Return (x1, rho^2) for an axial scalar or an (..., 3) array."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 0 or x.shape[-1] != 3:
        return x, np.zeros_like(x)
    return x[..., 0], x[..., 1] ** 2 + x[..., 2] ** 2


def _distances(moduli: ModuliA, x):
    x1, rho2 = _axial(x)
    d = [np.sqrt((x1 - a) ** 2 + rho2) for a in moduli.roots]
    if any(np.any(di == 0) for di in d):
        raise ValueError("evaluation at a fixed point a_i")
    return x1, rho2, d


def potential(moduli: ModuliA, x):
    """``V = sum 1/(2|x - a_i|)``; ``x`` is an axial coordinate or a point of R^3."""
    _, _, d = _distances(moduli, x)
    return sum(0.5 / di for di in d)


def potential_gradient(moduli: ModuliA, x) -> np.ndarray:
    """Gradient of ``V`` at points of R^3 (shape ``(..., 3)``)."""
    x = np.asarray(x, dtype=float)
    _, _, d = _distances(moduli, x)
    g = np.zeros(x.shape)
    for a, di in zip(moduli.roots, d):
        g -= 0.5 * (x - np.array([a, 0.0, 0.0])) / np.asarray(di)[..., None] ** 3
    return g


def lift_function(moduli: ModuliA, x, c: float = 0.0):
    """``h = sum (x_1 - a_i)/|x - a_i| + c``."""
    x1, _, d = _distances(moduli, x)
    return sum((x1 - a) / di for a, di in zip(moduli.roots, d)) + c


def lift_gradient(moduli: ModuliA, x) -> np.ndarray:
    """Gradient of ``lift_function`` through the potential.

    ``dh = -2(x2 V2 + x3 V3) dx1 + 2 x2 V1 dx2 + 2 x3 V1 dx3``; the overall
    sign is the one obtained by differentiating ``h`` directly.
    """
    x = np.asarray(x, dtype=float)
    V1, V2, V3 = np.moveaxis(potential_gradient(moduli, x), -1, 0)
    x2, x3 = x[..., 1], x[..., 2]
    return np.stack([-2 * (x2 * V2 + x3 * V3), 2 * x2 * V1, 2 * x3 * V1], axis=-1)


def morse_function(moduli: ModuliA, x):
    """``f = sum |x - a_i|``."""
    x1, rho2 = _axial(x)
    return sum(np.sqrt((x1 - a) ** 2 + rho2) for a in moduli.roots)


def sphere_interval(moduli: ModuliA, j: int | None = None) -> tuple[float, float]:
    """Axial interval ``(a_j, a_{j+1})`` (1-based); the central one by default."""
    j = moduli.ell if j is None else j
    if not 1 <= j <= len(moduli.roots) - 1:
        raise ValueError(f"sphere index must be in 1..{len(moduli.roots) - 1}, got {j}")
    return moduli.roots[j - 1], moduli.roots[j]


def morse_area_check(moduli: ModuliA, j: int | None = None) -> dict:
    """Compare the area of sphere ``j`` with the jump of the Morse function.

    The lifted action has weight ``h = 2(j - l)`` on the axis over sphere
    ``j`` (``c = 0``), and ``h * area = 2 pi (f(q) - f(p))``.  The central
    sphere is fixed pointwise, so both sides vanish there.
    """
    lo, hi = sphere_interval(moduli, j)
    j = moduli.ell if j is None else j
    mid = 0.5 * (lo + hi)
    h = float(lift_function(moduli, mid))
    fp, fq = float(morse_function(moduli, lo)), float(morse_function(moduli, hi))
    area = 2 * math.pi * (hi - lo)
    return {
        "sphere": j,
        "weight": h,
        "f_p": fp,
        "f_q": fq,
        "area": area,
        "residual": h * area - 2 * math.pi * (fq - fp),
    }


def _chart(moduli: ModuliA, j: int, z, theta):
    """Conformal coordinate on sphere j with its closed-form partials.

    ``w = x / prod_{i<=j}(z - a_i)`` with ``x = r e^{i theta}`` and
    ``r^2 = |prod_i (z - a_i)|``, so that ``d log w = -V dz + i dtheta``.
    """
    z = np.asarray(z, dtype=float)
    theta = np.asarray(theta, dtype=float)
    roots = moduli.roots
    log_r = 0.5 * sum(np.log(np.abs(z - a)) for a in roots)
    log_den = sum(np.log(z - a) for a in roots[:j])
    w = np.exp(log_r - log_den) * np.exp(1j * theta)
    V = potential(moduli, z)
    return w, -V * w, 1j * w, V


def conformal_coordinate(moduli: ModuliA, z, theta, j: int | None = None):
    j = moduli.ell if j is None else j
    _check_z(moduli, j, z, DEFAULT_MARGIN)
    return _chart(moduli, j, z, theta)[0]


def _check_z(moduli, j, z, margin):
    lo, hi = sphere_interval(moduli, j)
    delta = margin * (hi - lo)
    z = np.asarray(z, dtype=float)
    if np.any(z < lo + delta) or np.any(z > hi - delta):
        raise ValueError(
            f"z must lie in [{lo + delta!r}, {hi - delta!r}] (sphere {j} with margin {margin})"
        )


def _reconstructed(moduli, j, alf=False):
    def metric(z, theta):
        w, wz, wt, V = _chart(moduli, j, z, theta)
        if alf:
            # d(e^{-z} w) = e^{-z}(dw - w dz) and |e^{-z}|^2 cancels in the metric
            wz = wz - w
        g_zz, g_tt, _ = geom.metric_from_omega_w(np.ones_like(np.real(w)), wz, wt)
        return g_zz, g_tt

    return metric


def metric_sampler(moduli: ModuliA, j: int | None = None, alf: bool = False) -> geom.MetricSampler:
    """Metric on sphere j rebuilt from ``(dz ^ dtheta, w)``."""
    j = moduli.ell if j is None else j
    return geom.MetricSampler(_reconstructed(moduli, j, alf), sphere_interval(moduli, j))


def sphere_metric(moduli: ModuliA, z, theta, j: int | None = None,
                  margin: float = DEFAULT_MARGIN, h: float = 1e-4) -> AkSample:
    j = moduli.ell if j is None else j
    _check_z(moduli, j, z, margin)
    z, theta = np.broadcast_arrays(np.asarray(z, float), np.asarray(theta, float))
    w, wz, wt, V = _chart(moduli, j, z, theta)
    g_zz, g_tt, g_zt = geom.metric_from_omega_w(np.ones_like(z), wz, wt)
    kappa = geom.curvature(metric_sampler(moduli, j), z, theta, h, h_theta=THETA_STEP)
    return AkSample(z, theta, V, g_zz, g_tt, g_zt, w, wz, wt, kappa)


def symplectic_area(moduli: ModuliA, j: int | None = None, n: int = 400) -> dict:
    """Area of sphere j: ``2 pi (a_{j+1} - a_j)`` against a midpoint quadrature
    of the Gibbons-Hawking area density ``sqrt(V * V^-1)`` on the axis."""
    lo, hi = sphere_interval(moduli, j)
    j = moduli.ell if j is None else j
    z = grid_nodes(lo, hi, n)
    V = potential(moduli, z)
    dens = np.sqrt(V * (1.0 / V))
    quad = float(2 * math.pi * np.sum(dens) * (hi - lo) / n)
    exact = 2 * math.pi * (hi - lo)
    return {"sphere": j, "area": exact, "quadrature": quad, "residual": abs(quad - exact)}


def twistor_line_check(moduli: ModuliA, x: complex, z: float, u_samples,
                       tol: float = 1e-10) -> dict:
    """Residual of the real twistor line through ``(x, z)`` on the real slice.

    The line is ``u -> (x u^l, (-1)^l conj(x) u^l, z u)`` on
    ``X Y = prod (Z - a_i u)``.  The factor ``(-1)^l`` is the real structure
    for which the central interval is real; the untwisted residual is
    reported alongside for comparison.
    """
    ell = moduli.ell
    prod = math.prod(z - a for a in moduli.roots)
    rhs = (-1) ** ell * prod
    if abs(abs(x) ** 2 - rhs) > tol * max(1.0, abs(rhs)):
        raise ValueError(f"|x|^2 = {abs(x) ** 2!r} does not equal (-1)^l prod(z - a_i) = {rhs!r}")
    u = np.asarray(u_samples, dtype=complex)
    X = x * u**ell
    Y = (-1) ** ell * np.conj(x) * u**ell
    P = np.prod([z * u - a * u for a in moduli.roots], axis=0)
    scale = np.maximum(1.0, np.abs(u) ** (2 * ell))
    res = np.abs(X * Y - P) / scale
    untwisted = np.abs(X * np.conj(x) * u**ell - P) / scale
    return {
        "max_residual": float(np.max(res)) if res.size else 0.0,
        "untwisted_max_residual": float(np.max(untwisted)) if res.size else 0.0,
    }


def alf_transform(x, y, z):
    """``(x, y, z) -> (e^{-z} x, e^{z} y, z)``; preserves ``xy`` and ``dx ^ dz / x``."""
    e = np.exp(z)
    return x / e, y * e, z


def alf_transform_check(moduli: ModuliA, x, z) -> dict:
    """Numerical residuals of the ALF transform on points of ``xy = prod(z - a_i)``."""
    x = np.asarray(x, dtype=complex)
    z = np.asarray(z, dtype=complex)
    prod = np.prod([z - a for a in moduli.roots], axis=0)
    y = prod / x
    x2, y2, z2 = alf_transform(x, y, z)
    scale = np.maximum(1.0, np.abs(prod))
    surface = np.abs(x2 * y2 - np.prod([z2 - a for a in moduli.roots], axis=0)) / scale
    # dx' ^ dz = e^{-z} dx ^ dz, and 1/x' = e^{z}/x
    density = np.abs(np.exp(-z) * (x / x2) - 1.0)
    return {
        "surface_residual": float(np.max(surface)),
        "density_residual": float(np.max(density)),
        # exponents of e^z in x'y' and in the density ratio, tracked as integers
        "exponent_balance": {"xy": -1 + 1, "density": -1 + 1},
    }


def alf_chart(moduli: ModuliA, z, theta, j: int | None = None,
              margin: float = DEFAULT_MARGIN, h: float = 1e-4) -> AkSample:
    """Sphere data after ``V -> 1 + V``.

    The conformal coordinate becomes ``w' = e^{-z} w`` (the image of ``x``
    under :func:`alf_transform`), so ``d log w' = -(1 + V) dz + i dtheta``.
    """
    j = moduli.ell if j is None else j
    _check_z(moduli, j, z, margin)
    z, theta = np.broadcast_arrays(np.asarray(z, float), np.asarray(theta, float))
    w, wz, wt, V = _chart(moduli, j, z, theta)
    e = np.exp(-z)
    w2, wz2, wt2 = e * w, e * (wz - w), e * wt
    g_zz, g_tt, g_zt = geom.metric_from_omega_w(np.ones_like(z), wz2, wt2)
    kappa = geom.curvature(metric_sampler(moduli, j, alf=True), z, theta, h, h_theta=THETA_STEP)
    return AkSample(z, theta, 1.0 + V, g_zz, g_tt, g_zt, w2, wz2, wt2, kappa)


def grid_nodes(lo: float, hi: float, n: int) -> np.ndarray:
    """Cell midpoints of ``[lo, hi]`` split into ``n`` cells."""
    if n < 1:
        raise ValueError("grid size must be positive")
    return lo + (np.arange(n) + 0.5) * (hi - lo) / n


def sample_grid(moduli: ModuliA, n_z: int, n_theta: int, j: int | None = None,
                alf: bool = False) -> AkSample:
    lo, hi = sphere_interval(moduli, j)
    Z, T = np.meshgrid(grid_nodes(lo, hi, n_z), grid_nodes(0.0, 2 * math.pi, n_theta),
                       indexing="ij")
    fn = alf_chart if alf else sphere_metric
    return fn(moduli, Z.ravel(), T.ravel(), j)
