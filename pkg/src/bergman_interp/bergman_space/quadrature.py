"""Quadrature rules on the unit disk and the unit circle.

Area integrals against ``dA_alpha = (1+alpha)(1-|z|^2)^alpha dA`` use a
tensor grid: Gauss-Jacobi nodes in ``t = r^2`` (weight ``(1-t)^alpha``) times
equispaced angles, which is spectrally accurate for smooth periodic
integrands. An optional Mobius change of variables recentres the grid at a
concentration point ``c``.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi

Integrand = Callable[[np.ndarray], np.ndarray]


@lru_cache(maxsize=128)
def radial_rule(n: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes ``t_i`` in (0, 1) and weights with ``sum w_i g(t_i) ~ int_0^1 g(t) (1+alpha)(1-t)^alpha dt``."""
    x, w = roots_jacobi(n, alpha, 0.0)
    t = 0.5 * (1.0 + x)
    w = w * (1.0 + alpha) * 2.0 ** (-alpha - 1.0)
    return t, w


@lru_cache(maxsize=128)
def angular_rule(n: int) -> np.ndarray:
    return 2.0 * np.pi * (np.arange(n) + 0.5) / n


def mobius_pullback(c: complex, w: np.ndarray) -> np.ndarray:
    """The involution ``w -> (c - w)/(1 - conj(c) w)``."""
    return (c - w) / (1.0 - np.conj(c) * w)


def disk_integral(F: Integrand, alpha: float, n_radial: int, n_angular: int, center: complex | None = None) -> float:
    """``int_D F dA_alpha`` on a fixed tensor grid.

    With ``center`` the substitution ``z = phi_c(w)`` is applied and the
    Jacobian ``(1-|c|^2)^(alpha+2) / |1 - conj(c) w|^(2 alpha + 4)`` folded in.
    """
    t, wr = radial_rule(n_radial, float(alpha))
    theta = angular_rule(n_angular)
    w = np.sqrt(t)[:, None] * np.exp(1j * theta)[None, :]
    if center is None or center == 0:
        vals = F(w)
    else:
        c = complex(center)
        jac = (1.0 - abs(c) ** 2) ** (alpha + 2.0) / np.abs(1.0 - np.conj(c) * w) ** (2.0 * alpha + 4.0)
        vals = F(mobius_pullback(c, w)) * jac
    return float(np.sum(wr[:, None] * vals) / n_angular)


def circle_integral(G: Integrand, n_angular: int, center: complex | None = None) -> float:
    """``int_T G dm`` on the unit circle, optionally recentred at ``center``."""
    theta = angular_rule(n_angular)
    u = np.exp(1j * theta)
    if center is None or center == 0:
        vals = G(u)
    else:
        c = complex(center)
        jac = (1.0 - abs(c) ** 2) / np.abs(1.0 - np.conj(c) * u) ** 2
        vals = G(mobius_pullback(c, u)) * jac
    return float(np.mean(vals))


def refine(estimate: Callable[[int, int], float], n_radial: int, n_angular: int, rtol: float, max_refinements: int):
    """Double both node counts until two successive estimates agree to ``rtol``.

    Returns ``(value, resolved, history)`` where ``history`` lists
    ``(n_radial, n_angular, value)``.
    """
    history = []
    prev = estimate(n_radial, n_angular)
    history.append((n_radial, n_angular, prev))
    for _ in range(max_refinements):
        n_radial *= 2
        n_angular *= 2
        cur = estimate(n_radial, n_angular)
        history.append((n_radial, n_angular, cur))
        if not np.isfinite(cur):
            return cur, False, history
        if abs(cur - prev) <= rtol * max(abs(cur), 1e-300):
            return cur, True, history
        prev = cur
    return prev, False, history


def adaptive_panels(G: Callable[[np.ndarray], np.ndarray], a: float, b: float, rtol: float = 1e-8,
                    n: int = 10, max_panels: int = 4096) -> tuple[float, bool]:
    """Vectorised adaptive Gauss-Legendre on ``[a, b]``.

    Each panel is compared against its two halves; panels whose difference
    exceeds their share of the tolerance are split. ``G`` receives a flat
    array of abscissae and must return values of the same shape.
    """
    x, w = np.polynomial.legendre.leggauss(n)
    panels = np.array([[a, b]], dtype=float)

    def rule(p):
        mid = 0.5 * (p[:, 0] + p[:, 1])
        half = 0.5 * (p[:, 1] - p[:, 0])
        pts = mid[:, None] + half[:, None] * x[None, :]
        vals = np.asarray(G(pts.ravel())).reshape(pts.shape)
        return half * (vals @ w)

    coarse = rule(panels)
    total = 0.0
    done_err = 0.0
    resolved = True
    while len(panels):
        mids = 0.5 * (panels[:, 0] + panels[:, 1])
        left = np.column_stack([panels[:, 0], mids])
        right = np.column_stack([mids, panels[:, 1]])
        fine_l, fine_r = rule(left), rule(right)
        fine = fine_l + fine_r
        err = np.abs(fine - coarse)
        scale = abs(total) + np.sum(np.abs(fine))
        ok = err <= rtol * max(scale, 1e-300) * (panels[:, 1] - panels[:, 0]) / (b - a) + 1e-300
        total += float(np.sum(fine[ok]))
        done_err += float(np.sum(err[ok]))
        bad = ~ok
        if not np.any(bad):
            break
        if 2 * np.count_nonzero(bad) + len(panels) > max_panels:
            total += float(np.sum(fine[bad]))
            resolved = False
            break
        panels = np.concatenate([left[bad], right[bad]])
        coarse = np.concatenate([fine_l[bad], fine_r[bad]])
    return total, resolved


def shell_integral(F: Integrand, alpha: float, g0: float, g1: float, n_radial: int = 16,
                   rtol: float = 1e-11) -> tuple[float, bool]:
    """``int F dA_alpha`` over the annulus ``1 - g0 < |z| < 1 - g1``.

    Gauss-Legendre in ``x = -log(1 - |z|^2)`` (a dyadic shell becomes an
    interval of length about log 2) times adaptive panels in the angle, so
    integrands that spike near one boundary point are still resolved.
    """
    # x = -log(1 - t), t = |z|^2, dt = (1 - t) dx
    x0 = -math.log(g0 * (2 - g0))
    x1 = -math.log(g1 * (2 - g1))
    xs, ws = np.polynomial.legendre.leggauss(n_radial)
    half = 0.5 * (x1 - x0)
    total = 0.0
    ok = True
    for xi, wi in zip(xs, ws):
        x = 0.5 * (x0 + x1) + half * xi
        one_minus_t = math.exp(-x)
        r = math.sqrt(1.0 - one_minus_t)

        def G(theta, r=r):
            return F(r * np.exp(1j * theta))

        mean, resolved = adaptive_panels(G, 0.0, 2 * np.pi, rtol=rtol)
        ok &= resolved
        total += wi * half * (1 + alpha) * one_minus_t ** (alpha + 1) * mean / (2 * np.pi)
    return total, ok


def shell_increments(F: Integrand, alpha: float, rtol: float = 1e-11):
    """Yield ``(j, increment, resolved)`` over ``|z| < 1/2`` (``j = 1``) and then the
    dyadic shells ``1 - 2^-(j-1) < |z| < 1 - 2^-j``."""
    yield (1, *shell_integral(F, alpha, 1.0, 0.5, 24, rtol))
    j = 2
    while True:
        yield (j, *shell_integral(F, alpha, 2.0 ** -(j - 1), 2.0**-j, 16, rtol))
        j += 1
