"""Norms in ``A^p_alpha`` / ``H^p`` and the kernel integral estimates.

The quadrature estimators live here together with two closed forms used as
independent checks and as fallbacks when a kernel is too concentrated for any
grid: the kernel norm identity

    ||K_{m,lam}||^p = 2F1(-g/2, -g/2; alpha+2; |lam|^2),  g = p(m+1) - 2 - alpha,

(obtained by the Mobius substitution centred at ``lam`` followed by
Parseval on circles) and its limit ``|lam| -> 1`` given by Gauss' summation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, logsumexp

from ..errors import DomainError, NumericError
from . import quadrature as q
from .functions import AnalyticFn, Kernel, evaluate, walk
from .params import QuadratureConfig, SpaceParams


@dataclass
class NormResult:
    """A norm estimate with its provenance.

    ``log_value`` is always finite for a finite norm, even when ``value``
    overflows to ``inf``.
    """

    log_value: float
    resolved: bool
    method: str
    diagnostics: dict = field(default_factory=dict)

    @property
    def value(self) -> float:
        if self.log_value > 709.0:
            return math.inf
        return math.exp(self.log_value)

    def __float__(self):
        return self.value

    def to_json(self) -> dict:
        out = {"method": self.method, "resolved": self.resolved, "log10_value": self.log_value / math.log(10)}
        if math.isfinite(self.value):
            out["value"] = self.value
        if self.diagnostics:
            out["diagnostics"] = self.diagnostics
        return out


def _auto_center(f: AnalyticFn):
    best = None
    for node in walk(f):
        if isinstance(node, Kernel) and node.lam != 0:
            key = (node.m, abs(node.lam))
            if best is None or key > best[0]:
                best = (key, complex(node.lam))
    return None if best is None else best[1]


def _resolve_center(f, cfg: QuadratureConfig):
    if cfg.center == "auto":
        return _auto_center(f)
    return cfg.center


def _abs_pow(f: AnalyticFn, p: float):
    def F(z):
        v = np.abs(evaluate(f, z))
        return v if p == 1 else v**p

    return F


def norm(f: AnalyticFn, params: SpaceParams, cfg: QuadratureConfig | None = None) -> NormResult:
    """``||f||_{p,alpha}`` by quadrature.

    * ``alpha > -1``: tensor Gauss-Jacobi x trapezoid grid over the disk;
    * ``alpha == -1``: circle means at radii ``1 - 2^-j`` (Hardy space);
    * ``p == inf``: sup of ``|f|`` on circles approaching the boundary.

    Grids are doubled until two estimates agree to ``cfg.rtol``. When that
    fails the last estimate is returned with ``resolved=False``.
    """
    cfg = cfg or QuadratureConfig()
    try:
        if params.is_sup:
            return sup_norm(f, cfg)
        if params.is_hardy:
            return _hardy_norm(f, params.p, cfg)
        return _bergman_norm(f, params, cfg)
    except NumericError as exc:
        return NormResult(math.inf, False, "overflow", {"error": str(exc)})


def _bergman_norm(f, params, cfg):
    p = params.p
    center = _resolve_center(f, cfg)
    F = _abs_pow(f, p)

    def estimate(nr, na):
        return q.disk_integral(F, params.alpha, nr, na, center)

    val, ok, hist = q.refine(estimate, cfg.n_radial, cfg.n_angular, cfg.rtol, cfg.max_refinements)
    diag = {"center": None if center is None else [center.real, center.imag], "grid": list(hist[-1][:2])}
    if not np.isfinite(val):
        return NormResult(math.inf, False, "area-quadrature", diag)
    log_val = math.log(val) / p if val > 0 else -math.inf
    return NormResult(log_val, ok, "area-quadrature", diag)


def _hardy_norm(f, p, cfg, levels: int = 24):
    F = _abs_pow(f, p)
    center = _resolve_center(f, cfg)
    means = []
    resolved = True
    for j in range(1, levels + 1):
        r = 1.0 - 2.0**-j

        def G(u, r=r):
            return F(r * u)

        def est(nr, na):
            return q.circle_integral(G, na, center)

        val, ok, _ = q.refine(est, 4, cfg.n_angular, cfg.rtol, cfg.max_refinements + 2)
        resolved &= ok
        means.append(val)
    diffs = np.diff(means)
    monotone = bool(np.all(diffs >= -cfg.rtol * np.abs(np.asarray(means[1:]))))
    last_step = abs(means[-1] - means[-2]) / max(abs(means[-1]), 1e-300)
    val = means[-1]
    log_val = math.log(val) / p if val > 0 else -math.inf
    diag = {"monotone": monotone, "last_relative_step": last_step, "radius": 1.0 - 2.0**-levels}
    return NormResult(log_val, resolved and monotone, "hardy-circle-means", diag)


def sup_norm(f: AnalyticFn, cfg: QuadratureConfig | None = None, levels: int = 30) -> NormResult:
    """``sup_D |f|`` from circles ``|z| = 1 - 2^-j`` with local angular zoom."""
    cfg = cfg or QuadratureConfig()
    maxima = []
    for j in range(1, levels + 1):
        r = 1.0 - 2.0**-j
        maxima.append(circle_max(f, r, cfg.n_angular * 8))
    maxima = np.asarray(maxima)
    tail = maxima[-5:]
    settled = bool(np.all(np.abs(np.diff(tail)) <= 1e-6 * np.max(tail)))
    val = float(np.max(maxima))
    log_val = math.log(val) if val > 0 else -math.inf
    return NormResult(log_val, bool(settled and np.isfinite(val)), "boundary-sup", {"levels": levels})


def circle_max(f: AnalyticFn, r: float, n: int = 512, zoom: int = 6) -> float:
    """Max of ``|f|`` on the circle of radius ``r``: grid search then zoom on the best cell."""
    theta = 2 * np.pi * np.arange(n) / n
    vals = np.abs(evaluate(f, r * np.exp(1j * theta)))
    i = int(np.nanargmax(vals))
    best = float(vals[i])
    width = 2 * np.pi / n
    center = theta[i]
    for _ in range(zoom):
        loc = center + np.linspace(-width, width, 33)
        v = np.abs(evaluate(f, r * np.exp(1j * loc)))
        k = int(np.nanargmax(v))
        if v[k] > best:
            best = float(v[k])
        center = loc[k]
        width /= 16
    return best


# --------------------------------------------------------------------------
# closed forms


def _hyp_log_series(a: float, c: float, x: float, max_terms: int) -> float | None:
    """``log 2F1(-a, -a; c; x)`` by summing its positive terms in log-domain."""
    if x == 0:
        return 0.0
    n_peak = a * math.sqrt(x) / (1 + math.sqrt(x)) if a > 0 else 0.0
    n_terms = int(2 * n_peak + 80 / max(1 - x, 1e-12) + 200)
    if n_terms > max_terms:
        return None
    n = np.arange(n_terms - 1, dtype=float)
    with np.errstate(divide="ignore"):
        log_ratio = 2 * np.log(np.abs(n - a)) - np.log(n + 1) - np.log(n + c) + math.log(x)
    log_terms = np.concatenate([[0.0], np.cumsum(log_ratio)])
    return float(logsumexp(log_terms))


def kernel_norm_exponent(m, params: SpaceParams) -> float:
    """``g = p(m+1) - 2 - alpha`` in ``||K_{m,lam}||^p = int |1 - conj(lam) w|^g dA_alpha(w)``."""
    return params.p * (float(m) + 1.0) - 2.0 - params.alpha


def kernel_norm_sup_log(m, params: SpaceParams) -> float:
    """``log sup_lam ||K_{m,lam}||`` via Gauss' value ``2F1(a,b;c;1)``."""
    if params.is_sup:
        return (float(m) + 1.0) * math.log(2.0)
    g = kernel_norm_exponent(m, params)
    c = params.alpha + 2.0
    log_f = gammaln(c) + gammaln(c + g) - 2.0 * gammaln(c + g / 2.0)
    return float(log_f) / params.p


def kernel_norm_log(m, lam_abs: float, params: SpaceParams, max_terms: int = 4_000_000) -> tuple[float, str]:
    """``log ||K_{m,lam}||_{p,alpha}`` in closed form.

    Returns ``(log_norm, method)``; ``method`` is ``"hypergeometric"`` when
    the series was summed and ``"gauss-sup-bound"`` when the parameters are
    too large and the ``|lam| -> 1`` supremum (an upper bound) is used.
    """
    if not 0 <= lam_abs < 1:
        raise DomainError(f"|lambda|={lam_abs!r} outside [0, 1)")
    if params.is_sup:
        return (float(m) + 1.0) * math.log1p(lam_abs), "closed-form-sup"
    g = kernel_norm_exponent(m, params)
    val = _hyp_log_series(g / 2.0, params.alpha + 2.0, lam_abs * lam_abs, max_terms)
    if val is None:
        return kernel_norm_sup_log(m, params), "gauss-sup-bound"
    return val / params.p, "hypergeometric"


def forelli_rudin_integral_exact(alpha: float, beta: float, z_abs: float) -> float:
    """``int (1-|w|^2)^alpha / |1 - z conj(w)|^(2+alpha+beta) dA(w)`` in closed form.

    Equals ``2F1(c/2, c/2; 2+alpha; |z|^2) / (1+alpha)`` with ``c = 2+alpha+beta``;
    used only as a test oracle.
    """
    from scipy.special import hyp2f1

    c = 2.0 + alpha + beta
    return float(hyp2f1(c / 2, c / 2, 2 + alpha, z_abs * z_abs)) / (1.0 + alpha)


def forelli_rudin_bound_check(alpha: float, beta: float, z, cfg: QuadratureConfig | None = None,
                              max_shells: int = 60) -> tuple[float, float]:
    """Value of ``int (1-|w|^2)^alpha / |1 - z conj(w)|^(2+alpha+beta) dA(w)``
    and the reference growth ``(1-|z|^2)^(-beta)``.

    Summed over dyadic shells towards the boundary with adaptive angular
    panels, which resolves the spike at ``z/|z|`` for ``|z|`` near 1; stops
    once the shell increments are negligible.
    """
    if not alpha > -1:
        raise DomainError("alpha must exceed -1")
    c = 2.0 + alpha + beta
    if not c > 0:
        raise DomainError("need 2 + alpha + beta > 0")
    if not abs(z) < 1:
        raise DomainError("z must lie in the open disk")
    cfg = cfg or QuadratureConfig()
    z = complex(z)

    def F(w):
        return np.abs(1.0 - z * np.conj(w)) ** (-c)

    rtol = min(cfg.rtol, 1e-10)
    parts = []
    for j, d, _ in q.shell_increments(F, alpha, rtol):
        parts.append(d)
        # beyond 1 - |z| the shells decay like 2^-(alpha+1) j
        if j > 4 and 2.0**-j < (1 - abs(z)) and d <= 1e-3 * rtol * math.fsum(parts):
            break
        if j >= max_shells:
            break
    # dA_alpha carries the factor (1 + alpha); the bare integral does not
    integral = math.fsum(parts) / (1.0 + alpha)
    return integral, (1.0 - abs(z) ** 2) ** (-beta)


def forelli_rudin_circle_check(beta: float, z, cfg: QuadratureConfig | None = None) -> tuple[float, float]:
    """Boundary version: ``int_T |1 - z conj(w)|^-(1+beta) dm(w)`` and ``(1-|z|^2)^(-beta)``."""
    if not abs(z) < 1:
        raise DomainError("z must lie in the open disk")
    cfg = cfg or QuadratureConfig()
    z = complex(z)

    def G(w):
        return np.abs(1.0 - z * np.conj(w)) ** (-(1.0 + beta))

    center = None if z == 0 else z

    def est(nr, na):
        return q.circle_integral(G, na, center)

    val, _, _ = q.refine(est, 4, cfg.n_angular, cfg.rtol, cfg.max_refinements + 2)
    return val, (1.0 - abs(z) ** 2) ** (-beta)
