"""Bounded functions that equal 1 to order ``N`` on a cluster and vanish to
order ``N`` on far points.

Construction: recentre at the first cluster point, collapse the cluster to
0 with a Blaschke product ``B`` that has simple zeros at the mapped cluster
points, then use ``Bt * q`` where ``Bt`` vanishes to order ``N+1`` at the
images of the far points and the polynomial ``q`` fixes the jet at 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from ..bergman_space.functions import Blaschke, Compose, Polynomial, PreCompose, Product
from ..bergman_space.norms import circle_max
from ..disk_geometry import BlaschkeProduct, MobiusMap
from ..errors import DomainError, SingularMatrixError
from ..numeric import MP, log_abs

DEFAULT_DPS = 50


@dataclass
class Annihilator:
    fn: object
    sup_bound: float
    diagnostics: dict = field(default_factory=dict)


def _distinct(points):
    out = []
    for p in points:
        if not any(p == q for q in out):
            out.append(p)
    return out


def build_annihilator(cluster, far, N: int, c: float, eps: float, dps: int = DEFAULT_DPS) -> Annihilator:
    """``h`` with ``h^(n)(z_j) = delta_0n`` on ``cluster`` and ``h^(n)(w_j) = 0`` on ``far``.

    Requires ``rho(z_j, z_1) <= eps`` for the cluster (``z_1 = cluster[0]``)
    and ``rho(w_j, z_1) > c eps`` for the far points.
    ``sup_bound`` is ``max_{|z|=1} |q|``, which dominates ``sup_D |h|``.

    The coefficients of ``q`` grow like a negative power of the separation,
    and evaluating ``h`` cancels them down to ``O(1)``; the working precision
    is raised until ``dps`` digits survive that cancellation. The precision
    used is reported as ``diagnostics["dps"]``; evaluate ``h`` with at least
    that many digits.
    """
    ann = _build(cluster, far, N, c, eps, dps)
    lost = ann.diagnostics.get("log10_max_coeff", 0.0)
    if lost > 0:
        ann = _build(cluster, far, N, c, eps, dps + int(math.ceil(lost)))
    return ann


def _build(cluster, far, N, c, eps, dps) -> Annihilator:
    if not cluster:
        raise DomainError("the cluster needs at least one point")
    if not c > 1 or not eps > 0:
        raise DomainError("need c > 1 and eps > 0")
    N = int(N)
    if N < 0:
        raise DomainError("N must be nonnegative")
    far = _distinct(list(far))
    if not far:
        return Annihilator(Polynomial((1.0,)), 1.0, {"far_points": 0, "dps": dps})

    z1 = complex(cluster[0])
    phi = MobiusMap(z1)
    with mpmath.workdps(dps):
        z1m = mpmath.mpc(z1)

        def mapped(x):
            x = mpmath.mpc(x)
            return (z1m - x) / (1 - mpmath.conj(z1m) * x)

        us = _distinct([mapped(z) for z in cluster])
        for u in us:
            if abs(u) > eps * (1 + 1e-12):
                raise DomainError(f"cluster point at distance {float(abs(u)):.3e} exceeds eps={eps:.3e}")
        ws = [mapped(w) for w in far]
        for w in ws:
            if not abs(w) > c * eps:
                raise DomainError(f"far point at distance {float(abs(w)):.3e} is not beyond c*eps={c * eps:.3e}")
        B = BlaschkeProduct.from_points(us, 1)
        vs = _distinct([B(w) for w in ws])
        separation = (eps * (c - 1) / 2) ** len(us)
        min_v = min(abs(v) for v in vs)
        if not min_v >= separation * (1 - 1e-12):
            raise DomainError(
                f"mapped far point |B(w)| = {float(min_v):.3e} below the separation bound {separation:.3e}"
            )
        Bt = BlaschkeProduct(tuple((v, N + 1) for v in vs))
        # Leibniz system for (Bt q)^(j)(0) = delta_0j, lower triangular
        bt = [x * math.factorial(k) for k, x in enumerate(Bt.taylor(mpmath.mpc(0), N, MP))]
        if bt[0] == 0:
            raise SingularMatrixError("Blaschke product vanishes at 0")
        cvec = []
        for j in range(N + 1):
            acc = mpmath.mpc(1 if j == 0 else 0)
            for k in range(j):
                acc -= mpmath.binomial(j, k) * bt[j - k] * cvec[k]
            cvec.append(acc / bt[0])
        coeffs = tuple(ck / math.factorial(k) for k, ck in enumerate(cvec))
        log_det = (N + 1) * log_abs(bt[0])
        log10_max = max(float(mpmath.log10(abs(x))) for x in coeffs if x != 0)

    q = Polynomial(coeffs)
    h = PreCompose(phi, Compose(Product((Blaschke(Bt), q)), Blaschke(B)))
    sup_bound = circle_max(q, 1.0, 1024)
    diag = {
        "center": [z1.real, z1.imag],
        "cluster_points": len(us),
        "far_points": len(vs),
        "multiplicity": N + 1,
        "log_abs_det": float(log_det),
        "min_abs_mapped_far": float(min_v),
        "separation_bound": float(separation),
        "c": c,
        "eps": eps,
        "log10_max_coeff": log10_max,
        "dps": dps,
    }
    return Annihilator(h, float(sup_bound), diag)


def sample_sup(h, n: int = 2048, radius: float = 1 - 1e-9) -> float:
    """``max |h|`` on a circle close to the boundary, a lower estimate of ``sup |h|``."""
    theta = 2 * np.pi * np.arange(n) / n
    return float(np.max(np.abs(h(radius * np.exp(1j * theta)))))
