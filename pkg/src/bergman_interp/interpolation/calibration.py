"""Radius ``R`` and separation ``eps`` for the clustered construction.

For ``|z| > R`` and ``rho(z, w) <= eps`` the ratios
``(1-|z|^2)/(1-|w|^2)`` and ``|1 - conj(w) z|/(1-|z|^2)`` raised to the
power ``E`` stay in ``(2^-1/2, 2^1/2)``, and ``|z|^N, |w|^N > 2^-1/2``.
``eps`` comes from the conservative rule ``(1 + 8 eps)^E = sqrt 2``.

Verification uses exact disk geometry: writing ``w = phi_z(t)`` with
``|t| = rho``, the first ratio equals ``|1 - conj(z) t|^2 / (1 - rho^2)`` and
the second ``1 / |1 - conj(z) t|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..bergman_space.params import SpaceParams
from ..errors import DomainError, NumericError
from ..numeric import clog1p_array
from .msequence import MSequence

HALF_LOG2 = 0.5 * math.log(2.0)


@dataclass(frozen=True)
class Calibration:
    N: int
    R: float
    eps: float
    E: float

    def to_json(self) -> dict:
        return {"N": self.N, "R": self.R, "eps": self.eps, "E": self.E}


def ratio_radius(E: float) -> float:
    """Largest ``r`` with ``(1 + 8r)^E <= sqrt 2``."""
    if not E > 0:
        raise DomainError("ratio exponent must be positive")
    return math.expm1(HALF_LOG2 / E) / 8.0


def radius_floor(N: int) -> float:
    """Smallest ``R0`` with ``R0^N >= 2^-1/2`` (vacuous for ``N == 0``)."""
    return 0.0 if N == 0 else 2.0 ** (-1.0 / (2 * N))


def calibrate(N: int, params: SpaceParams, m_seq: MSequence) -> Calibration:
    """Fix ``E = mt_N + N + 2``, then ``eps`` and ``R``.

    ``R`` is enlarged from ``R0`` so that every ``w`` within ``eps`` of a
    ``z`` with ``|z| > R`` also has ``|w| > R0``, and floored at 1/2.
    """
    if m_seq.N != N:
        raise DomainError(f"index sequence has length {m_seq.N + 1}, expected {N + 1}")
    if not m_seq.valid:
        raise DomainError("index sequence violates the row inequality; use the greedy strategy")
    E = float(m_seq.shifted[-1]) + N + 2
    if not math.isfinite(E):
        raise NumericError("ratio exponent overflows; use the greedy strategy or a smaller N")
    eps = ratio_radius(E)
    if not eps > 1e-300:
        raise NumericError(f"separation {eps!r} underflows; use the greedy strategy or a smaller N")
    R0 = radius_floor(N)
    R = max((R0 + 8 * eps) / (1 + 8 * eps), 0.5)
    return Calibration(N=N, R=R, eps=eps, E=E)


@dataclass(frozen=True)
class CalibrationCheck:
    worst_fraction: float
    worst_power: float
    samples: int
    exact_ok: bool

    @property
    def holds(self) -> bool:
        return self.exact_ok and self.worst_fraction < 1.0 and self.worst_power > -HALF_LOG2


def verify_calibration(cal: Calibration, n_samples: int = 20_000, seed: int = 0) -> CalibrationCheck:
    """Check the ratio bounds at the worst case and on random ``(z, w)`` pairs.

    ``worst_fraction`` is ``max E |log ratio| / (log 2 / 2)`` over samples;
    ``worst_power`` is the smallest ``log(|z|^N)``, ``log(|w|^N)`` seen.
    """
    E, eps, R, N = cal.E, cal.eps, cal.R, cal.N
    # extreme points of both ratios over rho <= eps
    exact = max(2 * E * math.atanh(eps), -E * math.log1p(-eps), E * math.log1p(eps))
    exact_ok = exact < HALF_LOG2
    rng = np.random.default_rng(seed)
    # |z| from R to 1 - 1e-12, denser near the boundary
    u = rng.uniform(0, 1, n_samples)
    gap = (1 - R) * np.exp(u * math.log(1e-12 / (1 - R)))
    z = (1 - gap) * np.exp(2j * np.pi * rng.uniform(0, 1, n_samples))
    rho = eps * rng.uniform(0, 1, n_samples)
    t = rho * np.exp(2j * np.pi * rng.uniform(0, 1, n_samples))
    log_d = clog1p_array(-np.conj(z) * t).real  # log |1 - conj(z) t|
    log_r1 = 2 * log_d - np.log1p(-rho * rho)
    log_r2 = -log_d
    frac = E * np.maximum(np.abs(log_r1), np.abs(log_r2)) / HALF_LOG2
    # 1 - |w|^2 = (1 - |z|^2)(1 - rho^2) / |1 - conj(z) t|^2
    one_minus_w2 = gap * (2 - gap) * (1 - rho * rho) * np.exp(-2 * log_d)
    log_w = 0.5 * np.log1p(-one_minus_w2)
    log_z = np.log1p(-gap)
    power = N * np.minimum(log_w, log_z) if N else np.zeros(n_samples)
    return CalibrationCheck(
        worst_fraction=float(np.max(frac)),
        worst_power=float(np.min(power)),
        samples=n_samples,
        exact_ok=bool(exact_ok),
    )
