"""Scalar arithmetic backends and log-domain helpers.

Jet propagation runs either in IEEE double precision (``cmath``) or in
arbitrary precision (``mpmath``). Both backends expose the same handful of
functions so that the jet code is written once.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Any, Callable

import mpmath
import numpy as np


def clog1p(w: complex) -> complex:
    """``log(1 + w)`` for a complex scalar, accurate when ``|w|`` is tiny."""
    w = complex(w)
    x, y = w.real, w.imag
    # |1+w|^2 - 1 = 2x + x^2 + y^2
    re = 0.5 * math.log1p(2.0 * x + x * x + y * y) if (2.0 * x + x * x + y * y) > -1.0 else -math.inf
    im = math.atan2(y, 1.0 + x)
    return complex(re, im)


def clog1p_array(w: np.ndarray) -> np.ndarray:
    """Vectorised :func:`clog1p` (``numpy.log1p`` drops the real part of tiny complex inputs)."""
    w = np.asarray(w, dtype=complex)
    x, y = w.real, w.imag
    t = 2.0 * x + x * x + y * y
    with np.errstate(divide="ignore", invalid="ignore"):
        re = 0.5 * np.log1p(t)
    im = np.arctan2(y, 1.0 + x)
    return re + 1j * im


@dataclass(frozen=True)
class Backend:
    name: str
    exp: Callable[[Any], Any]
    log: Callable[[Any], Any]
    log1p: Callable[[Any], Any]
    conj: Callable[[Any], Any]
    number: Callable[[Any], Any]
    real_log: Callable[[Any], Any]
    is_mp: bool

    @property
    def zero(self):
        return self.number(0)

    @property
    def one(self):
        return self.number(1)


FLOAT = Backend(
    name="float",
    exp=cmath.exp,
    log=cmath.log,
    log1p=clog1p,
    conj=lambda x: complex(x).conjugate(),
    number=complex,
    real_log=math.log,
    is_mp=False,
)

MP = Backend(
    name="mp",
    exp=mpmath.exp,
    log=mpmath.log,
    log1p=mpmath.log1p,
    conj=mpmath.conj,
    number=lambda x: x if isinstance(x, mpmath.mpc) else mpmath.mpc(x),
    real_log=mpmath.log,
    is_mp=True,
)


def backend_for(dps: int | None) -> Backend:
    return FLOAT if dps is None else MP


# Largest argument with exp(x) finite in double precision.
LOG_MAX = math.log(np.finfo(float).max)
LOG_TINY = math.log(np.finfo(float).tiny) - 53 * math.log(2.0)


def log_rising(a: float, k: int) -> float:
    """``log((a)_k)`` for ``a > 0`` without forming the product."""
    return math.fsum(math.log(a + i) for i in range(k))


def to_complex(x) -> complex:
    """Convert an ``mpc``/``mpf``/Python number to ``complex`` (may overflow to inf)."""
    if isinstance(x, (mpmath.mpc, mpmath.mpf)):
        return complex(x)
    return complex(x)


def log_abs(x) -> float:
    """Natural log of ``|x|`` for any scalar, including mp values beyond double range."""
    if isinstance(x, (mpmath.mpc, mpmath.mpf)):
        if x == 0:
            return -math.inf
        return float(mpmath.log(abs(x)))
    a = abs(x)
    return math.log(a) if a > 0 else -math.inf


def split_log(x) -> tuple[float, float]:
    """Return ``(log10|x|, arg x)`` for serialisation of extreme magnitudes."""
    lm = log_abs(x)
    if isinstance(x, (mpmath.mpc, mpmath.mpf)):
        phase = float(mpmath.arg(x)) if x != 0 else 0.0
    else:
        phase = cmath.phase(complex(x))
    return lm / math.log(10.0), phase
