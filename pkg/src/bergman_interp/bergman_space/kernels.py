from __future__ import annotations

import cmath

from ..disk_geometry import pochhammer
from ..errors import DomainError
from .params import SpaceParams


def kernel_derivative(m: int, lam, k: int, z, params: SpaceParams) -> complex:
    """``K^(k)_{m,lam}(z)`` from the closed form.

    ``(mt)_k conj(lam)^k (1-|lam|^2)^(m+1) / (1 - conj(lam) z)^(mt+k)`` with
    ``mt = m + 1 + (2+alpha)/p``. Direct formula, used as the oracle for the
    jet path; it overflows for large ``m`` where the jet path does not.
    """
    lam, z = complex(lam), complex(z)
    if not abs(lam) < 1 or not abs(z) < 1:
        raise DomainError("kernel_derivative needs |lam| < 1 and |z| < 1")
    if k < 0:
        raise DomainError("derivative order must be nonnegative")
    if k > 0 and lam == 0:
        return 0j
    mt = params.shifted(m)
    lc = lam.conjugate()
    d = 1 - lc * z
    return pochhammer(mt, k) * lc**k * (1 - abs(lam) ** 2) ** (m + 1) * cmath.exp(-(mt + k) * cmath.log(d))
