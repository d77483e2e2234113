"""Conformal geometry of the unit disk.

Pseudo-hyperbolic distance, disk automorphisms, finite Blaschke products and
the rising factorial used by the kernel formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import mpmath
import numpy as np

from . import jets
from .errors import DomainError
from .numeric import FLOAT, Backend, backend_for


def _conj(x):
    return x.conjugate()


def _check_open(z, name="z"):
    if not abs(z) < 1:
        raise DomainError(f"{name}={z!r} is not in the open unit disk")


def pseudo_distance(z, w) -> float:
    """Pseudo-hyperbolic distance ``|z - w| / |1 - conj(z) w|``.

    Both points must lie in the open unit disk.
    """
    _check_open(z, "z")
    _check_open(w, "w")
    num = abs(z - w)
    if num == 0:
        return 0.0 if not isinstance(num, mpmath.mpf) else num
    return num / abs(1 - _conj(z) * w)


def pseudo_distance_array(z, w) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return np.abs(z - w) / np.abs(1 - np.conj(z) * w)


@dataclass(frozen=True)
class MobiusMap:
    """Disk automorphism ``z -> rotation * (a - z) / (1 - conj(a) z)``.

    With ``rotation == 1`` this is the involution exchanging ``a`` and ``0``.
    """

    a: complex
    rotation: complex = 1.0

    def __post_init__(self):
        _check_open(self.a, "a")
        if not math.isclose(abs(self.rotation), 1.0, rel_tol=0, abs_tol=1e-12):
            raise DomainError(f"rotation {self.rotation!r} is not unimodular")

    def __call__(self, z):
        return self.rotation * (self.a - z) / (1 - _conj(self.a) * z)

    def values(self, z: np.ndarray) -> np.ndarray:
        a = complex(self.a)
        z = np.asarray(z, dtype=complex)
        return complex(self.rotation) * (a - z) / (1 - a.conjugate() * z)

    def inverse(self) -> "MobiusMap":
        # z = conj(r) (r a - w) / (1 - conj(r a) w)
        r = self.rotation
        return MobiusMap(a=r * self.a, rotation=_conj(r))

    def derivative(self, z):
        a = self.a
        return -self.rotation * (1 - abs(a) ** 2) / (1 - _conj(a) * z) ** 2

    def taylor(self, z, order: int, bk: Backend = FLOAT) -> list:
        a = bk.number(self.a)
        r = bk.number(self.rotation)
        z = bk.number(z)
        num = [r * (a - z), -r] + [bk.zero] * max(order - 1, 0)
        den = [1 - bk.conj(a) * z, -bk.conj(a)] + [bk.zero] * max(order - 1, 0)
        return jets.div(num[: order + 1], den[: order + 1])


def mobius_apply(m: MobiusMap, z):
    """Apply ``m`` to a point of the closed disk."""
    if abs(z) > 1:
        raise DomainError(f"z={z!r} lies outside the closed unit disk")
    return m(z)


@dataclass(frozen=True)
class BlaschkeProduct:
    """Finite Blaschke product given as ``((zero, multiplicity), ...)``.

    Each factor is ``(|a|/a) (a - z) / (1 - conj(a) z)``, or ``z`` when
    ``a == 0``, so ``B(0) = prod |a|^m >= 0``.
    """

    zeros: tuple = field(default_factory=tuple)

    def __post_init__(self):
        cleaned = []
        for a, mult in self.zeros:
            _check_open(a, "zero")
            if int(mult) != mult or mult < 1:
                raise DomainError(f"multiplicity must be a positive integer, got {mult!r}")
            cleaned.append((a, int(mult)))
        object.__setattr__(self, "zeros", tuple(cleaned))

    @classmethod
    def from_points(cls, points: Iterable, multiplicity: int = 1) -> "BlaschkeProduct":
        """Blaschke product with the given multiplicity at each *distinct* point."""
        seen = []
        for p in points:
            if not any(p == q for q in seen):
                seen.append(p)
        return cls(tuple((p, multiplicity) for p in seen))

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.zeros)

    def __call__(self, z):
        out = 1
        for a, mult in self.zeros:
            if a == 0:
                f = z
            else:
                f = (abs(a) / a) * (a - z) / (1 - _conj(a) * z)
            out = out * f**mult
        return out

    def values(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        for a, mult in self.zeros:
            a = complex(a)
            if a == 0:
                f = z
            else:
                f = (abs(a) / a) * (a - z) / (1 - a.conjugate() * z)
            out = out * f**mult
        return out

    def taylor(self, z, order: int, bk: Backend = FLOAT) -> list:
        z = bk.number(z)
        out = jets.constant(bk.one, order)
        for a, mult in self.zeros:
            a = bk.number(a)
            if a == 0:
                factor = jets.variable(z, order)
            else:
                u = abs(a) / a
                num = [u * (a - z), -u] + [bk.zero] * order
                den = [1 - bk.conj(a) * z, -bk.conj(a)] + [bk.zero] * order
                factor = jets.div(num[: order + 1], den[: order + 1])
            out = jets.mul(out, jets.power(factor, mult))
        return out


def blaschke_eval_jet(B: BlaschkeProduct, z, order: int, dps: int | None = None) -> list:
    """Values ``B(z), B'(z), ..., B^(order)(z)``.

    Computed by jet arithmetic on the factors. ``dps`` switches to mpmath
    with that many decimal digits.
    """
    _check_open(z)
    order = jets.check_order(order)
    bk = backend_for(dps)
    if dps is None:
        return jets.to_derivatives(B.taylor(z, order, bk))
    with mpmath.workdps(dps):
        return jets.to_derivatives(B.taylor(z, order, bk))


def pochhammer(a: float, b: int) -> float:
    """Rising factorial ``a (a+1) ... (a+b-1)``; ``pochhammer(a, 0) == 1``."""
    if b < 0 or int(b) != b:
        raise DomainError(f"pochhammer needs a nonnegative integer count, got {b!r}")
    out = 1.0
    for i in range(int(b)):
        out *= a + i
    return out
