"""Closed-form analytic functions on the disk as small expression trees.

Every node supports two evaluation paths:

* ``_values`` -- vectorised double-precision values on a numpy array, used by
  quadrature and sampling;
* ``_taylor`` -- a jet (Taylor coefficients) at one point, in double or
  arbitrary precision.

Kernel nodes are evaluated in log-domain throughout; the powers involved in
interpolation reach exponents far beyond the double range.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np

from .. import jets
from ..disk_geometry import BlaschkeProduct, MobiusMap
from ..errors import DomainError, NumericError
from ..numeric import LOG_MAX, LOG_TINY, Backend, backend_for, clog1p, clog1p_array, log_rising, split_log, to_complex
from .params import SpaceParams


class AnalyticFn:
    """Base class of expression-tree nodes."""

    kind = "abstract"

    def _taylor(self, z, order: int, bk: Backend, path: str) -> list:
        raise NotImplementedError

    def _values(self, z: np.ndarray, path: str) -> np.ndarray:
        raise NotImplementedError

    def children(self) -> tuple:
        return ()

    def __call__(self, z):
        if np.ndim(z) == 0 and not isinstance(z, np.ndarray):
            return complex(evaluate(self, np.asarray([z]))[0])
        return evaluate(self, z)

    def __add__(self, other):
        return Sum((self, _lift(other)))

    def __radd__(self, other):
        return Sum((_lift(other), self))

    def __sub__(self, other):
        return Sum((self, Scale(-1.0, _lift(other))))

    def __rsub__(self, other):
        return Sum((_lift(other), Scale(-1.0, self)))

    def __mul__(self, other):
        if isinstance(other, AnalyticFn):
            return Product((self, other))
        return Scale(other, self)

    def __rmul__(self, other):
        return Scale(other, self)

    def __neg__(self):
        return Scale(-1.0, self)

    def __truediv__(self, other):
        if isinstance(other, AnalyticFn):
            return Quotient(self, other)
        return Scale(1.0 / other, self)

    def to_json(self) -> dict:
        raise NotImplementedError


def _lift(x) -> AnalyticFn:
    return x if isinstance(x, AnalyticFn) else Polynomial((x,))


@dataclass(frozen=True, eq=False)
class Polynomial(AnalyticFn):
    """``sum_i coeffs[i] z**i``."""

    coeffs: tuple
    kind = "polynomial"

    def __post_init__(self):
        c = tuple(self.coeffs) or (0.0,)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def _taylor(self, z, order, bk, path):
        b = [bk.number(c) for c in self.coeffs]
        n = len(b) - 1
        z = bk.number(z)
        # repeated synthetic division: b[k] becomes the k-th Taylor coefficient at z
        for k in range(n):
            for i in range(n - 1, k - 1, -1):
                b[i] = b[i] + z * b[i + 1]
        b = b[: order + 1]
        return b + [bk.zero] * (order + 1 - len(b))

    def _values(self, z, path):
        c = np.asarray([complex(x) for x in self.coeffs])
        return np.polynomial.polynomial.polyval(z, c)

    def to_json(self):
        return {"type": "polynomial", "coeffs": [encode_complex(c) for c in self.coeffs]}


@dataclass(frozen=True, eq=False)
class Kernel(AnalyticFn):
    """Modified kernel ``(1-|lam|^2)^(m+1) / (1 - conj(lam) z)^(m+1+(2+alpha)/p)``."""

    m: int
    lam: complex
    params: SpaceParams
    kind = "kernel"

    def __post_init__(self):
        if self.m < 0:
            raise DomainError(f"kernel index must be nonnegative, got {self.m}")
        if not abs(self.lam) < 1:
            raise DomainError(f"kernel point {self.lam!r} is not in the open disk")

    @property
    def power(self) -> float:
        return self.params.shifted(self.m)

    def _taylor(self, z, order, bk, path):
        if self.lam == 0:
            return jets.constant(bk.one, order)
        s = self.params.s
        if bk.is_mp:
            lam = bk.number(self.lam)
            lc = bk.conj(lam)
            z = bk.number(z)
            d = 1 - lc * z
            m1 = mpmath.mpf(self.m) + 1
            log_k = m1 * bk.log1p(lc * (z - lam) / d) - s * bk.log(d)
            out = [bk.exp(log_k)]
            if order:
                mt = m1 + s
                step = bk.log(lc / d)
                acc = mpmath.mpf(0)
                for k in range(1, order + 1):
                    acc += mpmath.log((mt + k - 1) / k)
                    out.append(bk.exp(log_k + acc + k * step))
            return out
        lam = complex(self.lam)
        lc = lam.conjugate()
        z = complex(z)
        d = 1 - lc * z
        m1 = float(self.m) + 1.0
        log_k = m1 * clog1p(lc * (z - lam) / d) - s * cmath.log(d)
        logs = [log_k]
        if order:
            mt = m1 + s
            step = cmath.log(lc / d)
            for k in range(1, order + 1):
                logs.append(log_k + log_rising(mt, k) - math.lgamma(k + 1) + k * step)
        return [_safe_exp(v, path) for v in logs]

    def _values(self, z, path):
        z = np.asarray(z, dtype=complex)
        if self.lam == 0:
            return np.ones_like(z)
        lam = complex(self.lam)
        lc = lam.conjugate()
        d = 1 - lc * z
        log_k = (float(self.m) + 1.0) * clog1p_array(lc * (z - lam) / d) - self.params.s * np.log(d)
        if np.any(log_k.real > LOG_MAX):
            raise NumericError("kernel value overflows double precision", path)
        with np.errstate(under="ignore"):
            return np.exp(log_k)

    def to_json(self):
        return {
            "type": "kernel",
            "m": int(self.m),
            "lambda": encode_complex(self.lam),
            "params": self.params.to_json(),
        }


def _safe_exp(log_value: complex, path: str) -> complex:
    if log_value.real > LOG_MAX:
        raise NumericError("value overflows double precision", path)
    if log_value.real < LOG_TINY:
        return 0j
    return cmath.exp(log_value)


@dataclass(frozen=True, eq=False)
class Blaschke(AnalyticFn):
    product: BlaschkeProduct
    kind = "blaschke"

    def _taylor(self, z, order, bk, path):
        return self.product.taylor(z, order, bk)

    def _values(self, z, path):
        return self.product.values(z)

    def to_json(self):
        return {
            "type": "blaschke",
            "zeros": [{"zero": encode_complex(a), "multiplicity": m} for a, m in self.product.zeros],
        }


@dataclass(frozen=True, eq=False)
class PreCompose(AnalyticFn):
    """``outer o inner`` with a disk automorphism ``inner``."""

    inner: MobiusMap
    outer: AnalyticFn
    kind = "precompose"

    def children(self):
        return (self.outer,)

    def _taylor(self, z, order, bk, path):
        inner = self.inner.taylor(z, order, bk)
        _check_inside(inner[0], path)
        outer = self.outer._taylor(inner[0], order, bk, path + ".outer")
        return jets.compose(outer, inner)

    def _values(self, z, path):
        return self.outer._values(self.inner.values(z), path + ".outer")

    def to_json(self):
        return {
            "type": "precompose",
            "mobius": {"a": encode_complex(self.inner.a), "rotation": encode_complex(self.inner.rotation)},
            "outer": self.outer.to_json(),
        }


@dataclass(frozen=True, eq=False)
class Compose(AnalyticFn):
    """``outer o inner`` for an analytic self-map ``inner`` of the disk."""

    outer: AnalyticFn
    inner: AnalyticFn
    kind = "compose"

    def children(self):
        return (self.outer, self.inner)

    def _taylor(self, z, order, bk, path):
        inner = self.inner._taylor(z, order, bk, path + ".inner")
        _check_inside(inner[0], path)
        outer = self.outer._taylor(inner[0], order, bk, path + ".outer")
        return jets.compose(outer, inner)

    def _values(self, z, path):
        return self.outer._values(self.inner._values(z, path + ".inner"), path + ".outer")

    def to_json(self):
        return {"type": "compose", "outer": self.outer.to_json(), "inner": self.inner.to_json()}


def _checked(jet: list, bk: Backend, path: str) -> list:
    """Raise on overflow in double precision (mpmath never overflows here)."""
    if not bk.is_mp and not all(cmath.isfinite(x) for x in jet):
        raise NumericError("value overflows double precision", path)
    return jet


def _check_inside(w, path):
    if not abs(w) < 1:
        raise DomainError(f"inner map left the open disk ({w!r})" + (f" at {path}" if path else ""))


@dataclass(frozen=True, eq=False)
class Scale(AnalyticFn):
    c: complex
    f: AnalyticFn
    kind = "scale"

    def children(self):
        return (self.f,)

    def _taylor(self, z, order, bk, path):
        c = bk.number(self.c)
        return _checked(jets.scale(self.f._taylor(z, order, bk, path + ".f"), c), bk, path)

    def _values(self, z, path):
        c = to_complex(self.c)
        if not cmath.isfinite(c):
            raise NumericError("scale factor exceeds double precision", path)
        return c * self.f._values(z, path + ".f")

    def to_json(self):
        return {"type": "scale", "c": encode_complex(self.c), "f": self.f.to_json()}


@dataclass(frozen=True, eq=False)
class Sum(AnalyticFn):
    terms: tuple
    kind = "sum"

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise DomainError("empty sum")

    def children(self):
        return self.terms

    def _taylor(self, z, order, bk, path):
        out = None
        for i, t in enumerate(self.terms):
            j = t._taylor(z, order, bk, f"{path}.sum[{i}]")
            out = j if out is None else jets.add(out, j)
        return _checked(out, bk, path)

    def _values(self, z, path):
        out = 0
        for i, t in enumerate(self.terms):
            out = out + t._values(z, f"{path}.sum[{i}]")
        return out

    def to_json(self):
        return {"type": "sum", "terms": [t.to_json() for t in self.terms]}


@dataclass(frozen=True, eq=False)
class Product(AnalyticFn):
    factors: tuple
    kind = "product"

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise DomainError("empty product")

    def children(self):
        return self.factors

    def _taylor(self, z, order, bk, path):
        out = None
        for i, t in enumerate(self.factors):
            j = t._taylor(z, order, bk, f"{path}.product[{i}]")
            out = j if out is None else jets.mul(out, j)
        return _checked(out, bk, path)

    def _values(self, z, path):
        out = 1
        for i, t in enumerate(self.factors):
            out = out * t._values(z, f"{path}.product[{i}]")
        return out

    def to_json(self):
        return {"type": "product", "factors": [t.to_json() for t in self.factors]}


@dataclass(frozen=True, eq=False)
class Quotient(AnalyticFn):
    """``num / den``; the caller guarantees ``den`` has no zeros in the disk."""

    num: AnalyticFn
    den: AnalyticFn
    kind = "quotient"

    def children(self):
        return (self.num, self.den)

    def _taylor(self, z, order, bk, path):
        d = self.den._taylor(z, order, bk, path + ".den")
        if d[0] == 0:
            raise NumericError(f"denominator vanishes at z={z!r}", path)
        return _checked(jets.div(self.num._taylor(z, order, bk, path + ".num"), d), bk, path)

    def _values(self, z, path):
        d = self.den._values(z, path + ".den")
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.num._values(z, path + ".num") / d

    def to_json(self):
        return {"type": "quotient", "num": self.num.to_json(), "den": self.den.to_json()}


# --------------------------------------------------------------------------
# evaluation entry points


def taylor_jet(f: AnalyticFn, z, order: int, dps: int | None = None, cap: int = jets.MAX_ORDER) -> list:
    """Taylor coefficients ``f^(k)(z)/k!`` for ``k <= order``."""
    if not abs(z) < 1:
        raise DomainError(f"z={z!r} is not in the open unit disk")
    order = jets.check_order(order, cap)
    bk = backend_for(dps)
    if dps is None:
        return f._taylor(complex(z), order, bk, f.kind)
    with mpmath.workdps(dps):
        return f._taylor(bk.number(z), order, bk, f.kind)


def eval_jet(f: AnalyticFn, z, order: int, dps: int | None = None, cap: int = jets.MAX_ORDER) -> list:
    """Derivative values ``(f(z), f'(z), ..., f^(order)(z))``.

    Exact up to rounding: products use the Leibniz rule, compositions the
    chain rule on truncated series, kernels their closed form. With ``dps``
    the computation runs in mpmath and returns ``mpc`` values.
    """
    c = taylor_jet(f, z, order, dps, cap)
    if dps is None:
        return jets.to_derivatives(c)
    with mpmath.workdps(dps):
        return jets.to_derivatives(c)


def evaluate(f: AnalyticFn, z) -> np.ndarray:
    """Vectorised double-precision values of ``f`` at the points ``z``."""
    z = np.asarray(z, dtype=complex)
    return np.asarray(f._values(z, f.kind), dtype=complex) * np.ones_like(z)


def walk(f: AnalyticFn):
    """Yield every node of the tree, parents first."""
    yield f
    for c in f.children():
        yield from walk(c)


# --------------------------------------------------------------------------
# JSON expression-tree schema


def encode_complex(c):
    """``[re, im]`` or ``{"log10_magnitude", "phase"}`` outside ``[1e-300, 1e300]``."""
    if isinstance(c, (mpmath.mpc, mpmath.mpf)):
        mag = abs(c)
        if c != 0 and (mag > mpmath.mpf("1e300") or mag < mpmath.mpf("1e-300")):
            lm, ph = split_log(c)
            return {"log10_magnitude": lm, "phase": ph}
        c = to_complex(c)
    c = complex(c)
    mag = abs(c)
    if mag != 0 and (mag > 1e300 or mag < 1e-300):
        lm, ph = split_log(c)
        return {"log10_magnitude": lm, "phase": ph}
    return [c.real, c.imag]


def decode_complex(v):
    if isinstance(v, dict):
        lm = float(v["log10_magnitude"])
        ph = float(v.get("phase", 0.0))
        mag = mpmath.power(10, lm)
        out = mag * mpmath.expjpi(ph / mpmath.pi)
        try:
            return complex(out) if 1e-300 <= float(mag) <= 1e300 else out
        except OverflowError:
            return out
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def from_json(d: dict) -> AnalyticFn:
    t = d["type"]
    if t == "polynomial":
        return Polynomial(tuple(decode_complex(c) for c in d["coeffs"]))
    if t == "kernel":
        return Kernel(int(d["m"]), decode_complex(d["lambda"]), SpaceParams.from_json(d["params"]))
    if t == "blaschke":
        return Blaschke(
            BlaschkeProduct(tuple((decode_complex(z["zero"]), int(z["multiplicity"])) for z in d["zeros"]))
        )
    if t == "precompose":
        mob = d["mobius"]
        return PreCompose(
            MobiusMap(decode_complex(mob["a"]), decode_complex(mob.get("rotation", [1.0, 0.0]))),
            from_json(d["outer"]),
        )
    if t == "compose":
        return Compose(from_json(d["outer"]), from_json(d["inner"]))
    if t == "scale":
        return Scale(decode_complex(d["c"]), from_json(d["f"]))
    if t == "sum":
        return Sum(tuple(from_json(x) for x in d["terms"]))
    if t == "product":
        return Product(tuple(from_json(x) for x in d["factors"]))
    if t == "quotient":
        return Quotient(from_json(d["num"]), from_json(d["den"]))
    raise ValueError(f"unknown node type {t!r}")
