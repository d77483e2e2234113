"""Truncated power series ("jets") at a point.

A jet of order ``n`` is the list ``[c_0, ..., c_n]`` of Taylor coefficients
``c_k = f^(k)(z) / k!``. Keeping normalised coefficients (rather than raw
derivatives) makes products and compositions plain Cauchy arithmetic. The
entries may be Python ``complex`` or ``mpmath.mpc``; every routine here only
uses ``+``, ``-``, ``*`` and ``/`` so both work.
"""

from __future__ import annotations

import math
from typing import Sequence

MAX_ORDER = 16


def check_order(order: int, cap: int = MAX_ORDER) -> int:
    order = int(order)
    if order < 0:
        raise ValueError(f"jet order must be nonnegative, got {order}")
    if order > cap:
        raise ValueError(f"jet order {order} exceeds the configured cap {cap}")
    return order


def constant(value, order: int) -> list:
    zero = value * 0
    return [value] + [zero] * order


def variable(z, order: int) -> list:
    """Jet of the identity map at ``z``."""
    zero = z * 0
    out = [z] + [zero] * order
    if order >= 1:
        out[1] = zero + 1
    return out


def add(a: Sequence, b: Sequence) -> list:
    return [x + y for x, y in zip(a, b)]


def scale(a: Sequence, c) -> list:
    return [c * x for x in a]


def mul(a: Sequence, b: Sequence) -> list:
    n = len(a)
    out = []
    for k in range(n):
        acc = a[0] * b[k]
        for i in range(1, k + 1):
            acc = acc + a[i] * b[k - i]
        out.append(acc)
    return out


def reciprocal(a: Sequence) -> list:
    """Jet of ``1/f`` from the jet of ``f``; requires ``a[0] != 0``."""
    if a[0] == 0:
        raise ZeroDivisionError("reciprocal of a jet with zero constant term")
    n = len(a)
    out = [1 / a[0]]
    for k in range(1, n):
        acc = a[1] * out[k - 1]
        for i in range(2, k + 1):
            acc = acc + a[i] * out[k - i]
        out.append(-acc / a[0])
    return out


def div(a: Sequence, b: Sequence) -> list:
    return mul(a, reciprocal(b))


def power(a: Sequence, n: int) -> list:
    if n < 0:
        return power(reciprocal(a), -n)
    result = constant(a[0] * 0 + 1, len(a) - 1)
    base = list(a)
    while n:
        if n & 1:
            result = mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def compose(outer: Sequence, inner: Sequence) -> list:
    """Jet of ``F o g`` at ``z``.

    ``outer`` holds the Taylor coefficients of ``F`` at ``g(z)`` and
    ``inner`` those of ``g`` at ``z``. Horner's scheme on the shifted series
    ``g - g(z)``, which has no constant term.
    """
    n = len(inner)
    h = [inner[0] * 0] + list(inner[1:])
    result = constant(outer[-1], n - 1)
    for k in range(len(outer) - 2, -1, -1):
        result = mul(result, h)
        result[0] = result[0] + outer[k]
    return result


def to_derivatives(c: Sequence) -> list:
    """Taylor coefficients -> derivative values ``f^(k)(z)``."""
    return [x * math.factorial(k) for k, x in enumerate(c)]


def from_derivatives(d: Sequence) -> list:
    return [x / math.factorial(k) for k, x in enumerate(d)]


def real_power(a: Sequence, e, log=None, exp=None) -> list:
    """Jet of ``f**e`` for real or complex ``e`` on the principal branch.

    Uses the J.C.P. Miller recurrence ``k a_0 b_k = sum_i (e i - k + i) a_i b_(k-i)``,
    so it never forms ``log f`` beyond the constant term. ``log``/``exp`` give
    the backend used for ``a_0**e``; the default is Python's ``**``.
    """
    if a[0] == 0:
        raise ZeroDivisionError("real power of a jet with zero constant term")
    n = len(a)
    if log is not None and exp is not None:
        b0 = exp(e * log(a[0]))
    else:
        b0 = a[0] ** e
    out = [b0]
    for k in range(1, n):
        acc = a[0] * 0
        for i in range(1, k + 1):
            acc = acc + (e * i - (k - i)) * a[i] * out[k - i]
        out.append(acc / (k * a[0]))
    return out
