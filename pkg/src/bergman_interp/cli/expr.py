"""A small expression grammar for symbols, parsed with :mod:`ast`.

Accepted: complex literals (``2``, ``0.5``, ``1j``, ``i``), the variable
``z``, ``+ - * /``, integer powers ``**`` or ``^``, and the constructors

* ``kernel(m, lam)``: modified kernel for the source space,
* ``blaschke(a1, a2, ...)``: finite Blaschke product with the given zeros
  (repeat a zero for multiplicity),
* ``mobius(a)``: the involution ``(a - z) / (1 - conj(a) z)``.

Polynomials are kept in coefficient form; everything else becomes an
expression tree. Nothing is ever executed.
"""

from __future__ import annotations

import ast
from collections import Counter

import numpy as np

from ..bergman_space.functions import AnalyticFn, Blaschke, Kernel, Polynomial, PreCompose, Product, Quotient, Scale, Sum
from ..bergman_space.params import SpaceParams
from ..disk_geometry import BlaschkeProduct, MobiusMap
from ..errors import ConfigError

MAX_POWER = 64
CONSTANTS = {"i": 1j, "j": 1j, "I": 1j}


def parse_symbol(text: str, params: SpaceParams | None = None) -> AnalyticFn:
    """Parse ``text`` into an :class:`AnalyticFn`."""
    if not isinstance(text, str):
        text = str(text)
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse expression {text!r}: {exc.msg}") from None
    out = _Builder(params or SpaceParams()).visit(tree.body)
    return out if isinstance(out, AnalyticFn) else Polynomial((out,))


class _Builder:
    def __init__(self, params: SpaceParams):
        self.params = params

    def visit(self, node):
        method = getattr(self, "visit_" + type(node).__name__, None)
        if method is None:
            raise ConfigError(f"unsupported syntax {type(node).__name__!r}")
        return method(node)

    def visit_Constant(self, node):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float, complex)):
            raise ConfigError(f"unsupported literal {node.value!r}")
        return complex(node.value)

    def visit_Name(self, node):
        if node.id == "z":
            return Polynomial((0.0, 1.0))
        if node.id in CONSTANTS:
            return CONSTANTS[node.id]
        raise ConfigError(f"unknown name {node.id!r}")

    def visit_UnaryOp(self, node):
        v = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return _scale(-1.0, v)
        if isinstance(node.op, ast.UAdd):
            return v
        raise ConfigError("unsupported unary operator")

    def visit_BinOp(self, node):
        a, b = self.visit(node.left), self.visit(node.right)
        op = node.op
        if isinstance(op, ast.Add):
            return _add(a, b)
        if isinstance(op, ast.Sub):
            return _add(a, _scale(-1.0, b))
        if isinstance(op, ast.Mult):
            return _mul(a, b)
        if isinstance(op, ast.Div):
            if isinstance(b, complex):
                if b == 0:
                    raise ConfigError("division by zero")
                return _scale(1.0 / b, a)
            return Quotient(_lift(a), b)
        if isinstance(op, ast.Pow):
            if not isinstance(b, complex) or b.imag != 0 or b.real != int(b.real) or not 0 <= b.real <= MAX_POWER:
                raise ConfigError(f"exponents must be integers in [0, {MAX_POWER}]")
            n = int(b.real)
            out = complex(1.0)
            for _ in range(n):
                out = _mul(out, a)
            return out
        raise ConfigError(f"unsupported operator {type(op).__name__!r}")

    def visit_Call(self, node):
        if not isinstance(node.func, ast.Name) or node.keywords:
            raise ConfigError("only positional calls to kernel, blaschke, mobius are allowed")
        args = [self.visit(a) for a in node.args]
        if not all(isinstance(a, complex) for a in args):
            raise ConfigError(f"arguments of {node.func.id} must be constants")
        name = node.func.id
        for a in args[1:] if name == "kernel" else args:
            if not abs(a) < 1:
                raise ConfigError(f"{name}: point {a!r} is not in the open unit disk")
        if name == "kernel":
            if len(args) != 2 or args[0].imag != 0 or args[0].real != int(args[0].real) or args[0].real < 0:
                raise ConfigError("kernel(m, lam) needs a nonnegative integer m and a point lam")
            return Kernel(int(args[0].real), args[1], self.params)
        if name == "blaschke":
            if not args:
                raise ConfigError("blaschke() needs at least one zero")
            zeros = Counter(args)
            return Blaschke(BlaschkeProduct(tuple(zeros.items())))
        if name == "mobius":
            if len(args) != 1:
                raise ConfigError("mobius(a) takes one point")
            return PreCompose(MobiusMap(args[0]), Polynomial((0.0, 1.0)))
        raise ConfigError(f"unknown function {name!r}")


def _lift(x):
    return Polynomial((x,)) if isinstance(x, complex) else x


def _scale(c, f):
    if isinstance(f, complex):
        return c * f
    if isinstance(f, Polynomial):
        return Polynomial(tuple(c * a for a in f.coeffs))
    return Scale(c, f)


def _add(a, b):
    if isinstance(a, complex) and isinstance(b, complex):
        return a + b
    a, b = _lift(a), _lift(b)
    if isinstance(a, Polynomial) and isinstance(b, Polynomial):
        n = max(len(a.coeffs), len(b.coeffs))
        ca = list(a.coeffs) + [0.0] * (n - len(a.coeffs))
        cb = list(b.coeffs) + [0.0] * (n - len(b.coeffs))
        return Polynomial(tuple(complex(x) + complex(y) for x, y in zip(ca, cb)))
    return Sum((a, b))


def _mul(a, b):
    if isinstance(a, complex):
        return _scale(a, b)
    if isinstance(b, complex):
        return _scale(b, a)
    if isinstance(a, Polynomial) and isinstance(b, Polynomial):
        ca = np.asarray([complex(x) for x in a.coeffs])
        cb = np.asarray([complex(x) for x in b.coeffs])
        return Polynomial(tuple(complex(x) for x in np.convolve(ca, cb)))
    return Product((a, b))


def format_polynomial(f: Polynomial, digits: int = 12) -> str:
    """Readable form such as ``1``, ``z``, ``0.5 - 2*z^3``."""
    parts = []
    for k, c in enumerate(f.coeffs):
        c = complex(c)
        if c == 0:
            continue
        if c.imag == 0:
            num = f"{c.real:.{digits}g}"
        else:
            num = f"({c.real:.{digits}g}{c.imag:+.{digits}g}j)"
        mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
        if k and num == "1":
            term = mono
        elif k and num == "-1":
            term = "-" + mono
        else:
            term = num + ("*" + mono if mono else "")
        parts.append(term)
    if not parts:
        return "0"
    out = parts[0]
    for t in parts[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out
