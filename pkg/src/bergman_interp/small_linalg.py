"""Small dense complex matrices and the inequalities used by the interpolation proof.

Everything here is written against plain ``+ - * /`` so that it runs both on
``complex`` entries and on ``mpmath.mpc`` entries (object arrays); the
clustered interpolation matrix needs the latter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import ConvergenceError, DomainError, SingularMatrixError

PIVOT_RTOL = 1e-300


@dataclass(frozen=True)
class ComplexMatrix:
    """Square matrix with complex (or ``mpc``) entries."""

    data: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.data)
        if a.dtype != object:
            a = a.astype(complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise DomainError(f"expected a nonempty square matrix, got shape {a.shape}")
        if not all(_finite(x) for x in a.flat):
            raise DomainError("matrix entries must be finite")
        object.__setattr__(self, "data", a)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def is_mp(self) -> bool:
        return self.data.dtype == object

    @classmethod
    def identity(cls, n: int) -> "ComplexMatrix":
        return cls(np.eye(n, dtype=complex))

    def __matmul__(self, other):
        if isinstance(other, ComplexMatrix):
            return ComplexMatrix(self.data @ other.data)
        return self.data @ np.asarray(other)

    def to_complex(self) -> np.ndarray:
        return np.array([[complex(x) for x in row] for row in self.data], dtype=complex)


def _finite(x) -> bool:
    if isinstance(x, (mpmath.mpc, mpmath.mpf)):
        return mpmath.isfinite(x)
    return math.isfinite(abs(complex(x)))


def _as_matrix(A) -> ComplexMatrix:
    return A if isinstance(A, ComplexMatrix) else ComplexMatrix(np.asarray(A))


def _rows(A: ComplexMatrix) -> list:
    return [list(r) for r in A.data]


def _max_abs(rows) -> float:
    return max(float(abs(x)) for r in rows for x in r)


def _eliminate(rows, rhs=None):
    """Partial-pivot LU in place. Returns ``(rows, rhs, sign, pivots)``."""
    n = len(rows)
    sign = 1
    pivots = []
    for col in range(n):
        piv = max(range(col, n), key=lambda i: abs(rows[i][col]))
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            if rhs is not None:
                rhs[col], rhs[piv] = rhs[piv], rhs[col]
            sign = -sign
        p = rows[col][col]
        pivots.append(p)
        if p == 0:
            continue
        for i in range(col + 1, n):
            f = rows[i][col] / p
            if f == 0:
                continue
            for k in range(col, n):
                rows[i][k] = rows[i][k] - f * rows[col][k]
            if rhs is not None:
                rhs[i] = [x - f * y for x, y in zip(rhs[i], rhs[col])]
    return rows, rhs, sign, pivots


def det(A) -> complex:
    """Determinant by partial-pivot Gaussian elimination."""
    A = _as_matrix(A)
    _, _, sign, pivots = _eliminate(_rows(A))
    out = pivots[0] * 0 + sign
    for p in pivots:
        out = out * p
    return out


def solve(A, B) -> np.ndarray:
    """Solve ``A X = B`` (``B`` a vector or a matrix)."""
    A = _as_matrix(A)
    B = np.asarray(B)
    vector = B.ndim == 1
    rhs = [[x] for x in B] if vector else [list(r) for r in B]
    rows = _rows(A)
    scale = _max_abs(rows)
    rows, rhs, _, pivots = _eliminate(rows, rhs)
    for i, p in enumerate(pivots):
        if not float(abs(p)) > PIVOT_RTOL * scale:
            raise SingularMatrixError(f"pivot {i} is {float(abs(p)):.3e}, below threshold")
    n = len(rows)
    x = [None] * n
    for i in range(n - 1, -1, -1):
        acc = list(rhs[i])
        for k in range(i + 1, n):
            acc = [a - rows[i][k] * b for a, b in zip(acc, x[k])]
        x[i] = [a / rows[i][i] for a in acc]
    out = np.array(x, dtype=object if (A.is_mp or B.dtype == object) else complex)
    return out[:, 0] if vector else out


def inverse(A) -> ComplexMatrix:
    A = _as_matrix(A)
    eye = np.eye(A.n, dtype=complex)
    if A.is_mp:
        eye = np.array([[mpmath.mpc(x) for x in r] for r in eye], dtype=object)
    return ComplexMatrix(solve(A, eye))


def operator_norm(A, tol: float = 1e-12, max_iter: int = 50_000, seed: int = 0) -> float:
    """Largest singular value by power iteration on ``A^H A``.

    Starts from the normalised all-ones vector and from one seeded random
    vector; the larger converged Rayleigh quotient wins. Convergence means
    the eigen-residual ``||A^H A v - mu v||`` fell below ``tol * mu``.
    """
    A = _as_matrix(A)
    M = A.to_complex() if not A.is_mp else None
    if M is None or not np.all(np.isfinite(M)):
        # rescale mp matrices into double range; the norm is homogeneous
        big = max(abs(x) for x in A.data.flat)
        if big == 0:
            return 0.0
        M = np.array([[complex(x / big) for x in r] for r in A.data], dtype=complex)
        return float(big) * operator_norm(M, tol, max_iter, seed)
    s = np.max(np.abs(M))
    if s == 0:
        return 0.0
    M = M / s
    G = M.conj().T @ M
    n = M.shape[0]
    rng = np.random.default_rng(seed)
    starts = [np.ones(n, dtype=complex), rng.standard_normal(n) + 1j * rng.standard_normal(n)]
    best = None
    last_res = None
    for v in starts:
        v = v / np.linalg.norm(v)
        mu = 0.0
        for _ in range(max_iter):
            w = G @ v
            mu = float(np.real(np.vdot(v, w)))
            res = np.linalg.norm(w - mu * v)
            last_res = res
            nw = np.linalg.norm(w)
            if nw == 0:
                mu = 0.0
                break
            if res <= tol * max(mu, 1e-300):
                break
            v = w / nw
        else:
            continue
        best = mu if best is None else max(best, mu)
    if best is None:
        raise ConvergenceError("power iteration did not converge", residual=last_res)
    return float(s * math.sqrt(max(best, 0.0)))


def l1_entry_norm(A) -> float:
    """``sum |a_jk|``, a cheap upper bound for the operator norm."""
    A = _as_matrix(A)
    return float(sum(abs(x) for x in A.data.flat))


def inverse_norm_bound_check(A, D: float):
    """Compare ``||A^-1||`` with ``||A||^(n-1) / D`` for ``|det A| >= D``.

    Returns ``(lhs, rhs, holds)``.
    """
    A = _as_matrix(A)
    if not D > 0:
        raise DomainError("D must be positive")
    d = abs(det(A))
    if d < D:
        raise DomainError(f"precondition |det A| >= D fails: |det A| = {float(d):.6g} < D = {D:.6g}")
    lhs = operator_norm(inverse(A))
    rhs = operator_norm(A) ** (A.n - 1) / D
    return lhs, rhs, bool(lhs <= rhs * (1 + 1e-10))


def random_orthonormal_basis(x, rng: np.random.Generator) -> np.ndarray:
    """Columns form an orthonormal basis whose first column is the unit vector ``x``."""
    x = np.asarray(x, dtype=complex)
    x = x / np.linalg.norm(x)
    n = len(x)
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Z[:, 0] = x
    Q, R = np.linalg.qr(Z)
    # undo the phase QR puts on the first column
    Q[:, 0] *= R[0, 0] / abs(R[0, 0])
    return Q


def hadamard_check(A, x=None, rng: np.random.Generator | None = None):
    """Hadamard's inequality ``|det A| <= prod_k ||A q_k||``.

    Uses the standard basis and, when ``x`` is given, a random orthonormal
    basis containing ``x``. Returns ``(|det|, product, holds)``; ``product``
    is the standard-basis column-norm product.
    """
    A = _as_matrix(A)
    M = A.to_complex()
    d = float(abs(det(A)))
    prod = float(np.prod(np.linalg.norm(M, axis=0)))
    holds = d <= prod * (1 + 1e-10)
    if x is not None:
        Q = random_orthonormal_basis(x, rng or np.random.default_rng(0))
        prod_q = float(np.prod(np.linalg.norm(M @ Q, axis=0)))
        holds = holds and d <= prod_q * (1 + 1e-10)
    return d, prod, bool(holds)


def gershgorin_dominance(A):
    """Row margins ``|a_jj| - 1 - sum_{k != j} |a_jk|``.

    Positive margins put every Gershgorin disc outside the closed unit disk,
    so all eigenvalues exceed 1 in modulus and ``|det A| > 1``. Returns
    ``(margins, all_dominant, det_lower_bound_ok)`` where the last flag
    reports whether that implication was confirmed (vacuously true when
    some margin is not positive).
    """
    A = _as_matrix(A)
    margins = []
    for j, row in enumerate(A.data):
        off = sum(float(abs(x)) for k, x in enumerate(row) if k != j)
        margins.append(float(abs(row[j])) - 1.0 - off)
    dominant = all(m > 0 for m in margins)
    ok = True
    if dominant:
        ok = bool(abs(det(A)) >= 1)
    return margins, dominant, ok
