"""Seeded property battery behind ``bergman-interp verify``.

Each property runs a number of random trials and records failures (with
the falsifying input), precondition errors (inputs outside the property's
hypotheses, which are not failures) and the extremal observed ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import small_linalg as la
from ..bergman_space.functions import Blaschke, Kernel, Polynomial, Product, Sum, eval_jet
from ..bergman_space.kernels import kernel_derivative
from ..bergman_space.norms import kernel_norm_log, kernel_norm_sup_log
from ..bergman_space.params import SpaceParams
from ..bergman_space.quadrature import disk_integral
from ..disk_geometry import BlaschkeProduct
from ..errors import DomainError

PARAMS = (SpaceParams(1, 0), SpaceParams(2, 0), SpaceParams(4, 1.5), SpaceParams(2, -1), SpaceParams(0.5, 0))


@dataclass
class PropertyReport:
    name: str
    trials: int = 0
    failures: list = field(default_factory=list)
    precondition_errors: int = 0
    extremal_ratio: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "property": self.name,
            "trials": self.trials,
            "failures": len(self.failures),
            "precondition_errors": self.precondition_errors,
            "extremal_ratio": self.extremal_ratio,
            "passed": self.passed,
            "falsifying_inputs": self.failures[:5],
        }


def _cmat(rng, n, scale=1.0):
    return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


def _enc(A) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(A)]


def _pt(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def inverse_norm_lemma(rng, trials: int, D_factor: float = 1.0) -> PropertyReport:
    """``||A^-1|| <= ||A||^(n-1) / D`` whenever ``|det A| >= D``; ratio lhs/rhs."""
    rep = PropertyReport("inverse_norm_bound")
    for _ in range(trials):
        n = int(rng.integers(1, 9))
        A = _cmat(rng, n)
        D = float(abs(la.det(A))) * D_factor
        rep.trials += 1
        try:
            lhs, rhs, holds = la.inverse_norm_bound_check(A, D)
        except DomainError:
            rep.precondition_errors += 1
            continue
        rep.extremal_ratio = max(rep.extremal_ratio, float(lhs / rhs))
        if not holds:
            rep.failures.append({"A": _enc(A), "D": D})
    return rep


def hadamard(rng, trials: int) -> PropertyReport:
    """``|det A| <= prod_j ||A e_j||`` in every orthonormal basis; ratio |det|/product."""
    rep = PropertyReport("hadamard")
    for _ in range(trials):
        n = int(rng.integers(1, 9))
        A = _cmat(rng, n)
        d, prod, holds = la.hadamard_check(A, rng=rng)
        rep.trials += 1
        rep.extremal_ratio = max(rep.extremal_ratio, d / prod)
        if not holds:
            rep.failures.append({"A": _enc(A)})
    return rep


def gershgorin(rng, trials: int) -> PropertyReport:
    """Row margins above 1 imply ``|det A| >= 1``; ratio 1/|det|."""
    rep = PropertyReport("gershgorin_det_bound")
    for _ in range(trials):
        n = int(rng.integers(1, 9))
        A = _cmat(rng, n, 1.0 / n)
        np.fill_diagonal(A, 0)
        radii = np.abs(A).sum(axis=1)
        phase = np.exp(2j * np.pi * rng.uniform(size=n))
        A[np.diag_indices(n)] = (1 + radii + rng.exponential(0.05, n)) * phase
        margins, dominant, ok = la.gershgorin_dominance(A)
        rep.trials += 1
        if not dominant:
            rep.precondition_errors += 1
            continue
        rep.extremal_ratio = max(rep.extremal_ratio, float(1.0 / abs(la.det(A))))
        if not ok:
            rep.failures.append({"A": _enc(A)})
    return rep


def kernel_norm_uniformity(rng, trials: int) -> PropertyReport:
    """Closed-form ``||K_{m,lam}||`` never exceeds its ``lam``-free bound; ratio norm/bound."""
    rep = PropertyReport("kernel_norm_uniformity")
    for _ in range(trials):
        params = PARAMS[int(rng.integers(len(PARAMS)))]
        m = int(rng.integers(0, 11))
        r = 1 - 10 ** rng.uniform(-6, 0)
        log_n, _ = kernel_norm_log(m, r, params)
        log_b = kernel_norm_sup_log(m, params)
        rep.trials += 1
        ratio = math.exp(log_n - log_b)
        rep.extremal_ratio = max(rep.extremal_ratio, ratio)
        if ratio > 1 + 1e-9:
            rep.failures.append({"m": m, "abs_lambda": r, "params": params.to_json()})
    return rep


def reproducing_property(rng, trials: int, tol: float) -> PropertyReport:
    """``f(z) = int f(w) (1 - z conj(w))^-(2+alpha) dA_alpha(w)``; ratio error/tol."""
    rep = PropertyReport("reproducing_kernel")
    for _ in range(trials):
        alpha = float(rng.choice([0.0, 1.0, 1.5]))
        c = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        f = Polynomial(tuple(c))
        z = 0.8 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())

        def F(w):
            return f(w) * (1 - z * np.conj(w)) ** (-(2 + alpha))

        val = disk_integral(lambda w: F(w).real, alpha, 48, 96) + 1j * disk_integral(lambda w: F(w).imag, alpha, 48, 96)
        err = abs(val - f(z)) / max(abs(f(z)), 1.0)
        rep.trials += 1
        rep.extremal_ratio = max(rep.extremal_ratio, err / tol)
        if err > tol:
            rep.failures.append({"coeffs": [_pt(x) for x in c], "z": _pt(z), "alpha": alpha})
    return rep


def jet_vs_finite_difference(rng, trials: int, tol: float) -> PropertyReport:
    """First jet entry against a 4-point central difference; ratio error/tol."""
    rep = PropertyReport("jet_vs_finite_difference")
    for _ in range(trials):
        params = PARAMS[int(rng.integers(len(PARAMS)))]
        lam = 0.7 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        a = 0.5 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        f = Sum((Kernel(int(rng.integers(0, 4)), lam, params),
                 Product((Polynomial((1.0, 0.5, -0.25)), Blaschke(BlaschkeProduct(((a, 2),)))))))
        z = 0.5 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        d = eval_jet(f, z, 1)[1]
        h = 1e-3
        fd = (-f(z + 2 * h) + 8 * f(z + h) - 8 * f(z - h) + f(z - 2 * h)) / (12 * h)
        err = abs(fd - d) / max(abs(d), 1.0)
        rep.trials += 1
        rep.extremal_ratio = max(rep.extremal_ratio, err / tol)
        if err > tol:
            rep.failures.append({"lambda": _pt(lam), "a": _pt(a), "z": _pt(z)})
    return rep


def kernel_derivative_vs_jets(rng, trials: int) -> PropertyReport:
    """Closed-form kernel derivatives against jet propagation; ratio relative error / 1e-10."""
    rep = PropertyReport("kernel_derivative_vs_jets")
    for _ in range(trials):
        params = PARAMS[int(rng.integers(len(PARAMS)))]
        m, k = int(rng.integers(0, 11)), int(rng.integers(0, 5))
        lam = 0.95 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        z = 0.95 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        a = kernel_derivative(m, lam, k, z, params)
        b = eval_jet(Kernel(m, lam, params), z, k)[k]
        err = abs(a - b) / max(abs(b), 1e-300)
        rep.trials += 1
        rep.extremal_ratio = max(rep.extremal_ratio, err / 1e-10)
        if err > 1e-10:
            rep.failures.append({"m": m, "k": k, "lambda": _pt(lam), "z": _pt(z)})
    return rep


def run_battery(seed: int, matrix_trials: int = 1000, analytic_trials: int = 100,
                tol: float = 1e-8, D_factor: float = 1.0) -> list[PropertyReport]:
    rng = np.random.default_rng(seed)
    return [
        inverse_norm_lemma(rng, matrix_trials, D_factor),
        hadamard(rng, matrix_trials),
        gershgorin(rng, matrix_trials),
        kernel_norm_uniformity(rng, analytic_trials),
        reproducing_property(rng, analytic_trials, tol),
        jet_vs_finite_difference(rng, analytic_trials, max(tol, 1e-8)),
        kernel_derivative_vs_jets(rng, analytic_trials),
    ]
