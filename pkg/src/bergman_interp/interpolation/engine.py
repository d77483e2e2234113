"""Interpolation with prescribed derivative data and controlled norm.

Given points ``lam_0..lam_N`` of the disk, an index ``J`` and ``(p, alpha)``,
build ``f`` with ``f^(J)(lam_J) = (1-|lam_J|^2)^-(s+J)``, ``s = (2+alpha)/p``,
and ``f^(k)(lam_k) = 0`` for ``k != J``. Three regimes:

* central: ``|lam_J| <= R``, a polynomial of degree ``N``;
* clustered: every point within ``eps`` of ``lam_J``, a combination of
  modified kernels whose coefficient system is diagonally dominant;
* general: solve a clustered problem where far points are moved onto
  ``lam_J``, then multiply by an annihilator of the far points.

Linear algebra and jet checks run in mpmath (``dps`` digits): the clustered
systems involve powers like ``(1-|lam|^2)^(m+1)`` with ``m`` up to ~1e11.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .. import small_linalg as la
from ..bergman_space.functions import AnalyticFn, Kernel, Polynomial, Product, Scale, Sum, encode_complex, eval_jet
from ..bergman_space.norms import NormResult, kernel_norm_log, norm
from ..bergman_space.params import QuadratureConfig, SpaceParams
from ..errors import DomainError, DominanceError, NumericError
from ..numeric import log_abs
from .annihilator import Annihilator, build_annihilator
from .calibration import Calibration, calibrate
from .msequence import GREEDY, MSequence, build_m_sequence

DEFAULT_DPS = 50
CONTRACT_TOL = 1e-8
# kernels with larger indices are not worth a quadrature attempt
QUADRATURE_MAX_INDEX = 60

CENTRAL = "central"
CLUSTERED = "clustered"
GENERAL = "general"


@dataclass(frozen=True)
class InterpolationProblem:
    points: tuple
    J: int
    params: SpaceParams = SpaceParams()

    def __post_init__(self):
        pts = tuple(complex(z) for z in self.points)
        if not pts:
            raise DomainError("at least one point is required")
        for z in pts:
            if not abs(z) < 1:
                raise DomainError(f"point {z!r} is not in the open unit disk")
        if int(self.J) != self.J or not 0 <= self.J < len(pts):
            raise DomainError(f"J must lie in [0, {len(pts) - 1}], got {self.J!r}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "J", int(self.J))

    @property
    def N(self) -> int:
        return len(self.points) - 1

    def target(self, dps: int = DEFAULT_DPS):
        """``(1-|lam_J|^2)^-(s+J)`` as an mpmath number."""
        lam = self.points[self.J]
        with mpmath.workdps(dps):
            return mpmath.exp(-(mpmath.mpf(self.params.s) + self.J) * mpmath.log1p(-mpmath.mpf(abs(lam)) ** 2))

    def to_json(self) -> dict:
        return {
            "points": [[z.real, z.imag] for z in self.points],
            "J": self.J,
            "params": self.params.to_json(),
        }


@dataclass
class InterpolationResult:
    problem: InterpolationProblem
    f: AnalyticFn
    case: str
    m_seq: MSequence | None = None
    calibration: Calibration | None = None
    coefficients: list = field(default_factory=list)
    matrix: dict = field(default_factory=dict)
    jets: list = field(default_factory=list)
    contract: dict = field(default_factory=dict)
    norm: NormResult | None = None
    extra: dict = field(default_factory=dict)
    # general case only: the clustered factor and the annihilator
    g: "InterpolationResult | None" = None
    h: Annihilator | None = None

    @property
    def ok(self) -> bool:
        return bool(self.contract.get("ok", False))

    def to_json(self) -> dict:
        out = {
            "problem": self.problem.to_json(),
            "case": self.case,
            "contract": self.contract,
            "jets": [{"k": k, "point": [z.real, z.imag], "value": encode_complex(v)} for k, z, v in self.jets],
            "coefficients": [_log_pair(b) for b in self.coefficients],
            "matrix": self.matrix,
            "norm": None if self.norm is None else self.norm.to_json(),
            "function": self.f.to_json(),
        }
        if self.m_seq is not None:
            out["m_sequence"] = self.m_seq.to_json()
        if self.calibration is not None:
            out["calibration"] = self.calibration.to_json()
        if self.extra:
            out["extra"] = self.extra
        return out


def _log_pair(x) -> dict:
    with mpmath.workdps(30):
        if x == 0:
            return {"log10_magnitude": None, "phase": 0.0}
        return {"log10_magnitude": float(mpmath.log10(abs(x))), "phase": float(mpmath.arg(x))}


# --------------------------------------------------------------------------
# central case


def derivative_vandermonde(points, dps: int = DEFAULT_DPS) -> la.ComplexMatrix:
    """Row ``n`` holds the ``n``-th derivatives of ``1, z, ..., z^N`` at ``points[n]``."""
    N = len(points) - 1
    with mpmath.workdps(dps):
        rows = []
        for n, lam in enumerate(points):
            lam = mpmath.mpc(lam)
            row = []
            for i in range(N + 1):
                if i < n:
                    row.append(mpmath.mpc(0))
                else:
                    row.append(mpmath.mpf(math.factorial(i) // math.factorial(i - n)) * lam ** (i - n))
            rows.append(row)
    return la.ComplexMatrix(np.array(rows, dtype=object))


def interpolate_central(problem: InterpolationProblem, dps: int = DEFAULT_DPS) -> InterpolationResult:
    """Polynomial of degree ``N`` with ``p^(n)(lam_n) = w_n``."""
    N, J = problem.N, problem.J
    A = derivative_vandermonde(problem.points, dps)
    with mpmath.workdps(dps):
        rhs = np.array([mpmath.mpc(0)] * (N + 1), dtype=object)
        rhs[J] = mpmath.mpc(problem.target(dps))
        a = la.solve(A, rhs)
    f = Polynomial(tuple(a))
    D = float(np.prod([math.factorial(n) for n in range(N + 1)]))
    lhs, rhs_bound, holds = la.inverse_norm_bound_check(A, D * (1 - 1e-12))
    matrix = {
        "det": D,
        "operator_norm": la.operator_norm(A),
        "l1_entry_norm": la.l1_entry_norm(A),
        "inverse_norm": lhs,
        "inverse_norm_bound": rhs_bound,
        "inverse_bound_holds": holds,
    }
    res = InterpolationResult(problem, f, CENTRAL, coefficients=list(a), matrix=matrix)
    _finish(res, dps)
    return res


# --------------------------------------------------------------------------
# clustered case


def clustered_matrix(points, m_seq: MSequence, dps: int = DEFAULT_DPS) -> la.ComplexMatrix:
    """``a_jk = (mt_k)_j mt_k^(1/2-k) conj(lam_k)^j q_jk^(m_k+1) r_jk^(s+j)`` with
    ``q_jk = (1-|lam_k|^2)/(1-conj(lam_k) lam_j)`` and
    ``r_jk = (1-|lam_j|^2)/(1-conj(lam_k) lam_j)``, both via ``log1p``.
    """
    N = len(points) - 1
    s = m_seq.params.s
    with mpmath.workdps(dps):
        lams = [mpmath.mpc(z) for z in points]
        mts = [mpmath.mpf(m) + 1 + s for m in m_seq.m]
        rows = []
        for j in range(N + 1):
            lj = lams[j]
            row = []
            for k in range(N + 1):
                lk = lams[k]
                lkc = mpmath.conj(lk)
                if j > 0 and lk == 0:
                    row.append(mpmath.mpc(0))
                    continue
                d = 1 - lkc * lj
                log_q = mpmath.log1p(lkc * (lj - lk) / d)
                log_r = mpmath.log1p(lj * (lkc - mpmath.conj(lj)) / d)
                log_a = (
                    mpmath.fsum(mpmath.log(mts[k] + i) for i in range(j))
                    + (mpmath.mpf(1) / 2 - k) * mpmath.log(mts[k])
                    + (m_seq.m[k] + 1) * log_q
                    + (s + j) * log_r
                )
                if j > 0:
                    log_a += j * mpmath.log(lkc)
                row.append(mpmath.exp(log_a))
            rows.append(row)
    return la.ComplexMatrix(np.array(rows, dtype=object))


def interpolate_clustered(
    problem: InterpolationProblem,
    m_seq: MSequence,
    calibration: Calibration,
    dps: int = DEFAULT_DPS,
    check_preconditions: bool = True,
) -> InterpolationResult:
    """Kernel combination ``f = sum_k b_k mt_k^(1/2-k) K_{m_k, lam_k}`` with ``A b = e_J``."""
    N, J = problem.N, problem.J
    if m_seq.N != N:
        raise DomainError("index sequence length does not match the problem")
    if check_preconditions:
        lamJ = problem.points[J]
        if not abs(lamJ) > calibration.R:
            raise DomainError(f"|lam_J| = {abs(lamJ):.6g} is not beyond R = {calibration.R:.6g}")
        far = [k for k, z in enumerate(problem.points) if not rho_mp(lamJ, z) <= calibration.eps]
        if far:
            raise DomainError(f"points {far} are farther than eps from lam_J")
    A = clustered_matrix(problem.points, m_seq, dps)
    margins, dominant, det_ok = la.gershgorin_dominance(A)
    if not dominant:
        row = next(i for i, m in enumerate(margins) if not m > 0)
        raise DominanceError(f"row {row} of the kernel system is not dominant", row, margins)
    with mpmath.workdps(dps):
        e = np.array([mpmath.mpc(1 if k == J else 0) for k in range(N + 1)], dtype=object)
        b = la.solve(A, e)
        mts = m_seq.shifted
        scales = [b[k] * mpmath.power(mts[k], mpmath.mpf(1) / 2 - k) for k in range(N + 1)]
        det = la.det(A)
    terms = tuple(Scale(scales[k], Kernel(m_seq.m[k], problem.points[k], problem.params)) for k in range(N + 1))
    f = terms[0] if N == 0 else Sum(terms)
    op = la.operator_norm(A)
    inv = la.operator_norm(la.inverse(A))
    with mpmath.workdps(dps):
        b_norm = float(mpmath.sqrt(mpmath.fsum(abs(x) ** 2 for x in b)))
        log_det = float(mpmath.log(abs(det)))
    matrix = {
        "margins": margins,
        "dominant": dominant,
        "det_at_least_one": det_ok,
        "log_abs_det": log_det,
        "operator_norm": op,
        "inverse_norm": inv,
        "inverse_norm_bound": op**N / math.exp(log_det) if log_det < 700 else 0.0,
        "coefficient_norm": b_norm,
    }
    matrix["coefficients_bounded"] = bool(b_norm <= inv * (1 + 1e-10) and inv <= matrix["inverse_norm_bound"] * (1 + 1e-10))
    res = InterpolationResult(
        problem, f, CLUSTERED, m_seq=m_seq, calibration=calibration, coefficients=list(b), matrix=matrix
    )
    res.extra["kernel_scales"] = [_log_pair(c) for c in scales]
    _finish(res, dps)
    return res


def rho_mp(z, w, dps: int = 40):
    """Pseudo-hyperbolic distance in extended precision (points are taken as exact)."""
    with mpmath.workdps(dps):
        z, w = mpmath.mpc(z), mpmath.mpc(w)
        if z == w:
            return 0.0
        return float(abs(z - w) / abs(1 - mpmath.conj(z) * w))


# --------------------------------------------------------------------------
# dispatch


@dataclass
class Setup:
    m_seq: MSequence
    calibration: Calibration


def setup(N: int, params: SpaceParams, strategy: str = GREEDY) -> Setup:
    m_seq = build_m_sequence(N, params, strategy)
    return Setup(m_seq, calibrate(N, params, m_seq))


def pigeonhole(problem: InterpolationProblem, eps: float) -> tuple[int, list[float]]:
    """Smallest ``L`` in ``[1, N+1]`` whose shell ``(L eps', (L+1) eps']`` holds no point."""
    N, J = problem.N, problem.J
    lamJ = problem.points[J]
    rhos = [rho_mp(lamJ, z) for z in problem.points]
    e1 = eps / (N + 1)
    for L in range(1, N + 2):
        if not any(L * e1 < r <= (L + 1) * e1 for k, r in enumerate(rhos) if k != J):
            return L, rhos
    raise AssertionError("pigeonhole failed; more shells than points")


def interpolate(
    problem: InterpolationProblem,
    strategy: str = GREEDY,
    dps: int = DEFAULT_DPS,
    prepared: Setup | None = None,
    estimate_norm: bool = True,
    cfg: QuadratureConfig | None = None,
) -> InterpolationResult:
    """Solve ``problem`` in whichever regime applies."""
    N, J = problem.N, problem.J
    prep = prepared or setup(N, problem.params, strategy)
    cal = prep.calibration
    lamJ = problem.points[J]
    if abs(lamJ) <= cal.R:
        res = interpolate_central(problem, dps)
        res.m_seq, res.calibration = prep.m_seq, cal
    else:
        rhos = [rho_mp(lamJ, z) for z in problem.points]
        if all(r <= cal.eps for r in rhos):
            res = interpolate_clustered(problem, prep.m_seq, cal, dps, check_preconditions=False)
        else:
            res = _general(problem, prep, dps)
    if estimate_norm:
        res.norm = estimate_result_norm(res, cfg)
    return res


def _general(problem: InterpolationProblem, prep: Setup, dps: int) -> InterpolationResult:
    N, J = problem.N, problem.J
    cal = prep.calibration
    lamJ = problem.points[J]
    L, rhos = pigeonhole(problem, cal.eps)
    e1 = cal.eps / (N + 1)
    near = [k for k in range(N + 1) if rhos[k] <= L * e1]
    far = [k for k in range(N + 1) if rhos[k] > (L + 1) * e1]
    assert len(near) + len(far) == N + 1, "the selected shell is not empty"
    z = tuple(problem.points[k] if k in near else lamJ for k in range(N + 1))
    sub = InterpolationProblem(z, J, problem.params)
    g = interpolate_clustered(sub, prep.m_seq, cal, dps, check_preconditions=False)
    cluster = [lamJ] + [problem.points[k] for k in near if k != J]
    ann = build_annihilator(cluster, [problem.points[k] for k in far], N, (L + 1) / L, L * e1, dps)
    f = Product((g.f, ann.fn))
    res = InterpolationResult(
        problem, f, GENERAL, m_seq=prep.m_seq, calibration=cal, coefficients=g.coefficients, matrix=g.matrix
    )
    res.extra = {
        "L": L,
        "eps_prime": e1,
        "near": near,
        "far": far,
        "shell_empty": not any(L * e1 < r <= (L + 1) * e1 for r in rhos),
        "annihilator": ann.diagnostics,
        "annihilator_sup_bound": ann.sup_bound,
        "g_contract": g.contract,
    }
    res.g, res.h = g, ann
    _finish(res, max(dps, ann.diagnostics["dps"]))
    return res


# --------------------------------------------------------------------------
# verification and norms


def _finish(res: InterpolationResult, dps: int) -> None:
    """Record achieved jets and the contract errors."""
    prob = res.problem
    with mpmath.workdps(dps):
        target = prob.target(dps)
        jets = []
        worst_off = mpmath.mpf(0)
        rel_err = None
        for k, lam in enumerate(prob.points):
            v = eval_jet(res.f, lam, k, dps=dps)[k]
            jets.append((k, lam, v))
            if k == prob.J:
                rel_err = abs(v - target) / abs(target)
            else:
                worst_off = max(worst_off, abs(v) / abs(target))
        res.jets = jets
        res.contract = {
            "target": _log_pair(target),
            "relative_error": float(rel_err),
            "max_off_target_ratio": float(worst_off),
            "tolerance": CONTRACT_TOL,
            "ok": bool(rel_err <= CONTRACT_TOL and worst_off <= CONTRACT_TOL),
        }


def kernel_sum_log_bound(terms, params: SpaceParams) -> tuple[float, str]:
    """Log of ``sum |c_k| ||K_{m_k, lam_k}||`` (``p >= 1``) or of the
    ``p``-triangle bound ``(sum |c_k|^p ||K||^p)^(1/p)`` (``p < 1``)."""
    p = params.p
    logs = []
    methods = set()
    for c, m, lam in terms:
        lk, method = kernel_norm_log(m, abs(lam), params)
        methods.add(method)
        lc = log_abs(c)
        if lc == -math.inf:
            continue
        logs.append(lc + lk)
    if not logs:
        return -math.inf, "triangle"
    if p >= 1 or math.isinf(p):
        val = float(np.logaddexp.reduce(logs))
    else:
        val = float(np.logaddexp.reduce([p * x for x in logs])) / p
    return val, "triangle[" + ",".join(sorted(methods)) + "]"


def _kernel_terms(f: AnalyticFn):
    terms = f.terms if isinstance(f, Sum) else (f,)
    out = []
    for t in terms:
        if isinstance(t, Scale) and isinstance(t.f, Kernel):
            out.append((t.c, t.f.m, t.f.lam))
        else:
            return None
    return out


def estimate_result_norm(res: InterpolationResult, cfg: QuadratureConfig | None = None) -> NormResult:
    """Norm of the interpolant: quadrature where feasible, else a closed-form bound.

    Clustered: triangle inequality over the kernels with closed-form kernel
    norms. General: ``||h||_inf * ||g||``.
    """
    params = res.problem.params
    if res.case == CENTRAL:
        return norm(res.f, params, cfg)
    if res.case == CLUSTERED:
        return _clustered_norm(res.f, params, cfg)
    g, h = res.g, res.h
    ng = _clustered_norm(g.f, params, cfg)
    log_val = ng.log_value + math.log(max(h.sup_bound, 1e-300))
    diag = {"g": ng.to_json(), "h_sup_bound": h.sup_bound}
    return NormResult(log_val, ng.resolved, "sup(h)*norm(g)", diag)


def _clustered_norm(f, params, cfg) -> NormResult:
    terms = _kernel_terms(f)
    bound, method = kernel_sum_log_bound(terms, params)
    if max(m for _, m, _ in terms) <= QUADRATURE_MAX_INDEX:
        q = norm(f, params, cfg)
        if q.resolved and math.isfinite(q.log_value):
            q.diagnostics["triangle_log_bound"] = bound
            return q
    return NormResult(bound, True, method, {"bound": "upper"})


def working_dps(res: InterpolationResult) -> int:
    """Digits needed to evaluate ``res.f`` faithfully."""
    return max(DEFAULT_DPS, res.h.diagnostics.get("dps", DEFAULT_DPS) if res.h is not None else DEFAULT_DPS)


def log_max_modulus(res: InterpolationResult, r: float = 0.5, n: int = 64, zoom: int = 3) -> float:
    """``log max_{|z| <= r} |f|``, taken on the circle ``|z| = r``.

    Evaluated in multiprecision since the kernel terms underflow doubles
    long before they vanish.
    """
    dps = working_dps(res)
    with mpmath.workdps(dps):

        def val(t):
            return log_abs(eval_jet(res.f, mpmath.mpf(r) * mpmath.expjpi(2 * t), 0, dps=dps)[0])

        ts = [j / n for j in range(n)]
        vals = [val(t) for t in ts]
        best_t, best = ts[int(np.argmax(vals))], max(vals)
        h = 1.0 / n
        for _ in range(zoom):
            for t in np.linspace(best_t - h, best_t + h, 9):
                v = val(float(t))
                if v > best:
                    best, best_t = v, float(t)
            h /= 4
    return float(best)
