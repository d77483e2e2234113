"""Sums of weighted differentiation composition operators
``T f = sum_k u_k * (f^(k) o phi_k)`` and numerical checks of their
order-boundedness (into ``A^q_beta``) and compactness (into ``H^inf``).

Both checks reduce to one symbol pair at a time:

* order bounded iff every ``int |u_k|^q / (1-|phi_k|^2)^((2+alpha)q/p + kq) dA_beta``
  is finite;
* compact iff every ``u_k`` is bounded and
  ``|u_k(z)| / (1-|phi_k(z)|^2)^((2+alpha)/p + k) -> 0`` as ``|phi_k(z)| -> 1``.

Integrals are accumulated over dyadic shells ``1 - 2^-(j-1) < |z| < 1 - 2^-j``;
the growth of the shell increments decides convergence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bergman_space.functions import AnalyticFn, Kernel, eval_jet, evaluate
from .bergman_space.norms import circle_max, kernel_norm_sup_log, norm
from .bergman_space.params import QuadratureConfig, SpaceParams
from .bergman_space.quadrature import shell_increments
from .errors import DomainError, NumericError

YES = "yes"
NO = "no"
INCONCLUSIVE = "inconclusive"
VACUOUS = "vacuous-true"

SELF_MAP_TOL = 1e-12


@dataclass(frozen=True)
class SymbolPair:
    """Weight ``u``, self-map ``phi`` and derivative order ``k``."""

    u: AnalyticFn
    phi: AnalyticFn
    k: int = 0

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 0:
            raise DomainError(f"derivative order must be a nonnegative integer, got {self.k!r}")
        validate_self_map(self.phi)


@dataclass(frozen=True)
class OperatorSpec:
    """``T = sum D^k_{u_k, phi_k}`` from ``A^p_alpha`` to ``A^q_beta`` (``target=None`` means ``H^inf``)."""

    pairs: tuple
    source: SpaceParams = SpaceParams()
    target: SpaceParams | None = None

    def __post_init__(self):
        pairs = tuple(self.pairs)
        if not pairs:
            raise DomainError("an operator needs at least one symbol pair")
        orders = [pr.k for pr in pairs]
        if len(set(orders)) != len(orders):
            raise DomainError(f"derivative orders must be distinct, got {orders}")
        object.__setattr__(self, "pairs", pairs)

    @property
    def n(self) -> int:
        return max(pr.k for pr in self.pairs)


def validate_self_map(phi: AnalyticFn, levels: int = 20, n: int = 256) -> float:
    """Largest ``|phi|`` on the circles ``|z| = 1 - 2^-j``; rejects maps leaving the disk."""
    theta = 2 * np.pi * np.arange(n) / n
    worst = 0.0
    for j in range(levels + 1):
        r = 0.0 if j == 0 else 1.0 - 2.0**-j
        z = np.array([0j]) if j == 0 else r * np.exp(1j * theta)
        v = np.abs(evaluate(phi, z))
        if not np.all(np.isfinite(v)):
            raise DomainError(f"self-map is not finite on |z| = {r}")
        m = float(np.max(v))
        worst = max(worst, m)
        if m >= 1.0 - SELF_MAP_TOL:
            raise DomainError(f"symbol does not map the disk into itself: |phi| = {m:.15g} at |z| = {r}")
    return worst


def apply(spec: OperatorSpec, f: AnalyticFn, z) -> complex:
    """``(T f)(z) = sum_k u_k(z) f^(k)(phi_k(z))``."""
    z = complex(z)
    if not abs(z) < 1:
        raise DomainError(f"z={z!r} is not in the open unit disk")
    out = 0j
    for pr in spec.pairs:
        w = pr.phi(z)
        if not abs(w) < 1:
            raise DomainError(f"phi(z) = {w!r} left the open unit disk")
        out += pr.u(z) * eval_jet(f, w, pr.k)[pr.k]
    return out


# --------------------------------------------------------------------------
# order boundedness


def pair_exponent(k: int, source: SpaceParams, q: float) -> float:
    """``(2+alpha) q / p + k q``."""
    return source.s * q + k * q


@dataclass
class IntegralReport:
    status: str  # "convergent" | "divergent" | "inconclusive"
    value: float | None
    growth_exponent: float | None
    increments: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return {"convergent": YES, "divergent": NO}.get(self.status, INCONCLUSIVE)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "verdict": self.verdict,
            "value": self.value,
            "growth_exponent": self.growth_exponent,
            "increments": self.increments,
            "diagnostics": self.diagnostics,
        }


def order_bounded_integral(
    pair: SymbolPair,
    source: SpaceParams,
    target: SpaceParams,
    cfg: QuadratureConfig | None = None,
    max_shells: int = 40,
    min_shells: int = 12,
) -> IntegralReport:
    """Finite or divergent: ``int |u|^q / (1-|phi|^2)^((2+alpha)q/p + kq) dA_beta``.

    Shell increments ``d_j`` that decay geometrically give a convergent
    value (with the geometric tail added); increments that do not decay
    give a divergence with growth exponent ``gamma``
    (``d_j ~ 2^(gamma j)``, so the partial integrals grow like
    ``(1-r)^-gamma``, or like ``log 1/(1-r)`` when ``gamma = 0``).
    """
    if target is None or target.is_hardy or target.is_sup:
        raise DomainError("order boundedness is checked into a weighted Bergman space (beta > -1, q < inf)")
    cfg = cfg or QuadratureConfig()
    q, beta = target.p, target.alpha
    e = pair_exponent(pair.k, source, q)

    def F(z):
        u = np.abs(evaluate(pair.u, z))
        w = np.abs(evaluate(pair.phi, z))
        with np.errstate(divide="ignore", over="ignore"):
            return u**q * np.exp(-e * np.log1p(-w * w))

    rtol = max(cfg.rtol, 1e-11)
    incs = []
    resolved = True
    status = None
    gamma = None
    for j, d, ok in shell_increments(F, beta, rtol):
        resolved &= ok
        incs.append(d)
        if not math.isfinite(d):
            status, gamma = "divergent", math.inf
            break
        S = math.fsum(incs)
        if j >= min_shells:
            if S == 0:
                status = "convergent"
                break
            slope = _tail_slope(incs)
            if slope is not None:
                if slope > -0.02:
                    status, gamma = "divergent", max(slope, 0.0)
                    break
                ratio = 2.0**slope
                tail = incs[-1] * ratio / (1 - ratio)
                if slope < -0.1 and tail <= 1e-10 * S:
                    status = "convergent"
                    break
        if j >= max_shells:
            break
    total = math.fsum(incs)
    diag = {"shells": len(incs), "exponent": e, "angular_resolved": bool(resolved)}
    if status is None:
        slope = _tail_slope(incs)
        if slope is not None and slope < -0.1:
            ratio = 2.0**slope
            tail = incs[-1] * ratio / (1 - ratio)
            diag["tail_estimate"] = tail
            if tail <= 1e-6 * total:
                return IntegralReport("convergent", total + tail, None, incs, diag)
        diag["tail_slope"] = slope
        return IntegralReport("inconclusive", total, None, incs, diag)
    if status == "convergent":
        slope = _tail_slope(incs)
        tail = 0.0
        if slope is not None and slope < 0 and incs[-1] > 0:
            ratio = 2.0**slope
            tail = incs[-1] * ratio / (1 - ratio)
        diag["tail_estimate"] = tail
        return IntegralReport("convergent", total + tail, None, incs, diag)
    diag["partial_integral"] = total
    return IntegralReport("divergent", None, gamma, incs, diag)


def _tail_slope(incs, window: int = 6):
    """Least-squares slope of ``log2 d_j`` over the last ``window`` shells."""
    tail = np.asarray(incs[-window:], dtype=float)
    if len(tail) < window or np.any(tail <= 0):
        return None
    y = np.log2(tail)
    x = np.arange(len(y))
    return float(np.polyfit(x, y, 1)[0])


@dataclass
class OrderBoundedReport:
    verdict: str
    pairs: list

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "pairs": [p.to_json() for p in self.pairs]}


def combine(verdicts) -> str:
    """Conjunction: ``no`` wins, then ``inconclusive``; ``yes`` needs all ``yes``."""
    verdicts = list(verdicts)
    if any(v == NO for v in verdicts):
        return NO
    if any(v == INCONCLUSIVE for v in verdicts):
        return INCONCLUSIVE
    return YES


def check_order_bounded(spec: OperatorSpec, cfg: QuadratureConfig | None = None) -> OrderBoundedReport:
    reports = [order_bounded_integral(pr, spec.source, spec.target, cfg) for pr in spec.pairs]
    return OrderBoundedReport(combine(r.verdict for r in reports), reports)


# --------------------------------------------------------------------------
# compactness into H^inf


@dataclass
class CompactnessReport:
    verdict: str
    u_bounded: str
    limit: str
    sup_phi: float
    thresholds: list = field(default_factory=list)
    profile: list = field(default_factory=list)
    witness: list = field(default_factory=list)
    u_maxima: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "u_bounded": self.u_bounded,
            "limit": self.limit,
            "sup_phi": self.sup_phi,
            "profile": [{"threshold": t, "sup_ratio": s} for t, s in zip(self.thresholds, self.profile)],
            "u_circle_maxima": self.u_maxima,
        }


def _circle_maxima(f: AnalyticFn, levels: int, n: int = 512) -> list[float]:
    return [circle_max(f, 1.0 - 2.0**-j, n) for j in range(1, levels + 1)]


def _u_bounded(maxima) -> str:
    m = np.asarray(maxima)
    if not np.all(np.isfinite(m)):
        return NO
    if m[-1] == 0:
        return YES
    steps = np.diff(np.log(np.maximum(m, 1e-300)))
    last = steps[-6:]
    if np.all(last <= 1e-9) or m[-1] <= m[-2] * (1 + 1e-9):
        return YES
    # steadily growing circle maxima
    if np.all(last > 0) and last[-1] >= 0.5 * last[0]:
        return NO
    if np.all(last >= 0) and last[-1] <= 0.6 * last[0]:
        return YES
    return INCONCLUSIVE


def _samples(phi: AnalyticFn, levels: int, n: int = 256):
    """Points on circles ``1 - 2^-j`` plus a fine angular comb around each
    circle's maximiser of ``|phi|``."""
    pts = [np.array([0j])]
    theta = 2 * np.pi * np.arange(n) / n
    offsets = np.concatenate([-np.logspace(-12, -0.5, 60), [0.0], np.logspace(-12, -0.5, 60)])
    for j in range(1, levels + 1):
        r = 1.0 - 2.0**-j
        z = r * np.exp(1j * theta)
        v = np.abs(evaluate(phi, z))
        t0 = theta[int(np.argmax(v))]
        pts.append(z)
        pts.append(r * np.exp(1j * (t0 + offsets)))
    return np.concatenate(pts)


def compactness_profile(
    pair: SymbolPair, source: SpaceParams, levels: int = 40, tol: float = 1e-3
) -> CompactnessReport:
    """Profile of ``ratio(z) = |u(z)| / (1-|phi(z)|^2)^((2+alpha)/p + k)`` as ``|phi(z)| -> 1``.

    ``s_j = sup{ratio : |phi(z)| >= 1 - 2^-j}`` over the samples. The limit
    is ``zero`` when ``s_j`` decays (geometrically or below ``tol``),
    ``nonzero`` when it stays bounded away from 0, and ``vacuous-true``
    when ``|phi|`` stays below 1 - 1e-6 on circles tending to the boundary.
    """
    e = source.s + pair.k
    zs = _samples(pair.phi, levels)
    w = np.abs(evaluate(pair.phi, zs))
    u = np.abs(evaluate(pair.u, zs))
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        ratio = u * np.exp(-e * np.log1p(-w * w))
    phi_max = _circle_maxima(pair.phi, levels, 256)
    sup_phi = float(max(phi_max))
    u_max = _circle_maxima(pair.u, min(levels, 30))
    u_verdict = _u_bounded(u_max)

    gaps = 1.0 - np.asarray(phi_max)
    thresholds, profile, witness = [], [], []
    for j in range(1, levels + 1):
        t = 1.0 - 2.0**-j
        mask = w >= t
        if not np.any(mask):
            break
        i = int(np.argmax(np.where(mask, ratio, -np.inf)))
        thresholds.append(t)
        profile.append(float(ratio[i]))
        witness.append(complex(zs[i]))

    if gaps[-1] > 1e-6 and gaps[-1] >= 0.9 * gaps[-6]:
        limit = VACUOUS
    else:
        limit = _limit_verdict(profile, tol)
    if u_verdict == NO or limit == NO:
        verdict = NO
    elif u_verdict == YES and limit in (YES, VACUOUS):
        verdict = YES
    else:
        verdict = INCONCLUSIVE
    return CompactnessReport(
        verdict=verdict,
        u_bounded=u_verdict,
        limit={YES: "zero", NO: "nonzero"}.get(limit, limit),
        sup_phi=sup_phi,
        thresholds=thresholds,
        profile=profile,
        witness=witness,
        u_maxima=u_max,
    )


def _limit_verdict(profile, tol) -> str:
    """``yes`` (limit zero), ``no`` (nonzero) or ``inconclusive``."""
    s = np.asarray(profile)
    if len(s) < 8:
        return INCONCLUSIVE
    if not np.all(np.isfinite(s)):
        return NO
    tail = s[-8:]
    if tail[-1] <= tol * max(s[0], 1.0) and np.all(np.diff(tail) <= 0):
        return YES
    with np.errstate(divide="ignore"):
        slope = np.polyfit(np.arange(8), np.log2(np.maximum(tail, 1e-300)), 1)[0]
    if slope < -0.05 and np.all(np.diff(tail) <= 1e-12 * tail[0]):
        return YES
    if tail[-1] >= 0.5 * tail[0]:
        return NO
    return INCONCLUSIVE


@dataclass
class CompactReport:
    verdict: str
    pairs: list

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "pairs": [p.to_json() for p in self.pairs]}


def check_compact(spec: OperatorSpec) -> CompactReport:
    """Every weight bounded and every ratio limit zero (or vacuous)."""
    reports = [compactness_profile(pr, spec.source) for pr in spec.pairs]
    return CompactReport(combine(r.verdict for r in reports), reports)


def sequence_consistency(pair: SymbolPair, source: SpaceParams, report: CompactnessReport | None = None) -> dict:
    """Compare the ratio verdict with the behaviour of a weakly null sequence.

    * verdict yes: ``f_j = K_{0, lam_j}``, ``|lam_j| = 1 - 2^-j``, along
      several directions; ``sup_{|z| <= 0.99} |D f_j|`` must tend to 0.
    * verdict no, bounded weight: ``f_j = K_{0, phi(z_j)} / C`` at witness
      points ``z_j``, with ``C`` the uniform bound of the kernel norms; then
      ``|D f_j(z_j)| >= (1+s)_k |phi(z_j)|^k ratio(z_j) / C`` stays away from 0.
    * unbounded weight: ``D 1`` is unbounded, seen as growing circle maxima.

    Returns ``{"verdict", "sequence", "agree", "values"}``.
    """
    report = report or compactness_profile(pair, source)
    spec = OperatorSpec((pair,), source)
    if report.verdict == YES:
        values = []
        r_grid = 0.99 * np.sqrt(np.linspace(0, 1, 24))[1:]
        th = 2 * np.pi * np.arange(64) / 64
        zs = np.concatenate([[0j], (r_grid[:, None] * np.exp(1j * th)[None, :]).ravel()])
        for j in range(2, 16):
            best = 0.0
            for d in np.exp(2j * np.pi * np.arange(8) / 8):
                f = Kernel(0, (1 - 2.0**-j) * d, source)
                best = max(best, max(abs(apply(spec, f, z)) for z in zs))
            values.append(best)
        tends_to_zero = values[-1] <= 0.05 * max(values) and values[-1] < values[0]
        return {"verdict": YES, "sequence": "to-zero" if tends_to_zero else "not-to-zero",
                "agree": bool(tends_to_zero), "values": values}
    if report.verdict == NO and report.u_bounded == YES:
        log_c = kernel_norm_sup_log(0, source)
        values = []
        for z in report.witness[-10:]:
            lam = pair.phi(z)
            f = Kernel(0, lam, source)
            values.append(abs(apply(spec, f, z)) * math.exp(-log_c))
        away = min(values) >= 0.1 * max(values[0], 1e-300) and min(values) > 0
        return {"verdict": NO, "sequence": "bounded-below" if away else "decaying",
                "agree": bool(away), "values": values}
    if report.verdict == NO:
        from .bergman_space.functions import Polynomial

        maxima = []
        for j in range(4, 24, 2):
            r = 1.0 - 2.0**-j
            th = 2 * np.pi * np.arange(256) / 256
            maxima.append(max(abs(apply(spec, Polynomial((1.0,)) if pair.k == 0 else Polynomial((0.0,) * pair.k + (1.0,)), z))
                              for z in r * np.exp(1j * th)))
        grows = maxima[-1] > 10 * maxima[0]
        return {"verdict": NO, "sequence": "unbounded" if grows else "bounded",
                "agree": bool(grows), "values": maxima}
    return {"verdict": INCONCLUSIVE, "sequence": "skipped", "agree": True, "values": []}


# --------------------------------------------------------------------------
# growth of point evaluations of derivatives


@dataclass
class GrowthProbe:
    z: complex
    n: int
    log_achieved: float
    log_reference: float
    case: str
    norm_method: str

    @property
    def log_ratio(self) -> float:
        return self.log_achieved - self.log_reference

    @property
    def ratio(self) -> float:
        return math.exp(self.log_ratio) if self.log_ratio > -745 else 0.0

    def to_json(self) -> dict:
        return {
            "z": [self.z.real, self.z.imag],
            "n": self.n,
            "log10_achieved": self.log_achieved / math.log(10),
            "log10_reference": self.log_reference / math.log(10),
            "log10_ratio": self.log_ratio / math.log(10),
            "case": self.case,
            "norm_method": self.norm_method,
        }


def growth_bound_probe(z, n: int, source: SpaceParams, strategy: str = "greedy",
                       cfg: QuadratureConfig | None = None) -> GrowthProbe:
    """``|f^(n)(z)|`` for the interpolant with all points at ``z`` and ``J = n``,
    divided by its norm, against ``(1-|z|^2)^-((2+alpha)/p + n)``.

    The interpolant meets ``f^(n)(z) = reference`` exactly, so the ratio is
    ``1 / ||f||``; everything is kept in logarithms.
    """
    from .interpolation.engine import InterpolationProblem, interpolate

    z = complex(z)
    prob = InterpolationProblem((z,) * (n + 1), n, source)
    res = interpolate(prob, strategy=strategy, cfg=cfg)
    if not res.ok:
        raise NumericError("interpolation contract failed inside the growth probe")
    log_ref = -(source.s + n) * math.log1p(-abs(z) ** 2)
    v = res.jets[n][2]
    from .numeric import log_abs

    log_achieved = log_abs(v) - res.norm.log_value
    return GrowthProbe(z, n, log_achieved, log_ref, res.case, res.norm.method)


def random_polynomial_growth(z, n: int, source: SpaceParams, count: int = 100, degree: int = 8,
                             seed: int = 0, cfg: QuadratureConfig | None = None) -> float:
    """``max |f^(n)(z)| / reference`` over random polynomials of unit norm."""
    from .bergman_space.functions import Polynomial

    rng = np.random.default_rng(seed)
    z = complex(z)
    ref = (1 - abs(z) ** 2) ** (-(source.s + n))
    best = 0.0
    for _ in range(count):
        c = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
        c /= np.sqrt(np.arange(1, degree + 2))
        f = Polynomial(tuple(c))
        nf = norm(f, source, cfg).value
        best = max(best, abs(eval_jet(f, z, n)[n]) / nf / ref)
    return best
