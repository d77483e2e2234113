"""Acceptance suite: one test per primary criterion.

Each test prints a ``PASS`` or ``FAIL`` line with the measured quantities
(visible in ``pytest -v`` output) before asserting.
"""

import cmath
import math
import time

import mpmath
import numpy as np
import pytest
from scipy.special import gamma

from bergman_interp import small_linalg as la
from bergman_interp.bergman_space import (
    Kernel,
    Polynomial,
    Quotient,
    SpaceParams,
    eval_jet,
    forelli_rudin_bound_check,
    forelli_rudin_integral_exact,
    kernel_derivative,
    norm,
)
from bergman_interp.cli.battery import gershgorin, hadamard, inverse_norm_lemma
from bergman_interp.disk_geometry import MobiusMap
from bergman_interp.interpolation import GREEDY, PAPER, InterpolationProblem, build_m_sequence, interpolate, setup
from bergman_interp.interpolation.engine import log_max_modulus, working_dps
from bergman_interp.operator_lab import (
    NO,
    VACUOUS,
    YES,
    SymbolPair,
    compactness_profile,
    growth_bound_probe,
    order_bounded_integral,
    sequence_consistency,
)

pytestmark = pytest.mark.acceptance

P_ALPHA = [(p, a) for p in (1, 2, 4) for a in (-1, 0, 1.5)]
ONE = Polynomial((1.0,))
Z = Polynomial((0.0, 1.0))


@pytest.fixture
def verdict(capsys):
    def emit(name, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {name}: {detail}")
        assert ok, detail

    return emit


def _on_circle(rng, r):
    return r * cmath.exp(2j * math.pi * rng.uniform())


def _scattered(rng, N, r_min=0.0):
    return [_on_circle(rng, r_min + (0.999 - r_min) * math.sqrt(rng.uniform())) for _ in range(N + 1)]


def _clustered(rng, N, cal):
    """Points within pseudo-hyperbolic distance ``eps`` of a centre beyond ``R``."""
    c = _on_circle(rng, rng.uniform(max(cal.R, 0.5) + 0.01, 0.995))
    phi = MobiusMap(c)
    return [phi(_on_circle(rng, 0.4 * cal.eps * rng.uniform())) for _ in range(N + 1)]


def _contract_errors(res):
    """Achieved jets recomputed at twice the working precision."""
    prob = res.problem
    dps = 2 * working_dps(res)
    with mpmath.workdps(dps):
        target = abs(prob.target(dps))
        off, rel = mpmath.mpf(0), None
        for k, lam in enumerate(prob.points):
            v = eval_jet(res.f, lam, k, dps=dps)[k]
            if k == prob.J:
                rel = abs(v - prob.target(dps)) / target
            else:
                off = max(off, abs(v) / target)
        return float(rel), float(off)


# --------------------------------------------------------------------------


def test_criterion_1_interpolation_contract(verdict):
    rng = np.random.default_rng(20240101)
    start = time.perf_counter()
    count, worst_rel, worst_off, bad = 0, 0.0, 0.0, []
    cases = {}
    for N in (0, 1, 2):
        for p, a in P_ALPHA:
            params = SpaceParams(p, a)
            prep = setup(N, params)
            for i in range(8):
                pts = _scattered(rng, N) if i % 2 == 0 else _clustered(rng, N, prep.calibration)
                J = int(rng.integers(N + 1))
                res = interpolate(InterpolationProblem(tuple(pts), J, params), prepared=prep, estimate_norm=False)
                rel, off = _contract_errors(res)
                count += 1
                cases[res.case] = cases.get(res.case, 0) + 1
                worst_rel, worst_off = max(worst_rel, rel), max(worst_off, off)
                if not (rel <= 1e-8 and off <= 1e-8):
                    bad.append((N, p, a, J, rel, off))
    elapsed = time.perf_counter() - start
    ok = count >= 200 and not bad and elapsed <= 300
    verdict(
        "criterion 1 interpolation contract",
        ok,
        f"{count} problems, cases {cases}, worst relative error {worst_rel:.2e}, "
        f"worst off-target ratio {worst_off:.2e}, {elapsed:.1f}s, failures {bad[:3]}",
    )


def test_criterion_2_norm_uniformity(verdict):
    rng = np.random.default_rng(7)
    levels = (0.3, 0.9, 0.99, 0.999)
    lines, failures = [], []
    for N in (0, 1, 2):
        for p, a in ((2, 0), (1, -1), (4, 1.5)):
            params = SpaceParams(p, a)
            prep = setup(N, params)
            ceil = {}
            for j in range(52):
                lev = levels[j % 4]
                if j % 8 < 4:
                    pts = [_on_circle(rng, lev)] + _scattered(rng, N - 1, lev) if N else [_on_circle(rng, lev)]
                else:
                    c = _on_circle(rng, lev)
                    phi = MobiusMap(c)
                    pts = [c] + [phi(_on_circle(rng, 0.4 * prep.calibration.eps * rng.uniform())) for _ in range(N)]
                    pts = [z if abs(z) >= lev else z * lev / abs(z) for z in pts]
                J = int(rng.integers(N + 1))
                res = interpolate(InterpolationProblem(tuple(pts), J, params), prepared=prep)
                ceil[lev] = max(ceil.get(lev, -math.inf), res.norm.log_value)
            log_ratio = ceil[0.999] - ceil[0.3]
            lines.append(f"(N={N}, p={p}, alpha={a}) log ceilings "
                         + ", ".join(f"{k}:{v:.4g}" for k, v in ceil.items())
                         + f" ratio exp({log_ratio:.4g})")
            if not log_ratio <= math.log(2):
                failures.append((N, p, a))
    verdict("criterion 2 norm uniformity", not failures,
            f"failing configurations {failures}; " + "; ".join(lines))


def test_criterion_3_decay_on_compacts(verdict):
    rng = np.random.default_rng(3)
    bad, count = [], 0
    for N in (0, 1, 2):
        for p, a in ((2, 0), (1, -1), (4, 1.5)):
            params = SpaceParams(p, a)
            prep = setup(N, params)
            dir_sets = [np.exp(2j * np.pi * np.arange(N + 1) / (N + 1))]
            dir_sets += [np.exp(2j * np.pi * rng.uniform(size=N + 1)) for _ in range(3)]
            for dirs in dir_sets:
                J = int(rng.integers(N + 1))
                logs = []
                for t in (0.9, 0.99, 0.999):
                    res = interpolate(InterpolationProblem(tuple(t * dirs), J, params),
                                      prepared=prep, estimate_norm=False)
                    logs.append(log_max_modulus(res))
                count += 1
                if not logs[0] > logs[1] > logs[2]:
                    bad.append((N, p, a, J, logs))
    verdict("criterion 3 decay on |z| <= 1/2", not bad, f"{count} direction sets, non-decreasing {bad[:3]}")


def test_criterion_4_matrix_lemmas(verdict):
    start = time.perf_counter()
    rng = np.random.default_rng(11)
    reports = [inverse_norm_lemma(rng, 1000), hadamard(rng, 1000), gershgorin(rng, 1000)]
    lhs, rhs, holds = la.inverse_norm_bound_check(np.diag([2.0, 3.0]), 6.0)
    elapsed = time.perf_counter() - start
    applicable = [r.trials - r.precondition_errors for r in reports]
    ok = (all(r.passed for r in reports) and min(applicable) >= 1000
          and lhs == 0.5 and rhs == 0.5 and holds and elapsed <= 30)
    detail = ", ".join(f"{r.name}: {n} trials, {len(r.failures)} counterexamples, max ratio {r.extremal_ratio:.4g}"
                       for r, n in zip(reports, applicable))
    verdict("criterion 4 matrix lemmas", ok, f"{detail}; diag(2,3) lhs={lhs!r} rhs={rhs!r}; {elapsed:.1f}s")


def test_criterion_5_m_sequences(verdict):
    P = SpaceParams(2, 0)
    paper1 = build_m_sequence(1, P, PAPER).m
    problems, lines = [], []
    for strategy in (PAPER, GREEDY):
        for N in range(4):
            seq = build_m_sequence(N, P, strategy)
            margins = seq.margins()
            lines.append(f"{strategy} N={N} min margin {min(margins):.4g}")
            if not (min(margins) > 0 and seq.valid):
                problems.append((strategy, N, [round(x, 4) for x in margins]))
    ok = paper1 == (2, 6400) and not problems
    verdict("criterion 5 m-sequence fidelity", ok,
            f"paper N=1 gives {list(paper1)}; non-positive margins {problems}; " + "; ".join(lines))


def test_criterion_6_kernel_analytics(verdict):
    rng = np.random.default_rng(5)
    plist = [SpaceParams(p, a) for p, a in P_ALPHA]
    worst = 0.0
    for _ in range(100):
        params = plist[int(rng.integers(len(plist)))]
        m, k = int(rng.integers(0, 11)), int(rng.integers(0, 5))
        lam = _on_circle(rng, 0.95 * math.sqrt(rng.uniform()))
        z = _on_circle(rng, 0.95 * math.sqrt(rng.uniform()))
        a = kernel_derivative(m, lam, k, z, params)
        b = eval_jet(Kernel(m, lam, params), z, k)[k]
        worst = max(worst, abs(a - b) / abs(b))
    P = SpaceParams(2, 0)
    norms = [norm(Kernel(0, lam, P), P).value for lam in (0, 0.5, 0.9j)]
    fr = {}
    for alpha, beta in ((0, 1), (1, 0.5)):
        limit = gamma(1 + alpha) * gamma(beta) / gamma(1 + alpha / 2 + beta / 2) ** 2
        ratios, agree = [], True
        for r in (0, 0.3, 0.6, 0.9, 0.95, 0.99):
            for theta in (0.0, 2.1):
                val, ref = forelli_rudin_bound_check(alpha, beta, r * cmath.exp(1j * theta))
                ratios.append(val / ref)
                agree &= abs(val - forelli_rudin_integral_exact(alpha, beta, r)) <= 1e-6 * val
        fr[(alpha, beta)] = (max(ratios), limit, agree)
    ok = (worst <= 1e-10 and all(abs(n - 1) <= 1e-6 for n in norms)
          and all(mx <= lim * (1 + 1e-9) and ag for mx, lim, ag in fr.values()))
    detail = (f"jet agreement worst {worst:.2e}; ||K(0,lam)|| {[round(n, 9) for n in norms]}; "
              + "; ".join(f"(alpha,beta)={k} max ratio {v[0]:.6f} <= limit {v[1]:.6f}, quadrature agrees {v[2]}"
                          for k, v in fr.items()))
    verdict("criterion 6 kernel analytics", ok, detail)


def test_criterion_7_checkers(verdict):
    P20 = SpaceParams(2, 0)
    half = Polynomial((0.0, 0.5))
    ob1 = order_bounded_integral(SymbolPair(ONE, Polynomial((0.0,)), 0), P20, SpaceParams(3, 1.5))
    ob2 = order_bounded_integral(SymbolPair(ONE, Z, 0), P20, SpaceParams(2, 4))
    ob3 = order_bounded_integral(SymbolPair(ONE, Z, 0), P20, P20)
    ob_ok = (ob1.status == "convergent" and abs(ob1.value - 1) <= 1e-8
             and ob2.status == "convergent" and abs(ob2.value - 5 / 3) <= 1e-4
             and ob3.status == "divergent")
    c_pairs = {
        "vacuous": SymbolPair(ONE, half, 0),
        "identity": SymbolPair(ONE, Z, 0),
        "unbounded u": SymbolPair(Quotient(ONE, Polynomial((1.0, -1.0))), half, 0),
    }
    reps = {k: compactness_profile(v, P20) for k, v in c_pairs.items()}
    c_ok = (reps["vacuous"].limit == VACUOUS and reps["vacuous"].verdict == YES
            and reps["identity"].verdict == NO and reps["unbounded u"].verdict == NO)
    extra = [
        SymbolPair(ONE, half, 2),
        SymbolPair(ONE, Z, 1),
        SymbolPair(Polynomial((1.0, -3.0, 3.0, -1.0)), Polynomial((0.5, 0.5)), 0),
        SymbolPair(Polynomial((1.0, -1.0)), Polynomial((0.5, 0.5)), 1),
        SymbolPair(Polynomial((0.0, 0.5j)), Polynomial((0.1, 0.0, 0.7)), 1),
    ]
    seq = []
    for pair in list(c_pairs.values()) + extra:
        rep = compactness_profile(pair, P20)
        s = sequence_consistency(pair, P20, rep)
        seq.append((rep.verdict, s["sequence"], s["agree"]))
    s_ok = all(a for _, _, a in seq)
    detail = (f"order-bounded values {ob1.value:.10g}, {ob2.value:.10g}, status {ob3.status}; "
              f"compactness {[(k, r.verdict, r.limit) for k, r in reps.items()]}; sequence checks {seq}")
    verdict("criterion 7 criteria checkers", ob_ok and c_ok and s_ok, detail)


def test_criterion_8_growth_bound(verdict):
    lines, failures = [], []
    for p, a in ((2, 0), (1, -1), (4, 1.5)):
        params = SpaceParams(p, a)
        for n in (0, 1, 2):
            logs = [growth_bound_probe(z, n, params).log_ratio for z in (0, 0.5, 0.9, 0.99)]
            spread = max(logs) - min(logs)
            lines.append(f"(p={p}, alpha={a}, n={n}) log ratios {[float(f'{x:.4g}') for x in logs]}")
            if not spread <= math.log(10):
                failures.append((p, a, n, f"c2/c1 = exp({spread:.4g})"))
    verdict("criterion 8 growth bound", not failures, f"failing {failures}; " + "; ".join(lines))
