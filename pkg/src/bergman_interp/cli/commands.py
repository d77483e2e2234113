"""Subcommand implementations. Each returns ``(exit_code, payload)`` where
``payload`` is a JSON-ready dict, and optionally CSV ``(header, rows)``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..bergman_space.functions import Polynomial
from ..bergman_space.norms import kernel_norm_log, kernel_norm_sup_log, norm
from ..bergman_space.functions import Kernel
from ..bergman_space.params import QuadratureConfig, SpaceParams
from ..interpolation.engine import InterpolationProblem, interpolate, log_max_modulus, setup
from ..operator_lab import (
    INCONCLUSIVE,
    OperatorSpec,
    SymbolPair,
    check_order_bounded,
    compactness_profile,
    combine,
    sequence_consistency,
)
from .battery import run_battery
from .expr import format_polynomial, parse_symbol
from .schema import to_complex

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2
EXIT_INCONCLUSIVE = 3

LOG10E = 1 / math.log(10)


@dataclass
class Outcome:
    code: int
    payload: dict
    header: tuple = ()
    rows: tuple = ()


def _params(d) -> SpaceParams:
    return SpaceParams.from_json(d or {})


def _quad(d) -> QuadratureConfig | None:
    return QuadratureConfig(**d) if d else None


def _strategy(cfg, opts) -> str:
    return opts.strategy or cfg.get("strategy", "greedy")


def _log10(x: float) -> float:
    return x * LOG10E if math.isfinite(x) else x


# --------------------------------------------------------------------------


def cmd_interpolate(cfg: dict, opts) -> Outcome:
    params = _params(cfg.get("params"))
    problem = InterpolationProblem(tuple(to_complex(v) for v in cfg["points"]), cfg["J"], params)
    res = interpolate(
        problem,
        strategy=_strategy(cfg, opts),
        dps=cfg.get("dps", 50),
        estimate_norm=cfg.get("estimate_norm", True),
        cfg=_quad(cfg.get("quadrature")),
    )
    tol = opts.tol if opts.tol is not None else res.contract["tolerance"]
    c = res.contract
    ok = c["relative_error"] <= tol and c["max_off_target_ratio"] <= tol
    c["tolerance"], c["ok"] = tol, bool(ok)
    payload = res.to_json()
    if isinstance(res.f, Polynomial):
        payload["polynomial"] = format_polynomial(res.f)
    rows = []
    for entry in payload["jets"]:
        v = entry["value"]
        if isinstance(v, dict):
            rows.append((entry["k"], *entry["point"], "", "", v["log10_magnitude"], v["phase"]))
        else:
            rows.append((entry["k"], *entry["point"], v[0], v[1], "", ""))
    header = ("k", "point_re", "point_im", "value_re", "value_im", "log10_magnitude", "phase")
    return Outcome(EXIT_OK if ok else EXIT_NUMERIC, payload, header, tuple(rows))


def cmd_sweep(cfg: dict, opts) -> Outcome:
    """Points ``t u_j`` for each ``t``: norm estimate and ``max_{|z|<=1/2} |f|``."""
    params = _params(cfg.get("params"))
    dirs = [to_complex(v) for v in cfg["directions"]]
    dirs = [u / abs(u) for u in dirs]
    N = len(dirs) - 1
    J = cfg.get("J", N)
    prep = setup(N, params, _strategy(cfg, opts))
    quad = _quad(cfg.get("quadrature"))
    rows, records, code = [], [], EXIT_OK
    for t in sorted(cfg["t"]):
        problem = InterpolationProblem(tuple(t * u for u in dirs), J, params)
        res = interpolate(problem, prepared=prep, cfg=quad)
        lm = log_max_modulus(res)
        if not res.ok:
            code = EXIT_NUMERIC
        row = (t, res.case, res.norm.method, _log10(res.norm.log_value), _log10(lm))
        rows.append(row)
        records.append(dict(zip(SWEEP_HEADER, row)) | {"contract_ok": res.ok})
    decreasing = all(b[-1] < a[-1] for a, b in zip(rows, rows[1:]))
    payload = {"params": params.to_json(), "N": N, "J": J, "rows": records, "max_half_disk_decreasing": decreasing}
    return Outcome(code, payload, SWEEP_HEADER, tuple(rows))


SWEEP_HEADER = ("t", "case", "norm_method", "log10_norm", "log10_max_half_disk")


# --------------------------------------------------------------------------


def _spec(cfg, target=None) -> OperatorSpec:
    source = _params(cfg.get("source"))
    pairs = tuple(
        SymbolPair(parse_symbol(p["u"], source), parse_symbol(p["phi"], source), p["k"]) for p in cfg["pairs"]
    )
    return OperatorSpec(pairs, source, target)


def cmd_check_order_bounded(cfg: dict, opts) -> Outcome:
    spec = _spec(cfg, _params(cfg["target"]))
    quad = _quad(cfg.get("quadrature"))
    if opts.tol is not None:
        quad = QuadratureConfig(**({**(cfg.get("quadrature") or {}), "rtol": opts.tol}))
    report = check_order_bounded(spec, quad)
    payload = {"source": spec.source.to_json(), "target": spec.target.to_json(), **report.to_json()}
    rows = [
        (i, pr.k, r.status, r.verdict, "" if r.value is None else r.value,
         "" if r.growth_exponent is None else r.growth_exponent)
        for i, (pr, r) in enumerate(zip(spec.pairs, report.pairs))
    ]
    header = ("pair", "k", "status", "verdict", "value", "growth_exponent")
    code = EXIT_INCONCLUSIVE if report.verdict == INCONCLUSIVE else EXIT_OK
    return Outcome(code, payload, header, tuple(rows))


def cmd_check_compact(cfg: dict, opts) -> Outcome:
    spec = _spec(cfg)
    tol = opts.tol if opts.tol is not None else 1e-3
    reports = [compactness_profile(pr, spec.source, tol=tol) for pr in spec.pairs]
    pairs = []
    rows = []
    for i, (pr, rep) in enumerate(zip(spec.pairs, reports)):
        entry = rep.to_json()
        if cfg.get("sequence_check", True):
            seq = sequence_consistency(pr, spec.source, rep)
            entry["sequence_check"] = {"sequence": seq["sequence"], "agree": seq["agree"]}
        pairs.append(entry)
        rows.extend((i, pr.k, t, s) for t, s in zip(rep.thresholds, rep.profile))
    verdict = combine(r.verdict for r in reports)
    payload = {"source": spec.source.to_json(), "target": "H^inf", "verdict": verdict, "pairs": pairs}
    code = EXIT_INCONCLUSIVE if verdict == INCONCLUSIVE else EXIT_OK
    return Outcome(code, payload, ("pair", "k", "threshold", "sup_ratio"), tuple(rows))


# --------------------------------------------------------------------------


def cmd_kernel_norms(cfg: dict, opts) -> Outcome:
    plist = [_params(d) for d in cfg.get("params", [{}])]
    rows, records = [], []
    for params in plist:
        for m in cfg["m"]:
            bound = kernel_norm_sup_log(m, params)
            for v in cfg["lambda"]:
                lam = to_complex(v)
                log_n, method = kernel_norm_log(m, abs(lam), params)
                quad = ""
                if cfg.get("quadrature", False):
                    q = norm(Kernel(m, lam, params), params)
                    quad = q.value if q.resolved else ""
                row = (params.to_json()["p"], params.alpha, m, lam.real, lam.imag,
                       math.exp(log_n), method, math.exp(bound), quad)
                rows.append(row)
                records.append(dict(zip(KERNEL_HEADER, row)))
    return Outcome(EXIT_OK, {"rows": records}, KERNEL_HEADER, tuple(rows))


KERNEL_HEADER = ("p", "alpha", "m", "lambda_re", "lambda_im", "norm", "method", "sup_bound", "quadrature")


def cmd_verify(cfg: dict, opts) -> Outcome:
    seed = 0 if opts.seed is None else opts.seed
    reports = run_battery(
        seed,
        matrix_trials=cfg.get("matrix_trials", 1000),
        analytic_trials=cfg.get("analytic_trials", 100),
        tol=opts.tol if opts.tol is not None else 1e-8,
        D_factor=cfg.get("inject", {}).get("D_factor", 1.0),
    )
    table = [r.to_json() for r in reports]
    passed = all(r.passed for r in reports)
    payload = {"seed": seed, "passed": passed, "properties": table}
    header = ("property", "trials", "failures", "precondition_errors", "extremal_ratio", "passed")
    rows = tuple(tuple(t[h] for h in header) for t in table)
    return Outcome(EXIT_OK if passed else EXIT_NUMERIC, payload, header, rows)


COMMANDS = {
    "interpolate": cmd_interpolate,
    "sweep": cmd_sweep,
    "check-order-bounded": cmd_check_order_bounded,
    "check-compact": cmd_check_compact,
    "kernel-norms": cmd_kernel_norms,
    "verify": cmd_verify,
}
