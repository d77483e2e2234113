"""Kernel index sequences ``m_0 < m_1 < ... < m_N`` for the clustered system.

The requirement on row ``k`` of the normalised matrix is

    (1/2) P(k, k) > 1 + 2 sum_{j != k} P(j, k),   P(j, k) = (mt_j)_k mt_j^(1/2 - j),

with ``mt = m + 1 + (2+alpha)/p``. All quantities are handled as logarithms
in mpmath so indices far beyond the double range are fine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from ..bergman_space.params import SpaceParams
from ..errors import DomainError, NumericError

PAPER = "paper"
GREEDY = "greedy"
STRATEGIES = (PAPER, GREEDY)

# log10 of the largest index we agree to build
MAX_LOG10_M = 10_000
_DPS = 60


@dataclass(frozen=True)
class MSequence:
    m: tuple
    params: SpaceParams
    strategy: str

    @property
    def N(self) -> int:
        return len(self.m) - 1

    @property
    def shifted(self) -> tuple:
        """``mt_k`` as mpmath numbers."""
        with mpmath.workdps(_DPS):
            return tuple(+(mpmath.mpf(m) + 1 + self.params.s) for m in self.m)

    def margins(self) -> list[float]:
        """``log LHS - log RHS`` of every row; all positive iff the sequence is admissible."""
        return row_margins(self.m, self.params)

    @property
    def valid(self) -> bool:
        increasing = all(a < b for a, b in zip(self.m, self.m[1:]))
        return increasing and self.m[0] >= self.N + 1 and all(x > 0 for x in self.margins())

    def to_json(self) -> dict:
        return {
            "strategy": self.strategy,
            "m": [str(x) if x > 2**53 else int(x) for x in self.m],
            "log_margins": self.margins(),
        }


def _log_term(mt, j: int, k: int):
    """``log P(j, k) = log (mt)_k + (1/2 - j) log mt``."""
    # sum of logs rather than a loggamma difference, which cancels for huge mt
    log_rising = mpmath.fsum(mpmath.log(mt + i) for i in range(k))
    return log_rising + (mpmath.mpf(1) / 2 - j) * mpmath.log(mt)


def _row_margin(mts: list, k: int):
    """Margin of row ``k``; entries of ``mts`` that are ``None`` stand for
    indices not chosen yet and contribute their limit 0."""
    lhs = _log_term(mts[k], k, k) - mpmath.log(2)
    rhs = mpmath.mpf(1)
    for j, mt in enumerate(mts):
        if j == k or mt is None:
            continue
        rhs += 2 * mpmath.exp(_log_term(mt, j, k))
    return lhs - mpmath.log(rhs)


def row_margins(m, params: SpaceParams) -> list[float]:
    with mpmath.workdps(_DPS):
        mts = [mpmath.mpf(x) + 1 + params.s for x in m]
        return [float(_row_margin(mts, k)) for k in range(len(m))]


def build_m_sequence(N: int, params: SpaceParams, strategy: str = GREEDY) -> MSequence:
    """Build an index sequence with the requested strategy.

    ``"paper"`` applies ``m_0 = N+1``,
    ``m_k = ceil((2^(N+2) (N+1) + 2^(k+2) k mt_(k-1)^(1/2+k))^2)``;
    ``"greedy"`` returns the lexicographically smallest increasing sequence
    with ``m_0 >= N+1`` that satisfies every row condition.
    """
    if int(N) != N or N < 0:
        raise DomainError(f"N must be a nonnegative integer, got {N!r}")
    N = int(N)
    if strategy == PAPER:
        m = _paper(N, params)
    elif strategy == GREEDY:
        m = _greedy(N, params)
    else:
        raise DomainError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    return MSequence(tuple(m), params, strategy)


def _check_size(log10_m):
    if log10_m > MAX_LOG10_M:
        raise NumericError(f"index of size 10^{float(log10_m):.0f} exceeds the supported range")


def _paper(N: int, params: SpaceParams) -> list[int]:
    m = [N + 1]
    for k in range(1, N + 1):
        prev = mpmath.mpf(m[-1]) + 1 + params.s
        with mpmath.workdps(_DPS):
            log10 = (mpmath.mpf(1) / 2 + k) * mpmath.log10(prev)
        _check_size(2 * log10)
        with mpmath.workdps(int(2 * log10) + _DPS):
            prev = mpmath.mpf(m[-1]) + 1 + params.s
            base = 2 ** (N + 2) * (N + 1) + 2 ** (k + 2) * k * prev ** (mpmath.mpf(1) / 2 + k)
            m.append(int(mpmath.ceil(base**2)))
    return m


def _smallest(pred, lo: int) -> int:
    """Smallest integer ``x >= lo`` with ``pred(x)`` for a monotone predicate."""
    if pred(lo):
        return lo
    step = 1
    hi = lo + step
    while not pred(hi):
        lo = hi
        step *= 2
        hi = lo + step
        _check_size(math.log10(hi))
    # pred(lo) is False, pred(hi) is True
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _greedy(N: int, params: SpaceParams) -> list[int]:
    s = params.s
    chosen: list[int] = []
    for k in range(N + 1):
        lo = N + 1 if k == 0 else chosen[-1] + 1

        def ok(x, k=k):
            with mpmath.workdps(_DPS):
                mts = [mpmath.mpf(v) + 1 + s for v in chosen] + [mpmath.mpf(x) + 1 + s] + [None] * (N - k)
                return all(_row_margin(mts, i) > 0 for i in range(k + 1))

        chosen.append(_smallest(ok, lo))
    return chosen
