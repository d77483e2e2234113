from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import DomainError


@dataclass(frozen=True)
class SpaceParams:
    """Exponent ``p`` and weight ``alpha`` of the space ``A^p_alpha``.

    ``alpha == -1`` denotes the Hardy space ``H^p``; ``p == inf`` the
    corresponding sup-norm space.
    """

    p: float = 2.0
    alpha: float = 0.0

    def __post_init__(self):
        p = float(self.p)
        alpha = float(self.alpha)
        if not p > 0:
            raise DomainError(f"p must be positive, got {self.p!r}")
        if not alpha >= -1:
            raise DomainError(f"alpha must be >= -1, got {self.alpha!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "alpha", alpha)

    @property
    def is_hardy(self) -> bool:
        return self.alpha == -1.0

    @property
    def is_sup(self) -> bool:
        return math.isinf(self.p)

    @property
    def s(self) -> float:
        """``(2 + alpha) / p``, the growth exponent of point evaluation."""
        return 0.0 if self.is_sup else (2.0 + self.alpha) / self.p

    def exponent(self, k: int) -> float:
        """Growth exponent ``(2+alpha)/p + k`` of the ``k``-th derivative."""
        return self.s + k

    def shifted(self, m) -> float:
        """``m + 1 + (2+alpha)/p``, the kernel power for index ``m``."""
        return float(m) + 1.0 + self.s

    def to_json(self) -> dict:
        return {"p": "inf" if self.is_sup else self.p, "alpha": self.alpha}

    @classmethod
    def from_json(cls, d: dict) -> "SpaceParams":
        p = d.get("p", 2.0)
        p = math.inf if p in ("inf", "infinity", None) else float(p)
        return cls(p=p, alpha=float(d.get("alpha", 0.0)))


@dataclass(frozen=True)
class QuadratureConfig:
    """Settings for the disk quadrature behind :func:`norm`.

    ``center`` may be a point of the disk, ``"auto"`` (pick the concentration
    point from the function) or ``None`` (no change of variables).
    """

    n_radial: int = 24
    n_angular: int = 64
    center: object = "auto"
    max_refinements: int = 5
    rtol: float = 1e-9

    def __post_init__(self):
        if self.n_radial < 4 or self.n_angular < 4:
            raise DomainError("quadrature node counts must be >= 4")
        if not self.rtol > 0:
            raise DomainError("quadrature tolerance must be positive")
