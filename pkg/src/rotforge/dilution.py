"""Dilution: mixing a noisy level-l magic state with |+> gives a level-(l+1) state.

With probability lambda the level-l state is used and otherwise |+> (free).
Both |M_l> and |+> sit symmetrically around |M_{l+1}> on the X-Z great circle,
so choosing lambda to balance their weights leaves an output that is again
diagonal in the |M_{l+1}>, |Mbar_{l+1}> basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quantum import KET_PLUS, diagonal_noisy_magic, magic_ket, theta, trace_distance


@dataclass(frozen=True)
class DilutionResult:
    level: int  # level of the produced state
    lam: float
    eps_out: float

    @property
    def cost_factor(self) -> float:
        return self.lam


def _check(level: int, eps: float) -> None:
    if level < 2:
        raise ValueError("level must be >= 2")
    if not 0 <= eps < 0.5:
        raise ValueError("eps must lie in [0, 1/2)")


def mixing_weight(eps: float) -> float:
    return 1.0 / (2.0 * (1.0 - eps))


def dilute(level: int, eps_in: float) -> DilutionResult:
    """Dilute a rho_{level, eps_in} state into a level+1 state."""
    _check(level, eps_in)
    lam = mixing_weight(eps_in)
    # 1/2 (1 - (1 - 2 eps) cos(theta) / (1 - eps)), rearranged to avoid cancellation at tiny eps
    t = theta(level)
    eps_out = (math.sin(t / 2.0) ** 2 + eps_in * (math.cos(t) - 0.5)) / (1.0 - eps_in)
    return DilutionResult(level + 1, lam, eps_out)


def reduces_error(level: int, eps: float) -> bool:
    """Whether dilution at this level lowers the error: cos(theta_l) >= 1 - eps."""
    return math.cos(theta(level)) >= 1.0 - eps


def critical_level(eps: float) -> float:
    """Level where theta_l = sqrt(2 eps); dilution pays off beyond it."""
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    return math.log2(math.pi / math.sqrt(2.0 * eps))


def plus_substitute_error(level: int) -> float:
    """Trace distance between |+> and |M_level>."""
    if level < 2:
        raise ValueError("level must be >= 2")
    return abs(math.sin(theta(level)))


def verify_dilution_identity(level: int, eps: float) -> float:
    """Trace distance between both sides of the mixing identity."""
    res = dilute(level, eps)
    mixed = res.lam * diagonal_noisy_magic(level, eps).matrix + (1 - res.lam) * np.outer(KET_PLUS, KET_PLUS.conj())
    target = diagonal_noisy_magic(level + 1, res.eps_out).matrix
    return trace_distance(mixed, target)


def plus_distance_matrix(level: int) -> float:
    """Same quantity as :func:`plus_substitute_error`, from density matrices."""
    m = magic_ket(level)
    return trace_distance(np.outer(KET_PLUS, KET_PLUS.conj()), np.outer(m, m.conj()))
