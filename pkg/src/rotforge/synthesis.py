"""T-count models for gate synthesis and precision-metric conversions.

Gate synthesis approximates a rotation from Clifford+T; its cost is the
T-count times the cost of one level-3 magic state, and its error is the
synthesis error plus T-count times the per-T error.
"""

from __future__ import annotations

import bisect
import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np

from .quantum import theta

SQRT2 = math.sqrt(2.0)
PQF_CONSTANT = 1.187
SMALL_ANGLE_LIMIT = 0.1


class TCountModel(Protocol):
    name: str

    def tcount(self, eps: float) -> float: ...


def pqf_tcount(eps_gs: float) -> float:
    """Expected T-count of probabilistic quantum-Fourier-style synthesis at diamond error eps_gs."""
    if not 0 < eps_gs < 1:
        raise ValueError("eps_gs must lie in (0, 1)")
    x = math.log2(SQRT2 / eps_gs)
    return x + 4.0 * math.log2(x) + PQF_CONSTANT


@dataclass(frozen=True)
class PQFModel:
    name: str = "pqf"

    def tcount(self, eps: float) -> float:
        return pqf_tcount(eps)


@dataclass(frozen=True)
class SRAnalytic:
    """c * log2(1/eps); the coefficient is a configurable estimate."""

    coefficient: float = 3.0
    name: str = "sr"

    def tcount(self, eps: float) -> float:
        if not 0 < eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        return self.coefficient * math.log2(1.0 / eps)


@dataclass(frozen=True)
class SRRecord:
    epsilon: float
    tcount: float
    angle: float | None = None


@dataclass(frozen=True)
class SRTable:
    """Tabulated synthesis records; queries step to the nearest record at least as strict."""

    records: tuple[SRRecord, ...]
    name: str = "sr-table"

    def __post_init__(self):
        recs = tuple(sorted(self.records, key=lambda r: r.epsilon))
        for r in recs:
            if not (r.epsilon > 0 and math.isfinite(r.epsilon)) or r.tcount < 0:
                raise ValueError(f"invalid SR record {r}")
        object.__setattr__(self, "records", recs)

    @classmethod
    def from_csv(cls, path: str | Path) -> "SRTable":
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not {"epsilon", "tcount"} <= set(reader.fieldnames):
                raise ValueError("SR table needs an 'epsilon,tcount[,angle]' header")
            recs = []
            for row in reader:
                angle = row.get("angle")
                recs.append(
                    SRRecord(float(row["epsilon"]), float(row["tcount"]), float(angle) if angle else None)
                )
        return cls(tuple(recs))

    def tcount(self, eps: float) -> float:
        if not self.records:
            raise ValueError("SR table is empty")
        eps_list = [r.epsilon for r in self.records]
        # largest record epsilon that is <= eps
        i = bisect.bisect_right(eps_list, eps * (1 + 1e-12)) - 1
        if i < 0:
            raise ValueError(f"eps={eps:g} is below the table range")
        # several records may share an epsilon; take the best count among them
        best = min(r.tcount for r in self.records if r.epsilon == eps_list[i])
        return best


def sr_tcount(eps: float, model: SRAnalytic | SRTable) -> float:
    return model.tcount(eps)


# ---------------------------------------------------------------------------
# Gate-synthesis rotation cost
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GSCost:
    cost: float
    eps_gs: float
    eps3: float
    tcount: float
    m3_cost: float

    @property
    def error(self) -> float:
        return self.eps_gs + self.tcount * self.eps3


def largest_feasible_eps_gs(
    model: TCountModel, eps3: float, target: float, points_per_decade: int = 200, decades: int = 12
) -> tuple[float, float] | None:
    """Largest eps_GS on a log grid with eps_GS + T(eps_GS) eps3 <= target."""
    grid = target * 10.0 ** (-np.arange(points_per_decade * decades + 1) / points_per_decade)
    for e in grid:
        if e >= 1:
            continue
        t = model.tcount(float(e))
        if e + t * eps3 <= target:
            return float(e), t
    return None


def gs_rotation_cost(
    model: TCountModel,
    m3_frontier: Sequence[tuple[float, float]],
    target: float,
    points_per_decade: int = 200,
) -> GSCost:
    """Cheapest synthesis of a rotation at total error <= target.

    ``m3_frontier`` lists (error, cost) points for level-3 magic states.
    """
    if not m3_frontier:
        raise ValueError("empty level-3 frontier")
    best: GSCost | None = None
    for eps3, c3 in m3_frontier:
        if eps3 >= target:
            continue
        found = largest_feasible_eps_gs(model, eps3, target, points_per_decade)
        if found is None:
            continue
        e_gs, t = found
        cand = GSCost(t * c3, e_gs, eps3, t, c3)
        if best is None or cand.cost < best.cost:
            best = cand
    if best is None:
        raise ValueError(f"target {target:g} unreachable by gate synthesis")
    return best


# ---------------------------------------------------------------------------
# Precision metrics
# ---------------------------------------------------------------------------

METRICS = ("diamond", "spectral", "pqf", "angle")


@dataclass(frozen=True)
class PrecisionValue:
    value: float
    metric: str

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if not (self.value >= 0 and math.isfinite(self.value)):
            raise ValueError("precision must be a finite non-negative number")


def _to_angle(p: PrecisionValue) -> float:
    if p.metric == "angle":
        return p.value
    if p.metric in ("spectral", "diamond"):
        s = p.value / 2.0
    else:
        s = p.value / SQRT2
    if s > 1:
        raise ValueError("precision outside the representable range")
    return 2.0 * math.asin(s)


def convert_precision(p: PrecisionValue, to: str) -> PrecisionValue:
    """Convert between the diamond, spectral, pqf and angle measures of a rotation error.

    Valid only for small over-rotations (phi <= 0.1), where the diamond
    distance and the spectral-norm distance coincide.
    """
    if to not in METRICS:
        raise ValueError(f"unknown metric {to!r}")
    phi = _to_angle(p)
    if phi > SMALL_ANGLE_LIMIT:
        raise ValueError(f"angle {phi:g} outside small-angle window (<= {SMALL_ANGLE_LIMIT})")
    half = abs(math.sin(phi / 2.0))
    value = {"angle": phi, "spectral": 2.0 * half, "diamond": 2.0 * half, "pqf": SQRT2 * half}[to]
    return PrecisionValue(value, to)


def diamond_bracket(phi: float) -> tuple[float, float]:
    """Bounds |sin phi| <= eps_GS <= 2|sin(phi/2)| on the diamond error of a phi over-rotation."""
    return abs(math.sin(phi)), 2.0 * abs(math.sin(phi / 2.0))


# ---------------------------------------------------------------------------
# Arbitrary angles from powers of R_l
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AngleApproximation:
    phi: float
    level: int
    n: int
    achieved_error: float

    def reduced(self) -> tuple[int, int]:
        """Same angle n*theta_l with the smallest level (strip factors of 2 from n)."""
        level, n = self.level, self.n
        while n and n % 2 == 0 and level > 0:
            n //= 2
            level -= 1
        return level, n


def approximate_angle(phi: float, tol: float) -> AngleApproximation:
    """n * pi/2^l within tol of phi, picking the smallest l whose spacing pi/2^l is <= tol."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not 0 <= phi < 2 * math.pi:
        raise ValueError("phi must lie in [0, 2 pi)")
    level = max(0, math.ceil(math.log2(math.pi / tol)))
    while theta(level) > tol:
        level += 1
    while level > 0 and theta(level - 1) <= tol:
        level -= 1
    n = int(round(phi / theta(level)))
    return AngleApproximation(phi, level, n, abs(phi - n * theta(level)))


def reachable_angles(level: int) -> np.ndarray:
    """n * theta_l for 1 <= n <= 2^(l+1), sorted."""
    n = np.arange(1, 2 ** (level + 1) + 1)
    return np.sort(n * theta(level))
