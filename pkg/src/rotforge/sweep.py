"""Cost of R_l at a fixed target across levels, and the shape of that curve.

A sweep row holds the cheapest injected-rotation cost from the cost table
next to gate-synthesis costs at the same target.  ``sweep_shape`` splits
the curve into a rising part, an optional gentler part and the falling
tail, and measures the decay rate of the tail.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .costs import CostTable, cheapest_rotation, regime
from .dilution import critical_level
from .synthesis import GSCost, PQFModel, SRAnalytic, TCountModel, gs_rotation_cost

COLUMNS = ("level", "cost_mekl", "cost_pqf", "cost_sr", "regime", "status")


@dataclass(frozen=True)
class SweepRow:
    level: int
    cost_mekl: float | None
    cost_pqf: float | None
    cost_sr: float | None
    regime: str
    status: str
    state_error: float | None = None

    def as_csv(self) -> list[str]:
        def f(x):
            return "" if x is None else repr(float(x))

        return [str(self.level), f(self.cost_mekl), f(self.cost_pqf), f(self.cost_sr), self.regime, self.status]


def _gs(model: TCountModel, table: CostTable, target: float) -> float | None:
    m3 = [(e.error, e.cost) for e in table.frontier("M", 3)]
    try:
        res: GSCost = gs_rotation_cost(model, m3, target)
    except ValueError:
        return None
    return res.cost


def run_sweep(
    table: CostTable,
    target: float,
    levels: Sequence[int] | None = None,
    sr_model: TCountModel = SRAnalytic(),
) -> list[SweepRow]:
    """One row per level; unreachable levels get empty costs and status 'unreachable'."""
    if not 0 < target < 1:
        raise ValueError("target must lie in (0, 1)")
    levels = list(range(3, table.l_max + 1)) if levels is None else list(levels)
    # gate synthesis does not depend on the level
    pqf = _gs(PQFModel(), table, target)
    sr = _gs(sr_model, table, target)
    rows = []
    for level in levels:
        try:
            rot = cheapest_rotation(table, level, target)
        except ValueError:
            rows.append(SweepRow(level, None, pqf, sr, "", "unreachable"))
            continue
        state = rot.recipe.inputs[0] if rot.recipe.inputs else None
        rows.append(SweepRow(level, rot.cost, pqf, sr, regime(rot), "ok",
                             None if state is None else state.error))
    return rows


def write_csv(rows: Sequence[SweepRow], fh=None) -> str:
    buf = io.StringIO() if fh is None else fh
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow(r.as_csv())
    return buf.getvalue() if fh is None else ""


def read_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


# ---------------------------------------------------------------------------
# Curve shape
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepShape:
    peak_level: int
    onset_level: int  # first level of the falling tail
    critical_level: float  # dilution crossover for the operative state error
    gentle_levels: tuple[int, ...]  # middle region, empty when absent
    slope_ratio: float  # later / earlier slope of the best two-segment fit of the rising part
    decay_levels: tuple[int, ...]
    decay_slope: float  # log2(cost) per level over decay_levels

    @property
    def has_middle(self) -> bool:
        return bool(self.gentle_levels)


def _line_sse(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    slope, icept = np.polyfit(x, y, 1)
    return float(slope), float(np.sum((y - (slope * x + icept)) ** 2))


def two_segment_fit(levels: Sequence[int], costs: Sequence[float], min_len: int = 3) -> tuple[int, float, float]:
    """Best split of a curve into two straight pieces; returns (first level of piece 2, slope 1, slope 2)."""
    x = np.asarray(levels, dtype=float)
    y = np.asarray(costs, dtype=float)
    if len(x) < 2 * min_len:
        raise ValueError("curve too short for a two-segment fit")
    best = None
    for k in range(min_len, len(x) - min_len + 1):
        s1, e1 = _line_sse(x[:k], y[:k])
        s2, e2 = _line_sse(x[k:], y[k:])
        if best is None or e1 + e2 < best[0]:
            best = (e1 + e2, int(x[k]), s1, s2)
    return best[1], best[2], best[3]


def sweep_shape(rows: Sequence[SweepRow], gentle_ratio: float = 0.5, min_len: int = 3) -> SweepShape:
    """Locate the regions of a sweep curve.

    Rising part: levels up to the cost peak.  Its middle (gentler) region
    exists when the best two-segment linear fit has a second slope below
    ``gentle_ratio`` times the first.  The decay slope is a least-squares
    fit of log2(cost) over the tail, from the first falling level while
    the cost stays at or above one raw state.
    """
    ok = [r for r in rows if r.status == "ok" and r.cost_mekl is not None]
    if len(ok) < 2:
        raise ValueError("need at least two reachable levels")
    levels = [r.level for r in ok]
    costs = [r.cost_mekl for r in ok]
    ipeak = int(np.argmax(costs))
    peak = ok[ipeak]
    onset = ok[ipeak + 1].level if ipeak + 1 < len(ok) else peak.level + 1
    eps_state = peak.state_error if peak.state_error else None
    lc = critical_level(eps_state) if eps_state and 0 < eps_state < 0.5 else math.nan

    gentle: tuple[int, ...] = ()
    ratio = math.nan
    rising_l, rising_c = levels[: ipeak + 1], costs[: ipeak + 1]
    if len(rising_l) >= 2 * min_len:
        split, s1, s2 = two_segment_fit(rising_l, rising_c, min_len)
        ratio = s2 / s1 if s1 > 0 else math.nan
        if s1 > 0 and s2 < gentle_ratio * s1:
            gentle = tuple(l for l in rising_l if l >= split)

    tail = [(r.level, r.cost_mekl) for r in ok[ipeak + 1:] if r.cost_mekl >= 1.0]
    if len(tail) >= 2:
        slope = float(np.polyfit([t[0] for t in tail], [math.log2(t[1]) for t in tail], 1)[0])
    else:
        slope = math.nan
    return SweepShape(peak.level, onset, lc, gentle, ratio, tuple(t[0] for t in tail), slope)
