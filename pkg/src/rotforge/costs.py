"""Expected raw-state cost of magic states and rotations, level by level.

Costs count raw non-Clifford states consumed, in expectation.  For every
level the engine keeps a Pareto frontier of (error, cost) entries for the
magic state M_l and for the injected rotation R_l; each entry carries the
recipe tree that produced it.

Level 3 starts from raw states and is closed under MEK_3 and the level-3
protocol plugins.  Level l >= 4 is seeded with raw states, diluted level
l-1 states and the free |+> substitute, then closed under MEK_l rounds
whose pivot is an R_{l-1} from the previous level.
"""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__, kernels
from .dilution import dilute, plus_substitute_error
from .noise import NoiseSpec, RoundTable, round_table

log = logging.getLogger(__name__)

KINDS = ("M", "R")


# ---------------------------------------------------------------------------
# Entries and recipes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Recipe:
    """How an entry is made.

    ``variant`` is one of raw, plus, clifford, level3, mek, dilute, inject.
    ``inputs`` are the consumed entries (for mek: state, level-3 state,
    pivot rotation; for inject: state, correction rotation).
    """

    variant: str
    inputs: tuple["CostEntry", ...] = ()
    params: tuple[tuple[str, object], ...] = ()

    def param(self, key: str, default=None):
        return dict(self.params).get(key, default)


@dataclass(frozen=True, eq=False)
class CostEntry:
    kind: str  # "M" magic state, "R" rotation
    level: int
    error: float
    cost: float
    recipe: Recipe

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be M or R, got {self.kind!r}")
        if self.cost < 0 or not math.isfinite(self.cost):
            raise ValueError(f"bad cost {self.cost}")
        if not 0 <= self.error <= 1:
            raise ValueError(f"bad error {self.error}")

    @cached_property
    def n_nodes(self) -> int:
        return 1 + sum(e.n_nodes for e in self.recipe.inputs)

    def __repr__(self) -> str:
        return f"CostEntry({self.kind}{self.level}, err={self.error:.3e}, cost={self.cost:.6g}, {self.recipe.variant})"


def raw_entry(level: int, eps_raw: float) -> CostEntry:
    return CostEntry("M", level, eps_raw, 1.0, Recipe("raw"))


def clifford_rotation() -> CostEntry:
    """R_2 is Clifford: free and perfect."""
    return CostEntry("R", 2, 0.0, 0.0, Recipe("clifford"))


def plus_entry(level: int) -> CostEntry:
    return CostEntry("M", level, plus_substitute_error(level), 0.0, Recipe("plus"))


def dilute_entry(source: CostEntry) -> CostEntry:
    if source.kind != "M":
        raise ValueError("can only dilute magic states")
    res = dilute(source.level, source.error)
    return CostEntry("M", source.level + 1, res.eps_out, res.lam * source.cost, Recipe("dilute", (source,), (("lam", res.lam),)))


# ---------------------------------------------------------------------------
# Level-3 protocol plugins
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Level3Protocol:
    """n_in noisy level-3 states -> n_out better ones; polynomials in ascending powers."""

    id: str
    n_in: int
    n_out: int
    delta_poly: tuple[float, ...]
    psuc_poly: tuple[float, ...]

    def __post_init__(self):
        if self.n_in < 1 or self.n_out < 1:
            raise ValueError("protocol needs positive input and output counts")
        object.__setattr__(self, "delta_poly", tuple(float(c) for c in self.delta_poly))
        object.__setattr__(self, "psuc_poly", tuple(float(c) for c in self.psuc_poly))
        if self.delta(0.0) != 0.0 or self.p_suc(0.0) != 1.0:
            raise ValueError(f"protocol {self.id}: need delta(0)=0 and p_suc(0)=1")

    def delta(self, eps: float) -> float:
        return float(np.polynomial.polynomial.polyval(eps, self.delta_poly))

    def p_suc(self, eps: float) -> float:
        return float(np.polynomial.polynomial.polyval(eps, self.psuc_poly))

    def to_json(self) -> dict:
        return {"id": self.id, "n_in": self.n_in, "n_out": self.n_out,
                "delta_poly": list(self.delta_poly), "psuc_poly": list(self.psuc_poly)}


def load_protocols(path: str | Path | None = None) -> tuple[Level3Protocol, ...]:
    """Read plugin definitions; the packaged defaults when ``path`` is None."""
    if path is None:
        text = resources.files("rotforge.data").joinpath("level3_protocols.json").read_text()
    else:
        text = Path(path).read_text()
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("protocol file must hold a JSON list")
    protos = tuple(Level3Protocol(**d) for d in data)
    ids = [p.id for p in protos]
    if len(set(ids)) != len(ids) or "mek3" in ids:
        raise ValueError("protocol ids must be unique and not 'mek3'")
    return protos


# ---------------------------------------------------------------------------
# Single-step formulas
# ---------------------------------------------------------------------------


def injection_error(eps_l: float, eta_prev: float) -> float:
    """Error of R_l injected from a state of error eps_l with an R_{l-1} correction of error eta_prev."""
    for v in (eps_l, eta_prev):
        if not 0 <= v < 0.5:
            raise ValueError("rates must lie in [0, 1/2)")
    return 0.5 * eps_l + 0.5 * (eps_l * (1 - eta_prev) + (1 - eps_l) * eta_prev)


def rotation_cost(level: int, state: CostEntry, correction: CostEntry) -> CostEntry:
    """R_l from one M_l and, half the time, an R_{l-1} correction."""
    if level == 2:
        return clifford_rotation()
    if state.kind != "M" or state.level != level:
        raise ValueError(f"need an M{level} entry, got {state!r}")
    if correction.kind != "R" or correction.level != level - 1:
        raise ValueError(f"need an R{level - 1} entry, got {correction!r}")
    err = injection_error(state.error, correction.error)
    return CostEntry("R", level, err, state.cost + 0.5 * correction.cost, Recipe("inject", (state, correction)))


def mekl_round_cost(level: int, state: CostEntry, m3: CostEntry, pivot: CostEntry) -> CostEntry:
    """One MEK_l round: two M_l inputs, eight R3 gates from M3 states, one R_{l-1} pivot."""
    if state.kind != "M" or state.level != level:
        raise ValueError(f"need an M{level} input, got {state!r}")
    if m3.kind != "M" or m3.level != 3:
        raise ValueError(f"need an M3 input, got {m3!r}")
    if pivot.kind != "R" or pivot.level != level - 1:
        raise ValueError(f"need an R{level - 1} pivot, got {pivot!r}")
    out = round_table(level).evaluate(NoiseSpec(m3.error, state.error, pivot.error))
    if out.p_suc <= 0:
        raise ValueError("round never succeeds")
    cost = (2 * state.cost + 8 * m3.cost + pivot.cost) / (2 * out.p_suc)
    return CostEntry("M", level, out.delta, cost, Recipe("mek", (state, m3, pivot), (("p_suc", out.p_suc),)))


def level3_protocol_entry(proto: Level3Protocol, source: CostEntry) -> CostEntry | None:
    eps = source.error
    p = proto.p_suc(eps)
    d = proto.delta(eps)
    if p <= 0 or not 0 <= d < 0.5:
        return None
    factor = proto.n_in / (proto.n_out * p)
    return CostEntry("M", 3, d, factor * source.cost, Recipe("level3", (source,), (("protocol", proto.id), ("factor", factor))))


# ---------------------------------------------------------------------------
# Frontiers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ErrorGrid:
    """Logarithmic error bins, ``density`` per decade from ``ceiling`` down to ``floor``.

    Errors below the floor share the last bin.
    """

    density: int = 20
    floor: float = 1e-25
    ceiling: float = 0.5

    def __post_init__(self):
        if self.density < 1 or not 0 < self.floor < self.ceiling <= 1:
            raise ValueError("invalid error grid")

    @property
    def hi_log(self) -> float:
        return math.log10(self.ceiling)

    @property
    def n_bins(self) -> int:
        return int(math.ceil((self.hi_log - math.log10(self.floor)) * self.density)) + 1

    def bin(self, err: float) -> int:
        if err <= 0:
            return self.n_bins - 1
        x = math.floor((self.hi_log - math.log10(err)) * self.density)
        return int(min(max(x, 0), self.n_bins - 1))


def pareto(entries: Iterable[CostEntry]) -> list[CostEntry]:
    """Entries not dominated by a cheaper-and-more-accurate one, sorted by error.

    Ties go to the smaller recipe tree, then to the earlier entry.
    """
    indexed = list(enumerate(entries))
    indexed.sort(key=lambda t: (t[1].error, t[1].cost, t[1].n_nodes, t[0]))
    out: list[CostEntry] = []
    best = math.inf
    for _, e in indexed:
        if e.cost < best:
            out.append(e)
            best = e.cost
    return out


def thin(entries: Sequence[CostEntry], grid: ErrorGrid) -> list[CostEntry]:
    """Keep the cheapest entry per error bin (earlier entries win ties), then the frontier."""
    per_bin: dict[int, CostEntry] = {}
    for e in entries:
        b = grid.bin(e.error)
        cur = per_bin.get(b)
        if cur is None or (e.cost, e.n_nodes) < (cur.cost, cur.n_nodes):
            per_bin[b] = e
    return pareto(per_bin.values())


def cheapest(frontier: Sequence[CostEntry], target: float) -> CostEntry:
    ok = [e for e in frontier if e.error <= target]
    if not ok:
        raise ValueError(f"target {target:g} unreachable")
    return min(ok, key=lambda e: (e.cost, e.n_nodes))


# ---------------------------------------------------------------------------
# Scans
# ---------------------------------------------------------------------------


def _round_weights(table: RoundTable, eps_l: np.ndarray, eps3: np.ndarray):
    """Per (state i, R3 source j) acceptance and error, split by pivot error y."""
    k = np.arange(table.n_sites + 1)
    e3 = eps3[:, None]
    w3 = e3**k * (1 - e3) ** (table.n_sites - k)
    m = np.arange(3)
    el = eps_l[:, None]
    wl = el**m * (1 - el) ** (2 - m)
    acc = np.einsum("im,jk,kmy->yij", wl, w3, table.accept)
    err = np.einsum("im,jk,kmy->yij", wl, w3, table.error)
    return [np.ascontiguousarray(a) for a in (acc[0], acc[1], err[0], err[1])]


def _threads(threads: int | None) -> int:
    import os

    if threads is None:
        threads = int(os.environ.get("ROTFORGE_THREADS", "1") or 1)
    return max(1, threads)


def _scan_mek(p0, p1, e0, e1, base, r_eta, r_cost, grid: ErrorGrid, threads: int):
    ni = p0.shape[0]
    args = (grid.hi_log, float(grid.density), grid.n_bins)
    if threads <= 1 or ni < 2 * threads:
        return kernels.mek_candidates(p0, p1, e0, e1, base, r_eta, r_cost, *args)
    bounds = np.linspace(0, ni, threads + 1).astype(int)
    chunks = [(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]

    def run(ab):
        a, b = ab
        return kernels.mek_candidates(
            np.ascontiguousarray(p0[a:b]), np.ascontiguousarray(p1[a:b]),
            np.ascontiguousarray(e0[a:b]), np.ascontiguousarray(e1[a:b]),
            np.ascontiguousarray(base[a:b]), r_eta, r_cost, *args,
        )

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(run, chunks))
    nj, nk = p0.shape[1], r_eta.shape[0]
    cost = np.full(grid.n_bins, np.inf)
    idx = np.full(grid.n_bins, -1, dtype=np.int64)
    err = np.zeros(grid.n_bins)
    psuc = np.zeros(grid.n_bins)
    # merge in chunk order so the result matches the serial scan
    for (a, _), (c, ix, d, p) in zip(chunks, results):
        better = c < cost
        cost[better] = c[better]
        idx[better] = ix[better] + a * nj * nk
        err[better] = d[better]
        psuc[better] = p[better]
    return cost, idx, err, psuc


def mek_closure_candidates(
    level: int,
    states: Sequence[CostEntry],
    m3s: Sequence[CostEntry],
    pivots: Sequence[CostEntry],
    grid: ErrorGrid,
    threads: int = 1,
) -> list[CostEntry]:
    """Cheapest MEK_l output per error bin over all input combinations."""
    states = [s for s in states if s.error < 0.5 and s.recipe.variant != "plus"]
    m3s = [s for s in m3s if s.error < 0.5]
    pivots = [r for r in pivots if r.error < 0.5]
    if not (states and m3s and pivots):
        return []
    table = round_table(level)
    if not table.is_diagonal:
        raise RuntimeError("round output is not diagonal in the magic basis")
    eps_l = np.array([s.error for s in states])
    eps3 = np.array([s.error for s in m3s])
    p0, p1, e0, e1 = _round_weights(table, eps_l, eps3)
    base = np.ascontiguousarray(2 * np.array([s.cost for s in states])[:, None] + 8 * np.array([s.cost for s in m3s])[None, :])
    r_eta = np.array([r.error for r in pivots])
    r_cost = np.array([r.cost for r in pivots])
    cost, idx, err, psuc = _scan_mek(p0, p1, e0, e1, base, r_eta, r_cost, grid, threads)
    nj, nk = len(m3s), len(pivots)
    out = []
    for b in np.flatnonzero(np.isfinite(cost)):
        flat = int(idx[b])
        i, rem = divmod(flat, nj * nk)
        j, k = divmod(rem, nk)
        out.append(
            CostEntry("M", level, float(min(err[b], 1.0)), float(cost[b]),
                      Recipe("mek", (states[i], m3s[j], pivots[k]), (("p_suc", float(psuc[b])),)))
        )
    return out


def rotation_frontier(level: int, states: Sequence[CostEntry], corrections: Sequence[CostEntry], grid: ErrorGrid) -> list[CostEntry]:
    states = [s for s in states if s.error < 0.5]
    corrections = [r for r in corrections if r.error < 0.5]
    if level == 2:
        return [clifford_rotation()]
    if not (states and corrections):
        return []
    m_err = np.array([s.error for s in states])
    m_cost = np.array([s.cost for s in states])
    r_eta = np.array([r.error for r in corrections])
    r_cost = np.array([r.cost for r in corrections])
    cost, idx, err = kernels.rotation_candidates(m_err, m_cost, r_eta, r_cost, grid.hi_log, float(grid.density), grid.n_bins)
    nk = len(corrections)
    out = []
    for b in np.flatnonzero(np.isfinite(cost)):
        i, k = divmod(int(idx[b]), nk)
        out.append(CostEntry("R", level, float(err[b]), float(cost[b]), Recipe("inject", (states[i], corrections[k]))))
    return thin(out, grid)


# ---------------------------------------------------------------------------
# The table
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class CostTable:
    eps_raw: float
    l_max: int
    grid: ErrorGrid
    protocols: tuple[Level3Protocol, ...]
    frontiers: dict[tuple[str, int], list[CostEntry]] = field(default_factory=dict)
    synthesis: dict = field(default_factory=dict)

    def frontier(self, kind: str, level: int) -> list[CostEntry]:
        if kind == "R" and level == 2:
            return [clifford_rotation()]
        try:
            return self.frontiers[(kind, level)]
        except KeyError:
            raise KeyError(f"table has no {kind}{level} frontier (built to level {self.l_max})") from None

    def cheapest(self, kind: str, level: int, target: float) -> CostEntry:
        return cheapest(self.frontier(kind, level), target)

    # -- JSON -------------------------------------------------------------

    def to_json(self) -> dict:
        ids: dict[int, int] = {}
        rows: list[dict] = []

        def visit(e: CostEntry) -> int:
            key = id(e)
            if key in ids:
                return ids[key]
            inputs = [visit(x) for x in e.recipe.inputs]
            ids[key] = len(rows)
            rows.append({
                "id": ids[key], "kind": e.kind, "level": e.level, "error": e.error, "cost": e.cost,
                "recipe": {"variant": e.recipe.variant, "inputs": inputs, "params": dict(e.recipe.params)},
            })
            return ids[key]

        fronts = {}
        for (kind, level), entries in sorted(self.frontiers.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            fronts[f"{kind}{level}"] = [visit(e) for e in entries]
        return {
            "format": "rotforge-cost-table",
            "version": __version__,
            "config": {
                "eps_raw": self.eps_raw, "l_max": self.l_max,
                "grid": {"density": self.grid.density, "floor": self.grid.floor, "ceiling": self.grid.ceiling},
                "protocols": [p.to_json() for p in self.protocols],
            },
            "entries": rows,
            "frontiers": fronts,
            "synthesis": self.synthesis,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CostTable":
        if data.get("format") != "rotforge-cost-table":
            raise ValueError("not a cost-table export")
        cfg = data["config"]
        built: list[CostEntry] = []
        for row in data["entries"]:
            if row["id"] != len(built):
                raise ValueError("entries must be listed in id order")
            r = row["recipe"]
            if any(i >= row["id"] for i in r["inputs"]):
                raise ValueError("recipe inputs must precede their entry")
            recipe = Recipe(r["variant"], tuple(built[i] for i in r["inputs"]), tuple(r["params"].items()))
            built.append(CostEntry(row["kind"], row["level"], row["error"], row["cost"], recipe))
        frontiers = {}
        for key, idxs in data["frontiers"].items():
            frontiers[(key[0], int(key[1:]))] = [built[i] for i in idxs]
        return cls(
            cfg["eps_raw"], cfg["l_max"], ErrorGrid(**cfg["grid"]),
            tuple(Level3Protocol(**p) for p in cfg["protocols"]), frontiers, data.get("synthesis", {}),
        )

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1))

    @classmethod
    def load(cls, path: str | Path) -> "CostTable":
        return cls.from_json(json.loads(Path(path).read_text()))


def _close(seeds, step, grid: ErrorGrid, what: str, max_iter: int = 100) -> list[CostEntry]:
    """Iterate ``frontier -> thin(frontier + step(frontier))`` until nothing changes."""
    front = thin(seeds, grid)
    for it in range(max_iter):
        new = thin(front + step(front), grid)
        if [id(e) for e in new] == [id(e) for e in front]:
            log.debug("%s closed after %d iterations, %d points", what, it + 1, len(front))
            return front
        front = new
    log.warning("%s did not close in %d iterations", what, max_iter)
    return front


def level3_frontier(
    eps_raw: float,
    protocols: Sequence[Level3Protocol] | None = None,
    grid: ErrorGrid = ErrorGrid(),
    use_mek3: bool = True,
    threads: int | None = None,
) -> list[CostEntry]:
    """Frontier of level-3 states from raw inputs, MEK_3 rounds and plugin protocols."""
    if not 0 < eps_raw < 0.5:
        raise ValueError("eps_raw must lie in (0, 1/2)")
    protocols = load_protocols() if protocols is None else tuple(protocols)
    nthreads = _threads(threads)
    r2 = [clifford_rotation()]

    def step(front):
        out = []
        if use_mek3:
            out += mek_closure_candidates(3, front, front, r2, grid, nthreads)
        for proto in protocols:
            for e in front:
                cand = level3_protocol_entry(proto, e)
                if cand is not None:
                    out.append(cand)
        return out

    return _close([raw_entry(3, eps_raw)], step, grid, "level 3")


def level3_base(eps_raw: float, target: float, protocols: Sequence[Level3Protocol] | None = None,
                grid: ErrorGrid = ErrorGrid(), use_mek3: bool = True) -> CostEntry:
    """Cheapest level-3 state with error <= target."""
    return cheapest(level3_frontier(eps_raw, protocols, grid, use_mek3), target)


def build_cost_table(
    l_max: int,
    eps_raw: float,
    grid: ErrorGrid = ErrorGrid(),
    protocols: Sequence[Level3Protocol] | None = None,
    threads: int | None = None,
) -> CostTable:
    """Frontiers for M_l and R_l at every level 3..l_max."""
    if l_max < 3:
        raise ValueError("l_max must be >= 3")
    protocols = load_protocols() if protocols is None else tuple(protocols)
    nthreads = _threads(threads)
    table = CostTable(eps_raw, l_max, grid, protocols)
    m3 = level3_frontier(eps_raw, protocols, grid, threads=nthreads)
    table.frontiers[("M", 3)] = m3
    table.frontiers[("R", 3)] = rotation_frontier(3, m3, [clifford_rotation()], grid)
    for level in range(4, l_max + 1):
        prev_m = table.frontiers[("M", level - 1)]
        pivots = table.frontiers[("R", level - 1)]
        seeds = [raw_entry(level, eps_raw), plus_entry(level)]
        seeds += [dilute_entry(e) for e in prev_m if e.recipe.variant != "plus"]

        def step(front, level=level, pivots=pivots):
            return mek_closure_candidates(level, front, m3, pivots, grid, nthreads)

        front = _close(seeds, step, grid, f"level {level}")
        table.frontiers[("M", level)] = front
        table.frontiers[("R", level)] = rotation_frontier(level, front, pivots, grid)
        log.info("level %d: %d state points, %d rotation points", level, len(front), len(table.frontiers[("R", level)]))
    return table


def cheapest_rotation(table: CostTable, level: int, target: float) -> CostEntry:
    if level == 2:
        return clifford_rotation()
    return table.cheapest("R", level, target)


# ---------------------------------------------------------------------------
# Recipe analysis
# ---------------------------------------------------------------------------


def expected_raw_inputs(entry: CostEntry) -> dict[int, float]:
    """Expected raw states consumed per level; the values sum to ``entry.cost``."""
    memo: dict[int, dict[int, float]] = {}

    def add(acc, part, w):
        for k, v in part.items():
            acc[k] = acc.get(k, 0.0) + w * v

    def walk(e: CostEntry) -> dict[int, float]:
        if id(e) in memo:
            return memo[id(e)]
        r = e.recipe
        out: dict[int, float] = {}
        if r.variant == "raw":
            out[e.level] = 1.0
        elif r.variant in ("plus", "clifford"):
            pass
        elif r.variant == "dilute":
            add(out, walk(r.inputs[0]), r.param("lam"))
        elif r.variant == "inject":
            add(out, walk(r.inputs[0]), 1.0)
            add(out, walk(r.inputs[1]), 0.5)
        elif r.variant == "mek":
            p = r.param("p_suc")
            add(out, walk(r.inputs[0]), 2.0 / (2 * p))
            add(out, walk(r.inputs[1]), 8.0 / (2 * p))
            add(out, walk(r.inputs[2]), 1.0 / (2 * p))
        elif r.variant == "level3":
            add(out, walk(r.inputs[0]), r.param("factor"))
        else:
            raise ValueError(f"unknown recipe variant {r.variant!r}")
        memo[id(e)] = out
        return out

    return walk(entry)


def round_cocktail(entry: CostEntry) -> dict[int, float]:
    """Raw inputs per MEK round (before dividing by the 2 P_suc outputs)."""
    if entry.recipe.variant != "mek":
        raise ValueError("not a MEK round")
    scale = 2 * entry.recipe.param("p_suc")
    return {k: v * scale for k, v in expected_raw_inputs(entry).items()}


def raw_rotation(level: int, eps_raw: float) -> CostEntry:
    """R_level built entirely from raw states by repeated injection."""
    r = clifford_rotation()
    for l in range(3, level + 1):
        r = rotation_cost(l, raw_entry(l, eps_raw), r)
    return r


def _contains(entry: CostEntry, variants: set[str], follow_state_only: bool) -> bool:
    r = entry.recipe
    if r.variant in variants:
        return True
    if r.variant == "mek" and follow_state_only:
        return _contains(r.inputs[0], variants, follow_state_only)
    return any(_contains(x, variants, follow_state_only) for x in r.inputs)


def regime(rotation: CostEntry) -> str:
    """distill / mixed / dilute label for the state used by an injected rotation.

    dilute: the state is a diluted (or |+>) state.  mixed: a MEK round whose
    state inputs were diluted somewhere upstream.  distill: otherwise.
    """
    if rotation.recipe.variant == "clifford":
        return "distill"
    state = rotation.recipe.inputs[0] if rotation.kind == "R" else rotation
    v = state.recipe.variant
    if v in ("dilute", "plus"):
        return "dilute"
    if v == "mek" and _contains(state.recipe.inputs[0], {"dilute", "plus"}, follow_state_only=True):
        return "mixed"
    return "distill"
