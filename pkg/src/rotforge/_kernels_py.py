"""Numpy implementation of the cost-engine scans.

Same contract as the compiled module: every combination is visited in
(i, j, k) order and each error bin keeps its cheapest candidate, the first
one on exact ties.
"""

from __future__ import annotations

import numpy as np


def _bins(err: np.ndarray, hi_log: float, density: float, n_bins: int) -> np.ndarray:
    with np.errstate(divide="ignore"):
        x = np.floor((hi_log - np.log10(np.where(err > 0, err, 1.0))) * density)
    x = np.clip(x, 0, n_bins - 1)
    x[err <= 0] = n_bins - 1
    return x.astype(np.int64)


def _merge(best_cost, best_idx, extras, cost, idx, bins, values):
    """Fold a block of candidates into the running per-bin minimum."""
    order = np.lexsort((idx, cost, bins))
    b_sorted = bins[order]
    first = np.ones(len(order), dtype=bool)
    first[1:] = b_sorted[1:] != b_sorted[:-1]
    sel = order[first]
    b = bins[sel]
    better = cost[sel] < best_cost[b]
    sel, b = sel[better], b[better]
    best_cost[b] = cost[sel]
    best_idx[b] = idx[sel]
    for out, v in zip(extras, values):
        out[b] = v[sel]


def mek_candidates(p0, p1, e0, e1, base, r_eta, r_cost, hi_log, density, n_bins):
    ni, nj = p0.shape
    nk = r_eta.shape[0]
    best_cost = np.full(n_bins, np.inf)
    best_idx = np.full(n_bins, -1, dtype=np.int64)
    best_err = np.zeros(n_bins)
    best_p = np.zeros(n_bins)
    eta = r_eta[None, :]
    ks = np.arange(nk)[None, :]
    js = np.arange(nj)[:, None]
    for i in range(ni):
        p = (1.0 - eta) * p0[i][:, None] + eta * p1[i][:, None]
        e = (1.0 - eta) * e0[i][:, None] + eta * e1[i][:, None]
        ok = p > 0
        with np.errstate(divide="ignore", invalid="ignore"):
            d = np.maximum(e / p, 0.0)
            c = (base[i][:, None] + r_cost[None, :]) / (2.0 * p)
        idx = (i * nj + js) * nk + ks
        idx = np.broadcast_to(idx, p.shape)[ok]
        d, c, p = d[ok], c[ok], p[ok]
        if c.size == 0:
            continue
        _merge(best_cost, best_idx, (best_err, best_p), c, idx, _bins(d, hi_log, density, n_bins), (d, p))
    return best_cost, best_idx, best_err, best_p


def rotation_candidates(m_err, m_cost, r_eta, r_cost, hi_log, density, n_bins):
    ni, nk = m_err.shape[0], r_eta.shape[0]
    eps = m_err[:, None]
    eta = r_eta[None, :]
    err = (0.5 * eps + 0.5 * (eps * (1.0 - eta) + (1.0 - eps) * eta)).ravel()
    cost = (m_cost[:, None] + 0.5 * r_cost[None, :]).ravel()
    idx = np.arange(ni * nk, dtype=np.int64)
    best_cost = np.full(n_bins, np.inf)
    best_idx = np.full(n_bins, -1, dtype=np.int64)
    best_err = np.zeros(n_bins)
    if cost.size:
        _merge(best_cost, best_idx, (best_err,), cost, idx, _bins(err, hi_log, density, n_bins), (err,))
    return best_cost, best_idx, best_err
