# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled candidate scans for the cost engine.

Both functions visit every input combination in a fixed order and keep, per
error bin, the cheapest candidate (first one wins on exact ties).  The pure
numpy twin in ``_kernels_py`` follows the same contract.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport log10, floor, INFINITY

cnp.import_array()


cdef inline Py_ssize_t _bin(double err, double hi_log, double density, Py_ssize_t n_bins) noexcept nogil:
    cdef double x
    cdef Py_ssize_t b
    if err <= 0.0:
        return n_bins - 1
    x = floor((hi_log - log10(err)) * density)
    if x < 0:
        return 0
    if x >= n_bins - 1:
        return n_bins - 1
    b = <Py_ssize_t>x
    return b


def mek_candidates(
    const double[:, ::1] p0,
    const double[:, ::1] p1,
    const double[:, ::1] e0,
    const double[:, ::1] e1,
    const double[:, ::1] base,
    const double[::1] r_eta,
    const double[::1] r_cost,
    double hi_log,
    double density,
    Py_ssize_t n_bins,
):
    """Scan (i, j, k) round inputs; returns per-bin (cost, flat index, error, p_suc)."""
    cdef Py_ssize_t ni = p0.shape[0], nj = p0.shape[1], nk = r_eta.shape[0]
    cdef Py_ssize_t i, j, k, b
    cdef double eta, p, e, d, c
    best_cost_a = np.full(n_bins, np.inf)
    best_idx_a = np.full(n_bins, -1, dtype=np.int64)
    best_err_a = np.zeros(n_bins)
    best_p_a = np.zeros(n_bins)
    cdef double[::1] best_cost = best_cost_a
    cdef long long[::1] best_idx = best_idx_a
    cdef double[::1] best_err = best_err_a
    cdef double[::1] best_p = best_p_a
    with nogil:
        for i in range(ni):
            for j in range(nj):
                for k in range(nk):
                    eta = r_eta[k]
                    p = (1.0 - eta) * p0[i, j] + eta * p1[i, j]
                    if p <= 0.0:
                        continue
                    e = (1.0 - eta) * e0[i, j] + eta * e1[i, j]
                    d = e / p
                    if d < 0.0:
                        d = 0.0
                    c = (base[i, j] + r_cost[k]) / (2.0 * p)
                    b = _bin(d, hi_log, density, n_bins)
                    if c < best_cost[b]:
                        best_cost[b] = c
                        best_idx[b] = (i * nj + j) * nk + k
                        best_err[b] = d
                        best_p[b] = p
    return best_cost_a, best_idx_a, best_err_a, best_p_a


def rotation_candidates(
    const double[::1] m_err,
    const double[::1] m_cost,
    const double[::1] r_eta,
    const double[::1] r_cost,
    double hi_log,
    double density,
    Py_ssize_t n_bins,
):
    """Scan (state, correction) pairs for injected rotations; per-bin cheapest."""
    cdef Py_ssize_t ni = m_err.shape[0], nk = r_eta.shape[0]
    cdef Py_ssize_t i, k, b
    cdef double eps, eta, err, c
    best_cost_a = np.full(n_bins, np.inf)
    best_idx_a = np.full(n_bins, -1, dtype=np.int64)
    best_err_a = np.zeros(n_bins)
    cdef double[::1] best_cost = best_cost_a
    cdef long long[::1] best_idx = best_idx_a
    cdef double[::1] best_err = best_err_a
    with nogil:
        for i in range(ni):
            eps = m_err[i]
            for k in range(nk):
                eta = r_eta[k]
                err = 0.5 * eps + 0.5 * (eps * (1.0 - eta) + (1.0 - eps) * eta)
                c = m_cost[i] + 0.5 * r_cost[k]
                b = _bin(err, hi_log, density, n_bins)
                if c < best_cost[b]:
                    best_cost[b] = c
                    best_idx[b] = i * nk + k
                    best_err[b] = err
    return best_cost_a, best_idx_a, best_err_a
