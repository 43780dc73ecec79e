import numpy as np
import pytest

from rotforge import _kernels_py, kernels

BACKENDS = kernels.backends()
compiled = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled kernels not built")


def _mek_inputs(rng, ni=7, nj=9, nk=5):
    p0 = rng.uniform(0.0, 1.0, (ni, nj))
    p0[0, 0] = 0.0  # rejected combination
    p1 = rng.uniform(0.0, 1.0, (ni, nj))
    e0 = rng.uniform(0.0, 1e-3, (ni, nj)) * p0
    e1 = rng.uniform(0.0, 1e-3, (ni, nj)) * p1
    base = rng.uniform(1.0, 50.0, (ni, nj))
    r_eta = np.sort(rng.uniform(0.0, 1e-3, nk))
    r_cost = rng.uniform(0.0, 20.0, nk)
    return p0, p1, e0, e1, base, r_eta, r_cost, 0.0, 4.0, 60


def _rot_inputs(rng, ni=11, nk=6):
    m_err = np.sort(rng.uniform(0.0, 1e-2, ni))
    m_cost = rng.uniform(1.0, 100.0, ni)
    r_eta = rng.uniform(0.0, 1e-2, nk)
    r_cost = rng.uniform(0.0, 30.0, nk)
    return m_err, m_cost, r_eta, r_cost, 0.0, 4.0, 40


def test_active_backend_is_known():
    assert kernels.BACKEND in BACKENDS


def test_python_mek_keeps_cheapest_per_bin():
    rng = np.random.default_rng(1)
    args = _mek_inputs(rng)
    cost, idx, err, p = _kernels_py.mek_candidates(*args)
    p0, p1, e0, e1, base, r_eta, r_cost, hi, dens, nb = args
    nj, nk = p0.shape[1], len(r_eta)
    for b in np.flatnonzero(idx >= 0):
        i, rest = divmod(int(idx[b]), nj * nk)
        j, k = divmod(rest, nk)
        pp = (1 - r_eta[k]) * p0[i, j] + r_eta[k] * p1[i, j]
        assert p[b] == pytest.approx(pp)
        assert cost[b] == pytest.approx((base[i, j] + r_cost[k]) / (2 * pp))
        assert err[b] == pytest.approx(((1 - r_eta[k]) * e0[i, j] + r_eta[k] * e1[i, j]) / pp)
    # brute-force minimum per bin
    brute = {}
    for i in range(p0.shape[0]):
        for j in range(nj):
            for k in range(nk):
                pp = (1 - r_eta[k]) * p0[i, j] + r_eta[k] * p1[i, j]
                if pp <= 0:
                    continue
                d = ((1 - r_eta[k]) * e0[i, j] + r_eta[k] * e1[i, j]) / pp
                c = (base[i, j] + r_cost[k]) / (2 * pp)
                b = nb - 1 if d <= 0 else int(min(max(np.floor((hi - np.log10(d)) * dens), 0), nb - 1))
                brute[b] = min(brute.get(b, np.inf), c)
    assert set(brute) == set(np.flatnonzero(idx >= 0))
    for b, c in brute.items():
        assert cost[b] == pytest.approx(c, rel=1e-14)


@compiled
@pytest.mark.parametrize("seed", range(5))
def test_mek_backends_agree(seed):
    args = _mek_inputs(np.random.default_rng(seed))
    a = BACKENDS["python"].mek_candidates(*args)
    b = BACKENDS["cython"].mek_candidates(*args)
    for x, y in zip(a, b):
        np.testing.assert_array_equal(np.asarray(x), np.asarray(y))


@compiled
@pytest.mark.parametrize("seed", range(5))
def test_rotation_backends_agree(seed):
    args = _rot_inputs(np.random.default_rng(seed))
    a = BACKENDS["python"].rotation_candidates(*args)
    b = BACKENDS["cython"].rotation_candidates(*args)
    for x, y in zip(a, b):
        np.testing.assert_array_equal(np.asarray(x), np.asarray(y))


@compiled
def test_exact_ties_pick_first_index():
    ni, nj, nk = 2, 2, 2
    ones = np.ones((ni, nj))
    args = (ones, ones, ones * 1e-4, ones * 1e-4, ones, np.zeros(nk), np.zeros(nk), 0.0, 4.0, 30)
    for mod in BACKENDS.values():
        cost, idx, _, _ = mod.mek_candidates(*args)
        assert list(idx[idx >= 0]) == [0]
