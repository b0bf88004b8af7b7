"""Hot kernels for discrete power-law tail fitting.

Two implementations of every kernel live here: a loop-based one compiled with
numba and a vectorised numpy/scipy one. They use the same golden-section
schedule (fixed iteration count), so their results agree to rounding.
"""
import math

import numpy as np
from scipy import special

from ._accel import USE_NUMBA, njit

ALPHA_LO = 1.0 + 1e-6
ALPHA_HI = 8.0
ALPHA_TOL = 1e-7

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
GOLDEN_ITERS = int(math.ceil(math.log(ALPHA_TOL / (ALPHA_HI - ALPHA_LO)) / math.log(_INVPHI)))

# B_2k / (2k)! for k = 1..6 (Euler-Maclaurin remainder terms)
_EM = np.array([
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
])


@njit
def hurwitz_zeta(s, q):
    """zeta(s, q) = sum_{k>=0} (q + k)^-s for s > 1, q > 0.

    Direct summation until the shifted argument reaches 16, then the
    Euler-Maclaurin tail with six Bernoulli terms (relative error < 1e-12).
    """
    total = 0.0
    a = q
    while a < 16.0:
        total += a ** (-s)
        a += 1.0
    a_s = a ** (-s)
    total += a * a_s / (s - 1.0) + 0.5 * a_s
    t = s * a_s / a
    inv_a2 = 1.0 / (a * a)
    for k in range(6):
        total += _EM[k] * t
        t *= (s + 2 * k + 1.0) * (s + 2 * k + 2.0) * inv_a2
    return total


@njit
def _neg_ll(alpha, xmin, mean_log):
    return math.log(hurwitz_zeta(alpha, xmin)) + alpha * mean_log


@njit
def _golden_alpha(xmin, mean_log):
    a = ALPHA_LO
    b = ALPHA_HI
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = _neg_ll(c, xmin, mean_log)
    fd = _neg_ll(d, xmin, mean_log)
    for _ in range(GOLDEN_ITERS):
        if fc < fd:
            b = d
            d = c
            fd = fc
            c = b - _INVPHI * (b - a)
            fc = _neg_ll(c, xmin, mean_log)
        else:
            a = c
            c = d
            fc = fd
            d = a + _INVPHI * (b - a)
            fd = _neg_ll(d, xmin, mean_log)
    return 0.5 * (a + b)


@njit
def _fit_scan_jit(values, counts):
    m = values.size
    ntail = np.empty(m, np.int64)
    slog = np.empty(m)
    acc_n = 0
    acc_l = 0.0
    for i in range(m - 1, -1, -1):
        acc_n += counts[i]
        acc_l += counts[i] * math.log(values[i])
        ntail[i] = acc_n
        slog[i] = acc_l
    ncand = max(m - 1, 0)
    alphas = np.empty(ncand)
    ks = np.empty(ncand)
    for i in range(ncand):
        xmin = values[i]
        nt = ntail[i]
        alpha = _golden_alpha(xmin, slog[i] / nt)
        z0 = hurwitz_zeta(alpha, xmin)
        cum = 0
        d = 0.0
        for j in range(i, m):
            cum += counts[j]
            fe = cum / nt
            fm = 1.0 - hurwitz_zeta(alpha, values[j] + 1.0) / z0
            d = max(d, abs(fe - fm))
            if j + 1 < m and values[j + 1] > values[j] + 1.0:
                fm = 1.0 - hurwitz_zeta(alpha, values[j + 1]) / z0
                d = max(d, abs(fe - fm))
        alphas[i] = alpha
        ks[i] = d
    return alphas, ks, ntail[:ncand].copy()


def _fit_scan_np(values, counts):
    m = values.size
    ntail = np.cumsum(counts[::-1])[::-1]
    slog = np.cumsum((counts * np.log(values))[::-1])[::-1]
    ncand = max(m - 1, 0)
    if ncand == 0:
        return np.empty(0), np.empty(0), np.empty(0, np.int64)
    xmin = values[:ncand]
    nt = ntail[:ncand]
    mean_log = slog[:ncand] / nt

    def f(alpha):
        return np.log(special.zeta(alpha, xmin)) + alpha * mean_log

    a = np.full(ncand, ALPHA_LO)
    b = np.full(ncand, ALPHA_HI)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = f(c)
    fd = f(d)
    for _ in range(GOLDEN_ITERS):
        left = fc < fd
        # left: keep [a, d]; right: keep [c, b]
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = np.where(left, b - _INVPHI * (b - a), d)
        new_d = np.where(left, c, a + _INVPHI * (b - a))
        probe = np.where(left, new_c, new_d)
        fp = f(probe)
        fc, fd = np.where(left, fp, fd), np.where(left, fc, fp)
        c, d = new_c, new_d
    alphas = 0.5 * (a + b)

    z0 = special.zeta(alphas, xmin)
    idx = np.arange(m)
    in_tail = idx[None, :] >= idx[:ncand, None]
    cum = np.cumsum(counts)
    before = np.concatenate(([0], cum[:-1]))[:ncand]
    fe = (cum[None, :] - before[:, None]) / nt[:, None]
    with np.errstate(invalid="ignore"):
        fm = 1.0 - special.zeta(alphas[:, None], values[None, :] + 1.0) / z0[:, None]
    dev = np.where(in_tail, np.abs(fe - fm), 0.0)
    gap = np.zeros(m, dtype=bool)
    gap[:-1] = values[1:] > values[:-1] + 1.0
    nxt = np.concatenate((values[1:], [values[-1]]))
    with np.errstate(invalid="ignore"):
        fm2 = 1.0 - special.zeta(alphas[:, None], nxt[None, :]) / z0[:, None]
    dev2 = np.where(in_tail & gap[None, :], np.abs(fe - fm2), 0.0)
    ks = np.maximum(dev.max(axis=1), dev2.max(axis=1))
    return alphas, ks, nt.astype(np.int64)


def zeta(s, q):
    """Hurwitz zeta on the active backend (scalar)."""
    if USE_NUMBA:
        return hurwitz_zeta(float(s), float(q))
    return float(special.zeta(s, q))


def fit_scan(values, counts):
    """MLE exponent and KS distance for every admissible x_min.

    ``values`` are the sorted distinct positive observations, ``counts`` their
    multiplicities. Candidate ``i`` uses ``x_min = values[i]``; the last value
    is never a candidate since a single-valued tail has no finite MLE.
    Returns ``(alphas, ks, n_tail)`` arrays of length ``len(values) - 1``.
    """
    values = np.ascontiguousarray(values, dtype=np.float64)
    counts = np.ascontiguousarray(counts, dtype=np.int64)
    if USE_NUMBA:
        return _fit_scan_jit(values, counts)
    return _fit_scan_np(values, counts)


fit_scan_numba = _fit_scan_jit
fit_scan_numpy = _fit_scan_np
