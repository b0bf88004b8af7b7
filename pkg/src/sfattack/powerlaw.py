"""Discrete power-law tail fitting, bootstrap goodness of fit and likelihood ratios.

The fitting follows the usual recipe for discrete heavy-tailed data: for each
candidate lower cutoff ``x_min`` the exponent is the maximum-likelihood value
under the Hurwitz-zeta-normalised law ``p(k) = k^-alpha / zeta(alpha, x_min)``,
and the cutoff retained is the one whose fitted tail has the smallest
Kolmogorov-Smirnov distance to the data.
"""
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import optimize, special

from . import _plkernels
from .errors import AlternativeFitFailed, DegenerateSequence, TailTooSmall

ALTERNATIVES = ("exponential", "lognormal")


@dataclass(frozen=True)
class TailFit:
    alpha: float
    x_min: int
    n_tail: int
    ks: float
    n: int

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class GofResult:
    p_value: float
    bootstrap_reps: int
    failures: int = 0


@dataclass(frozen=True)
class LrResult:
    r: float
    p_r: float
    alternative: str
    loglik_ratio: float = 0.0


def positive_histogram(degrees):
    """Sorted distinct positive values and their counts."""
    x = np.asarray(degrees, dtype=np.int64).ravel()
    x = x[x > 0]
    return np.unique(x, return_counts=True)


def scan_tail(degrees):
    """Per-candidate table ``(x_min, alpha, ks, n_tail)`` over the x_min scan."""
    values, counts = positive_histogram(degrees)
    if values.size < 2:
        raise DegenerateSequence(f"need at least 2 distinct positive values, got {values.size}")
    alphas, ks, ntail = _plkernels.fit_scan(values, counts)
    return values[: alphas.size], alphas, ks, ntail


def _fit_from_histogram(values, counts):
    alphas, ks, ntail = _plkernels.fit_scan(values, counts)
    best = int(np.argmin(ks))  # first minimum -> smaller x_min wins ties
    if ntail[best] < 2:
        raise TailTooSmall("best tail has fewer than 2 observations")
    return TailFit(float(alphas[best]), int(values[best]), int(ntail[best]), float(ks[best]), int(counts.sum()))


def fit_tail(degrees):
    """Fit a discrete power law to the upper tail of ``degrees``.

    Zero entries are ignored (a power law has support k >= 1). Raises
    :class:`DegenerateSequence` when fewer than two distinct positive
    values are present.
    """
    values, counts = positive_histogram(degrees)
    if values.size < 2:
        raise DegenerateSequence(f"need at least 2 distinct positive values, got {values.size}")
    return _fit_from_histogram(values, counts)


def powerlaw_logpmf(k, alpha, x_min):
    k = np.asarray(k, dtype=np.float64)
    return -alpha * np.log(k) - math.log(_plkernels.zeta(alpha, x_min))


class PowerLawSampler:
    """Exact inverse-CDF sampler for the discrete power law on ``k >= x_min``.

    Values up to ``x_min + table_size - 1`` come from a cumulative table; the
    remaining mass (tiny for alpha > 2) is drawn from the continuous
    approximation ``floor((K - 1/2) (1 - r)^(-1/(alpha - 1)) + 1/2)`` anchored
    at the first value past the table.
    """

    _CAP = float(2 ** 53)

    def __init__(self, alpha, x_min, table_size=100_000):
        if alpha <= 1.0:
            raise ValueError("alpha must exceed 1")
        if x_min < 1:
            raise ValueError("x_min must be >= 1")
        self.alpha = float(alpha)
        self.x_min = int(x_min)
        k = np.arange(self.x_min, self.x_min + table_size, dtype=np.float64)
        pmf = k ** (-self.alpha) / _plkernels.zeta(self.alpha, self.x_min)
        self._cdf = np.cumsum(pmf)
        self._cover = float(self._cdf[-1])
        self._next = float(self.x_min + table_size)

    def sample(self, size, rng):
        u = rng.random(size)
        out = np.empty(size, dtype=np.int64)
        inside = u <= self._cover
        out[inside] = self.x_min + np.searchsorted(self._cdf, u[inside], side="left")
        if not inside.all():
            r = (u[~inside] - self._cover) / (1.0 - self._cover)
            r = np.minimum(r, 1.0 - 1e-16)
            x = np.floor((self._next - 0.5) * (1.0 - r) ** (-1.0 / (self.alpha - 1.0)) + 0.5)
            out[~inside] = np.minimum(x, self._CAP).astype(np.int64)
        return out


def sample_discrete_powerlaw(alpha, x_min, size, rng):
    return PowerLawSampler(alpha, x_min).sample(size, rng)


def _seed_sequence(rng):
    if isinstance(rng, np.random.Generator):
        return np.random.SeedSequence(int(rng.integers(2 ** 63)))
    if isinstance(rng, np.random.SeedSequence):
        return rng
    return np.random.SeedSequence(rng)


def gof_pvalue(degrees, fit, reps=100, rng=None):
    """Semi-parametric bootstrap p-value of the fitted tail.

    Every replicate keeps the sample size: the number of tail draws is
    ``Binomial(n, n_tail / n)``; tail values come from the fitted power law,
    the rest are resampled with replacement from the observed values below
    ``x_min``. The replicate is refitted from scratch (full x_min scan) and
    its KS distance compared with the observed one.

    Replicate ``i`` draws from ``SeedSequence(root).spawn(reps)[i]`` where the
    root is ``rng`` itself (int or SeedSequence) or, for a Generator, one
    63-bit integer drawn from it. A replicate that cannot be fitted never
    counts as exceeding the observed distance.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    # sorted so the resampled body does not depend on input order
    x = np.sort(np.asarray(degrees, dtype=np.int64).ravel())
    x = x[x > 0]
    n = x.size
    body = x[x < fit.x_min]
    sampler = PowerLawSampler(fit.alpha, fit.x_min)
    p_tail = fit.n_tail / n
    exceed = 0
    failures = 0
    for child in _seed_sequence(rng).spawn(reps):
        g = np.random.default_rng(child)
        nt = int(g.binomial(n, p_tail)) if body.size else n
        sample = np.concatenate((sampler.sample(nt, g), body[g.integers(body.size, size=n - nt)] if n > nt else body[:0]))
        values, counts = np.unique(sample, return_counts=True)
        if values.size < 2:
            failures += 1
            continue
        alphas, ks, _ = _plkernels.fit_scan(values, counts)
        if ks.min() >= fit.ks:
            exceed += 1
    return GofResult(exceed / reps, reps, failures)


# --- alternatives ---------------------------------------------------------

def _exponential_logpmf(tail, x_min):
    excess = float(tail.mean()) - x_min
    if not np.isfinite(excess):
        raise AlternativeFitFailed("non-finite mean")
    if excess <= 0.0:
        # point mass at x_min: the MLE limit lambda -> inf
        return np.zeros(tail.size)
    lam = math.log1p(1.0 / excess)
    return math.log(-math.expm1(-lam)) - lam * (tail - x_min)


def _lognormal_logpmf(tail, x_min):
    lo = np.log(tail)
    hi = np.log(tail + 1.0)
    base = math.log(x_min)

    def logpmf(params):
        mu, log_sigma = params
        sigma = math.exp(log_sigma)
        a = (lo - mu) / sigma
        b = (hi - mu) / sigma
        # P(a <= Z < b) via survival functions, stable in the upper tail
        mass = special.ndtr(-a) - special.ndtr(-b)
        norm = special.ndtr(-(base - mu) / sigma)
        return np.log(np.maximum(mass, 1e-300)) - math.log(max(norm, 1e-300))

    start = np.array([lo.mean(), math.log(max(lo.std(), 0.1))])
    res = optimize.minimize(lambda p: -logpmf(p).sum(), start, method="Nelder-Mead",
                            options={"xatol": 1e-8, "fatol": 1e-10, "maxiter": 4000})
    if not res.success or not np.isfinite(res.fun):
        raise AlternativeFitFailed(f"lognormal MLE did not converge: {res.message}")
    return logpmf(res.x)


def likelihood_ratio(degrees, fit, alternative="exponential"):
    """Normalised log-likelihood ratio of the power law against ``alternative``.

    ``r = R / (sigma * sqrt(n_tail))`` with ``R`` the summed pointwise log
    ratio and ``sigma`` its standard deviation; ``p_r = erfc(|r| / sqrt 2)``.
    Positive ``r`` favours the power law. Zero spread gives ``r = 0, p_r = 1``.
    """
    if alternative not in ALTERNATIVES:
        raise ValueError(f"unknown alternative {alternative!r}")
    x = np.sort(np.asarray(degrees, dtype=np.float64).ravel())
    tail = x[x >= fit.x_min]
    if tail.size < 2:
        raise TailTooSmall("likelihood ratio needs at least 2 tail observations")
    lp = powerlaw_logpmf(tail, fit.alpha, fit.x_min)
    if alternative == "exponential":
        la = _exponential_logpmf(tail, fit.x_min)
    else:
        la = _lognormal_logpmf(tail, fit.x_min)
    diff = lp - la
    total = float(diff.sum())
    sd = float(diff.std())
    if sd <= 1e-12 * max(1.0, abs(float(diff.mean()))):
        return LrResult(0.0, 1.0, alternative, total)
    r = total / (sd * math.sqrt(tail.size))
    return LrResult(r, float(special.erfc(abs(r) / math.sqrt(2.0))), alternative, total)
