"""Statistical machinery certifying sampler output and diagnosing bit quality.

Reference CDF, moment summaries, Kolmogorov-Smirnov and chi-square
goodness-of-fit gates, and the low-bits frequency scan. Production code uses
its own special functions (erfc-based normal CDF, regularized incomplete
gamma for chi-square tails); the test suite checks them against independent
oracles. Everything here is a pure function of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sources import UniformSource

_SQRT2 = math.sqrt(2.0)


# --- special functions -------------------------------------------------

def normal_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function."""
    if not math.isfinite(x):
        raise ValueError(f"normal_cdf requires finite x, got {x}")
    return 0.5 * math.erfc(-x / _SQRT2)


def normal_quantile(p: float) -> float:
    """Inverse of normal_cdf on (0, 1), by bisection on the monotone CDF."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile requires 0 < p < 1, got {p}")
    lo, hi = -40.0, 40.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if normal_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _gamma_series(s: float, x: float) -> float:
    # lower regularized incomplete gamma P(s, x), series form (x < s + 1)
    term = 1.0 / s
    total = term
    a = s
    for _ in range(500):
        a += 1.0
        term *= x / a
        total += term
        if abs(term) < abs(total) * 1e-16:
            break
    return total * math.exp(-x + s * math.log(x) - math.lgamma(s))

def _gamma_cf(s: float, x: float) -> float:
    # upper regularized incomplete gamma Q(s, x), continued fraction (x >= s + 1)
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 500):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h * math.exp(-x + s * math.log(x) - math.lgamma(s))


def regularized_gamma_q(s: float, x: float) -> float:
    """Upper regularized incomplete gamma Q(s, x) = Gamma(s, x)/Gamma(s)."""
    if s <= 0.0 or x < 0.0:
        raise ValueError(f"gamma_q requires s > 0 and x >= 0, got ({s}, {x})")
    if x == 0.0:
        return 1.0
    if x < s + 1.0:
        return 1.0 - _gamma_series(s, x)
    return _gamma_cf(s, x)


def chi_square_sf(statistic: float, dof: int) -> float:
    """Chi-square survival function P(X >= statistic)."""
    if dof < 1:
        raise ValueError(f"dof must be >= 1, got {dof}")
    if statistic < 0.0:
        raise ValueError(f"statistic must be >= 0, got {statistic}")
    return regularized_gamma_q(0.5 * dof, 0.5 * statistic)


def _beta_cf(a: float, b: float, x: float) -> float:
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 300):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h


def regularized_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    front = math.exp(
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


# --- reports ------------------------------------------------------------

@dataclass
class MomentSummary:
    """First four sample moments; variance is the unbiased (n-1) form."""

    n: int
    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float

    def to_json_dict(self) -> dict:
        return {
            "test": "moments",
            "n": self.n,
            "mean": self.mean,
            "variance": self.variance,
            "skewness": self.skewness,
            "excess_kurtosis": self.excess_kurtosis,
        }


@dataclass
class GofReport:
    """Chi-square goodness-of-fit outcome."""

    statistic: float
    dof: int
    p_value: float

    def passes(self, alpha: float) -> bool:
        return self.p_value > alpha

    def verdict_at(self, alphas) -> dict:
        return {a: self.passes(a) for a in alphas}

    def to_json_dict(self, test: str, alpha: float, n: int, seed=None) -> dict:
        return {
            "test": test,
            "statistic": self.statistic,
            "dof": self.dof,
            "p_value": self.p_value,
            "alpha": alpha,
            "verdict": "pass" if self.passes(alpha) else "fail",
            "n": n,
            "seed": seed,
        }


@dataclass
class KsReport:
    """Kolmogorov-Smirnov distance against a reference CDF."""

    d_statistic: float
    n: int

    def critical_value(self, alpha: float) -> float:
        # asymptotic two-sided critical value c(alpha)/sqrt(n)
        return math.sqrt(-0.5 * math.log(alpha / 2.0)) / math.sqrt(self.n)

    def passes(self, alpha: float) -> bool:
        return self.d_statistic < self.critical_value(alpha)

    def to_json_dict(self, alpha: float, seed=None) -> dict:
        return {
            "test": "ks",
            "statistic": self.d_statistic,
            "dof": None,
            "p_value": None,
            "critical_value": self.critical_value(alpha),
            "alpha": alpha,
            "verdict": "pass" if self.passes(alpha) else "fail",
            "n": self.n,
            "seed": seed,
        }


# --- operations ----------------------------------------------------------

def moments(samples) -> MomentSummary:
    """One-pass numerically stable mean/variance/skewness/excess kurtosis."""
    n = 0
    mean = 0.0
    m2 = 0.0
    m3 = 0.0
    m4 = 0.0
    for x in samples:
        n += 1
        delta = x - mean
        dn = delta / n
        dn2 = dn * dn
        term = delta * dn * (n - 1)
        mean += dn
        m4 += term * dn2 * (n * n - 3 * n + 3) + 6.0 * dn2 * m2 - 4.0 * dn * m3
        m3 += term * dn * (n - 2) - 3.0 * dn * m2
        m2 += term
    if n < 4:
        raise ValueError(f"moments requires n >= 4, got {n}")
    variance = m2 / (n - 1)
    if m2 == 0.0:
        skew = 0.0
        kurt = 0.0
    else:
        skew = math.sqrt(float(n)) * m3 / m2 ** 1.5
        kurt = n * m4 / (m2 * m2) - 3.0
    return MomentSummary(n=n, mean=mean, variance=variance,
                         skewness=skew, excess_kurtosis=kurt)


def ks_test(samples, cdf=normal_cdf) -> KsReport:
    """Two-sided KS statistic of a sample against a continuous CDF."""
    arr = np.asarray(samples, dtype=np.float64)
    n = arr.shape[0]
    if n < 1:
        raise ValueError("ks_test requires at least one sample")
    arr = np.sort(arr)
    cdf_vals = np.array([cdf(float(v)) for v in arr])
    i = np.arange(1, n + 1, dtype=np.float64)
    d_plus = np.max(i / n - cdf_vals)
    d_minus = np.max(cdf_vals - (i - 1.0) / n)
    return KsReport(d_statistic=float(max(d_plus, d_minus)), n=n)


def chi_square_gof(samples, bin_edges, cdf=normal_cdf) -> GofReport:
    """Chi-square test of a sample against a CDF over given interior edges.

    Bins are the len(edges)+1 intervals with open tails. Adjacent bins are
    merged left-to-right until every expected count is >= 5.
    """
    arr = np.asarray(samples, dtype=np.float64)
    n = arr.shape[0]
    edges = np.asarray(sorted(bin_edges), dtype=np.float64)
    if edges.shape[0] < 1:
        raise ValueError("need at least one bin edge")
    counts = np.bincount(np.searchsorted(edges, arr, side="right"),
                         minlength=edges.shape[0] + 1).astype(np.float64)
    probs = np.diff([0.0] + [cdf(float(e)) for e in edges] + [1.0])
    expected = probs * n

    merged_obs, merged_exp = [], []
    acc_o, acc_e = 0.0, 0.0
    for o, e in zip(counts, expected):
        acc_o += o
        acc_e += e
        if acc_e >= 5.0:
            merged_obs.append(acc_o)
            merged_exp.append(acc_e)
            acc_o, acc_e = 0.0, 0.0
    if acc_e > 0.0 or acc_o > 0.0:
        if merged_exp:
            merged_obs[-1] += acc_o
            merged_exp[-1] += acc_e
        else:
            merged_obs, merged_exp = [acc_o], [acc_e]
    if len(merged_exp) < 2:
        raise ValueError("fewer than 2 bins left after merging")
    if any(e <= 0.0 for e in merged_exp):
        raise ValueError("zero expected count after merging")

    statistic = sum((o - e) ** 2 / e for o, e in zip(merged_obs, merged_exp))
    dof = len(merged_exp) - 1
    return GofReport(statistic=float(statistic), dof=dof,
                     p_value=chi_square_sf(float(statistic), dof))


def uniform_counts_gof(counts) -> GofReport:
    """Chi-square of observed category counts against a uniform expectation."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    cells = counts.shape[0]
    if cells < 2:
        raise ValueError("need at least 2 cells")
    if total <= 0:
        raise ValueError("empty histogram")
    expected = total / cells
    statistic = float(((counts - expected) ** 2 / expected).sum())
    dof = cells - 1
    return GofReport(statistic=statistic, dof=dof,
                     p_value=chi_square_sf(statistic, dof))


def low_bits_chi_square(src: UniformSource, k_bits: int, n: int) -> GofReport:
    """Frequency chi-square of the low k bits of n u64 draws vs uniform."""
    if not 1 <= k_bits <= 8:
        raise ValueError(f"k_bits must be in 1..8, got {k_bits}")
    cells = 1 << k_bits
    if n < 100 * cells:
        raise ValueError(f"need n >= {100 * cells} draws for k={k_bits}, got {n}")
    from . import engine

    mask = cells - 1
    if engine.supports(src):
        buf = np.empty(n, dtype=np.uint64)
        engine.fill_u64(src, buf)
        counts = np.bincount((buf & np.uint64(mask)).astype(np.int64),
                             minlength=cells)
    else:
        counts = np.zeros(cells, dtype=np.int64)
        for _ in range(n):
            counts[src.next_u64() & mask] += 1
    return uniform_counts_gof(counts)


def equal_probability_edges(bins: int) -> list:
    """Interior normal-quantile edges splitting the line into equal-mass bins."""
    if bins < 2:
        raise ValueError(f"need at least 2 bins, got {bins}")
    return [normal_quantile(j / bins) for j in range(1, bins)]
