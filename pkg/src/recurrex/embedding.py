"""Per-frame delay-embedding parameter estimation and trajectory building.

The lag comes from the first local minimum of the average mutual
information between a frame and its lagged copy; the dimension from the
false-nearest-neighbor criterion.  Both are estimated per frame.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFrameError, ParameterError

MIN_POINTS = 10  # fewest embedded points any trajectory may have


@dataclass(frozen=True)
class EmbeddingParams:
    """Delay-embedding parameters plus estimator diagnostics.

    ``method_meta`` carries the AMI curve and FNN fractions that produced
    the estimates (possibly truncated where the scan stopped early).
    """

    tau: int
    m: int
    method_meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.tau < 1 or self.m < 1:
            raise ParameterError(f"tau and m must be >= 1, got ({self.tau}, {self.m})")

    def validate_for(self, n):
        if (self.m - 1) * self.tau >= n - MIN_POINTS + 1:
            raise ParameterError(
                f"(m-1)*tau = {(self.m - 1) * self.tau} leaves fewer than "
                f"{MIN_POINTS} embedded points for a {n}-sample frame"
            )


@dataclass(frozen=True)
class Trajectory:
    """M phase-space points in R^m; point j, coordinate k is s(j + k*tau)."""

    points: np.ndarray
    params: EmbeddingParams


def _samples_of(frame):
    s = np.asarray(getattr(frame, "samples", frame), dtype=np.float64)
    if s.ndim != 1 or len(s) == 0:
        raise ParameterError("expected a non-empty 1-D sample array")
    return s


def _mi_nats(joint):
    """Mutual information of a 2-D count histogram, zero cells skipped."""
    total = joint.sum()
    pj = joint / total
    px = pj.sum(axis=1)
    py = pj.sum(axis=0)
    nz = pj > 0
    denom = np.outer(px, py)
    return float(np.sum(pj[nz] * np.log(pj[nz] / denom[nz])))


def ami_curve(frame, max_lag=None, bins=16):
    """AMI(l) in nats for l = 1..max_lag.

    The joint distribution of (s(i), s(i+l)) is estimated on a bins x bins
    equal-width grid spanning the frame's min..max.
    """
    s = _samples_of(frame)
    n = len(s)
    if max_lag is None:
        max_lag = max(1, n // 4)
    if max_lag < 1 or max_lag >= n:
        raise ParameterError(f"max_lag must be in [1, {n - 1}], got {max_lag}")
    if bins < 2:
        raise ParameterError("bins must be >= 2")
    lo, hi = s.min(), s.max()
    if hi == lo:
        raise DegenerateFrameError("constant frame: AMI undefined")
    codes = np.minimum((bins * (s - lo) / (hi - lo)).astype(np.int64), bins - 1)
    out = np.empty(max_lag)
    for lag in range(1, max_lag + 1):
        joint = np.bincount(codes[:-lag] * bins + codes[lag:],
                            minlength=bins * bins).reshape(bins, bins)
        out[lag - 1] = _mi_nats(joint)
    return out


def _smooth(curve, hwin):
    """Centered moving average; edge windows shrink instead of padding."""
    c = np.asarray(curve, dtype=np.float64)
    if hwin <= 0:
        return c.copy()
    n = len(c)
    return np.array([c[max(0, i - hwin):min(n, i + hwin + 1)].mean()
                     for i in range(n)])


def _first_local_min(curve):
    for i in range(1, len(curve) - 1):
        if curve[i] < curve[i - 1] and curve[i] <= curve[i + 1]:
            return i + 1  # positions are 1-based lags
    return None


def estimate_tau_ami(frame, max_lag=None, bins=16, smooth=3):
    """Select the embedding lag from the AMI curve.

    The first local minimum — AMI(l) < AMI(l-1) and AMI(l) <= AMI(l+1) — is
    located on a centered moving average of the curve (half-window
    ``smooth``; 0 disables).  Binned MI estimates of strongly periodic
    frames are jagged, and without the average a one-lag comb artifact can
    masquerade as the minimum.  Fallbacks when no local minimum exists:
    first lag at or below AMI(1)/e, then max_lag.

    Returns ``(tau, curve)`` where ``curve`` is the raw AMI curve.
    """
    s = _samples_of(frame)
    n = len(s)
    if max_lag is None:
        max_lag = max(1, n // 4)
    if max_lag < 1 or max_lag >= n:
        raise ParameterError(f"max_lag must be in [1, {n - 1}], got {max_lag}")
    if bins < 2:
        raise ParameterError("bins must be >= 2")
    lo, hi = s.min(), s.max()
    if hi == lo:
        raise DegenerateFrameError("constant frame: lag estimation undefined")

    codes = np.minimum((bins * (s - lo) / (hi - lo)).astype(np.int64), bins - 1)
    raw = np.empty(max_lag)
    done = 0

    def compute_upto(k):
        nonlocal done
        for lag in range(done + 1, k + 1):
            joint = np.bincount(codes[:-lag] * bins + codes[lag:],
                                minlength=bins * bins).reshape(bins, bins)
            raw[lag - 1] = _mi_nats(joint)
        done = max(done, k)

    # Lazy scan: smoothed index i is the mean of raw[max(0, i-smooth) :
    # i+smooth+1] with the right edge clamped at max_lag, so it is final
    # once done reaches i+smooth+1 (or the whole curve exists, where tail
    # windows shrink by definition).  Certifying a local minimum at lag l
    # reads indices l-2, l-1, l; most frames stop long before max_lag.
    def sm_at(i):
        return raw[max(0, i - smooth):min(max_lag, i + smooth + 1)].mean()

    for lag in range(2, max_lag):
        compute_upto(min(max_lag, lag + 1 + smooth))
        final_upto = done - smooth - 1 if done < max_lag else done - 1
        if (lag <= final_upto and sm_at(lag - 1) < sm_at(lag - 2)
                and sm_at(lag - 1) <= sm_at(lag)):
            return int(lag), raw[:done].copy()

    compute_upto(max_lag)
    sm = _smooth(raw, smooth)
    tau = _first_local_min(sm)
    if tau is None:
        below = np.nonzero(sm <= sm[0] / math.e)[0]
        tau = int(below[0]) + 1 if len(below) else max_lag
    return int(tau), raw.copy()


def fnn_fractions(frame, tau, max_m=10, r_tol=10.0, a_tol=2.0):
    """False-neighbor fraction for each dimension m = 1..max_m.

    Dimension m is examined only while n - m*tau >= 10, so the growth
    coordinate s(i + m*tau) exists for a meaningful set of points; this also
    keeps any selected dimension inside the trajectory-size invariant.

    The K x K table of squared distances is grown one coordinate at a
    time (the m-dimensional distance is the (m-1)-dimensional one plus a
    single squared difference), which keeps the neighbor search exact —
    summation order matches a per-pair scan — while doing the heavy
    arithmetic in whole-array operations.  Each point's nearest neighbor
    is the first index attaining the minimum; it is "false" when adding
    the next delay coordinate grows the distance more than r_tol-fold, or
    by more than a_tol signal standard deviations.
    """
    s = _samples_of(frame)
    n = len(s)
    if tau < 1:
        raise ParameterError(f"tau must be >= 1, got {tau}")
    if n - tau < MIN_POINTS:
        raise DegenerateFrameError(
            f"frame of {n} samples leaves fewer than {MIN_POINTS} points at m=1"
        )
    sigma = float(s.std())
    K = n - tau
    d2 = (s[:K, None] - s[None, :K]) ** 2
    np.fill_diagonal(d2, np.inf)  # inf survives the += below: self stays excluded
    fractions = []
    m = 1
    while m <= max_m and n - m * tau >= MIN_POINTS:
        K = n - m * tau
        v = d2[:K, :K]
        nn = v.argmin(axis=1)
        idx = np.arange(K)
        dist = np.sqrt(v[idx, nn])
        growth = np.abs(s[idx + m * tau] - s[nn + m * tau])
        false = (growth > r_tol * dist) | (growth > a_tol * sigma)
        fractions.append(false.sum() / K)
        m += 1
        if m > max_m or n - m * tau < MIN_POINTS:
            break
        K = n - m * tau
        a = s[(m - 1) * tau:(m - 1) * tau + K]
        d2 = d2[:K, :K]
        d2 += (a[:, None] - a[None, :]) ** 2
    return np.array(fractions)


def estimate_m_fnn(frame, tau, max_m=10, r_tol=10.0, a_tol=2.0,
                   fnn_threshold=0.01):
    """Smallest dimension whose false-neighbor fraction drops below the
    threshold; falls back to the dimension with the minimal fraction.

    Returns ``(m, fractions)``.
    """
    fractions = fnn_fractions(frame, tau, max_m=max_m, r_tol=r_tol, a_tol=a_tol)
    below = np.nonzero(fractions < fnn_threshold)[0]
    m = int(below[0]) + 1 if len(below) else int(np.argmin(fractions)) + 1
    return m, fractions


def estimate_params(frame, max_lag=None, bins=16, smooth=3, max_m=10,
                    r_tol=10.0, a_tol=2.0, fnn_threshold=0.01):
    """Run both estimators and bundle the result with diagnostics."""
    tau, curve = estimate_tau_ami(frame, max_lag=max_lag, bins=bins,
                                  smooth=smooth)
    m, fractions = estimate_m_fnn(frame, tau, max_m=max_m, r_tol=r_tol,
                                  a_tol=a_tol, fnn_threshold=fnn_threshold)
    return EmbeddingParams(tau=tau, m=m,
                           method_meta={"ami": curve, "fnn": fractions})


def embed(frame, params):
    """Delay-embed a frame: point i is [s(i), s(i+tau), ..., s(i+(m-1)tau)]."""
    s = _samples_of(frame)
    n = len(s)
    params.validate_for(n)
    tau, m = params.tau, params.m
    M = n - (m - 1) * tau
    points = np.empty((M, m))
    for k in range(m):
        points[:, k] = s[k * tau:k * tau + M]
    return Trajectory(points=points, params=params)
