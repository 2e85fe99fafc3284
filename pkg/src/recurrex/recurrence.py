"""Pairwise distances, threshold selection, and recurrence-plot building.

A recurrence plot marks the state pairs of a trajectory that fall within
distance epsilon of each other: r[i][j] = 1 iff d[i][j] <= eps.  The
boundary is inclusive — a pair at exactly eps is recurrent — which makes
the fixed-recurrence-rate quantile below exact.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DegenerateDistancesError, ParameterError

_NORM_METRIC = {1: "cityblock", 2: "euclidean", math.inf: "chebyshev"}


@dataclass(frozen=True)
class DistanceMatrix:
    """Dense symmetric matrix of q-norm distances between trajectory points."""

    d: np.ndarray
    norm_q: float


@dataclass(frozen=True)
class EpsilonCriterion:
    """How the recurrence threshold is chosen.

    kind:
      "fixed_value" — epsilon given directly (``value`` > 0);
      "fixed_rr"    — epsilon is the smallest value admitting the target
                      fraction of all M^2 entries, self-pairs included
                      (``value`` in (0, 1));
      "sigma_ratio" — epsilon = value * std(frame samples) (``value`` > 0).
    """

    kind: str
    value: float

    def __post_init__(self):
        if self.kind == "fixed_value":
            if self.value <= 0:
                raise ParameterError("fixed_value epsilon must be > 0")
        elif self.kind == "fixed_rr":
            if not 0.0 < self.value < 1.0:
                raise ParameterError("fixed_rr target must lie in (0, 1)")
        elif self.kind == "sigma_ratio":
            if self.value <= 0:
                raise ParameterError("sigma_ratio must be > 0")
        else:
            raise ParameterError(f"unknown epsilon criterion {self.kind!r}")


def fixed_value(eps):
    return EpsilonCriterion("fixed_value", float(eps))


def fixed_rr(target):
    return EpsilonCriterion("fixed_rr", float(target))


def sigma_ratio(k):
    return EpsilonCriterion("sigma_ratio", float(k))


@dataclass(frozen=True)
class RecurrencePlot:
    """Binary M x M matrix (uint8) with the threshold that produced it."""

    r: np.ndarray
    epsilon: float
    criterion: EpsilonCriterion
    norm_q: float

    @property
    def size(self):
        return self.r.shape[0]

    def recurrence_rate(self):
        return float(self.r.sum()) / (self.size * self.size)


def pairwise_distances(traj, q=1):
    """Distance matrix of a trajectory under the Manhattan (q=1),
    Euclidean (q=2), or supremum (q=inf) norm."""
    metric = _NORM_METRIC.get(q)
    if metric is None:
        raise ParameterError(f"norm q must be 1, 2, or inf, got {q!r}")
    pts = traj.points if hasattr(traj, "points") else np.asarray(traj, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise ParameterError("need at least 2 points in R^m")
    d = cdist(pts, pts, metric=metric)
    np.fill_diagonal(d, 0.0)
    return DistanceMatrix(d=d, norm_q=q)


def select_epsilon(dist, crit, frame_sigma=None):
    """Resolve an epsilon criterion against a concrete distance matrix.

    For "sigma_ratio" the standard deviation of the source frame's scalar
    samples must be supplied via ``frame_sigma`` (the matrix alone does not
    know it).  For "fixed_rr" with target p, epsilon is the
    ceil(p * M^2)-th smallest of all M^2 entries — the diagonal zeros
    count, mirroring the recurrence-rate definition they appear in.
    """
    if crit.kind == "fixed_value":
        return crit.value
    if crit.kind == "sigma_ratio":
        if frame_sigma is None:
            raise ParameterError("sigma_ratio needs the source frame's std")
        return crit.value * frame_sigma
    flat = dist.d.ravel()
    if flat.max() == flat.min():
        raise DegenerateDistancesError(
            "all pairwise distances are equal; a quantile threshold is undefined"
        )
    k = math.ceil(crit.value * flat.size)
    return float(np.partition(flat, k - 1)[k - 1])


def recurrence_plot(dist, eps, criterion=None, frame_sigma=None):
    """Threshold a distance matrix into a recurrence plot.

    ``eps`` may be a number or an :class:`EpsilonCriterion` (resolved via
    select_epsilon).  The comparison is d <= eps, so the main diagonal is
    always recurrent.
    """
    if isinstance(eps, EpsilonCriterion):
        criterion = eps
        eps = select_epsilon(dist, eps, frame_sigma=frame_sigma)
    if eps < 0:
        raise ParameterError(f"epsilon must be >= 0, got {eps}")
    r = (dist.d <= eps).astype(np.uint8)
    return RecurrencePlot(r=r, epsilon=float(eps),
                          criterion=criterion, norm_q=dist.norm_q)


def write_pgm(path, rp):
    """Export a recurrence plot as a plain-text graymap (P2).

    Pixel value 255 marks a recurrence dot and 0 its absence; row i of the
    matrix is row i of the image, top to bottom.
    """
    m = rp.size
    with open(path, "w") as fh:
        fh.write(f"P2\n{m} {m}\n255\n")
        for row in rp.r:
            fh.write(" ".join("255" if v else "0" for v in row))
            fh.write("\n")
