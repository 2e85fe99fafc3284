"""Line-structure histograms and the twelve recurrence measures.

A recurrence plot decomposes into maximal diagonal lines of ones, vertical
lines of ones, and vertical lines of zeros ("white" lines).  Runs touching
the matrix border count in full: cells outside the matrix bound black runs
as if they were 0 and white runs as if they were 1.

The measures quantify those histograms.  Minimum counted lengths are 2 for
diagonal and vertical lines and 1 for white lines; shorter lines exist in
the histograms but do not enter the dependent measures.  All entropies use
the natural logarithm.
"""

from dataclasses import dataclass

import numpy as np

from ._kernels import diag_hist, vert_hists

D_MIN = 2
V_MIN = 2
W_MIN = 1

ATTRIBUTES = ("rr", "det", "lmax", "lavg", "entr_d", "lam",
              "vmax", "tt", "entr_v", "wmax", "wavg", "entr_w")


@dataclass(frozen=True)
class LineHistogram:
    """Counts of maximal lines by length for one structure kind."""

    kind: str
    counts: dict
    min_len: int

    def total_points(self):
        return sum(l * c for l, c in self.counts.items())


@dataclass(frozen=True)
class RqaVector:
    """The twelve measures of one recurrence plot, in canonical order."""

    rr: float
    det: float
    lmax: float
    lavg: float
    entr_d: float
    lam: float
    vmax: float
    tt: float
    entr_v: float
    wmax: float
    wavg: float
    entr_w: float

    def as_array(self):
        return np.array([getattr(self, a) for a in ATTRIBUTES])


def _matrix_of(rp):
    r = getattr(rp, "r", rp)
    r = np.ascontiguousarray(np.asarray(r, dtype=np.uint8))
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ValueError("recurrence plot must be a square matrix")
    return r


def line_histograms(rp, include_loi=True):
    """Enumerate maximal runs: diagonal ones, vertical ones, vertical zeros.

    Returns ``(diag, vert, white)`` :class:`LineHistogram` triples.  With
    ``include_loi`` false the main diagonal is left out of the diagonal
    scan (reference implementations differ on whether the identity line is
    a line of the plot; the measures' default counts it).
    """
    r = _matrix_of(rp)
    d = diag_hist(r, include_loi)
    v, w = vert_hists(r)

    def to_hist(arr, kind, min_len):
        lengths = np.nonzero(arr)[0]
        return LineHistogram(kind=kind,
                             counts={int(l): int(arr[l]) for l in lengths},
                             min_len=min_len)

    return (to_hist(d, "diagonal", D_MIN),
            to_hist(v, "vertical", V_MIN),
            to_hist(w, "white_vertical", W_MIN))


def _ratio(counts, min_len):
    num = den = 0
    for l, c in counts.items():
        den += l * c
        if l >= min_len:
            num += l * c
    return num / den if den else 0.0


def _maximum(counts, min_len):
    best = 0
    for l in counts:
        if l >= min_len and l > best:
            best = l
    return float(best)


def _average(counts, min_len):
    num = den = 0
    for l, c in counts.items():
        if l >= min_len:
            num += l * c
            den += c
    return num / den if den else 0.0


def _entropy(counts, min_len):
    kept = [(l, c) for l, c in counts.items() if l >= min_len]
    total = sum(c for _, c in kept)
    if total == 0:
        return 0.0
    return float(sum((c / total) * np.log(total / c) for _, c in kept))


def rqa_measures(rp, include_loi=True):
    """Compute the twelve measures of a recurrence plot.

    RR is the fraction of recurrent cells.  DET / LAM are the fractions of
    recurrent points lying on diagonal / vertical lines no shorter than the
    minimum length; lmax/vmax/wmax the longest such lines; lavg/tt/wavg
    their mean lengths; and each entropy is
    sum_l (P(l)/N) ln(N/P(l)) over the counted lengths.  When a histogram
    holds no line at or above its minimum length, its dependent measures
    are zero.
    """
    r = _matrix_of(rp)
    m = r.shape[0]
    diag, vert, white = line_histograms(r, include_loi=include_loi)
    return RqaVector(
        rr=float(r.sum()) / (m * m),
        det=_ratio(diag.counts, D_MIN),
        lmax=_maximum(diag.counts, D_MIN),
        lavg=_average(diag.counts, D_MIN),
        entr_d=_entropy(diag.counts, D_MIN),
        lam=_ratio(vert.counts, V_MIN),
        vmax=_maximum(vert.counts, V_MIN),
        tt=_average(vert.counts, V_MIN),
        entr_v=_entropy(vert.counts, V_MIN),
        wmax=_maximum(white.counts, W_MIN),
        wavg=_average(white.counts, W_MIN),
        entr_w=_entropy(white.counts, W_MIN),
    )


def degenerate_vector(m):
    """Measures of the all-ones plot of size m — the analytic limit used
    for constant frames, keeping frame counts stable downstream."""
    return rqa_measures(np.ones((m, m), dtype=np.uint8))
