"""Independent brute-force reference implementations used to pin expected values.

Everything in this module is deliberately naive: pure-Python loops, no shared
code with the library under test.  The unit and acceptance tests compare the
optimized implementations against these functions, so nothing here may import
from the ``recurrex`` package.
"""

import math
from collections import Counter


# ---------------------------------------------------------------------------
# line structures: naive O(M^3) run scanning
# ---------------------------------------------------------------------------

def line_histograms(R, include_loi=True):
    """Enumerate maximal diagonal 1-runs, column 1-runs and column 0-runs.

    ``R`` is any square 0/1 matrix (list of lists or ndarray).  Cells outside
    the matrix bound black runs as 0 and white runs as 1, so border-touching
    runs are counted.  Returns three Counters mapping run length -> count.
    """
    M = len(R)
    diag, vert, wvert = Counter(), Counter(), Counter()

    def runs_of(seq, value):
        found, length = [], 0
        for cell in seq:
            if cell == value:
                length += 1
            elif length:
                found.append(length)
                length = 0
        if length:
            found.append(length)
        return found

    for offset in range(-(M - 1), M):
        if offset == 0 and not include_loi:
            continue
        line = [int(R[i][i + offset]) for i in range(M)
                if 0 <= i + offset < M]
        for length in runs_of(line, 1):
            diag[length] += 1
    for j in range(M):
        col = [int(R[i][j]) for i in range(M)]
        for length in runs_of(col, 1):
            vert[length] += 1
        for length in runs_of(col, 0):
            wvert[length] += 1
    return diag, vert, wvert


def rqa_measures(R, include_loi=True, d_min=2, v_min=2, w_min=1):
    """Evaluate the 12 recurrence measures straight from the histogram sums."""
    M = len(R)
    diag, vert, wvert = line_histograms(R, include_loi=include_loi)
    total = sum(int(R[i][j]) for i in range(M) for j in range(M))

    def ratio(hist, lo):
        num = sum(l * c for l, c in hist.items() if l >= lo)
        den = sum(l * c for l, c in hist.items())
        return num / den if den else 0.0

    def maximum(hist, lo):
        lens = [l for l in hist if l >= lo]
        return float(max(lens)) if lens else 0.0

    def average(hist, lo):
        num = sum(l * c for l, c in hist.items() if l >= lo)
        den = sum(c for l, c in hist.items() if l >= lo)
        return num / den if den else 0.0

    def entropy(hist, lo):
        n = sum(c for l, c in hist.items() if l >= lo)
        if n == 0:
            return 0.0
        return sum((c / n) * math.log(n / c)
                   for l, c in hist.items() if l >= lo)

    return {
        "rr": total / M ** 2,
        "det": ratio(diag, d_min),
        "l_max": maximum(diag, d_min),
        "l_avg": average(diag, d_min),
        "d_entr": entropy(diag, d_min),
        "lam": ratio(vert, v_min),
        "v_max": maximum(vert, v_min),
        "tt": average(vert, v_min),
        "v_entr": entropy(vert, v_min),
        "w_max": maximum(wvert, w_min),
        "w_avg": average(wvert, w_min),
        "w_entr": entropy(wvert, w_min),
    }


# ---------------------------------------------------------------------------
# distances and thresholds
# ---------------------------------------------------------------------------

def distance_matrix(points, q):
    """Pairwise q-norm distances by explicit summation (q in {1, 2, inf})."""
    n = len(points)
    out = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            diffs = [abs(a - b) for a, b in zip(points[i], points[j])]
            if q == 1:
                out[i][j] = sum(diffs)
            elif q == 2:
                out[i][j] = math.sqrt(sum(d * d for d in diffs))
            else:
                out[i][j] = max(diffs)
    return out


def rr_quantile_epsilon(dist, target):
    """k-th smallest of all M^2 entries with k = ceil(target * M^2)."""
    flat = sorted(v for row in dist for v in row)
    k = math.ceil(target * len(flat))
    return flat[k - 1]


# ---------------------------------------------------------------------------
# embedding parameter estimators, computed the slow transparent way
# ---------------------------------------------------------------------------

def ami_curve(samples, max_lag, bins=16):
    """AMI(l) for l = 1..max_lag via an explicit 2-D histogram, in nats."""
    n = len(samples)
    lo, hi = min(samples), max(samples)
    if hi == lo:
        raise ValueError("constant input")
    width = (hi - lo) / bins

    def bin_of(x):
        b = int((x - lo) / width)
        return min(b, bins - 1)

    curve = []
    for lag in range(1, max_lag + 1):
        pairs = [(bin_of(samples[i]), bin_of(samples[i + lag]))
                 for i in range(n - lag)]
        joint = Counter(pairs)
        left = Counter(p[0] for p in pairs)
        right = Counter(p[1] for p in pairs)
        total = len(pairs)
        mi = 0.0
        for (a, b), c in joint.items():
            pj = c / total
            mi += pj * math.log(pj * total * total / (left[a] * right[b]))
        curve.append(mi)
    return curve


def tau_from_curve(curve, max_lag):
    """First local minimum, then 1/e crossing, then max_lag."""
    for idx in range(1, len(curve) - 1):
        if curve[idx] < curve[idx - 1] and curve[idx] <= curve[idx + 1]:
            return idx + 1
    for idx, v in enumerate(curve):
        if v <= curve[0] / math.e:
            return idx + 1
    return max_lag


def fnn_fractions(samples, tau, max_m=10, r_tol=10.0, a_tol=2.0):
    """False-neighbor fraction for each embedding dimension m = 1..max_m.

    Neighbor search is restricted to the points that still have a valid
    (m+1)-th coordinate, so the growth test is always well defined.
    """
    n = len(samples)
    mean = sum(samples) / n
    sigma = math.sqrt(sum((x - mean) ** 2 for x in samples) / n)

    fractions = []
    for m in range(1, max_m + 1):
        K = n - m * tau
        if K < 2:
            break
        emb = [[samples[i + k * tau] for k in range(m)] for i in range(K)]
        false = 0
        for i in range(K):
            best, best_d = -1, float("inf")
            for j in range(K):
                if j == i:
                    continue
                d = math.sqrt(sum((a - b) ** 2
                                  for a, b in zip(emb[i], emb[j])))
                if d < best_d:
                    best, best_d = j, d
            growth = abs(samples[i + m * tau] - samples[best + m * tau])
            if growth > r_tol * best_d or growth > a_tol * sigma:
                false += 1
        fractions.append(false / K)
    return fractions


def m_from_fractions(fractions, threshold=0.01):
    for m, f in enumerate(fractions, start=1):
        if f < threshold:
            return m
    best = min(range(len(fractions)), key=lambda i: fractions[i])
    return best + 1


# ---------------------------------------------------------------------------
# statistical functionals, from the definitions
# ---------------------------------------------------------------------------

def percentile(values, p):
    """Linear interpolation between order statistics (inclusive method)."""
    s = sorted(values)
    if len(s) == 1:
        return s[0]
    h = (len(s) - 1) * p / 100.0
    lo = int(math.floor(h))
    hi = min(lo + 1, len(s) - 1)
    return s[lo] + (h - lo) * (s[hi] - s[lo])


def functionals(stream):
    n = len(stream)
    mean = sum(stream) / n
    m2 = sum((x - mean) ** 2 for x in stream) / n
    m3 = sum((x - mean) ** 3 for x in stream) / n
    m4 = sum((x - mean) ** 4 for x in stream) / n
    skew = m3 / m2 ** 1.5 if m2 > 0 else 0.0
    kurt = m4 / m2 ** 2 - 3.0 if m2 > 0 else 0.0
    p = {q: percentile(stream, q) for q in (1, 5, 25, 50, 75, 95, 99)}
    return [
        min(stream), max(stream), mean, percentile(stream, 50), m2,
        skew, kurt, max(stream) - min(stream),
        p[1], p[5], p[25], p[50], p[75], p[95], p[99],
        p[75] - p[25], p[50] - p[25], p[75] - p[50],
    ]
