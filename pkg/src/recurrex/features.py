"""Frame attributes -> fixed-length vectors: deltas, functionals, fusion.

A sequence of per-frame measure vectors (T x 12) is summarized stream by
stream.  The 24 streams are the 12 attributes followed by their 12 simple
differences; each stream yields 18 statistics, giving 432 values.  An
externally computed conventional vector can be fused in front, e.g.
1582 + 432 = 2014.

Column naming is a stable contract: ``rqa.<attribute>[.delta].<statistic>``
(``rqa.det.delta.p95`` is the 95th percentile of the determinism deltas).
"""

import csv
import json
import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import JoinError, ParameterError
from .rqa import ATTRIBUTES

log = logging.getLogger(__name__)

FUNCTIONALS = ("min", "max", "mean", "median", "var", "skew", "kurt",
               "range", "p1", "p5", "p25", "p50", "p75", "p95", "p99",
               "iqr_25_75", "iqr_25_50", "iqr_50_75")

RQA_DIM = 2 * len(ATTRIBUTES) * len(FUNCTIONALS)  # 432
EXTERNAL_DIM = 1582  # conventional acoustic vector width the fusion expects

META_FIELDS = ("utterance_id", "segment_index", "speaker_id",
               "session_id", "label")


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    utterance_id: str = ""
    segment_index: int = None
    speaker_id: str = ""
    session_id: str = ""
    label: str = ""

    def __len__(self):
        return len(self.values)


def feature_names():
    """Canonical column names for the 432 values, in emission order."""
    names = []
    for delta in ("", ".delta"):
        for attr in ATTRIBUTES:
            for fn in FUNCTIONALS:
                names.append(f"rqa.{attr}{delta}.{fn}")
    return names


def deltas(values):
    """Frame-to-frame simple differences; the first row is zeros."""
    values = np.atleast_2d(np.asarray(values, dtype=np.float64))
    out = np.zeros_like(values)
    out[1:] = np.diff(values, axis=0)
    return out


def functionals(stream):
    """The 18 summary statistics of one stream, in canonical order.

    Variance is the population variance; skewness m3/m2^1.5 and excess
    kurtosis m4/m2^2 - 3 are defined as 0 for a constant stream.
    Percentiles interpolate linearly between order statistics, so the
    median and the 50th percentile coincide (both are emitted — the layout
    counts them separately).
    """
    x = np.asarray(stream, dtype=np.float64)
    if x.ndim != 1 or len(x) == 0:
        raise ParameterError("stream must be a non-empty 1-D sequence")
    mean = x.mean()
    centered = x - mean
    m2 = float(np.mean(centered ** 2))
    if m2 > 0.0:
        skew = float(np.mean(centered ** 3)) / m2 ** 1.5
        kurt = float(np.mean(centered ** 4)) / m2 ** 2 - 3.0
    else:
        skew = kurt = 0.0
    p = np.percentile(x, (1, 5, 25, 50, 75, 95, 99))
    return np.array([
        x.min(), x.max(), mean, p[3], m2, skew, kurt, x.max() - x.min(),
        p[0], p[1], p[2], p[3], p[4], p[5], p[6],
        p[4] - p[2], p[3] - p[2], p[4] - p[3],
    ])


def aggregate(values, **meta):
    """Collapse a T x 12 attribute sequence into the 432-value vector."""
    values = np.atleast_2d(np.asarray(values, dtype=np.float64))
    if values.shape[1] != len(ATTRIBUTES):
        raise ParameterError(
            f"expected {len(ATTRIBUTES)} attribute columns, got {values.shape[1]}"
        )
    d = deltas(values)
    out = np.empty(RQA_DIM)
    pos = 0
    for block in (values, d):
        for col in range(block.shape[1]):
            out[pos:pos + len(FUNCTIONALS)] = functionals(block[:, col])
            pos += len(FUNCTIONALS)
    return FeatureVector(values=out, **meta)


def fuse(fv, external):
    """Prefix a feature vector with an externally computed one.

    The conventional width is 1582 (2014 total); other widths are accepted
    with a warning and the output is simply ``len(external) + len(fv)``.
    """
    external = np.asarray(external, dtype=np.float64)
    if external.ndim != 1:
        raise ParameterError("external vector must be 1-D")
    if len(external) != EXTERNAL_DIM:
        log.warning("external vector is %d-wide (expected %d); output will be %d-wide",
                    len(external), EXTERNAL_DIM, len(external) + len(fv.values))
    return replace(fv, values=np.concatenate([external, fv.values]))


# --- feature files ----------------------------------------------------------

def _meta_row(fv):
    seg = "" if fv.segment_index is None else str(fv.segment_index)
    return [fv.utterance_id, seg, fv.speaker_id, fv.session_id, fv.label]


def write_feature_csv(path, vectors, names=None):
    """One row per vector: the five meta columns, then the value columns.

    Values are written as shortest round-tripping decimals, so reading the
    file back reproduces them bit for bit.
    """
    if not vectors:
        raise ParameterError("no feature vectors to write")
    width = len(vectors[0].values)
    if any(len(v.values) != width for v in vectors):
        raise ParameterError("feature vectors disagree on width")
    if names is None:
        names = feature_names()
        if width > len(names):  # fused rows: external columns come first
            names = [f"ext.{i}" for i in range(width - len(names))] + names
    if len(names) != width:
        raise ParameterError(f"{len(names)} names for {width} columns")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(list(META_FIELDS) + list(names))
        for fv in vectors:
            w.writerow(_meta_row(fv) + [repr(float(v)) for v in fv.values])


def write_feature_jsonl(path, vectors):
    with open(path, "w") as fh:
        for fv in vectors:
            rec = {
                "utterance_id": fv.utterance_id,
                "segment_index": fv.segment_index,
                "speaker_id": fv.speaker_id,
                "session_id": fv.session_id,
                "label": fv.label,
                "values": [float(v) for v in fv.values],
            }
            fh.write(json.dumps(rec) + "\n")


def read_feature_csv(path):
    """Load a feature CSV back into vectors (inverse of write_feature_csv)."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParameterError(f"{path}: empty feature file")
    header = rows[0]
    if header[:len(META_FIELDS)] != list(META_FIELDS):
        raise ParameterError(f"{path}: missing meta columns {META_FIELDS}")
    names = header[len(META_FIELDS):]
    vectors = []
    for row in rows[1:]:
        meta, vals = row[:len(META_FIELDS)], row[len(META_FIELDS):]
        vectors.append(FeatureVector(
            values=np.array([float(v) for v in vals]),
            utterance_id=meta[0],
            segment_index=None if meta[1] == "" else int(meta[1]),
            speaker_id=meta[2], session_id=meta[3], label=meta[4],
        ))
    return vectors, names


def read_external_csv(path):
    """Load an external feature table keyed by utterance id.

    The file needs a ``utterance_id`` column (a ``segment_index`` column is
    honored when present); every remaining column is a feature.
    """
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParameterError(f"{path}: empty external feature file")
    header = rows[0]
    if "utterance_id" not in header:
        raise ParameterError(f"{path}: no utterance_id column")
    uid_col = header.index("utterance_id")
    seg_col = header.index("segment_index") if "segment_index" in header else None
    feat_cols = [i for i in range(len(header)) if i not in (uid_col, seg_col)]
    table = {}
    for row in rows[1:]:
        seg = None
        if seg_col is not None and row[seg_col] != "":
            seg = int(row[seg_col])
        key = (row[uid_col], seg)
        table[key] = np.array([float(row[i]) for i in feat_cols])
    return table


def fuse_all(vectors, table):
    """Join external vectors onto feature vectors by (utterance, segment).

    A missing external row for any vector is an error naming the ids, so a
    silent partial fusion cannot happen.
    """
    missing = []
    out = []
    for fv in vectors:
        key = (fv.utterance_id, fv.segment_index)
        ext = table.get(key)
        if ext is None and fv.segment_index is not None:
            ext = table.get((fv.utterance_id, None))
        if ext is None:
            missing.append(fv.utterance_id if fv.segment_index is None
                           else f"{fv.utterance_id}[{fv.segment_index}]")
            continue
        out.append(fuse(fv, ext))
    if missing:
        raise JoinError("no external features for: " + ", ".join(sorted(set(missing))))
    return out
