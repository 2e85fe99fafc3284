"""End-to-end extraction: audio files -> per-frame recurrence measures ->
utterance or segment feature vectors.

File-level work fans out over processes (fork) when more than one worker
is configured; output order always matches manifest order.
"""

import csv
import logging
import multiprocessing
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import features, rqa, signal
from .config import Config
from .embedding import embed, estimate_params
from .errors import (DegenerateDistancesError, DegenerateFrameError,
                     ParseError)
from .recurrence import EpsilonCriterion, pairwise_distances, recurrence_plot

log = logging.getLogger(__name__)

MANIFEST_COLUMNS = ("path", "utterance_id", "speaker_id", "session_id", "label")


@dataclass(frozen=True)
class ManifestRow:
    path: Path
    utterance_id: str
    speaker_id: str = ""
    session_id: str = ""
    label: str = ""


def read_manifest(path):
    """Parse a manifest CSV (path,utterance_id[,speaker_id,session_id,label]).

    Relative audio paths are resolved against the manifest's directory.
    """
    base = Path(path).parent
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in ("path", "utterance_id"):
            if col not in header:
                raise ParseError(f"manifest is missing the {col!r} column")
        unknown = set(header) - set(MANIFEST_COLUMNS)
        if unknown:
            raise ParseError(f"manifest has unknown columns: {sorted(unknown)}")
        for rec in reader:
            p = Path(rec["path"])
            rows.append(ManifestRow(
                path=p if p.is_absolute() else base / p,
                utterance_id=rec["utterance_id"],
                speaker_id=rec.get("speaker_id") or "",
                session_id=rec.get("session_id") or "",
                label=rec.get("label") or "",
            ))
    if not rows:
        raise ParseError(f"manifest {path} has no data rows")
    return rows


def frame_rqa(frame, cfg):
    """Twelve recurrence measures for one frame.

    Frames whose dynamics cannot be resolved (constant samples, too short
    to embed, all pairwise distances equal) fall back to the measures of a
    fully recurrent plot over the raw samples, so every frame contributes
    a row of the same shape.
    """
    emb = cfg.embedding
    n = len(frame)
    try:
        params = estimate_params(
            frame, max_lag=emb.max_lag or None, bins=emb.bins,
            smooth=emb.smooth, max_m=emb.max_m, r_tol=emb.r_tol,
            a_tol=emb.a_tol, fnn_threshold=emb.fnn_threshold)
    except DegenerateFrameError:
        return rqa.degenerate_vector(n)
    traj = embed(frame, params)
    dist = pairwise_distances(traj, q=cfg.recurrence.norm)
    crit = EpsilonCriterion(cfg.recurrence.epsilon, cfg.recurrence.value)
    sigma = float(np.std(np.asarray(frame.samples, dtype=np.float64)))
    try:
        rp = recurrence_plot(dist, crit, frame_sigma=sigma)
    except DegenerateDistancesError:
        return rqa.degenerate_vector(len(traj.points))
    return rqa.rqa_measures(rp, include_loi=cfg.rqa.include_loi)


def _attr_matrix(frames, cfg, cache=None):
    rows = np.empty((len(frames), len(rqa.ATTRIBUTES)))
    for i, frame in enumerate(frames):
        key = (frame.start_sample, len(frame))
        if cache is not None and key in cache:
            rows[i] = cache[key]
            continue
        rows[i] = frame_rqa(frame, cfg).as_array()
        if cache is not None:
            cache[key] = rows[i]
    return rows


def extract_utterance(sig, cfg=None, **meta):
    """One 432-dimensional feature vector for a whole utterance."""
    cfg = cfg or Config()
    frames = signal.frame_signal(sig, cfg.signal.frame_ms, cfg.signal.hop_ms)
    return features.aggregate(_attr_matrix(frames, cfg), **meta)


def extract_segments(sig, cfg=None, **meta):
    """Feature vectors for overlapping segments of an utterance.

    Segments share the utterance's frame grid, so a frame landing in two
    segments is analyzed once and its measures reused.
    """
    cfg = cfg or Config()
    s = cfg.signal
    segments = signal.segment_signal(sig, seg_s=s.segment_s,
                                     stride_s=s.stride_s,
                                     frame_ms=s.frame_ms, hop_ms=s.hop_ms)
    cache = {}
    out = []
    for si, seg in enumerate(segments):
        mat = _attr_matrix(seg.frames, cfg, cache=cache)
        out.append(features.aggregate(mat, segment_index=si, **meta))
    return out


def process_file(row, cfg=None):
    """All feature vectors for one manifest row (1 if utterance-level)."""
    cfg = cfg or Config()
    sig = signal.load_wav(row.path)
    meta = dict(utterance_id=row.utterance_id, speaker_id=row.speaker_id,
                session_id=row.session_id, label=row.label)
    if cfg.signal.segments:
        return extract_segments(sig, cfg, **meta)
    return [extract_utterance(sig, cfg, **meta)]


def resolve_workers(requested=0):
    if requested and requested > 0:
        return requested
    env = os.environ.get("RECURREX_THREADS", "")
    if env.strip():
        try:
            n = int(env)
        except ValueError:
            raise ParseError(f"RECURREX_THREADS={env!r} is not an integer")
        if n > 0:
            return n
    return os.cpu_count() or 1


def _work(args):
    return process_file(*args)


def run_extract(rows, cfg=None, workers=None):
    """Extract features for every manifest row, in manifest order."""
    cfg = cfg or Config()
    if workers is None:
        workers = resolve_workers(cfg.runtime.workers)
    if workers <= 1 or len(rows) <= 1:
        results = [process_file(row, cfg) for row in rows]
    else:
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=min(workers, len(rows)),
                                 mp_context=ctx) as pool:
            results = list(pool.map(_work, [(row, cfg) for row in rows]))
    log.info("extracted %d vectors from %d files",
             sum(len(r) for r in results), len(rows))
    return [fv for per_file in results for fv in per_file]
