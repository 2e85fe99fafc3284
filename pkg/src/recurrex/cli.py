"""Command-line front end.

    recurrex extract      manifest of WAVs -> feature table (CSV or JSONL)
    recurrex rp-export    one frame -> PGM recurrence plot + JSON sidecar
    recurrex evaluate     feature table -> protocol report (JSON)
    recurrex gen-fixtures write a small labeled synthetic corpus

Any config knob can be set on the command line with its dotted name,
e.g. ``--embedding.bins 24`` or ``--recurrence.norm inf``.  Exit codes:
0 success, 1 processing failure, 2 usage error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__, features, pipeline, signal
from .config import load_config
from .embedding import estimate_params, embed
from .errors import RecurrexError
from .evaluation import Dataset, run_protocol
from .recurrence import EpsilonCriterion, pairwise_distances, recurrence_plot, write_pgm
from .rqa import ATTRIBUTES, rqa_measures

log = logging.getLogger(__name__)

CLASS_RECIPES = ("tonal", "turbulent", "chaotic")


def _build_parser():
    top = argparse.ArgumentParser(
        prog="recurrex",
        description="Recurrence-dynamics features for speech-scale signals.")
    top.add_argument("--version", action="version", version=f"recurrex {__version__}")
    top.add_argument("-v", "--verbose", action="store_true",
                     help="log progress to stderr")
    sub = top.add_subparsers(dest="command", required=True)

    ex = sub.add_parser("extract", help="extract feature vectors for a manifest")
    ex.add_argument("--manifest", required=True, type=Path)
    ex.add_argument("--out", required=True, type=Path,
                    help="output table; .jsonl writes JSON lines, else CSV")
    ex.add_argument("--config", type=Path, default=None)
    ex.add_argument("--external", type=Path, default=None,
                    help="CSV of external descriptors to fuse in front")
    ex.add_argument("--workers", type=int, default=None)

    rp = sub.add_parser("rp-export", help="export one frame's recurrence plot")
    rp.add_argument("--wav", required=True, type=Path)
    rp.add_argument("--frame", type=int, default=0, help="frame index")
    rp.add_argument("--out", required=True, type=Path, help="PGM path")
    rp.add_argument("--config", type=Path, default=None)

    ev = sub.add_parser("evaluate", help="run a classification protocol")
    ev.add_argument("--features", required=True, type=Path)
    ev.add_argument("--out", required=True, type=Path, help="JSON report path")
    ev.add_argument("--config", type=Path, default=None)

    gf = sub.add_parser("gen-fixtures", help="write a synthetic labeled corpus")
    gf.add_argument("--out", required=True, type=Path, help="output directory")
    gf.add_argument("--seed", type=int, default=0)
    gf.add_argument("--speakers", type=int, default=4)
    gf.add_argument("--utterances", type=int, default=5, help="per class per speaker")
    gf.add_argument("--duration", type=float, default=0.4, help="seconds")
    return top


def _dotted_overrides(extras, parser):
    """Turn leftover ``--section.option [value]`` tokens into a dict."""
    out = {}
    i = 0
    while i < len(extras):
        tok = extras[i]
        if not (tok.startswith("--") and "." in tok):
            parser.error(f"unrecognized argument: {tok}")
        key, eq, val = tok[2:].partition("=")
        if not eq:
            if i + 1 >= len(extras):
                parser.error(f"missing value for {tok}")
            val = extras[i + 1]
            i += 1
        out[key] = val
        i += 1
    return out


def cmd_extract(args, cfg):
    rows = pipeline.read_manifest(args.manifest)
    workers = args.workers if args.workers is not None else None
    vectors = pipeline.run_extract(rows, cfg, workers=workers)
    if args.external is not None:
        table = features.read_external_csv(args.external)
        vectors = features.fuse_all(vectors, table)
    if args.out.suffix == ".jsonl":
        features.write_feature_jsonl(args.out, vectors)
    else:
        features.write_feature_csv(args.out, vectors)
    print(f"wrote {len(vectors)} vectors to {args.out}")
    return 0


def cmd_rp_export(args, cfg):
    sig = signal.load_wav(args.wav)
    frames = signal.frame_signal(sig, cfg.signal.frame_ms, cfg.signal.hop_ms)
    if not 0 <= args.frame < len(frames):
        print(f"recurrex: frame {args.frame} out of range "
              f"(file has {len(frames)} frames)", file=sys.stderr)
        return 2
    frame = frames[args.frame]
    params = estimate_params(
        frame, max_lag=cfg.embedding.max_lag or None, bins=cfg.embedding.bins,
        smooth=cfg.embedding.smooth, max_m=cfg.embedding.max_m,
        r_tol=cfg.embedding.r_tol, a_tol=cfg.embedding.a_tol,
        fnn_threshold=cfg.embedding.fnn_threshold)
    traj = embed(frame, params)
    dist = pairwise_distances(traj, q=cfg.recurrence.norm)
    crit = EpsilonCriterion(cfg.recurrence.epsilon, cfg.recurrence.value)
    sigma = float(np.std(np.asarray(frame.samples, dtype=np.float64)))
    rp = recurrence_plot(dist, crit, frame_sigma=sigma)
    write_pgm(args.out, rp)
    measures = rqa_measures(rp, include_loi=cfg.rqa.include_loi)
    sidecar = args.out.with_suffix(".json")
    with open(sidecar, "w") as fh:
        json.dump({
            "wav": str(args.wav),
            "frame_index": args.frame,
            "frame_samples": len(frame),
            "tau": params.tau,
            "m": params.m,
            "points": rp.size,
            "norm": "inf" if cfg.recurrence.norm == float("inf")
                    else int(cfg.recurrence.norm),
            "criterion": {"kind": crit.kind, "value": crit.value},
            "epsilon": rp.epsilon,
            "recurrence_rate": rp.recurrence_rate(),
            "measures": {a: getattr(measures, a) for a in ATTRIBUTES},
        }, fh, indent=2)
        fh.write("\n")
    print(f"wrote {args.out} and {sidecar}")
    return 0


def cmd_evaluate(args, cfg):
    vectors, _ = features.read_feature_csv(args.features)
    missing = [v.utterance_id for v in vectors if not v.label]
    if missing:
        raise RecurrexError(
            f"{len(missing)} rows have no label (first: {missing[0]!r})")
    ds = Dataset.from_feature_vectors(vectors)
    ev = cfg.eval
    report = run_protocol(ds, ev.protocol, norm=ev.norm, grid=tuple(ev.grid),
                          seed=ev.seed, k=ev.k, stratify=ev.stratify,
                          max_iter=ev.max_iter, tol=ev.tol)
    with open(args.out, "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    print(f"{ev.protocol}/{ev.norm}: WA={report['mean_wa']:.4f} "
          f"UA={report['mean_ua']:.4f} over {len(report['folds'])} folds")
    return 0


def _fixture_samples(recipe, n, sr, f0, seed):
    rng = np.random.default_rng(seed)
    if recipe == "tonal":
        tone = signal.gen_synthetic("sine", n, sample_rate=sr,
                                    period=sr / f0).samples
        x = tone + 0.02 * rng.uniform(-1.0, 1.0, n)
    elif recipe == "turbulent":
        tone = signal.gen_synthetic("sine", n, sample_rate=sr,
                                    period=sr / f0).samples
        x = rng.uniform(-1.0, 1.0, n) + 0.2 * tone
    elif recipe == "chaotic":
        x = signal.gen_synthetic("lorenz96", n, seed=seed,
                                 sample_rate=sr).samples.copy()
        x += 0.02 * rng.uniform(-1.0, 1.0, n)
    else:
        raise ValueError(recipe)
    peak = np.abs(x).max()
    if peak > 0.95:
        x = x * (0.95 / peak)
    return x


def gen_fixtures(out_dir, seed=0, n_speakers=4, n_utts=5,
                 duration_s=0.4, sample_rate=16000):
    """Write a labeled synthetic corpus and return its manifest path.

    Three signal families stand in for emotion classes: near-periodic
    tones, noise-dominant frames, and a chaotic flow.  Speakers differ by
    base frequency / generator seed; speakers are paired into sessions.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    n = int(round(duration_s * sample_rate))
    rows = []
    for ci, recipe in enumerate(CLASS_RECIPES):
        for spk in range(n_speakers):
            f0 = 180.0 + 40.0 * spk
            for utt in range(n_utts):
                utt_seed = seed + 10_000 * ci + 100 * spk + utt
                x = _fixture_samples(recipe, n, sample_rate,
                                     f0 * (1.0 + 0.03 * utt), utt_seed)
                name = f"{recipe}-s{spk}-u{utt}.wav"
                sig = signal.Signal(samples=x, sample_rate=sample_rate,
                                    source_id=name)
                signal.write_wav(out_dir / name, sig)
                rows.append((name, f"{recipe}-s{spk}-u{utt}", f"s{spk}",
                             f"ses{spk // 2}", recipe))
    manifest = out_dir / "manifest.csv"
    with open(manifest, "w", newline="") as fh:
        fh.write("path,utterance_id,speaker_id,session_id,label\n")
        for row in rows:
            fh.write(",".join(row) + "\n")
    return manifest


def cmd_gen_fixtures(args, cfg):
    manifest = gen_fixtures(args.out, seed=args.seed,
                            n_speakers=args.speakers,
                            n_utts=args.utterances,
                            duration_s=args.duration)
    print(f"wrote {manifest}")
    return 0


def main(argv=None):
    parser = _build_parser()
    args, extras = parser.parse_known_args(argv)
    overrides = _dotted_overrides(extras, parser)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")
    handler = {
        "extract": cmd_extract,
        "rp-export": cmd_rp_export,
        "evaluate": cmd_evaluate,
        "gen-fixtures": cmd_gen_fixtures,
    }[args.command]
    try:
        cfg = load_config(getattr(args, "config", None), overrides)
        return handler(args, cfg)
    except RecurrexError as exc:
        print(f"recurrex: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"recurrex: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
