import csv
import json

import numpy as np
import pytest

from recurrex.cli import main
from recurrex.features import EXTERNAL_DIM, read_feature_csv
from recurrex.rqa import ATTRIBUTES


def test_gen_fixtures_layout(mini_corpus):
    root = mini_corpus.parent
    wavs = sorted(p.name for p in root.glob("*.wav"))
    assert len(wavs) == 12  # 3 classes x 2 speakers x 2 utterances
    assert "tonal-s0-u0.wav" in wavs and "chaotic-s1-u1.wav" in wavs
    with open(mini_corpus, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 12
    assert {r["label"] for r in rows} == {"tonal", "turbulent", "chaotic"}
    assert {r["speaker_id"] for r in rows} == {"s0", "s1"}
    assert {r["session_id"] for r in rows} == {"ses0"}


def test_gen_fixtures_command(tmp_path, capsys):
    rc = main(["gen-fixtures", "--out", str(tmp_path / "c"),
               "--speakers", "2", "--utterances", "1", "--duration", "0.1"])
    assert rc == 0
    assert (tmp_path / "c" / "manifest.csv").exists()
    assert len(list((tmp_path / "c").glob("*.wav"))) == 6
    assert "manifest.csv" in capsys.readouterr().out


def test_extract_csv(mini_corpus, tmp_path, capsys):
    out = tmp_path / "features.csv"
    rc = main(["extract", "--manifest", str(mini_corpus), "--out", str(out)])
    assert rc == 0
    assert "wrote 12 vectors" in capsys.readouterr().out
    vectors, names = read_feature_csv(out)
    assert len(vectors) == 12
    assert all(len(v) == 432 for v in vectors)
    assert all(v.label for v in vectors)
    assert names[0] == "rqa.rr.min"


def test_extract_jsonl(mini_corpus, tmp_path):
    out = tmp_path / "features.jsonl"
    rc = main(["extract", "--manifest", str(mini_corpus), "--out", str(out),
               "--workers", "1"])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 12
    rec = json.loads(lines[0])
    assert len(rec["values"]) == 432 and rec["label"]


def test_extract_segments(mini_corpus, tmp_path):
    out = tmp_path / "seg.csv"
    rc = main(["extract", "--manifest", str(mini_corpus), "--out", str(out),
               "--signal.segments", "true"])
    assert rc == 0
    vectors, _ = read_feature_csv(out)
    # 0.3 s files are shorter than one segment -> one whole-file segment each
    assert len(vectors) == 12
    assert all(v.segment_index == 0 for v in vectors)


def test_extract_with_external(mini_corpus, tmp_path):
    with open(mini_corpus, newline="") as fh:
        uids = [r["utterance_id"] for r in csv.DictReader(fh)]
    ext = tmp_path / "ext.csv"
    rng = np.random.default_rng(0)
    with open(ext, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["utterance_id"] + [f"e{i}" for i in range(EXTERNAL_DIM)])
        for uid in uids:
            w.writerow([uid] + [f"{x:.3f}" for x in rng.random(EXTERNAL_DIM)])
    out = tmp_path / "fused.csv"
    rc = main(["extract", "--manifest", str(mini_corpus), "--out", str(out),
               "--external", str(ext)])
    assert rc == 0
    vectors, names = read_feature_csv(out)
    assert all(len(v) == 2014 for v in vectors)
    assert names[0] == "ext.0" and names[EXTERNAL_DIM] == "rqa.rr.min"


def test_evaluate_command(mini_corpus, tmp_path, capsys):
    feats = tmp_path / "features.csv"
    assert main(["extract", "--manifest", str(mini_corpus),
                 "--out", str(feats)]) == 0
    report_path = tmp_path / "report.json"
    rc = main(["evaluate", "--features", str(feats), "--out", str(report_path),
               "--eval.protocol", "si", "--eval.norm", "ps"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "si/ps: WA=" in out
    report = json.loads(report_path.read_text())
    assert report["protocol"] == "si"
    assert len(report["folds"]) == 2  # two speakers
    assert 0.0 <= report["mean_wa"] <= 1.0


def test_evaluate_rejects_unlabeled_rows(tmp_path, capsys):
    from recurrex.features import aggregate, write_feature_csv
    fv = aggregate(np.random.default_rng(0).random((3, 12)), utterance_id="u")
    feats = tmp_path / "nolabel.csv"
    write_feature_csv(feats, [fv])
    rc = main(["evaluate", "--features", str(feats),
               "--out", str(tmp_path / "r.json")])
    assert rc == 1
    assert "no label" in capsys.readouterr().err


def test_rp_export(mini_corpus, tmp_path, capsys):
    wav = mini_corpus.parent / "tonal-s0-u0.wav"
    out = tmp_path / "plot.pgm"
    rc = main(["rp-export", "--wav", str(wav), "--frame", "3",
               "--out", str(out)])
    assert rc == 0
    header = out.read_text().splitlines()[:3]
    assert header[0] == "P2"
    sidecar = json.loads(out.with_suffix(".json").read_text())
    assert sidecar["frame_index"] == 3
    assert sidecar["tau"] >= 1 and sidecar["m"] >= 2
    assert sidecar["criterion"] == {"kind": "fixed_rr", "value": 0.15}
    assert set(sidecar["measures"]) == set(ATTRIBUTES)
    m = sidecar["points"]
    assert abs(sidecar["recurrence_rate"] - 0.15) <= 2.0 / m


def test_rp_export_frame_out_of_range(mini_corpus, tmp_path, capsys):
    wav = mini_corpus.parent / "tonal-s0-u0.wav"
    out = tmp_path / "plot.pgm"
    rc = main(["rp-export", "--wav", str(wav), "--frame", "999",
               "--out", str(out)])
    assert rc == 2
    assert "out of range" in capsys.readouterr().err
    assert not out.exists()


def test_missing_manifest(tmp_path, capsys):
    rc = main(["extract", "--manifest", str(tmp_path / "nope.csv"),
               "--out", str(tmp_path / "o.csv")])
    assert rc == 1
    assert "recurrex:" in capsys.readouterr().err


def test_bad_config_value_fails_before_work(mini_corpus, tmp_path, capsys):
    rc = main(["extract", "--manifest", str(mini_corpus),
               "--out", str(tmp_path / "o.csv"), "--embedding.bins", "1"])
    assert rc == 1
    assert "bins" in capsys.readouterr().err
    assert not (tmp_path / "o.csv").exists()


def test_unknown_dotted_key_is_a_config_error(mini_corpus, tmp_path, capsys):
    rc = main(["extract", "--manifest", str(mini_corpus),
               "--out", str(tmp_path / "o.csv"), "--nosuch.option", "1"])
    assert rc == 1
    assert "nosuch" in capsys.readouterr().err


def test_usage_errors_exit_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["extract", "--manifest", "m.csv", "--out", "o.csv", "--bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["extract", "--manifest", "m.csv", "--out", "o.csv",
              "--embedding.bins"])  # dotted flag without a value
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "recurrex" in capsys.readouterr().out


def test_config_file_plus_override(mini_corpus, tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text("[recurrence]\nvalue = 0.1\n")
    out = tmp_path / "plot.pgm"
    wav = mini_corpus.parent / "turbulent-s1-u0.wav"
    rc = main(["rp-export", "--wav", str(wav), "--out", str(out),
               "--config", str(cfg), "--recurrence.value=0.25"])
    assert rc == 0
    sidecar = json.loads(out.with_suffix(".json").read_text())
    assert sidecar["criterion"]["value"] == 0.25  # flag beat the file
