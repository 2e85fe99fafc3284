import numpy as np
import pytest

import recurrex as rx
from recurrex.config import Config, load_config
from recurrex.errors import ParseError
from recurrex.pipeline import (ManifestRow, extract_segments,
                               extract_utterance, frame_rqa, process_file,
                               read_manifest, resolve_workers, run_extract)


def test_read_manifest(tmp_path):
    (tmp_path / "m.csv").write_text(
        "path,utterance_id,speaker_id,session_id,label\n"
        "a.wav,u1,s1,ses0,calm\n"
        "/abs/b.wav,u2,,,\n")
    rows = read_manifest(tmp_path / "m.csv")
    assert rows[0].path == tmp_path / "a.wav"  # resolved against manifest dir
    assert str(rows[1].path) == "/abs/b.wav"
    assert rows[0].label == "calm" and rows[1].label == ""


def test_read_manifest_minimal_columns(tmp_path):
    (tmp_path / "m.csv").write_text("path,utterance_id\nx.wav,u1\n")
    rows = read_manifest(tmp_path / "m.csv")
    assert rows == [ManifestRow(path=tmp_path / "x.wav", utterance_id="u1")]


@pytest.mark.parametrize("text", [
    "utterance_id\nu1\n",                      # no path column
    "path\nx.wav\n",                           # no utterance_id column
    "path,utterance_id,color\nx.wav,u1,red\n",  # unknown column
    "path,utterance_id\n",                     # no data rows
])
def test_read_manifest_rejects(tmp_path, text):
    (tmp_path / "m.csv").write_text(text)
    with pytest.raises(ParseError):
        read_manifest(tmp_path / "m.csv")


def test_frame_rqa_matches_manual_chain(sine_frame):
    cfg = Config()
    v = frame_rqa(sine_frame, cfg)
    params = rx.estimate_params(sine_frame)
    traj = rx.embed(sine_frame, params)
    dist = rx.pairwise_distances(traj, q=1)
    rp = rx.recurrence_plot(dist, rx.fixed_rr(0.15))
    want = rx.rqa_measures(rp)
    assert np.array_equal(v.as_array(), want.as_array())


def test_frame_rqa_degenerate_frame_is_all_black():
    sig = rx.gen_synthetic("constant", 320, value=0.25)
    frame = rx.frame_signal(sig)[0]
    v = frame_rqa(frame, Config())
    assert v.rr == 1.0 and v.lam == 1.0
    assert np.array_equal(v.as_array(),
                          rx.rqa_measures(np.ones((320, 320), np.uint8)).as_array())


def test_extract_utterance_shape():
    sig = rx.gen_synthetic("white_noise", 3360, seed=4)
    fv = extract_utterance(sig, utterance_id="u9", label="x")
    assert len(fv) == 432
    assert fv.utterance_id == "u9" and fv.segment_index is None


def test_extract_segments_indices_and_cache():
    sig = rx.gen_synthetic("white_noise", 32000, seed=5)  # 2 s
    cfg = load_config(overrides={"signal.segments": "true"})
    out = extract_segments(sig, cfg, utterance_id="u")
    # spans 0-1, 0.5-1.5, 1-2, plus the half-length tail 1.5-2
    assert [fv.segment_index for fv in out] == [0, 1, 2, 3]
    assert all(len(fv) == 432 for fv in out)
    # second half of segment 0 == first half of segment 1 on the shared
    # frame grid, yet the vectors differ because the windows differ
    assert not np.array_equal(out[0].values, out[1].values)


def test_segment_vectors_match_whole_file_on_short_audio():
    sig = rx.gen_synthetic("white_noise", 4000, seed=6)  # 0.25 s, < 1 segment
    cfg = load_config(overrides={"signal.segments": "true"})
    segs = extract_segments(sig, cfg, utterance_id="u")
    whole = extract_utterance(sig, utterance_id="u")
    assert len(segs) == 1
    assert np.array_equal(segs[0].values, whole.values)


def test_process_file_routes_on_segments_flag(mini_corpus):
    rows = read_manifest(mini_corpus)
    row = rows[0]
    assert [fv.segment_index for fv in process_file(row)] == [None]
    cfg = load_config(overrides={"signal.segments": "true"})
    assert [fv.segment_index for fv in process_file(row, cfg)] == [0]


def test_resolve_workers(monkeypatch):
    assert resolve_workers(3) == 3
    monkeypatch.setenv("RECURREX_THREADS", "7")
    assert resolve_workers(0) == 7
    monkeypatch.setenv("RECURREX_THREADS", "soon")
    with pytest.raises(ParseError):
        resolve_workers(0)
    monkeypatch.delenv("RECURREX_THREADS")
    assert resolve_workers(0) >= 1


def test_run_extract_parallel_matches_serial(mini_corpus):
    rows = read_manifest(mini_corpus)[:4]
    serial = run_extract(rows, workers=1)
    parallel = run_extract(rows, workers=2)
    assert [fv.utterance_id for fv in serial] == [r.utterance_id for r in rows]
    for a, b in zip(serial, parallel):
        assert a.utterance_id == b.utterance_id
        assert np.array_equal(a.values, b.values)
