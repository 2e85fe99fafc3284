"""Audio ingestion, framing, segmentation, and synthetic test signals.

Amplitudes are dimensionless floats in [-1, 1]; WAV input is PCM 16-bit
(multi-channel content is averaged down to mono).  All operations are pure:
types are frozen and safe to share across workers.
"""

import wave
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyInputError, FormatError, ParameterError, ParseError

MIN_FRAME_LEN = 32  # shortest frame the embedding estimators accept


@dataclass(frozen=True)
class Signal:
    """A sampled waveform: ``samples`` (float64 array) at ``sample_rate`` Hz."""

    samples: np.ndarray
    sample_rate: int
    source_id: str = ""

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ParameterError(f"sample_rate must be positive, got {self.sample_rate}")

    @property
    def duration(self):
        return len(self.samples) / self.sample_rate


@dataclass(frozen=True)
class Frame:
    """A contiguous slice of a parent signal.

    ``start_sample`` indexes the parent; ``frame_index`` is the ordinal in
    the frame sequence that produced it.
    """

    samples: np.ndarray
    start_sample: int
    frame_index: int

    def __len__(self):
        return len(self.samples)


@dataclass(frozen=True)
class Segment:
    frames: tuple = field(default_factory=tuple)
    start_time: float = 0.0
    end_time: float = 0.0


def load_wav(path):
    """Read a PCM 16-bit WAV file into a :class:`Signal`.

    Integer samples are scaled by 1/32768 into [-1, 1); multi-channel audio
    is averaged to mono.  Unsupported encodings raise :class:`FormatError`,
    corrupt or truncated files raise :class:`ParseError`.
    """
    try:
        with wave.open(str(path), "rb") as wf:
            width = wf.getsampwidth()
            if width != 2 or wf.getcomptype() != "NONE":
                raise FormatError(
                    f"{path}: only PCM 16-bit WAV is supported "
                    f"(sample width {width} bytes, compression {wf.getcomptype()!r})"
                )
            channels = wf.getnchannels()
            rate = wf.getframerate()
            raw = wf.readframes(wf.getnframes())
    except wave.Error as exc:
        # the stdlib reports unsupported format tags (e.g. IEEE float) as
        # "unknown format: N" while reading the header
        if "unknown format" in str(exc):
            raise FormatError(f"{path}: {exc}") from exc
        raise ParseError(f"{path}: {exc}") from exc
    except EOFError as exc:
        raise ParseError(f"{path}: truncated file") from exc

    data = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32768.0
    if channels > 1:
        usable = len(data) - len(data) % channels
        data = data[:usable].reshape(-1, channels).mean(axis=1)
    return Signal(samples=data, sample_rate=rate, source_id=str(path))


def write_wav(path, sig):
    """Write a :class:`Signal` as mono PCM 16-bit (clipping to full scale)."""
    pcm = np.clip(np.round(sig.samples * 32768.0), -32768, 32767).astype("<i2")
    with wave.open(str(path), "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(sig.sample_rate)
        wf.writeframes(pcm.tobytes())


def frame_signal(sig, frame_ms=20.0, hop_ms=10.0):
    """Slice a signal into overlapping frames.

    Frame length is ``N = round(frame_ms * sample_rate / 1000)`` samples and
    the hop is ``H = round(hop_ms * sample_rate / 1000)``; a trailing partial
    frame is dropped, giving ``floor((len - N) / H) + 1`` frames.
    """
    if frame_ms <= 0 or hop_ms <= 0:
        raise ParameterError("frame_ms and hop_ms must be positive")
    n = int(round(frame_ms * sig.sample_rate / 1000.0))
    hop = int(round(hop_ms * sig.sample_rate / 1000.0))
    if n < MIN_FRAME_LEN:
        raise ParameterError(
            f"frame of {n} samples is below the {MIN_FRAME_LEN}-sample minimum"
        )
    if hop < 1:
        raise ParameterError("hop rounds to zero samples")
    total = len(sig.samples)
    if total < n:
        raise EmptyInputError(
            f"signal has {total} samples, shorter than one {n}-sample frame"
        )
    count = (total - n) // hop + 1
    return [
        Frame(samples=sig.samples[k * hop:k * hop + n],
              start_sample=k * hop, frame_index=k)
        for k in range(count)
    ]


def segment_signal(sig, seg_s=1.0, stride_s=0.5, frame_ms=20.0, hop_ms=10.0):
    """Cut a signal into overlapping segments, each framed by frame_signal.

    Segments of ``seg_s`` seconds start every ``stride_s`` seconds.  An
    utterance shorter than one segment yields a single whole-utterance
    segment.  A trailing partial segment is kept when it covers at least
    half a segment length, otherwise it is merged into the previous one.
    """
    if seg_s <= 0 or stride_s <= 0:
        raise ParameterError("seg_s and stride_s must be positive")
    total = len(sig.samples)
    if total == 0:
        raise EmptyInputError("empty signal")
    seg_n = int(round(seg_s * sig.sample_rate))
    stride_n = int(round(stride_s * sig.sample_rate))
    if seg_n < 1 or stride_n < 1:
        raise ParameterError("segment or stride rounds to zero samples")

    if total < seg_n:
        bounds = [(0, total)]
    else:
        bounds = []
        k = 0
        while k * stride_n + seg_n <= total:
            bounds.append((k * stride_n, k * stride_n + seg_n))
            k += 1
        if k * stride_n < total:
            tail = (k * stride_n, total)
            if 2 * (total - k * stride_n) >= seg_n:
                bounds.append(tail)
            else:
                bounds[-1] = (bounds[-1][0], total)

    segments = []
    for start, end in bounds:
        piece = Signal(samples=sig.samples[start:end],
                       sample_rate=sig.sample_rate, source_id=sig.source_id)
        frames = frame_signal(piece, frame_ms=frame_ms, hop_ms=hop_ms)
        # re-anchor frame positions to the parent signal
        frames = [Frame(samples=f.samples, start_sample=start + f.start_sample,
                        frame_index=f.frame_index) for f in frames]
        segments.append(Segment(frames=tuple(frames),
                                start_time=start / sig.sample_rate,
                                end_time=end / sig.sample_rate))
    return segments


def _lorenz96_deriv(x, forcing):
    return (np.roll(x, -1) - np.roll(x, 2)) * np.roll(x, 1) - x + forcing


def gen_synthetic(kind, n, seed=0, sample_rate=16000, **params):
    """Deterministic synthetic signals for tests, demos, and fixtures.

    Parameters
    ----------
    kind : {"sine", "white_noise", "lorenz96", "constant"}
        sine:        ``amplitude * sin(2*pi*i / period)``.
        white_noise: i.i.d. uniform over [-amplitude, amplitude].
        lorenz96:    one coordinate of the K-variable cyclic system
                     ``dx_k/dt = (x_{k+1} - x_{k-2}) x_{k-1} - x_k + F``
                     integrated with classic RK4 (one step per sample, the
                     first 1000 steps discarded), peak-normalized to
                     ``amplitude``.  F = 8 gives chaos.
        constant:    every sample equals ``value``.
    n : int
        Number of samples to emit.
    seed : int
        Seeds the generator state (noise draws, lorenz96 initial condition).

    Identical (kind, params, seed) produce bit-identical output.
    """
    if n <= 0:
        raise ParameterError(f"sample count must be positive, got {n}")
    rng = np.random.default_rng(seed)

    if kind == "sine":
        period = params.get("period", 64.0)
        amplitude = params.get("amplitude", 1.0)
        if period <= 0:
            raise ParameterError("sine period must be positive")
        samples = amplitude * np.sin(2.0 * np.pi * np.arange(n) / period)
    elif kind == "white_noise":
        amplitude = params.get("amplitude", 1.0)
        samples = rng.uniform(-amplitude, amplitude, n)
    elif kind == "constant":
        samples = np.full(n, float(params.get("value", 0.5)))
    elif kind == "lorenz96":
        K = int(params.get("K", 5))
        forcing = float(params.get("F", 8.0))
        dt = float(params.get("dt", 0.05))
        amplitude = params.get("amplitude", 1.0)
        coord = int(params.get("coord", 0))
        transient = int(params.get("transient", 1000))
        if K < 4:
            raise ParameterError(f"lorenz96 needs K >= 4, got {K}")
        if dt <= 0:
            raise ParameterError("integration step must be positive")
        x = np.full(K, forcing) + 0.01 * rng.standard_normal(K)
        out = np.empty(n)
        for step in range(transient + n):
            k1 = _lorenz96_deriv(x, forcing)
            k2 = _lorenz96_deriv(x + 0.5 * dt * k1, forcing)
            k3 = _lorenz96_deriv(x + 0.5 * dt * k2, forcing)
            k4 = _lorenz96_deriv(x + dt * k3, forcing)
            x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if step >= transient:
                out[step - transient] = x[coord]
        peak = np.max(np.abs(out))
        samples = amplitude * out / peak if peak > 0 else out
    else:
        raise ParameterError(f"unknown synthetic kind {kind!r}")

    return Signal(samples=np.asarray(samples, dtype=np.float64),
                  sample_rate=sample_rate,
                  source_id=f"synthetic:{kind}:{seed}")
