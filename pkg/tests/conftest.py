import numpy as np
import pytest

import recurrex as rx
from recurrex.cli import gen_fixtures


@pytest.fixture(scope="session")
def sine_signal():
    return rx.gen_synthetic("sine", 320, period=64.0)


@pytest.fixture(scope="session")
def sine_frame(sine_signal):
    return rx.frame_signal(sine_signal)[0]


@pytest.fixture
def make_noise_frame():
    def make(seed=2025, n=320):
        sig = rx.gen_synthetic("white_noise", n, seed=seed)
        return rx.frame_signal(sig)[0]
    return make


@pytest.fixture(scope="session")
def mini_corpus(tmp_path_factory):
    """A tiny labeled corpus: 3 classes x 2 speakers x 2 utterances."""
    root = tmp_path_factory.mktemp("corpus")
    return gen_fixtures(root, seed=0, n_speakers=2, n_utts=2, duration_s=0.3)


@pytest.fixture
def random_rp():
    def make(m, seed, p=0.3):
        rng = np.random.default_rng(seed)
        upper = rng.random((m, m)) < p
        r = np.triu(upper, 1)
        r = (r | r.T).astype(np.uint8)
        np.fill_diagonal(r, 1)
        return r
    return make
