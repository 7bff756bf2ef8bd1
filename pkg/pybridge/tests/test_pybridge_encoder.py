import numpy as np
import pytest
import torch

from pybridge.encoder import (
    HashTokenizer,
    SentenceEncoder,
    build_encoder,
    load_model,
    save_model,
)

SMALL = dict(vocab_size=512, dim=64, n_layers=1, n_heads=4, ff_dim=128,
             max_tokens=32)


def small_encoder(seed=0):
    torch.manual_seed(seed)
    return SentenceEncoder(**SMALL)


class TestHashTokenizer:
    def test_deterministic_and_case_insensitive(self):
        tok = HashTokenizer(vocab_size=256, max_tokens=16)
        assert tok.encode("Beam LOSS") == tok.encode("beam loss")
        assert tok.encode("beam") == tok.encode("beam")

    def test_truncation(self):
        tok = HashTokenizer(vocab_size=256, max_tokens=3)
        assert len(tok.encode("a b c d e f")) == 3

    def test_pad_never_produced(self):
        tok = HashTokenizer(vocab_size=8, max_tokens=64)
        ids = tok.encode("many different words hash into few buckets here")
        assert all(i != HashTokenizer.PAD for i in ids)

    def test_batch_shapes_and_mask(self):
        tok = HashTokenizer(vocab_size=256, max_tokens=16)
        ids, mask = tok.batch(["one two three", "one"])
        assert ids.shape == mask.shape == (2, 3)
        assert mask.tolist() == [[1.0, 1.0, 1.0], [1.0, 0.0, 0.0]]

    def test_bad_vocab_size(self):
        with pytest.raises(ValueError):
            HashTokenizer(vocab_size=1)


class TestSentenceEncoder:
    def test_identical_texts_cosine_one(self):
        enc = small_encoder()
        rows = enc.encode(["the beam was lost", "the beam was lost"])
        cos = float(rows[0] @ rows[1]) / (
            np.linalg.norm(rows[0]) * np.linalg.norm(rows[1])
        )
        assert cos == pytest.approx(1.0, abs=1e-4)

    def test_eval_mode_deterministic(self):
        enc = small_encoder()
        a = enc.encode(["quench detected in sector three"])
        b = enc.encode(["quench detected in sector three"])
        assert np.allclose(a, b, atol=1e-6)

    def test_empty_text_is_finite(self):
        enc = small_encoder()
        rows = enc.encode(["", "actual words"])
        assert np.isfinite(rows).all()

    def test_output_dim(self):
        enc = small_encoder()
        assert enc.encode(["x"]).shape == (1, 64)
        assert enc.dim == 64

    def test_save_load_roundtrip(self, tmp_path):
        enc = small_encoder()
        save_model(enc, tmp_path / "model")
        back = load_model(tmp_path / "model")
        texts = ["cavity detuning compensation"]
        assert np.allclose(enc.encode(texts), back.encode(texts), atol=1e-6)


class TestBuildEncoder:
    def test_tiny_default_dim(self):
        enc = build_encoder("tiny", seed=0)
        assert enc.dim == 768

    def test_tiny_seeded_reproducible(self):
        a = build_encoder("tiny", seed=5, **SMALL)
        b = build_encoder("tiny", seed=5, **SMALL)
        t = ["beam loss monitor"]
        assert np.allclose(a.encode(t), b.encode(t), atol=1e-7)

    def test_saved_directory_resolves(self, tmp_path):
        save_model(small_encoder(), tmp_path / "m")
        enc = build_encoder(str(tmp_path / "m"))
        assert enc.dim == 64

    def test_unknown_model_raises(self, monkeypatch):
        monkeypatch.setenv("HF_HUB_OFFLINE", "1")
        with pytest.raises(RuntimeError, match="no-such-model"):
            build_encoder("no-such-model-xyz" + "/no-such-model")
