"""Hash embedder and subprocess plug-in tests."""

import numpy as np
import pytest

from climkg.embedding import (
    EMBEDDING_DIM,
    HashEmbedder,
    fnv1a64,
    get_embedder,
)


class TestFnv1a:
    def test_published_reference_values(self):
        # standard FNV-1a 64-bit test vectors
        assert fnv1a64(b"") == 0xCBF29CE484222325
        assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
        assert fnv1a64(b"foobar") == 0x85944171F73967E8


class TestHashEmbedder:
    def setup_method(self):
        self.embedder = HashEmbedder()

    def test_dimension(self):
        assert self.embedder.embed_text("hello world").shape == (EMBEDDING_DIM,)
        assert EMBEDDING_DIM == 384

    def test_deterministic(self):
        a = self.embedder.embed_text("sea surface temperature")
        b = HashEmbedder().embed_text("sea surface temperature")
        np.testing.assert_array_equal(a, b)

    def test_unit_norm(self):
        vec = self.embedder.embed_text("some nonempty text")
        assert np.linalg.norm(vec) == pytest.approx(1.0)

    def test_empty_text_zero_vector(self):
        assert not self.embedder.embed_text("").any()
        assert not self.embedder.embed_text("  !!! ").any()

    def test_case_and_punctuation_insensitive(self):
        a = self.embedder.embed_text("Sea-Surface Temperature!")
        b = self.embedder.embed_text("sea surface temperature")
        np.testing.assert_array_equal(a, b)

    def test_word_order_sensitive(self):
        a = self.embedder.embed_text("york new")
        b = self.embedder.embed_text("new york")
        assert not np.array_equal(a, b)

    def test_related_text_scores_higher(self):
        q = self.embedder.embed_text("new york")
        near = self.embedder.embed_text("new york united states")
        far = self.embedder.embed_text("southern ocean salinity transect")
        assert float(q @ near) > float(q @ far)

    def test_batch_matches_single(self):
        texts = ["a b c", "", "sea level"]
        batch = self.embedder.embed_batch(texts)
        for text, vec in zip(texts, batch):
            np.testing.assert_array_equal(vec, self.embedder.embed_text(text))


class TestProviders:
    def test_hash_provider(self):
        assert isinstance(get_embedder("hash"), HashEmbedder)

    def test_unknown_provider(self):
        with pytest.raises(ValueError):
            get_embedder("quantum")

    def test_subprocess_provider_round_trip(self, tmp_path):
        script = tmp_path / "echo_embedder.py"
        script.write_text(
            "import json, sys\n"
            "for line in sys.stdin:\n"
            "    req = json.loads(line)\n"
            "    vec = [0.0] * 384\n"
            "    vec[len(req['text']) % 384] = 1.0\n"
            "    print(json.dumps({'vector': vec}), flush=True)\n"
        )
        import sys

        embedder = get_embedder(f"subprocess:{sys.executable} {script}")
        vec = embedder.embed_text("abcd")
        assert vec.shape == (EMBEDDING_DIM,)
        assert vec[4] == 1.0

    def test_subprocess_protocol_violation_falls_back(self, tmp_path):
        script = tmp_path / "broken.py"
        script.write_text(
            "import sys\n"
            "for line in sys.stdin:\n"
            "    print('not json', flush=True)\n"
        )
        import sys

        embedder = get_embedder(f"subprocess:{sys.executable} {script}")
        vec = embedder.embed_text("sea level")
        np.testing.assert_array_equal(vec, HashEmbedder().embed_text("sea level"))
