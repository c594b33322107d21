"""Kernel tests against independent oracles and the stdlib reference."""

import difflib
import json
import os
import random
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from climkg import kernels


def oracle_matched(a: str, b: str) -> int:
    """Brute-force Ratcliff/Obershelp matched total.

    Longest common substring chosen with ties toward the smallest start in
    a, then in b; recurse on both flanks.
    """
    if not a or not b:
        return 0
    best_size = best_i = best_j = 0
    for i in range(len(a)):
        for j in range(len(b)):
            k = 0
            while i + k < len(a) and j + k < len(b) and a[i + k] == b[j + k]:
                k += 1
            if k > best_size:
                best_size, best_i, best_j = k, i, j
    if best_size == 0:
        return 0
    return (
        best_size
        + oracle_matched(a[:best_i], b[:best_j])
        + oracle_matched(a[best_i + best_size :], b[best_j + best_size :])
    )


def oracle_ratio(a: str, b: str) -> float:
    if a == b:
        return 1.0
    if not a or not b:
        return 0.0
    return 2.0 * oracle_matched(a, b) / (len(a) + len(b))


class TestGestaltRatio:
    def test_matches_bruteforce_oracle_short_strings(self):
        rng = random.Random(17)
        for _ in range(300):
            a = "".join(rng.choices("abc", k=rng.randint(0, 10)))
            b = "".join(rng.choices("abc", k=rng.randint(0, 10)))
            assert kernels.gestalt_ratio(a, b) == pytest.approx(oracle_ratio(a, b))

    def test_matches_difflib_long_strings(self):
        rng = random.Random(5)
        words = "sea ice temp flux wind soil snow rain cloud heat".split()
        for _ in range(100):
            a = " ".join(rng.choices(words, k=rng.randint(1, 12)))
            b = " ".join(rng.choices(words, k=rng.randint(1, 12)))
            expect = difflib.SequenceMatcher(None, a, b, autojunk=False).ratio()
            assert kernels.gestalt_ratio(a, b) == pytest.approx(expect)

    def test_equal_strings_exactly_one(self):
        assert kernels.gestalt_ratio("", "") == 1.0
        assert kernels.gestalt_ratio("abc", "abc") == 1.0

    def test_empty_vs_nonempty_zero(self):
        assert kernels.gestalt_ratio("", "abc") == 0.0
        assert kernels.gestalt_ratio("abc", "") == 0.0

    @given(st.text(max_size=12), st.text(max_size=12))
    @settings(max_examples=200, deadline=None)
    def test_bounds_and_upper_bound(self, a, b):
        r = kernels.gestalt_ratio(a, b)
        assert 0.0 <= r <= 1.0
        assert kernels.gestalt_ratio_upper_bound(a, b) >= r - 1e-12


class TestPairwiseMatrix:
    def test_exactly_symmetric_and_canonical(self):
        rng = random.Random(3)
        strings = [
            "".join(rng.choices("abcd", k=rng.randint(0, 9))) for _ in range(30)
        ]
        m = kernels.pairwise_ratio_matrix(strings)
        assert np.array_equal(m, m.T)
        assert np.all(np.diag(m) == 1.0)
        for i in range(len(strings)):
            for j in range(i + 1, len(strings)):
                p, q = sorted((strings[i], strings[j]))
                assert m[i, j] == pytest.approx(oracle_ratio(p, q))

    def test_empty_input(self):
        assert kernels.pairwise_ratio_matrix([]).shape == (0, 0)

    def test_fallback_path_agrees(self):
        """The env-flag fallback produces the same matrix as the active path."""
        strings = ["sea surface temperature", "sea surface salinity",
                   "soil moisture", "", "snow depth", "sea surface temperature"]
        here = kernels.pairwise_ratio_matrix(strings)
        code = (
            "import json, sys\n"
            "from climkg import kernels\n"
            "assert not kernels.USE_NUMBA\n"
            "m = kernels.pairwise_ratio_matrix(json.loads(sys.argv[1]))\n"
            "print(json.dumps(m.tolist()))\n"
        )
        env = dict(os.environ, CLIMKG_DISABLE_NUMBA="1")
        out = subprocess.run(
            [sys.executable, "-c", code, json.dumps(strings)],
            env=env, capture_output=True, text=True, check=True,
        )
        other = np.array(json.loads(out.stdout.strip().splitlines()[-1]))
        np.testing.assert_allclose(here, other, atol=1e-12)


class TestCosine:
    def test_scores_match_numpy_oracle(self):
        rng = np.random.default_rng(11)
        m = rng.standard_normal((50, 16))
        q = rng.standard_normal(16)
        expect = (m @ q) / (np.linalg.norm(m, axis=1) * np.linalg.norm(q))
        np.testing.assert_allclose(kernels.cosine_scores(m, q), expect, atol=1e-12)

    def test_zero_rows_and_zero_query(self):
        m = np.vstack([np.zeros(4), np.ones(4)])
        assert kernels.cosine_scores(m, np.ones(4))[0] == 0.0
        assert np.all(kernels.cosine_scores(m, np.zeros(4)) == 0.0)

    def test_topk_tie_break_by_index(self):
        m = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        idx, scores = kernels.cosine_topk(m, np.array([1.0, 0.0]), 2)
        assert list(idx) == [0, 1]
        assert scores[0] == pytest.approx(1.0)

    def test_topk_k_larger_than_n(self):
        m = np.eye(3)
        idx, _ = kernels.cosine_topk(m, np.array([1.0, 0.0, 0.0]), 10)
        assert len(idx) == 3
