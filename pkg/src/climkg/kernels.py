"""Hot numeric kernels: gestalt string-similarity ratio and cosine scoring.

Both kernels have a numba @njit implementation and a pure numpy/stdlib
fallback. Set CLIMKG_DISABLE_NUMBA=1 to force the fallback path (also used
automatically when numba is unavailable). `benchmarks/bench_kernels.py`
compares the two.
"""

from __future__ import annotations

import difflib
import os

import numpy as np


def _numba_enabled() -> bool:
    flag = os.environ.get("CLIMKG_DISABLE_NUMBA", "0").strip().lower()
    return flag not in ("1", "true", "yes")


USE_NUMBA = _numba_enabled()

if USE_NUMBA:
    try:
        from numba import njit, prange
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

if not USE_NUMBA:  # identity decorators so the jitted defs still import
    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        if args and callable(args[0]):
            return args[0]
        return wrap

    prange = range


# ---------------------------------------------------------------------------
# Ratcliff/Obershelp gestalt ratio
# ---------------------------------------------------------------------------

@njit(cache=True)
def _longest_match(a, b, alo, ahi, blo, bhi):
    """Longest common substring of a[alo:ahi] and b[blo:bhi].

    Ties resolved toward the smallest start in a, then in b, matching
    difflib.SequenceMatcher.find_longest_match with no junk heuristic.
    """
    best_i = alo
    best_j = blo
    best_size = 0
    width = bhi - blo
    j2len = np.zeros(width, dtype=np.int64)
    for i in range(alo, ahi):
        new_j2len = np.zeros(width, dtype=np.int64)
        for j in range(blo, bhi):
            if a[i] == b[j]:
                k = 1
                if j > blo:
                    k = j2len[j - 1 - blo] + 1
                new_j2len[j - blo] = k
                if k > best_size:
                    best_size = k
                    best_i = i - k + 1
                    best_j = j - k + 1
        j2len = new_j2len
    return best_i, best_j, best_size


@njit(cache=True)
def _matched_total(a, b):
    """Total matched characters from recursive longest-match decomposition."""
    la = len(a)
    lb = len(b)
    total = 0
    cap = 2 * (la + lb) + 8
    stack = np.empty((cap, 4), dtype=np.int64)
    stack[0, 0] = 0
    stack[0, 1] = la
    stack[0, 2] = 0
    stack[0, 3] = lb
    top = 1
    while top > 0:
        top -= 1
        alo = stack[top, 0]
        ahi = stack[top, 1]
        blo = stack[top, 2]
        bhi = stack[top, 3]
        if alo >= ahi or blo >= bhi:
            continue
        i, j, k = _longest_match(a, b, alo, ahi, blo, bhi)
        if k > 0:
            total += k
            stack[top, 0] = alo
            stack[top, 1] = i
            stack[top, 2] = blo
            stack[top, 3] = j
            top += 1
            stack[top, 0] = i + k
            stack[top, 1] = ahi
            stack[top, 2] = j + k
            stack[top, 3] = bhi
            top += 1
    return total


def _encode(s: str) -> np.ndarray:
    return np.array([ord(c) for c in s], dtype=np.int32)


def gestalt_ratio(a: str, b: str) -> float:
    """Similarity in [0, 1]: 2*M / (len(a)+len(b)) with M the matched total.

    Equal strings give exactly 1.0; two empty strings define 1.0.
    """
    if a == b:
        return 1.0
    if not a or not b:
        return 0.0
    if USE_NUMBA:
        total = _matched_total(_encode(a), _encode(b))
        return 2.0 * total / (len(a) + len(b))
    return difflib.SequenceMatcher(None, a, b, autojunk=False).ratio()


def gestalt_ratio_upper_bound(a: str, b: str) -> float:
    """Cheap upper bound on gestalt_ratio, for threshold short-circuits."""
    la, lb = len(a), len(b)
    if la + lb == 0:
        return 1.0
    return 2.0 * min(la, lb) / (la + lb)


@njit(cache=True)
def _codes_leq(a, b):
    """Lexicographic a <= b over code arrays."""
    n = min(len(a), len(b))
    for k in range(n):
        if a[k] != b[k]:
            return a[k] < b[k]
    return len(a) <= len(b)


@njit(cache=True, parallel=True)
def _pairwise_matrix(codes, lengths):
    n = codes.shape[0]
    out = np.ones((n, n), dtype=np.float64)
    for i in prange(n):
        for j in range(i + 1, n):
            li = lengths[i]
            lj = lengths[j]
            if li + lj == 0:
                r = 1.0
            elif li == 0 or lj == 0:
                r = 0.0
            else:
                a = codes[i, :li]
                b = codes[j, :lj]
                if _codes_leq(a, b):
                    total = _matched_total(a, b)
                else:
                    total = _matched_total(b, a)
                r = 2.0 * total / (li + lj)
            out[i, j] = r
            out[j, i] = r
    return out


def pairwise_ratio_matrix(strings: list[str]) -> np.ndarray:
    """Symmetric n x n gestalt-ratio matrix (diagonal 1.0).

    Each pair is compared in canonical (lexicographic) argument order so the
    matrix is exactly symmetric regardless of input order.
    """
    n = len(strings)
    if n == 0:
        return np.ones((0, 0))
    if USE_NUMBA:
        maxlen = max((len(s) for s in strings), default=0)
        codes = np.zeros((n, max(maxlen, 1)), dtype=np.int32)
        lengths = np.zeros(n, dtype=np.int64)
        for i, s in enumerate(strings):
            lengths[i] = len(s)
            for k, c in enumerate(s):
                codes[i, k] = ord(c)
        return _pairwise_matrix(codes, lengths)
    out = np.ones((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            p, q = sorted((strings[i], strings[j]))
            r = gestalt_ratio(p, q)
            out[i, j] = out[j, i] = r
    return out


# ---------------------------------------------------------------------------
# Cosine scoring
# ---------------------------------------------------------------------------

@njit(cache=True, parallel=True)
def _cosine_scores_njit(matrix, query):
    n = matrix.shape[0]
    out = np.zeros(n, dtype=np.float64)
    qn = 0.0
    for d in range(query.shape[0]):
        qn += query[d] * query[d]
    qn = np.sqrt(qn)
    if qn == 0.0:
        return out
    for i in prange(n):
        dot = 0.0
        vn = 0.0
        for d in range(matrix.shape[1]):
            dot += matrix[i, d] * query[d]
            vn += matrix[i, d] * matrix[i, d]
        if vn > 0.0:
            out[i] = dot / (np.sqrt(vn) * qn)
    return out


def cosine_scores(matrix: np.ndarray, query: np.ndarray) -> np.ndarray:
    """Cosine similarity of each matrix row against query; zero rows score 0."""
    matrix = np.asarray(matrix, dtype=np.float64)
    query = np.asarray(query, dtype=np.float64)
    if USE_NUMBA:
        return _cosine_scores_njit(matrix, query)
    qn = np.linalg.norm(query)
    if qn == 0.0 or matrix.shape[0] == 0:
        return np.zeros(matrix.shape[0])
    norms = np.linalg.norm(matrix, axis=1)
    dots = matrix @ query
    out = np.zeros(matrix.shape[0])
    nz = norms > 0.0
    out[nz] = dots[nz] / (norms[nz] * qn)
    return out


def cosine_topk(matrix: np.ndarray, query: np.ndarray, k: int):
    """Exact top-k rows by cosine similarity; ties broken by row index asc.

    Returns (indices, scores) arrays of length min(k, n).
    """
    scores = cosine_scores(matrix, query)
    n = scores.shape[0]
    k = min(k, n)
    order = np.lexsort((np.arange(n), -scores))
    top = order[:k]
    return top, scores[top]
