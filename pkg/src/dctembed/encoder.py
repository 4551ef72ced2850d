"""Fixed-length sentence vectors from (N, d) word-vector matrices.

``encode_dct`` is the order-preserving encoder: each embedding feature is
treated as a length-N signal and summarized by its first K DCT-II
coefficients. AVG, MAX and the word-level DCT* variant are baselines.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dct_core import apply_basis

METHODS = ("dct", "avg", "max", "dct-star")
DEFAULT_K_MAX = 7


@dataclass(frozen=True, eq=False)
class SentenceEmbedding:
    values: np.ndarray
    method: str
    k_count: int = None

    def __len__(self):
        return self.values.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


def as_matrix(mat, dim=None):
    """Validate and widen a sentence matrix to float64 of shape (N, d)."""
    arr = np.asarray(mat, dtype=np.float64)
    if arr.ndim == 1 and arr.size == 0 and dim is not None:
        arr = arr.reshape(0, dim)
    if arr.ndim != 2:
        raise ValueError(f"sentence matrix must be 2-D, got shape {arr.shape}")
    if arr.shape[1] < 1:
        raise ValueError("sentence matrix needs at least one feature column")
    if not np.all(np.isfinite(arr)):
        raise ValueError("sentence matrix contains NaN or infinite values")
    return arr


def check_k(k_count, k_max=DEFAULT_K_MAX):
    if isinstance(k_count, bool) or not isinstance(k_count, (int, np.integer)):
        raise TypeError(f"k_count must be an integer, got {k_count!r}")
    if k_count < 1:
        raise ValueError(f"k_count must be >= 1, got {k_count}")
    if k_max is not None and k_count > k_max:
        raise ValueError(f"k_count {k_count} exceeds the configured maximum {k_max}")


def pad_rows(mat, k_count):
    """Append zero rows so the matrix has at least ``k_count`` rows."""
    n, d = mat.shape
    if n >= k_count:
        return mat
    padded = np.zeros((k_count, d))
    padded[:n] = mat
    return padded


def encode_dct(plan, mat, k_count, k_max=DEFAULT_K_MAX):
    """First ``k_count`` DCT coefficients of every feature column, flattened.

    Output layout is coefficient-major: ``values[k * d + j]`` is coefficient
    k of feature j, so the first d entries are the c[0] block. Sentences
    shorter than ``k_count`` (including empty ones) are zero-padded to
    exactly ``k_count`` rows before transforming.
    """
    check_k(k_count, k_max)
    mat = as_matrix(mat)
    n = max(mat.shape[0], k_count)
    plan.check_length(n)
    coeffs = apply_basis(plan.basis(n)[:k_count], pad_rows(mat, k_count))
    return SentenceEmbedding(coeffs.reshape(-1), "dct", k_count)


def _column_sum(mat):
    # Summing each column in sorted order makes the result independent of
    # row order down to the last bit.
    return np.sort(mat, axis=0).sum(axis=0)


def encode_avg(mat):
    mat = as_matrix(mat)
    if mat.shape[0] == 0:
        raise ValueError("cannot average an empty sentence")
    return SentenceEmbedding(_column_sum(mat) / mat.shape[0], "avg")


def encode_max(mat):
    mat = as_matrix(mat)
    if mat.shape[0] == 0:
        raise ValueError("cannot max-pool an empty sentence")
    return SentenceEmbedding(mat.max(axis=0), "max")


def encode_dct_star(plan, mat, k_count):
    """Word-level DCT: transform each word vector along its d features.

    Each word keeps its first ``k_count`` coefficients; the sentence vector
    is the element-wise mean of those per-word vectors (length k_count).
    """
    check_k(k_count, k_max=None)
    mat = as_matrix(mat)
    n, d = mat.shape
    if n == 0:
        raise ValueError("DCT* needs at least one word")
    if k_count > d:
        raise ValueError(f"k_count {k_count} exceeds embedding dim {d}")
    plan.check_length(d)
    per_word = apply_basis(plan.basis(d)[:k_count], mat.T)
    return SentenceEmbedding(per_word.mean(axis=1), "dct-star", k_count)


def relate_c0_avg(plan, mat):
    """Max |c[0] - sqrt(N) * AVG| over the feature columns of ``mat``."""
    mat = as_matrix(mat)
    n = mat.shape[0]
    if n == 0:
        raise ValueError("relation undefined for an empty sentence")
    c0 = encode_dct(plan, mat, 1, k_max=None).values
    avg = encode_avg(mat).values
    return float(np.max(np.abs(c0 - np.sqrt(n) * avg)))


def output_dim(method, dim, k_count=None):
    if method == "dct":
        return k_count * dim
    if method in ("avg", "max"):
        return dim
    if method == "dct-star":
        return k_count
    raise ValueError(f"unknown method {method!r}")


def encode(plan, mat, method, k_count=None, k_max=DEFAULT_K_MAX):
    if method == "dct":
        return encode_dct(plan, mat, k_count, k_max=k_max)
    if method == "avg":
        return encode_avg(mat)
    if method == "max":
        return encode_max(mat)
    if method == "dct-star":
        return encode_dct_star(plan, mat, k_count)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def encode_many(plan, mats, method, k_count=None, k_max=DEFAULT_K_MAX, workers=1):
    """Encode a batch of matrices into an (M, out_dim) array, in input order."""
    def one(mat):
        return encode(plan, mat, method, k_count, k_max).values

    mats = list(mats)
    if workers > 1 and len(mats) > 1:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(one, mats))
    else:
        rows = [one(m) for m in mats]
    if not rows:
        raise ValueError("nothing to encode")
    return np.vstack(rows)
