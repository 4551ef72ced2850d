"""Orthogonal DCT-II with a precomputed cosine plan.

The forward transform of a length-N sequence v is

    c[0] = sqrt(1/N) * sum_n v[n]
    c[k] = sqrt(2/N) * sum_n v[n] * cos(pi/N * (n + 1/2) * k),   1 <= k < N

With these scale factors the N x N transform matrix is orthogonal, so the
inverse is multiplication by its transpose.

All sums run over n in ascending order, so a truncated transform is a
bit-exact prefix of the full one.
"""

import threading

import numpy as np

__all__ = [
    "DctPlan",
    "make_plan",
    "dct_basis",
    "dct_forward",
    "dct_inverse",
    "dct_truncated",
    "apply_basis",
]


def dct_basis(n):
    """Return the n x n orthogonal DCT-II matrix, rows indexed by k."""
    k = np.arange(n, dtype=np.float64)[:, None]
    pos = np.arange(n, dtype=np.float64)[None, :] + 0.5
    basis = np.cos(np.pi / n * pos * k)
    basis[0] *= np.sqrt(1.0 / n)
    basis[1:] *= np.sqrt(2.0 / n)
    return basis


class DctPlan:
    """Lazily memoized DCT-II basis tables for lengths 1..max_len.

    A plan is safe to share between threads: tables are built at most once
    per length and are read-only afterwards.
    """

    def __init__(self, max_len):
        if isinstance(max_len, bool) or not isinstance(max_len, (int, np.integer)):
            raise TypeError(f"max_len must be an integer, got {max_len!r}")
        if max_len < 1:
            raise ValueError(f"max_len must be >= 1, got {max_len}")
        self.max_len = int(max_len)
        self._tables = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"DctPlan(max_len={self.max_len}, cached={sorted(self._tables)})"

    def basis(self, n):
        """The n x n basis table; ``basis(n)[k, i]`` weights v[i] in c[k]."""
        self.check_length(n)
        table = self._tables.get(n)
        if table is None:
            with self._lock:
                table = self._tables.get(n)
                if table is None:
                    table = dct_basis(n)
                    table.setflags(write=False)
                    self._tables[n] = table
        return table

    __getitem__ = basis

    def check_length(self, n):
        if n < 1:
            raise ValueError("DCT is undefined for an empty sequence")
        if n > self.max_len:
            raise ValueError(f"sequence length {n} exceeds plan max_len {self.max_len}")

    @property
    def cached_lengths(self):
        return sorted(self._tables)


def make_plan(max_len):
    return DctPlan(max_len)


def _as_sequence(seq):
    arr = np.asarray(seq, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D sequence, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("sequence contains NaN or infinite values")
    return arr


def apply_basis(table, values):
    # (k, n, d) products reduced over the middle axis: numpy accumulates a
    # non-contiguous axis one slice at a time, i.e. in ascending n. With
    # d == 1 the axes get coalesced and numpy switches to pairwise
    # summation, so single-column input rides in a two-column buffer.
    single = values.ndim == 1 or values.shape[1] == 1
    if single:
        cols = np.zeros((values.shape[0], 2))
        cols[:, 0] = values.reshape(-1)
    else:
        cols = values
    out = (table[:, :, None] * cols[None]).sum(axis=1)
    if not single:
        return out
    return out[:, 0] if values.ndim == 1 else out[:, :1]


def dct_truncated(plan, seq, k_count):
    """First ``k_count`` DCT-II coefficients of ``seq``; cost is O(k_count * N).

    ``seq`` may also be an (N, d) array, in which case every column is
    transformed independently and the result has shape (k_count, d).
    """
    arr = np.asarray(seq, dtype=np.float64)
    if arr.ndim == 1:
        arr = _as_sequence(arr)
    elif arr.ndim != 2:
        raise ValueError(f"expected a 1-D or 2-D array, got shape {arr.shape}")
    elif not np.all(np.isfinite(arr)):
        raise ValueError("input contains NaN or infinite values")
    n = arr.shape[0]
    plan.check_length(n)
    if k_count < 1 or k_count > n:
        raise ValueError(f"k_count must be in [1, {n}], got {k_count}")
    return apply_basis(plan.basis(n)[:k_count], arr)


def dct_forward(plan, seq):
    """All N coefficients of the orthogonal DCT-II."""
    arr = _as_sequence(seq)
    return dct_truncated(plan, arr, arr.shape[0])


def dct_inverse(plan, coeffs):
    """Inverse transform: multiply by the transposed (orthogonal) basis."""
    arr = _as_sequence(coeffs)
    n = arr.shape[0]
    plan.check_length(n)
    return apply_basis(plan.basis(n).T, arr)
