"""Per-sentence encoding throughput of AVG versus DCT at several K."""

import time
from dataclasses import dataclass

import numpy as np

from .encoder import encode_avg, encode_dct


@dataclass
class BenchRow:
    method: str
    k_count: int
    ns_per_sentence: float


def _time_once(fn, mats):
    start = time.perf_counter_ns()
    for m in mats:
        fn(m)
    return (time.perf_counter_ns() - start) / len(mats)


def run_bench(plan, mats, k_values, repeats=5, warmup=1):
    """Median ns/sentence over ``repeats`` timed passes after ``warmup`` passes.

    Passes are interleaved across methods so that slow drift in machine
    load affects every row alike.
    """
    mats = [np.asarray(m, dtype=np.float64) for m in mats]
    if not mats:
        raise ValueError("benchmark corpus is empty")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    cases = [("avg", None, encode_avg)]
    cases += [("dct", k, lambda m, k=k: encode_dct(plan, m, k, k_max=None)) for k in k_values]
    samples = {i: [] for i in range(len(cases))}
    for rep in range(warmup + repeats):
        for i, (_, _, fn) in enumerate(cases):
            t = _time_once(fn, mats)
            if rep >= warmup:
                samples[i].append(t)
    return [BenchRow(method, k, float(np.median(samples[i])))
            for i, (method, k, _) in enumerate(cases)]


def linear_fit(xs, ys):
    """Least-squares line through (xs, ys); returns (slope, intercept, r2)."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    ss_tot = np.sum((ys - ys.mean()) ** 2)
    r2 = 1.0 - np.sum(resid ** 2) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), float(r2)


def summarize(rows):
    avg = next(r for r in rows if r.method == "avg")
    dct = sorted((r for r in rows if r.method == "dct"), key=lambda r: r.k_count)
    summary = {"avg_ns": avg.ns_per_sentence}
    if len(dct) >= 2:
        slope, intercept, r2 = linear_fit([r.k_count for r in dct], [r.ns_per_sentence for r in dct])
        summary.update(slope_ns_per_k=slope, intercept_ns=intercept, r2=r2)
    k1 = [r for r in dct if r.k_count == 1]
    if k1:
        summary["dct_k1_over_avg"] = k1[0].ns_per_sentence / avg.ns_per_sentence
    return summary


def synthetic_corpus(n_sentences, vocab_size, seed, min_len=5, max_len=30):
    """Random sentences over tokens w0..w{vocab_size-1}, one string each."""
    rng = np.random.default_rng(seed)
    lengths = rng.integers(min_len, max_len + 1, n_sentences)
    return [" ".join(f"w{i}" for i in rng.integers(0, vocab_size, n)) for n in lengths]
