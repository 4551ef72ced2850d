"""Synthetic probing tasks and their TSV file format.

Three stand-ins for the SentEval probing sets, each built so that exactly
one property of the sentence carries the label:

* SentLen: which length bucket the sentence falls in.
* WC: which one of a set of target words the sentence contains.
* BShift: whether two adjacent words were swapped.

BShift sentences come from a slot grammar (position p draws its word from
class p of the vocabulary) because swapping two adjacent words of an
i.i.d. random sentence yields another i.i.d. random sentence, which no
encoder could tell apart.
"""

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from ..lexicon import WordEmbeddingTable

TASKS = ("sentlen", "wc", "bshift")
SPLITS = ("tr", "va", "te")
SPLIT_FRACTIONS = (0.8, 0.1, 0.1)


def token_name(i):
    return f"w{i}"


@dataclass
class ProbingDataset:
    task: str
    sentences: list
    labels: np.ndarray
    splits: dict
    label_count: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int64)
        self.splits = {k: np.asarray(v, dtype=np.int64) for k, v in self.splits.items()}
        if len(self.sentences) != len(self.labels):
            raise ValueError("sentences and labels differ in length")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.label_count):
            raise ValueError(f"labels must lie in [0, {self.label_count})")
        covered = np.sort(np.concatenate([self.splits.get(s, np.zeros(0, np.int64)) for s in SPLITS]))
        if not np.array_equal(covered, np.arange(len(self.labels))):
            raise ValueError("splits must be disjoint and cover every example")

    def __len__(self):
        return len(self.labels)

    def split(self, name):
        return self.splits[name]

    def split_of(self):
        """Per-example split name."""
        names = np.empty(len(self), dtype=object)
        for s in SPLITS:
            names[self.splits[s]] = s
        return names


def _split_groups(n_groups, rng):
    """Shuffle group ids and cut them 80/10/10."""
    order = rng.permutation(n_groups)
    n_tr = int(round(SPLIT_FRACTIONS[0] * n_groups))
    n_va = int(round(SPLIT_FRACTIONS[1] * n_groups))
    return {
        "tr": np.sort(order[:n_tr]),
        "va": np.sort(order[n_tr:n_tr + n_va]),
        "te": np.sort(order[n_tr + n_va:]),
    }


def gen_sentlen(vocab_size, length_buckets, per_bucket, seed):
    if vocab_size < 2:
        raise ValueError("vocab_size must be >= 2")
    buckets = [tuple(int(x) for x in b) for b in length_buckets]
    if not buckets:
        raise ValueError("need at least one length bucket")
    for lo, hi in buckets:
        if lo < 1 or hi < lo:
            raise ValueError(f"invalid bucket ({lo}, {hi})")
    ordered = sorted(buckets)
    for (_, hi), (lo, _) in zip(ordered, ordered[1:]):
        if lo <= hi:
            raise ValueError("length buckets overlap")
    if per_bucket < 1:
        raise ValueError("per_bucket must be >= 1")
    rng = np.random.default_rng(seed)
    sentences, labels = [], []
    for label, (lo, hi) in enumerate(buckets):
        for _ in range(per_bucket):
            n = int(rng.integers(lo, hi + 1))
            sentences.append([token_name(i) for i in rng.integers(0, vocab_size, n)])
            labels.append(label)
    params = dict(vocab_size=vocab_size, length_buckets=[list(b) for b in buckets],
                  per_bucket=per_bucket, seed=seed)
    return ProbingDataset("sentlen", sentences, labels, _split_groups(len(labels), rng),
                          len(buckets), params)


def gen_wc(vocab_size, target_words, per_word, sent_len, seed):
    """Words 0..target_words-1 are targets; every other word is a filler."""
    if sent_len < 1:
        raise ValueError("sent_len must be >= 1")
    if target_words < 1 or target_words > vocab_size:
        raise ValueError("need 1 <= target_words <= vocab_size")
    if sent_len > 1 and target_words == vocab_size:
        raise ValueError("no filler words left: target_words must be < vocab_size")
    if per_word < 1:
        raise ValueError("per_word must be >= 1")
    rng = np.random.default_rng(seed)
    sentences, labels = [], []
    for target in range(target_words):
        for _ in range(per_word):
            words = rng.integers(target_words, vocab_size, sent_len) if sent_len > 1 else np.zeros(1, int)
            words[rng.integers(sent_len)] = target
            sentences.append([token_name(i) for i in words])
            labels.append(target)
    params = dict(vocab_size=vocab_size, target_words=target_words, per_word=per_word,
                  sent_len=sent_len, seed=seed)
    return ProbingDataset("wc", sentences, labels, _split_groups(len(labels), rng),
                          target_words, params)


def slot_of(word_id, sent_len):
    return word_id % sent_len


def gen_bshift(base_sentences, sent_len, vocab_size, seed):
    """Original sentence (label 0) followed by its swapped copy (label 1).

    Word w may only appear at position ``w % sent_len`` in an original
    sentence, so each slot has its own word class and adjacent words always
    differ. Both members of a pair land in the same split.
    """
    if sent_len < 3:
        raise ValueError("sent_len must be >= 3")
    if vocab_size < sent_len:
        raise ValueError("vocab_size must be >= sent_len (one word class per position)")
    if base_sentences < 1:
        raise ValueError("base_sentences must be >= 1")
    rng = np.random.default_rng(seed)
    slots = [np.arange(p, vocab_size, sent_len) for p in range(sent_len)]
    sentences, labels = [], []
    for _ in range(base_sentences):
        words = [int(rng.choice(slots[p])) for p in range(sent_len)]
        i = int(rng.integers(sent_len - 1))
        swapped = list(words)
        swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
        sentences.append([token_name(w) for w in words])
        sentences.append([token_name(w) for w in swapped])
        labels += [0, 1]
    pair_splits = _split_groups(base_sentences, rng)
    splits = {s: np.sort(np.concatenate([2 * idx, 2 * idx + 1])) for s, idx in pair_splits.items()}
    params = dict(base_sentences=base_sentences, sent_len=sent_len, vocab_size=vocab_size, seed=seed)
    return ProbingDataset("bshift", sentences, labels, splits, 2, params)


def generate(task, seed, **kwargs):
    if task == "sentlen":
        return gen_sentlen(seed=seed, **kwargs)
    if task == "wc":
        return gen_wc(seed=seed, **kwargs)
    if task == "bshift":
        return gen_bshift(seed=seed, **kwargs)
    raise ValueError(f"unknown task {task!r}; expected one of {TASKS}")


def synthetic_table(vocab_size, dim, seed, offset_norm=1.0, oov_policy="skip"):
    """Random word vectors for tokens w0..w{vocab_size-1}.

    Each vector is i.i.d. standard normal plus one shared offset of norm
    ``offset_norm``, so pooled features have a nonzero mean like real
    embeddings do.
    """
    rng = np.random.default_rng(seed)
    vectors = rng.standard_normal((vocab_size, dim))
    if offset_norm:
        offset = rng.standard_normal(dim)
        vectors += offset_norm * offset / np.linalg.norm(offset)
    return WordEmbeddingTable([token_name(i) for i in range(vocab_size)], vectors, oov_policy)


def write_dataset(ds, path):
    """One line per example: split, label, space-joined sentence."""
    names = ds.split_of()
    with open(path, "w", encoding="utf-8", newline="") as f:
        for name, label, sent in zip(names, ds.labels, ds.sentences):
            f.write(f"{name}\t{int(label)}\t{' '.join(sent)}\n")


def read_dataset(path, task=None, label_count=None):
    sentences, labels = [], []
    splits = {s: [] for s in SPLITS}
    with open(path, encoding="utf-8", newline="") as f:
        for lineno, row in enumerate(csv.reader(f, delimiter="\t", quoting=csv.QUOTE_NONE), 1):
            if not row:
                continue
            if len(row) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 tab-separated columns, got {len(row)}")
            split, label, text = row
            if split not in splits:
                raise ValueError(f"{path}:{lineno}: unknown split {split!r}")
            try:
                label = int(label)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: label {label!r} is not an integer") from None
            splits[split].append(len(labels))
            labels.append(label)
            sentences.append(text.split())
    if not labels:
        raise ValueError(f"{path}: empty dataset")
    if label_count is None:
        label_count = max(labels) + 1
    return ProbingDataset(task or "unknown", sentences, labels, splits, label_count)


def write_manifest(ds, path, **extra):
    manifest = {"task": ds.task, "examples": len(ds), "label_count": ds.label_count,
                "splits": {s: int(len(ds.splits[s])) for s in SPLITS}, "params": ds.params}
    manifest.update(extra)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    return manifest
