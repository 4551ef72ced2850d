"""Word-vector tables in the plain text format, tokenization, and lookup."""

import logging
import unicodedata
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)

OOV_POLICIES = ("skip", "zero", "error")


class VectorFormatError(ValueError):
    """Raised for malformed word-vector files."""


class OOVError(KeyError):
    def __init__(self, token):
        super().__init__(token)
        self.token = token

    def __str__(self):
        return f"out-of-vocabulary token: {self.token!r}"


class WordEmbeddingTable:
    """Immutable token -> vector map of fixed dimensionality.

    Vectors are held as a single float64 matrix; ``index`` maps tokens to
    rows of that matrix.
    """

    def __init__(self, tokens, vectors, oov_policy="skip"):
        vectors = np.array(vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[1] < 1:
            raise ValueError(f"vectors must be a 2-D array with dim >= 1, got {vectors.shape}")
        tokens = list(tokens)
        if len(tokens) != vectors.shape[0]:
            raise ValueError(f"{len(tokens)} tokens but {vectors.shape[0]} vectors")
        if not np.all(np.isfinite(vectors)):
            raise ValueError("word vectors must be finite")
        if oov_policy not in OOV_POLICIES:
            raise ValueError(f"oov_policy must be one of {OOV_POLICIES}, got {oov_policy!r}")
        index = {}
        for i, tok in enumerate(tokens):
            if not tok or any(ch.isspace() for ch in tok):
                raise ValueError(f"invalid token {tok!r}")
            if tok in index:
                raise ValueError(f"duplicate token {tok!r}")
            index[tok] = i
        vectors.setflags(write=False)
        self.tokens = tuple(tokens)
        self.vectors = vectors
        self.index = index
        self.oov_policy = oov_policy

    @property
    def dim(self):
        return self.vectors.shape[1]

    def __len__(self):
        return len(self.tokens)

    def __contains__(self, token):
        return token in self.index

    def __repr__(self):
        return f"WordEmbeddingTable(size={len(self)}, dim={self.dim}, oov_policy={self.oov_policy!r})"

    def lookup(self, token):
        return self.vectors[self.index[token]]

    def with_policy(self, oov_policy):
        """Same vectors, different OOV policy (no copy of the matrix)."""
        if oov_policy not in OOV_POLICIES:
            raise ValueError(f"oov_policy must be one of {OOV_POLICIES}, got {oov_policy!r}")
        clone = object.__new__(WordEmbeddingTable)
        clone.__dict__.update(self.__dict__, oov_policy=oov_policy)
        return clone


def _is_header(fields):
    return len(fields) == 2 and all(f.isdigit() for f in fields)


def load_table(path, expected_dim=None, oov_policy="skip"):
    """Read a whitespace-separated word-vector file.

    The first line may be a ``count dim`` header; otherwise the dimension is
    taken from the first data line. Duplicate tokens keep their first vector.
    """
    tokens, rows = [], []
    seen = set()
    dim = None
    header_count = None
    duplicates = 0
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            fields = [x for x in line.rstrip("\r\n").split(" ") if x]
            if not fields:
                continue
            if lineno == 1 and _is_header(fields):
                header_count, dim = int(fields[0]), int(fields[1])
                if dim < 1:
                    raise VectorFormatError(f"line 1: header declares dim {dim}")
                continue
            if dim is None:
                dim = len(fields) - 1
                if dim < 1:
                    raise VectorFormatError(f"line {lineno}: no vector values after token")
            if len(fields) != dim + 1:
                raise VectorFormatError(
                    f"line {lineno}: inconsistent dimensions, expected {dim} values, got {len(fields) - 1}"
                )
            tok = fields[0]
            if any(ch.isspace() for ch in tok):
                raise VectorFormatError(f"line {lineno}: token {tok!r} contains whitespace")
            try:
                vec = [float(x) for x in fields[1:]]
            except ValueError as exc:
                raise VectorFormatError(f"line {lineno}: {exc}") from None
            if not all(np.isfinite(vec)):
                raise VectorFormatError(f"line {lineno}: non-finite value")
            if tok in seen:
                duplicates += 1
                logger.warning("line %d: duplicate token %r ignored", lineno, tok)
                continue
            seen.add(tok)
            tokens.append(tok)
            rows.append(vec)
    if dim is None or not tokens:
        raise VectorFormatError(f"{path}: no word vectors found")
    if expected_dim is not None and dim != expected_dim:
        raise VectorFormatError(f"{path}: dim {dim} does not match expected {expected_dim}")
    if header_count is not None and header_count != len(tokens) + duplicates:
        logger.warning("%s: header announces %d words, found %d", path, header_count, len(tokens) + duplicates)
    return WordEmbeddingTable(tokens, np.array(rows, dtype=np.float64).reshape(len(tokens), dim), oov_policy)


def save_table(table, path, header=True):
    """Write ``table`` in the text format with float32 precision."""
    with open(path, "w", encoding="utf-8") as f:
        if header:
            f.write(f"{len(table)} {table.dim}\n")
        for tok, vec in zip(table.tokens, table.vectors.astype(np.float32)):
            f.write(tok + " " + " ".join(repr(float(x)) for x in vec) + "\n")


@dataclass
class TokenizedSentence:
    tokens: list
    source_text: str = field(default="", repr=False)

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


def _is_punct(ch):
    return unicodedata.category(ch).startswith("P")


def _strip_punct(tok):
    start, end = 0, len(tok)
    while start < end and _is_punct(tok[start]):
        start += 1
    while end > start and _is_punct(tok[end - 1]):
        end -= 1
    return tok[start:end]


def tokenize(text, lowercase=True):
    tokens = []
    for raw in text.split():
        tok = _strip_punct(raw.lower() if lowercase else raw)
        if tok:
            tokens.append(tok)
    return TokenizedSentence(tokens, text)


def embed_tokens(table, sent, policy=None):
    """Stack the vectors of ``sent`` into an (N, dim) float64 matrix.

    ``policy`` overrides ``table.oov_policy``. Under "skip" an all-OOV
    sentence gives a (0, dim) matrix.
    """
    policy = policy or table.oov_policy
    tokens = sent.tokens if isinstance(sent, TokenizedSentence) else list(sent)
    rows = []
    for tok in tokens:
        i = table.index.get(tok)
        if i is not None:
            rows.append(i)
        elif policy == "zero":
            rows.append(-1)
        elif policy == "error":
            raise OOVError(tok)
        elif policy != "skip":
            raise ValueError(f"unknown oov policy {policy!r}")
    idx = np.array(rows, dtype=np.intp)
    mat = table.vectors[np.where(idx < 0, 0, idx)] if len(idx) else np.zeros((0, table.dim))
    if (idx < 0).any():
        mat[idx < 0] = 0.0
    return mat


def count_oov(table, sent):
    tokens = sent.tokens if isinstance(sent, TokenizedSentence) else sent
    return sum(1 for tok in tokens if tok not in table.index)
