"""Embedding file formats.

TSV: one record per line, tab-separated decimals with 9 significant digits
(enough to round-trip a float32 exactly).

Binary: little-endian header ``b"DCTE"``, u32 version, u32 record_len,
u32 float_width (always 32), followed by packed float32 records.
"""

import struct

import numpy as np

MAGIC = b"DCTE"
VERSION = 1
FLOAT_WIDTH = 32
HEADER = struct.Struct("<4sIII")
FORMATS = ("tsv", "bin")


class EmbeddingFormatError(ValueError):
    pass


def format_tsv_record(values):
    return "\t".join(f"{float(x):.9g}" for x in np.asarray(values, dtype=np.float32)) + "\n"


class EmbeddingWriter:
    """Streaming writer; records are cast to float32 on the way out."""

    def __init__(self, stream, fmt, record_len):
        if fmt not in FORMATS:
            raise ValueError(f"unknown format {fmt!r}")
        self.stream = stream
        self.fmt = fmt
        self.record_len = record_len
        self.count = 0
        if fmt == "bin":
            stream.write(HEADER.pack(MAGIC, VERSION, record_len, FLOAT_WIDTH))

    def write(self, values):
        values = np.asarray(values)
        if values.shape != (self.record_len,):
            raise ValueError(f"record has shape {values.shape}, expected ({self.record_len},)")
        if self.fmt == "bin":
            self.stream.write(values.astype("<f4").tobytes())
        else:
            self.stream.write(format_tsv_record(values).encode("ascii"))
        self.count += 1


def write_embeddings(path, records, fmt):
    records = np.asarray(records)
    with open(path, "wb") as f:
        writer = EmbeddingWriter(f, fmt, records.shape[1])
        for row in records:
            writer.write(row)
    return writer.count


def read_binary(path):
    with open(path, "rb") as f:
        head = f.read(HEADER.size)
        if len(head) < HEADER.size:
            raise EmbeddingFormatError(f"{path}: truncated header")
        magic, version, record_len, width = HEADER.unpack(head)
        if magic != MAGIC:
            raise EmbeddingFormatError(f"{path}: bad magic {magic!r}")
        if version != VERSION or width != FLOAT_WIDTH:
            raise EmbeddingFormatError(f"{path}: unsupported version {version} / float width {width}")
        body = f.read()
    if record_len == 0 or len(body) % (4 * record_len):
        raise EmbeddingFormatError(f"{path}: body size {len(body)} is not a multiple of the record size")
    return np.frombuffer(body, dtype="<f4").reshape(-1, record_len).astype(np.float32)


def read_tsv(path):
    rows = []
    with open(path, encoding="ascii") as f:
        for lineno, line in enumerate(f, 1):
            try:
                rows.append([float(x) for x in line.rstrip("\n").split("\t")])
            except ValueError as exc:
                raise EmbeddingFormatError(f"{path}:{lineno}: {exc}") from None
            if len(rows[-1]) != len(rows[0]):
                raise EmbeddingFormatError(f"{path}:{lineno}: ragged record")
    return np.array(rows, dtype=np.float32)


def read_embeddings(path, fmt=None):
    if fmt is None:
        with open(path, "rb") as f:
            fmt = "bin" if f.read(4) == MAGIC else "tsv"
    return read_binary(path) if fmt == "bin" else read_tsv(path)
