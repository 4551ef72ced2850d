"""Command-line front end: encode, eval, gen-tasks, bench.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

import argparse
import itertools
import json
import logging
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import bench as benchmod
from .dct_core import make_plan
from .encoder import DEFAULT_K_MAX, encode, output_dim
from .formats import FORMATS, EmbeddingFormatError, EmbeddingWriter
from .lexicon import (
    OOV_POLICIES, OOVError, VectorFormatError, count_oov, embed_tokens, load_table, save_table,
    tokenize,
)
from .probe import ClassifierConfig, featurize, generate, grid_search, paper_grid, read_dataset
from .probe import synthetic_table, write_dataset, write_manifest

log = logging.getLogger("dctembed")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2
METHOD_CHOICES = ("dct", "avg", "max", "dct-star")
CHUNK = 1024


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _buckets(text):
    out = []
    for part in text.split(","):
        m = re.fullmatch(r"\s*(\d+)-(\d+)\s*", part)
        if not m:
            raise argparse.ArgumentTypeError(f"bad bucket {part!r}; use e.g. 1-4,5-8")
        out.append((int(m.group(1)), int(m.group(2))))
    return out


def _check_method_k(args):
    if args.method in ("dct", "dct-star"):
        if args.k is None:
            raise UsageError(f"--k is required for method {args.method}")
        if args.k < 1:
            raise UsageError("--k must be >= 1")
        if args.method == "dct" and args.k_max and args.k > args.k_max:
            raise UsageError(f"--k {args.k} exceeds --k-max {args.k_max} (pass --k-max 0 to lift the limit)")
    elif args.k is not None:
        raise UsageError(f"--k does not apply to method {args.method}")


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout.buffer, False
    return open(path, "wb"), True


def _load_vectors(args, oov_policy="skip"):
    try:
        return load_table(args.vectors, expected_dim=getattr(args, "dim", None), oov_policy=oov_policy)
    except FileNotFoundError as exc:
        raise DataError(f"vectors file not found: {exc.filename}") from None
    except VectorFormatError as exc:
        raise DataError(str(exc)) from None


# -- encode -----------------------------------------------------------------

def _encode_line(lineno, text, table, plan, args):
    tokens = tokenize(text, lowercase=not args.cased).tokens
    if len(tokens) > args.max_len:
        log.warning("line %d: %d tokens truncated to %d", lineno, len(tokens), args.max_len)
        tokens = tokens[:args.max_len]
    oov = count_oov(table, tokens)
    mat = embed_tokens(table, tokens)
    if mat.shape[0] == 0 and args.method != "dct":
        log.warning("line %d: empty sentence skipped for method %s", lineno, args.method)
        return None, oov
    k_max = args.k_max or None
    return encode(plan, mat, args.method, args.k, k_max).values, oov


def cmd_encode(args):
    _check_method_k(args)
    table = _load_vectors(args, args.oov)
    if args.method == "dct-star" and args.k > table.dim:
        raise UsageError(f"--k {args.k} exceeds the embedding dim {table.dim} for dct-star")
    plan = make_plan(max(args.max_len, table.dim))
    record_len = output_dim(args.method, table.dim, args.k)
    try:
        fin = open(args.input, encoding="utf-8")
    except FileNotFoundError:
        raise DataError(f"input file not found: {args.input}") from None
    encoded = skipped = oov_total = 0
    out, close = _open_out(args.out)
    pool = ThreadPoolExecutor(args.workers) if args.workers > 1 else None
    try:
        writer = EmbeddingWriter(out, args.format, record_len)
        lines = enumerate((line.rstrip("\n") for line in fin), 1)
        while True:
            chunk = list(itertools.islice(lines, CHUNK))
            if not chunk:
                break
            job = lambda item: _encode_line(item[0], item[1], table, plan, args)  # noqa: E731
            # map keeps input order regardless of completion order
            for values, oov in (pool.map(job, chunk) if pool else map(job, chunk)):
                oov_total += oov
                if values is None:
                    skipped += 1
                    continue
                writer.write(values)
                encoded += 1
    except OOVError as exc:
        raise DataError(str(exc)) from None
    finally:
        fin.close()
        if pool:
            pool.shutdown()
        if close:
            out.close()
        else:
            out.flush()
    print(f"encoded {encoded} sentences ({skipped} skipped), {oov_total} OOV tokens, "
          f"dim out {record_len}", file=sys.stderr)
    return EXIT_OK


# -- gen-tasks --------------------------------------------------------------

def _task_kwargs(args):
    if args.task == "bshift":
        return dict(base_sentences=args.base, sent_len=args.sent_len, vocab_size=args.vocab_size)
    if args.task == "wc":
        return dict(vocab_size=args.vocab_size, target_words=args.targets,
                    per_word=args.per_word, sent_len=args.sent_len)
    return dict(vocab_size=args.vocab_size, length_buckets=args.buckets, per_bucket=args.per_bucket)


def manifest_path(data_path):
    return Path(data_path).with_suffix(".manifest.json")


def cmd_gen_tasks(args):
    try:
        ds = generate(args.task, args.seed, **_task_kwargs(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    write_dataset(ds, args.out)
    extra = {}
    if args.vectors_out:
        save_table(synthetic_table(ds.params["vocab_size"], args.dim, args.seed), args.vectors_out)
        extra["vectors"] = dict(path=str(args.vectors_out), dim=args.dim, seed=args.seed, offset_norm=1.0)
    mpath = args.manifest or manifest_path(args.out)
    write_manifest(ds, mpath, **extra)
    print(f"wrote {len(ds)} examples to {args.out}, manifest {mpath}", file=sys.stderr)
    return EXIT_OK


# -- eval -------------------------------------------------------------------

_SYNTH_TOKEN = re.compile(r"w(\d+)")


def _synthetic_for(ds, manifest, dim, seed):
    vocab = (manifest or {}).get("params", {}).get("vocab_size")
    if vocab is None:
        ids = []
        for sent in ds.sentences:
            for tok in sent:
                m = _SYNTH_TOKEN.fullmatch(tok)
                if not m:
                    raise DataError(f"token {tok!r} is not synthetic; pass --vectors")
                ids.append(int(m.group(1)))
        vocab = max(ids) + 1
    return synthetic_table(vocab, dim, seed)


def cmd_eval(args):
    _check_method_k(args)
    mpath = manifest_path(args.data)
    manifest = json.loads(mpath.read_text()) if mpath.exists() else None
    task = args.task or (manifest or {}).get("task", "unknown")
    try:
        ds = read_dataset(args.data, task, (manifest or {}).get("label_count"))
    except FileNotFoundError:
        raise DataError(f"dataset not found: {args.data}") from None
    except ValueError as exc:
        raise DataError(str(exc)) from None
    table = _load_vectors(args) if args.vectors else _synthetic_for(ds, manifest, args.dim or 50, args.seed)
    longest = max(len(s) for s in ds.sentences)
    plan = make_plan(max(longest, table.dim, args.k or 1))
    try:
        X = featurize(ds, table, plan, args.method, args.k, k_max=args.k_max or None)
    except ValueError as exc:
        raise DataError(f"encoding failed: {exc}") from None
    base = dict(learning_rate=args.lr, epochs=args.epochs, seed=args.seed)
    grid = paper_grid(**base) if args.grid == "paper" else [
        ClassifierConfig(hidden_size=h, dropout=p, **base) for h in (0, 50) for p in (0.0, 0.1)
    ]
    res = grid_search(grid, ds, X, workers=args.workers)
    header = "task\tmethod\tk\thidden\tdropout\tdev_acc\ttest_acc\n"
    row = (f"{task}\t{args.method}\t{args.k if args.k is not None else '-'}\t"
           f"{res.config.hidden_size}\t{res.config.dropout:g}\t{res.dev_accuracy:.4f}\t{res.test_accuracy:.4f}\n")
    sys.stdout.write(header + row)
    if args.out:
        Path(args.out).write_text(header + row)
    return EXIT_OK


# -- bench ------------------------------------------------------------------

def cmd_bench(args):
    if args.corpus:
        try:
            lines = Path(args.corpus).read_text(encoding="utf-8").splitlines()
        except FileNotFoundError:
            raise DataError(f"corpus not found: {args.corpus}") from None
    else:
        lines = benchmod.synthetic_corpus(args.synthetic, args.vocab_size, args.seed)
    table = _load_vectors(args) if args.vectors else synthetic_table(args.vocab_size, args.dim or 300, args.seed)
    mats = [embed_tokens(table, tokenize(line).tokens[:args.max_len]) for line in lines]
    mats = [m for m in mats if m.shape[0]]
    if not mats:
        raise DataError("benchmark corpus is empty")
    if any(k < 1 for k in args.ks):
        raise UsageError("--ks values must be >= 1")
    plan = make_plan(max(args.max_len, max(args.ks)))
    rows = benchmod.run_bench(plan, mats, args.ks, repeats=args.repeats, warmup=1)
    out = ["method\tk\tns_per_sentence"]
    out += [f"{r.method}\t{r.k_count if r.k_count else '-'}\t{r.ns_per_sentence:.0f}" for r in rows]
    for key, value in benchmod.summarize(rows).items():
        out.append(f"# {key}\t{value:.4g}")
    print("\n".join(out))
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser():
    p = _Parser(prog="dctembed", description="DCT sentence embeddings and probing harness")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def encoding_opts(sp, k_default=None):
        sp.add_argument("--method", choices=METHOD_CHOICES, default="dct")
        sp.add_argument("--k", type=int, default=k_default, help="number of DCT coefficients to keep")
        sp.add_argument("--k-max", type=int, default=DEFAULT_K_MAX, help="guardrail on --k for dct (0 disables)")
        sp.add_argument("--max-len", type=int, default=256, help="longest sentence before truncation")

    enc = sub.add_parser("encode", help="encode one sentence per line")
    enc.add_argument("input")
    enc.add_argument("--vectors", required=True)
    enc.add_argument("--dim", type=int, help="expected vector dimensionality")
    encoding_opts(enc)
    enc.add_argument("--oov", choices=OOV_POLICIES, default="skip")
    enc.add_argument("--format", choices=FORMATS, default="tsv")
    enc.add_argument("--out", default="-")
    enc.add_argument("--workers", type=int, default=1)
    enc.add_argument("--cased", action="store_true", help="do not lowercase tokens")
    enc.add_argument("--seed", type=int, default=0, help="unused; accepted for uniformity")
    enc.set_defaults(func=cmd_encode)

    gen = sub.add_parser("gen-tasks", help="write a synthetic probing dataset")
    gen.add_argument("--task", choices=("sentlen", "wc", "bshift"), required=True)
    gen.add_argument("--out", required=True)
    gen.add_argument("--manifest")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--vocab-size", type=int, default=50)
    gen.add_argument("--sent-len", type=int, default=6)
    gen.add_argument("--base", type=int, default=1000, help="bshift: base sentences")
    gen.add_argument("--targets", type=int, default=10, help="wc: target words")
    gen.add_argument("--per-word", type=int, default=100, help="wc: sentences per target")
    gen.add_argument("--buckets", type=_buckets, default=_buckets("1-4,5-8,9-12,13-16,17-20,21-28"))
    gen.add_argument("--per-bucket", type=int, default=200)
    gen.add_argument("--vectors-out", help="also write the matching synthetic word vectors")
    gen.add_argument("--dim", type=int, default=50)
    gen.set_defaults(func=cmd_gen_tasks)

    ev = sub.add_parser("eval", help="probe an encoder on a dataset TSV")
    ev.add_argument("data")
    ev.add_argument("--task")
    ev.add_argument("--vectors", help="word vectors; synthetic vectors are used when omitted")
    ev.add_argument("--dim", type=int)
    encoding_opts(ev)
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument("--grid", choices=("desk", "paper"), default="desk")
    ev.add_argument("--epochs", type=int, default=ClassifierConfig.epochs)
    ev.add_argument("--lr", type=float, default=ClassifierConfig.learning_rate)
    ev.add_argument("--workers", type=int, default=1)
    ev.add_argument("--out")
    ev.set_defaults(func=cmd_eval)

    be = sub.add_parser("bench", help="time AVG and DCT encoding")
    be.add_argument("--corpus")
    be.add_argument("--synthetic", type=int, default=10000, help="synthetic corpus size without --corpus")
    be.add_argument("--vectors")
    be.add_argument("--dim", type=int)
    be.add_argument("--vocab-size", type=int, default=1000)
    be.add_argument("--ks", type=_int_list, default=list(range(1, 8)))
    be.add_argument("--repeats", type=int, default=5)
    be.add_argument("--max-len", type=int, default=256)
    be.add_argument("--seed", type=int, default=0)
    be.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"dctembed {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, EmbeddingFormatError, OSError) as exc:
        print(f"dctembed {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
