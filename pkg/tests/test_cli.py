import json
import tracemalloc

import numpy as np
import pytest

from dctembed import cli
from dctembed.dct_core import make_plan
from dctembed.encoder import encode
from dctembed.formats import read_embeddings
from dctembed.lexicon import embed_tokens, load_table, tokenize


@pytest.fixture
def workdir(tmp_path):
    (tmp_path / "vec.txt").write_text(
        "5 3\nman 1 0 0.5\nbites 0 1 -1\ndog 0.25 -2 1\nthe 1 1 1\nbitten 0.5 0.5 0\n", encoding="utf-8")
    (tmp_path / "in.txt").write_text("Man bites dog.\nDog bites man!\nthe man was bitten by the dog\n",
                                     encoding="utf-8")
    return tmp_path


def run(*argv):
    return cli.main([str(a) for a in argv])


def in_memory(workdir, method, k=None):
    table = load_table(workdir / "vec.txt")
    plan = make_plan(256)
    rows = []
    for line in (workdir / "in.txt").read_text().splitlines():
        rows.append(encode(plan, embed_tokens(table, tokenize(line)), method, k).values)
    return np.array(rows)


class TestEncode:
    def test_dct_records(self, workdir, capsys):
        out = workdir / "e.tsv"
        assert run("encode", workdir / "in.txt", "--vectors", workdir / "vec.txt", "--k", 2, "--out", out) == 0
        got = read_embeddings(out)
        assert got.shape == (3, 6)
        np.testing.assert_array_equal(got, in_memory(workdir, "dct", 2).astype(np.float32))
        assert "encoded 3 sentences" in capsys.readouterr().err

    def test_avg_records(self, workdir):
        out = workdir / "e.bin"
        assert run("encode", workdir / "in.txt", "--vectors", workdir / "vec.txt", "--method", "avg",
                   "--format", "bin", "--out", out) == 0
        got = read_embeddings(out)
        assert got.shape == (3, 3)
        np.testing.assert_array_equal(got, in_memory(workdir, "avg").astype(np.float32))

    @pytest.mark.parametrize("fmt", ["tsv", "bin"])
    def test_byte_identical_reruns(self, workdir, fmt):
        for name in ("a", "b"):
            run("encode", workdir / "in.txt", "--vectors", workdir / "vec.txt", "--k", 3,
                "--format", fmt, "--out", workdir / name)
        assert (workdir / "a").read_bytes() == (workdir / "b").read_bytes()

    def test_workers_preserve_order(self, workdir):
        lines = [" ".join(np.random.default_rng(i).choice(["man", "dog", "bites", "the"], 1 + i % 7))
                 for i in range(3000)]
        (workdir / "big.txt").write_text("\n".join(lines) + "\n")
        for name, workers in (("s", 1), ("p", 4)):
            run("encode", workdir / "big.txt", "--vectors", workdir / "vec.txt", "--k", 2,
                "--workers", workers, "--format", "bin", "--out", workdir / name)
        assert (workdir / "s").read_bytes() == (workdir / "p").read_bytes()

    def test_empty_sentence_rules(self, workdir, caplog):
        (workdir / "e.txt").write_text("man\nzzz qqq\ndog\n")
        run("encode", workdir / "e.txt", "--vectors", workdir / "vec.txt", "--k", 2, "--out", workdir / "d")
        d = read_embeddings(workdir / "d")
        assert d.shape == (3, 6) and not d[1].any()
        run("encode", workdir / "e.txt", "--vectors", workdir / "vec.txt", "--method", "avg", "--out", workdir / "a")
        assert read_embeddings(workdir / "a").shape == (2, 3)
        assert "line 2: empty sentence skipped" in caplog.text

    def test_truncation_warns(self, workdir, caplog):
        (workdir / "long.txt").write_text("man " * 10 + "\n")
        assert run("encode", workdir / "long.txt", "--vectors", workdir / "vec.txt", "--k", 2,
                   "--max-len", 4, "--out", workdir / "o") == 0
        assert "10 tokens truncated to 4" in caplog.text

    def test_dct_star(self, workdir):
        run("encode", workdir / "in.txt", "--vectors", workdir / "vec.txt", "--method", "dct-star",
            "--k", 2, "--out", workdir / "o")
        np.testing.assert_array_equal(read_embeddings(workdir / "o"),
                                      in_memory(workdir, "dct-star", 2).astype(np.float32))

    @pytest.mark.parametrize("extra", [[], ["--k", 0], ["--k", 9], ["--method", "avg", "--k", 2]])
    def test_usage_errors(self, workdir, extra):
        argv = ["encode", workdir / "in.txt", "--vectors", workdir / "vec.txt", "--out", workdir / "o"]
        assert run(*argv, *extra) == cli.EXIT_USAGE

    def test_unknown_flag_is_usage_error(self, workdir):
        with pytest.raises(SystemExit) as exc:
            run("encode", workdir / "in.txt", "--vectors", workdir / "vec.txt", "--bogus")
        assert exc.value.code == cli.EXIT_USAGE

    def test_data_errors(self, workdir):
        assert run("encode", workdir / "missing.txt", "--vectors", workdir / "vec.txt", "--k", 1) == cli.EXIT_DATA
        assert run("encode", workdir / "in.txt", "--vectors", workdir / "nope", "--k", 1) == cli.EXIT_DATA
        assert run("encode", workdir / "in.txt", "--vectors", workdir / "vec.txt", "--dim", 4,
                   "--k", 1) == cli.EXIT_DATA
        assert run("encode", workdir / "in.txt", "--vectors", workdir / "vec.txt", "--oov", "error",
                   "--k", 1, "--out", workdir / "o") == cli.EXIT_DATA

    def test_streaming_memory_is_flat(self, workdir):
        def peak(n_lines):
            (workdir / "c.txt").write_text("the man bites the dog\n" * n_lines)
            tracemalloc.start()
            run("encode", workdir / "c.txt", "--vectors", workdir / "vec.txt", "--k", 2,
                "--format", "bin", "--out", workdir / "c.bin")
            _, top = tracemalloc.get_traced_memory()
            tracemalloc.stop()
            return top

        small, large = peak(3000), peak(30000)
        assert large < 1.5 * small + 256 * 1024


class TestGenTasks:
    def test_bshift(self, tmp_path):
        out = tmp_path / "bs.tsv"
        assert run("gen-tasks", "--task", "bshift", "--base", 100, "--seed", 5, "--out", out) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 200
        labels = [line.split("\t")[1] for line in lines]
        assert labels.count("0") == labels.count("1") == 100
        manifest = json.loads((tmp_path / "bs.manifest.json").read_text())
        assert manifest["params"]["seed"] == 5
        assert manifest["task"] == "bshift"

    def test_deterministic(self, tmp_path):
        for name in ("a.tsv", "b.tsv"):
            run("gen-tasks", "--task", "wc", "--seed", 2, "--out", tmp_path / name)
        assert (tmp_path / "a.tsv").read_bytes() == (tmp_path / "b.tsv").read_bytes()
        assert (tmp_path / "a.manifest.json").read_bytes() == (tmp_path / "b.manifest.json").read_bytes()

    def test_invalid(self, tmp_path):
        assert run("gen-tasks", "--task", "bshift", "--sent-len", 2, "--out", tmp_path / "x.tsv") == cli.EXIT_USAGE

    def test_vectors_out(self, tmp_path):
        run("gen-tasks", "--task", "sentlen", "--vocab-size", 30, "--dim", 8,
            "--out", tmp_path / "s.tsv", "--vectors-out", tmp_path / "v.txt")
        t = load_table(tmp_path / "v.txt")
        assert (len(t), t.dim) == (30, 8)


def _report(capsys):
    header, row = capsys.readouterr().out.strip().splitlines()
    return dict(zip(header.split("\t"), row.split("\t")))


class TestEval:
    @pytest.fixture
    def bshift(self, tmp_path):
        run("gen-tasks", "--task", "bshift", "--base", 1000, "--seed", 0, "--out", tmp_path / "bs.tsv")
        return tmp_path / "bs.tsv"

    def test_avg_at_chance(self, bshift, capsys):
        capsys.readouterr()
        assert run("eval", bshift, "--method", "avg") == 0
        rep = _report(capsys)
        assert rep["task"] == "bshift"
        assert 0.40 <= float(rep["test_acc"]) <= 0.60

    def test_dct_k2_learns_order(self, bshift, capsys, tmp_path):
        capsys.readouterr()
        assert run("eval", bshift, "--method", "dct", "--k", 2, "--out", tmp_path / "r.tsv") == 0
        rep = _report(capsys)
        assert float(rep["test_acc"]) >= 0.65
        assert (tmp_path / "r.tsv").read_text().startswith("task\tmethod")

    def test_sentlen_c0_beats_avg(self, tmp_path, capsys):
        run("gen-tasks", "--task", "sentlen", "--seed", 1, "--out", tmp_path / "sl.tsv")
        capsys.readouterr()
        run("eval", tmp_path / "sl.tsv", "--method", "dct", "--k", 1)
        dct = float(_report(capsys)["test_acc"])
        run("eval", tmp_path / "sl.tsv", "--method", "avg")
        avg = float(_report(capsys)["test_acc"])
        assert dct >= avg

    def test_with_real_vectors_file(self, tmp_path, capsys):
        run("gen-tasks", "--task", "bshift", "--base", 200, "--out", tmp_path / "b.tsv",
            "--vectors-out", tmp_path / "v.txt")
        capsys.readouterr()
        assert run("eval", tmp_path / "b.tsv", "--vectors", tmp_path / "v.txt", "--method", "dct", "--k", 2,
                   "--epochs", 5) == 0

    def test_missing_dataset(self, tmp_path):
        assert run("eval", tmp_path / "none.tsv", "--method", "avg") == cli.EXIT_DATA

    def test_missing_k(self, bshift):
        assert run("eval", bshift, "--method", "dct") == cli.EXIT_USAGE


class TestBench:
    def test_report_shape(self, tmp_path, capsys):
        (tmp_path / "c.txt").write_text("w1 w2 w3 w4\nw5 w6 w7\n" * 20)
        assert run("bench", "--corpus", tmp_path / "c.txt", "--dim", 16, "--vocab-size", 10,
                   "--repeats", 1) == 0
        lines = [x for x in capsys.readouterr().out.splitlines() if not x.startswith("#")]
        rows = [x.split("\t") for x in lines[1:]]
        assert [r[0] for r in rows] == ["avg"] + ["dct"] * 7
        assert [r[1] for r in rows[1:]] == [str(k) for k in range(1, 8)]

    def test_empty_corpus(self, tmp_path):
        (tmp_path / "c.txt").write_text("")
        assert run("bench", "--corpus", tmp_path / "c.txt", "--dim", 4) == cli.EXIT_DATA
