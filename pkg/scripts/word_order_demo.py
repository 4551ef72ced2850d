"""AVG vs. c[0] vs. c[1] on three short sentences with random word vectors.

    python scripts/word_order_demo.py [--seed 0] [--dim 10]

AVG and c[0] cannot tell "dog bites man" from "man bites dog"; c[1] can.
Whether "man bitten by dog" lands nearer to "man bites dog" under c[0:2]
depends on the draw, so the distances are printed, not asserted.
"""

import argparse

import numpy as np

from dctembed import encode_avg, encode_dct, make_plan
from dctembed.lexicon import WordEmbeddingTable, embed_tokens, tokenize

SENTENCES = ["dog bites man", "man bites dog", "man bitten by dog"]


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=10)
    args = p.parse_args()

    words = sorted({w for s in SENTENCES for w in s.split()})
    rng = np.random.default_rng(args.seed)
    table = WordEmbeddingTable(words, rng.standard_normal((len(words), args.dim)))
    plan = make_plan(16)

    vecs = {}
    for s in SENTENCES:
        mat = embed_tokens(table, tokenize(s))
        dct = encode_dct(plan, mat, 2).values
        vecs[s] = {"AVG": encode_avg(mat).values, "c[0]": dct[:args.dim], "c[1]": dct[args.dim:], "c[0:2]": dct}

    np.set_printoptions(precision=2, suppress=True, linewidth=120)
    for s in SENTENCES:
        print(s)
        for name in ("AVG", "c[0]", "c[1]"):
            print(f"  {name:5s} {vecs[s][name]}")
    print()
    a, b, c = SENTENCES
    for name in ("AVG", "c[0]", "c[1]", "c[0:2]"):
        d_ab = np.linalg.norm(vecs[a][name] - vecs[b][name])
        d_cb = np.linalg.norm(vecs[c][name] - vecs[b][name])
        d_ca = np.linalg.norm(vecs[c][name] - vecs[a][name])
        print(f"{name:7s} |{a} - {b}| = {d_ab:.3f}   |{c} - {b}| = {d_cb:.3f}   |{c} - {a}| = {d_ca:.3f}")


if __name__ == "__main__":
    main()
