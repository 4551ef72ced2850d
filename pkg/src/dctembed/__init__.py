"""Order-preserving sentence embeddings from the DCT of word-vector sequences."""

from .dct_core import DctPlan, dct_forward, dct_inverse, dct_truncated, make_plan
from .encoder import (
    SentenceEmbedding,
    encode,
    encode_avg,
    encode_dct,
    encode_dct_star,
    encode_many,
    encode_max,
    relate_c0_avg,
)
from .lexicon import TokenizedSentence, WordEmbeddingTable, embed_tokens, load_table, tokenize

__version__ = "0.1.0"
