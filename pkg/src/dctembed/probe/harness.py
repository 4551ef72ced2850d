"""Encoding probing datasets and selecting a classifier on the dev split."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..encoder import encode_many
from ..lexicon import embed_tokens
from .classifier import evaluate, train

logger = logging.getLogger(__name__)


def featurize(dataset, table, plan, method, k_count=None, k_max=None):
    mats = [embed_tokens(table, sent) for sent in dataset.sentences]
    return encode_many(plan, mats, method, k_count, k_max=k_max)


@dataclass
class GridResult:
    config: object
    dev_accuracy: float
    test_accuracy: float
    model: object
    dev_scores: list

    def __iter__(self):
        # unpacks as (best config, test accuracy)
        return iter((self.config, self.test_accuracy))


def _selection_key(item):
    config, dev_acc = item
    return (-dev_acc, config.hidden_size, config.dropout)


def grid_search(configs, dataset, features, workers=1):
    """Train every config on "tr", pick by "va" accuracy, report "te".

    Ties on dev accuracy go to the smaller hidden layer, then the lower
    dropout, then the earlier config. Test accuracy is computed for the
    selected config only.
    """
    configs = list(configs)
    if not configs:
        raise ValueError("empty hyper-parameter grid")
    X = np.asarray(features, dtype=np.float64)
    if X.shape[0] != len(dataset):
        raise ValueError(f"{X.shape[0]} feature rows for {len(dataset)} examples")
    y = dataset.labels
    tr, va, te = (dataset.split(s) for s in ("tr", "va", "te"))
    if len(va) == 0 or len(te) == 0:
        raise ValueError("dataset needs non-empty dev and test splits")

    def fit(config):
        model = train(config, X[tr], y[tr], dataset.label_count)
        return model, evaluate(model, X[va], y[va])

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            fitted = list(pool.map(fit, configs))
    else:
        fitted = [fit(c) for c in configs]
    scores = [(c, acc) for c, (_, acc) in zip(configs, fitted)]
    best = min(range(len(configs)), key=lambda i: _selection_key(scores[i]))
    model, dev_acc = fitted[best]
    for config, acc in scores:
        logger.debug("hidden=%d dropout=%.1f dev=%.4f", config.hidden_size, config.dropout, acc)
    return GridResult(configs[best], dev_acc, evaluate(model, X[te], y[te]), model, scores)
