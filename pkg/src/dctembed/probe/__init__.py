from .classifier import (
    DROPOUTS,
    HIDDEN_SIZES,
    ClassifierConfig,
    ClassifierModel,
    evaluate,
    paper_grid,
    train,
)
from .harness import GridResult, featurize, grid_search
from .tasks import (
    TASKS,
    ProbingDataset,
    gen_bshift,
    gen_sentlen,
    gen_wc,
    generate,
    read_dataset,
    synthetic_table,
    token_name,
    write_dataset,
    write_manifest,
)
