"""Training-free visual-token fusion on raw embedding sequences.

Reduces an ordered sequence of embedding vectors by greedily merging
similar tokens into weighted centroids, alongside pruning baselines,
a quadratic agglomeration reference, synthetic data generation, and
efficiency/quality metrics.
"""

import os as _os

# Honor the thread cap before numpy (and its BLAS) is loaded anywhere
# in the package.  No-op if numpy was already imported by the host.
_cap = _os.environ.get("TOKFUSE_THREADS")
if _cap:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _cap)
del _os, _cap

from .core import (
    TokenSequence,
    ReductionConfig,
    cosine_similarity,
    validate_sequence,
    TokenFuseError,
    ShapeError,
    DegenerateTokenError,
    NonFiniteError,
    DomainError,
    BudgetError,
    FormatError,
)
from .tofu import ReducedSequence, fuse, fuse_auto, dynamic_threshold
from .baselines import ImportanceScores, random_sample, topk_prune, uniform_stride
from .oracle import oracle_fuse
from .metrics import ReductionReport, reconstruction_error, attention_savings
from .iogen import ClusterSpec, generate_clusters, read_tokens, write_tokens

__version__ = "0.1.0"

__all__ = [
    "TokenSequence",
    "ReductionConfig",
    "ReducedSequence",
    "ImportanceScores",
    "ReductionReport",
    "ClusterSpec",
    "cosine_similarity",
    "validate_sequence",
    "fuse",
    "fuse_auto",
    "dynamic_threshold",
    "random_sample",
    "topk_prune",
    "uniform_stride",
    "oracle_fuse",
    "reconstruction_error",
    "attention_savings",
    "generate_clusters",
    "read_tokens",
    "write_tokens",
    "TokenFuseError",
    "ShapeError",
    "DegenerateTokenError",
    "NonFiniteError",
    "DomainError",
    "BudgetError",
    "FormatError",
]
