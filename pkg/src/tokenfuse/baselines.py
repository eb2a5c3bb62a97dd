"""Pruning baselines: seeded random sampling, budgeted top-k by external
importance scores, and uniform stride sampling.

All three emit subsequences of the input: kept rows are bitwise-equal to
their source rows, in increasing source order, with weight 1.  Dropped
tokens are left unassigned (-1); the metrics module maps them to their
nearest retained token on demand.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BudgetError, ShapeError, TokenSequence, validate_sequence
from .tofu import ReducedSequence

UNASSIGNED = -1


@dataclass(frozen=True)
class ImportanceScores:
    """Externally supplied per-token relevance (e.g. CLS-attention dumps)."""

    scores: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.scores, dtype=np.float64).reshape(-1)
        if not np.isfinite(arr).all():
            raise ShapeError("importance scores must be finite")
        object.__setattr__(self, "scores", arr)

    def __len__(self) -> int:
        return self.scores.shape[0]


def _subsequence(seq: TokenSequence, kept: np.ndarray) -> ReducedSequence:
    """Build a pruning result from sorted kept indices."""
    m_total = seq.count
    assignment = np.full(m_total, UNASSIGNED, dtype=np.int64)
    assignment[kept] = np.arange(kept.shape[0])
    return ReducedSequence(
        tokens=seq.data[kept].copy(),
        weights=np.ones(kept.shape[0], dtype=np.int64),
        assignment=assignment,
        pair_evals=0,
    )


def random_sample(seq: TokenSequence, budget: int, seed: int) -> ReducedSequence:
    """Keep `budget` distinct tokens chosen uniformly at random.

    Indices are drawn with a PCG64 generator seeded by `seed`, so the
    selected set is reproducible across platforms.  Kept tokens stay in
    original order.
    """
    validate_sequence(seq)
    if not 0 <= budget <= seq.count:
        raise BudgetError(f"budget {budget} outside [0, {seq.count}]")
    rng = np.random.Generator(np.random.PCG64(seed))
    kept = np.sort(rng.choice(seq.count, size=budget, replace=False))
    return _subsequence(seq, kept.astype(np.int64))


def topk_prune(seq: TokenSequence, scores: ImportanceScores, budget: int) -> ReducedSequence:
    """Keep the `budget` highest-scoring tokens, ties to the lower index."""
    validate_sequence(seq)
    if len(scores) != seq.count:
        raise ShapeError(
            f"scores length {len(scores)} does not match token count {seq.count}"
        )
    if not 0 <= budget <= seq.count:
        raise BudgetError(f"budget {budget} outside [0, {seq.count}]")
    # stable sort on descending score keeps the lower index first on ties
    order = np.argsort(-scores.scores, kind="stable")
    kept = np.sort(order[:budget])
    return _subsequence(seq, kept.astype(np.int64))


def uniform_stride(seq: TokenSequence, budget: int) -> ReducedSequence:
    """Keep indices floor(i * M / budget) for i in [0, budget)."""
    validate_sequence(seq)
    if budget == 0:
        raise BudgetError("stride sampling requires a budget >= 1")
    if not 0 < budget <= seq.count:
        raise BudgetError(f"budget {budget} outside [1, {seq.count}]")
    kept = (np.arange(budget, dtype=np.int64) * seq.count) // budget
    return _subsequence(seq, kept)
