"""Sequential token fusion with a similarity threshold.

Walks the input once.  Each token is compared against the current output
centroids; it merges into the most similar centroid when similarity
strictly exceeds tau, otherwise it starts a new centroid.  Centroids are
running means weighted by how many inputs they absorbed and are never
re-normalized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DomainError, TokenSequence, validate_sequence

# Dynamic-threshold anchors: (input length, tau).  Linear interpolation
# between them, clamped outside the anchor range.
THRESHOLD_ANCHOR_HIGH = (256, 0.9)
THRESHOLD_ANCHOR_LOW = (3328, 0.7)


@dataclass(frozen=True)
class ReducedSequence:
    """Output of a reduction strategy.

    tokens      -- K x N float32 matrix of retained/fused tokens.
    weights     -- how many inputs each output token absorbed (all 1 for
                   pruning strategies).
    assignment  -- per input token, the output index it was fused into or
                   retained as; -1 marks tokens dropped by pruning.
    pair_evals  -- number of pairwise similarity evaluations performed.
    """

    tokens: np.ndarray
    weights: np.ndarray
    assignment: np.ndarray
    pair_evals: int = 0

    def __post_init__(self):
        object.__setattr__(self, "tokens", np.ascontiguousarray(self.tokens, dtype=np.float32))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=np.int64))
        object.__setattr__(self, "assignment", np.asarray(self.assignment, dtype=np.int64))

    @property
    def count(self) -> int:
        return self.tokens.shape[0]

    @property
    def retention_ratio(self) -> float:
        m = self.assignment.shape[0]
        return self.count / m if m else 1.0


def _empty_reduction(dim: int) -> ReducedSequence:
    return ReducedSequence(
        tokens=np.zeros((0, dim), dtype=np.float32),
        weights=np.zeros(0, dtype=np.int64),
        assignment=np.zeros(0, dtype=np.int64),
        pair_evals=0,
    )


def fuse(seq: TokenSequence, tau: float) -> ReducedSequence:
    """Reduce a token sequence by sequential threshold fusion.

    The first token seeds the output.  Each later token v_m is matched
    against all current centroids (argmax similarity, ties to the lowest
    output index); if that best similarity is <= tau, v_m is appended
    with weight 1, otherwise the winning centroid t_j becomes
    (t_j * w_j + v_m) / (w_j + 1) and w_j increments.  Deterministic;
    output order follows first contribution.
    """
    if not -1.0 <= tau <= 1.0:
        raise DomainError(f"tau must lie in [-1, 1], got {tau}")
    validate_sequence(seq)
    m_total, dim = seq.data.shape
    if m_total == 0:
        return _empty_reduction(dim)

    data = seq.data.astype(np.float64)
    row_norms = np.linalg.norm(data, axis=1)

    cents = np.empty((m_total, dim), dtype=np.float64)
    cent_norms = np.empty(m_total, dtype=np.float64)
    weights = np.empty(m_total, dtype=np.int64)
    assignment = np.empty(m_total, dtype=np.int64)

    cents[0] = data[0]
    cent_norms[0] = row_norms[0]
    weights[0] = 1
    assignment[0] = 0
    k = 1
    evals = 0

    for m in range(1, m_total):
        v = data[m]
        sims = cents[:k] @ v
        sims /= cent_norms[:k] * row_norms[m]
        np.clip(sims, -1.0, 1.0, out=sims)
        evals += k
        j = int(np.argmax(sims))  # first max wins: lowest-index tie-break
        if sims[j] <= tau:
            cents[k] = v
            cent_norms[k] = row_norms[m]
            weights[k] = 1
            assignment[m] = k
            k += 1
        else:
            w = weights[j]
            cents[j] = (cents[j] * w + v) / (w + 1)
            cent_norms[j] = np.linalg.norm(cents[j])
            weights[j] = w + 1
            assignment[m] = j

    return ReducedSequence(
        tokens=cents[:k].astype(np.float32),
        weights=weights[:k].copy(),
        assignment=assignment,
        pair_evals=evals,
    )


def dynamic_threshold(m: int) -> float:
    """Similarity threshold for an input of m tokens.

    Linear in m between the anchors (256, 0.9) and (3328, 0.7), clamped
    to [0.7, 0.9] outside that range.
    """
    if m < 1:
        raise DomainError(f"token count must be >= 1, got {m}")
    m_hi, tau_hi = THRESHOLD_ANCHOR_HIGH
    m_lo, tau_lo = THRESHOLD_ANCHOR_LOW
    tau = tau_hi + (tau_lo - tau_hi) * (m - m_hi) / (m_lo - m_hi)
    return min(tau_hi, max(tau_lo, tau))


def fuse_auto(seq: TokenSequence) -> ReducedSequence:
    """Fuse with the threshold chosen from the input length."""
    return fuse(seq, dynamic_threshold(seq.count))
