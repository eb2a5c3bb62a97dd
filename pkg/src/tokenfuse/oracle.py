"""Global greedy centroid agglomeration with full similarity recomputation.

The quadratic reference for sequential fusion: start with every token as
its own weighted centroid, repeatedly merge the globally most-similar
pair while that similarity strictly exceeds tau.  The full pairwise
similarity matrix is recomputed from scratch after every merge on
purpose; this exists for correctness and cost contrast, not speed.
"""

from __future__ import annotations

import numpy as np

from .core import DomainError, TokenSequence, validate_sequence
from .tofu import ReducedSequence, _empty_reduction


def oracle_fuse(seq: TokenSequence, tau: float) -> ReducedSequence:
    """Agglomerate centroid pairs above tau by weighted mean.

    Ties on the best similarity break to the lexicographically smallest
    centroid index pair.  Output centroids are ordered by the smallest
    contributing input index.
    """
    if not -1.0 <= tau <= 1.0:
        raise DomainError(f"tau must lie in [-1, 1], got {tau}")
    validate_sequence(seq)
    m_total, dim = seq.data.shape
    if m_total == 0:
        return _empty_reduction(dim)

    cents = seq.data.astype(np.float64)
    weights = np.ones(m_total, dtype=np.int64)
    # members[c] = input indices absorbed by centroid c, in input order
    members = [[m] for m in range(m_total)]
    evals = 0

    while cents.shape[0] >= 2:
        k = cents.shape[0]
        norms = np.linalg.norm(cents, axis=1)
        sims = cents @ cents.T
        sims /= norms[:, None]
        sims /= norms[None, :]
        np.clip(sims, -1.0, 1.0, out=sims)
        evals += k * (k - 1) // 2
        # mask out diagonal and lower triangle; row-major argmax with
        # first-max semantics gives the lexicographically smallest pair
        idx = np.arange(k)
        sims[idx[:, None] >= idx[None, :]] = -2.0
        flat = int(np.argmax(sims))
        i, j = divmod(flat, k)
        if sims[i, j] <= tau:
            break
        wi, wj = weights[i], weights[j]
        cents[i] = (cents[i] * wi + cents[j] * wj) / (wi + wj)
        weights[i] = wi + wj
        members[i] = members[i] + members[j]
        cents = np.delete(cents, j, axis=0)
        weights = np.delete(weights, j)
        del members[j]

    # centroid list stays ordered by smallest member index throughout
    # (merges fold the later centroid into the earlier one), but sort
    # defensively before emitting
    order = np.argsort([min(ms) for ms in members], kind="stable")
    assignment = np.empty(m_total, dtype=np.int64)
    for out_idx, c in enumerate(order):
        assignment[members[c]] = out_idx
    return ReducedSequence(
        tokens=cents[order].astype(np.float32),
        weights=weights[order].copy(),
        assignment=assignment,
        pair_evals=evals,
    )
