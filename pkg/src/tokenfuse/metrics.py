"""Quality and efficiency accounting for reduction runs.

Quality proxy: cosine distance between each input token and the output
token it maps to (pruned tokens map to their nearest retained token).
Efficiency: the fractional reduction of a quadratic attention cost when
M visual tokens shrink to K alongside L text tokens.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict

import numpy as np

from .core import DomainError, ShapeError, TokenSequence
from .tofu import ReducedSequence
from .baselines import UNASSIGNED


@dataclass
class ReductionReport:
    """Single-run record, serialized as one JSON document."""

    input_tokens: int
    output_tokens: int
    retention_ratio: float
    strategy: str
    tau: float | None
    budget: int | None
    seed: int | None
    recon_error_mean: float
    recon_error_max: float
    attention_savings: float
    pair_eval_count: int
    wall_time_ms: float
    weights: list
    assignment: list

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ReductionReport":
        return cls(**json.loads(text))


def resolve_assignment(seq: TokenSequence, reduced: ReducedSequence) -> np.ndarray:
    """Assignment with pruned tokens mapped to their nearest retained token.

    Nearest by cosine similarity, ties to the lowest retained index.
    Fusion outputs pass through unchanged.
    """
    assignment = reduced.assignment
    if assignment.shape[0] != seq.count:
        raise ShapeError(
            f"assignment length {assignment.shape[0]} does not match "
            f"token count {seq.count}"
        )
    dropped = assignment == UNASSIGNED
    if not dropped.any():
        return assignment
    if reduced.count == 0:
        raise ShapeError("cannot resolve dropped tokens against an empty reduction")
    out = seq.data[dropped].astype(np.float64)
    kept = reduced.tokens.astype(np.float64)
    sims = (out @ kept.T) / np.outer(
        np.linalg.norm(out, axis=1), np.linalg.norm(kept, axis=1)
    )
    resolved = assignment.copy()
    resolved[dropped] = np.argmax(sims, axis=1)  # first max: lowest index
    return resolved


def reconstruction_error(
    seq: TokenSequence, reduced: ReducedSequence
) -> tuple[float, float, np.ndarray]:
    """Per-token cosine distance to the assigned output token.

    Returns (mean, max, per-token array).  An empty input yields
    (0.0, 0.0, []).
    """
    if seq.count == 0:
        return 0.0, 0.0, np.zeros(0, dtype=np.float64)
    assignment = resolve_assignment(seq, reduced)
    inputs = seq.data.astype(np.float64)
    targets = reduced.tokens.astype(np.float64)[assignment]
    dots = np.einsum("ij,ij->i", inputs, targets)
    norms = np.linalg.norm(inputs, axis=1) * np.linalg.norm(targets, axis=1)
    errors = 1.0 - np.clip(dots / norms, -1.0, 1.0)
    # a token retained verbatim has zero error by definition; don't let
    # norm rounding leak in
    errors[(seq.data == reduced.tokens[assignment]).all(axis=1)] = 0.0
    return float(errors.mean()), float(errors.max()), errors


def attention_savings(m: int, k: int, l: int = 0) -> float:
    """Modeled fractional reduction in quadratic attention cost.

    1 - ((k + l) / (m + l))^2 for m visual tokens reduced to k, with l
    text tokens along for the ride.
    """
    if not 0 <= k <= m:
        raise DomainError(f"output count {k} outside [0, {m}]")
    if l < 0:
        raise DomainError(f"text token count must be >= 0, got {l}")
    if m + l < 1:
        raise DomainError("total token count must be >= 1")
    return 1.0 - ((k + l) / (m + l)) ** 2
