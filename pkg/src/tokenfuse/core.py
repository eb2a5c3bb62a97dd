"""Embedding-sequence types, validation, and the cosine-similarity kernel.

Token matrices are stored as float32 (matching typical embedding dumps);
every dot product and norm is accumulated in float64 so that argmax
decisions do not drift across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: Rows with Euclidean norm below this are rejected: cosine similarity
#: is not well-defined for (near-)zero vectors.
MIN_TOKEN_NORM = 1e-12

STRATEGIES = ("tofu", "tofu_auto", "random", "topk", "stride", "oracle")


class TokenFuseError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(TokenFuseError):
    """Dimension or length mismatch between inputs."""


class DegenerateTokenError(TokenFuseError):
    """A token row has (near-)zero norm."""


class NonFiniteError(TokenFuseError):
    """A token matrix contains NaN or Inf."""


class DomainError(TokenFuseError):
    """A scalar parameter is outside its valid domain."""


class BudgetError(TokenFuseError):
    """A retained-token budget is incompatible with the input length."""


class FormatError(TokenFuseError):
    """A token file does not conform to the binary format."""


@dataclass(frozen=True)
class TokenSequence:
    """An ordered M x N matrix of token embeddings, row m = token m.

    Rows are float32; M may be 0, N must be >= 1.
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data, dtype=np.float32)
        if arr.ndim != 2:
            raise ShapeError(f"token matrix must be 2-D, got {arr.ndim}-D")
        if arr.shape[1] < 1:
            raise ShapeError("embedding dimensionality must be >= 1")
        object.__setattr__(self, "data", arr)

    @property
    def count(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    def __len__(self) -> int:
        return self.count


# Which config parameters each strategy consumes.
_STRATEGY_PARAMS = {
    "tofu": {"tau"},
    "tofu_auto": set(),
    "random": {"budget", "seed"},
    "topk": {"budget"},
    "stride": {"budget"},
    "oracle": {"tau"},
}


@dataclass(frozen=True)
class ReductionConfig:
    """Strategy selector plus exactly the parameters that strategy needs.

    Mean accumulation precision is fixed at float64 and not configurable.
    """

    strategy: str
    tau: float | None = None
    budget: int | None = None
    seed: int | None = None
    mean_accumulator_precision: int = field(default=64, repr=False)

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise DomainError(
                f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}"
            )
        if self.mean_accumulator_precision != 64:
            raise DomainError("mean accumulator precision is fixed at 64-bit")
        wanted = _STRATEGY_PARAMS[self.strategy]
        given = {
            name
            for name in ("tau", "budget", "seed")
            if getattr(self, name) is not None
        }
        if given != wanted:
            raise DomainError(
                f"strategy {self.strategy!r} requires parameters "
                f"{sorted(wanted) or 'none'}, got {sorted(given) or 'none'}"
            )
        if self.tau is not None and not -1.0 <= self.tau <= 1.0:
            raise DomainError(f"tau must lie in [-1, 1], got {self.tau}")
        if self.budget is not None and self.budget < 0:
            raise BudgetError(f"budget must be >= 0, got {self.budget}")
        if self.seed is not None and not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


def validate_sequence(seq: TokenSequence) -> TokenSequence:
    """Check finiteness and per-row norms; return the sequence unchanged.

    Reports the index of the first offending row.
    """
    data = seq.data
    finite_rows = np.isfinite(data).all(axis=1)
    if not finite_rows.all():
        idx = int(np.argmin(finite_rows))
        raise NonFiniteError(f"token {idx} contains a non-finite entry")
    norms = np.linalg.norm(data.astype(np.float64), axis=1)
    small = norms < MIN_TOKEN_NORM
    if small.any():
        idx = int(np.argmax(small))
        raise DegenerateTokenError(
            f"token {idx} has norm {norms[idx]:.3g} < {MIN_TOKEN_NORM}"
        )
    return seq


def cosine_similarity(a, b) -> float:
    """Cosine similarity of two vectors, clamped to [-1, 1].

    Accumulates in float64 regardless of input dtype.  Rejects vectors
    of (near-)zero norm and mismatched dimensionality.
    """
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if a.shape != b.shape:
        raise ShapeError(f"vector dimensions differ: {a.shape[0]} vs {b.shape[0]}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na < MIN_TOKEN_NORM or nb < MIN_TOKEN_NORM:
        raise DegenerateTokenError("cosine similarity undefined for zero-norm vector")
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))
