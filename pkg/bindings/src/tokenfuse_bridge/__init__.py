"""Flat-buffer bridge to the tokenfuse fusion kernel.

Callers hand over a flat row-major float buffer plus its (M, N) shape
and get flat buffers back, so no tokenfuse types leak into the host
pipeline.  Exactly one marshaling copy is made in each direction; the
bridge holds no state between calls, and the kernel itself runs in
numpy/BLAS, which drops the interpreter lock during the heavy work.

Results are bitwise-identical to calling the tokenfuse library directly.
"""

from __future__ import annotations

import numpy as np

from tokenfuse import TokenSequence
from tokenfuse import dynamic_threshold as _dynamic_threshold
from tokenfuse import fuse as _fuse

__version__ = "0.1.0"

__all__ = ["fuse_buffer", "fuse_auto_buffer", "dynamic_threshold"]


def _marshal(data, m: int, n: int) -> TokenSequence:
    buf = np.frombuffer(np.asarray(data, dtype=np.float32), dtype=np.float32)
    if buf.size != m * n:
        raise ValueError(f"buffer holds {buf.size} floats, expected {m}x{n}={m * n}")
    return TokenSequence(buf.reshape(m, n).copy())


def _flatten(reduced):
    return (
        np.ascontiguousarray(reduced.tokens, dtype=np.float32).reshape(-1),
        reduced.weights.copy(),
        reduced.assignment.copy(),
    )


def fuse_buffer(data, m: int, n: int, tau: float):
    """Fuse a flat M*N float32 buffer at threshold tau.

    Returns (flat K*N float32 tokens, weights, assignment).
    """
    return _flatten(_fuse(_marshal(data, m, n), tau))


def fuse_auto_buffer(data, m: int, n: int):
    """Fuse with the length-derived threshold.

    Returns (flat tokens, weights, assignment, threshold_used).
    """
    tau = _dynamic_threshold(m)
    tokens, weights, assignment = fuse_buffer(data, m, n, tau)
    return tokens, weights, assignment, tau


def dynamic_threshold(m: int) -> float:
    """Similarity threshold for an input of m tokens (pass-through)."""
    return _dynamic_threshold(m)
