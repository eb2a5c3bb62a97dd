"""Shared fixtures and independent reference checks."""

from __future__ import annotations

import numpy as np
import pytest

from tokenfuse import TokenSequence


def random_valid_sequence(rng, max_m=128, max_n=32, nonnegative=False):
    """A random finite sequence with no degenerate rows.

    With nonnegative=True all entries sit in the positive orthant, which
    keeps every pairwise (and token-vs-mean) cosine similarity >= 0.
    """
    m = int(rng.integers(1, max_m + 1))
    n = int(rng.integers(2, max_n + 1))
    data = rng.standard_normal((m, n))
    if nonnegative:
        data = np.abs(data) + 0.1
    return TokenSequence(data.astype(np.float32))


@pytest.fixture(scope="session")
def random_inputs():
    """100 seeded random valid inputs (M <= 128, N <= 32)."""
    rng = np.random.Generator(np.random.PCG64(2024))
    return [random_valid_sequence(rng) for _ in range(100)]


@pytest.fixture(scope="session")
def nonnegative_inputs():
    """100 seeded inputs whose similarities stay nonnegative throughout."""
    rng = np.random.Generator(np.random.PCG64(4048))
    return [random_valid_sequence(rng, nonnegative=True) for _ in range(100)]


def replay_sequential_fusion(seq, tau, reduced):
    """Re-simulate sequential fusion from the reported assignment.

    Independently verifies, step by step: appended tokens were no more
    similar than tau to every centroid present at that step, and merged
    tokens went to the argmax centroid with similarity strictly above
    tau.  Returns the replayed centroids and counts for cross-checking.
    """
    data = seq.data.astype(np.float64)
    cents: list[np.ndarray] = []
    counts: list[int] = []
    next_slot = 0
    for m in range(data.shape[0]):
        slot = int(reduced.assignment[m])
        v = data[m]
        if cents:
            stack = np.asarray(cents)
            sims = stack @ v
            sims /= np.linalg.norm(stack, axis=1) * np.linalg.norm(v)
            sims = np.clip(sims, -1.0, 1.0)
            best = int(np.argmax(sims))
        if slot == next_slot:
            if cents:
                assert sims[best] <= tau, f"append at step {m} violated threshold"
            cents.append(v.copy())
            counts.append(1)
            next_slot += 1
        else:
            assert slot < next_slot, f"assignment at step {m} skips a slot"
            assert slot == best, f"merge at step {m} not into the argmax centroid"
            assert sims[slot] > tau, f"merge at step {m} at or below threshold"
            cents[slot] = (cents[slot] * counts[slot] + v) / (counts[slot] + 1)
            counts[slot] += 1
    assert counts == list(reduced.weights)
    np.testing.assert_allclose(
        np.asarray(cents, dtype=np.float64),
        reduced.tokens.astype(np.float64),
        rtol=1e-5,
        atol=1e-7,
    )


def check_reduction_invariants(seq, reduced, fusion=True):
    """Structural invariants every fusion output must satisfy."""
    m = seq.count
    assert int(reduced.weights.sum()) == m
    # exact per-slot counts
    counts = np.bincount(reduced.assignment, minlength=reduced.count)
    np.testing.assert_array_equal(counts, reduced.weights)
    # first-occurrence order strictly increasing, starting at slot 0
    first = np.full(reduced.count, -1, dtype=np.int64)
    for idx, slot in enumerate(reduced.assignment):
        if first[slot] == -1:
            first[slot] = idx
    assert first[0] == 0 or m == 0
    assert (np.diff(first) > 0).all()
    seen = np.sort(first)
    np.testing.assert_array_equal(seen, first)
    if fusion and m:
        data = seq.data.astype(np.float64)
        for j in range(reduced.count):
            mean = data[reduced.assignment == j].mean(axis=0)
            np.testing.assert_allclose(
                reduced.tokens[j].astype(np.float64), mean, rtol=1e-5, atol=1e-7
            )
