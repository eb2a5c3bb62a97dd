import numpy as np
import pytest

from tokenfuse import (
    BudgetError,
    ImportanceScores,
    ShapeError,
    TokenSequence,
    random_sample,
    topk_prune,
    uniform_stride,
)

RNG = np.random.Generator(np.random.PCG64(77))
SEQ = TokenSequence(RNG.standard_normal((10, 4)).astype(np.float32))


def kept_indices(reduced):
    return np.flatnonzero(reduced.assignment >= 0)


class TestRandomSample:
    def test_full_budget_is_identity(self):
        r = random_sample(SEQ, 10, seed=3)
        np.testing.assert_array_equal(r.tokens, SEQ.data)
        assert r.weights.tolist() == [1] * 10

    def test_zero_budget(self):
        r = random_sample(SEQ, 0, seed=3)
        assert r.count == 0
        assert (r.assignment == -1).all()

    def test_seed_determinism(self):
        a = random_sample(SEQ, 4, seed=123)
        b = random_sample(SEQ, 4, seed=123)
        np.testing.assert_array_equal(a.assignment, b.assignment)
        np.testing.assert_array_equal(a.tokens, b.tokens)

    def test_budget_over_m(self):
        with pytest.raises(BudgetError):
            random_sample(SEQ, 11, seed=0)

    def test_subsequence_property(self):
        for seed in range(20):
            r = random_sample(SEQ, 5, seed=seed)
            kept = kept_indices(r)
            assert len(kept) == 5
            np.testing.assert_array_equal(r.tokens, SEQ.data[kept])

    def test_index_frequencies_roughly_uniform(self):
        # small version of the acceptance statistic
        m, budget, runs = 20, 5, 2000
        seq = TokenSequence(np.eye(m, dtype=np.float32) + 0.01)
        hits = np.zeros(m)
        for seed in range(runs):
            hits[kept_indices(random_sample(seq, budget, seed))] += 1
        freq = hits / runs
        p = budget / m
        sigma = np.sqrt(p * (1 - p) / runs)
        assert (np.abs(freq - p) <= 4 * sigma).all()


class TestTopkPrune:
    def test_analytic_fixture(self):
        seq = TokenSequence([[1, 0], [0, 1], [1, 1]])
        r = topk_prune(seq, ImportanceScores([0.1, 0.9, 0.5]), 2)
        assert kept_indices(r).tolist() == [1, 2]
        np.testing.assert_array_equal(r.tokens, seq.data[[1, 2]])

    def test_tie_breaks_to_lower_index(self):
        seq = TokenSequence(np.eye(4, dtype=np.float32) + 0.01)
        r = topk_prune(seq, ImportanceScores([0.5, 0.5, 0.5, 0.5]), 2)
        assert kept_indices(r).tolist() == [0, 1]

    def test_full_budget(self):
        r = topk_prune(SEQ, ImportanceScores(np.arange(10.0)), 10)
        np.testing.assert_array_equal(r.tokens, SEQ.data)

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            topk_prune(SEQ, ImportanceScores([1.0, 2.0]), 1)

    def test_budget_over_m(self):
        with pytest.raises(BudgetError):
            topk_prune(SEQ, ImportanceScores(np.arange(10.0)), 11)


class TestUniformStride:
    def test_fixture_m6_b3(self):
        seq = TokenSequence(RNG.standard_normal((6, 3)).astype(np.float32))
        r = uniform_stride(seq, 3)
        assert kept_indices(r).tolist() == [0, 2, 4]

    def test_fixture_m5_b2(self):
        seq = TokenSequence(RNG.standard_normal((5, 3)).astype(np.float32))
        r = uniform_stride(seq, 2)
        assert kept_indices(r).tolist() == [0, 2]

    def test_full_budget_identity(self):
        r = uniform_stride(SEQ, 10)
        assert kept_indices(r).tolist() == list(range(10))
        np.testing.assert_array_equal(r.tokens, SEQ.data)

    def test_zero_budget_rejected(self):
        with pytest.raises(BudgetError):
            uniform_stride(SEQ, 0)

    def test_budget_over_m(self):
        with pytest.raises(BudgetError):
            uniform_stride(SEQ, 11)
