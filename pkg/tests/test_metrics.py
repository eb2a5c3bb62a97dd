import json
import math

import numpy as np
import pytest

from tokenfuse import (
    DomainError,
    ReductionReport,
    ShapeError,
    TokenSequence,
    attention_savings,
    fuse,
    random_sample,
    reconstruction_error,
)
from tokenfuse.tofu import ReducedSequence


class TestReconstructionError:
    def test_identity_reduction_is_zero(self):
        seq = TokenSequence([[1, 0], [0, 1], [1, 1]])
        r = fuse(seq, 1.0)
        mean, peak, per = reconstruction_error(seq, r)
        assert mean == 0.0 and peak == 0.0
        np.testing.assert_array_equal(per, np.zeros(3))

    def test_collapsed_orthogonal_pair(self):
        seq = TokenSequence([[1, 0], [0, 1]])
        r = fuse(seq, -1.0)
        mean, peak, per = reconstruction_error(seq, r)
        expected = 1 - math.sqrt(2) / 2
        assert mean == pytest.approx(expected, abs=1e-5)
        assert peak == pytest.approx(expected, abs=1e-5)

    def test_hand_trace_values(self):
        seq = TokenSequence([[1, 0], [0.8, 0.6], [0, 1]])
        r = fuse(seq, 0.75)
        mean, peak, per = reconstruction_error(seq, r)
        np.testing.assert_allclose(per, [0.05132, 0.05132, 0.0], atol=1e-4)
        assert mean == pytest.approx(0.03421, abs=1e-4)
        assert mean <= peak

    def test_pruned_tokens_map_to_nearest_retained(self):
        seq = TokenSequence([[1, 0], [0.99, 0.14], [0, 1]])
        r = random_sample(seq, 2, seed=0)
        # whatever was kept, dropped tokens get a finite error against
        # their most similar survivor
        mean, peak, per = reconstruction_error(seq, r)
        assert per.shape == (3,)
        assert (per >= 0).all()
        kept = np.flatnonzero(r.assignment >= 0)
        np.testing.assert_array_equal(per[kept], np.zeros(len(kept)))

    def test_singleton_fusion_token_error_is_zero(self):
        seq = TokenSequence([[1, 0], [0.8, 0.6], [0, 1]])
        r = fuse(seq, 0.75)
        _, _, per = reconstruction_error(seq, r)
        # token 2 kept its own slot with weight 1
        assert per[2] == 0.0

    def test_shape_mismatch(self):
        seq = TokenSequence([[1, 0], [0, 1]])
        bad = ReducedSequence(
            tokens=np.eye(2, dtype=np.float32),
            weights=[1, 1, 1],
            assignment=[0, 1, 1],
        )
        with pytest.raises(ShapeError):
            reconstruction_error(seq, bad)


class TestAttentionSavings:
    def test_direct_evaluation(self):
        assert attention_savings(100, 40, 0) == 0.84

    def test_no_reduction_is_zero(self):
        assert attention_savings(50, 50, 0) == 0.0
        assert attention_savings(50, 50, 128) == 0.0

    def test_with_text_tokens(self):
        assert attention_savings(3072, 1260, 64) == pytest.approx(0.8217, abs=1e-4)

    def test_monotone_in_k(self):
        for l in (0, 16):
            vals = [attention_savings(64, k, l) for k in range(65)]
            assert all(a >= b for a, b in zip(vals, vals[1:]))

    def test_domain(self):
        with pytest.raises(DomainError):
            attention_savings(10, 11, 0)
        with pytest.raises(DomainError):
            attention_savings(10, 5, -1)
        with pytest.raises(DomainError):
            attention_savings(0, 0, 0)


class TestReductionReport:
    def test_json_round_trip(self):
        rep = ReductionReport(
            input_tokens=4,
            output_tokens=2,
            retention_ratio=0.5,
            strategy="tofu",
            tau=0.7,
            budget=None,
            seed=None,
            recon_error_mean=0.01,
            recon_error_max=0.02,
            attention_savings=0.75,
            pair_eval_count=6,
            wall_time_ms=1.5,
            weights=[3, 1],
            assignment=[0, 0, 0, 1],
        )
        parsed = json.loads(rep.to_json())
        assert parsed["input_tokens"] == 4
        assert parsed["retention_ratio"] == 0.5
        assert parsed["weights"] == [3, 1]
        assert ReductionReport.from_json(rep.to_json()) == rep

    def test_invariant_mean_below_max(self):
        seq = TokenSequence([[1, 0], [0.8, 0.6], [0, 1]])
        mean, peak, _ = reconstruction_error(seq, fuse(seq, 0.75))
        assert 0 <= mean <= peak
