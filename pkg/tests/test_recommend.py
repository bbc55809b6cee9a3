import pytest

from tridiff.recommend import ScoreVector, score_objects, top_l
from tridiff.similarity import SimilarityRow, diffusion_row, fuse


def row(target, scores, kind="fused"):
    return SimilarityRow(target=target, scores=scores, kind=kind)


class TestScoreObjects:
    def test_f1_all_collected(self, f1_dataset):
        # u1 already collected both objects, so nothing is scorable
        sv = score_objects(f1_dataset, row(0, {1: 0.25, 2: 0.25}))
        assert sv.scores == {}

    def test_f2_uncollected_object(self, f2_dataset):
        sv = score_objects(f2_dataset, row(0, {1: 0.25, 2: 0.25}))
        assert sv.scores == {2: 0.25}

    def test_empty_row(self, f2_dataset):
        assert score_objects(f2_dataset, row(0, {})).scores == {}

    def test_self_entry_excluded(self, f2_dataset):
        with_self = score_objects(f2_dataset, row(0, {0: 9.0, 1: 0.25}))
        without = score_objects(f2_dataset, row(0, {1: 0.25}))
        assert with_self.scores == without.scores

    def test_accumulates_over_users(self, f2_dataset):
        # target u3 (index 2) collected only o2; o1 is backed by u1 and u2
        sv = score_objects(f2_dataset, row(2, {0: 0.5, 1: 0.25}))
        assert sv.scores[0] == pytest.approx(0.75, abs=1e-15)
        assert sv.scores[2] == pytest.approx(0.25, abs=1e-15)

    def test_no_leakage(self, f2_dataset):
        for target in range(3):
            full_row = row(target, {u: 1.0 for u in range(3) if u != target})
            sv = score_objects(f2_dataset, full_row)
            collected = set(
                f2_dataset.user_object.left_neighbors(target).tolist()
            )
            assert not collected & set(sv.scores)


class TestTopL:
    def test_sort_and_tiebreak(self):
        sv = ScoreVector(target=0, scores={3: 0.25, 5: 0.25, 4: 0.9})
        assert top_l(sv, 2).entries == [(4, 0.9), (3, 0.25)]

    def test_empty(self):
        assert top_l(ScoreVector(target=0, scores={}), 5).entries == []

    def test_truncation_to_positive(self):
        sv = ScoreVector(target=0, scores={1: 0.1, 2: 0.2})
        assert [o for o, _ in top_l(sv, 10).entries] == [2, 1]

    def test_l_validation(self):
        with pytest.raises(ValueError):
            top_l(ScoreVector(target=0, scores={}), 0)

    def test_tie_block_ascending_index(self):
        sv = ScoreVector(target=0, scores={9: 0.5, 2: 0.5, 7: 0.5})
        assert [o for o, _ in top_l(sv, 3).entries] == [2, 7, 9]


class TestProperties:
    def test_scale_invariance(self, f2_dataset):
        base = row(2, {0: 0.5, 1: 0.25})
        scaled = row(2, {0: 0.5 * 7.3, 1: 0.25 * 7.3})
        l1 = top_l(score_objects(f2_dataset, base), 3)
        l2 = top_l(score_objects(f2_dataset, scaled), 3)
        assert [o for o, _ in l1.entries] == [o for o, _ in l2.entries]

    def test_lambda_endpoint_consistency(self, f2_dataset):
        v = 2
        obj = diffusion_row(f2_dataset.user_object, v, channel="object")
        tag = diffusion_row(f2_dataset.user_tag, v, channel="tag")
        fused_scores = score_objects(f2_dataset, fuse(obj, tag, 1.0)).scores
        channel_scores = score_objects(f2_dataset, obj).scores
        assert fused_scores == channel_scores
