# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0

"""Unit tests for the autoregressive copy model, scoring and beam search."""

import math

import numpy as np
import pytest

from arelu_sdk.common.errors import ConfigError, InputDomainError
from arelu_sdk.factory import OutputFactory
from arelu_sdk.losses import reduce_mean
from arelu_sdk.nnet import (
    EOS,
    CopyExample,
    CopyTaskConfig,
    OptimizerConfig,
    SequenceModel,
    SequenceModelConfig,
    TrainConfig,
    decode,
    load_sequence_model,
    save_sequence_model,
    score_sequence,
    token_copy,
    train_sequence_model,
)


def _model(**kwargs) -> SequenceModel:
    defaults = dict(vocab=6, embed_dim=4, hidden=12, activation="tanh", seed=0)
    defaults.update(kwargs)
    return SequenceModel(SequenceModelConfig(**defaults))


def _greedy(model: SequenceModel, source, max_len: int) -> list[int]:
    tokens: list[int] = []
    for _ in range(max_len):
        token = int(np.argmax(model.step_logits(source, [tokens])[0]))
        if token == EOS:
            break
        tokens.append(token)
    return tokens


# ---------------------------------------------------------------------------
# Model
# ---------------------------------------------------------------------------


class TestModel:
    def test_step_depends_only_on_earlier_tokens(self):
        model = _model()
        src = (1, 2, 3)
        a = model.teacher_forced_logits([CopyExample(src, (4, 5, 1))])
        b = model.teacher_forced_logits([CopyExample(src, (4, 2, 2))])
        # rows 0 and 1 see only BOS and token 4
        np.testing.assert_allclose(a[:2], b[:2], atol=1e-12)
        assert not np.allclose(a[2], b[2])

    def test_teacher_forced_rows_include_eos(self):
        src_idx, prev_idx, labels = _model().teacher_forced_rows([CopyExample((1, 2), (3,))])
        assert labels.tolist() == [3, EOS]
        assert src_idx.tolist() == [1, 2]
        assert prev_idx.tolist() == [6, 3]

    def test_past_the_end_marker(self):
        src_idx, _, _ = _model().teacher_forced_rows([CopyExample((1,), (1, 2, 3))])
        assert src_idx.tolist() == [1, 6, 6, 6]

    def test_small_vocab_rejected(self):
        with pytest.raises(ConfigError):
            _model(vocab=2)

    def test_embedding_gradients_match_finite_differences(self):
        model = _model()
        head = OutputFactory().create_head("arelu", tau=0.1)
        examples = [CopyExample((1, 2, 3), (1, 2, 3)), CopyExample((4, 5), ())]
        src_idx, prev_idx, labels = model.teacher_forced_rows(examples)
        grads, _ = model.gradients(src_idx, prev_idx, labels, head)

        def loss() -> float:
            logits = model.teacher_forced_logits(examples)
            return float(reduce_mean(head.loss(logits, labels)).value)

        eps = 1e-6
        for table, grad in ((model.source_embedding, grads[0]), (model.prev_embedding, grads[1])):
            for idx in [(1, 0), (3, 2), (6, 1), (5, 3)]:
                orig = table[idx]
                table[idx] = orig + eps
                up = loss()
                table[idx] = orig - eps
                down = loss()
                table[idx] = orig
                assert grad[idx] == pytest.approx((up - down) / (2 * eps), rel=1e-4, abs=1e-7)

    def test_training_reduces_loss(self):
        train_set, _ = token_copy(CopyTaskConfig(vocab=8, max_len=4, n_train=40, n_dev=1, seed=1))
        model = _model(vocab=8, hidden=32, activation="relu")
        cfg = TrainConfig(optimizer=OptimizerConfig(learning_rate=1e-2, steps=40), log_every=10)
        head = OutputFactory().create_head("softmax")
        records = train_sequence_model(model, train_set, head, cfg)
        assert [r.step for r in records] == [10, 20, 30, 40]
        assert records[-1].loss < records[0].loss

    def test_training_needs_examples(self):
        with pytest.raises(InputDomainError):
            train_sequence_model(_model(), [], OutputFactory().create_head("softmax"))


# ---------------------------------------------------------------------------
# Scoring
# ---------------------------------------------------------------------------


class TestScoring:
    def test_empty_sequence_scores_first_step_eos(self):
        model = _model()
        head = OutputFactory().create_head("arelu", tau=0.0)
        source = (1, 2)
        w = head.transform(model.step_logits(source, [()])).values[0]
        score = score_sequence(model, source, (), head)
        if w.sum() > 0:
            assert score.score == pytest.approx(w[EOS] / w.sum())
        assert score.raw_log_score == (math.log(w[EOS]) if w[EOS] > 0 else float("-inf"))

    def test_softmax_score_is_product_of_probabilities(self):
        model = _model()
        head = OutputFactory().create_head("softmax")
        source, tokens = (1, 2), (1, 2)
        gold = [1, 2, EOS]
        logits = model.step_logits(source, [gold[:t] for t in range(3)])
        p = head.transform(logits).values
        expected = sum(math.log(p[t, gold[t]]) for t in range(3))
        score = score_sequence(model, source, tokens, head)
        assert score.log_score == pytest.approx(expected, abs=1e-12)
        assert score.raw_log_score == pytest.approx(expected, abs=1e-12)


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------


class TestDecode:
    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_beam_one_is_greedy_for_softmax(self, seed):
        model = _model(seed=seed)
        source = (3, 1, 4)
        max_len = 2 * len(source) + 2
        hyp = decode(model, source, OutputFactory().create_head("softmax"), beam=1)
        assert list(hyp.tokens) == _greedy(model, source, max_len)

    def test_decoded_score_matches_rescoring(self):
        model = _model(seed=5)
        head = OutputFactory().create_head("entmax15")
        hyp = decode(model, (2, 3), head, beam=3)
        if hyp.finished and hyp.log_score > float("-inf"):
            assert hyp.log_score == pytest.approx(
                score_sequence(model, (2, 3), hyp.tokens, head).log_score, abs=1e-9
            )

    def test_all_zero_weights_fall_back_to_argmax(self):
        model = _model(seed=6)
        head = OutputFactory().create_head("arelu", tau=1e6)
        source = (1, 2)
        hyp = decode(model, source, head, beam=2)
        assert hyp.log_score == float("-inf")
        assert hyp.score == 0.0
        assert len(hyp.tokens) <= 2 * len(source) + 2

    def test_length_cap_forces_eos(self):
        model = _model(seed=7)
        hyp = decode(model, (1, 2), OutputFactory().create_head("softmax"), beam=2, max_len=1)
        assert hyp.finished
        assert len(hyp.tokens) <= 1

    @pytest.mark.parametrize("beam", [0, -3])
    def test_beam_must_be_positive(self, beam):
        with pytest.raises(ConfigError):
            decode(_model(), (1,), OutputFactory().create_head("softmax"), beam=beam)


def test_sequence_checkpoint_round_trip(tmp_path):
    model = _model(seed=8)
    path = save_sequence_model(model, tmp_path / "seq.npz")
    loaded = load_sequence_model(path)
    assert loaded.config == model.config
    np.testing.assert_array_equal(
        loaded.step_logits((1, 2), [(), (1,)]), model.step_logits((1, 2), [(), (1,)])
    )
