import csv
import json
import math

import numpy as np
import pytest
from interface import implements
from pydantic import ValidationError

from ..circuit import HyperParams, ParamRegistry, init_params
from ..corpora import LabeledCorpus
from ..diagram import from_sentence
from ..evaluators import Evaluator, ExactEvaluator
from ..train import (
    BasinhoppingSettings,
    Dataset,
    EvaluatorSettings,
    NelderMeadSettings,
    SpsaSettings,
    Timer,
    TrainConfig,
    UnseenWords,
    check_vocabulary,
    compile_corpus,
    cost_bce,
    cost_squared,
    error_decay_slope,
    error_rate,
    moving_average,
    round_label,
    run_experiment,
    split,
    summary,
    write_params,
    write_summary,
    write_trace,
)
from ._oracles import noun_cups


class FixedEvaluator(implements(Evaluator)):
    """Returns preset labels whatever the parameters."""

    def __init__(self, values):
        self.values = np.asarray(values, dtype=float)

    @property
    def method(self):
        return "fixed"

    def labels(self, circuits, theta):
        return self.values[:len(circuits)]


def _dataset(labels):
    return Dataset([["s"]] * len(labels), [None] * len(labels), labels)


def test_split_sizes(k30, k16, k6):
    for corpus, expected in [(k30, 15), (k16, 8), (k6, 3)]:
        train, test = split(corpus.corpus, 0.5)
        assert len(train) == expected
        assert len(train) + len(test) == len(corpus.corpus)
        assert list(train) + list(test) == list(corpus.corpus.items)


def test_split_rounds_half_to_even():
    corpus = LabeledCorpus([(["Romeo", "dies"], 1)] * 10)
    assert len(split(corpus, 0.25)[0]) == 2
    assert len(split(corpus, 0.75)[0]) == 8
    with pytest.raises(ValueError):
        split(corpus, 1.0)


def test_costs():
    data = _dataset([1, 0])
    half = FixedEvaluator([0.5, 0.5])
    assert cost_squared(None, data, half) == pytest.approx(0.5)
    assert cost_squared(None, _dataset([1]), half) == pytest.approx(0.25)
    assert cost_bce(None, data, half) == pytest.approx(math.log(2))

    certain = FixedEvaluator([1.0, 0.0])
    assert cost_squared(None, data, certain) == 0
    assert cost_bce(None, data, certain) == pytest.approx(-math.log(1 - 1e-9))

    wrong = FixedEvaluator([0.0, 1.0])
    assert cost_bce(None, data, wrong) == pytest.approx(-math.log(1e-9))


def test_round_label_sends_ties_to_one():
    assert round_label([0.5, 0.4999, 0.0, 1.0]).tolist() == [1, 0, 0, 1]


def test_error_rate():
    assert error_rate(None, _dataset([0]), FixedEvaluator([0.5])) == 1.0
    assert error_rate(None, _dataset([1]), FixedEvaluator([0.5])) == 0.0

    labels = [1, 1, 1, 1, 0, 0, 0, 0]
    predicted = [0.9, 0.8, 0.7, 0.2, 0.1, 0.1, 0.3, 0.4]
    assert error_rate(None, _dataset(labels), FixedEvaluator(predicted)) == 0.125

    assert error_rate(None, _dataset([]), FixedEvaluator([])) == 0.0


def test_check_vocabulary():
    train = [(("Romeo", "dies"), 1)]
    check_vocabulary(train, [(("Romeo", "dies", "dies"), 0)])
    with pytest.raises(UnseenWords) as e:
        check_vocabulary(train, [(("Juliet", "loves", "Romeo"), 0)])
    assert str(e.value) == (
        "Test sentences use words that never appear in training:\n"
        "  - 'Juliet'\n"
        "  - 'loves'"
    )


def test_run_experiment_rejects_unseen_test_words(dictionary):
    corpus = LabeledCorpus([(["Romeo", "dies"], 1), (["Juliet", "dies"], 0)])
    with pytest.raises(UnseenWords):
        run_experiment(corpus, TrainConfig(), dictionary)


def test_config_defaults_and_seeds():
    config = TrainConfig(seed=10)
    assert isinstance(config.optimizer, SpsaSettings)
    seeds = (config.init_seed, config.optimizer_seed, config.evaluator_seed)
    assert seeds == (10, 11, 12)
    assert config.cost == "squared"


def test_optimizer_settings_discriminate_on_kind():
    config = TrainConfig.model_validate(
        {"optimizer": {"kind": "basinhopping", "hops": 5}}
    )
    assert config.optimizer == BasinhoppingSettings(hops=5)
    assert config.optimizer.inner == NelderMeadSettings()
    with pytest.raises(ValidationError):
        TrainConfig.model_validate({"optimizer": {"kind": "adam"}})
    with pytest.raises(ValidationError):
        EvaluatorSettings(mode="shots")
    with pytest.raises(ValidationError):
        TrainConfig(split_p=1)


def _k6_config(**kwargs):
    defaults = dict(optimizer=SpsaSettings(iterations=40), seed=0)
    defaults.update(kwargs)
    return TrainConfig(**defaults)


def test_run_experiment_on_k6(k6, dictionary):
    record = run_experiment(k6.corpus, _k6_config(), dictionary)
    assert record.n_params == 7
    assert record.registry.words == ["Romeo", "dies", "loves", "Juliet"]
    assert record.theta_star.shape == (7,)
    assert len(record.cost_trace) == 40
    assert record.evaluations == 80
    assert 0 <= record.e_train <= 1
    assert 0 <= record.e_test <= 1


def test_run_experiment_is_reproducible(k6, dictionary):
    first = run_experiment(k6.corpus, _k6_config(), dictionary)
    second = run_experiment(k6.corpus, _k6_config(), dictionary)
    np.testing.assert_array_equal(first.theta_star, second.theta_star)
    assert first.cost_trace == second.cost_trace
    assert (first.e_train, first.e_test) == (second.e_train, second.e_test)


def test_run_experiment_with_shots(k6, dictionary):
    config = _k6_config(
        optimizer=SpsaSettings(iterations=5),
        evaluator=EvaluatorSettings(mode="shots", shots=64),
    )
    first = run_experiment(k6.corpus, config, dictionary)
    second = run_experiment(k6.corpus, config, dictionary)
    assert first.cost_trace == second.cost_trace


def test_nelder_mead_lowers_k6_training_cost(k6, dictionary):
    config = _k6_config(optimizer=NelderMeadSettings(max_iter=400))
    record = run_experiment(k6.corpus, config, dictionary)
    costs = [c for _, c in record.cost_trace]
    assert costs == sorted(costs, reverse=True)
    assert costs[-1] < costs[0]


def test_moving_average():
    assert moving_average([1, 2, 3, 4], 2) == [1.5, 2.5, 3.5]
    assert moving_average([1, 2], 3) == []


def test_error_decay_slope():
    depths = [1, 2, 4, 8]
    errors = [0.4 * d ** -1.5 for d in depths]
    assert error_decay_slope(depths, errors) == pytest.approx(-1.5)
    assert error_decay_slope([1, 2, 4], [0.5, 0.25, 0.0]) == pytest.approx(-1)
    assert math.isnan(error_decay_slope([1, 2], [0.3, 0.0]))


def test_output_files(tmpdir, k6, dictionary):
    config = _k6_config(optimizer=SpsaSettings(iterations=3))
    record = run_experiment(k6.corpus, config, dictionary)

    trace = tmpdir.join("trace.csv")
    write_trace(trace, record)
    with open(str(trace)) as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["iteration", "cost"]
    assert [int(r[0]) for r in rows[1:]] == [0, 1, 2]
    assert float(rows[-1][1]) == record.cost_trace[-1][1]

    with Timer() as t:
        pass
    assert t.elapsed >= 0

    out = tmpdir.join("summary.json")
    write_summary(out, record, config, "K6", t.started, t.elapsed)
    written = json.loads(out.read())
    assert written == summary(record, config, "K6", t.started, t.elapsed)
    assert written["n_params"] == 7
    assert written["evaluations"] == 6
    assert written["config"]["optimizer"]["kind"] == "spsa"
    assert set(written) == {
        "corpus", "config", "n_params", "evaluations", "final_cost", "e_train",
        "e_test", "timestamp",
    }

    params = tmpdir.join("params.json")
    write_params(params, record)
    saved = json.loads(params.read())
    assert saved["registry"]["Romeo"] == [0, 2]
    np.testing.assert_array_equal(saved["theta"], record.theta_star)
    assert "hyper" not in saved

    write_params(params, record, config.hyper)
    assert json.loads(params.read())["hyper"] == config.hyper.model_dump()


@pytest.mark.slow
def test_k30_is_learned_with_spsa(k30, dictionary):
    config = TrainConfig(optimizer=SpsaSettings(iterations=1000), seed=0)
    record = run_experiment(k30.corpus, config, dictionary)
    assert record.n_params == 12
    smoothed = moving_average([c for _, c in record.cost_trace], 50)
    assert smoothed[-1] < smoothed[0]


def _tail_cost(record, tail):
    return float(np.mean([c for _, c in record.cost_trace[-tail:]]))


@pytest.mark.slow
def test_deeper_word_circuits_reach_a_lower_cost(k30, dictionary):
    finals = {}
    for d in (1, 3):
        finals[d] = np.mean([
            _tail_cost(
                run_experiment(
                    k30.corpus, TrainConfig(hyper=HyperParams(d=d), seed=seed),
                    dictionary,
                ),
                100,
            )
            for seed in range(20)
        ])
    assert finals[3] < finals[1]


@pytest.mark.slow
def test_bce_cost_falls_under_spsa(k30, dictionary):
    starts, ends = [], []
    for seed in range(4):
        record = run_experiment(
            k30.corpus, TrainConfig(cost="bce", seed=seed), dictionary
        )
        costs = [c for _, c in record.cost_trace]
        starts.append(np.mean(costs[:10]))
        ends.append(np.mean(costs[-50:]))
    assert np.mean(ends) < 0.9 * np.mean(starts)


@pytest.mark.slow
def test_basinhopping_errors_respect_the_label_bound(k30, dictionary):
    # At q_n = 1 a sentence with two n-cups never predicts more than 1/4, so
    # every such positive training sentence is misclassified at any depth.
    train, _ = split(k30.corpus, 0.5)
    unreachable = sum(
        1 for words, label in train
        if label == 1 and noun_cups(from_sentence(words, dictionary)) >= 2
    )
    floor = unreachable / float(len(train))
    assert floor > 0

    depths = [1, 2, 3]
    errors = []
    for d in depths:
        optimizer = BasinhoppingSettings(
            hops=3, inner=NelderMeadSettings(max_iter=200)
        )
        config = TrainConfig(optimizer=optimizer, hyper=HyperParams(d=d), seed=0)
        record = run_experiment(k30.corpus, config, dictionary)
        assert len(record.cost_trace) == 4
        assert record.e_train >= floor
        errors.append(record.e_train)
    assert isinstance(error_decay_slope(depths, errors), float)


def test_error_rate_at_two_qubit_nouns_is_the_positive_fraction(k6, dictionary):
    hyper = HyperParams(q_n=2)
    registry = ParamRegistry()
    dataset = compile_corpus(list(k6.corpus.items), dictionary, hyper, registry)
    positives = sum(dataset.labels) / float(len(dataset.labels))
    for seed in range(3):
        theta = init_params(registry.total_slots, seed)
        assert error_rate(theta, dataset, ExactEvaluator()) == pytest.approx(positives)
