"""
train
-----
Question answering as binary classification: split a labelled corpus, fit
word parameters on the training half, and score both halves.

The pipeline in :func:`run_experiment` builds one parameter registry over the
corpus vocabulary, compiles every sentence once, and then only rebinds
parameters while the optimizer runs.
"""
import csv
import datetime
import json
import logging
import math
import time
from collections import namedtuple
from textwrap import dedent
from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .circuit import HyperParams, ParamRegistry, compile, init_params
from .corpora import builtin_dictionary
from .diagram import from_sentence
from .evaluators import make_evaluator
from .formatting import bulleted_list
from .optimizers import make_optimizer
from .utils import sliding_window, vocabulary

log = logging.getLogger(__name__)

BCE_EPSILON = 1e-9


class UnseenWords(ValueError):
    """
    Raised when test sentences use words that never appear in training.
    """


class SpsaSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["spsa"] = "spsa"
    a: float = Field(0.1, gt=0)
    c: float = Field(0.1, gt=0)
    iterations: int = Field(1000, ge=1)


class NelderMeadSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["nelder_mead"] = "nelder_mead"
    max_iter: Optional[int] = Field(None, ge=1)
    xatol: float = Field(1e-6, gt=0)
    fatol: float = Field(1e-6, gt=0)


class BasinhoppingSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["basinhopping"] = "basinhopping"
    hops: int = Field(100, ge=1)
    temperature: float = Field(1.0, ge=0)
    step_size: float = Field(0.5, gt=0)
    inner: NelderMeadSettings = NelderMeadSettings()


OptimizerSettings = Annotated[
    Union[SpsaSettings, NelderMeadSettings, BasinhoppingSettings],
    Field(discriminator="kind"),
]


class EvaluatorSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    mode: Literal["exact", "shots", "hadamard"] = "exact"
    shots: Optional[int] = Field(None, ge=1)
    workers: int = Field(1, ge=1)

    @model_validator(mode="after")
    def _shots_for_sampling(self):
        if self.mode == "shots" and self.shots is None:
            raise ValueError("evaluator mode 'shots' needs a shot count")
        return self


class TrainConfig(BaseModel):
    """
    Everything that determines a training run.

    Component seeds derive from ``seed`` by fixed offsets: parameter
    initialisation uses ``seed``, the optimizer ``seed + 1`` and the
    evaluator ``seed + 2``.
    """

    model_config = ConfigDict(frozen=True)

    optimizer: OptimizerSettings = SpsaSettings()
    cost: Literal["squared", "bce"] = "squared"
    hyper: HyperParams = HyperParams()
    split_p: float = Field(0.5, gt=0, lt=1)
    seed: int = 0
    evaluator: EvaluatorSettings = EvaluatorSettings()

    @property
    def init_seed(self):
        return self.seed

    @property
    def optimizer_seed(self):
        return self.seed + 1

    @property
    def evaluator_seed(self):
        return self.seed + 2


class Dataset(namedtuple("Dataset", ["sentences", "circuits", "labels"])):
    """Compiled sentences with their labels."""

    __slots__ = ()

    def __len__(self):
        return len(self.circuits)


class TrainRecord(namedtuple("TrainRecord", [
    "cost_trace", "theta_star", "e_train", "e_test", "n_params", "evaluations",
    "registry",
])):
    __slots__ = ()


def split(corpus, p):
    """
    First ``round(p * N)`` items train, the rest test, order preserved.

    Rounding is half-to-even.
    """
    if not 0 < p < 1:
        raise ValueError("p must lie strictly between 0 and 1, got {}".format(p))
    items = list(corpus.items)
    k = int(round(p * len(items)))
    return items[:k], items[k:]


def _predictions(theta, dataset, evaluator):
    return np.asarray(evaluator.labels(dataset.circuits, theta), dtype=float)


def cost_squared(theta, dataset, evaluator):
    """``sum (l_pr - l)^2`` over ``dataset``."""
    predicted = _predictions(theta, dataset, evaluator)
    return float(np.sum((predicted - np.asarray(dataset.labels, dtype=float)) ** 2))


def cost_bce(theta, dataset, evaluator):
    """
    Mean binary cross entropy, predictions clipped to
    ``[1e-9, 1 - 1e-9]``.
    """
    predicted = np.clip(
        _predictions(theta, dataset, evaluator), BCE_EPSILON, 1 - BCE_EPSILON
    )
    labels = np.asarray(dataset.labels, dtype=float)
    return float(
        -np.mean(labels * np.log(predicted) + (1 - labels) * np.log(1 - predicted))
    )


COSTS = {"squared": cost_squared, "bce": cost_bce}


def round_label(p):
    """Nearest integer with ties going to 1."""
    return np.where(np.asarray(p) >= 0.5, 1, 0)


def error_rate(theta, dataset, evaluator):
    """Fraction of rounded predictions that differ from the labels."""
    if len(dataset) == 0:
        return 0.0
    predicted = round_label(_predictions(theta, dataset, evaluator))
    return float(np.mean(np.abs(predicted - np.asarray(dataset.labels))))


def check_vocabulary(train, test):
    """
    Raise :class:`UnseenWords` if a test sentence has a word absent from
    training.
    """
    seen = set(vocabulary(s for s, _ in train))
    unseen = [w for w in vocabulary(s for s, _ in test) if w not in seen]
    if unseen:
        raise UnseenWords(
            dedent(
                """\
                Test sentences use words that never appear in training:
                {words}"""
            ).format(words=bulleted_list(map(repr, unseen)))
        )


def compile_corpus(items, dictionary, hyper, registry):
    sentences = [list(s) for s, _ in items]
    circuits = [
        compile(from_sentence(s, dictionary), hyper, registry) for s in sentences
    ]
    return Dataset(sentences, circuits, [l for _, l in items])


def run_experiment(corpus, config, dictionary=None):
    """
    Train on the first part of ``corpus`` and score both parts.

    Parameters
    ----------
    corpus : LabeledCorpus
    config : TrainConfig
    dictionary : Dictionary, optional
        Typings for every word of ``corpus``. Defaults to the typings of the
        built-in corpora.

    Returns
    -------
    record : TrainRecord
    """
    if dictionary is None:
        dictionary = builtin_dictionary()
    train_items, test_items = split(corpus, config.split_p)
    log.info("split %d sentences at p=%s", len(corpus), config.split_p)
    check_vocabulary(train_items, test_items)

    registry = ParamRegistry()
    train = compile_corpus(train_items, dictionary, config.hyper, registry)
    test = compile_corpus(test_items, dictionary, config.hyper, registry)
    log.info(
        "compiled %d train / %d test sentences, %d parameters",
        len(train), len(test), registry.total_slots,
    )

    optimizer = make_optimizer(config.optimizer, config.optimizer_seed)
    cost = COSTS[config.cost]
    theta0 = init_params(registry.total_slots, config.init_seed)

    with make_evaluator(config.evaluator, config.evaluator_seed) as evaluator:
        log.info("minimising %s cost with %r", config.cost, optimizer)
        result = optimizer.minimize(
            lambda theta: cost(theta, train, evaluator), theta0
        )
        e_train = error_rate(result.theta, train, evaluator)
        e_test = error_rate(result.theta, test, evaluator)
    log.info("e_train=%.4f e_test=%.4f", e_train, e_test)
    return TrainRecord(
        result.trace,
        result.theta,
        e_train,
        e_test,
        registry.total_slots,
        result.evaluations,
        registry,
    )


def moving_average(values, window):
    """Means of consecutive windows; empty if ``values`` is shorter."""
    return [sum(w) / float(window) for w in sliding_window(values, window)]


def error_decay_slope(depths, errors):
    """
    Least-squares slope of ``log e`` against ``log d``.

    Zero errors have no logarithm and are left out; with fewer than two
    usable points the slope is ``nan``.
    """
    points = [(math.log(d), math.log(e)) for d, e in zip(depths, errors) if e > 0]
    if len(points) < 2:
        return float("nan")
    x, y = np.array(points).T
    return float(np.polyfit(x, y, 1)[0])


def write_trace(path, record):
    with open(str(path), "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["iteration", "cost"])
        for iteration, cost in record.cost_trace:
            writer.writerow([iteration, repr(float(cost))])


def summary(record, config, corpus_name=None, started=None, wall_time=None):
    """
    JSON-serialisable run summary.

    All run-to-run variation is confined to the ``timestamp`` field.
    """
    return {
        "corpus": corpus_name,
        "config": config.model_dump(mode="json"),
        "n_params": record.n_params,
        "evaluations": record.evaluations,
        "final_cost": float(record.cost_trace[-1][1]),
        "e_train": record.e_train,
        "e_test": record.e_test,
        "timestamp": {
            "started": started or datetime.datetime.now().isoformat(),
            "wall_time": wall_time,
        },
    }


def write_summary(path, record, config, corpus_name=None, started=None,
                  wall_time=None):
    with open(str(path), "w") as f:
        json.dump(
            summary(record, config, corpus_name, started, wall_time),
            f,
            indent=2,
            sort_keys=True,
        )
        f.write("\n")


def write_params(path, record, hyper=None):
    """
    Registry and trained parameters, reusable by ``discoqa hadamard``.

    ``hyper`` records the circuit shape the parameters were trained for.
    """
    saved = {
        "registry": record.registry.to_dict(),
        "theta": [float(t) for t in record.theta_star],
    }
    if hyper is not None:
        saved["hyper"] = hyper.model_dump()
    with open(str(path), "w") as f:
        json.dump(
            saved,
            f,
            indent=2,
            sort_keys=True,
        )
        f.write("\n")


class Timer(object):
    """Context manager recording start time and wall-clock duration."""

    def __enter__(self):
        self.started = datetime.datetime.now().isoformat()
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, *exc_info):
        self.elapsed = time.perf_counter() - self._t0
        return False
