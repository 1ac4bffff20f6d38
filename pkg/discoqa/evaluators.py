"""
evaluators
----------
Strategies for turning compiled sentences and a parameter vector into
predicted labels.

Every evaluator implements :class:`Evaluator`. Evaluations of distinct
sentences share no state, so they may fan out to a thread pool; results are
always returned in input order.
"""
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from interface import Interface, default, implements

from .simulator import hadamard_label, predicted_label, predicted_label_shots
from .utils import child_seeds


class Evaluator(Interface):
    """
    Predicts a label in ``[0, 1]`` for each of a batch of circuits.
    """

    def labels(self, circuits, theta):
        """
        Parameters
        ----------
        circuits : sequence[SentenceCircuit]
        theta : numpy.ndarray
            Parameters indexed by registry slot.

        Returns
        -------
        labels : numpy.ndarray[float]
            One label per circuit, in order.
        """

    @property
    def method(self):
        pass

    @default
    def label(self, circuit, theta):
        """Predicted label of a single circuit."""
        return float(self.labels([circuit], theta)[0])


class _WorkerPool(object):
    """
    Thread pool shared by every call of one evaluator.

    The executor is started on the first batch that needs it and lives until
    :meth:`close`.
    """

    def __init__(self, workers):
        self.workers = workers
        self._executor = None

    def map(self, fn, jobs):
        if self.workers <= 1 or len(jobs) <= 1:
            return [fn(*job) for job in jobs]
        if self._executor is None:
            self._executor = ThreadPoolExecutor(max_workers=self.workers)
        return list(self._executor.map(lambda job: fn(*job), jobs))

    def close(self):
        if self._executor is not None:
            self._executor.shutdown()
            self._executor = None


class _Pooled(object):
    def __init__(self, workers):
        self.workers = workers
        self._pool = _WorkerPool(workers)

    def close(self):
        """Stop the worker threads; the evaluator stays usable."""
        self._pool.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()


class ExactEvaluator(_Pooled, implements(Evaluator)):
    """``|<0...0|U|0...0>|^2`` read exactly from the statevector."""

    def __init__(self, workers=1):
        super(ExactEvaluator, self).__init__(workers)

    @property
    def method(self):
        return "exact"

    def labels(self, circuits, theta):
        jobs = [(c, theta) for c in circuits]
        return np.array(
            [e.value for e in self._pool.map(predicted_label, jobs)]
        )

    def __repr__(self):
        return "ExactEvaluator(workers={})".format(self.workers)


class ShotEvaluator(_Pooled, implements(Evaluator)):
    """
    Fraction of all-zero bitstrings in ``shots`` samples per sentence.

    Each call draws one child seed per sentence, in index order, from the
    evaluator's own generator, so results do not depend on ``workers``.
    """

    def __init__(self, shots, seed, workers=1):
        if shots < 1:
            raise ValueError("shots must be at least 1, got {}".format(shots))
        super(ShotEvaluator, self).__init__(workers)
        self.shots = shots
        self._rng = np.random.default_rng(seed)

    @property
    def method(self):
        return "shots"

    def labels(self, circuits, theta):
        seeds = child_seeds(self._rng, len(circuits))
        jobs = [(c, theta, self.shots, s) for c, s in zip(circuits, seeds)]
        return np.array(
            [e.value for e in self._pool.map(predicted_label_shots, jobs)]
        )

    def __repr__(self):
        return "ShotEvaluator(shots={}, workers={})".format(self.shots, self.workers)


class HadamardEvaluator(_Pooled, implements(Evaluator)):
    """
    ``Re^2 + Im^2`` from a pair of Hadamard tests, exact when ``shots`` is
    ``None``.
    """

    def __init__(self, shots=None, seed=None, workers=1):
        super(HadamardEvaluator, self).__init__(workers)
        self.shots = shots
        self._rng = np.random.default_rng(seed)

    @property
    def method(self):
        return "hadamard"

    def labels(self, circuits, theta):
        seeds = child_seeds(self._rng, len(circuits))
        jobs = [(c, theta, self.shots, s) for c, s in zip(circuits, seeds)]
        return np.array(
            [e.value for e in self._pool.map(hadamard_label, jobs)]
        )

    def __repr__(self):
        return "HadamardEvaluator(shots={}, workers={})".format(
            self.shots, self.workers
        )


def make_evaluator(settings, seed):
    """Build the evaluator described by ``settings`` (an ``EvaluatorSettings``)."""
    if settings.mode == "exact":
        return ExactEvaluator(settings.workers)
    if settings.mode == "shots":
        return ShotEvaluator(settings.shots, seed, settings.workers)
    return HadamardEvaluator(settings.shots, seed, settings.workers)
