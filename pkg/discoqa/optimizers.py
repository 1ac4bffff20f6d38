"""
optimizers
----------
Gradient-free minimisers for the training cost.

``spsa_minimize`` is written out; Nelder-Mead and basinhopping come from
:mod:`scipy.optimize`. Each is also wrapped as an :class:`Optimizer`
implementation so training can pick one from configuration.
"""
import logging
from collections import namedtuple

import numpy as np
from interface import Interface, implements
from scipy.optimize import basinhopping as scipy_basinhopping
from scipy.optimize import minimize

log = logging.getLogger(__name__)

SPSA_ALPHA = 0.602
SPSA_GAMMA = 0.101


class OptimizationResult(namedtuple("OptimizationResult", [
    "theta", "trace", "evaluations",
])):
    """
    Attributes
    ----------
    theta : numpy.ndarray
        Best parameters found.
    trace : list[(int, float)]
        ``(iteration, cost)`` pairs, one per iteration (or hop).
    evaluations : int
        Number of cost function calls.
    """

    __slots__ = ()


class _Counted(object):
    """Count calls to ``f``."""

    def __init__(self, f):
        self.f = f
        self.calls = 0
        self.first = None

    def __call__(self, theta):
        self.calls += 1
        value = float(self.f(theta))
        if self.first is None:
            self.first = value
        return value


def spsa_minimize(f, theta0, a=0.1, c=0.1, iterations=1000, seed=None,
                  log_every=100):
    """
    Simultaneous perturbation stochastic approximation.

    Each iteration draws a Rademacher direction ``delta`` and takes::

        g = (f(theta + c_k delta) - f(theta - c_k delta)) / (2 c_k) / delta
        theta = theta - a_k g

    with ``a_k = a / (k + 1) ** 0.602`` and ``c_k = c / (k + 1) ** 0.101``.
    Exactly two cost evaluations are spent per iteration; the trace records
    their mean.

    Returns
    -------
    result : OptimizationResult
    """
    if iterations < 1:
        raise ValueError("iterations must be at least 1, got {}".format(iterations))
    rng = np.random.default_rng(seed)
    f = _Counted(f)
    theta = np.array(theta0, dtype=float)
    trace = []
    for k in range(iterations):
        a_k = a / (k + 1) ** SPSA_ALPHA
        c_k = c / (k + 1) ** SPSA_GAMMA
        delta = rng.integers(0, 2, size=theta.shape) * 2 - 1
        plus = f(theta + c_k * delta)
        minus = f(theta - c_k * delta)
        g = (plus - minus) / (2 * c_k) / delta
        theta = theta - a_k * g
        trace.append((k, (plus + minus) / 2))
        if log_every and (k + 1) % log_every == 0:
            log.debug("spsa iteration %d: cost %.6f", k + 1, trace[-1][1])
    return OptimizationResult(theta, trace, f.calls)


def nelder_mead(f, theta0, max_iter=None, xatol=1e-6, fatol=1e-6):
    """
    Downhill simplex (reflection 1, expansion 2, contraction 0.5, shrink 0.5).

    Stops when the simplex is smaller than ``xatol`` and its function values
    differ by less than ``fatol``, or after ``max_iter`` iterations. If no
    point beats the start, the start is returned unchanged.
    """
    f = _Counted(f)
    trace = []
    theta0 = np.array(theta0, dtype=float)
    if max_iter is None:
        max_iter = 200 * max(1, theta0.size)

    def record(intermediate_result):
        trace.append((len(trace), float(intermediate_result.fun)))

    result = minimize(
        f,
        theta0,
        method="Nelder-Mead",
        callback=record,
        options={"maxiter": max_iter, "xatol": xatol, "fatol": fatol,
                 "adaptive": False},
    )
    if not trace:
        trace.append((0, float(result.fun)))
    log.debug("nelder-mead: %s after %d iterations", result.message, result.nit)
    theta = np.asarray(result.x)
    if result.fun >= f.first:
        log.debug("nelder-mead stalled at the starting point")
        theta = theta0
    return OptimizationResult(theta, trace, f.calls)


class UniformDisplacement(object):
    """
    Hop by a uniform displacement in ``[-step_size, step_size]`` per
    coordinate. The step size is fixed for the whole run.
    """

    def __init__(self, step_size, rng):
        self.step_size = step_size
        self.rng = rng

    def __call__(self, x):
        return x + self.rng.uniform(-self.step_size, self.step_size, size=np.shape(x))


def basinhopping(f, theta0, hops=100, temperature=1.0, step_size=0.5, seed=None,
                 max_iter=None, xatol=1e-6, fatol=1e-6):
    """
    Global minimisation by hopping between Nelder-Mead minima.

    A hop is accepted if it lowers the cost, and otherwise with probability
    ``exp(-delta / temperature)``; a temperature of 0 accepts only downhill
    hops. The lowest minimum ever found is returned.

    The trace has ``hops + 1`` points: the first local minimum, then the cost
    of the current (last accepted) minimum after every hop.
    """
    rng = np.random.default_rng(seed)
    f = _Counted(f)
    theta0 = np.array(theta0, dtype=float)
    options = {"xatol": xatol, "fatol": fatol}
    if max_iter is not None:
        options["maxiter"] = max_iter

    # Lowest cost seen before the first hop, i.e. the first local minimum.
    first = [np.inf]
    minima = []
    step = UniformDisplacement(step_size, rng)
    hopping = []

    def cost(theta):
        value = f(theta)
        if not hopping:
            first[0] = min(first[0], value)
        return value

    def take_step(x):
        hopping.append(True)
        return step(x)

    def record(x, fun, accepted):
        minima.append((float(fun), bool(accepted)))
        log.debug("basinhopping step %d: cost %.6f (%s)", len(minima), fun,
                  "accepted" if accepted else "rejected")

    result = scipy_basinhopping(
        cost,
        theta0,
        niter=hops,
        T=temperature,
        take_step=take_step,
        minimizer_kwargs={"method": "Nelder-Mead", "options": options},
        callback=record,
        seed=int(rng.integers(0, 2 ** 32 - 1)),
    )
    # Newer scipy also reports the initial minimisation through the callback.
    steps = minima
    current = first[0]
    if len(minima) > hops:
        current = minima[0][0]
        steps = minima[1:]
    trace = [(0, current)]
    for fun, accepted in steps:
        if accepted:
            current = fun
        trace.append((len(trace), current))
    return OptimizationResult(np.asarray(result.x), trace, f.calls)


class Optimizer(Interface):
    """Minimises a cost over a flat parameter vector."""

    def minimize(self, cost, theta0):
        """
        Returns
        -------
        result : OptimizationResult
        """


class SPSA(implements(Optimizer)):
    def __init__(self, a=0.1, c=0.1, iterations=1000, seed=None):
        self.a = a
        self.c = c
        self.iterations = iterations
        self.seed = seed

    def minimize(self, cost, theta0):
        return spsa_minimize(cost, theta0, self.a, self.c, self.iterations, self.seed)

    def __repr__(self):
        return "SPSA(a={}, c={}, iterations={})".format(self.a, self.c, self.iterations)


class NelderMead(implements(Optimizer)):
    def __init__(self, max_iter=None, xatol=1e-6, fatol=1e-6):
        self.max_iter = max_iter
        self.xatol = xatol
        self.fatol = fatol

    def minimize(self, cost, theta0):
        return nelder_mead(cost, theta0, self.max_iter, self.xatol, self.fatol)

    def __repr__(self):
        return "NelderMead(max_iter={})".format(self.max_iter)


class BasinHopping(implements(Optimizer)):
    def __init__(self, hops=100, temperature=1.0, step_size=0.5, seed=None,
                 inner=None):
        self.hops = hops
        self.temperature = temperature
        self.step_size = step_size
        self.seed = seed
        self.inner = inner if inner is not None else NelderMead()

    def minimize(self, cost, theta0):
        return basinhopping(
            cost,
            theta0,
            self.hops,
            self.temperature,
            self.step_size,
            self.seed,
            self.inner.max_iter,
            self.inner.xatol,
            self.inner.fatol,
        )

    def __repr__(self):
        return "BasinHopping(hops={}, temperature={}, step_size={})".format(
            self.hops, self.temperature, self.step_size
        )


def make_optimizer(settings, seed):
    """Build the optimizer described by pydantic optimizer ``settings``."""
    if settings.kind == "spsa":
        return SPSA(settings.a, settings.c, settings.iterations, seed)
    if settings.kind == "nelder_mead":
        return NelderMead(settings.max_iter, settings.xatol, settings.fatol)
    inner = settings.inner
    return BasinHopping(
        settings.hops,
        settings.temperature,
        settings.step_size,
        seed,
        NelderMead(inner.max_iter, inner.xatol, inner.fatol),
    )

