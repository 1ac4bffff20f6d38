"""
simulator
---------
Dense statevector evaluation of sentence circuits.

Qubit 0 is the most significant bit of a basis index. Postselection on
``<0...0|`` is read off as a single amplitude rather than performed as a
projection.
"""
import logging
import math
from collections import namedtuple

import numpy as np

from .circuit import GateKind, SlotOutOfRange, check_theta
from .utils import child_seeds

log = logging.getLogger(__name__)

__all__ = [
    "LabelEstimate",
    "OpenWires",
    "SlotOutOfRange",
    "StateVector",
    "amplitude_zero",
    "evolve",
    "hadamard_label",
    "hadamard_parts",
    "hadamard_test",
    "postselected_state",
    "predicted_label",
    "predicted_label_shots",
    "run",
]


class OpenWires(ValueError):
    """
    Raised when a scalar is requested from a circuit with open output qubits.
    """


_SQRT1_2 = 1 / math.sqrt(2)

_FIXED = {
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT1_2,
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.SDG: np.array([[1, 0], [0, -1j]], dtype=complex),
}


def _rx(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _rz(t):
    return np.array(
        [[np.exp(-0.5j * t), 0], [0, np.exp(0.5j * t)]], dtype=complex
    )


def _apply_1q(psi, matrix, q, n):
    view = psi.reshape(2 ** q, 2, 2 ** (n - q - 1))
    return np.einsum("ij,ajb->aib", matrix, view).reshape(-1)


def _pair_index(n, control, target, c_val, t_val):
    index = [slice(None)] * n
    index[control] = c_val
    index[target] = t_val
    return tuple(index)


def _apply_cnot(psi, control, target, n):
    tensor = psi.reshape((2,) * n)
    out = tensor.copy()
    one_zero = _pair_index(n, control, target, 1, 0)
    one_one = _pair_index(n, control, target, 1, 1)
    out[one_zero] = tensor[one_one]
    out[one_one] = tensor[one_zero]
    return out.reshape(-1)


def _apply_crz(psi, control, target, angle, n):
    out = psi.reshape((2,) * n).copy()
    out[_pair_index(n, control, target, 1, 0)] *= np.exp(-0.5j * angle)
    out[_pair_index(n, control, target, 1, 1)] *= np.exp(0.5j * angle)
    return out.reshape(-1)


def apply_gate(psi, gate, theta, n):
    """Apply one gate to a flat ``2**n`` amplitude vector."""
    kind = gate.kind
    if kind is GateKind.CNOT:
        return _apply_cnot(psi, gate.qubits[0], gate.qubits[1], n)
    if kind is GateKind.CRZ:
        return _apply_crz(psi, gate.qubits[0], gate.qubits[1], theta[gate.slot], n)
    if kind is GateKind.RX:
        matrix = _rx(theta[gate.slot])
    elif kind is GateKind.RZ:
        matrix = _rz(theta[gate.slot])
    else:
        matrix = _FIXED[kind]
    return _apply_1q(psi, matrix, gate.qubits[0], n)


def evolve(amplitudes, circuit, theta):
    """
    Apply every gate of ``circuit`` to ``amplitudes``.

    Returns
    -------
    amplitudes : numpy.ndarray
        A new array; the input is left untouched.
    """
    theta = np.asarray(theta, dtype=float)
    check_theta(circuit, theta)
    n = circuit.qubit_count
    psi = np.array(amplitudes, dtype=complex).reshape(-1)
    if psi.shape[0] != 2 ** n:
        raise ValueError(
            "State has {} amplitudes, circuit acts on {} qubits.".format(
                psi.shape[0], n
            )
        )
    for gate in circuit.gates:
        psi = apply_gate(psi, gate, theta, n)
    return psi


def _zero_state(n):
    psi = np.zeros(2 ** n, dtype=complex)
    psi[0] = 1.0
    return psi


class StateVector(object):
    """Amplitudes of a ``q``-qubit register."""

    def __init__(self, amplitudes):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        q = int(round(math.log2(amplitudes.shape[0])))
        if 2 ** q != amplitudes.shape[0]:
            raise ValueError(
                "Length {} is not a power of two.".format(amplitudes.shape[0])
            )
        self._amplitudes = amplitudes
        self._q = q

    @property
    def amplitudes(self):
        return self._amplitudes

    @property
    def q(self):
        return self._q

    def norm(self):
        return float(np.linalg.norm(self._amplitudes))

    def probabilities(self):
        return np.abs(self._amplitudes) ** 2

    def amplitude(self, bits):
        """Amplitude of basis state ``bits``, qubit 0 first."""
        index = 0
        for b in bits:
            index = (index << 1) | int(b)
        return complex(self._amplitudes[index])

    def save(self, path):
        np.save(str(path), self._amplitudes)

    @classmethod
    def load(cls, path):
        return cls(np.load(str(path)))

    def __repr__(self):
        return "<StateVector q={} norm={:.12f}>".format(self._q, self.norm())


def run(c, theta):
    """Evolve ``|0...0>`` through ``c``."""
    return StateVector(evolve(_zero_state(c.qubit_count), c, theta))


def _require_scalar(c):
    if c.open_qubits:
        raise OpenWires(
            "Circuit for {!r} leaves qubits {} open; it denotes a state, not a "
            "scalar.".format(" ".join(c.sentence), list(c.open_qubits))
        )


def amplitude_zero(c, theta):
    """``<0...0| U(theta) |0...0>``, the postselected sentence scalar."""
    _require_scalar(c)
    return complex(run(c, theta).amplitudes[0])


def postselected_state(c, theta):
    """
    Unnormalised state of the open qubits after postselecting the others.

    Returns
    -------
    amplitudes : numpy.ndarray
        Length ``2 ** len(c.open_qubits)``, open qubits in register order.
    """
    n = c.qubit_count
    tensor = run(c, theta).amplitudes.reshape((2,) * n)
    index = tuple(slice(None) if q in c.open_qubits else 0 for q in range(n))
    return tensor[index].reshape(-1)


class LabelEstimate(namedtuple("LabelEstimate", ["value", "method", "shots", "stderr"])):
    """
    A predicted label in ``[0, 1]``.

    ``method`` is ``"exact"``, ``"shots"`` or ``"hadamard"``; ``stderr`` is set
    for stochastic methods.
    """

    __slots__ = ()

    def __new__(cls, value, method="exact", shots=None, stderr=None):
        value = min(1.0, max(0.0, float(value)))
        return super(LabelEstimate, cls).__new__(cls, value, method, shots, stderr)

    def __float__(self):
        return self.value


def predicted_label(c, theta):
    return LabelEstimate(abs(amplitude_zero(c, theta)) ** 2)


def sample(probabilities, shots, rng):
    """
    Draw ``shots`` basis indices by inverse-CDF sampling.
    """
    cdf = np.cumsum(probabilities)
    cdf /= cdf[-1]
    return np.searchsorted(cdf, rng.random(shots), side="right")


def predicted_label_shots(c, theta, shots, rng_seed):
    """
    Estimate the label as the fraction of all-zero bitstrings.

    Every other outcome is discarded by postselection; the retained fraction
    is the label itself.
    """
    if shots < 1:
        raise ValueError("shots must be at least 1, got {}".format(shots))
    _require_scalar(c)
    rng = np.random.default_rng(rng_seed)
    outcomes = sample(run(c, theta).probabilities(), shots, rng)
    kept = int(np.count_nonzero(outcomes == 0))
    log.debug("%s: kept %d of %d shots", " ".join(c.sentence), kept, shots)
    p = float(kept) / shots
    return LabelEstimate(p, "shots", shots, math.sqrt(p * (1 - p) / shots))


def _ancilla_expectation(c, theta, imaginary):
    """
    Exact ancilla ``<Z>`` of the Hadamard test and the probability of 0.
    """
    probs = np.abs(controlled_circuit_state(c, theta, imaginary)) ** 2
    p0 = float(np.sum(probs.reshape(2, -1)[0]))
    return 2 * p0 - 1, p0


def hadamard_test(c, theta, part="real", shots=None, rng_seed=None):
    """
    Estimate ``Re`` or ``Im`` of ``<0...0| U |0...0>`` with one ancilla.

    The ancilla gets a Hadamard (then ``S^dagger`` for the imaginary part),
    controls every gate of ``c``, gets a second Hadamard and is measured in Z.
    The register is never postselected.

    Parameters
    ----------
    part : {"real", "imaginary"}
    shots : int, optional
        Estimate ``<Z>`` from this many ancilla measurements instead of
        returning it exactly.

    Returns
    -------
    z : float
    """
    if part not in ("real", "imaginary"):
        raise ValueError("part must be 'real' or 'imaginary', got {!r}".format(part))
    exact, p0 = _ancilla_expectation(c, theta, part == "imaginary")
    if shots is None:
        return exact
    if shots < 1:
        raise ValueError("shots must be at least 1, got {}".format(shots))
    rng = np.random.default_rng(rng_seed)
    zeros = np.count_nonzero(rng.random(shots) < p0)
    return (2.0 * zeros - shots) / shots


def controlled_circuit_state(c, theta, imaginary=False):
    """
    Full ``(n+1)``-qubit state of the Hadamard test before measurement.

    The ancilla is qubit 0; each gate of ``c`` is applied only on the
    ancilla's ``|1>`` branch.
    """
    n = c.qubit_count
    state = np.zeros((2, 2 ** n), dtype=complex)
    state[0, 0] = state[1, 0] = _SQRT1_2
    if imaginary:
        state[1] *= -1j
    theta = np.asarray(theta, dtype=float)
    check_theta(c, theta)
    for gate in c.gates:
        state[1] = apply_gate(state[1], gate, theta, n)
    h = _FIXED[GateKind.H]
    return np.einsum("ij,jk->ik", h, state).reshape(-1)


def hadamard_parts(c, theta, shots=None, rng_seed=None):
    """
    ``(Re, Im)`` estimates, each from its own Hadamard test.

    The two tests draw their seeds from ``rng_seed`` in that order.
    """
    seeds = child_seeds(np.random.default_rng(rng_seed), 2)
    return (
        hadamard_test(c, theta, "real", shots, seeds[0]),
        hadamard_test(c, theta, "imaginary", shots, seeds[1]),
    )


def hadamard_label(c, theta, shots=None, rng_seed=None):
    """
    Label as ``Re^2 + Im^2`` from two Hadamard tests.

    In shot mode both parts get ``shots`` measurements and the standard
    error is propagated to first order.
    """
    re, im = hadamard_parts(c, theta, shots, rng_seed)
    value = re ** 2 + im ** 2
    if shots is None:
        return LabelEstimate(value, "hadamard")
    var_re = max(0.0, 1 - re ** 2) / shots
    var_im = max(0.0, 1 - im ** 2) / shots
    stderr = math.sqrt(4 * re ** 2 * var_re + 4 * im ** 2 * var_im)
    return LabelEstimate(value, "hadamard", shots, stderr)
