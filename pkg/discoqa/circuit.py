"""
circuit
-------
Compile sentence diagrams into parameterised quantum circuits.

Every wire of base ``b`` gets ``q_b`` qubits. Word-states become word circuits
acting on ``|0...0>``: two rotations for one qubit, ``d`` IQP-style layers for
more. Kronecker words become GHZ states and every cup becomes Bell effects,
each a CNOT, a Hadamard on the control, and postselection on ``<00|``.

Gate conventions::

    Rx(t)  = exp(-i t X / 2)
    Rz(t)  = exp(-i t Z / 2)
    CRz(t) = diag(1, 1, exp(-i t / 2), exp(i t / 2))
"""
import json
import logging
import math
from collections import namedtuple
from enum import Enum
from textwrap import dedent

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .diagram import validate, wire_qubits
from .formatting import bulleted_list
from .pregroup import BasicType, RELATIVE_PRONOUN

log = logging.getLogger(__name__)


class CircuitError(ValueError):
    """
    Raised when a word or diagram can't be compiled.
    """


class RegistryMismatch(ValueError):
    """
    Raised when a word is compiled to a different number of parameters than
    it was registered with.
    """


class SlotOutOfRange(IndexError):
    """
    Raised when a circuit references a parameter slot outside the vector.
    """


class HyperParams(BaseModel):
    """
    Qubits per wire type and word-circuit depth.

    With ``q_s = 0`` every compiled sentence denotes a scalar.
    """

    model_config = ConfigDict(frozen=True)

    q_n: int = Field(1, ge=1)
    q_s: int = Field(0, ge=0)
    d: int = Field(1, ge=1)

    def qubits_for(self, base):
        return self.q_n if BasicType(base) is BasicType.n else self.q_s


class GateKind(Enum):
    H = "h"
    RX = "rx"
    RZ = "rz"
    CRZ = "crz"
    CNOT = "cx"
    S = "s"
    SDG = "sdg"
    X = "x"

    @property
    def parameterised(self):
        return self in (GateKind.RX, GateKind.RZ, GateKind.CRZ)

    @property
    def arity(self):
        return 2 if self in (GateKind.CRZ, GateKind.CNOT) else 1


class Gate(namedtuple("Gate", ["kind", "qubits", "slot"])):
    """
    A gate on one or two qubits.

    Two-qubit gates list ``(control, target)``. ``slot`` indexes the
    parameter vector for rotations and is ``None`` otherwise.
    """

    __slots__ = ()

    def __new__(cls, kind, qubits, slot=None):
        return super(Gate, cls).__new__(cls, kind, tuple(qubits), slot)

    def shifted(self, qubit_map, slot_offset):
        """Relabel qubits through ``qubit_map`` and shift the slot."""
        return Gate(
            self.kind,
            [qubit_map[q] for q in self.qubits],
            None if self.slot is None else self.slot + slot_offset,
        )

    def __str__(self):
        args = ",".join("q{}".format(q) for q in self.qubits)
        if self.slot is None:
            return "{}({})".format(self.kind.name, args)
        return "{}[{}]({})".format(self.kind.name, self.slot, args)


class SentenceCircuit(namedtuple("SentenceCircuit", [
    "qubit_count", "gates", "postselect_mask", "open_qubits", "sentence",
])):
    """
    A compiled sentence.

    The predicted label reads the ``|0...0>`` amplitude once every qubit in
    ``postselect_mask`` has been projected on ``<0|``.
    """

    __slots__ = ()

    def __new__(cls, qubit_count, gates, postselect_mask=(), open_qubits=(),
                sentence=()):
        return super(SentenceCircuit, cls).__new__(
            cls,
            int(qubit_count),
            tuple(gates),
            frozenset(postselect_mask),
            tuple(open_qubits),
            tuple(sentence),
        )

    @property
    def slots(self):
        return sorted({g.slot for g in self.gates if g.slot is not None})


class ParamRegistry(object):
    """
    Global assignment of contiguous parameter slots to words.

    A word keeps the same slots in every sentence it appears in. Growing the
    registry is the only mutating step of compilation; build it up front, or
    serialize access, before compiling in parallel.
    """

    def __init__(self):
        self._slots = {}
        self._total = 0

    def ensure(self, word, count):
        """
        Return the slot range for ``word``, allocating ``count`` new slots if
        the word is unseen.
        """
        try:
            existing = self._slots[word]
        except KeyError:
            r = range(self._total, self._total + count)
            self._slots[word] = r
            self._total += count
            log.debug("registered %r -> slots [%d, %d)", word, r.start, r.stop)
            return r
        if len(existing) != count:
            raise RegistryMismatch(
                "Word {!r} was registered with {} slots but now needs {}; "
                "was it compiled under different hyperparameters?".format(
                    word, len(existing), count
                )
            )
        return existing

    def slots(self, word):
        return self._slots[word]

    def __contains__(self, word):
        return word in self._slots

    @property
    def words(self):
        return list(self._slots)

    @property
    def total_slots(self):
        return self._total

    def to_dict(self):
        return {w: [r.start, r.stop] for w, r in self._slots.items()}

    @classmethod
    def from_dict(cls, raw):
        self = cls()
        for word, (start, stop) in sorted(raw.items(), key=lambda kv: kv[1][0]):
            if start != self._total:
                raise RegistryMismatch(
                    "Slots for {!r} start at {}, expected {}.".format(
                        word, start, self._total
                    )
                )
            self.ensure(word, stop - start)
        return self

    def __repr__(self):
        return "<ParamRegistry words={} total_slots={}>".format(
            len(self._slots), self._total
        )


def word_arity(t, hyper):
    """Number of qubits of a word of type ``t``."""
    return sum(hyper.qubits_for(f.base) for f in t)


def word_ansatz(word, k, hyper):
    """
    Word circuit on local qubits ``0..k-1`` with local slots from 0.

    Returns
    -------
    gates, slot_count : list[Gate], int
    """
    if k < 1:
        raise CircuitError(
            "Word {!r} has no qubits under {}; it can't carry a word circuit."
            .format(word, hyper)
        )
    if k == 1:
        return [Gate(GateKind.RX, [0], 0), Gate(GateKind.RZ, [0], 1)], 2

    gates = []
    slot = 0
    for _ in range(hyper.d):
        gates.extend(Gate(GateKind.H, [q]) for q in range(k))
        for j in range(k - 1):
            gates.append(Gate(GateKind.CRZ, [j, j + 1], slot))
            slot += 1
    return gates, slot


def ghz_prep(n_wires, q_b):
    """
    Prepare ``2^(-q_b/2) sum_x |x>|x>...|x>`` over ``n_wires`` groups of
    ``q_b`` qubits, group ``g`` holding qubits ``[g q_b, (g+1) q_b)``.
    """
    if n_wires < 2:
        raise CircuitError("A GHZ state needs at least two wires.")
    gates = [Gate(GateKind.H, [j]) for j in range(q_b)]
    for g in range(1, n_wires):
        gates.extend(Gate(GateKind.CNOT, [j, g * q_b + j]) for j in range(q_b))
    return gates


def cup_effect(left_qubits, right_qubits):
    """
    Bell effects joining two equal-width qubit groups, qubit ``j`` with
    qubit ``j``.

    Returns
    -------
    gates, postselected : list[Gate], list[int]
    """
    left_qubits = list(left_qubits)
    right_qubits = list(right_qubits)
    if len(left_qubits) != len(right_qubits):
        raise CircuitError(
            "Cup joins {} qubits to {}.".format(len(left_qubits), len(right_qubits))
        )
    gates = []
    for l, r in zip(left_qubits, right_qubits):
        gates.append(Gate(GateKind.CNOT, [l, r]))
        gates.append(Gate(GateKind.H, [l]))
    return gates, left_qubits + right_qubits


def _kronecker_gates(wires, layout, hyper):
    n_wires = [w for w, f in wires if f.base is BasicType.n]
    qubits = [q for w in n_wires for q in layout.qubits(w)]
    gates = [g.shifted(qubits, 0) for g in ghz_prep(len(n_wires), hyper.q_n)]
    # The s-space half of the tensor is its copy-unit, uniform superposition.
    for w, f in wires:
        if f.base is BasicType.s:
            gates.extend(Gate(GateKind.H, [q]) for q in layout.qubits(w))
    return gates


def compile(d, hyper, registry):
    """
    Compile diagram ``d``.

    Word circuits (GHZ states for Kronecker words) are laid side by side over
    the register, followed by the Bell effects of every cup. New words are
    added to ``registry``.

    Returns
    -------
    circuit : SentenceCircuit
    """
    validate(d)
    layout = wire_qubits(d, hyper)
    gates = []
    for position, w in enumerate(d.words):
        wires = list(zip(w.wires, w.wtype))
        if position in d.kronecker_words:
            gates.extend(_kronecker_gates(wires, layout, hyper))
            continue
        qubits = [q for wire, _ in wires for q in layout.qubits(wire)]
        local, count = word_ansatz(w.word, len(qubits), hyper)
        slots = registry.ensure(w.word, count)
        gates.extend(g.shifted(qubits, slots.start) for g in local)

    postselect = []
    for i, j in d.cups.pairs:
        effect, measured = cup_effect(layout.qubits(i), layout.qubits(j))
        gates.extend(effect)
        postselect.extend(measured)

    open_qubits = [q for p in d.cups.open for q in layout.qubits(p)]
    circuit = SentenceCircuit(
        layout.total, gates, postselect, open_qubits, d.sentence
    )
    log.debug(
        "compiled %r: %d qubits, %d gates",
        " ".join(d.sentence), circuit.qubit_count, len(circuit.gates),
    )
    return circuit


def compile_all(diagrams, hyper, registry=None):
    """Compile ``diagrams`` in order against one shared registry."""
    if registry is None:
        registry = ParamRegistry()
    return [compile(d, hyper, registry) for d in diagrams], registry


def param_count(dictionary, hyper):
    """
    Total parameters of a vocabulary. Kronecker words contribute nothing.
    """
    total = 0
    for word, t in dictionary.items():
        if t == RELATIVE_PRONOUN:
            continue
        total += word_ansatz(word, word_arity(t, hyper), hyper)[1]
    return total


def cnot_count(c):
    return sum(1 for g in c.gates if g.kind is GateKind.CNOT)


def init_params(total_slots, seed):
    """Independent uniform angles on ``[0, 2 pi)``."""
    return np.random.default_rng(seed).uniform(0.0, 2 * math.pi, size=total_slots)


def check_theta(c, theta):
    """Raise unless every slot used by ``c`` indexes ``theta``."""
    bad = [s for s in c.slots if not 0 <= s < len(theta)]
    if bad:
        raise SlotOutOfRange(
            dedent(
                """\
                Circuit for {sentence!r} uses slots outside a parameter vector
                of length {n}:
                {slots}"""
            ).format(
                sentence=" ".join(c.sentence), n=len(theta), slots=bulleted_list(bad)
            )
        )


def to_json(c):
    return json.dumps(
        {
            "sentence": " ".join(c.sentence),
            "qubit_count": c.qubit_count,
            "gates": [
                {"kind": g.kind.name, "qubits": list(g.qubits), "slot": g.slot}
                for g in c.gates
            ],
            "postselect": sorted(c.postselect_mask),
            "open_qubits": list(c.open_qubits),
        },
        indent=2,
    )


def from_json(text):
    raw = json.loads(text)
    return SentenceCircuit(
        raw["qubit_count"],
        [Gate(GateKind[g["kind"]], g["qubits"], g["slot"]) for g in raw["gates"]],
        raw["postselect"],
        raw["open_qubits"],
        raw["sentence"].split(),
    )


def to_qasm(c, theta=None):
    """
    OpenQASM 2.0 text with bound angles.

    Postselected qubits are measured into ``c``; a run is kept only when they
    all read 0.
    """
    if theta is None:
        theta = np.zeros(max(c.slots) + 1 if c.slots else 0)
    check_theta(c, theta)
    lines = [
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        "// {}".format(" ".join(c.sentence)),
        "qreg q[{}];".format(c.qubit_count),
    ]
    measured = sorted(c.postselect_mask)
    if measured:
        lines.append("creg c[{}];".format(len(measured)))
    for g in c.gates:
        args = ",".join("q[{}]".format(q) for q in g.qubits)
        if g.slot is None:
            lines.append("{} {};".format(g.kind.value, args))
        else:
            lines.append("{}({!r}) {};".format(g.kind.value, float(theta[g.slot]), args))
    if measured:
        lines.append("// postselect: keep shots where c == 0")
        for i, q in enumerate(measured):
            lines.append("measure q[{}] -> c[{}];".format(q, i))
    return "\n".join(lines) + "\n"
