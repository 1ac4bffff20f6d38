"""
diagram
-------
Sentence diagrams: word-states laid side by side, joined by non-crossing cups.

The representation is flat. A diagram is a list of word-states whose output
wires are numbered left to right, a :class:`~discoqa.pregroup.CupPattern` over
those wire numbers, and the positions of words modelled as Kronecker tensors.
"""
import json
from collections import namedtuple
from textwrap import dedent

from .formatting import bulleted_list
from .pregroup import (
    CupPattern,
    RELATIVE_PRONOUN,
    SENTENCE_FACTOR,
    crossing_pairs,
    format_type,
    parse_type,
    reduce,
    sentence_type,
)


class InvalidDiagram(ValueError):
    """
    Raised when a diagram violates a structural invariant.
    """


class UngrammaticalSentence(ValueError):
    """
    Raised when a diagram is requested for a sentence with no reduction.
    """


class WordState(namedtuple("WordState", ["word", "wtype", "wire_offset"])):
    """A word with its type and the index of its first output wire."""

    __slots__ = ()

    @property
    def wires(self):
        return range(self.wire_offset, self.wire_offset + len(self.wtype))


class SentenceDiagram(object):
    """
    A grammatical reduction viewed as a process.

    Parameters
    ----------
    words : list[WordState]
    cups : CupPattern
    kronecker_words : iterable[int]
        Sentence positions modelled as Kronecker tensors.
    """

    def __init__(self, words, cups, kronecker_words=()):
        self._words = tuple(words)
        self._cups = cups
        self._kronecker = frozenset(kronecker_words)

    @classmethod
    def build(cls, words, dictionary, cups, kronecker_words=None):
        """Lay out ``words`` with consecutive wire offsets."""
        states = []
        offset = 0
        for word in words:
            t = dictionary[word]
            states.append(WordState(word, t, offset))
            offset += len(t)
        if kronecker_words is None:
            kronecker_words = [
                i for i, s in enumerate(states) if s.wtype == RELATIVE_PRONOUN
            ]
        return cls(states, cups, kronecker_words)

    @property
    def words(self):
        return self._words

    @property
    def cups(self):
        return self._cups

    @property
    def kronecker_words(self):
        return self._kronecker

    @property
    def sentence(self):
        return [w.word for w in self._words]

    @property
    def wires(self):
        """Flattened factor list, one entry per wire."""
        return [f for w in self._words for f in w.wtype]

    def __eq__(self, other):
        if not isinstance(other, SentenceDiagram):
            return NotImplemented
        return (self._words, self._cups, self._kronecker) == (
            other._words, other._cups, other._kronecker
        )

    def __repr__(self):
        return "<SentenceDiagram {!r} cups={}>".format(
            " ".join(self.sentence), list(self._cups.pairs)
        )


def problems(d):
    """
    Every structural violation in ``d``, in a fixed order.

    Returns
    -------
    problems : list[str]
        Empty if ``d`` is a valid diagram of a grammatical sentence.
    """
    out = []
    expected = 0
    for i, w in enumerate(d.words):
        if w.wire_offset != expected:
            out.append(
                "word {} ({!r}) starts at wire {}, expected {}".format(
                    i, w.word, w.wire_offset, expected
                )
            )
        expected = w.wire_offset + len(w.wtype)

    wires = d.wires
    used = set()
    for i, j in d.cups.pairs:
        if not (0 <= i < j < len(wires)):
            out.append("cup ({}, {}) is out of range".format(i, j))
            continue
        if i in used or j in used:
            out.append("cup ({}, {}) reuses a wire".format(i, j))
        used.update((i, j))
        if not wires[i].contracts_with(wires[j]):
            out.append(
                "cup ({}, {}) joins {} and {}, which do not contract".format(
                    i, j, wires[i], wires[j]
                )
            )
    for (i, j), (k, l) in crossing_pairs(d.cups.pairs):
        out.append("cups ({}, {}) and ({}, {}) cross".format(i, j, k, l))

    open_wires = [w for w in range(len(wires)) if w not in used]
    if open_wires != list(d.cups.open):
        out.append(
            "open wires {} do not match the declared {}".format(
                open_wires, list(d.cups.open)
            )
        )
    if len(open_wires) != 1:
        out.append(
            "expected exactly one open wire, found {}".format(len(open_wires))
        )
    elif wires[open_wires[0]] != SENTENCE_FACTOR:
        out.append(
            "open wire {} has type {}, expected s".format(
                open_wires[0], wires[open_wires[0]]
            )
        )

    for p in sorted(d.kronecker_words):
        if not 0 <= p < len(d.words):
            out.append("Kronecker position {} is out of range".format(p))
        elif d.words[p].wtype != RELATIVE_PRONOUN:
            out.append(
                "Kronecker word {!r} has type {}, expected {}".format(
                    d.words[p].word, d.words[p].wtype, RELATIVE_PRONOUN
                )
            )
    return out


def validate(d):
    """
    Check ``d``'s invariants.

    Raises
    ------
    InvalidDiagram
        Reporting the first violation found.
    """
    found = problems(d)
    if found:
        raise InvalidDiagram(
            "Invalid diagram for {!r}: {}".format(" ".join(d.sentence), found[0])
        )


def is_valid(d):
    return not problems(d)


def from_sentence(words, dictionary):
    """
    Build the canonical diagram of a grammatical sentence.

    Raises
    ------
    UngrammaticalSentence
        If the sentence's type does not reduce to ``s``.
    """
    t = sentence_type(words, dictionary)
    pattern = reduce(t)
    if pattern is None:
        raise UngrammaticalSentence(
            dedent(
                """\
                {sentence!r} is not grammatical.
                Its type does not contract to s:
                {type}"""
            ).format(sentence=" ".join(words), type=bulleted_list([t]))
        )
    return SentenceDiagram.build(words, dictionary, pattern)


class WireLayout(namedtuple("WireLayout", ["offsets", "widths", "total"])):
    """Register positions of each wire."""

    __slots__ = ()

    def qubits(self, wire):
        start = self.offsets[wire]
        return list(range(start, start + self.widths[wire]))


def wire_qubits(d, hyper):
    """
    Assign ``q_b`` consecutive qubits to every wire of base ``b``.

    Zero-width wires are legal and simply take no register space.
    """
    widths = [hyper.qubits_for(f.base) for f in d.wires]
    offsets = []
    total = 0
    for w in widths:
        offsets.append(total)
        total += w
    return WireLayout(tuple(offsets), tuple(widths), total)


def to_json(d):
    return json.dumps(
        {
            "words": [
                {"word": w.word, "type": format_type(w.wtype),
                 "wire_offset": w.wire_offset}
                for w in d.words
            ],
            "cups": [list(p) for p in d.cups.pairs],
            "open": list(d.cups.open),
            "kronecker_words": sorted(d.kronecker_words),
        },
        indent=2,
    )


def from_json(text):
    raw = json.loads(text)
    words = [
        WordState(w["word"], parse_type(w["type"]), w["wire_offset"])
        for w in raw["words"]
    ]
    return SentenceDiagram(
        words, CupPattern(raw["cups"], raw["open"]), raw["kronecker_words"]
    )


def to_dot(d):
    """Render ``d`` as an undirected Graphviz graph, one node per wire."""
    lines = ["graph sentence {", "  rankdir=LR;"]
    for i, w in enumerate(d.words):
        shape = "triangle" if i in d.kronecker_words else "box"
        lines.append("  subgraph cluster_{} {{".format(i))
        lines.append('    label="{}"; shape={};'.format(w.word, shape))
        for wire, f in zip(w.wires, w.wtype):
            lines.append('    w{} [label="{}"];'.format(wire, f))
        lines.append("  }")
    for i, j in d.cups.pairs:
        lines.append("  w{} -- w{};".format(i, j))
    for p in d.cups.open:
        lines.append('  out [label="s", shape=plaintext];')
        lines.append("  w{} -- out;".format(p))
    lines.append("}")
    return "\n".join(lines)
