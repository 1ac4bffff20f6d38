import pytest

from ..circuit import HyperParams
from ..diagram import (
    InvalidDiagram,
    SentenceDiagram,
    UngrammaticalSentence,
    WordState,
    from_json,
    from_sentence,
    is_valid,
    problems,
    to_dot,
    to_json,
    validate,
    wire_qubits,
)
from ..pregroup import CupPattern, Dictionary, UnknownWord, parse_type

CROSSING = Dictionary({"a": parse_type("n n"), "b": parse_type("n@1 n@1 s")})


def test_from_sentence(dictionary):
    d = from_sentence("Romeo who loves Juliet dies".split(), dictionary)
    assert d.sentence == ["Romeo", "who", "loves", "Juliet", "dies"]
    assert [w.wire_offset for w in d.words] == [0, 1, 5, 8, 9]
    assert list(d.words[1].wires) == [1, 2, 3, 4]
    assert d.kronecker_words == {1}
    assert is_valid(d)


def test_from_sentence_errors(dictionary):
    with pytest.raises(UngrammaticalSentence):
        from_sentence(["dies", "Romeo"], dictionary)
    with pytest.raises(UnknownWord):
        from_sentence(["Romeo", "xyzzy"], dictionary)


def test_every_builtin_sentence_has_a_valid_diagram(builtin):
    for sentence in builtin.corpus.sentences:
        validate(from_sentence(sentence, builtin.dictionary))


def test_too_many_open_wires(dictionary):
    d = SentenceDiagram.build(["Romeo", "dies"], dictionary, CupPattern([], [0, 1, 2]))
    assert problems(d) == ["expected exactly one open wire, found 3"]
    with pytest.raises(InvalidDiagram) as e:
        validate(d)
    assert str(e.value) == (
        "Invalid diagram for 'Romeo dies': expected exactly one open wire, found 3"
    )


def test_cups_must_contract(dictionary):
    d = SentenceDiagram.build(
        "Romeo loves Juliet".split(), dictionary, CupPattern([(0, 3)], [1, 2, 4])
    )
    found = problems(d)
    assert "cup (0, 3) joins n and n@-1, which do not contract" in found
    assert "expected exactly one open wire, found 3" in found


def test_cups_must_not_cross():
    d = SentenceDiagram.build(["a", "b"], CROSSING, CupPattern([(0, 2), (1, 3)], [4]))
    assert problems(d) == ["cups (0, 2) and (1, 3) cross"]

    nested = SentenceDiagram.build(
        ["a", "b"], CROSSING, CupPattern([(0, 3), (1, 2)], [4])
    )
    assert is_valid(nested)
    assert nested == from_sentence(["a", "b"], CROSSING)


def test_open_wire_must_be_the_sentence(dictionary):
    d = SentenceDiagram.build(
        "Romeo loves Juliet".split(), dictionary, CupPattern([(0, 1), (2, 3)], [4])
    )
    found = problems(d)
    assert "cup (2, 3) joins s and n@-1, which do not contract" in found
    assert "open wire 4 has type n, expected s" in found


def test_declared_open_wires_must_match(dictionary):
    d = SentenceDiagram.build(["Romeo", "dies"], dictionary, CupPattern([(0, 1)], [1]))
    assert problems(d) == ["open wires [2] do not match the declared [1]"]


def test_word_offsets_must_be_contiguous(dictionary):
    words = [
        WordState("Romeo", dictionary["Romeo"], 0),
        WordState("dies", dictionary["dies"], 2),
    ]
    d = SentenceDiagram(words, CupPattern([(0, 1)], [2]))
    assert problems(d)[0] == "word 1 ('dies') starts at wire 2, expected 1"


def test_kronecker_words_must_be_pronouns(dictionary):
    d = SentenceDiagram.build(
        ["Romeo", "dies"], dictionary, CupPattern([(0, 1)], [2]), kronecker_words=[0]
    )
    assert problems(d) == [
        "Kronecker word 'Romeo' has type n, expected n@1 n s@-1 n"
    ]


def test_wire_qubits(dictionary):
    d = from_sentence(["Romeo", "dies"], dictionary)
    layout = wire_qubits(d, HyperParams(q_n=2))
    assert layout.widths == (2, 2, 0)
    assert layout.offsets == (0, 2, 4)
    assert layout.total == 4
    assert layout.qubits(1) == [2, 3]
    assert layout.qubits(2) == []

    layout = wire_qubits(d, HyperParams(q_n=1, q_s=2))
    assert layout.qubits(2) == [2, 3]


def test_json_round_trip(dictionary):
    d = from_sentence("Juliet kills Romeo who dies".split(), dictionary)
    assert from_json(to_json(d)) == d


def test_to_dot(dictionary):
    d = from_sentence(["Romeo", "dies"], dictionary)
    dot = to_dot(d)
    assert dot.startswith("graph sentence {")
    assert "  w0 -- w1;" in dot
    assert "  w2 -- out;" in dot
    assert dot.endswith("}")
