"""
corpora
-------
The three labelled corpora used in the question-answering experiments, and
JSON-lines corpus files.

Each line of a corpus file is an object ``{"sentence": "...", "label": 0|1}``.
"""
import json
from collections import namedtuple

from .cfg import Vocabulary


class CorpusFormatError(ValueError):
    """
    Raised for a malformed line in a corpus file.
    """

    def __init__(self, path, lineno, reason):
        self.path = path
        self.lineno = lineno
        super(CorpusFormatError, self).__init__(
            "{}:{}: {}".format(path, lineno, reason)
        )


class LabeledCorpus(object):
    """
    Ordered ``(sentence, label)`` pairs.

    ``sentence`` is a tuple of words and ``label`` is 0 or 1 (``None`` for
    generated sentences awaiting curation).
    """

    def __init__(self, items, name=None):
        self.items = tuple(
            (tuple(s), None if l is None else int(l)) for s, l in items
        )
        self.name = name

    def __eq__(self, other):
        if not isinstance(other, LabeledCorpus):
            return NotImplemented
        return self.items == other.items

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __repr__(self):
        return "<LabeledCorpus {} items={}>".format(self.name, len(self.items))

    @property
    def sentences(self):
        return [list(s) for s, _ in self.items]

    @property
    def labels(self):
        return [l for _, l in self.items]

    def __len__(self):
        return len(self.items)


class BuiltinCorpus(namedtuple("BuiltinCorpus", ["name", "vocabulary", "corpus"])):
    __slots__ = ()

    @property
    def dictionary(self):
        return self.vocabulary.dictionary()


def _labelled(name, rows):
    return LabeledCorpus(((s.split(), l) for s, l in rows), name)


K30 = BuiltinCorpus(
    "K30",
    Vocabulary(["Dude", "Walter"], ["loves", "annoys"], ["abides", "bowls"]),
    _labelled("K30", [
        ("Dude who loves Walter bowls", 1),
        ("Dude bowls", 1),
        ("Dude annoys Walter", 0),
        ("Walter who abides bowls", 0),
        ("Walter loves Walter", 1),
        ("Walter annoys Dude", 1),
        ("Walter bowls", 1),
        ("Walter abides", 0),
        ("Dude loves Walter", 1),
        ("Dude who bowls abides", 1),
        ("Walter who bowls annoys Dude", 1),
        ("Dude who bowls bowls", 1),
        ("Dude who abides abides", 1),
        ("Dude annoys Dude who bowls", 0),
        ("Walter annoys Walter", 0),
        ("Dude who abides bowls", 1),
        ("Walter who abides loves Walter", 0),
        ("Walter who bowls bowls", 1),
        ("Walter loves Walter who abides", 0),
        ("Walter annoys Walter who bowls", 0),
        ("Dude abides", 1),
        ("Dude loves Walter who bowls", 1),
        ("Walter who loves Dude bowls", 1),
        ("Dude loves Dude who abides", 1),
        ("Walter who abides loves Dude", 0),
        ("Dude annoys Dude", 0),
        ("Walter who annoys Dude bowls", 1),
        ("Walter who annoys Dude abides", 0),
        ("Walter loves Dude", 1),
        ("Dude who bowls loves Walter", 1),
    ]),
)

# Printed with float labels (1.0 / 0.0); stored as integers.
K6 = BuiltinCorpus(
    "K6",
    Vocabulary(["Romeo", "Juliet"], ["loves"], ["dies"]),
    _labelled("K6", [
        ("Romeo dies", 1),
        ("Romeo loves Juliet", 0),
        ("Juliet who dies dies", 1),
        ("Romeo loves Romeo", 0),
        ("Juliet loves Romeo", 0),
        ("Juliet dies", 1),
    ]),
)

K16 = BuiltinCorpus(
    "K16",
    Vocabulary(["Romeo", "Juliet"], ["loves", "kills"], ["dies"]),
    _labelled("K16", [
        ("Juliet kills Romeo who dies", 0),
        ("Juliet dies", 1),
        ("Romeo who loves Juliet dies", 1),
        ("Romeo dies", 1),
        ("Juliet who dies dies", 1),
        ("Romeo loves Juliet", 1),
        ("Juliet who dies loves Juliet", 0),
        ("Romeo kills Juliet who dies", 0),
        ("Romeo who kills Romeo dies", 1),
        ("Romeo who dies dies", 1),
        ("Romeo who loves Romeo dies", 0),
        ("Romeo kills Juliet", 0),
        ("Romeo who dies kills Romeo", 1),
        ("Juliet who dies kills Romeo", 0),
        ("Romeo loves Romeo", 0),
        ("Romeo who dies kills Juliet", 0),
    ]),
)

BUILTINS = {c.name: c for c in (K30, K6, K16)}


def builtin(name):
    try:
        return BUILTINS[name]
    except KeyError:
        raise LookupError(
            "No built-in corpus {!r}; choose from {}.".format(
                name, ", ".join(sorted(BUILTINS))
            )
        )


def load_builtin(name):
    """The printed sentences and labels of corpus ``name``, in printed order."""
    return builtin(name).corpus


def builtin_dictionary():
    """Typings of every word of every built-in corpus."""
    out = None
    for c in BUILTINS.values():
        out = c.dictionary if out is None else out.union(c.dictionary)
    return out


def _parse_line(path, lineno, line, labelled):
    try:
        raw = json.loads(line)
    except ValueError as e:
        raise CorpusFormatError(path, lineno, "invalid JSON ({})".format(e))
    if not isinstance(raw, dict):
        raise CorpusFormatError(path, lineno, "expected an object")
    sentence = raw.get("sentence")
    if not isinstance(sentence, str) or not sentence.split():
        raise CorpusFormatError(path, lineno, "missing or empty 'sentence'")
    if "label" not in raw:
        raise CorpusFormatError(path, lineno, "missing 'label'")
    label = raw["label"]
    if label is None and not labelled:
        return sentence.split(), None
    if isinstance(label, bool) or label not in (0, 1):
        raise CorpusFormatError(
            path, lineno, "label must be 0 or 1, got {!r}".format(label)
        )
    return sentence.split(), int(label)


def read_corpus(path, labelled=True):
    """
    Read a JSON-lines corpus.

    Parameters
    ----------
    labelled : bool
        When False, ``"label": null`` is accepted (uncurated sentences).

    Raises
    ------
    CorpusFormatError
        Naming the first malformed line.
    """
    path = str(path)
    items = []
    with open(path) as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            items.append(_parse_line(path, lineno, line, labelled))
    return LabeledCorpus(items, path)


def write_corpus(path, corpus):
    with open(str(path), "w") as f:
        for sentence, label in corpus.items:
            f.write(json.dumps({"sentence": " ".join(sentence), "label": label}))
            f.write("\n")
