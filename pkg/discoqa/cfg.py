"""
cfg
---
Random sentence generation from the corpus context-free grammar, and the
translation of derivation trees into sentence diagrams.

Structural rules::

    S -> N IV
    S -> N TV N
    N -> N RPRON IV
    N -> N RPRON TV N

Lexical rules are one per part of speech (``N -> w_N`` and so on). At every
node a rule is drawn uniformly from those applicable, and a lexical rule then
draws its word uniformly from the vocabulary.
"""
import json
import logging
from collections import namedtuple
from enum import Enum

import numpy as np

from .diagram import SentenceDiagram, from_sentence, validate
from .pregroup import (
    BasicType,
    CupPattern,
    Dictionary,
    Factor,
    UnknownWord,
)

log = logging.getLogger(__name__)


class CorpusGenerationError(RuntimeError):
    """
    Raised when distinct sentences can't be found within the retry budget.
    """


class Symbol(Enum):
    S = "S"
    N = "N"
    TV = "TV"
    IV = "IV"
    RPRON = "RPRON"

    def __repr__(self):
        return self.value


class Terminal(namedtuple("Terminal", ["word"])):
    __slots__ = ()

    def __repr__(self):
        return repr(self.word)


class CfgRule(namedtuple("CfgRule", ["lhs", "rhs"])):
    """
    A production ``lhs -> rhs``.

    A rule whose ``rhs`` is empty is lexical: it rewrites ``lhs`` to one word
    of that part of speech.
    """

    __slots__ = ()

    @property
    def lexical(self):
        return not self.rhs

    def __str__(self):
        rhs = " ".join(s.value for s in self.rhs) if self.rhs else "w_" + self.lhs.value
        return "{} -> {}".format(self.lhs.value, rhs)


class CfgTree(namedtuple("CfgTree", ["symbol", "children", "rule"])):
    """
    A derivation tree. Leaves are :class:`Terminal` with no children.
    """

    __slots__ = ()

    @property
    def is_leaf(self):
        return isinstance(self.symbol, Terminal)


def leaf(word):
    return CfgTree(Terminal(word), (), None)


def lexical(symbol, word):
    """Tree for a single lexical rule application."""
    return CfgTree(symbol, (leaf(word),), CfgRule(symbol, ()))


def node(symbol, *children):
    rhs = tuple(c.symbol for c in children)
    return CfgTree(symbol, tuple(children), CfgRule(symbol, rhs))


STRUCTURAL_RULES = (
    CfgRule(Symbol.S, (Symbol.N, Symbol.IV)),
    CfgRule(Symbol.S, (Symbol.N, Symbol.TV, Symbol.N)),
    CfgRule(Symbol.N, (Symbol.N, Symbol.RPRON, Symbol.IV)),
    CfgRule(Symbol.N, (Symbol.N, Symbol.RPRON, Symbol.TV, Symbol.N)),
)

LEXICAL_RULES = tuple(
    CfgRule(s, ()) for s in (Symbol.N, Symbol.TV, Symbol.IV, Symbol.RPRON)
)

QA_RULES = STRUCTURAL_RULES + LEXICAL_RULES


class Vocabulary(namedtuple("Vocabulary", ["nouns", "transitive", "intransitive",
                                           "pronouns"])):
    """Words of each part of speech."""

    __slots__ = ()

    def __new__(cls, nouns, transitive, intransitive, pronouns=("who",)):
        return super(Vocabulary, cls).__new__(
            cls, tuple(nouns), tuple(transitive), tuple(intransitive), tuple(pronouns)
        )

    def words_for(self, symbol):
        return {
            Symbol.N: self.nouns,
            Symbol.TV: self.transitive,
            Symbol.IV: self.intransitive,
            Symbol.RPRON: self.pronouns,
        }[symbol]

    def dictionary(self):
        return Dictionary.from_parts_of_speech(
            self.nouns, self.transitive, self.intransitive, self.pronouns
        )

    def to_dict(self):
        return {s.value: list(self.words_for(s))
                for s in (Symbol.N, Symbol.TV, Symbol.IV, Symbol.RPRON)}


def read_vocabulary(path):
    """Read a JSON object keyed by ``N``, ``TV``, ``IV`` and ``RPRON``."""
    with open(str(path)) as f:
        raw = json.load(f)
    return Vocabulary(raw["N"], raw["TV"], raw["IV"], raw.get("RPRON", ["who"]))


def _applicable(rules, symbol, depth, max_depth):
    out = [r for r in rules if r.lhs is symbol]
    if symbol is Symbol.N and depth >= max_depth:
        out = [r for r in out if r.lexical]
    return out


def _expand(rules, vocab, rng, symbol, depth, max_depth):
    choices = _applicable(rules, symbol, depth, max_depth)
    if not choices:
        raise ValueError("No rule rewrites {!r}.".format(symbol))
    rule = choices[int(rng.integers(len(choices)))]
    if rule.lexical:
        words = vocab.words_for(symbol)
        return lexical(symbol, words[int(rng.integers(len(words)))])
    children = tuple(
        _expand(rules, vocab, rng, child, depth + 1, max_depth) for child in rule.rhs
    )
    return CfgTree(symbol, children, rule)


def generate(rules, vocab, rng_seed, max_depth=3):
    """
    Derive a random sentence tree from ``S``.

    Parameters
    ----------
    rules : sequence[CfgRule]
    vocab : Vocabulary
    rng_seed : int or numpy.random.Generator
    max_depth : int
        Noun phrases at this depth are forced to be single nouns, so
        ``max_depth=1`` only yields ``S -> N IV`` and ``S -> N TV N`` with
        plain nouns.

    Returns
    -------
    tree : CfgTree
    """
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1, got {}".format(max_depth))
    for symbol in (Symbol.N, Symbol.TV, Symbol.IV, Symbol.RPRON):
        if not vocab.words_for(symbol):
            raise ValueError("Vocabulary has no words for {!r}.".format(symbol))
    rng = np.random.default_rng(rng_seed)
    return _expand(rules, vocab, rng, Symbol.S, 0, max_depth)


def leaves(tree):
    """Terminal words of ``tree``, left to right."""
    out = []
    stack = [tree]
    while stack:
        t = stack.pop()
        if t.is_leaf:
            out.append(t.symbol.word)
        else:
            stack.extend(reversed(t.children))
    return out


def _find(t, factor, occurrence=0):
    seen = 0
    for i, f in enumerate(t):
        if f == factor:
            if seen == occurrence:
                return i
            seen += 1
    raise ValueError("Type {} has no factor {}.".format(t, factor))


_SUBJECT = Factor(BasicType.n, 1)
_OBJECT = Factor(BasicType.n, -1)
_HEAD = Factor(BasicType.s, 0)
_NOUN = Factor(BasicType.n, 0)
_CLAUSE = Factor(BasicType.s, -1)


class _Translator(object):
    def __init__(self, dictionary):
        self.dictionary = dictionary
        self.words = []
        self.offset = 0
        self.cups = []

    def word(self, tree):
        """Place a lexical subtree; return ``(offset, type)``."""
        word = tree.children[0].symbol.word
        t = self.dictionary[word]
        start = self.offset
        self.words.append(word)
        self.offset += len(t)
        return start, t

    def noun_phrase(self, tree):
        """Place an N subtree; return the wire index of its open n."""
        if tree.rule.lexical:
            start, t = self.word(tree)
            return start + _find(t, _NOUN)
        head = self.noun_phrase(tree.children[0])
        who, wt = self.word(tree.children[1])
        self.cups.append((head, who + _find(wt, _SUBJECT)))
        verb, vt = self.word(tree.children[2])
        self.cups.append((who + _find(wt, _NOUN, 1), verb + _find(vt, _SUBJECT)))
        self.cups.append((who + _find(wt, _CLAUSE), verb + _find(vt, _HEAD)))
        if len(tree.children) == 4:
            obj = self.noun_phrase(tree.children[3])
            self.cups.append((verb + _find(vt, _OBJECT), obj))
        return who + _find(wt, _NOUN, 0)

    def sentence(self, tree):
        subject = self.noun_phrase(tree.children[0])
        verb, vt = self.word(tree.children[1])
        self.cups.append((subject, verb + _find(vt, _SUBJECT)))
        if len(tree.children) == 3:
            obj = self.noun_phrase(tree.children[2])
            self.cups.append((verb + _find(vt, _OBJECT), obj))
        return verb + _find(vt, _HEAD)


def to_diagram(tree, dictionary):
    """
    Translate a derivation tree into a sentence diagram.

    Word-states are laid out in leaf order and every production is replaced by
    its pattern of cups. Stacked relative clauses can attach in more than one
    non-crossing way; the tree's own pattern is checked and the canonical
    reduction of the same words is returned, so that every sentence has one
    diagram however it was derived.

    Raises
    ------
    UnknownWord
        If a leaf is missing from ``dictionary``.
    InvalidDiagram
        If the tree's cup pattern is not a valid reduction.
    """
    missing = [w for w in leaves(tree) if w not in dictionary]
    if missing:
        raise UnknownWord(missing)
    translator = _Translator(dictionary)
    head = translator.sentence(tree)
    derived = SentenceDiagram.build(
        translator.words, dictionary, CupPattern(translator.cups, [head])
    )
    validate(derived)
    canonical = from_sentence(translator.words, dictionary)
    if canonical != derived:
        log.debug(
            "%r: derivation cups %s, canonical %s",
            " ".join(translator.words), derived.cups.pairs, canonical.cups.pairs,
        )
    return canonical


def generate_corpus(rules, vocab, count, rng_seed, max_depth=3, retries=100):
    """
    Generate ``count`` distinct sentences.

    Duplicates are resampled; at most ``retries * count`` trees are drawn.

    Returns
    -------
    sentences : list[list[str]]
    """
    if count < 1:
        raise ValueError("count must be at least 1, got {}".format(count))
    rng = np.random.default_rng(rng_seed)
    seen = set()
    out = []
    budget = retries * count
    while len(out) < count:
        if budget == 0:
            raise CorpusGenerationError(
                "Found only {} distinct sentences of {} requested "
                "(max_depth={}).".format(len(out), count, max_depth)
            )
        budget -= 1
        words = leaves(generate(rules, vocab, rng, max_depth))
        key = tuple(words)
        if key not in seen:
            seen.add(key)
            out.append(words)
    log.debug("generated %d sentences, %d draws left", count, budget)
    return out
