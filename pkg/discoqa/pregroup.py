"""
pregroup
--------
Pregroup types, word typings, and contraction-only parsing.

A type is an ordered product of basic types ``b^k`` where ``k`` is an integer
adjoint order. A sentence is grammatical iff the product of its word types
contracts to ``s^0`` using only ``b^k b^(k+1) -> 1``.
"""
import json
import logging
from collections import namedtuple
from enum import Enum
from textwrap import dedent

from .formatting import bulleted_list

log = logging.getLogger(__name__)


class TypeSyntaxError(ValueError):
    """
    Raised when a textual type can't be parsed.
    """


class UnknownWord(LookupError):
    """
    Raised when a sentence contains words missing from a dictionary.
    """

    def __init__(self, words):
        self.words = tuple(words)
        super(UnknownWord, self).__init__(
            dedent(
                """\
                The following words are not in the dictionary:
                {words}"""
            ).format(words=bulleted_list(map(repr, self.words)))
        )


class BasicType(Enum):
    n = "n"
    s = "s"

    def __str__(self):
        return self.value


class Factor(namedtuple("Factor", ["base", "order"])):
    """A single basic type with its adjoint order."""

    __slots__ = ()

    def contracts_with(self, right):
        """Does ``self right`` annihilate, i.e. ``b^k b^(k+1)``?"""
        return self.base is right.base and right.order == self.order + 1

    def __str__(self):
        if self.order == 0:
            return str(self.base)
        return "{}@{}".format(self.base, self.order)


class PregroupType(object):
    """
    An immutable product of :class:`Factor`.

    Parameters
    ----------
    factors : iterable[Factor or (BasicType, int)]
        Factors in order. The empty product is the unit type.
    """

    __slots__ = ("_factors",)

    def __init__(self, factors=()):
        self._factors = tuple(Factor(BasicType(b), int(k)) for b, k in factors)

    @property
    def factors(self):
        return self._factors

    def __add__(self, other):
        if not isinstance(other, PregroupType):
            return NotImplemented
        return PregroupType(self._factors + other._factors)

    def __len__(self):
        return len(self._factors)

    def __iter__(self):
        return iter(self._factors)

    def __getitem__(self, i):
        return self._factors[i]

    def __eq__(self, other):
        if not isinstance(other, PregroupType):
            return NotImplemented
        return self._factors == other._factors

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash(self._factors)

    def __str__(self):
        return format_type(self)

    def __repr__(self):
        return "PregroupType({!r})".format(format_type(self))


UNIT = PregroupType()

N = PregroupType([(BasicType.n, 0)])
S = PregroupType([(BasicType.s, 0)])
SENTENCE_FACTOR = Factor(BasicType.s, 0)


def parse_type(text):
    """
    Parse whitespace-separated ``base@order`` tokens into a type.

    Parameters
    ----------
    text : str
        For example ``"n@1 s n@-1"``. An omitted order means 0, and the empty
        string is the unit type.

    Returns
    -------
    t : PregroupType
    """
    factors = []
    for token in text.split():
        base, sep, order = token.partition("@")
        try:
            base = BasicType(base)
        except ValueError:
            raise TypeSyntaxError(
                "Unknown basic type {!r} in {!r}.".format(base, text)
            )
        if not sep:
            order = 0
        else:
            try:
                order = int(order)
            except ValueError:
                raise TypeSyntaxError(
                    "Adjoint order of {!r} is not an integer.".format(token)
                )
        factors.append((base, order))
    return PregroupType(factors)


def format_type(t):
    return " ".join(map(str, t))


TRANSITIVE_VERB = parse_type("n@1 s n@-1")
INTRANSITIVE_VERB = parse_type("n@1 s")
RELATIVE_PRONOUN = parse_type("n@1 n s@-1 n")


class Dictionary(object):
    """
    Mapping from words to their pregroup types.

    Words are case-sensitive exact strings.
    """

    def __init__(self, entries=()):
        self._entries = dict(entries)

    @classmethod
    def from_parts_of_speech(cls, nouns=(), transitive=(), intransitive=(),
                             pronouns=()):
        """Type a vocabulary with the corpus typings."""
        entries = {}
        for words, t in ((nouns, N),
                         (transitive, TRANSITIVE_VERB),
                         (intransitive, INTRANSITIVE_VERB),
                         (pronouns, RELATIVE_PRONOUN)):
            for word in words:
                entries[word] = t
        return cls(entries)

    def __getitem__(self, word):
        try:
            return self._entries[word]
        except KeyError:
            raise UnknownWord([word])

    def __contains__(self, word):
        return word in self._entries

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def items(self):
        return self._entries.items()

    def __eq__(self, other):
        if not isinstance(other, Dictionary):
            return NotImplemented
        return self._entries == other._entries

    def __repr__(self):
        return "Dictionary({})".format(
            ", ".join("{}={}".format(w, t) for w, t in sorted(self.items()))
        )

    def union(self, other):
        entries = dict(self._entries)
        entries.update(other._entries)
        return Dictionary(entries)

    def to_dict(self):
        return {word: format_type(t) for word, t in self.items()}


def read_dictionary(path):
    """
    Load a dictionary from ``path``.

    ``.json`` files hold a ``{word: type}`` object. Any other file is read as
    lines of ``word: type``; blank lines and ``#`` comments are skipped.
    """
    path = str(path)
    with open(path) as f:
        if path.endswith(".json"):
            raw = json.load(f)
        else:
            raw = {}
            for lineno, line in enumerate(f, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                word, sep, text = line.partition(":")
                if not sep:
                    raise TypeSyntaxError(
                        "{}:{}: expected 'word: type', got {!r}".format(
                            path, lineno, line
                        )
                    )
                raw[word.strip()] = text
    return Dictionary((w, parse_type(t)) for w, t in raw.items())


def write_dictionary(path, dictionary):
    path = str(path)
    entries = dictionary.to_dict()
    with open(path, "w") as f:
        if path.endswith(".json"):
            json.dump(entries, f, indent=2, sort_keys=True)
            f.write("\n")
        else:
            for word in sorted(entries):
                f.write("{}: {}\n".format(word, entries[word]))


def sentence_type(words, dictionary):
    """
    Concatenate the types of ``words`` in sentence order.

    Raises
    ------
    UnknownWord
        Naming every word that is missing from ``dictionary``.
    """
    missing = [w for w in words if w not in dictionary]
    if missing:
        raise UnknownWord(missing)
    out = UNIT
    for word in words:
        out = out + dictionary[word]
    return out


class CupPattern(namedtuple("CupPattern", ["pairs", "open"])):
    """
    A non-crossing set of contractions over a flattened factor list.

    Attributes
    ----------
    pairs : tuple[(int, int)]
        Sorted ``(i, j)`` index pairs with ``i < j``.
    open : tuple[int]
        Positions left uncontracted, in order.
    """

    __slots__ = ()

    def __new__(cls, pairs, open):
        return super(CupPattern, cls).__new__(
            cls,
            tuple(sorted((int(i), int(j)) for i, j in pairs)),
            tuple(sorted(int(p) for p in open)),
        )


def crossing_pairs(pairs):
    """Yield every pair of cups that cross."""
    pairs = sorted(pairs)
    for a, (i, j) in enumerate(pairs):
        for k, l in pairs[a + 1:]:
            if i < k < j < l:
                yield (i, j), (k, l)


def _reducible_table(factors):
    """
    Interval table for full reducibility.

    ``partner[i][j]`` is the nearest ``k`` that ``i`` can contract with so that
    ``[i+1, k)`` and ``[k+1, j)`` both reduce to the unit, or -1. Intervals are
    half-open; the empty interval is reducible.
    """
    m = len(factors)
    ok = [[False] * (m + 1) for _ in range(m + 1)]
    partner = [[-1] * (m + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        ok[i][i] = True
    for length in range(2, m + 1, 2):
        for i in range(0, m - length + 1):
            j = i + length
            for k in range(i + 1, j, 2):
                if (factors[i].contracts_with(factors[k])
                        and ok[i + 1][k] and ok[k + 1][j]):
                    ok[i][j] = True
                    partner[i][j] = k
                    break
    return ok, partner


def _collect_pairs(partner, i, j, out):
    stack = [(i, j)]
    while stack:
        i, j = stack.pop()
        if i >= j:
            continue
        k = partner[i][j]
        out.append((i, k))
        stack.append((i + 1, k))
        stack.append((k + 1, j))
    return out


def reduce(t):
    """
    Find a contraction-only reduction of ``t`` to ``s``.

    Parameters
    ----------
    t : PregroupType

    Returns
    -------
    pattern : CupPattern or None
        The canonical parse: among all valid patterns, the one whose sorted
        pair list is lexicographically smallest. ``None`` if ``t`` does not
        reduce to ``s``.
    """
    factors = t.factors
    m = len(factors)
    if m % 2 == 0:
        return None

    ok, partner = _reducible_table(factors)
    best = None
    for p in range(0, m, 2):
        if factors[p] != SENTENCE_FACTOR or not (ok[0][p] and ok[p + 1][m]):
            continue
        pairs = []
        _collect_pairs(partner, 0, p, pairs)
        _collect_pairs(partner, p + 1, m, pairs)
        candidate = CupPattern(pairs, [p])
        if best is None or candidate.pairs < best.pairs:
            best = candidate
    if best is None:
        log.debug("%s does not reduce to s", format_type(t))
    return best


def is_grammatical(words, dictionary):
    return reduce(sentence_type(words, dictionary)) is not None


def reduction_steps(t, pattern):
    """
    Apply ``pattern``'s contractions innermost first.

    Returns
    -------
    steps : list[str]
        The type after each contraction, starting with ``t`` itself. The last
        entry is ``"s"`` for a grammatical parse.
    """
    alive = list(range(len(t)))
    steps = [format_type(t)]
    for i, j in sorted(pattern.pairs, key=lambda p: (p[1] - p[0], p[0])):
        alive.remove(i)
        alive.remove(j)
        steps.append(format_type([t[a] for a in alive]) or "1")
    return steps
