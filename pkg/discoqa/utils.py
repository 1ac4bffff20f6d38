"""
Miscellaneous utilities.
"""
from collections import deque


def unique(g):
    """
    Yield values yielded by ``g`` in first-seen order, dropping repeats.

    Example
    -------
    >>> list(unique(["Romeo", "dies", "Romeo", "who"]))
    ['Romeo', 'dies', 'who']
    """
    seen = set()
    for value in g:
        if value not in seen:
            seen.add(value)
            yield value


def vocabulary(sentences):
    """
    Words of ``sentences`` in order of first appearance.

    >>> vocabulary([["Romeo", "dies"], ["Juliet", "dies"]])
    ['Romeo', 'dies', 'Juliet']
    """
    return list(unique(word for sentence in sentences for word in sentence))


def sliding_window(iterable, n):
    """
    Yield overlapping windows of length ``n``.

    >>> list(sliding_window([1, 2, 3], 2))
    [(1, 2), (2, 3)]
    """
    it = iter(iterable)
    window = deque(maxlen=n)
    for item in it:
        window.append(item)
        if len(window) == n:
            yield tuple(window)


def valfilter(f, d):
    return {k: v for k, v in d.items() if f(v)}


def merge(dicts):
    """
    Merge ``dicts`` left to right; later values win.

    >>> merge([{"depth": 1, "qn": 1}, {"depth": 3}])
    {'depth': 3, 'qn': 1}
    """
    out = {}
    for d in dicts:
        out.update(d)
    return out


def child_seeds(rng, count):
    """Draw ``count`` independent integer seeds from ``rng``."""
    return [int(s) for s in rng.integers(0, 2 ** 63 - 1, size=count)]
