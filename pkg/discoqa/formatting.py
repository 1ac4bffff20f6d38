"""String formatting utilities for reports and error messages.
"""


def bulleted_list(items):
    return "\n".join(map("  - {}".format, items))


def numbered_list(items, start=0):
    """
    Format ``items`` one per line, prefixed by their index.

    >>> print(numbered_list(["n s", "s"]))
      0. n s
      1. s
    """
    return "\n".join(
        "  {}. {}".format(i, item) for i, item in enumerate(items, start)
    )


def key_value_block(pairs, width=None):
    """
    Align ``key: value`` pairs on the colon.

    >>> print(key_value_block([("qubits", 8), ("cnots", 4)]))
    qubits: 8
    cnots:  4
    """
    pairs = list(pairs)
    if not pairs:
        return ""
    if width is None:
        width = max(len(str(k)) for k, _ in pairs) + 1
    return "\n".join(
        "{key:<{width}} {value}".format(key=str(k) + ":", width=width, value=v)
        for k, v in pairs
    )
