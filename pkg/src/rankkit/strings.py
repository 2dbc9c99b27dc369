"""Shortlex arithmetic over binary strings.

The universe is every finite string over {0,1}, ordered by length first and
then as binary numerals:

    "" < "0" < "1" < "00" < "01" < "10" < "11" < "000" < ...

``lex_rank`` / ``lex_unrank`` realise the order isomorphism with the
naturals (the empty string has rank 0), and ``pair`` / ``unpair`` give a
bijection between pairs of strings and strings, via Cantor pairing on
ranks.  All functions are pure and total on valid inputs; ranks are
arbitrary-precision ints, so nothing here can overflow.
"""

from __future__ import annotations

from math import isqrt
from typing import Iterator

EPSILON = ""

# Token used for the empty string in CLI arguments and JSON payloads.
EPSILON_TOKEN = "eps"


def _check(s: str) -> str:
    if s.strip("01") != "":
        raise ValueError(f"not a binary string: {s!r}")
    return s


def lex_rank(s: str) -> int:
    """0-based position of ``s`` in shortlex order."""
    _check(s)
    return int("1" + s, 2) - 1


def lex_unrank(n: int) -> str:
    """The string at 0-based shortlex position ``n``."""
    if n < 0:
        raise ValueError(f"rank must be nonnegative, got {n}")
    return bin(n + 1)[3:]


def successor(s: str) -> str:
    """The string immediately after ``s``, e.g. successor("11") == "000"."""
    return lex_unrank(lex_rank(s) + 1)


def predecessor(s: str) -> str:
    """Inverse of successor; undefined for the empty string."""
    n = lex_rank(s)
    if n == 0:
        raise ValueError("the empty string has no predecessor")
    return lex_unrank(n - 1)


def lex_less(a: str, b: str) -> bool:
    return lex_rank(a) < lex_rank(b)


def lex_le(a: str, b: str) -> bool:
    return lex_rank(a) <= lex_rank(b)


def shortlex_key(s: str) -> tuple[int, str]:
    """Sort key putting plain strings into shortlex order."""
    _check(s)
    return (len(s), s)


def strings() -> Iterator[str]:
    """All of the universe, in shortlex order."""
    n = 0
    while True:
        yield lex_unrank(n)
        n += 1


def strings_up_to(max_len: int) -> Iterator[str]:
    """Every string of length <= max_len, in shortlex order."""
    for n in range(2 ** (max_len + 1) - 1):
        yield lex_unrank(n)


def universe_size(max_len: int) -> int:
    """Number of strings of length <= max_len."""
    return 2 ** (max_len + 1) - 1


def cantor_pair(i: int, j: int) -> int:
    return (i + j) * (i + j + 1) // 2 + j


def cantor_unpair(z: int) -> tuple[int, int]:
    w = (isqrt(8 * z + 1) - 1) // 2
    j = z - w * (w + 1) // 2
    return w - j, j


def pair(a: str, b: str) -> str:
    """Bijective pairing of two strings into one (Cantor pairing on ranks)."""
    return lex_unrank(cantor_pair(lex_rank(a), lex_rank(b)))


def unpair(z: str) -> tuple[str, str]:
    i, j = cantor_unpair(lex_rank(z))
    return lex_unrank(i), lex_unrank(j)


def to_token(s: str) -> str:
    """Serialise a string for CLI/JSON use; the empty string becomes "eps"."""
    _check(s)
    return s if s else EPSILON_TOKEN


def from_token(tok: str) -> str:
    """Inverse of to_token."""
    if tok == EPSILON_TOKEN:
        return EPSILON
    return _check(tok)
