"""Words over a free monoid or free group, and the two counting functions.

Letters are nonzero integers: ``k`` stands for the generator ``a_k`` and
``-k`` for its inverse.  A word is a plain tuple of letters.  The empty
tuple is the identity ``e``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

from .errors import EmptyPattern, InvalidLetter, ModeMismatch, NonReducedWord, ParseError

Word = Tuple[int, ...]

MONOID = "monoid"
GROUP = "group"


@dataclass(frozen=True)
class Mode:
    kind: str
    rank: int

    def __post_init__(self):
        if self.kind not in (MONOID, GROUP):
            raise ValueError(f"unknown mode kind {self.kind!r}")
        if not isinstance(self.rank, int) or self.rank < 2:
            raise ValueError(f"rank must be an integer >= 2, got {self.rank!r}")

    @classmethod
    def monoid(cls, rank: int) -> "Mode":
        return cls(MONOID, rank)

    @classmethod
    def group(cls, rank: int) -> "Mode":
        return cls(GROUP, rank)

    @property
    def is_group(self) -> bool:
        return self.kind == GROUP

    def letters(self) -> Tuple[int, ...]:
        """The alphabet in letter order a1 < ... < an < a1^-1 < ... < an^-1."""
        pos = tuple(range(1, self.rank + 1))
        if self.is_group:
            return pos + tuple(-k for k in pos)
        return pos

    def __str__(self):
        return f"{self.kind}(n={self.rank})"


def letter_rank(x: int, rank: int) -> int:
    return x - 1 if x > 0 else rank - x - 1


def check_letters(letters: Iterable[int], mode: Mode) -> None:
    for x in letters:
        if not isinstance(x, int) or x == 0 or abs(x) > mode.rank:
            raise InvalidLetter(f"letter {x!r} is not in the alphabet of {mode}")
        if x < 0 and not mode.is_group:
            raise InvalidLetter(f"inverse letter {format_word((x,))} in monoid mode")


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def is_cyclically_reduced(w: Sequence[int]) -> bool:
    return is_reduced(w) and (len(w) < 2 or w[0] != -w[-1])


def free_reduce(letters: Iterable[int], mode: Mode) -> Word:
    letters = tuple(letters)
    check_letters(letters, mode)
    if not mode.is_group:
        return letters
    out = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def make_word(letters: Iterable[int], mode: Mode) -> Word:
    """Validate ``letters`` as a word of ``mode`` without reducing it."""
    w = tuple(letters)
    check_letters(w, mode)
    if mode.is_group and not is_reduced(w):
        raise NonReducedWord(f"{format_word(w)} is not freely reduced")
    return w


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def multiply(u: Sequence[int], v: Sequence[int], mode: Mode) -> Word:
    return free_reduce(tuple(u) + tuple(v), mode)


def power(w: Sequence[int], k: int, mode: Mode) -> Word:
    if k < 0:
        if not mode.is_group:
            raise ModeMismatch("negative powers need group mode")
        return power(inverse(w), -k, mode)
    return free_reduce(tuple(w) * k, mode)


def cyclic_reduce(w: Sequence[int], mode: Mode) -> Tuple[Word, Word]:
    """Split ``w`` as ``conjugator * core * conjugator^-1``, core cyclically reduced."""
    w = tuple(w)
    if not mode.is_group:
        return w, ()
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j], w[:i]


def count(v: Sequence[int], w: Sequence[int]) -> int:
    """Number of occurrences of ``v`` as a subword of ``w``; ``count(e, w) = |w|``."""
    lv, lw = len(v), len(w)
    if lv == 0:
        return lw
    v = tuple(v)
    w = tuple(w)
    return sum(1 for j in range(lw - lv + 1) if w[j:j + lv] == v)


def cyclic_count(v: Sequence[int], c) -> int:
    """Occurrences of ``v`` read around the cyclic word ``c``, wrapping as often as needed."""
    if isinstance(c, CyclicWord):
        c = c.letters
    lv, m = len(v), len(c)
    if lv == 0:
        raise EmptyPattern("cyclic counting needs a nonempty pattern")
    if m == 0:
        return 0
    total = 0
    for j in range(m):
        if all(v[i] == c[(j + i) % m] for i in range(lv)):
            total += 1
    return total


def hebrew_key(w: Sequence[int], rank: int) -> Tuple[int, ...]:
    """Sort key for the right-lexicographic (Hebrew) order.

    Last letters are compared first; a word that is a proper suffix-wise
    prefix of another sorts first, so the empty word is least.
    """
    return tuple(letter_rank(x, rank) for x in reversed(w))


def hebrew_compare(u: Sequence[int], v: Sequence[int], rank: int) -> int:
    ku, kv = hebrew_key(u, rank), hebrew_key(v, rank)
    return (ku > kv) - (ku < kv)


def hebrew_sorted(words: Iterable[Word], rank: int) -> list:
    return sorted(words, key=lambda w: hebrew_key(w, rank))


def rotations(w: Sequence[int]) -> list:
    w = tuple(w)
    return [w[i:] + w[:i] for i in range(len(w))] or [()]


@dataclass(frozen=True)
class CyclicWord:
    """A cyclic word stored by its Hebrew-least rotation."""

    letters: Word
    mode: Mode

    @classmethod
    def from_word(cls, w: Sequence[int], mode: Mode, reduce: bool = False) -> "CyclicWord":
        w = make_word(w, mode)
        if mode.is_group and not is_cyclically_reduced(w):
            if not reduce:
                raise NonReducedWord(f"{format_word(w)} is not cyclically reduced")
            w, _ = cyclic_reduce(w, mode)
        best = min(rotations(w), key=lambda r: hebrew_key(r, mode.rank))
        return cls(best, mode)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return format_word(self.letters)


# -- text syntax -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(e)(?![0-9])|([aA])([0-9]+)(?:\^(-?[0-9]+))?)")


def parse_letters(text: str) -> list:
    """Parse the word syntax (``a1 a2 A1``, ``a1^-1``, ``e``) into raw letters."""
    letters = []
    pos = 0
    text = text.rstrip()
    if not text.strip():
        raise ParseError("empty word text; use 'e' for the identity", 0)
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:pos + 1]!r}", pos)
        if not m.group(1):
            k = int(m.group(3))
            if k == 0:
                raise ParseError("generator index must be positive", m.start(2))
            x = k if m.group(2) == "a" else -k
            exp = int(m.group(4)) if m.group(4) is not None else 1
            if exp < 0:
                x, exp = -x, -exp
            letters.extend([x] * exp)
        pos = m.end()
    return letters


def parse_word(text: str, mode: Mode, reduce: bool = False) -> Word:
    letters = parse_letters(text)
    if reduce:
        return free_reduce(letters, mode)
    return make_word(letters, mode)


def format_letter(x: int) -> str:
    return f"a{x}" if x > 0 else f"A{-x}"


def format_word(w: Sequence[int]) -> str:
    if len(w) == 0:
        return "e"
    return " ".join(format_letter(x) for x in w)


def words_of_length(mode: Mode, length: int):
    """All reduced words of exactly ``length`` letters, in Hebrew order."""
    if length == 0:
        return [()]
    letters = mode.letters()
    out = [(x,) for x in letters]
    # building right-to-left keeps the list in Hebrew order
    for _ in range(length - 1):
        out = [(x,) + w for w in out for x in letters if not (mode.is_group and x == -w[0])]
    return out
