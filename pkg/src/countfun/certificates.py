"""Homogenization via cyclic counting, L-certificates and witness search."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, Optional

from .formal import FormalSum, raise_to_level
from .graphs import build_graph
from .words import CyclicWord, Mode, Word, cyclic_count, format_word


def _as_cyclic(c, mode: Mode) -> CyclicWord:
    if isinstance(c, CyclicWord):
        return c
    return CyclicWord.from_word(c, mode, reduce=True)


def homogenized_evaluate(f: FormalSum, c) -> Fraction:
    """Value of the homogenization of ``f`` at the cyclic word ``c``.

    The empty-word term contributes its coefficient times ``|c|``.
    Non-cyclically-reduced group words are cyclically reduced first.
    """
    c = _as_cyclic(c, f.mode)
    total = Fraction(0)
    for v, coef in f.terms.items():
        k = len(c) if not v else cyclic_count(v, c)
        if k:
            total += coef * k
    return total


@dataclass(frozen=True)
class CertificateVector:
    level: int
    entries: Dict[Word, int]

    def pair(self, f: FormalSum) -> Fraction:
        return sum((c * f[w] for w, c in self.entries.items()), Fraction(0))

    def total(self) -> int:
        return sum(self.entries.values())

    def format(self) -> str:
        parts = []
        for w, k in self.entries.items():
            parts.append(f"[{format_word(w)}]" if k == 1 else f"{k}*[{format_word(w)}]")
        return " + ".join(parts) if parts else "0"


def certificate(c, level: int, mode: Mode | None = None) -> CertificateVector:
    """The functional sum of ``[w]`` over cyclic length-``level`` subwords of ``c``.

    A plain word is read from its first letter, so entries come out in
    order of first occurrence; group words must be cyclically reduced.
    """
    if isinstance(c, CyclicWord):
        letters = c.letters
    else:
        CyclicWord.from_word(c, mode)  # validates
        letters = tuple(c)
    m = len(letters)
    entries: Dict[Word, int] = {}
    for j in range(m):
        w = tuple(letters[(j + i) % m] for i in range(level))
        entries[w] = entries.get(w, 0) + 1
    return CertificateVector(level, entries)


def default_bound(f: FormalSum) -> int:
    level = max(int(f.depth) if f else 0, 2)
    return max(len(build_graph(f.mode, level).vertices), 2 * level)


def witness_search(f: FormalSum, bound: Optional[int] = None) -> Optional[CyclicWord]:
    """Shortest, then Hebrew-least, cyclic word where the homogenization of ``f`` is nonzero.

    Searches cyclically reduced words of length ``1..bound``.  Works on the
    pure raise of ``f`` with integer coefficients, which has the same
    homogenization up to a positive factor.
    """
    if bound is None:
        bound = default_bound(f)
    if not f:
        return None
    mode = f.mode
    level = max(int(f.depth), 2)
    pure = raise_to_level(f, level)
    scale = lcm(*(c.denominator for c in pure.terms.values()))
    table = {w: int(c * scale) for w, c in pure.terms.items()}
    for length in _nonzero_lengths(table, level, bound, mode):
        found = _first_nonzero(table, level, length, mode)
        if found is not None:
            return CyclicWord.from_word(found, mode)
    return None


def _nonzero_lengths(table, level, bound, mode):
    """Lengths ``<= bound`` carrying some closed walk of nonzero weight.

    Closed walks of length ``m`` in the level graph are exactly the cyclic
    words of length ``m``, so tracking the set of reachable walk sums per
    (start, current) vertex pair settles each length without enumerating
    words.
    """
    g = build_graph(mode, level)
    out_edges: Dict[Word, list] = {v: [] for v in g.vertices}
    for e in g.edges:
        out_edges[e[:-1]].append((e[1:], table.get(e, 0)))
    found = set()
    for start in g.vertices:
        layer = {start: {0}}
        for length in range(1, bound + 1):
            nxt: Dict[Word, set] = {}
            for v, sums in layer.items():
                for u, c in out_edges[v]:
                    nxt.setdefault(u, set()).update(x + c for x in sums)
            layer = nxt
            if any(layer.get(start, ())):
                found.add(length)
    return sorted(found)


def _first_nonzero(table, level, length, mode):
    """Hebrew-first cyclically reduced word of ``length`` with nonzero window sum.

    Words are built from the last letter backwards, which enumerates them in
    Hebrew order; every window lying inside the placed suffix is summed as
    soon as it is complete, the wrapping windows at the end.
    """
    letters = mode.letters()
    group = mode.is_group
    word = [0] * length
    wrap_starts = range(max(length - level + 1, 0), length)

    def place(k, partial):
        for x in letters:
            if group and k + 1 < length and x == -word[k + 1]:
                continue
            if group and k == 0 and length > 1 and x == -word[length - 1]:
                continue
            word[k] = x
            total = partial
            if k + level <= length:
                total += table.get(tuple(word[k:k + level]), 0)
            if k == 0:
                for j in wrap_starts:
                    window = tuple(word[(j + i) % length] for i in range(level))
                    total += table.get(window, 0)
                if total:
                    return tuple(word)
            else:
                hit = place(k - 1, total)
                if hit is not None:
                    return hit
        return None

    return place(length - 1, 0)
