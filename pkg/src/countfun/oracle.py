"""Brute-force ground truth for the test suite.

Nothing here reuses the graph or relation machinery: words are generated
as integer arrays, counting is done by direct comparison, and ranks come
from generic exact linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, List, Sequence

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import NotPure, TooLarge
from .formal import FormalSum
from .words import Mode, Word, hebrew_key

DEFAULT_CAP = 2_000_000


def _count_words(mode: Mode, length: int) -> int:
    if length == 0:
        return 1
    if not mode.is_group:
        return mode.rank ** length
    return 2 * mode.rank * (2 * mode.rank - 1) ** (length - 1)


def word_array(mode: Mode, length: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    """All words of ``length`` as rows of an int8 array (unsorted)."""
    if _count_words(mode, length) > cap:
        raise TooLarge(f"{_count_words(mode, length)} words of length {length} exceed the cap {cap}")
    letters = np.array(mode.letters(), dtype=np.int8)
    arr = np.zeros((1, 0), dtype=np.int8)
    for _ in range(length):
        k = len(arr)
        grown = np.concatenate([np.repeat(arr, len(letters), axis=0),
                                np.tile(letters, k)[:, None]], axis=1)
        if mode.is_group and grown.shape[1] >= 2:
            grown = grown[grown[:, -1] != -grown[:, -2]]
        arr = grown
    return arr


def enumerate_words(mode: Mode, length: int, cap: int = DEFAULT_CAP) -> List[Word]:
    """All (reduced) words of exactly ``length`` letters, in Hebrew order."""
    if length < 0:
        raise ValueError("length must be >= 0")
    words = [tuple(int(x) for x in row) for row in word_array(mode, length, cap)]
    return sorted(words, key=lambda w: hebrew_key(w, mode.rank))


def _occurrences(arr: np.ndarray, v: Word) -> np.ndarray:
    n, m = arr.shape
    if not v:
        return np.full(n, m, dtype=np.int64)
    k = len(v)
    out = np.zeros(n, dtype=np.int64)
    pattern = np.array(v, dtype=np.int8)
    for j in range(m - k + 1):
        out += np.all(arr[:, j:j + k] == pattern, axis=1)
    return out


def evaluate_all(f: FormalSum, arr: np.ndarray, scale: int) -> np.ndarray:
    """``scale * f`` evaluated on every row of ``arr``, as int64."""
    total = np.zeros(len(arr), dtype=np.int64)
    for v, c in f.terms.items():
        total += int(c * scale) * _occurrences(arr, v)
    return total


@dataclass(frozen=True)
class GrowthProfile:
    maxima: Dict[int, Fraction]

    @property
    def peak(self) -> Fraction:
        return max(self.maxima.values(), default=Fraction(0))

    def is_nonincreasing_after(self, length: int) -> bool:
        keys = sorted(k for k in self.maxima if k >= length)
        return all(self.maxima[a] >= self.maxima[b] for a, b in zip(keys, keys[1:]))


def growth_profile(f: FormalSum, horizon: int, cap: int = DEFAULT_CAP) -> GrowthProfile:
    """Exact max of ``|f|`` over all words of each length ``0..horizon``."""
    scale = lcm(*(c.denominator for c in f.terms.values())) if f else 1
    maxima = {}
    for length in range(horizon + 1):
        arr = word_array(f.mode, length, cap)
        vals = evaluate_all(f, arr, scale)
        maxima[length] = Fraction(int(np.abs(vals).max()) if len(vals) else 0, scale)
    return GrowthProfile(maxima)


def naive_rank(rows: Sequence[FormalSum], level: int) -> int:
    """Rank of pure length-``level`` sums by exact elimination over the rationals."""
    rows = list(rows)
    for r in rows:
        if not r.is_pure(level):
            raise NotPure(f"row {r} is not pure of length {level}")
    if not rows:
        return 0
    columns = sorted({w for r in rows for w in r.support})
    if not columns:
        return 0
    index = {w: i for i, w in enumerate(columns)}
    data = [[QQ(0)] * len(columns) for _ in rows]
    for i, r in enumerate(rows):
        for w, c in r.terms.items():
            data[i][index[w]] = QQ(c.numerator, c.denominator)
    return DomainMatrix(data, (len(rows), len(columns)), QQ).rank()


def is_independent_by_evaluation(words: Sequence[Word], mode: Mode, horizon: int) -> bool:
    """Linear independence of the functions ``rho_w`` as functions (not classes).

    Evaluates them on all words of length ``<= horizon`` and checks the rank.
    """
    words = list(words)
    if not words:
        return True
    blocks = []
    for length in range(horizon + 1):
        arr = word_array(mode, length)
        blocks.append(np.stack([_occurrences(arr, v) for v in words], axis=1))
    matrix = np.concatenate(blocks, axis=0)
    data = [[QQ(int(x)) for x in row] for row in matrix.T]
    return DomainMatrix(data, (len(words), matrix.shape[0]), QQ).rank() == len(words)


def random_word(mode: Mode, rng, length: int) -> Word:
    letters = mode.letters()
    w: List[int] = []
    while len(w) < length:
        x = rng.choice(letters)
        if mode.is_group and w and x == -w[-1]:
            continue
        w.append(x)
    return tuple(w)


def random_sum(mode: Mode, rng, depth: int, terms: int, coefficients=(-2, -1, 1, 2)) -> FormalSum:
    """A sum of ``terms`` random words of length ``<= depth`` with small integer coefficients."""
    acc = {}
    for _ in range(terms):
        w = random_word(mode, rng, rng.randint(0, depth))
        acc[w] = acc.get(w, 0) + rng.choice(coefficients)
    return FormalSum(mode, acc)
