"""Finitely supported formal sums of words with exact rational coefficients.

A ``FormalSum`` ``{w: c}`` stands for ``sum c * delta_w`` and, through the
counting functions, for the function ``sum c * rho_w``.
"""

from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType
from typing import Dict, Iterable, Mapping, Tuple

from .errors import LevelTooSmall, ModeMismatch
from .words import Mode, Word, count, format_word, hebrew_key, inverse, make_word

NEG_INF = float("-inf")


def as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("floating point coefficients are not accepted; use Fraction or str")
    return Fraction(c)


class FormalSum:
    """Immutable map word -> nonzero Fraction over a fixed mode."""

    __slots__ = ("mode", "_terms", "_hash")

    def __init__(self, mode: Mode, terms: Mapping | Iterable = (), *, _trusted: bool = False):
        self.mode = mode
        if _trusted:
            self._terms = terms
        else:
            acc: Dict[Word, Fraction] = {}
            items = terms.items() if isinstance(terms, Mapping) else terms
            for w, c in items:
                w = make_word(w, mode)
                acc[w] = acc.get(w, Fraction(0)) + as_fraction(c)
            self._terms = {w: c for w, c in acc.items() if c != 0}
        self._hash = None

    @classmethod
    def zero(cls, mode: Mode) -> "FormalSum":
        return cls(mode, {}, _trusted=True)

    @classmethod
    def delta(cls, w, mode: Mode, coefficient=1) -> "FormalSum":
        return cls(mode, {tuple(w): coefficient})

    @property
    def terms(self) -> Mapping[Word, Fraction]:
        return MappingProxyType(self._terms)

    def __getitem__(self, w) -> Fraction:
        return self._terms.get(tuple(w), Fraction(0))

    def __contains__(self, w) -> bool:
        return tuple(w) in self._terms

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self.sorted_words())

    def __bool__(self):
        return bool(self._terms)

    def items(self):
        """Terms in Hebrew order of their words."""
        return [(w, self._terms[w]) for w in self.sorted_words()]

    def sorted_words(self):
        return sorted(self._terms, key=lambda w: hebrew_key(w, self.mode.rank))

    @property
    def support(self):
        return frozenset(self._terms)

    @property
    def depth(self):
        """Maximal support length; ``-inf`` for the zero sum."""
        if not self._terms:
            return NEG_INF
        return max(len(w) for w in self._terms)

    def is_pure(self, length: int | None = None) -> bool:
        lengths = {len(w) for w in self._terms}
        if length is None:
            return len(lengths) <= 1
        return lengths <= {length}

    def _check(self, other: "FormalSum"):
        if not isinstance(other, FormalSum):
            return NotImplemented
        if other.mode != self.mode:
            raise ModeMismatch(f"cannot combine sums over {self.mode} and {other.mode}")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        acc = dict(self._terms)
        for w, c in other._terms.items():
            v = acc.get(w, 0) + c
            if v:
                acc[w] = v
            else:
                acc.pop(w, None)
        return FormalSum(self.mode, acc, _trusted=True)

    def __neg__(self):
        return FormalSum(self.mode, {w: -c for w, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "FormalSum":
        c = as_fraction(c)
        if c == 0:
            return FormalSum.zero(self.mode)
        return FormalSum(self.mode, {w: v * c for w, v in self._terms.items()}, _trusted=True)

    def __mul__(self, c):
        if isinstance(c, FormalSum):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self.mode == other.mode and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.mode, frozenset(self._terms.items())))
        return self._hash

    def restrict(self, predicate) -> "FormalSum":
        return FormalSum(self.mode, {w: c for w, c in self._terms.items() if predicate(w)}, _trusted=True)

    def __repr__(self):
        return f"FormalSum({self.mode}, {format_sum(self)})"

    def __str__(self):
        return format_sum(self)


def format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_sum(f: FormalSum) -> str:
    """Render ``f`` in the CLI expression grammar; parses back to ``f``."""
    if not f:
        return "0"
    parts = []
    for i, (w, c) in enumerate(f.items()):
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        body = f"[{format_word(w)}]" if a == 1 else f"{format_coefficient(a)}*[{format_word(w)}]"
        if i == 0:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


def add(f: FormalSum, g: FormalSum) -> FormalSum:
    return f + g


def scale(f: FormalSum, c) -> FormalSum:
    return f.scale(c)


def _extensions(w: Word, mode: Mode, side: str):
    """One-letter extensions of ``w`` on ``side`` that stay reduced."""
    out = []
    for s in mode.letters():
        if side == "left":
            if mode.is_group and w and s == -w[0]:
                continue
            out.append((s,) + w)
        else:
            if mode.is_group and w and s == -w[-1]:
                continue
            out.append(w + (s,))
    return out


def children(w, mode: Mode):
    """Right extensions ``w s`` of ``w`` (the children in the right Cayley tree)."""
    return _extensions(tuple(w), mode, "right")


def left_extension(w, mode: Mode) -> FormalSum:
    """``l_w = delta_w - sum_s delta_{s w}``."""
    w = make_word(w, mode)
    terms = {w: Fraction(1)}
    for v in _extensions(w, mode, "left"):
        terms[v] = Fraction(-1)
    return FormalSum(mode, terms, _trusted=True)


def right_extension(w, mode: Mode) -> FormalSum:
    """``r_w = delta_w - sum_s delta_{w s}``."""
    w = make_word(w, mode)
    terms = {w: Fraction(1)}
    for v in _extensions(w, mode, "right"):
        terms[v] = Fraction(-1)
    return FormalSum(mode, terms, _trusted=True)


def symmetry(w, mode: Mode) -> FormalSum:
    """``s_w = delta_w + delta_{w^-1}``; ``s_e = 2 delta_e``."""
    if not mode.is_group:
        raise ModeMismatch("symmetry relations exist only in group mode")
    w = make_word(w, mode)
    return FormalSum(mode, [(w, 1), (inverse(w), 1)])


def b_relation(w, mode: Mode) -> FormalSum:
    """``b_w = r_w - l_w``: in-edges minus out-edges of vertex ``w``."""
    return right_extension(w, mode) - left_extension(w, mode)


def star(f: FormalSum) -> FormalSum:
    """The involution ``delta_w -> -delta_{w^-1}``."""
    if not f.mode.is_group:
        raise ModeMismatch("the involution is defined in group mode only")
    return FormalSum(f.mode, {inverse(w): -c for w, c in f.terms.items()}, _trusted=True)


def brooks_to_counting(f: FormalSum) -> FormalSum:
    """Rewrite ``sum c_w phi_w`` as a sum of counting functions: ``f + f*``."""
    return f + star(f)


def evaluate(f: FormalSum, w) -> Fraction:
    """Value of ``sum c_v rho_v`` at the reduced word ``w``."""
    w = make_word(w, f.mode)
    total = Fraction(0)
    for v, c in f.terms.items():
        k = count(v, w)
        if k:
            total += c * k
    return total


def raise_with_cost(f: FormalSum, level: int) -> Tuple[FormalSum, Fraction]:
    """Raise ``f`` to a pure sum of length ``level``.

    Returns the raised sum and the total absolute coefficient that was
    rewritten; each rewrite changes the represented function by at most
    that much pointwise.
    """
    if f and f.depth > level:
        raise LevelTooSmall(f"level {level} is below the depth {f.depth} of the sum")
    mode = f.mode
    by_length: Dict[int, Dict[Word, Fraction]] = {}
    for w, c in f.terms.items():
        by_length.setdefault(len(w), {})[w] = c
    consumed = Fraction(0)
    for k in range(level):
        layer = by_length.pop(k, None)
        if not layer:
            continue
        nxt = by_length.setdefault(k + 1, {})
        for w in sorted(layer, key=lambda u: hebrew_key(u, mode.rank)):
            c = layer[w]
            consumed += abs(c)
            for v in _extensions(w, mode, "right"):
                nxt[v] = nxt.get(v, Fraction(0)) + c
    top = {w: c for w, c in by_length.get(level, {}).items() if c != 0}
    return FormalSum(mode, top, _trusted=True), consumed


def raise_to_level(f: FormalSum, level: int) -> FormalSum:
    return raise_with_cost(f, level)[0]
