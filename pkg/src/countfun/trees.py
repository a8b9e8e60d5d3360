"""Weighted trees: a formal sum seen on the right Cayley tree.

Every operation here adds a combination of extension relations to the
weights, so the represented class never changes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

from .errors import DepthTooSmall, IllegalLetter, NotConstant
from .formal import NEG_INF, FormalSum, children, left_extension, right_extension
from .words import Mode, Word, format_letter, format_word, hebrew_key, make_word


@dataclass(frozen=True)
class WeightedTree:
    weights: FormalSum

    @property
    def mode(self) -> Mode:
        return self.weights.mode

    @property
    def depth(self):
        return self.weights.depth

    def __getitem__(self, w) -> Fraction:
        return self.weights[w]

    def __eq__(self, other):
        if isinstance(other, WeightedTree):
            return self.weights == other.weights
        return NotImplemented

    def __hash__(self):
        return hash(self.weights)


def _tree(t) -> WeightedTree:
    return t if isinstance(t, WeightedTree) else WeightedTree(t)


@dataclass(frozen=True)
class Brotherhood:
    father: Word
    mode: Mode

    @property
    def members(self) -> List[Word]:
        return children(self.father, self.mode)

    @property
    def depth(self) -> int:
        return len(self.father) + 1

    def values(self, t) -> List[Fraction]:
        t = _tree(t)
        return [t[v] for v in self.members]

    def is_constant(self, t) -> bool:
        return len(set(self.values(t))) <= 1

    def is_zero(self, t) -> bool:
        return all(x == 0 for x in self.values(t))

    def __str__(self):
        return f"Br({format_word(self.father)}*)"


@dataclass(frozen=True)
class RelatedPair:
    """``b1`` is all-zero, ``b2`` is non-constant; ``iota`` matches members."""

    b1: Brotherhood
    b2: Brotherhood
    iota: Dict[Word, Word]


def brotherhood_of(w, mode: Mode) -> Brotherhood:
    w = make_word(w, mode)
    if not w:
        raise DepthTooSmall("the root has no brotherhood")
    return Brotherhood(w[:-1], mode)


def related_brotherhoods(b: Brotherhood, include_self: bool = True) -> List[Brotherhood]:
    """Brotherhoods whose fathers differ from ``b``'s only in the first letter."""
    if b.depth < 2:
        raise DepthTooSmall("related brotherhoods need depth >= 2")
    rest = b.father[1:]
    out = []
    for t in b.mode.letters():
        if b.mode.is_group and rest and t == -rest[0]:
            continue
        father = (t,) + rest
        if father == b.father and not include_self:
            continue
        out.append(Brotherhood(father, b.mode))
    return out


def iota(b1: Brotherhood, b2: Brotherhood) -> Dict[Word, Word]:
    """Members of ``b1`` matched to the member of ``b2`` differing only in the first letter.

    In group mode at depth 2 some members have no partner and are left out.
    """
    members2 = set(b2.members)
    out = {}
    for v in b1.members:
        u = (b2.father[0],) + v[1:]
        if u in members2:
            out[v] = u
    return out


def partial_reduce(t, b: Brotherhood, s: int) -> WeightedTree:
    """Move the weight of the member ending in ``s`` onto the father."""
    t = _tree(t)
    if b.mode.is_group and b.father and s == -b.father[-1]:
        raise IllegalLetter(f"{format_letter(s)} cancels the last letter of the father")
    if s not in b.mode.letters():
        raise IllegalLetter(f"{s!r} is not a letter of {b.mode}")
    c = t[b.father + (s,)]
    if c == 0:
        return t
    return WeightedTree(t.weights + right_extension(b.father, b.mode).scale(c))


def complete_reduce(t, b: Brotherhood) -> WeightedTree:
    t = _tree(t)
    vals = b.values(t)
    if len(set(vals)) > 1:
        raise NotConstant(f"{b} is not constant")
    if vals[0] == 0:
        return t
    return WeightedTree(t.weights + right_extension(b.father, b.mode).scale(vals[0]))


def transfer(t, b: Brotherhood) -> WeightedTree:
    """Clear ``b`` through left-extension relations of its members' tails."""
    t = _tree(t)
    if b.depth < 2:
        raise DepthTooSmall("transfer is only applied at depth >= 2")
    f = t.weights
    for v in b.members:
        c = t[v]
        if c:
            f = f + left_extension(v[1:], b.mode).scale(c)
    return WeightedTree(f)


def brotherhoods_at(t, depth: int) -> List[Brotherhood]:
    """Brotherhoods of ``depth`` with some nonzero member, fathers in Hebrew order."""
    t = _tree(t)
    fathers = {w[:-1] for w in t.weights.support if len(w) == depth and depth >= 1}
    return [Brotherhood(f, t.mode) for f in sorted(fathers, key=lambda w: hebrew_key(w, t.mode.rank))]


def find_unbalanced(t) -> Optional[RelatedPair]:
    t = _tree(t)
    depth = t.depth
    if depth == NEG_INF or depth < 2:
        return None
    for b2 in brotherhoods_at(t, depth):
        if b2.is_constant(t):
            continue
        for b1 in related_brotherhoods(b2, include_self=False):
            if b1.is_zero(t):
                return RelatedPair(b1, b2, iota(b1, b2))
    return None


# -- rendering ---------------------------------------------------------------

def _drawn_vertices(t: WeightedTree):
    keep = {()}
    for w in t.weights.support:
        for k in range(len(w) + 1):
            keep.add(w[:k])
    return keep


def _walk(t: WeightedTree):
    keep = _drawn_vertices(t)

    def visit(w, level):
        yield w, level
        for c in children(w, t.mode):
            if c in keep:
                yield from visit(c, level + 1)

    yield from visit((), 0)


def to_ascii(t) -> str:
    t = _tree(t)
    lines = []
    for w, level in _walk(t):
        lines.append(f"{'  ' * level}{format_word(w)}: {_fmt(t[w])}")
    return "\n".join(lines) + "\n"


def to_dot(t) -> str:
    t = _tree(t)
    ids = {}
    lines = ["digraph T {"]
    for w, _ in _walk(t):
        ids[w] = f"n{len(ids)}"
        lines.append(f'  {ids[w]} [label="{_fmt(t[w])}", tooltip="{format_word(w)}"];')
    for w in ids:
        if w:
            lines.append(f'  {ids[w[:-1]]} -> {ids[w]} [label="{format_letter(w[-1])}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def apply_operation(t, spec: str) -> WeightedTree:
    """Apply ``transfer:<father>``, ``reduce:<father>`` or ``partial:<father>:<letter>``.

    ``<father>`` uses the word syntax; a brotherhood is named by its father.
    """
    from .words import parse_letters, parse_word

    t = _tree(t)
    kind, _, rest = spec.partition(":")
    if kind == "partial":
        father_text, _, letter_text = rest.rpartition(":")
        letter = parse_letters(letter_text)
        if len(letter) != 1:
            raise IllegalLetter(f"expected a single letter, got {letter_text!r}")
        b = Brotherhood(parse_word(father_text, t.mode), t.mode)
        return partial_reduce(t, b, letter[0])
    b = Brotherhood(parse_word(rest, t.mode), t.mode)
    if kind == "transfer":
        return transfer(t, b)
    if kind == "reduce":
        return complete_reduce(t, b)
    raise ValueError(f"unknown tree operation {kind!r}")
