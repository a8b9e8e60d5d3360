"""Deciding triviality of counting-function sums, and everything built on it.

The authoritative path is ``decide``: raise to a pure level, then run the
coboundary test on the transition graph.  ``paper_algorithm`` is a literal
transcription of the tree-based procedure and is kept separate because it
is not always right in group mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple

from .certificates import homogenized_evaluate
from .errors import LevelTooSmall, ModeMismatch, NotSpecialWord
from .formal import NEG_INF, FormalSum, brooks_to_counting, raise_with_cost
from .graphs import build_graph, coboundary_test, solve_potential, spanning_tree
from .trees import (
    RelatedPair,
    WeightedTree,
    brotherhoods_at,
    complete_reduce,
    find_unbalanced,
    transfer,
)
from .words import CyclicWord, Mode, Word, cyclic_count, hebrew_key, inverse, make_word, words_of_length

TRIVIAL = "Trivial"
NONTRIVIAL = "NonTrivial"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a decision.

    A non-trivial verdict carries ``witness``, a cyclic word at which the
    homogenization takes the nonzero ``value``, and ``cycle``, the edge
    words of a closed walk in the transition graph with nonzero sum.
    A trivial verdict carries ``bound``, an upper bound for the sup-norm of
    the represented function obtained from the relations that kill it.
    """

    kind: str
    level: Optional[int] = None
    witness: Optional[CyclicWord] = None
    cycle: Optional[Tuple[Word, ...]] = None
    value: Optional[Fraction] = None
    bound: Optional[Fraction] = None

    @property
    def is_trivial(self) -> bool:
        return self.kind == TRIVIAL


def decide(f: FormalSum, level: Optional[int] = None) -> Verdict:
    """Is the function represented by ``f`` bounded?

    ``level`` defaults to ``max(depth, 2)``.  Sums of depth at most one may
    also be decided at level 1, where no relations survive.
    """
    if not f:
        return Verdict(TRIVIAL, level=2 if level is None else level, bound=Fraction(0))
    depth = int(f.depth)
    if level is None:
        level = max(depth, 2)
    if level < max(depth, 1):
        raise LevelTooSmall(f"level {level} is below the depth {depth} of the sum")
    pure, consumed = raise_with_cost(f, level)
    res = coboundary_test(pure, level)
    if res.is_coboundary:
        bound = consumed + sum((abs(c) for c in res.potential.values()), Fraction(0))
        return Verdict(TRIVIAL, level=level, bound=bound)
    value = homogenized_evaluate(f, res.witness)
    return Verdict(NONTRIVIAL, level=level, witness=res.witness, cycle=tuple(res.cycle), value=value)


def equivalent(f: FormalSum, g: FormalSum) -> Verdict:
    if f.mode != g.mode:
        raise ModeMismatch(f"cannot compare sums over {f.mode} and {g.mode}")
    return decide(f - g)


def brooks_equal(f: FormalSum, g: FormalSum) -> Verdict:
    """Compare two sums of Brooks quasimorphisms given by their coefficients."""
    if f.mode != g.mode:
        raise ModeMismatch(f"cannot compare sums over {f.mode} and {g.mode}")
    if not f.mode.is_group:
        raise ModeMismatch("Brooks quasimorphisms live on free groups")
    return decide(brooks_to_counting(f - g))


# -- coordinates -------------------------------------------------------------

@dataclass(frozen=True)
class Coordinates:
    """Coefficients of a class in the canonical pure basis at ``level``.

    The basis is every length-``level`` word that is not an edge of the
    deterministic spanning tree of the transition graph.
    """

    level: int
    mode: Mode
    basis: Tuple[Word, ...]
    entries: Dict[Word, Fraction]

    def __getitem__(self, w) -> Fraction:
        return self.entries.get(tuple(w), Fraction(0))

    def reconstruction(self) -> FormalSum:
        return FormalSum(self.mode, {w: c for w, c in self.entries.items() if c})

    def vector(self) -> List[Fraction]:
        return [self[w] for w in self.basis]


def canonical_basis(mode: Mode, level: int) -> Tuple[Word, ...]:
    g = build_graph(mode, level)
    tree = set(spanning_tree(g))
    return tuple(e for e in g.edges if e not in tree)


def expand_pure(f: FormalSum, level: int) -> Coordinates:
    if level < 2 or (f and f.depth > level):
        raise LevelTooSmall(f"expansion needs level >= max(depth, 2), got {level}")
    pure, _ = raise_with_cost(f, level)
    _, residual = solve_potential(pure, level)
    basis = canonical_basis(f.mode, level)
    return Coordinates(level, f.mode, basis, dict(residual.terms))


# -- bases -------------------------------------------------------------------

PURE_COR32 = "PureCor32"
PURE_COR35 = "PureCor35"
COMPATIBLE_THM14 = "CompatibleThm14"
COMPATIBLE_COR36 = "CompatibleCor36"
BROOKS_THM14 = "BrooksThm14"
VARIANTS = (PURE_COR32, PURE_COR35, COMPATIBLE_THM14, COMPATIBLE_COR36, BROOKS_THM14)


def _starts(w: Word, p: Word) -> bool:
    return w[:len(p)] == p


def _ends(w: Word, p: Word) -> bool:
    return len(w) >= len(p) and w[len(w) - len(p):] == p


def _group_pure_excluded(w: Word) -> bool:
    return _starts(w, (1,)) or _starts(w, (2, -1))


def _compatible_group(w: Word) -> bool:
    """Membership in W': avoid the prefixes a1, a2 A1 and the suffixes A1, a1 A2."""
    return not (_group_pure_excluded(w) or _ends(w, (-1,)) or _ends(w, (1, -2)))


def _words_up_to(mode: Mode, level: int) -> List[Word]:
    out = []
    for k in range(level + 1):
        out.extend(words_of_length(mode, k))
    return out


def paper_basis_words(mode: Mode, level: int, variant: str) -> List[Word]:
    """The word sets of the printed basis statements, in Hebrew order.

    Pure variants give words of length exactly ``level``; compatible ones
    give all words of length at most ``level``.  ``BrooksThm14`` gives the
    subset ``{w : w < w^-1}`` (Hebrew order) of ``W ∪ {a1} \\ {e}``.
    """
    if level < 0:
        raise ValueError("level must be >= 0")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {', '.join(VARIANTS)}")
    rank = mode.rank
    if variant == PURE_COR32:
        if mode.is_group:
            raise ModeMismatch(f"{variant} is a monoid basis")
        if level == 0:
            return [()]
        out = [w for w in words_of_length(mode, level) if w[0] != 1] + [(1,) * level]
    elif variant == PURE_COR35:
        if not mode.is_group:
            raise ModeMismatch(f"{variant} is a group basis")
        if level <= 1:
            out = words_of_length(mode, level)
        else:
            out = [w for w in words_of_length(mode, level) if not _group_pure_excluded(w)]
            out.append((1,) * level)
    elif not mode.is_group:
        if variant == BROOKS_THM14:
            raise ModeMismatch(f"{variant} is a group basis")
        out = [w for w in _words_up_to(mode, level) if not (_starts(w, (1,)) or _ends(w, (1,)))]
    else:
        out = [w for w in _words_up_to(mode, level) if _compatible_group(w)]
        if level >= 1 and (variant in (COMPATIBLE_THM14, BROOKS_THM14) or level == 1):
            out.append((-1,))
        if variant == BROOKS_THM14:
            w0 = [w for w in out if w] + ([(1,)] if level >= 1 else [])
            out = [w for w in w0 if hebrew_key(w, rank) < hebrew_key(inverse(w), rank)]
    return sorted(set(out), key=lambda w: (len(w), hebrew_key(w, rank)))


@dataclass(frozen=True)
class BasisCheck:
    """``combination`` is a nonzero trivial combination when ``kind == "Dependent"``."""

    kind: str
    rank: int
    combination: Optional[FormalSum] = None

    @property
    def independent(self) -> bool:
        return self.kind == "Independent"


def _normalize(coeffs: Dict[Word, Fraction], rank: int) -> Dict[Word, Fraction]:
    """Scale to coprime integers whose Hebrew-first entry is positive."""
    den = lcm(*(c.denominator for c in coeffs.values()))
    ints = {w: c * den for w, c in coeffs.items()}
    g = 0
    for c in ints.values():
        g = gcd(g, int(c))
    first = min(ints, key=lambda w: (len(w), hebrew_key(w, rank)))
    sign = 1 if ints[first] > 0 else -1
    return {w: c * sign / g for w, c in ints.items()}


def verify_basis(words: Sequence, level: int, mode: Mode, brooks: bool = False) -> BasisCheck:
    """Exact rank test of ``{rho_w}`` (or ``{phi_w}``) modulo bounded functions.

    On dependency the first combination found, in input order, is returned.
    """
    words = list(dict.fromkeys(make_word(w, mode) for w in words))
    level = max([level, 2] + [len(w) for w in words])
    pivots: List[Tuple[Word, Dict[Word, Fraction], Dict[Word, Fraction]]] = []
    for w in words:
        f = FormalSum.delta(w, mode)
        if brooks:
            f = brooks_to_counting(f)
        vec = dict(expand_pure(f, level).entries)
        combo = {w: Fraction(1)}
        for pw, pvec, pcombo in pivots:
            c = vec.get(pw)
            if c:
                for k, x in pvec.items():
                    y = vec.get(k, 0) - c * x
                    if y:
                        vec[k] = y
                    else:
                        vec.pop(k, None)
                for k, x in pcombo.items():
                    y = combo.get(k, 0) - c * x
                    if y:
                        combo[k] = y
                    else:
                        combo.pop(k, None)
        if not vec:
            combination = FormalSum(mode, _normalize(combo, mode.rank))
            return BasisCheck("Dependent", len(pivots), combination)
        pw = min(vec, key=lambda k: hebrew_key(k, mode.rank))
        inv = 1 / vec[pw]
        vec = {k: x * inv for k, x in vec.items()}
        combo = {k: x * inv for k, x in combo.items()}
        pivots.append((pw, vec, combo))
    return BasisCheck("Independent", len(pivots))


def level_dimension(mode: Mode, level: int) -> int:
    """Dimension of the classes of pure sums of length ``level``."""
    if level <= 1:
        return len(words_of_length(mode, level))
    return len(canonical_basis(mode, level))


def greedy_completion(words: Sequence, level: int, mode: Mode) -> List[Word]:
    """A basis of the classes of depth <= ``level`` keeping an independent part of ``words``.

    Words are taken greedily in the given order, then topped up from all
    words of length <= ``level`` in length-then-Hebrew order.
    """
    chosen: List[Word] = []
    for w in list(words) + _words_up_to(mode, level):
        w = make_word(w, mode)
        if w in chosen or len(w) > level:
            continue
        if verify_basis(chosen + [w], level, mode).independent:
            chosen.append(w)
    return chosen


# -- the printed tree algorithm ----------------------------------------------

@dataclass(frozen=True)
class PaperVerdict:
    """Verdict of the tree algorithm as printed, with its operation log.

    ``stuck_depth`` is set when the algorithm stops because a round did not
    lower the depth; ``unbalanced`` is the pair that justifies that stop,
    or ``None`` if the final tree is not actually unbalanced.
    """

    kind: str
    trace: Tuple[str, ...] = ()
    final: Optional[WeightedTree] = None
    stuck_depth: Optional[int] = None
    unbalanced: Optional[RelatedPair] = None

    @property
    def is_trivial(self) -> bool:
        return self.kind == TRIVIAL


def _transfer_target(father: Word, mode: Mode) -> bool:
    if father[:1] == (1,):
        return True
    # the prefix a2 A1 is only visible on fathers with two letters or more
    return mode.is_group and len(father) >= 2 and father[:2] == (2, -1)


def paper_algorithm(t) -> PaperVerdict:
    """The tree-based decision procedure, transcribed step by step."""
    a = t if isinstance(t, WeightedTree) else WeightedTree(t)
    mode = a.mode
    trace: List[str] = []
    level = a.depth
    while level != NEG_INF and level >= 2:
        for b in brotherhoods_at(a, level):
            if _transfer_target(b.father, mode):
                a = transfer(a, b)
                trace.append(f"transfer {b}")
        for b in brotherhoods_at(a, level):
            if b.is_constant(a):
                a = complete_reduce(a, b)
                trace.append(f"reduce {b}")
        new = a.depth
        if new == level:
            trace.append(f"stuck at depth {level}")
            return PaperVerdict(NONTRIVIAL, tuple(trace), a, level, find_unbalanced(a))
        level = new
    root = a[()]
    ok = all(a[(s,)] == -root for s in mode.letters())
    trace.append("final check " + ("passed" if ok else "failed"))
    return PaperVerdict(TRIVIAL if ok else NONTRIVIAL, tuple(trace), a)


# -- special words -----------------------------------------------------------

def special_words(mode: Mode, level: int) -> List[Word]:
    """Words indexing the certificates of the lower bound, in Hebrew order."""
    if level < 1:
        raise ValueError("special words need level >= 1")
    if mode.is_group:
        keep = [w for w in words_of_length(mode, level) if not _group_pure_excluded(w)]
    else:
        keep = [w for w in words_of_length(mode, level) if w[0] != 1]
    keep.append((1,) * level)
    return sorted(set(keep), key=lambda w: hebrew_key(w, mode.rank))


def s_map(w, level: int, mode: Mode) -> Word:
    """The suffix appended to a special word before taking its certificate."""
    w = make_word(w, mode)
    if w not in set(special_words(mode, level)):
        raise NotSpecialWord(f"{w!r} is not a special word at level {level}")
    power = (1,) * level
    if not mode.is_group:
        return power
    starts, ends = w[0] == -1, w[-1] == -1
    if not starts and not ends:
        return power
    if not starts:
        return (2,) + power
    if not ends:
        return power + (2,)
    return (2,) + power + (2,)


def certificate_matrix(mode: Mode, level: int) -> List[List[int]]:
    """Rows: certificates of ``w s(w)``; columns: special words ``v``; Hebrew order."""
    ws = special_words(mode, level)
    return [[cyclic_count(v, w + s_map(w, level, mode)) for v in ws] for w in ws]
