import json
import random
from pathlib import Path

import pytest
from hypothesis import given

from conftest import G2, GRIGORCHUK, M2, M3, sums
from families import pure_family
from countfun.certificates import homogenized_evaluate
from countfun.decision import (
    BROOKS_THM14,
    COMPATIBLE_COR36,
    COMPATIBLE_THM14,
    NONTRIVIAL,
    PURE_COR32,
    PURE_COR35,
    TRIVIAL,
    brooks_equal,
    canonical_basis,
    certificate_matrix,
    decide,
    equivalent,
    expand_pure,
    greedy_completion,
    level_dimension,
    paper_algorithm,
    paper_basis_words,
    s_map,
    special_words,
    verify_basis,
)
from countfun.errors import LevelTooSmall, ModeMismatch, NotSpecialWord
from countfun.formal import FormalSum, evaluate, left_extension, right_extension
from countfun.oracle import growth_profile, random_sum, random_word
from countfun.words import cyclic_reduce, format_word, inverse, parse_word, words_of_length

GOLDEN = Path(__file__).parent / "golden"


def ws(text, mode):
    return [parse_word(t, mode) for t in text.split(",")]


def test_decide_examples(grigorchuk):
    assert decide(grigorchuk).is_trivial
    assert decide(FormalSum.zero(M2)).kind == TRIVIAL
    v = decide(FormalSum(M2, {(1, 2): 1}))
    assert v.kind == NONTRIVIAL
    assert v.witness.letters == (2, 1)
    assert v.value == 1


@pytest.mark.parametrize("mode", [M2, G2])
def test_relations_decide_trivial(mode):
    for k in range(4):
        for w in words_of_length(mode, k):
            assert decide(left_extension(w, mode)).is_trivial
            assert decide(right_extension(w, mode)).is_trivial


def test_level_argument():
    f = FormalSum(M2, {(1, 2): 1})
    assert decide(f, level=4).kind == NONTRIVIAL
    with pytest.raises(LevelTooSmall):
        decide(f, level=1)


@given(sums(M3, max_len=1))
def test_level_one_agrees(f):
    assert decide(f, level=1).kind == decide(f).kind


@given(sums(G2, max_len=1))
def test_level_one_agrees_group(f):
    assert decide(f, level=1).kind == decide(f).kind


def test_equivalent_examples():
    e = FormalSum(M3, {(): 1})
    letters = FormalSum(M3, {(s,): 1 for s in M3.letters()})
    assert equivalent(e, letters).is_trivial
    f = FormalSum(M2, {(1, 2): 3, (2,): -1})
    assert equivalent(f, f).is_trivial
    assert not equivalent(FormalSum(M2, {(1,): 1}), FormalSum(M2, {(2,): 1})).is_trivial
    with pytest.raises(ModeMismatch):
        equivalent(FormalSum.zero(M2), FormalSum.zero(G2))


def test_brooks_equal_examples():
    for w in [(1,), (1, 2), (1, -2, -1, -1)]:
        assert brooks_equal(FormalSum(G2, {w: 1}), FormalSum(G2, {inverse(w): -1})).is_trivial
    zero = FormalSum.zero(G2)
    assert brooks_equal(FormalSum(G2, GRIGORCHUK), zero).is_trivial
    assert not brooks_equal(FormalSum(G2, {(1,): 1}), zero).is_trivial
    with pytest.raises(ModeMismatch):
        brooks_equal(FormalSum.zero(M2), FormalSum.zero(M2))


@pytest.mark.parametrize("mode", [M2, M3, G2])
def test_trivial_bound_holds(mode):
    rng = random.Random(3)
    for _ in range(40):
        f = FormalSum.zero(mode)
        for _ in range(3):
            w = random_word(mode, rng, rng.randint(0, 2))
            f = f + left_extension(w, mode).scale(rng.randint(-2, 2))
        v = decide(f)
        assert v.is_trivial
        for _ in range(30):
            assert abs(evaluate(f, random_word(mode, rng, rng.randint(0, 60)))) <= v.bound


def test_nontrivial_witness_rechecks():
    rng = random.Random(5)
    for mode in (M2, G2):
        for _ in range(80):
            f = random_sum(mode, rng, 3, 3)
            v = decide(f)
            if not v.is_trivial:
                assert homogenized_evaluate(f, v.witness) == v.value != 0
                assert len(v.cycle) == len(v.witness)


def test_expand_golden():
    doc = json.loads((GOLDEN / "coords_m2_a1_l2.json").read_text())
    c = expand_pure(FormalSum(M2, {(1,): 1}), doc["level"])
    assert [format_word(w) for w in c.basis] == doc["basis"]
    assert {format_word(w): str(c[w]) for w in c.basis} == doc["coordinates"]
    assert decide(FormalSum(M2, {(1,): 1}) - c.reconstruction()).is_trivial


def test_expand_examples():
    assert all(x == 0 for x in expand_pure(left_extension((1, 2), G2), 3).vector())
    assert all(x == 0 for x in expand_pure(FormalSum.zero(M2), 2).vector())
    with pytest.raises(LevelTooSmall):
        expand_pure(FormalSum(M2, {(1, 2, 1): 1}), 2)
    with pytest.raises(LevelTooSmall):
        expand_pure(FormalSum(M2, {(1,): 1}), 1)


@given(sums(G2, max_len=3))
def test_expand_supported_on_basis(f):
    c = expand_pure(f, 3)
    assert set(c.entries) <= set(c.basis)
    assert decide(f - c.reconstruction()).is_trivial


@pytest.mark.parametrize("mode,level", [(M2, 2), (M2, 4), (M3, 3), (G2, 2), (G2, 3)])
def test_canonical_basis_size(mode, level):
    n = mode.rank
    if mode.is_group:
        expected = 2 * n * (2 * n - 1) ** (level - 2) * (2 * n - 2) + 1
    else:
        expected = (n - 1) * n ** (level - 1) + 1
    assert len(canonical_basis(mode, level)) == level_dimension(mode, level) == expected


def test_paper_basis_examples():
    assert set(paper_basis_words(M2, 3, PURE_COR32)) == set(ws("a2 a1 a1,a2 a1 a2,a2 a2 a1,a2 a2 a2,a1 a1 a1", M2))
    assert len(paper_basis_words(M2, 3, PURE_COR32)) == 5
    assert paper_basis_words(M2, 2, COMPATIBLE_THM14) == [(), (2,), (2, 2)]
    assert len(paper_basis_words(G2, 2, PURE_COR35)) == 9
    assert (1, 1) in paper_basis_words(G2, 2, PURE_COR35)
    thm = paper_basis_words(G2, 2, COMPATIBLE_THM14)
    assert len(thm) == 10 and (-1,) in thm
    assert len(paper_basis_words(G2, 2, COMPATIBLE_COR36)) == 9
    with pytest.raises(ModeMismatch):
        paper_basis_words(G2, 2, PURE_COR32)
    with pytest.raises(ValueError):
        paper_basis_words(M2, 2, "Nope")


def test_brooks_variant_picks_one_of_each_pair():
    words = paper_basis_words(G2, 2, BROOKS_THM14)
    assert (1,) in words or (-1,) in words
    assert not any(inverse(w) in words for w in words)


@pytest.mark.parametrize("level", range(1, 6))
def test_pure_cor32_is_basis(level):
    words = paper_basis_words(M2, level, PURE_COR32)
    check = verify_basis(words, level, M2)
    assert check.independent
    if level >= 2:
        assert len(words) == level_dimension(M2, level)


@pytest.mark.parametrize("level", [2, 3])
def test_pure_cor35_is_basis(level):
    words = paper_basis_words(G2, level, PURE_COR35)
    assert verify_basis(words, level, G2).independent
    assert len(words) == level_dimension(G2, level)


@pytest.mark.parametrize("level", [2, 3])
def test_monoid_compatible_is_basis(level):
    words = paper_basis_words(M2, level, COMPATIBLE_THM14)
    assert verify_basis(words, level, M2).independent
    assert len(words) == level_dimension(M2, level)


def test_group_compatible_sets_are_dependent(dependency_f):
    check = verify_basis(paper_basis_words(G2, 2, COMPATIBLE_THM14), 2, G2)
    assert check.kind == "Dependent"
    assert check.combination == -dependency_f
    assert decide(check.combination).is_trivial
    alt = verify_basis(paper_basis_words(G2, 2, COMPATIBLE_COR36), 2, G2)
    assert alt.kind == "Dependent" and alt.rank == 8
    assert decide(alt.combination).is_trivial


def test_dependent_when_too_many():
    words = words_of_length(M2, 2) + [(1,)]
    check = verify_basis(words, 2, M2)
    assert check.kind == "Dependent"
    assert decide(check.combination).is_trivial


def test_greedy_completion_spans():
    for mode, level in [(M2, 2), (G2, 2)]:
        basis = greedy_completion(paper_basis_words(mode, level, COMPATIBLE_THM14), level, mode)
        assert verify_basis(basis, level, mode).independent
        # every word of length <= level is in the span
        for k in range(level + 1):
            for w in words_of_length(mode, k):
                assert not verify_basis(basis + [w], level, mode).independent or w in basis


def test_paper_algorithm_examples(dependency_f):
    v = paper_algorithm(FormalSum.zero(M2))
    assert v.is_trivial and v.trace == ("final check passed",)
    v = paper_algorithm(dependency_f)
    assert v.kind == NONTRIVIAL and v.stuck_depth == 2
    assert decide(dependency_f).is_trivial
    assert paper_algorithm(FormalSum(M2, {(1, 2): 1})).kind == NONTRIVIAL
    assert paper_algorithm(right_extension((2,), M2)).is_trivial


def test_paper_algorithm_monoid_pure_length_three():
    for f in pure_family(M2, 3):
        assert paper_algorithm(f).kind == decide(f).kind


def test_paper_algorithm_group_grigorchuk(grigorchuk):
    # recorded for the report; the authoritative answer is decide
    assert decide(grigorchuk).is_trivial
    paper_algorithm(grigorchuk)


def test_special_words_examples():
    assert set(special_words(M2, 2)) == {(2, 1), (2, 2), (1, 1)}
    for level in (1, 2, 3):
        assert len(special_words(M3, level)) == 2 * 3 ** (level - 1) + 1
    assert len(special_words(G2, 2)) == 9
    w = parse_word("A1 a2 A1", G2)
    assert s_map(w, 3, G2) == (2, 1, 1, 1, 2)
    with pytest.raises(NotSpecialWord):
        s_map((1, 2), 2, M2)


@pytest.mark.parametrize("level", [1, 2, 3])
def test_special_words_close_up_cyclically(level):
    for w in special_words(G2, level):
        core, conj = cyclic_reduce(w + s_map(w, level, G2), G2)
        assert conj == ()


def test_certificate_matrix_small():
    # rows <a1 a1>_1 and <a2 a1>_1
    assert certificate_matrix(M2, 1) == [[2, 0], [1, 1]]


def test_growth_matches_verdict_on_samples():
    rng = random.Random(11)
    for _ in range(30):
        f = random_sum(M2, rng, 2, 3)
        prof = growth_profile(f, 10)
        if decide(f).is_trivial:
            assert prof.maxima[10] <= decide(f).bound
        else:
            assert prof.maxima[10] > prof.maxima[4]
