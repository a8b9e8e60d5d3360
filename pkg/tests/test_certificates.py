import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import G2, M2, M3, sums, words
from countfun.certificates import certificate, default_bound, homogenized_evaluate, witness_search
from countfun.decision import decide
from countfun.errors import NonReducedWord
from countfun.formal import FormalSum, evaluate, left_extension, raise_to_level, right_extension
from countfun.oracle import random_sum, random_word
from countfun.words import CyclicWord, cyclic_count, cyclic_reduce, parse_word, power, rotations, words_of_length


def test_certificate_printed_example():
    c = certificate(parse_word("a1 a2 a1 a1 a2 a2", M2), 3, M2)
    expected = ["a1 a2 a1", "a2 a1 a1", "a1 a1 a2", "a1 a2 a2", "a2 a2 a1", "a2 a1 a2"]
    assert list(c.entries) == [parse_word(x, M2) for x in expected]
    assert set(c.entries.values()) == {1}
    assert c.format() == "[a1 a2 a1] + [a2 a1 a1] + [a1 a1 a2] + [a1 a2 a2] + [a2 a2 a1] + [a2 a1 a2]"


def test_certificate_single_letter():
    for level in (1, 2, 5):
        c = certificate((1,), level, M2)
        assert c.entries == {(1,) * level: 1}
        assert homogenized_evaluate(FormalSum(M2, {(1,) * level: 1}), (1,)) == 1


def test_certificate_rejects_unreduced_group_word():
    with pytest.raises(NonReducedWord):
        certificate((1, 2, -1), 2, G2)


def test_homogenized_examples():
    for k in range(1, 8):
        w = (1,) * k + (2,) + (-1,) * k
        assert homogenized_evaluate(FormalSum(G2, {(1,): 1}), w) == 0
    assert homogenized_evaluate(FormalSum(M2, {(1, 2, 1): 1}), CyclicWord.from_word((1, 2), M2)) == 1
    assert homogenized_evaluate(FormalSum(M2, {(): 3}), (1, 2, 2)) == 9


@pytest.mark.parametrize("mode", [M2, G2])
def test_relations_homogenize_to_zero(mode):
    rng = random.Random(2)
    for _ in range(100):
        w = random_word(mode, rng, rng.randint(0, 3))
        c, _ = cyclic_reduce(random_word(mode, rng, rng.randint(1, 12)), mode)
        if not c:
            continue
        assert homogenized_evaluate(left_extension(w, mode), c) == 0
        assert homogenized_evaluate(right_extension(w, mode), c) == 0


@given(sums(G2), words(G2, 1, 8))
def test_rotation_invariance(f, w):
    core, _ = cyclic_reduce(w, G2)
    if not core:
        return
    values = {homogenized_evaluate(f, r) for r in rotations(core)}
    assert len(values) == 1


@given(sums(G2, max_len=3), words(G2, 1, 5))
def test_limit_of_powers(f, w):
    core, _ = cyclic_reduce(w, G2)
    if not core:
        return
    h = homogenized_evaluate(f, core)
    # evaluate(f, w^k) is affine in k once k exceeds the pattern length
    k0 = 6
    a = evaluate(f, power(w, k0, G2))
    b = evaluate(f, power(w, k0 + 1, G2))
    c = evaluate(f, power(w, 50, G2))
    assert b - a == h
    assert c - a == (50 - k0) * h


@pytest.mark.parametrize("mode", [M2, M3, G2])
def test_certificate_vanishes_on_pure_relations(mode):
    rng = random.Random(4)
    for _ in range(60):
        level = rng.randint(2, 4)
        w = random_word(mode, rng, level - 1)
        rels = [raise_to_level(left_extension(w, mode), level), raise_to_level(right_extension(w, mode), level)]
        core, _ = cyclic_reduce(random_word(mode, rng, rng.randint(1, 15)), mode)
        if not core:
            continue
        cert = certificate(core, level, mode)
        assert all(cert.pair(r) == 0 for r in rels)


@given(words(G2, 1, 12), st.integers(1, 5))
def test_certificate_total_is_length(w, level):
    core, _ = cyclic_reduce(w, G2)
    if not core:
        return
    cert = certificate(core, level, G2)
    assert cert.total() == len(core)
    for v, k in cert.entries.items():
        assert k == cyclic_count(v, core)


@pytest.mark.parametrize("mode", [M2, G2])
def test_pairing_equals_homogenization(mode):
    rng = random.Random(8)
    for _ in range(1000):
        level = rng.randint(1, 3)
        f = random_sum(mode, rng, level, 3)
        pure = raise_to_level(f, level) if f else f
        core, _ = cyclic_reduce(random_word(mode, rng, rng.randint(1, 10)), mode)
        if not core:
            continue
        assert certificate(core, level, mode).pair(pure) == homogenized_evaluate(pure, core)


def test_witness_examples(grigorchuk):
    w = witness_search(FormalSum(M2, {(1, 2): 1}))
    assert w == CyclicWord.from_word((1, 2), M2)
    assert witness_search(grigorchuk) is None
    assert witness_search(FormalSum(M2, {(): 1})).letters == (1,)
    assert witness_search(FormalSum.zero(G2)) is None
    assert default_bound(grigorchuk) == 4


def test_witness_is_shortest():
    rng = random.Random(9)
    for _ in range(60):
        f = random_sum(M2, rng, 3, 3)
        w = witness_search(f)
        if w is None:
            continue
        assert homogenized_evaluate(f, w) != 0
        for k in range(1, len(w)):
            for u in words_of_length(M2, k):
                assert homogenized_evaluate(f, u) == 0


@pytest.mark.parametrize("mode", [M2, G2])
def test_witness_agrees_with_decide(mode):
    rng = random.Random(10)
    for _ in range(150):
        f = random_sum(mode, rng, 2, 3)
        v = decide(f)
        w = witness_search(f)
        assert (w is None) == v.is_trivial
        if w is not None:
            assert len(w) <= len(v.witness)


def test_zero_fraction_handling():
    f = FormalSum(M2, {(1,): Fraction(1, 3), (2,): Fraction(-1, 3)})
    assert witness_search(f) is not None
