import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from unitri.errors import UsageError
from unitri.group import GeneratorStep, GeneratorWord, UniTriMatrix, eval_word, generators
from unitri.paths import (
    class_words,
    length_envelope,
    read_words,
    word_Ai,
    word_class_element,
    word_second_diag,
    word_stats,
    word_superdiag_power,
    write_words,
)
from unitri.superclass import conjugacy_class_elements
from unitri.walks import closest_odd_sqrt

E = UniTriMatrix.elementary


def test_superdiag_power_examples():
    assert len(word_superdiag_power(2, 0, 4, 7)) == 0
    assert word_superdiag_power(2, 1, 4, 7).steps == ((2, 1),)
    w = word_superdiag_power(1, 5, 3, 7)
    assert w.steps == ((1, -1), (1, -1))
    assert eval_word(w, 3, 7) == E(3, 7, 1, 2, 5)


@given(st.integers(2, 6), st.sampled_from([3, 5, 7, 11, 13]), st.data())
def test_superdiag_power_law(n, p, data):
    i = data.draw(st.integers(1, n - 1))
    c = data.draw(st.integers(0, p - 1))
    w = word_superdiag_power(i, c, n, p)
    assert eval_word(w, n, p) == E(n, p, i, i + 1, c)
    assert len(w) == min(c, p - c)


def test_second_diag_examples():
    assert len(word_second_diag(1, 0, 4, 5)) == 0
    assert word_second_diag(2, 1, 4, 5).steps == ((3, -1), (2, 1), (3, 1), (2, -1))
    w = word_second_diag(1, 5, 3, 7)
    assert len(w) == 12 and eval_word(w, 3, 7) == E(3, 7, 1, 3, 5)
    with pytest.raises(UsageError):
        word_second_diag(3, 1, 4, 5)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47])
def test_second_diag_length_law(p):
    n = 4
    for i in (1, 2):
        for b in range(p):
            w = word_second_diag(i, b, n, p)
            assert eval_word(w, n, p) == E(n, p, i, i + 2, b)
            assert len(w) % 2 == 0
            assert len(w) <= 12 * math.isqrt(b) + 10


def test_ladder_examples():
    assert word_Ai(1, 4).steps == ((1, 1),)
    assert word_Ai(1, 4, sign=-1).steps == ((1, -1),)
    w = word_Ai(3, 6)
    assert w.steps == ((1, 1), (2, 1), (3, 1), (2, -1), (1, -1))
    assert eval_word(w, 6, 5) == UniTriMatrix.from_entries(6, 5, {(3, 4): 1, (2, 4): 1, (1, 4): 1})
    a = closest_odd_sqrt(5)
    got = eval_word(word_Ai(2, 4, coeff=a), 4, 5)
    assert got == UniTriMatrix.from_entries(4, 5, {(2, 3): a, (1, 3): a})
    with pytest.raises(UsageError):
        word_Ai(4, 4)


def test_class_word_small_examples():
    assert len(word_class_element(E(2, 5, 1, 2, 1), 1, 1)) == 1
    # a_1 = 2 above, b_1 = 3 to the right, block 2 * 3 / 1
    p = 7
    B = UniTriMatrix.from_entries(4, p, {(2, 3): 1, (1, 3): 2, (2, 4): 3, (1, 4): 6})
    w = word_class_element(B, 2, 1)
    assert eval_word(w, 4, p) == B and len(w) % 2 == 1


def test_class_word_coeff_a_n3_p5():
    p, a = 5, closest_odd_sqrt(5)
    for i in (1, 2):
        for B in conjugacy_class_elements(i, a, 3, p):
            w = word_class_element(B, i, a)
            assert eval_word(w, 3, p) == B and len(w) % 2 == 1


def test_class_word_input_checks():
    B = E(3, 5, 1, 2, 1)
    with pytest.raises(UsageError):
        word_class_element(B, 1, 2)  # 2 is neither +-1 nor +-a
    with pytest.raises(UsageError):
        word_class_element(B, 2, 1)  # wrong class
    with pytest.raises(UsageError):
        word_class_element(UniTriMatrix.from_entries(3, 5, {(1, 2): 1, (2, 3): 1}), 1, 1)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("p", [3, 5, 7])
def test_every_class_element_has_an_odd_word(n, p):
    a = closest_odd_sqrt(p)
    seen = 0
    for i in range(1, n):
        for coeff in (1, -1, a, -a):
            for B in conjugacy_class_elements(i, coeff % p, n, p):
                w = word_class_element(B, i, coeff)
                assert eval_word(w, n, p) == B
                assert len(w) % 2 == 1
                assert len(w) <= length_envelope(n, p)
                seen += 1
    assert seen == 4 * (n - 1) * p ** (n - 2)


@pytest.mark.parametrize("n,p", [(3, 11), (4, 11), (3, 13), (6, 3)])
def test_class_words_beyond_the_small_grid(n, p):
    words = class_words(n, p)
    for B, _, _, w in list(words.values())[::7]:
        assert eval_word(w, n, p) == B and len(w) % 2 == 1
        assert len(w) <= length_envelope(n, p)


def test_class_words_cover_support_once():
    words = class_words(4, 3)
    # a = 1 merges C_i(a) into C_i(1): 2 * 3 * 9 distinct elements
    assert len(words) == 54


def test_word_stats_examples():
    st0 = word_stats(GeneratorWord())
    assert (st0.length, st0.parity, st0.max_multiplicity) == (0, 0, 0)
    assert all(st0.count(z) == 0 for z in generators(4))
    s = word_stats(word_second_diag(2, 1, 4, 5))
    assert s.length == 4 and s.parity == 0
    assert s.multiplicity == {GeneratorStep(3, 1): 1, GeneratorStep(3, -1): 1, GeneratorStep(2, 1): 1, GeneratorStep(2, -1): 1}


def test_multiplicity_threshold_n4_p7():
    p = 7
    worst = max(word_stats(w).max_multiplicity for _, _, _, w in class_words(4, p).values())
    assert worst <= 20 * (math.isqrt(p) + 1)


@given(st.lists(st.tuples(st.integers(1, 5), st.sampled_from((1, -1))), max_size=40))
def test_multiplicities_sum_to_length(steps):
    w = GeneratorWord.of(steps)
    s = word_stats(w)
    assert sum(s.multiplicity.values()) == s.length == len(steps)
    assert s.parity == len(steps) % 2


@given(st.data(), st.sampled_from([(3, 5), (4, 5), (4, 7), (5, 3), (5, 11)]))
def test_random_class_element(data, params):
    n, p = params
    a = closest_odd_sqrt(p)
    i = data.draw(st.integers(1, n - 1))
    coeff = data.draw(st.sampled_from((1, -1, a, -a)))
    x = coeff % p
    above = {(j, i + 1): data.draw(st.integers(0, p - 1)) for j in range(1, i)}
    right = {(i, k): data.draw(st.integers(0, p - 1)) for k in range(i + 2, n + 1)}
    ent = {(i, i + 1): x, **above, **right}
    for (j, _), aj in above.items():
        for (_, k), bk in right.items():
            ent[(j, k)] = aj * bk * pow(x, -1, p)
    B = UniTriMatrix.from_entries(n, p, ent)
    w = word_class_element(B, i, coeff)
    assert eval_word(w, n, p) == B and len(w) % 2 == 1


def test_word_file_round_trip(tmp_path):
    words = [w for _, _, _, w in class_words(3, 5).values()] + [GeneratorWord()]
    path = tmp_path / "words.txt"
    write_words(path, words)
    text = path.read_text()
    assert text.splitlines()[0].split()[0][0] in "+-"
    assert read_words(path) == words
