import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aqwalk.sequences import (
    BinaryWord,
    SequenceKind,
    fibonacci_word,
    homogeneous_word,
    make_word,
    random_word,
    rudin_shapiro_word,
    thue_morse_word,
)


# --- independent per-symbol oracles -------------------------------------------------

def fib_by_substitution(length):
    """Iterate 0 -> 01, 1 -> 0 on strings."""
    w = "0"
    while len(w) < length:
        w = "".join("01" if c == "0" else "0" for c in w)
    return [int(c) for c in w[:length]]


def tm_by_digits(n):
    return bin(n).count("1") % 2


def rs_value_by_digits(n):
    """(-1)^u with u the sum of eps_k * eps_{k+1} over binary digits."""
    digits = [int(c) for c in reversed(bin(n)[2:])] if n else []
    u = sum(digits[k] * digits[k + 1] for k in range(len(digits) - 1))
    return (-1) ** u


# --- listed prefixes ------------------------------------------------------------------

def test_fibonacci_prefixes():
    assert str(fibonacci_word(25)) == "0 1 0 0 1 0 1 0 0 1 0 0 1 0 1 0 0 1 0 1 0 0 1 0 0"
    assert str(fibonacci_word(8)) == "0 1 0 0 1 0 1 0"
    assert str(fibonacci_word(1)) == "0"


def test_thue_morse_prefixes():
    assert str(thue_morse_word(25)) == "0 1 1 0 1 0 0 1 1 0 0 1 0 1 1 0 1 0 0 1 0 1 1 0 0"
    assert str(thue_morse_word(1)) == "0"


def test_rudin_shapiro_prefix_as_signs():
    w = rudin_shapiro_word(16)
    assert w.as_signs().tolist() == [1, 1, 1, -1, 1, 1, -1, 1, 1, 1, 1, -1, -1, -1, 1, -1]
    assert w[0] == 0
    assert w[3] == 1


@pytest.mark.parametrize("n", range(1, 15))
def test_thue_morse_doubling(n):
    w = thue_morse_word(2**n).symbols
    half = w[: 2 ** (n - 1)]
    assert np.array_equal(w, np.concatenate([half, 1 - half]))


# --- oracle agreement at length 1e4 -------------------------------------------------------

def test_all_words_match_digit_oracles():
    N = 10**4
    assert fibonacci_word(N).symbols.tolist() == fib_by_substitution(N)
    assert thue_morse_word(N).symbols.tolist() == [tm_by_digits(n) for n in range(N)]
    assert rudin_shapiro_word(N).as_signs().tolist() == [rs_value_by_digits(n) for n in range(N)]


def test_fibonacci_prefix_property():
    a, b = 1, 2
    while b < 10**5:
        assert np.array_equal(fibonacci_word(b).symbols[:a], fibonacci_word(a).symbols)
        a, b = b, a + b


@settings(max_examples=200)
@given(st.integers(min_value=0, max_value=10**5))
def test_thue_morse_recurrences(n):
    w = thue_morse_word(2 * n + 2).symbols
    assert w[2 * n] == w[n]
    assert w[2 * n + 1] == 1 - w[n]


@settings(max_examples=200)
@given(st.integers(min_value=0, max_value=10**5))
def test_rudin_shapiro_recurrences(n):
    v = rudin_shapiro_word(2 * n + 2).as_signs()
    assert v[2 * n] == v[n]
    assert v[2 * n + 1] == v[n] * (-1) ** n


@settings(max_examples=50)
@given(st.sampled_from(list(SequenceKind)), st.integers(1, 3000), st.integers(0, 2**31))
def test_generators_are_pure_and_exact_length(kind, length, seed):
    a = make_word(kind, length, seed)
    b = make_word(kind, length, seed)
    assert len(a) == length
    assert np.array_equal(a.symbols, b.symbols)
    assert set(np.unique(a.symbols)) <= {0, 1}
    assert a.kind is kind


def test_homogeneous_all_zero():
    assert not homogeneous_word(100).symbols.any()


def test_random_word_reproducible_and_fair():
    a = random_word(10**5, 11)
    assert np.array_equal(a.symbols, random_word(10**5, 11).symbols)
    assert abs(a.symbols.mean() - 0.5) < 0.01
    assert not np.array_equal(a.symbols, random_word(10**5, 12).symbols)


@pytest.mark.parametrize("gen", [fibonacci_word, thue_morse_word, rudin_shapiro_word, homogeneous_word])
def test_zero_length_rejected(gen):
    with pytest.raises(ValueError):
        gen(0)


def test_random_zero_length_rejected():
    with pytest.raises(ValueError):
        random_word(0, 1)


def test_words_are_read_only():
    w = fibonacci_word(10)
    with pytest.raises(ValueError):
        w.symbols[0] = 1


def test_kind_parsing():
    assert SequenceKind.parse("Thue_Morse") is SequenceKind.THUE_MORSE
    with pytest.raises(ValueError):
        SequenceKind.parse("cantor")


def test_binary_word_rejects_other_symbols():
    with pytest.raises(ValueError):
        BinaryWord(np.array([0, 2]), SequenceKind.RANDOM)
