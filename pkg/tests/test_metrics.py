import functools
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from unirec.metrics import levenshtein, normalized_ed


def oracle_levenshtein(a: str, b: str) -> int:
    """Independent full-matrix DP used only to check the implementation."""

    @functools.lru_cache(maxsize=None)
    def dist(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        return min(
            dist(i - 1, j) + 1,
            dist(i, j - 1) + 1,
            dist(i - 1, j - 1) + (a[i - 1] != b[j - 1]),
        )

    return dist(len(a), len(b))


ALPHABET = "abcxyz你好世界数学公式αβ"


def random_string(rng, max_len=64):
    return "".join(
        rng.choice(ALPHABET) for _ in range(rng.randint(0, max_len))
    )


def test_kitten_sitting():
    assert levenshtein("kitten", "sitting") == 3
    assert normalized_ed("kitten", "sitting") == 3 / 7


def test_identity_and_insertions():
    assert levenshtein("abc", "abc") == 0
    assert levenshtein("", "abc") == 3
    assert levenshtein("abc", "") == 3


def test_against_oracle():
    rng = random.Random(7)
    for _ in range(400):
        a, b = random_string(rng, 24), random_string(rng, 24)
        assert levenshtein(a, b) == oracle_levenshtein(a, b)


def test_normalized_bounds():
    assert normalized_ed("", "") == 0.0
    assert normalized_ed("ab", "cd") == 1.0
    assert 0.0 <= normalized_ed("abc", "xyzuvw") <= 1.0


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=24), st.text(max_size=24))
def test_symmetry_and_zero_iff_equal(a, b):
    assert levenshtein(a, b) == levenshtein(b, a)
    assert (levenshtein(a, b) == 0) == (a == b)
    assert (normalized_ed(a, b) == 0.0) == (a == b)


@settings(max_examples=150, deadline=None)
@given(
    st.text(max_size=12), st.text(max_size=12), st.text(max_size=12)
)
def test_triangle_inequality(a, b, c):
    assert levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c)
