"""Substitution action, abelianization, Perron data, spectral classes,
legal words, shift conjugacy, tile lengths."""

import pytest

from faultline.abelian import mat
from faultline.errors import (
    DegenerateEigenspaceError,
    HypothesisError,
    NoPerronRootError,
    ResourceCapError,
    ValidationError,
)
from faultline.substitution import (
    SpectralKind,
    Substitution,
    perron_data,
    shift_conjugacy,
    spectral_classify,
    tile_lengths,
)

from conftest import random_substitution, rng_for


def brute_iterate(rules, word, k):
    """Independent string-level iteration oracle."""
    for _ in range(k):
        word = "".join(rules[c] for c in word)
    return word


def test_apply_examples(sigma1):
    assert sigma1.text(sigma1.apply("a")) == "ba"
    assert sigma1.apply(()) == ()
    assert sigma1.text(sigma1.apply("ba")) == "aaaba"


def test_apply_rejects_unknown_letter(sigma1):
    with pytest.raises(ValidationError):
        sigma1.apply("ax")
    with pytest.raises(ValidationError):
        sigma1.apply([5])


def test_iterate_examples(sigma1, sigma2):
    assert sigma1.text(sigma1.iterate("a", 2)) == "aaaba"
    assert sigma1.text(sigma1.iterate("a", 0)) == "a"
    got = sigma2.text(sigma2.iterate("a", 3))
    want = brute_iterate({"a": "ab", "b": "aaa"}, "a", 3)
    assert got == want and len(got) == 11


def test_iterate_matches_oracle_random():
    rng = rng_for("iterate-oracle")
    for _ in range(20):
        s = random_substitution(rng, rng.choice((2, 3)))
        rules = {l.name: s.text(r) for l, r in zip(s.letters, s.rules)}
        seed = rng.choice(s.alphabet)
        k = rng.randint(0, 4)
        assert s.text(s.iterate(seed, k)) == brute_iterate(rules, seed, k)


def test_iterate_composes(sigma1):
    w = sigma1.iterate("a", 2)
    assert sigma1.iterate("a", 5) == sigma1.iterate(w, 3)


def test_iterate_word_cap(sigma1):
    with pytest.raises(ResourceCapError):
        sigma1.iterate("a", 30, max_len=10 ** 4)


def test_abelianization_examples(sigma1, period_doubling):
    assert sigma1.matrix().tolist() == [[1, 3], [1, 0]]
    ident = Substitution(["a", "b"], {"a": "a", "b": "b"})
    assert ident.matrix().tolist() == [[1, 0], [0, 1]]
    assert period_doubling.matrix().tolist() == [[1, 2], [1, 0]]


def test_letter_counts_transform_by_matrix(sigma1):
    rng = rng_for("counts")
    m = sigma1.matrix()
    for _ in range(50):
        w = tuple(rng.randint(0, 1) for _ in range(rng.randint(0, 30)))
        img = sigma1.apply(w)
        before = [w.count(0), w.count(1)]
        after = [img.count(0), img.count(1)]
        assert after == [sum(int(m[i, j]) * before[j] for j in range(2)) for i in range(2)]
        assert len(img) == sum(after)


def test_perron_examples(sigma1, period_doubling):
    pd = sigma1.perron()
    assert pd.charpoly == (-3, -1, 1)
    iv = pd.root.interval()
    assert 2.30 < iv.lo <= iv.hi < 2.31
    assert pd.primitive

    one = perron_data(mat([[1]]))
    assert one.charpoly == (-1, 1)
    assert one.root.as_fraction() == 1

    two = period_doubling.perron()
    assert two.charpoly == (-2, -1, 1)
    assert two.root.as_fraction() == 2

    # the characteristic polynomial vanishes exactly at the Perron root
    for s in (sigma1, period_doubling):
        p = s.perron()
        acc = p.root.field.zero()
        for c in reversed(p.charpoly):
            acc = acc * p.root + c
        assert acc.is_zero()


def test_perron_zero_matrix():
    with pytest.raises(NoPerronRootError):
        perron_data(mat([[0, 0], [0, 0]]))


def test_spectral_examples(sigma1):
    sc = sigma1.spectral_class()
    assert sc.kind is SpectralKind.NON_PISOT_EXPANDING
    lo, hi = sc.second_eigenvalue_modulus
    assert 1.30 < lo <= hi < 1.31

    assert spectral_classify(mat([[2]])).kind is SpectralKind.PISOT
    assert spectral_classify(mat([[1, 1], [1, 0]])).kind is SpectralKind.PISOT


def test_spectral_salem_and_unimodular(period_doubling):
    # second root of x^2-x-2 is -1: on the unit circle exactly
    assert period_doubling.spectral_class().kind is SpectralKind.SALEM
    ident = Substitution(["a"], {"a": "a"})
    assert ident.spectral_class().kind is SpectralKind.UNIMODULAR


def test_spectral_complex_pair_pisot():
    # tribonacci: charpoly x^3-x^2-x-1, complex pair strictly inside the circle
    import numpy as np

    s = Substitution(["a", "b", "c"], {"a": "ab", "b": "ac", "c": "a"})
    sc = s.spectral_class()
    roots = np.roots([1, -1, -1, -1])
    non_perron = sorted(abs(r) for r in roots)[:-1]
    assert all(m < 1 for m in non_perron)
    assert sc.kind is SpectralKind.PISOT
    lo, hi = sc.second_eigenvalue_modulus
    assert lo <= max(non_perron) + 1e-12 and max(non_perron) - 1e-12 <= hi


def test_spectral_complex_pair_expanding():
    # a -> b, b -> c, c -> aab: x^3 - x - 2, complex pair of modulus ~1.147
    import numpy as np

    s = Substitution(["a", "b", "c"], {"a": "b", "b": "c", "c": "aab"})
    roots = np.roots([1, 0, -1, -2])
    non_perron = sorted(abs(r) for r in roots)[:-1]
    assert all(m > 1 for m in non_perron)
    assert s.spectral_class().kind is SpectralKind.NON_PISOT_EXPANDING


def test_legal_words(period_doubling, sigma1):
    two = {period_doubling.text(w) for w in period_doubling.legal_words(2)}
    assert two == {"00", "01", "10"}
    one = period_doubling.legal_words(1)
    assert one == {(0,), (1,)}
    s1_two = {sigma1.text(w) for w in sigma1.legal_words(2)}
    # bb never occurs: images end in a and b is always followed by an image start
    long = sigma1.text(sigma1.iterate("a", 9))
    assert "bb" not in long
    assert s1_two == {"aa", "ab", "ba"}
    factors = {long[i:i + 2] for i in range(len(long) - 1)}
    assert factors == s1_two


def test_legal_words_nonprimitive_warns():
    s = Substitution(["a", "b"], {"a": "aa", "b": "ab"})
    assert not s.is_primitive()
    with pytest.warns(UserWarning):
        words = s.legal_words(1)
    assert words == {(0,), (1,)}


def test_shift_conjugacy(sigma1, sigma2):
    u = shift_conjugacy(sigma1, sigma2)
    assert u == sigma1.word("a")
    assert shift_conjugacy(sigma1, sigma1) == ()
    # verify the defining identity verbatim
    for x in range(sigma1.size):
        assert sigma2.rules[x] + u == u + sigma1.rules[x]


def test_shift_conjugacy_theta_family():
    # theta1(x) = w_x a, theta2(x) = a w_x generate the same tiling space
    w1, w2 = "ab", "bb"
    t1 = Substitution(["a", "b"], {"a": w1 + "a", "b": w2 + "a"})
    t2 = Substitution(["a", "b"], {"a": "a" + w1, "b": "a" + w2})
    u = shift_conjugacy(t1, t2)
    assert u == t1.word("a")
    for x in range(2):
        assert t2.rules[x] + u == u + t1.rules[x]


def test_shift_conjugacy_hypothesis_error(sigma1):
    other = Substitution(["a", "b"], {"a": "ba", "b": "aa"})
    with pytest.raises(HypothesisError):
        shift_conjugacy(sigma1, other)


def test_tile_lengths_examples(sigma1, period_doubling):
    lengths = sigma1.tile_lengths()
    lam = sigma1.perron().root
    assert lengths[0] == lam
    assert lengths[1] == lam.field.from_rational(3)
    # exact self-similarity: length(s(x)) = lambda * length(x)
    m = sigma1.matrix()
    for j in range(2):
        total = lam.field.zero()
        for i in range(2):
            total = total + lengths[i] * int(m[i, j])
        assert total == lam * lengths[j]

    one = Substitution(["a"], {"a": "aa"})
    assert [x.as_fraction() for x in one.tile_lengths()] == [1]

    assert [x.as_fraction() for x in period_doubling.tile_lengths()] == [1, 1]


def test_tile_lengths_eigen_identity_random():
    rng = rng_for("lengths")
    for _ in range(15):
        s = random_substitution(rng, rng.choice((2, 3)))
        lengths = s.tile_lengths()
        lam = s.perron().root
        m = s.matrix()
        for j in range(s.size):
            total = lam.field.zero()
            for i in range(s.size):
                total = total + lengths[i] * int(m[i, j])
            assert total == lam * lengths[j]


def test_tile_lengths_degenerate():
    ident = Substitution(["a", "b"], {"a": "a", "b": "b"})
    with pytest.raises((DegenerateEigenspaceError, HypothesisError)):
        tile_lengths(ident)


def test_composition(sigma1, sigma2):
    comp = sigma2.after(sigma1)
    for x in range(2):
        assert comp.rules[x] == sigma2.apply(sigma1.rules[x])
    assert (comp.matrix() == sigma2.matrix() @ sigma1.matrix()).all()
