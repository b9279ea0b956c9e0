"""Boundary traces, discrepancy growth, offsets, classification."""

from fractions import Fraction

import pytest

from faultline.errors import HypothesisError, ResourceCapError
from faultline.fault import (
    BoundaryKind,
    boundary_trace,
    classify_boundary,
    discrepancy_growth,
    offset_statistics,
)
from faultline.substitution import Substitution

from conftest import random_substitution, rng_for, shuffled_twin

PAIRS_EQ1 = [
    ("ba", "ab"),
    ("aaaba", "abaaa"),
    ("bababaaaaba", "abaaaababab"),
    ("aaabaaaabaaaababababaaaaba", "abaaaababababaaaabaaaabaaa"),
]


def naive_discrepancies(top, bottom, widths, tracked):
    """Independent scanner: exact cumulative positions compared directly in
    the field, one bottom rescan per top prefix."""
    field = widths[0].field
    out = []
    for j in range(1, len(top) + 1):
        cut = field.zero()
        for c in top[:j]:
            cut = cut + widths[c]
        pos = field.zero()
        taken = []
        for c in bottom:
            nxt = pos + widths[c]
            if nxt.compare(cut) <= 0:
                taken.append(c)
                pos = nxt
            else:
                break
        out.append(top[:j].count(tracked) - taken.count(tracked))
    return out


def test_trace_reproduces_displayed_pairs(sigma1, sigma2):
    trace = boundary_trace(sigma1, sigma2, "a", 4)
    got = [(sigma1.text(s.top), sigma2.text(s.bottom)) for s in trace.steps]
    assert got == PAIRS_EQ1
    assert len(trace.steps[3].top) == 26


def test_trace_identical_rows(sigma1):
    trace = boundary_trace(sigma1, sigma1, "a", 5)
    for s in trace.steps:
        assert set(s.prefix_discrepancies) == {0}
        assert len(s.offsets) == 1 and s.offsets[0].is_zero()


def test_trace_row_widths_agree(sigma1, sigma2):
    trace = boundary_trace(sigma1, sigma2, "a", 6)
    widths = trace.widths
    lam = sigma1.perron().root
    field = lam.field
    seed_width = widths[0]
    for s in trace.steps:
        top_total = field.zero()
        for c in s.top:
            top_total = top_total + widths[c]
        bottom_total = field.zero()
        for c in s.bottom:
            bottom_total = bottom_total + widths[c]
        assert top_total == bottom_total
        assert top_total == lam ** s.round * seed_width


def test_trace_matches_naive_scanner(sigma1, sigma2):
    trace = boundary_trace(sigma1, sigma2, "a", 5)
    for s in trace.steps:
        assert list(s.prefix_discrepancies) == naive_discrepancies(
            s.top, s.bottom, trace.widths, 0
        )


def test_trace_hypothesis_errors(sigma1):
    other_alpha = Substitution(["x", "y"], {"x": "yx", "y": "xxx"})
    with pytest.raises(HypothesisError):
        boundary_trace(sigma1, other_alpha, "a", 2)
    shorter = Substitution(["a", "b"], {"a": "ba", "b": "aa"})
    with pytest.raises(HypothesisError):
        boundary_trace(sigma1, shorter, "a", 2)
    # equal lengths but different abelianization is rejected too
    twisted = Substitution(["a", "b"], {"a": "bb", "b": "aaa"})
    with pytest.raises(HypothesisError):
        boundary_trace(sigma1, twisted, "a", 2)


def test_trace_word_cap(sigma1, sigma2):
    with pytest.raises(ResourceCapError):
        boundary_trace(sigma1, sigma2, "a", 12, max_word_len=1000)


def test_growth_near_second_eigenvalue(sigma1, sigma2):
    trace = boundary_trace(sigma1, sigma2, "a", 12)
    lo, hi = discrepancy_growth(trace)
    target = 1.3027756377319946  # lambda - 1
    assert lo <= hi
    assert abs(float((lo + hi) / 2) - target) / target < 0.05


def test_growth_zero_for_identical(sigma1):
    trace = boundary_trace(sigma1, sigma1, "a", 6)
    assert discrepancy_growth(trace) == (Fraction(0), Fraction(0))


def test_growth_bounded_for_pisot_pair():
    t1 = Substitution(["a", "b"], {"a": "ab", "b": "a"})
    t2 = Substitution(["a", "b"], {"a": "ba", "b": "a"})
    trace = boundary_trace(t1, t2, "a", 12)
    lo, hi = discrepancy_growth(trace)
    assert float(hi) < 1.05


def test_offsets_contain_shift_values(sigma1, sigma2):
    trace = boundary_trace(sigma1, sigma2, "a", 10)
    lam = sigma1.perron().root
    seen = set()
    for s in trace.steps:
        seen.update(s.offsets)
    assert any(o.is_zero() for o in seen)               # m = 0, and 3 = 0 mod 3
    assert any(o == lam for o in seen)                  # m = 1: shear by lambda


def test_offset_recurrence(sigma1):
    # o_1 = lambda, o_{k+1} = lambda o_k - lambda equals lambda^k - ... - lambda
    lam = sigma1.perron().root
    field = lam.field
    o = lam
    powers = [field.one(), lam]
    for k in range(2, 11):
        o = lam * o - lam
        powers.append(powers[-1] * lam)
        direct = powers[k]
        for j in range(1, k):
            direct = direct - powers[j]
        assert o == direct
    # and o_2 = lambda^2 - lambda = 3 exactly
    assert (lam * lam - lam) == field.from_rational(3)


def test_offset_statistics(sigma1, sigma2):
    trace = boundary_trace(sigma1, sigma2, "a", 10)
    stats = offset_statistics(trace)
    counts = stats.per_round_counts
    assert all(counts[i] < counts[i + 1] for i in range(3, 9))
    assert stats.min_gap is not None and stats.min_gap.sign() > 0
    assert stats.distinct_count >= counts[-1]
    short = offset_statistics(boundary_trace(sigma1, sigma1, "a", 2))
    assert short.distinct_count == 1 and short.min_gap is None


def test_classify_examples(sigma1, sigma2):
    assert classify_boundary(sigma1, sigma2).kind is BoundaryKind.REGULAR_FAULT
    assert classify_boundary(sigma1, sigma1).kind is BoundaryKind.RIGID


def test_classify_pisot_pair():
    t1 = Substitution(["a", "b"], {"a": "ab", "b": "a"})
    t2 = Substitution(["a", "b"], {"a": "ba", "b": "a"})
    # default modulus is the widest tile (the golden-width a itself), so all
    # observed offsets reduce to zero: constant offsets mean Rigid
    cls = classify_boundary(t1, t2)
    assert cls.kind is BoundaryKind.RIGID
    # reducing modulo the b width instead exposes two distinct offsets, and
    # with a Pisot expansion there is no growth evidence either way
    cls_b = classify_boundary(t1, t2, modulus=1)
    assert cls_b.kind is BoundaryKind.UNDETERMINED


def test_classify_self_rigid_random():
    rng = rng_for("rigid")
    for _ in range(10):
        s = random_substitution(rng, 2)
        assert classify_boundary(s, s, cap=8).kind is BoundaryKind.RIGID


def test_classify_shuffled_twin_random():
    rng = rng_for("twin")
    for _ in range(6):
        s = random_substitution(rng, 2, max_len=3)
        t = shuffled_twin(rng, s)
        cls = classify_boundary(s, t, cap=8)
        assert cls.kind in (BoundaryKind.RIGID, BoundaryKind.REGULAR_FAULT,
                            BoundaryKind.UNDETERMINED)
