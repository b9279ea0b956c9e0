"""Fault-line dynamics along a horizontal boundary.

Two substitutions act on the rows touching the boundary; iterating from an
aligned seed letter produces a pair of words per round.  The discrepancy at a
prefix is the difference in tracked-letter counts between the two rows up to
the same exact horizontal position (positions live in Q(lambda), and every
comparison is exact).  Offsets are the induced shears lambda*m reduced modulo
a tile width.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .algebra import mod_reduce
from .errors import HypothesisError, ResourceCapError, ValidationError
from .substitution import DEFAULT_MAX_WORD_LEN, SpectralKind, spectral_classify

DEFAULT_ROUNDS = 12


@dataclass(frozen=True)
class BoundaryStep:
    round: int
    top: tuple
    bottom: tuple
    prefix_discrepancies: tuple   # per top-tile prefix, exact position cut
    offsets: tuple                # distinct shear offsets this round, sorted ascending
    discrepancy_values: tuple     # distinct m values this round, sorted

    @property
    def max_abs_discrepancy(self):
        return max((abs(d) for d in self.prefix_discrepancies), default=0)


@dataclass(frozen=True)
class BoundaryTrace:
    top_sub: object
    bottom_sub: object
    seed: int
    tracked_letter: int
    widths: tuple                 # tile widths, AlgebraicNumbers
    modulus: object               # AlgebraicNumber, the offset modulus
    steps: tuple

    def max_abs_by_round(self):
        return tuple(s.max_abs_discrepancy for s in self.steps)


def _prefix_discrepancies(top, bottom, widths, tracked):
    """Tracked-letter count difference at each top-tile boundary, bottom side
    cut at the same exact position (tiles whose right edge is <= the cut).

    Position comparisons are decided by a certified integer filter (widths
    scaled to integers with a known error margin); whenever the filter cannot
    decide, the sign is recomputed exactly in Q(lambda).  Ties (exactly equal
    positions) are therefore exact."""
    if top == bottom:
        return tuple([0] * len(top))
    n_letters = len(widths)
    # scaled-integer approximations: |widths[i] * 2^96 - scaled[i]| <= 1
    scale = 1 << 96
    scaled = []
    for w in widths:
        iv = w.interval(Fraction(1, scale))
        mid = iv.midpoint() * scale
        scaled.append(round(mid))

    def delta_sign(deltas):
        t = sum(d * s for d, s in zip(deltas, scaled))
        margin = sum(abs(d) for d in deltas)
        if t > margin:
            return 1
        if t < -margin:
            return -1
        if all(d == 0 for d in deltas):
            return 0
        exact = widths[0] * deltas[0]
        for i in range(1, n_letters):
            if deltas[i]:
                exact = exact + widths[i] * deltas[i]
        return exact.sign()

    top_counts = [0] * n_letters
    bot_counts = [0] * n_letters
    out = []
    ib = 0
    for letter in top:
        top_counts[letter] += 1
        # advance the bottom pointer while its next right edge stays <= cut
        while ib < len(bottom):
            nxt = bottom[ib]
            bot_counts[nxt] += 1
            if delta_sign([t - b for t, b in zip(top_counts, bot_counts)]) >= 0:
                ib += 1
            else:
                bot_counts[nxt] -= 1
                break
        out.append(top_counts[tracked] - bot_counts[tracked])
    return tuple(out)


def boundary_trace(top, bottom, seed, k, modulus=None, tracked_letter=0,
                   max_word_len=DEFAULT_MAX_WORD_LEN):
    """Trace k substitution rounds of the two rows touching a boundary,
    starting from one aligned seed letter.

    Requires equal alphabets and equal abelianizations (the rows must span
    the same exact interval each round).  The offset modulus defaults to the
    widest tile."""
    if k < 1:
        raise ValidationError("need at least one round")
    if top.alphabet != bottom.alphabet:
        raise HypothesisError("boundary trace needs a common alphabet")
    if top.length_vector() != bottom.length_vector():
        raise HypothesisError("boundary trace needs equal per-letter image lengths")
    if (top.matrix() != bottom.matrix()).any():
        raise HypothesisError("boundary trace needs equal abelianizations")
    seed = top.word([seed])[0] if not isinstance(seed, int) else seed
    widths = top.tile_lengths()
    if modulus is None:
        modulus = max(widths)
    elif isinstance(modulus, int):
        modulus = widths[modulus]
    if modulus.sign() <= 0:
        raise ValidationError("offset modulus must be positive")

    unit_shift = widths[tracked_letter]
    steps = []
    wt = wb = (seed,)
    for rnd in range(1, k + 1):
        wt = top.apply(wt)
        wb = bottom.apply(wb)
        if len(wt) > max_word_len:
            raise ResourceCapError(f"boundary trace exceeded the {max_word_len}-letter word cap")
        ds = _prefix_discrepancies(wt, wb, widths, tracked_letter)
        ms = tuple(sorted(set(ds)))
        offsets = tuple(sorted(mod_reduce(unit_shift * m, modulus) for m in ms))
        steps.append(
            BoundaryStep(
                round=rnd,
                top=wt,
                bottom=wb,
                prefix_discrepancies=ds,
                offsets=offsets,
                discrepancy_values=ms,
            )
        )
    return BoundaryTrace(
        top_sub=top,
        bottom_sub=bottom,
        seed=seed,
        tracked_letter=tracked_letter,
        widths=tuple(widths),
        modulus=modulus,
        steps=tuple(steps),
    )


def _nth_root_interval(ratio, t, width=Fraction(1, 10 ** 6)):
    """Rational interval around ratio**(1/t)."""
    ratio = Fraction(ratio)
    if ratio == 0:
        return (Fraction(0), Fraction(0))
    lo, hi = Fraction(0), max(Fraction(1), ratio)
    while hi - lo > width:
        mid = (lo + hi) / 2
        if mid ** t <= ratio:
            lo = mid
        else:
            hi = mid
    return (lo, hi)


def discrepancy_growth(trace):
    """Geometric-mean growth of the max |discrepancy| over the last half of
    the rounds, as a rational interval.  All-zero discrepancies give (0, 0)."""
    maxes = trace.max_abs_by_round()
    k = len(maxes)
    if k < 4:
        raise ValidationError("growth estimate needs at least 4 rounds")
    if all(m == 0 for m in maxes):
        return (Fraction(0), Fraction(0))
    start = k // 2
    base = maxes[start - 1]
    last = maxes[k - 1]
    if base == 0 or last == 0:
        return (Fraction(0), Fraction(0))
    return _nth_root_interval(Fraction(last, base), k - start)


def offset_statistics(trace):
    """Distinct exact offsets across the whole trace and the minimum positive
    gap between them; also the per-round distinct counts."""
    if not trace.steps:
        raise ValidationError("empty trace")
    all_offsets = []
    for s in trace.steps:
        all_offsets.extend(s.offsets)
    distinct = []
    for o in sorted(all_offsets):
        if not distinct or not (o - distinct[-1]).is_zero():
            distinct.append(o)
    min_gap = None
    for a, b in zip(distinct, distinct[1:]):
        gap = b - a
        if min_gap is None or gap < min_gap:
            min_gap = gap
    per_round = tuple(len(s.offsets) for s in trace.steps)
    return OffsetStats(
        distinct_count=len(distinct),
        min_gap=min_gap,
        per_round_counts=per_round,
    )


@dataclass(frozen=True)
class OffsetStats:
    distinct_count: int
    min_gap: object            # AlgebraicNumber or None when < 2 offsets
    per_round_counts: tuple


class BoundaryKind(Enum):
    RIGID = "Rigid"
    REGULAR_FAULT = "RegularFault"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class BoundaryClass:
    kind: BoundaryKind
    growth_ratio: tuple          # rational interval
    max_discrepancy_by_round: tuple
    offsets_by_round: tuple      # distinct counts per round
    spectral_kind: SpectralKind

    def __str__(self):
        return self.kind.value


def classify_boundary(top, bottom, cap=DEFAULT_ROUNDS, modulus=None,
                      max_word_len=DEFAULT_MAX_WORD_LEN):
    """Rigid when the offsets stay a single constant through the cap;
    RegularFault when the horizontal expansion is NonPisotExpanding and the
    max discrepancy strictly increases across the last three doubling
    checkpoints; otherwise Undetermined (deliberately: for more than two
    letters the dichotomy is open)."""
    if cap < 4:
        raise ValidationError("classification needs cap >= 4")
    trace = boundary_trace(top, bottom, seed=0, k=cap, modulus=modulus,
                           max_word_len=max_word_len)
    maxes = trace.max_abs_by_round()
    growth = discrepancy_growth(trace)
    per_round = tuple(len(s.offsets) for s in trace.steps)
    spectral = spectral_classify(top.matrix()).kind

    all_offsets = set()
    for s in trace.steps:
        all_offsets.update(s.offsets)
    if len(all_offsets) <= 1:
        kind = BoundaryKind.RIGID
    else:
        c = cap // 4
        checkpoints = (maxes[c - 1], maxes[2 * c - 1], maxes[4 * c - 1])
        if (spectral is SpectralKind.NON_PISOT_EXPANDING
                and checkpoints[0] < checkpoints[1] < checkpoints[2]):
            kind = BoundaryKind.REGULAR_FAULT
        else:
            kind = BoundaryKind.UNDETERMINED
    return BoundaryClass(
        kind=kind,
        growth_ratio=growth,
        max_discrepancy_by_round=maxes,
        offsets_by_round=per_round,
        spectral_kind=spectral,
    )
