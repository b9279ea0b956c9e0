"""Exact-coordinate DPV patches and SVG output.

A patch is the k-fold image of a seed tile, placed by recursive subdivision:
the image array of each tile fills its parent rectangle row by row (bottom
row first).  Horizontal coordinates are exact elements of Q(lambda); vertical
coordinates are exact rationals.  SVG output renders coordinates at 1e-9
precision from the exact values and is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ResourceCapError, ValidationError

DEFAULT_MAX_TILES = 200_000

_PALETTE = (
    "#4878a8", "#e8b04a", "#78b478", "#c85a5a", "#9268ac",
    "#50b8c8", "#c8789a", "#a8a848", "#7890c8", "#c89058",
)


@dataclass(frozen=True)
class PlacedTile:
    tile: tuple        # (vertical letter id, horizontal letter id)
    x: object          # AlgebraicNumber, left edge
    y: Fraction        # bottom edge
    width: object      # AlgebraicNumber
    height: Fraction


def _vertical_heights(d):
    heights = d.vertical.tile_lengths()
    for h in heights:
        if not h.is_rational():
            raise ValidationError(
                "rendering needs rational vertical tile heights "
                "(irrational vertical expansion is unsupported)"
            )
    return tuple(h.as_fraction() for h in heights)


def generate_patch(d, seed, k, max_tiles=DEFAULT_MAX_TILES):
    """All tiles of the k-fold image of ``seed`` = (vertical, horizontal)
    letter ids, with exact coordinates; the seed's lower-left corner is the
    origin."""
    if k < 0:
        raise ValidationError("rounds must be >= 0")
    v0, h0 = seed
    widths = d.horizontal[0].tile_lengths()
    heights = _vertical_heights(d)
    field = widths[0].field
    lam_v = d.vertical.perron().root
    if not lam_v.is_rational():
        raise ValidationError("rendering needs a rational vertical expansion factor")
    lam_v = lam_v.as_fraction()
    lam_h = field.gen()  # widths live in the Perron field, whose root is lambda

    # count guard before any recursion
    counts = d.count_matrix()
    from .abelian import matpow

    col = d.tile_index(v0, h0)
    total = sum(int(x) for x in matpow(counts, k)[:, col])
    if total > max_tiles:
        raise ResourceCapError(f"patch would contain {total} tiles (cap {max_tiles})")

    lam_h_pow = [field.one()]
    for _ in range(k):
        lam_h_pow.append(lam_h_pow[-1] * lam_h)

    out = []

    def place(v, h, x, y, rounds):
        if rounds == 0:
            out.append(PlacedTile(tile=(v, h), x=x, y=y,
                                  width=widths[h], height=heights[v]))
            return
        y_cursor = y
        for row in d.image_array(v, h):
            x_cursor = x
            row_height = heights[row[0][0]] * lam_v ** (rounds - 1)
            for (v2, h2) in row:
                place(v2, h2, x_cursor, y_cursor, rounds - 1)
                x_cursor = x_cursor + widths[h2] * lam_h_pow[rounds - 1]
            y_cursor = y_cursor + row_height
        return

    place(v0, h0, field.zero(), Fraction(0), k)
    return out


def overlay_boundaries(d, seed, k, order):
    """Interior y-coordinates separating rows of order-``order`` supertiles
    in the k-round patch of ``seed``."""
    if not 1 <= order <= k:
        raise ValidationError("overlay order must be between 1 and the round count")
    heights = _vertical_heights(d)
    lam_v = d.vertical.perron().root.as_fraction()
    cuts = set()

    def walk(v, y, rounds):
        # rounds counts remaining subdivisions down to order-(order) blocks
        if rounds == 0:
            return
        y_cursor = y
        rows = d.vertical.rules[v]
        for j, v2 in enumerate(rows):
            row_height = heights[v2] * lam_v ** (order - 1) * lam_v ** (rounds - 1)
            if j > 0:
                cuts.add(y_cursor)
            walk(v2, y_cursor, rounds - 1)
            y_cursor += row_height
        return

    walk(seed[0], Fraction(0), k - order + 1)
    cuts.discard(Fraction(0))
    return tuple(sorted(cuts))


def _fmt(q):
    """Deterministic decimal with 9 fractional digits from a Fraction."""
    q = Fraction(q)
    scaled = q * 10 ** 9
    n = scaled.numerator // scaled.denominator
    if scaled - n >= Fraction(1, 2):
        n += 1
    sign = "-" if n < 0 else ""
    n = abs(n)
    whole, frac = divmod(n, 10 ** 9)
    return f"{sign}{whole}.{frac:09d}".rstrip("0").rstrip(".") or "0"


def emit_svg(patch, colors=None, overlay=(), scale=24):
    """One rect per tile; y flipped so the patch displays with y increasing
    upward; optional horizontal overlay lines.  Deterministic output."""
    if not patch:
        raise ValidationError("empty patch")
    width_frac = Fraction(0)
    for t in patch:
        right = (t.x + t.width).interval(Fraction(1, 10 ** 12)).hi
        if right > width_frac:
            width_frac = right
    height_frac = max(t.y + t.height for t in patch)
    w = _fmt(width_frac * scale)
    h = _fmt(height_frac * scale)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" '
        f'width="{w}" height="{h}">',
    ]
    tile_ids = sorted({t.tile for t in patch})
    color_of = {}
    for i, tid in enumerate(tile_ids):
        color_of[tid] = (colors or {}).get(tid) or _PALETTE[i % len(_PALETTE)]
    for t in patch:
        x = t.x.interval(Fraction(1, 10 ** 12)).midpoint() * scale
        y = (height_frac - t.y - t.height) * scale
        tw = t.width.interval(Fraction(1, 10 ** 12)).midpoint() * scale
        th = t.height * scale
        lines.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(tw)}" height="{_fmt(th)}" '
            f'fill="{color_of[t.tile]}" stroke="#202020" stroke-width="0.7"/>'
        )
    for cut in overlay:
        y = (height_frac - cut) * scale
        lines.append(
            f'<line x1="0" y1="{_fmt(y)}" x2="{w}" y2="{_fmt(y)}" '
            f'stroke="#d02020" stroke-width="1.6" stroke-dasharray="6,3"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
