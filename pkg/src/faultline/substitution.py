"""1-dimensional substitutions and their spectral/combinatorial data.

A substitution is a map letter -> nonempty word over a fixed alphabet.
Letters are dense integer ids with display names; words are tuples of ids.
The abelianization convention is: entry (i, j) counts occurrences of letter i
in the image of letter j, so lengths of images are the column sums.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from math import gcd

import numpy as np

from . import abelian
from .algebra import (
    AlgebraicNumber,
    NumberField,
    irreducible_factors,
    isolate_complex_roots,
    isolate_real_roots,
    pdeg,
    squarefree_part,
)
from .errors import (
    DegenerateEigenspaceError,
    HypothesisError,
    NoPerronRootError,
    ResourceCapError,
    ValidationError,
)

DEFAULT_MAX_WORD_LEN = 10 ** 6


@dataclass(frozen=True)
class Letter:
    id: int
    name: str


class Substitution:
    """Alphabet plus one nonempty rule word per letter.  Immutable."""

    def __init__(self, alphabet, rules):
        """alphabet: sequence of unique display names.
        rules: mapping name -> word, where a word is a sequence of names (a
        plain string is read letter-by-letter, which works whenever all names
        are single characters)."""
        names = list(alphabet)
        if len(set(names)) != len(names) or not names:
            raise ValidationError("alphabet names must be nonempty and unique")
        self.letters = tuple(Letter(i, n) for i, n in enumerate(names))
        self._index = {n: i for i, n in enumerate(names)}
        imgs = []
        for name in names:
            if name not in rules:
                raise ValidationError(f"no rule for letter {name!r}")
            imgs.append(self.word(rules[name]))
            if not imgs[-1]:
                raise ValidationError(f"rule for {name!r} is empty")
        self.rules = tuple(imgs)
        self._matrix = None

    # -- words ------------------------------------------------------------------

    @property
    def alphabet(self):
        return tuple(l.name for l in self.letters)

    @property
    def size(self):
        return len(self.letters)

    def word(self, w):
        """Coerce a string / name sequence / id sequence to a word (id tuple)."""
        if isinstance(w, str):
            symbols = list(w)
        else:
            symbols = list(w)
        out = []
        for s in symbols:
            if isinstance(s, int):
                if not 0 <= s < self.size:
                    raise ValidationError(f"letter id {s} out of range")
                out.append(s)
            else:
                if s not in self._index:
                    raise ValidationError(f"unknown letter {s!r}")
                out.append(self._index[s])
        return tuple(out)

    def text(self, word):
        return "".join(self.letters[i].name for i in word)

    # -- action ------------------------------------------------------------------

    def apply(self, word):
        """One substitution step: concatenation of rule images in order."""
        word = self.word(word)
        out = []
        for i in word:
            out.extend(self.rules[i])
        return tuple(out)

    def iterate(self, seed, k, max_len=DEFAULT_MAX_WORD_LEN):
        """k-fold application; iterate(w, 0) = w.  Predicted lengths are
        checked against max_len before any word is materialized."""
        if k < 0:
            raise ValidationError("iteration count must be >= 0")
        word = self.word(seed)
        counts = [0] * self.size
        for i in word:
            counts[i] += 1
        m = self.matrix()
        vec = np.array([[c] for c in counts], dtype=object)
        for _ in range(k):
            vec = m @ vec
            if sum(int(x) for x in vec.flat) > max_len:
                raise ResourceCapError(f"iterate would exceed {max_len} letters")
        for _ in range(k):
            word = self.apply(word)
        return word

    def rule(self, letter):
        if isinstance(letter, str):
            letter = self._index[letter]
        return self.rules[letter]

    # -- abelianization and spectra ---------------------------------------------

    def matrix(self):
        """Abelianization: entry (i, j) counts letter i in the image of j."""
        if self._matrix is None:
            n = self.size
            m = [[0] * n for _ in range(n)]
            for j in range(n):
                for i in self.rules[j]:
                    m[i][j] += 1
            self._matrix = abelian.mat(m)
        return self._matrix

    def length_vector(self):
        return tuple(len(r) for r in self.rules)

    def is_primitive(self):
        return is_primitive(self.matrix())

    def perron(self):
        return perron_data(self.matrix())

    def spectral_class(self, precision_bits=64):
        return spectral_classify(self.matrix(), precision_bits=precision_bits)

    def tile_lengths(self):
        return tile_lengths(self)

    # -- language ------------------------------------------------------------------

    def legal_words(self, n, max_len=DEFAULT_MAX_WORD_LEN):
        """All length-n factors of iterated images, closed under further
        substitution until stable."""
        if n < 1:
            raise ValidationError("factor length must be >= 1")
        if not self.is_primitive():
            warnings.warn("legal_words on a non-primitive substitution; taking the "
                          "union over all letters", stacklevel=2)
        lam_ceiling = max(sum(int(x) for x in col) for col in self.matrix().T)
        target = max(64, 4 * n * lam_ceiling)
        factors = set()
        for a in range(self.size):
            w = (a,)
            while len(w) < target:
                nxt = self.apply(w)
                if len(nxt) == len(w):  # non-growing letter; fall through
                    w = nxt
                    break
                w = nxt
                if len(w) > max_len:
                    raise ResourceCapError("legal_words expansion exceeded the word cap")
            factors.update(w[i:i + n] for i in range(len(w) - n + 1))
        while True:
            new = set()
            for w in factors:
                img = self.apply(w)
                new.update(img[i:i + n] for i in range(len(img) - n + 1))
            if new <= factors:
                return factors
            factors |= new

    # -- composition and comparison ----------------------------------------------

    def after(self, other):
        """Composite substitution self o other (apply other first)."""
        if self.alphabet != other.alphabet:
            raise HypothesisError("composition needs a common alphabet")
        rules = {l.name: self.apply(other.rules[l.id]) for l in self.letters}
        return Substitution(self.alphabet, rules)

    def __eq__(self, other):
        if not isinstance(other, Substitution):
            return NotImplemented
        return self.alphabet == other.alphabet and self.rules == other.rules

    def __hash__(self):
        return hash((self.alphabet, self.rules))

    def __repr__(self):
        body = ", ".join(f"{l.name}->{self.text(r)}" for l, r in zip(self.letters, self.rules))
        return f"Substitution({body})"


# ---------------------------------------------------------------------------
# Perron data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PerronData:
    charpoly: tuple          # full characteristic polynomial, ascending
    root: AlgebraicNumber    # Perron eigenvalue in its minimal field
    primitive: bool


def is_primitive(m):
    """Some power of m is entrywise positive (checked up to the Wielandt
    bound (n-1)^2 + 1)."""
    n = m.shape[0]
    if n != m.shape[1]:
        raise ValidationError("primitivity needs a square matrix")
    power = abelian.eye(n)
    for _ in range((n - 1) ** 2 + 1):
        power = power @ m
        if all(int(x) > 0 for x in power.flat):
            return True
    return False


def perron_data(m):
    """Characteristic polynomial, Perron root (largest real eigenvalue) as an
    exact algebraic number, and primitivity."""
    if not any(int(x) for x in m.flat):
        raise NoPerronRootError("zero matrix has no Perron root")
    if any(int(x) < 0 for x in m.flat):
        raise ValidationError("substitution matrices must be non-negative")
    cp = abelian.charpoly(m)
    field, root = NumberField.with_largest_real_root(cp)
    if root.sign() <= 0:
        raise NoPerronRootError("largest real eigenvalue is not positive")
    return PerronData(charpoly=cp, root=root, primitive=is_primitive(m))


# ---------------------------------------------------------------------------
# spectral classification
# ---------------------------------------------------------------------------

class SpectralKind(Enum):
    PISOT = "Pisot"
    SALEM = "Salem"
    NON_PISOT_EXPANDING = "NonPisotExpanding"
    UNIMODULAR = "Unimodular"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class SpectralClass:
    kind: SpectralKind
    second_eigenvalue_modulus: tuple  # rational interval (lo, hi) of the largest non-Perron modulus
    perron_interval: tuple            # rational interval enclosing the Perron root

    def __str__(self):
        lo, hi = self.second_eigenvalue_modulus
        return f"{self.kind.value}(|second| in [{lo}, {hi}])"


class _Modulus:
    """Enclosure of |root| with an optional exactness certificate."""

    def __init__(self, lo, hi, exact=None):
        self.lo, self.hi, self.exact = Fraction(lo), Fraction(hi), exact

    def vs_one(self):
        """1, -1, 0 for certified >, <, = 1; None when undecided."""
        if self.exact is not None:
            return (self.exact > 1) - (self.exact < 1)
        if self.lo > 1:
            return 1
        if self.hi < 1:
            return -1
        return None


def _sqrt_interval(q, prec):
    """Rational interval around sqrt(q) of width <= 2^-prec."""
    q = Fraction(q)
    if q == 0:
        return (Fraction(0), Fraction(0))
    lo, hi = Fraction(0), max(Fraction(1), q)
    width = Fraction(1, 2 ** prec)
    while hi - lo > width:
        mid = (lo + hi) / 2
        if mid * mid <= q:
            lo = mid
        else:
            hi = mid
    return (lo, hi)


def _rect_modulus_sq(rect):
    (re_lo, im_lo), (re_hi, im_hi) = rect
    dx = Fraction(0) if re_lo <= 0 <= re_hi else min(abs(re_lo), abs(re_hi))
    dy = Fraction(0) if im_lo <= 0 <= im_hi else min(abs(im_lo), abs(im_hi))
    mx = max(abs(re_lo), abs(re_hi))
    my = max(abs(im_lo), abs(im_hi))
    return dx * dx + dy * dy, mx * mx + my * my


def spectral_classify(m, precision_bits=64):
    """Classify all non-Perron roots of the characteristic polynomial by
    modulus.  Real roots are handled by exact isolation; complex roots by
    exact rational modulus for quadratic factors and certified rectangle
    isolation otherwise, refined down to width 2^-precision_bits before
    giving up as Undetermined."""
    pd = perron_data(m)
    sf = squarefree_part(pd.charpoly)
    lam_iv = pd.root.interval(Fraction(1, 2 ** 24))
    moduli = []      # _Modulus for every non-Perron root of the squarefree charpoly
    lam_seen = False
    for fac, _ in irreducible_factors(sf):
        deg = pdeg(fac)
        real = isolate_real_roots(fac, eps=Fraction(1, 2 ** 24))
        for lo, hi in real:
            if (not lam_seen and fac == pd.root.field.poly
                    and pd.root.compare(lo) >= 0 and pd.root.compare(hi) <= 0):
                lam_seen = True  # skip the Perron root itself
                continue
            if lo == hi:
                moduli.append(_Modulus(abs(lo), abs(hi), exact=abs(lo)))
            else:
                a = NumberField(fac, (lo, hi)).gen().interval(Fraction(1, 2 ** precision_bits)).abs()
                moduli.append(_Modulus(a.lo, a.hi))
        if deg - len(real) == 0:
            continue
        if deg == 2:
            # conjugate pair of a monic quadratic: |z|^2 is the constant term
            msq = Fraction(abs(fac[0]))
            lo, hi = _sqrt_interval(msq, precision_bits)
            moduli.append(_Modulus(lo, hi, exact=Fraction(1) if msq == 1 else None))
            continue
        # general case: certified rectangles, refined while any straddles |z| = 1
        eps = Fraction(1, 2 ** 16)
        floor_eps = Fraction(1, 2 ** precision_bits)
        while True:
            rects = [r for r in isolate_complex_roots(fac, eps=eps) if r[1][1] > 0]
            straddle = any(lo_sq <= 1 <= hi_sq for lo_sq, hi_sq in map(_rect_modulus_sq, rects))
            if not straddle or eps <= floor_eps:
                break
            eps = max(eps * eps, floor_eps)
        for rect in rects:
            lo_sq, hi_sq = _rect_modulus_sq(rect)
            lo, _ = _sqrt_interval(lo_sq, precision_bits)
            _, hi = _sqrt_interval(hi_sq, precision_bits)
            moduli.append(_Modulus(lo, hi))
    assert lam_seen, "Perron root must appear among the isolated real roots"

    if moduli:
        second = (max(mm.lo for mm in moduli), max(mm.hi for mm in moduli))
    else:
        second = (Fraction(0), Fraction(0))
    votes = [mm.vs_one() for mm in moduli]
    lam_is_one = pd.root.is_rational() and pd.root.as_fraction() == 1

    if any(v == 1 for v in votes):
        kind = SpectralKind.NON_PISOT_EXPANDING
    elif any(v is None for v in votes):
        kind = SpectralKind.UNDETERMINED
    elif lam_is_one and all(v == 0 for v in votes):
        kind = SpectralKind.UNIMODULAR
    elif any(v == 0 for v in votes):
        kind = SpectralKind.SALEM
    else:
        kind = SpectralKind.PISOT
    return SpectralClass(
        kind=kind,
        second_eigenvalue_modulus=second,
        perron_interval=(lam_iv.lo, lam_iv.hi),
    )


# ---------------------------------------------------------------------------
# geometry
# ---------------------------------------------------------------------------

def tile_lengths(s):
    """Natural tile lengths: a left Perron eigenvector of the abelianization,
    exact in Q(lambda).

    Rational lambda gives the primitive positive integer eigenvector; for
    irrational lambda the vector is scaled so the first entry is lambda when
    that lands in Z[lambda], else so the first entry is 1.  Either way
    length(s(x)) = lambda * length(x) holds exactly."""
    pd = s.perron()
    if not pd.primitive:
        raise HypothesisError("tile lengths need a primitive substitution")
    field = pd.root.field
    lam = pd.root
    n = s.size
    mt = s.matrix().T
    # solve (M^T - lambda I) x = 0 over the field
    rows = [[field.from_rational(int(mt[i, j])) for j in range(n)] for i in range(n)]
    for i in range(n):
        rows[i][i] = rows[i][i] - lam
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, n) if not rows[i][col].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][col]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(n):
            if i != r and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        raise DegenerateEigenspaceError(f"Perron eigenspace has dimension {len(free)}")
    sol = [field.zero()] * n
    sol[free[0]] = field.one()
    for i, col in enumerate(pivots):
        sol[col] = -rows[i][free[0]]
    first = sol[0]
    if first.is_zero():
        raise DegenerateEigenspaceError("eigenvector has a vanishing first entry")
    unit = [x / first for x in sol]  # first entry 1
    if field.degree == 1:
        fracs = [x.as_fraction() for x in unit]
        denom = 1
        for f in fracs:
            denom = denom * f.denominator // gcd(denom, f.denominator)
        ints = [int(f * denom) for f in fracs]
        g = 0
        for v in ints:
            g = gcd(g, abs(v))
        return tuple(field.from_rational(Fraction(v, g)) for v in ints)
    scaled = [x * lam for x in unit]
    if all(c.denominator == 1 for x in scaled for c in x.coeffs):
        return tuple(scaled)
    return tuple(unit)


# ---------------------------------------------------------------------------
# shift conjugacy
# ---------------------------------------------------------------------------

def shift_conjugacy(s1, s2, max_len=8):
    """Shortest word u with s2(x) u = u s1(x) for every letter x, searching
    lengths 0..max_len; None when no certificate is found in range.  Such a u
    exhibits s2 as a shift of s1, hence equal tiling spaces."""
    if s1.alphabet != s2.alphabet:
        raise HypothesisError("shift conjugacy needs a common alphabet")
    if s1.length_vector() != s2.length_vector():
        raise HypothesisError("shift conjugacy needs equal image lengths")
    letters = range(s1.size)
    for length in range(max_len + 1):
        for u in product(letters, repeat=length):
            if all(s2.rules[x] + u == u + s1.rules[x] for x in letters):
                return u
    return None
