"""Exact arithmetic in real algebraic number fields Q(lambda) = Q[x]/(p).

Polynomials are tuples of coefficients in *ascending* degree order.  Ring
operations are carried out over ``fractions.Fraction``; nothing stored here is
ever a float.  Root isolation and factorization over Q are delegated to sympy
(its Collins-Krandick isolation returns exact rational intervals); everything
downstream of isolation (refinement, comparison, floor, modular reduction) is
implemented here with exact rational intervals.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from sympy import Poly as _SymPoly, Symbol as _SymSymbol
from sympy.polys.domains import ZZ as _ZZ
from sympy.polys.rootisolation import (
    dup_isolate_complex_roots_sqf as _isolate_complex,
    dup_isolate_real_roots_sqf as _isolate_real,
)

from .errors import ValidationError

_X = _SymSymbol("x")

_MAX_REFINE = 4096  # bisection guard; never reached for nonzero values


# ---------------------------------------------------------------------------
# polynomial helpers (coefficients ascending, trimmed)
# ---------------------------------------------------------------------------

def ptrim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def pdeg(c):
    return len(c) - 1


def padd(a, b):
    n = max(len(a), len(b))
    return ptrim(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def pneg(a):
    return tuple(-x for x in a)


def psub(a, b):
    return padd(a, pneg(b))


def pmul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return ptrim(out)


def pscale(a, s):
    return ptrim(x * s for x in a)


def pdivmod(a, b):
    """Euclidean division over Q; b must be nonzero."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = [Fraction(x) for x in a]
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = Fraction(b[-1])
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - len(b)
        coef = a[-1] / lead
        q[shift] = coef
        for i, y in enumerate(b):
            a[shift + i] -= coef * y
        a.pop()
    return ptrim(q), ptrim(a)


def pmonic(a):
    if not a:
        return a
    return tuple(Fraction(x) / a[-1] for x in a)


def pgcd(a, b):
    """Monic gcd over Q."""
    a, b = ptrim(a), ptrim(b)
    while b:
        a, b = b, pdivmod(a, b)[1]
    return pmonic(a) if a else ()


def pderiv(a):
    return ptrim(i * a[i] for i in range(1, len(a)))


def peval(a, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def squarefree_part(a):
    """a / gcd(a, a'), normalized to a primitive integer polynomial."""
    g = pgcd(a, pderiv(a))
    q, r = pdivmod(a, g)
    assert not r
    return int_normalize(q)


def int_normalize(a):
    """Scale a rational polynomial to primitive integer coefficients with a
    positive leading coefficient."""
    a = ptrim(Fraction(x) for x in a)
    if not a:
        return ()
    denom = 1
    for x in a:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in a]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    ints = [v // g for v in ints]
    if ints[-1] < 0:
        ints = [-v for v in ints]
    return tuple(ints)


def poly_str(a):
    """Canonical display string, descending powers: ``x^2-x-3``."""
    a = ptrim(a)
    if not a:
        return "0"
    parts = []
    for d in range(len(a) - 1, -1, -1):
        c = a[d]
        if c == 0:
            continue
        sign = "-" if c < 0 else ("+" if parts else "")
        mag = abs(c)
        if d == 0:
            term = str(mag)
        else:
            xs = "x" if d == 1 else f"x^{d}"
            term = xs if mag == 1 else f"{mag}{xs}"
        parts.append(sign + term)
    return "".join(parts)


def _to_dup(a):
    """ascending int tuple -> sympy dup list (descending ZZ)."""
    return [_ZZ(int(c)) for c in reversed(ptrim(a))]


def irreducible_factors(a):
    """Distinct monic-integer irreducible factors of an integer polynomial
    over Q, with multiplicities, ordered by (degree, coefficients)."""
    p = _SymPoly(list(reversed([int(c) for c in ptrim(a)])), _X, domain="ZZ")
    _, factors = p.factor_list()
    out = []
    for f, mult in factors:
        coeffs = tuple(int(c) for c in reversed(f.all_coeffs()))
        if coeffs[-1] < 0:
            coeffs = tuple(-c for c in coeffs)
        out.append((coeffs, int(mult)))
    out.sort(key=lambda fm: (pdeg(fm[0]), fm[0]))
    return out


def is_irreducible(a):
    fs = irreducible_factors(a)
    return len(fs) == 1 and fs[0][1] == 1 and pdeg(fs[0][0]) == pdeg(ptrim(a))


def isolate_real_roots(a, eps=None):
    """Isolating rational intervals for the real roots of a squarefree integer
    polynomial, sorted ascending.  Exact rational roots come back as
    degenerate [r, r] intervals."""
    dup = _to_dup(a)
    if len(dup) <= 1:
        return []
    kw = {"eps": eps} if eps is not None else {}
    raw = _isolate_real(dup, _ZZ, **kw)
    return [
        (Fraction(int(lo.numerator), int(lo.denominator)),
         Fraction(int(hi.numerator), int(hi.denominator)))
        for lo, hi in raw
    ]


def isolate_complex_roots(a, eps):
    """Isolating rectangles for the complex (non-real) roots of a squarefree
    integer polynomial: list of ((re_lo, im_lo), (re_hi, im_hi))."""
    dup = _to_dup(a)
    if len(dup) <= 2:
        return []
    raw = _isolate_complex(dup, _ZZ, eps=eps)
    out = []
    for (a0, b0), (a1, b1) in raw:
        out.append(
            (
                (Fraction(int(a0.numerator), int(a0.denominator)),
                 Fraction(int(b0.numerator), int(b0.denominator))),
                (Fraction(int(a1.numerator), int(a1.denominator)),
                 Fraction(int(b1.numerator), int(b1.denominator))),
            )
        )
    return out


# ---------------------------------------------------------------------------
# rational intervals
# ---------------------------------------------------------------------------

class Interval:
    """Closed interval with exact rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError("interval endpoints out of order")
        self.lo, self.hi = lo, hi

    def __add__(self, other):
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other):
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __mul__(self, other):
        cands = (
            self.lo * other.lo, self.lo * other.hi,
            self.hi * other.lo, self.hi * other.hi,
        )
        return Interval(min(cands), max(cands))

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def scale(self, s):
        s = Fraction(s)
        return Interval(self.lo * s, self.hi * s) if s >= 0 else Interval(self.hi * s, self.lo * s)

    def shift(self, s):
        return Interval(self.lo + s, self.hi + s)

    def sign(self):
        """1, -1, or None if the interval straddles (or touches) zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return None

    def abs(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0, max(-self.lo, self.hi))

    @property
    def width(self):
        return self.hi - self.lo

    def midpoint(self):
        return (self.lo + self.hi) / 2

    def __contains__(self, x):
        return self.lo <= x <= self.hi

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi})"


def peval_interval(a, iv):
    acc = Interval(0, 0)
    for c in reversed(a):
        acc = acc * iv + Interval(c, c)
    return acc


# ---------------------------------------------------------------------------
# number fields and their elements
# ---------------------------------------------------------------------------

class NumberField:
    """Q[x]/(p) with a distinguished real root of p singled out by an
    isolating interval.

    p is a monic irreducible integer polynomial, so the quotient is a genuine
    field and exact zero testing is coefficient-wise.  The root interval only
    ever shrinks; refinements are cached on the field object (monotone
    memoization, observable behavior is unchanged).
    """

    __slots__ = ("poly", "_iv", "_sign_lo")

    def __init__(self, poly, interval):
        poly = ptrim(int(c) for c in poly)
        if not poly or poly[-1] != 1:
            raise ValidationError("defining polynomial must be monic over Z")
        lo, hi = Fraction(interval[0]), Fraction(interval[1])
        if pdeg(poly) == 1:
            root = -Fraction(poly[0])
            if not (lo <= root <= hi):
                raise ValidationError("interval does not contain the rational root")
            lo = hi = root
        else:
            slo, shi = peval(poly, lo), peval(poly, hi)
            if slo == 0 or shi == 0 or (slo > 0) == (shi > 0):
                raise ValidationError("defining polynomial must change sign on the interval")
        self.poly = poly
        self._iv = (lo, hi)
        self._sign_lo = 1 if pdeg(poly) == 1 or peval(poly, lo) > 0 else -1

    @property
    def degree(self):
        return pdeg(self.poly)

    @property
    def interval(self):
        return Interval(*self._iv)

    def refined(self, width):
        """Shrink the cached isolating interval to at most ``width`` wide."""
        lo, hi = self._iv
        if self.degree == 1:
            return Interval(lo, hi)
        width = Fraction(width)
        while hi - lo > width:
            mid = (lo + hi) / 2
            smid = peval(self.poly, mid)
            # irreducible of degree >= 2 has no rational roots
            assert smid != 0
            if (smid > 0) == (self._sign_lo > 0):
                lo = mid
            else:
                hi = mid
        self._iv = (lo, hi)
        return Interval(lo, hi)

    def _bisect_once(self):
        lo, hi = self._iv
        if self.degree > 1:
            self.refined((hi - lo) / 2)

    # -- element constructors ------------------------------------------------

    def element(self, coeffs):
        return AlgebraicNumber(self, coeffs)

    def zero(self):
        return self.element([0] * self.degree)

    def one(self):
        return self.from_rational(1)

    def from_rational(self, q):
        c = [Fraction(0)] * self.degree
        c[0] = Fraction(q)
        return self.element(c)

    def gen(self):
        """The distinguished root itself (the class of x)."""
        if self.degree == 1:
            return self.from_rational(-Fraction(self.poly[0]))
        c = [Fraction(0)] * self.degree
        c[1] = Fraction(1)
        return self.element(c)

    def compatible(self, other):
        if self is other:
            return True
        if self.poly != other.poly:
            return False
        a, b = self._iv, other._iv
        return a[0] <= b[1] and b[0] <= a[1]

    @classmethod
    def with_largest_real_root(cls, poly):
        """Field generated by the largest real root of an integer polynomial.

        Returns (field, root).  Raises if the polynomial has no real root.
        """
        sf = squarefree_part(poly)
        roots = isolate_real_roots(sf)
        if not roots:
            raise ValidationError("polynomial has no real root")
        lo, hi = roots[-1]
        for fac, _ in irreducible_factors(sf):
            if pdeg(fac) == 1:
                r = -Fraction(fac[0])
                if lo <= r <= hi:
                    field = cls(fac, (r, r))
                    return field, field.gen()
            else:
                flo, fhi = peval(fac, lo), peval(fac, hi)
                if flo != 0 and fhi != 0 and (flo > 0) != (fhi > 0):
                    field = cls(fac, (lo, hi))
                    return field, field.gen()
        raise ValidationError("no irreducible factor matches the isolated root")

    def __repr__(self):
        lo, hi = self._iv
        return f"NumberField({poly_str(self.poly)}, root in [{lo}, {hi}])"


class AlgebraicNumber:
    """Element of a NumberField: a rational coefficient vector on the power
    basis 1, x, ..., x^(deg-1), always reduced mod p."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > field.degree:
            _, coeffs = pdivmod(coeffs, [Fraction(c) for c in field.poly])
            coeffs = list(coeffs)
        coeffs += [Fraction(0)] * (field.degree - len(coeffs))
        self.field = field
        self.coeffs = tuple(coeffs)

    # -- coercion -------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, AlgebraicNumber):
            if not self.field.compatible(other.field):
                raise ValidationError("algebraic numbers from different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return NotImplemented

    # -- ring structure --------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return AlgebraicNumber(self.field, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return AlgebraicNumber(self.field, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return AlgebraicNumber(self.field, pmul(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return (self ** (-k)).inverse()
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self):
        """Extended-gcd inverse; total because the defining poly is irreducible."""
        if self.is_zero():
            raise ZeroDivisionError("division by zero in number field")
        p = [Fraction(c) for c in self.field.poly]
        r0, r1 = ptrim(p), ptrim(self.coeffs)
        s0, s1 = (), (Fraction(1),)
        while pdeg(r1) > 0:
            q, r = pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, psub(s0, pmul(q, s1))
        assert r1, "irreducible modulus cannot share a factor with a nonzero element"
        inv = pscale(s1, 1 / r1[0])
        return AlgebraicNumber(self.field, inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    # -- exact predicates -------------------------------------------------------

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def as_fraction(self):
        if not self.is_rational():
            raise ValueError("not a rational value")
        return self.coeffs[0]

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.field.poly, self.coeffs))

    # -- order structure ----------------------------------------------------------

    def sign(self):
        """Exact sign via interval evaluation with root-interval bisection."""
        if self.is_zero():
            return 0
        if self.is_rational():
            c = self.coeffs[0]
            return 1 if c > 0 else -1
        for _ in range(_MAX_REFINE):
            s = peval_interval(self.coeffs, self.field.interval).sign()
            if s is not None:
                return s
            self.field._bisect_once()
        raise RuntimeError("sign refinement did not converge")  # pragma: no cover

    def compare(self, other):
        d = self - self._coerce(other)
        return d.sign()

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    # -- enclosures -----------------------------------------------------------------

    def interval(self, width=Fraction(1, 2 ** 40)):
        """Rational enclosure of at most ``width`` wide."""
        if self.is_rational():
            c = self.coeffs[0]
            return Interval(c, c)
        width = Fraction(width)
        iv = peval_interval(self.coeffs, self.field.interval)
        for _ in range(_MAX_REFINE):
            if iv.width <= width:
                return iv
            self.field._bisect_once()
            iv = peval_interval(self.coeffs, self.field.interval)
        raise RuntimeError("interval refinement did not converge")  # pragma: no cover

    def __float__(self):
        return float(self.interval(Fraction(1, 2 ** 64)).midpoint())

    def floor(self):
        """Exact floor as an integer."""
        if self.is_rational():
            c = self.coeffs[0]
            return c.numerator // c.denominator
        iv = self.interval(Fraction(1, 4))
        while (iv.lo.numerator // iv.lo.denominator) != (iv.hi.numerator // iv.hi.denominator):
            iv = self.interval(iv.width / 2)
        return iv.lo.numerator // iv.lo.denominator

    def mod(self, modulus):
        return mod_reduce(self, modulus)

    def __repr__(self):
        terms = []
        for d, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if d == 0:
                terms.append(str(c))
            elif d == 1:
                terms.append(f"{c}*x")
            else:
                terms.append(f"{c}*x^{d}")
        body = " + ".join(terms) if terms else "0"
        return f"<{body} in Q[x]/({poly_str(self.field.poly)})>"


def field_arith(op, a, b):
    """Named entry point for the four field operations."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValidationError(f"unknown field operation {op!r}")


def compare(a, b):
    """Exact three-way comparison of algebraic numbers (or rationals)."""
    if isinstance(a, AlgebraicNumber):
        return a.compare(b)
    if isinstance(b, AlgebraicNumber):
        return -b.compare(a)
    a, b = Fraction(a), Fraction(b)
    return (a > b) - (a < b)


def mod_reduce(a, modulus):
    """a - k*modulus with the integer k chosen so the result lies in
    [0, modulus).  modulus must be positive."""
    if not isinstance(a, AlgebraicNumber) and not isinstance(modulus, AlgebraicNumber):
        a, modulus = Fraction(a), Fraction(modulus)
        if modulus <= 0:
            raise ValidationError("modulus must be positive")
        return a - (a / modulus).numerator // (a / modulus).denominator * modulus
    if not isinstance(a, AlgebraicNumber):
        a = modulus.field.from_rational(a)
    m = a._coerce(modulus)
    if m.sign() <= 0:
        raise ValidationError("modulus must be positive")
    k = (a / m).floor()
    r = a - m * k
    # floor gives 0 <= r < m by construction; assert the exact invariant
    assert r.sign() >= 0 and (r - m).sign() < 0
    return r
