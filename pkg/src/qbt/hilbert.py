"""Hilbert series and polynomials, dimension, degree, sectional genus.

The Hilbert series numerator of a monomial ideal is computed by the pivot
recursion N(gens) = N(gens \\ {g}) - T^deg(g) * N(gens : g), memoized on the
frozen generator set.  The Hilbert polynomial of a homogeneous ideal is read
off the series of the lead-term ideal of a Groebner basis, exactly and in
closed form (never by interpolating Hilbert-function values).

The sectional genus is defined operationally as g = 1 - Q(0) where
Q = Delta^{r-1} P is the (r-1)-st finite difference of the Hilbert
polynomial; for the projectively normal schemes handled here this is the
arithmetic genus of a general curve section.  Inputs outside that regime
get the honest label "arithmetic sectional genus (difference method)".
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from .groebner import GroebnerBasis, Ideal
from .rings import PolyRing, mono_deg


class HilbertPolynomial:
    """Exact univariate polynomial with rational coefficients.

    `coeffs[k]` is the coefficient of t^k.  Degree r = projective dimension
    of the scheme; the binomial-basis view writes
    P(t) = sum_k a_k * C(t, r - k) with integer a_k and a_0 = the degree of
    the scheme.
    """

    def __init__(self, coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, t):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __eq__(self, other):
        if isinstance(other, HilbertPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def first_difference(self) -> "HilbertPolynomial":
        """Backward difference P(t) - P(t-1), the Hilbert polynomial of a
        hyperplane section."""
        r = self.degree
        if r < 0:
            return HilbertPolynomial([])
        new = [Fraction(0)] * max(r, 1)
        # P(t) - P(t-1): expand (t-1)^k binomially
        for k, c in enumerate(self.coeffs):
            for j in range(k):
                sign = -Fraction((-1) ** (k - j))
                new[j] += c * sign * comb(k, j)
        return HilbertPolynomial(new)

    def forward_difference(self) -> "HilbertPolynomial":
        """P(t+1) - P(t), used for the Newton / binomial-basis expansion."""
        r = self.degree
        if r < 0:
            return HilbertPolynomial([])
        new = [Fraction(0)] * max(r, 1)
        for k, c in enumerate(self.coeffs):
            for j in range(k):
                new[j] += c * comb(k, j)
        return HilbertPolynomial(new)

    def binomial_coefficients(self):
        """Integers a_0..a_r with P(t) = sum_k a_k C(t, r-k).

        Newton's forward expansion P(t) = sum_m Delta^m P(0) C(t, m) gives
        a_k = Delta^{r-k} P(0) with the forward difference."""
        r = self.degree
        if r < 0:
            return []
        out = []
        q = self
        for _ in range(r + 1):
            out.append(q(0))
            q = q.forward_difference()
        vals = list(reversed(out))  # vals[k] = forward Delta^{r-k} P(0) = a_k
        ints = []
        for v in vals:
            if v.denominator != 1:
                raise ValueError(f"binomial-basis coefficient {v} is not an integer")
            ints.append(int(v))
        return ints

    def is_integer_valued(self, span=None) -> bool:
        r = max(self.degree, 0)
        span = span if span is not None else r
        return all(self(m).denominator == 1 for m in range(-span, span + 1))

    def __repr__(self):
        return hilbert_poly_to_str(self)


def hilbert_poly_to_str(P: HilbertPolynomial, var: str = "t") -> str:
    """Rational-coefficient form with a common denominator: "(7*t^2+5*t+2)/2"."""
    if P.is_zero():
        return "0"
    den = 1
    for c in P.coeffs:
        den = den * c.denominator // _gcd(den, c.denominator)
    parts = []
    for k in range(P.degree, -1, -1):
        c = P.coeffs[k] * den
        n = int(c)
        if n == 0:
            continue
        mag = abs(n)
        if k == 0:
            body = str(mag)
        elif k == 1:
            body = f"{mag}*{var}" if mag != 1 else var
        else:
            body = f"{mag}*{var}^{k}" if mag != 1 else f"{var}^{k}"
        parts.append(("-" if n < 0 else "+") + body)
    s = "".join(parts).lstrip("+")
    return f"({s})/{den}" if den != 1 else s


def binomial_list_to_str(a) -> str:
    """The paper-style binomial-basis list form: "P = 34, 272, 964, ...\"."""
    return "P = " + ", ".join(str(x) for x in a)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# series of monomial ideals


def _minimalize_monomials(monos):
    monos = sorted(set(monos), key=lambda m: (mono_deg(m), m))
    out = []
    for m in monos:
        if not any(all(x <= y for x, y in zip(n, m)) for n in out):
            out.append(m)
    return tuple(out)


def _colon_mono(gens, g):
    out = []
    for m in gens:
        out.append(tuple(max(x - y, 0) for x, y in zip(m, g)))
    return _minimalize_monomials(out)


def hilbert_series_numerator(gens, nvars: int):
    """Numerator N(T) of the Hilbert series N(T)/(1-T)^nvars of K[x]/M for
    the monomial ideal M; returned as an integer coefficient list.

    Pivot recursion with memoization: N(gens) = N(gens') - T^deg(g) N(gens':g)
    where gens' = gens minus its last generator g.
    """
    gens = _minimalize_monomials(list(gens))
    if any(mono_deg(m) == 0 for m in gens):
        return [0]

    @lru_cache(maxsize=None)
    def rec(ms):
        if not ms:
            return (1,)
        # pick the last (largest) generator as pivot for balanced splits
        g = ms[-1]
        rest = ms[:-1]
        a = rec(rest)
        b = rec(_colon_mono(rest, g))
        d = mono_deg(g)
        out = list(a) + [0] * max(0, d + len(b) - len(a))
        for i, c in enumerate(b):
            out[d + i] -= c
        while out and out[-1] == 0:
            out.pop()
        return tuple(out)

    result = list(rec(gens))
    rec.cache_clear()
    return result if result else [0]


def hilbert_function_from_numerator(num, nvars: int, d: int) -> int:
    """HF(d) = sum_j num[j] * C(d - j + nvars - 1, nvars - 1) (0 for d < j)."""
    total = 0
    for j, c in enumerate(num):
        if c and d - j >= 0:
            total += c * comb(d - j + nvars - 1, nvars - 1)
    return total


def hilbert_polynomial_from_numerator(num, nvars: int) -> HilbertPolynomial:
    """Cancel (1-T) factors against the (1-T)^nvars denominator, then expand
    the closed form sum_j q[j] * C(t - j + D - 1, D - 1)."""
    num = list(num)
    if not num or all(c == 0 for c in num):
        return HilbertPolynomial([])
    k = 0
    while sum(num) == 0:
        # divide by (1 - T): synthetic division
        out = []
        acc = 0
        for c in num[:-1]:
            acc += c
            out.append(acc)
        num = out if out else [0]
        k += 1
        if all(c == 0 for c in num):
            return HilbertPolynomial([])
    D = nvars - k
    if D <= 0:
        return HilbertPolynomial([])
    coeffs = [Fraction(0)] * D
    for j, c in enumerate(num):
        if c == 0:
            continue
        # C(t - j + D - 1, D - 1) as a polynomial in t
        poly = [Fraction(1)]
        for i in range(D - 1):
            # multiply by (t - j + D - 1 - i)
            shift = Fraction(D - 1 - i - j)
            poly = [Fraction(0)] + poly
            for q in range(len(poly) - 1):
                poly[q] += poly[q + 1] * shift
        fact = 1
        for i in range(1, D):
            fact *= i
        for q in range(len(poly)):
            coeffs[q] += Fraction(c) * poly[q] / fact
    return HilbertPolynomial(coeffs)


# ---------------------------------------------------------------------------
# ideal-level interface


def leading_term_ideal(I: Ideal, order=None):
    gb = I.gb(order)
    return [g.lm() for g in gb.elements]


def hilbert_polynomial(I: Ideal, order=None) -> HilbertPolynomial:
    """Hilbert polynomial of R/I for homogeneous I (zero ideal of the empty
    scheme gives the zero polynomial)."""
    if not I.is_homogeneous():
        raise ValueError("Hilbert polynomial needs a homogeneous ideal")
    lts = leading_term_ideal(I, order)
    num = hilbert_series_numerator(lts, I.ring.nvars)
    return hilbert_polynomial_from_numerator(num, I.ring.nvars)


def hilbert_function(I: Ideal, d: int, order=None) -> int:
    lts = leading_term_ideal(I, order)
    num = hilbert_series_numerator(lts, I.ring.nvars)
    return hilbert_function_from_numerator(num, I.ring.nvars, d)


def dim_degree_genus(I: Ideal, order=None):
    """(r, lambda, g): projective dimension, degree, and sectional genus by
    the finite-difference rule g = 1 - (Delta^{r-1} P)(0)."""
    P = hilbert_polynomial(I, order)
    if P.is_zero():
        raise ValueError("empty scheme has no dimension/degree/genus")
    r = P.degree
    lead = P.coeffs[-1]
    fact = 1
    for i in range(1, r + 1):
        fact *= i
    lam = lead * fact
    if lam.denominator != 1:
        raise ArithmeticError("degree is not an integer; corrupt Hilbert data")
    Q = P
    for _ in range(max(r - 1, 0)):
        Q = Q.first_difference()
    g = 1 - Q(0)
    if g.denominator != 1:
        raise ArithmeticError("sectional genus is not an integer")
    return r, int(lam), int(g)


def projective_dimension(I: Ideal, order=None) -> int:
    """deg of the Hilbert polynomial; -1 for the empty scheme."""
    P = hilbert_polynomial(I, order)
    return P.degree if not P.is_zero() else -1


def graded_piece_dim(I: Ideal, d: int, order=None) -> int:
    """dim of the degree-d part of I: C(n+d, d) - HF(R/I, d)."""
    n = I.ring.nvars - 1
    return comb(n + d, d) - hilbert_function(I, d, order)
