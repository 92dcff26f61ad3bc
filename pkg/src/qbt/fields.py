"""Exact coefficient fields: the rationals and prime fields GF(p).

Rational coefficients are `fractions.Fraction` (always reduced, positive
denominator, so canonical by construction).  Prime-field coefficients are
plain ints in [0, p); p must be an odd prime below 2**31 and is validated
at construction.
"""

from __future__ import annotations

from fractions import Fraction

DEFAULT_PRIME = 32003


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3_317_044_064_679_887_385_961_981."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class QQ:
    """The field of rational numbers.  Elements are Fraction."""

    char = 0

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        return Fraction(x)

    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def inv(a):
        return 1 / a

    @staticmethod
    def div(a, b):
        return a / b

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, QQ)

    def __hash__(self):
        return hash("QQ")


class GF:
    """A prime field GF(p), p an odd prime < 2**31.  Elements are ints in [0, p)."""

    def __init__(self, p: int):
        if p < 3 or p >= 2**31 or not is_prime(p):
            raise ValueError(f"GF modulus must be an odd prime < 2**31, got {p}")
        self.p = p
        self.char = p
        self.zero = 0
        self.one = 1

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 in GF(p)")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, GF) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ_FIELD = QQ()
FP_FIELD = GF(DEFAULT_PRIME)


def field_from_spec(spec: str):
    """Parse a field spec string: 'qq' or 'fp:<p>' (also plain 'fp' = GF(32003))."""
    s = spec.strip().lower()
    if s == "qq":
        return QQ_FIELD
    if s == "fp":
        return FP_FIELD
    if s.startswith("fp:"):
        return GF(int(s[3:]))
    raise ValueError(f"unknown field spec {spec!r} (expected 'qq' or 'fp:<p>')")
