"""Sparse exact multivariate polynomials.

A monomial is an exponent tuple (one natural number per variable).  A
polynomial is held in canonical form: a tuple of (monomial, coefficient)
terms sorted strictly descending in the ring's monomial order, with no zero
coefficients and no repeated monomials; the zero polynomial is the empty
tuple.  Values are immutable after construction and safe to share between
threads.

Exponents are capped (default 2**20); overflow on multiplication raises
ExponentOverflowError rather than wrapping.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ExponentOverflowError, ParseError, RingMismatchError
from .fields import GF, QQ, QQ_FIELD
from .orders import GREVLEX, MonomialOrder

EXP_CAP = 1 << 20


class PolyRing:
    """Ring descriptor: ordered variable names, coefficient field, monomial order.

    `weights` (optional, one positive int per variable) only affects the
    notion of weighted degree used by degree-truncated Groebner runs; the
    monomial order itself is independent of it.
    """

    def __init__(self, names, field=QQ_FIELD, order: MonomialOrder = GREVLEX, weights=None):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        self.names = names
        self.nvars = len(names)
        self.field = field
        self.order = order
        self.weights = tuple(weights) if weights is not None else (1,) * self.nvars
        if len(self.weights) != self.nvars or any(w < 1 for w in self.weights):
            raise ValueError("weights must be positive, one per variable")
        self._index = {nm: i for i, nm in enumerate(names)}
        self.zero_mono = (0,) * self.nvars

    @staticmethod
    def make(prefix: str, n: int, field=QQ_FIELD, order: MonomialOrder = GREVLEX) -> "PolyRing":
        return PolyRing([f"{prefix}{i}" for i in range(n)], field, order)

    def clone(self, field=None, order=None, weights=None) -> "PolyRing":
        return PolyRing(
            self.names,
            self.field if field is None else field,
            self.order if order is None else order,
            self.weights if weights is None else weights,
        )

    def gen(self, i: int) -> "Polynomial":
        m = [0] * self.nvars
        m[i] = 1
        return Polynomial(self, ((tuple(m), self.field.one),))

    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def zero(self) -> "Polynomial":
        return Polynomial(self, ())

    def one(self) -> "Polynomial":
        return Polynomial(self, ((self.zero_mono, self.field.one),))

    def const(self, c) -> "Polynomial":
        c = self.field(c)
        if c == self.field.zero:
            return self.zero()
        return Polynomial(self, ((self.zero_mono, c),))

    def from_dict(self, d: dict) -> "Polynomial":
        zero = self.field.zero
        key = self.order.key
        terms = [(m, c) for m, c in d.items() if c != zero]
        terms.sort(key=lambda t: key(t[0]), reverse=True)
        return Polynomial(self, tuple(terms))

    def wdeg(self, m) -> int:
        w = self.weights
        return sum(e * wi for e, wi in zip(m, w))

    def same_variables(self, other: "PolyRing") -> bool:
        return self.names == other.names and self.field == other.field

    def __repr__(self):
        f = repr(self.field)
        return f"PolyRing({','.join(self.names)}; {f}; {self.order})"

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.names == other.names
            and self.field == other.field
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.names, self.field, self.order))


def mono_mul(a, b):
    m = tuple(x + y for x, y in zip(a, b))
    for e in m:
        if e > EXP_CAP:
            raise ExponentOverflowError(f"exponent {e} exceeds cap {EXP_CAP}")
    return m


def mono_divides(a, b) -> bool:
    """True iff monomial a divides monomial b."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_div(b, a):
    """b / a, assuming a divides b."""
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def mono_deg(m) -> int:
    return sum(m)


class Polynomial:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms):
        self.ring = ring
        self.terms = terms  # tuple of (monomial, coeff), sorted descending

    # -- basic structure ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def lt(self):
        """Leading (monomial, coeff)."""
        return self.terms[0]

    def lm(self):
        return self.terms[0][0]

    def lc(self):
        return self.terms[0][1]

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(mono_deg(m) for m, _ in self.terms)

    def wdegree(self) -> int:
        if not self.terms:
            return -1
        return max(self.ring.wdeg(m) for m, _ in self.terms)

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        d = mono_deg(self.terms[0][0])
        return all(mono_deg(m) == d for m, _ in self.terms)

    def is_weighted_homogeneous(self) -> bool:
        if not self.terms:
            return True
        d = self.ring.wdeg(self.terms[0][0])
        return all(self.ring.wdeg(m) == d for m, _ in self.terms)

    def as_dict(self) -> dict:
        return dict(self.terms)

    def variables_used(self):
        used = [False] * self.ring.nvars
        for m, _ in self.terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return {i for i, u in enumerate(used) if u}

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.const(other)
        self._check(other)
        d = dict(self.terms)
        zero = self.ring.field.zero
        for m, c in other.terms:
            s = d.get(m, zero) + c
            if isinstance(s, int):
                s %= self.ring.field.p
            if s == zero:
                d.pop(m, None)
            else:
                d[m] = s
        return self.ring.from_dict(d)

    def __neg__(self):
        neg = self.ring.field.neg
        return Polynomial(self.ring, tuple((m, neg(c)) for m, c in self.terms))

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.const(other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.const(other)
        self._check(other)
        if not self.terms or not other.terms:
            return self.ring.zero()
        field = self.ring.field
        zero = field.zero
        d: dict = {}
        p = field.char
        if p:
            for m1, c1 in self.terms:
                for m2, c2 in other.terms:
                    m = mono_mul(m1, m2)
                    d[m] = (d.get(m, 0) + c1 * c2) % p
        else:
            for m1, c1 in self.terms:
                for m2, c2 in other.terms:
                    m = mono_mul(m1, m2)
                    s = d.get(m, zero) + c1 * c2
                    d[m] = s
        return self.ring.from_dict(d)

    def __rmul__(self, other):
        return self * other

    def scale(self, c) -> "Polynomial":
        field = self.ring.field
        c = field(c)
        if c == field.zero:
            return self.ring.zero()
        mul = field.mul
        return Polynomial(self.ring, tuple((m, mul(co, c)) for m, co in self.terms))

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.lc()))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            if other == 0:
                return not self.terms
            other = self.ring.const(other)
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, self.terms))

    # -- calculus / evaluation ----------------------------------------------

    def diff(self, i: int) -> "Polynomial":
        """Formal partial derivative with respect to variable i."""
        field = self.ring.field
        d: dict = {}
        for m, c in self.terms:
            e = m[i]
            if e == 0:
                continue
            mm = m[:i] + (e - 1,) + m[i + 1 :]
            d[mm] = d.get(mm, field.zero) + c * e
            if field.char:
                d[mm] %= field.char
        return self.ring.from_dict(d)

    def eval(self, point):
        """Evaluate at a point (list of field elements)."""
        field = self.ring.field
        point = [field(v) for v in point]
        total = field.zero
        for m, c in self.terms:
            v = c
            for i, e in enumerate(m):
                if e:
                    v = field.mul(v, pow(point[i], e, field.char) if field.char else point[i] ** e)
            total = field.add(total, v)
        return total

    def map_coefficients(self, target_ring: PolyRing) -> "Polynomial":
        """Reinterpret in a ring with the same variables (field/order may differ)."""
        if target_ring.names != self.ring.names:
            raise RingMismatchError("variable names differ")
        f = target_ring.field
        d: dict = {}
        for m, c in self.terms:
            nc = f(c)
            if nc != f.zero:
                d[m] = nc
        return target_ring.from_dict(d)

    # -- printing ------------------------------------------------------------

    def __repr__(self):
        return poly_to_str(self)

    def __str__(self):
        return poly_to_str(self)


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    """add | sub | mul on two polynomials of the same ring."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def substitute(f: Polynomial, images, target_ring: PolyRing | None = None,
               require_homogeneous: bool = True) -> Polynomial:
    """Replace each variable of f by the corresponding image polynomial.

    All images must live in one ring; when `require_homogeneous` is set they
    must be homogeneous of one common degree e (or constants), so that a
    homogeneous f of degree k maps to a homogeneous polynomial of degree k*e.
    """
    if len(images) != f.ring.nvars:
        raise ValueError(f"need {f.ring.nvars} images, got {len(images)}")
    if target_ring is None:
        if not images:
            raise ValueError("cannot infer target ring from empty image list")
        target_ring = images[0].ring
    images = list(images)
    for g in images:
        if g.ring != target_ring:
            raise RingMismatchError("images live in different rings")
    if require_homogeneous:
        degs = {g.degree() for g in images if g and g.degree() > 0}
        if len(degs) > 1:
            raise ValueError(f"image degrees are not equal: {sorted(degs)}")
        for g in images:
            if g and not g.is_homogeneous():
                raise ValueError("inhomogeneous image polynomial")
    result = target_ring.zero()
    pow_cache: dict = {}

    def img_pow(i, e):
        key = (i, e)
        if key not in pow_cache:
            pow_cache[key] = images[i] ** e
        return pow_cache[key]

    for m, c in f.terms:
        t = target_ring.const(c)
        for i, e in enumerate(m):
            if e:
                t = t * img_pow(i, e)
        result = result + t
    return result


def jacobian(forms):
    """Matrix of formal partials: entry (i, j) = d forms[i] / d x_j."""
    if not forms:
        return []
    ring = forms[0].ring
    for g in forms:
        if g.ring != ring:
            raise RingMismatchError("jacobian of forms in different rings")
    return [[g.diff(j) for j in range(ring.nvars)] for g in forms]


# -- gcd / content --------------------------------------------------------


def exact_div(f: Polynomial, g: Polynomial) -> Polynomial:
    """f / g when g divides f exactly; raises ValueError otherwise."""
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    ring = f.ring
    field = ring.field
    rem = dict(f.terms)
    key = ring.order.key
    quo: dict = {}
    glm, glc = g.lt()
    ginv = field.inv(glc)
    while rem:
        m = max(rem, key=key)
        c = rem[m]
        if not mono_divides(glm, m):
            raise ValueError("not an exact division")
        qm = mono_div(m, glm)
        qc = field.mul(c, ginv)
        quo[qm] = qc
        for gm, gc in g.terms:
            mm = mono_mul(qm, gm)
            s = rem.get(mm, field.zero) - qc * gc if field.char == 0 else (
                rem.get(mm, 0) - qc * gc) % field.char
            if s == field.zero:
                rem.pop(mm, None)
            else:
                rem[mm] = s
    return ring.from_dict(quo)


def _to_univariate(f: Polynomial, var: int):
    """View f as a list of coefficient polynomials in the remaining variables,
    indexed by the degree in `var`."""
    ring = f.ring
    coeffs: dict = {}
    for m, c in f.terms:
        e = m[var]
        mm = m[:var] + (0,) + m[var + 1 :]
        coeffs.setdefault(e, {})[mm] = c
    top = max(coeffs) if coeffs else -1
    return [ring.from_dict(coeffs.get(e, {})) for e in range(top + 1)]


def _from_univariate(coeffs, var: int, ring: PolyRing) -> Polynomial:
    d: dict = {}
    for e, p in enumerate(coeffs):
        for m, c in p.terms:
            mm = m[:var] + (e,) + m[var + 1 :]
            d[mm] = c
    return ring.from_dict(d)


def _gcd_pair(f: Polynomial, g: Polynomial, level: int) -> Polynomial:
    """Multivariate gcd by primitive pseudo-remainder sequences in the last
    active variable.  `level` = number of variables still in play (f, g only
    use variables < level)."""
    ring = f.ring
    if f.is_zero():
        return g.monic() if g else g
    if g.is_zero():
        return f.monic()
    while level > 0 and all(m[level - 1] == 0 for m, _ in f.terms) and all(
        m[level - 1] == 0 for m, _ in g.terms
    ):
        level -= 1
    if level == 0:
        return ring.one()
    var = level - 1
    fu = _to_univariate(f, var)
    gu = _to_univariate(g, var)
    if len(fu) == 1 and len(gu) == 1:
        # var does not actually occur: recurse below it
        return _gcd_pair(f, g, level - 1)

    def content(coeffs):
        acc = ring.zero()
        for p in coeffs:
            acc = _gcd_pair(acc, p, level - 1) if acc else (p.monic() if p else p)
        return acc if acc else ring.zero()

    cf = content(fu)
    cg = content(gu)
    cont = _gcd_pair(cf, cg, level - 1)
    a = [exact_div(p, cf) if p else p for p in fu]
    b = [exact_div(p, cg) if p else p for p in gu]
    if len(a) < len(b):
        a, b = b, a
    # primitive pseudo-remainder sequence in `var`
    while any(p for p in b):
        r = _pseudo_rem(a, b, ring)
        if any(p for p in r):
            cr = content(r)
            r = [exact_div(p, cr) if p else p for p in r]
        a, b = b, r
    g1 = _from_univariate(a, var, ring)
    cg1 = content(_to_univariate(g1, var))
    g1 = exact_div(g1, cg1)
    out = g1 * cont
    return out.monic()


def _pseudo_rem(a, b, ring: PolyRing):
    """Pseudo-remainder of univariate-with-poly-coefficients a by b."""
    da, db = len(a) - 1, len(b) - 1
    lb = b[db]
    r = list(a)
    while len(r) - 1 >= db and any(p for p in r):
        while r and not r[-1]:
            r.pop()
        if len(r) - 1 < db:
            break
        dr = len(r) - 1
        lr = r[dr]
        shift = dr - db
        r = [p * lb for p in r]
        for i in range(db + 1):
            r[shift + i] = r[shift + i] - lr * b[i]
        r.pop()
        while r and not r[-1]:
            r.pop()
    return r if r else [ring.zero()]


def content_and_gcd(polys) -> Polynomial:
    """Gcd of a nonempty list of polynomials (monic normalization).

    Computed by iterated pseudo-remainder gcds with content extraction;
    adequate at corpus sizes.  The gcd of coprime forms is 1.
    """
    polys = list(polys)
    if not polys:
        raise ValueError("gcd of empty list")
    ring = polys[0].ring
    acc = ring.zero()
    for p in polys:
        if p.ring != ring:
            raise RingMismatchError("gcd of polynomials in different rings")
        acc = _gcd_pair(acc, p, ring.nvars) if acc else (p.monic() if p else p)
        if acc and acc.degree() == 0:
            return ring.one()
    return acc


# -- text form --------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<pow>\^|\*\*)|(?P<mul>\*)|(?P<plus>\+)|(?P<minus>-)|(?P<lpar>\()|(?P<rpar>\)))"
)


def poly_to_str(f: Polynomial) -> str:
    """Canonical text form: terms in sorted order joined by ' + ' / ' - ',
    '*' between coefficient and variables, '^' for powers."""
    if not f.terms:
        return "0"
    names = f.ring.names
    out = []
    for idx, (m, c) in enumerate(f.terms):
        neg = False
        if isinstance(c, Fraction) and c < 0:
            neg, c = True, -c
        cs = str(c)
        vars_part = "*".join(
            f"{names[i]}^{e}" if e > 1 else names[i] for i, e in enumerate(m) if e
        )
        if vars_part:
            body = vars_part if cs == "1" else f"{cs}*{vars_part}"
        else:
            body = cs
        if idx == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def poly_from_str(ring: PolyRing, text: str) -> Polynomial:
    """Parse the text form (arbitrary whitespace, '*' optional between
    coefficient and variables, '^' or '**' for powers)."""
    field = ring.field
    pos = 0
    n = len(text)
    terms: dict = {}

    def error(msg):
        raise ParseError(f"{msg} at position {pos} in {text!r}")

    sign = 1
    expect_term = True
    cur_coeff = None
    cur_mono = None

    def flush():
        nonlocal cur_coeff, cur_mono, sign
        if cur_coeff is None and cur_mono is None:
            return
        c = field(Fraction(1) if cur_coeff is None else cur_coeff)
        if sign < 0:
            c = field.neg(c)
        m = tuple(cur_mono) if cur_mono is not None else ring.zero_mono
        prev = terms.get(m, field.zero)
        s = prev + c
        if field.char:
            s %= field.char
        if s == field.zero:
            terms.pop(m, None)
        else:
            terms[m] = s
        cur_coeff = None
        cur_mono = None
        sign = 1

    while pos < n:
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            if text[pos:].strip() == "":
                break
            error("unexpected character")
        pos = mt.end()
        if mt.group("num"):
            s = mt.group("num")
            val = Fraction(int(s.split("/")[0]), int(s.split("/")[1])) if "/" in s else Fraction(int(s))
            if expect_term or cur_coeff is None and cur_mono is None:
                cur_coeff = val
                expect_term = False
            elif cur_mono is None and cur_coeff is not None:
                cur_coeff = cur_coeff * val
            else:
                error("number after variables (use '^' for powers)")
        elif mt.group("name"):
            nm = mt.group("name")
            if nm not in ring._index:
                error(f"unknown variable {nm!r}")
            i = ring._index[nm]
            e = 1
            save = pos
            mt2 = _TOKEN.match(text, pos)
            if mt2 and mt2.group("pow"):
                pos = mt2.end()
                mt3 = _TOKEN.match(text, pos)
                if not (mt3 and mt3.group("num") and "/" not in mt3.group("num")):
                    error("expected integer exponent")
                e = int(mt3.group("num"))
                pos = mt3.end()
            else:
                pos = save
            if cur_mono is None:
                cur_mono = [0] * ring.nvars
            cur_mono[i] += e
            expect_term = False
        elif mt.group("mul"):
            if expect_term:
                error("unexpected '*'")
        elif mt.group("plus") or mt.group("minus"):
            if expect_term and cur_coeff is None and cur_mono is None:
                if mt.group("minus"):
                    sign = -sign
            else:
                flush()
                if mt.group("minus"):
                    sign = -1
                expect_term = True
        elif mt.group("pow"):
            error("misplaced power")
        elif mt.group("lpar") or mt.group("rpar"):
            error("parentheses are not part of the polynomial format")
    flush()
    return ring.from_dict(terms)
