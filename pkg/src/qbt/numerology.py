"""Closed-form numerical constraints on quadratic birational transformations
into hypersurfaces: dimension/defect formulas, parity and divisibility
obstructions, the Hilbert-polynomial constraint solver, Chern/Segre class
relations for 3-folds in P^8, the double-point relation, and the admissible
case enumeration.  Everything is exact integer / rational arithmetic.

Symbols: a transformation P^n -> S in P^{n+1} given by quadrics with
inverse of degree d, image hypersurface of degree Delta, base locus B of
dimension r, degree lam, sectional genus g, secant defect delta; the
inverse's base locus has dimension r_prime.  For Fano base loci the index
is i and the coindex c = r + 1 - i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .hilbert import HilbertPolynomial


@dataclass
class TransformationProfile:
    n: int
    d: int
    Delta: int
    r: int
    delta: int
    r_prime: int
    lam: int | None = None
    g: int | None = None
    q: int | None = None
    fano_index: int | None = None
    coindex: int | None = None
    flags: list = field(default_factory=list)

    def validate(self):
        num_r = self.d * self.n - self.Delta - 3 * self.d + 3
        num_delta = self.n - 2 * self.Delta - 2 * self.d + 4
        num_rp = 2 * (self.d * self.n - self.n + self.Delta - self.d - 1)
        den = 2 * self.d - 1
        assert num_r == self.r * den and num_delta == self.delta * den
        assert num_rp == self.r_prime * den
        assert self.delta == self.n - self.r_prime - 2
        if self.fano_index is not None:
            assert 2 * self.fano_index == self.r + self.delta
            assert self.coindex == self.r + 1 - self.fano_index

    def as_dict(self):
        d = {
            "n": self.n, "d": self.d, "delta_deg": self.Delta,
            "r": self.r, "delta": self.delta, "r_prime": self.r_prime,
            "flags": list(self.flags),
        }
        for k, v in (("lambda", self.lam), ("g", self.g), ("q", self.q),
                     ("fano_index", self.fano_index), ("coindex", self.coindex)):
            if v is not None:
                d[k] = v
        return d


@dataclass
class Inadmissible:
    reason: str


def dims_from(n: int, d: int, Delta: int):
    """(r, delta, r_prime) from the canonical-class comparison on the
    resolved map; Inadmissible when any value is non-integral or negative."""
    if n < 3 or d < 1 or Delta < 2:
        return Inadmissible(f"out of range: n={n}, d={d}, Delta={Delta}")
    den = 2 * d - 1
    vals = {}
    for name, num in (
        ("r", d * n - Delta - 3 * d + 3),
        ("delta", n - 2 * Delta - 2 * d + 4),
        ("r_prime", 2 * (d * n - n + Delta - d - 1)),
    ):
        if num % den:
            return Inadmissible(f"{name} = {num}/{den} is not integral")
        v = num // den
        if v < 0:
            return Inadmissible(f"{name} = {v} < 0")
        vals[name] = v
    return vals["r"], vals["delta"], vals["r_prime"]


def divisibility_ok(r: int, delta: int) -> bool:
    """r = delta mod 2^floor((delta-1)/2); vacuous for delta < 3."""
    if delta < 3:
        return True
    return (r - delta) % (2 ** ((delta - 1) // 2)) == 0


def parity_obstruction(d: int, Delta: int, delta: int) -> bool:
    """True = obstructed: a Fano base locus needs 2i = r + delta
    = Delta + (d+1) delta + d - 3 to be even; odd parity is a contradiction."""
    if delta <= 0:
        raise ValueError("parity obstruction applies to the Fano branch delta > 0")
    return (Delta + (d + 1) * delta + d - 3) % 2 == 1


# exclusions the paper settles by classification rather than by one of the
# closed-form constraints; admissible_cases annotates instead of dropping
CLASSIFICATION_EXCLUSIONS = {
    (2, 6, 3, 2): "excluded: the (r,n)=(2,6) base locus forces (d,Delta)=(3,2)",
    (3, 8, 4, 2): "excluded: double-point relation forces (d,Delta)=(4,2) when K trivial on sections",
}


def admissible_cases(d_max: int, delta_max: int, n_max: int, annotate: bool = True):
    """All profiles with 2 <= d <= d_max, 2 <= Delta <= delta_max,
    3 <= n <= n_max passing integrality, nonnegativity, divisibility and
    parity; classification-level exclusions are attached as flags."""
    if d_max < 2 or delta_max < 2 or n_max < 3:
        raise ValueError("bounds must allow d >= 2, Delta >= 2, n >= 3")
    out = []
    for d in range(2, d_max + 1):
        for Delta in range(2, delta_max + 1):
            for n in range(3, n_max + 1):
                dims = dims_from(n, d, Delta)
                if isinstance(dims, Inadmissible):
                    continue
                r, delta, r_prime = dims
                if not divisibility_ok(r, delta):
                    continue
                if delta > 0 and parity_obstruction(d, Delta, delta):
                    continue
                prof = TransformationProfile(n, d, Delta, r, delta, r_prime)
                if delta > 0:
                    prof.fano_index = (r + delta) // 2
                    prof.coindex = r + 1 - prof.fano_index
                if annotate:
                    key = (r, n, Delta, d)
                    if key in CLASSIFICATION_EXCLUSIONS:
                        prof.flags.append(CLASSIFICATION_EXCLUSIONS[key])
                    # double-point arithmetic backs the (3,8) exclusion
                    if key == (3, 8, 4, 2) and (d, Delta) not in double_point_solve(12, 7):
                        if "double-point" not in " ".join(prof.flags):
                            prof.flags.append("double-point relation fails at (lam,g)=(12,7)")
                out.append(prof)
    return out


# ---------------------------------------------------------------------------
# Hilbert polynomial constraint solver


class Underdetermined:
    def __init__(self, dim: int):
        self.dim = dim

    def __repr__(self):
        return f"Underdetermined(solution space dim {self.dim})"


class Inconsistent:
    def __repr__(self):
        return "Inconsistent"


def hilbert_poly_from_constraints(r: int, n: int, i: int):
    """Solve the linear constraints on a degree-r Hilbert polynomial of a
    linearly normal Fano base locus in P^n of index i:

      P(0) = 1, P(1) = n+1, P(2) = (n^2+n-2)/2,
      P(-1) = ... = P(-i+1) = 0,  and  P(t) = (-1)^r P(-t-i) identically.

    Returns HilbertPolynomial, Underdetermined(dim), or Inconsistent.
    """
    if r < 1 or i < 1:
        raise ValueError("need r >= 1 and i >= 1")
    ncoef = r + 1
    rows = []
    rhs = []

    def eval_row(t):
        return [Fraction(t) ** k for k in range(ncoef)]

    rows.append(eval_row(0)); rhs.append(Fraction(1))
    rows.append(eval_row(1)); rhs.append(Fraction(n + 1))
    rows.append(eval_row(2)); rhs.append(Fraction(n * n + n - 2, 2))
    for t in range(-1, -i, -1):
        rows.append(eval_row(t)); rhs.append(Fraction(0))
    # functional equation P(t) - (-1)^r P(-t-i) = 0, coefficientwise in t
    sign = (-1) ** r
    func = [[Fraction(0)] * ncoef for _ in range(ncoef)]
    for k in range(ncoef):
        func[k][k] += 1
        # (-t-i)^k = sum_j C(k,j) (-t)^j (-i)^(k-j)
        for j in range(k + 1):
            func[j][k] -= sign * comb(k, j) * Fraction((-1) ** j) * Fraction((-i) ** (k - j))
    for row in func:
        rows.append(row); rhs.append(Fraction(0))
    sol = _solve_linear(rows, rhs, ncoef)
    if sol == "inconsistent":
        return Inconsistent()
    coeffs, nullity = sol
    if nullity > 0:
        return Underdetermined(nullity)
    P = HilbertPolynomial(coeffs)
    if not P.is_integer_valued():
        return Inconsistent()
    return P


def _solve_linear(rows, rhs, ncols):
    aug = [row[:] + [b] for row, b in zip(rows, rhs)]
    lead = 0
    pivots = []
    for c in range(ncols):
        pr = next((k for k in range(lead, len(aug)) if aug[k][c] != 0), None)
        if pr is None:
            continue
        aug[lead], aug[pr] = aug[pr], aug[lead]
        inv = 1 / aug[lead][c]
        aug[lead] = [x * inv for x in aug[lead]]
        for k in range(len(aug)):
            if k != lead and aug[k][c] != 0:
                f = aug[k][c]
                aug[k] = [a - f * b for a, b in zip(aug[k], aug[lead])]
        pivots.append(c)
        lead += 1
    for k in range(lead, len(aug)):
        if aug[k][ncols] != 0:
            return "inconsistent"
    coeffs = [Fraction(0)] * ncols
    for k, c in enumerate(pivots):
        coeffs[c] = aug[k][ncols]
    return coeffs, ncols - len(pivots)


# ---------------------------------------------------------------------------
# Chern / Segre / double point (3-folds in P^8)


@dataclass
class ChernSegreRecord:
    """Hyperplane-weighted degrees s_j of the normal-bundle Segre classes
    and c_j of the tangent Chern classes of a 3-fold in P^8; K_S^2 of its
    general surface section when chi(O_S) is supplied."""

    s1: int
    s2: int
    s3: int
    c1: int
    c2: int
    c3: int
    K_S_squared: int | None = None

    def validate(self, lam: int):
        assert self.s1 == self.c1 - 9 * lam
        assert self.s2 == self.c2 - 9 * self.c1 + 45 * lam
        assert self.s3 == self.c3 - 9 * self.c2 + 45 * self.c1 - 165 * lam


def chern_segre_3fold(lam: int, g: int, d: int, Delta: int, chi_OS: int | None = None) -> ChernSegreRecord:
    """Evaluate the seven linear formulas tying (lam, g, d, Delta) to the
    Segre/Chern degrees of a 3-fold base locus in P^8."""
    s1 = -7 * lam - 2 * g + 2
    s2 = 14 * lam + 28 * g - d * Delta + 100
    s3 = 112 * lam - 224 * g + (16 * d - 1) * Delta - 1568
    c1 = 2 * lam - 2 * g + 2
    c2 = -13 * lam + 10 * g - d * Delta + 118
    c3 = 70 * lam - 44 * g + (7 * d - 1) * Delta - 596
    ks = None
    if chi_OS is not None:
        ks = 14 * lam + 12 * chi_OS - 12 * g + d * Delta - 116
    rec = ChernSegreRecord(s1, s2, s3, c1, c2, c3, ks)
    rec.validate(lam)
    return rec


def blowup_degree_identities(s1: int, s2: int, s3: int, lam: int):
    """(d*Delta, deg(map)*Delta) from the 7th and 8th powers of the strict
    transform class 2H - E on the blow-up; consistency needs Delta | d*Delta."""
    d_delta = -s2 - 14 * s1 - 84 * lam + 128
    delta_deg = -s3 - 16 * s2 - 112 * s1 - 448 * lam + 256
    return d_delta, delta_deg


def double_point_solve(lam: int, g: int, chi_O: int = 1, d_max: int = 64):
    """Integer pairs (d >= 2, Delta >= 2) satisfying the double-point count
    2(2d-1) = lam^2 - [s3 + 7 s2 H + 21 s1 H^2 + 35 lam] for a 3-fold in P^8
    with K = -H (so c1^3 = lam, c1 c2 = 24 chi_O); at (lam, g) = (12, 7)
    this is 2(2d-1) = (7d-1) Delta - 40."""
    out = []
    s1H2 = -lam
    s2H = lam - 24 * chi_O
    for d in range(2, d_max + 1):
        # c3 = 70 lam - 44 g + (7d-1) Delta - 596;  s3 = -c3 + 2*24 chi - lam
        # equation: 2(2d-1) = lam^2 - (s3 + 7 s2H + 21 s1H2 + 35 lam)
        # solve for Delta
        const = -(70 * lam - 44 * g - 596) + 48 * chi_O - lam
        rhs = lam * lam - (const + 7 * s2H + 21 * s1H2 + 35 * lam)
        num = 2 * (2 * d - 1) - rhs
        den = 7 * d - 1
        # (7d-1) Delta = num
        if num % den == 0:
            Delta = num // den
            if Delta >= 2:
                out.append((d, Delta))
    return out


def lines_bound_check(lam: int, k: int, d: int) -> bool:
    """lam - 8 + k <= d: the count of the tangential-projection image degree
    against the inverse degree."""
    return lam - 8 + k <= d


# ---------------------------------------------------------------------------
# profile families


def profile_families(case: str, param: int):
    """The printed one-parameter families of low-dimensional base loci.

    '2fold_P6' with parameter lam: P = (lam t^2 + (26-3 lam) t + 2 lam-12)/2
    and g = 2(lam-6); only lam in {6, 7} pass the Castelnuovo gate, and
    lam = 6 is excluded by surface classification.

    '3fold_P8' with parameter q: chi conditions P(-1)=0, P(0)=1-q, P(1)=9,
    P(2)=35 determine P; lam = 11-3q, g = 5-5q; q = 1 is excluded by
    threefold classification, leaving q = 0.
    """
    if case == "2fold_P6":
        lam = param
        P = HilbertPolynomial([lam - 6, Fraction(26 - 3 * lam, 2), Fraction(lam, 2)])
        g = 2 * (lam - 6)
        flags = []
        if lam < 6:
            flags.append("excluded: sectional genus would be negative")
        if lam > 7:
            flags.append("excluded: Castelnuovo bound forces lam <= 7")
        if lam == 6:
            flags.append("excluded by surface classification")
        return {"P": P, "lam": lam, "g": g, "flags": flags}
    if case == "3fold_P8":
        q = param
        if q not in (0, 1):
            return {"flags": [f"excluded: irregularity q={q} not in {{0,1}}"], "q": q}
        # cubic through (-1, 0), (0, 1-q), (1, 9), (2, 35)
        pts = [(-1, 0), (0, 1 - q), (1, 9), (2, 35)]
        rows = [[Fraction(t) ** k for k in range(4)] for t, _ in pts]
        rhs = [Fraction(v) for _, v in pts]
        sol = _solve_linear(rows, rhs, 4)
        coeffs, nullity = sol
        P = HilbertPolynomial(coeffs)
        lam = 11 - 3 * q
        g = 5 - 5 * q
        flags = [] if q == 0 else ["excluded by threefold classification"]
        return {"P": P, "lam": lam, "g": g, "q": q, "flags": flags}
    raise ValueError(f"unknown family case {case!r}")
