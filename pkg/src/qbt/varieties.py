"""Geometry probes: quadric rank, singular locus dimension, secant variety
by join elimination, and the Castelnuovo general-position rank test.
"""

from __future__ import annotations

import random
from itertools import combinations
from math import comb

import numpy as np

from .errors import InfeasibleError
from .fields import GF
from .groebner import DEFAULT_PAIR_BUDGET, Ideal, eliminate, project_to_ring
from .hilbert import hilbert_polynomial, projective_dimension
from .linalg import rank_mod
from .rings import PolyRing, Polynomial, jacobian, poly_from_str, substitute


class QuadricForm:
    """Symmetric coefficient matrix of a quadratic form (char != 2):
    entry (i, i) is the x_i^2 coefficient, entry (i, j) half the x_i x_j one."""

    def __init__(self, ring: PolyRing, matrix):
        self.ring = ring
        self.matrix = matrix

    @staticmethod
    def from_polynomial(q: Polynomial) -> "QuadricForm":
        ring = q.ring
        field = ring.field
        if field.char == 2:
            raise ValueError("quadric forms need characteristic != 2")
        n = ring.nvars
        half = field.div(field.one, field(2))
        m = [[field.zero] * n for _ in range(n)]
        for mono, c in q.terms:
            if sum(mono) != 2:
                raise ValueError("not a quadratic form")
            idx = [i for i, e in enumerate(mono) for _ in range(e)]
            i, j = idx
            if i == j:
                m[i][i] = c
            else:
                h = field.mul(c, half)
                m[i][j] = field.add(m[i][j], h)
                m[j][i] = field.add(m[j][i], h)
        return QuadricForm(ring, m)

    def to_polynomial(self) -> Polynomial:
        ring = self.ring
        field = ring.field
        d: dict = {}
        n = ring.nvars
        for i in range(n):
            for j in range(i, n):
                c = self.matrix[i][j] if i == j else field.add(self.matrix[i][j], self.matrix[i][j])
                if c != field.zero:
                    mono = [0] * n
                    mono[i] += 1
                    mono[j] += 1
                    d[tuple(mono)] = c
        return ring.from_dict(d)

    def rank(self) -> int:
        field = self.ring.field
        m = [row[:] for row in self.matrix]
        n = len(m)
        rank = 0
        col = 0
        row = 0
        while row < n and col < n:
            piv = None
            for i in range(row, n):
                if m[i][col] != field.zero:
                    piv = i
                    break
            if piv is None:
                col += 1
                continue
            m[row], m[piv] = m[piv], m[row]
            inv = field.inv(m[row][col])
            m[row] = [field.mul(x, inv) for x in m[row]]
            for i in range(n):
                if i != row and m[i][col] != field.zero:
                    f = m[i][col]
                    m[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(m[i], m[row])]
            rank += 1
            row += 1
            col += 1
        return rank


def quadric_rank(q) -> int:
    """Rank of the symmetric matrix of a quadratic form (exact elimination)."""
    if isinstance(q, Polynomial):
        q = QuadricForm.from_polynomial(q)
    return q.rank()


# ---------------------------------------------------------------------------
# singular locus


def minors_ideal_gens(rows, size: int, ring: PolyRing):
    """All size x size minors of a matrix of polynomials, by Laplace
    expansion along the first chosen row with memoized complementary minors
    (the same (size-1)-minor is shared by many parents)."""
    nr, nc = len(rows), len(rows[0])
    cache: dict = {}

    def minor(ri, ci):
        if len(ri) == 1:
            return rows[ri[0]][ci[0]]
        key = (ri, ci)
        got = cache.get(key)
        if got is not None:
            return got
        total = ring.zero()
        i0 = ri[0]
        rest = ri[1:]
        for pos, j in enumerate(ci):
            a = rows[i0][j]
            if a.is_zero():
                continue
            sub = minor(rest, ci[:pos] + ci[pos + 1 :])
            term = a * sub
            total = total + term if pos % 2 == 0 else total - term
        cache[key] = total
        return total

    out = []
    for ri in combinations(range(nr), size):
        for ci in combinations(range(nc), size):
            out.append(minor(ri, ci))
    return out


def span_reduce(polys, ring: PolyRing):
    """Row-reduce homogeneous polynomials of one degree to an independent
    spanning set (same ideal, far fewer generators)."""
    if not polys:
        return []
    support = sorted({m for f in polys for m, _ in f.terms}, key=ring.order.key, reverse=True)
    col = {m: k for k, m in enumerate(support)}
    field = ring.field
    if field.char:
        mat = np.zeros((len(polys), len(support)), dtype=np.int64)
        for r, f in enumerate(polys):
            for m, c in f.terms:
                mat[r, col[m]] = c
        from .linalg import rref_mod

        r, piv = rref_mod(mat, field.char)
        out = []
        for i in range(len(piv)):
            d = {support[j]: int(r[i, j]) for j in range(len(support)) if r[i, j]}
            out.append(ring.from_dict(d))
        return out
    from fractions import Fraction

    rows = [[Fraction(0)] * len(support) for _ in polys]
    for r, f in enumerate(polys):
        for m, c in f.terms:
            rows[r][col[m]] = c
    out = []
    lead = 0
    for c in range(len(support)):
        pr = next((i for i in range(lead, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[lead], rows[pr] = rows[pr], rows[lead]
        inv = 1 / rows[lead][c]
        rows[lead] = [x * inv for x in rows[lead]]
        for i in range(len(rows)):
            if i != lead and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[lead])]
        lead += 1
        if lead == len(rows):
            break
    for row in rows[:lead]:
        d = {support[j]: row[j] for j in range(len(support)) if row[j] != 0}
        out.append(ring.from_dict(d))
    return out


def singular_locus_ideal(I: Ideal, codim: int) -> Ideal:
    """I plus the codim x codim minors of the Jacobian of its generators.

    Minors are normal-formed against a basis of I, then span-reduced degree
    by degree; this changes generators but not the ideal I + minors."""
    from .groebner import normal_form

    ring = I.ring
    rows = jacobian(list(I.gens))
    if codim > min(len(rows), ring.nvars):
        raise ValueError("codimension exceeds Jacobian size")
    minors = minors_ideal_gens(rows, codim, ring)
    use_nf = len(minors) <= 256
    gb = I.gb() if use_nf else None
    by_degree: dict = {}
    for m in minors:
        r = normal_form(m, gb) if use_nf else m
        if not r.is_zero():
            by_degree.setdefault(r.degree(), []).append(r)
    kept = []
    for d in sorted(by_degree):
        kept.extend(span_reduce(by_degree[d], ring))
    return Ideal(ring, list(I.gens) + kept)


def singular_locus_dim(I: Ideal, codim: int, budget: int = DEFAULT_PAIR_BUDGET) -> int:
    """Dimension of the scheme cut by I + the c x c Jacobian minors; -1 when
    that scheme is empty (i.e. the input is smooth).  Over GF(p) callers
    should flag the result probabilistic in their reports."""
    J = singular_locus_ideal(I, codim)
    J.gb(budget=budget)
    P = hilbert_polynomial(J)
    return P.degree if not P.is_zero() else -1


# ---------------------------------------------------------------------------
# secant variety


def secant_ideal(
    I: Ideal,
    budget: int = DEFAULT_PAIR_BUDGET,
    seed: int = 0,
    max_degree: int | None = None,
) -> Ideal:
    """Ideal of the secant variety Sec(X) of X = V(I), by chart-based join
    elimination: two parameter copies u, v of the cone of X, the sum chart
    z = u + v, then elimination of u and v degree by degree.

    A candidate of degree e is certified as the exact degree-<=e part of
    I(Sec): h(z) lies in I(Sec) iff h(u + v) lies in I(u) + I(v), which is a
    normal-form test against the disjoint-union basis.  `max_degree` bounds
    the search; hypersurface callers stop at the first nonzero degree.
    """
    ring = I.ring
    n = ring.nvars
    names = [f"u_{i}" for i in range(n)] + [f"v_{i}" for i in range(n)]
    R2 = PolyRing(names, ring.field, ring.order)

    def embed(g, offset):
        d = {}
        for m, c in g.terms:
            mm = [0] * (2 * n)
            for i, e in enumerate(m):
                mm[offset + i] = e
            d[tuple(mm)] = c
        return R2.from_dict(d)

    J = Ideal(R2, [embed(g, 0) for g in I.gens] + [embed(g, n) for g in I.gens])
    gb = J.gb(budget=budget)

    from .groebner import normal_form

    sums = []
    for i in range(n):
        d = {}
        mm = [0] * (2 * n)
        mm[i] = 1
        d[tuple(mm)] = ring.field.one
        mm = [0] * (2 * n)
        mm[n + i] = 1
        d[tuple(mm)] = ring.field.one
        sums.append(R2.from_dict(d))

    cap = max_degree if max_degree is not None else 2 * max(g.degree() for g in I.gens)
    found: list = []
    for e in range(1, cap + 1):
        monos = list(_monomials_of_degree(n, e))
        rows = []
        images = []
        for m in monos:
            f = R2.one()
            for i, ei in enumerate(m):
                if ei:
                    f = f * sums[i] ** ei
            images.append(normal_form(f, gb))
        support = sorted({mm for f in images for mm, _ in f.terms})
        col = {mm: k for k, mm in enumerate(support)}
        field = ring.field
        # left kernel: coefficient vectors on the candidate monomials
        if field.char:
            mat = np.zeros((len(support), len(monos)), dtype=np.int64)
            for r, f in enumerate(images):
                for mm, c in f.terms:
                    mat[col[mm], r] = c
            from .linalg import kernel_mod

            ker = kernel_mod(mat, field.char)
            vecs = [list(map(int, v)) for v in ker]
        else:
            from .linalg import kernel_qq

            rows_q = [[0] * len(monos) for _ in support]
            for r, f in enumerate(images):
                for mm, c in f.terms:
                    rows_q[col[mm]][r] = c
            vecs = kernel_qq(rows_q)
        if vecs:
            for v in vecs:
                d = {m: field(c) for m, c in zip(monos, v) if field(c) != field.zero}
                found.append(ring.from_dict(d))
            break
    if not found:
        r = projective_dimension(I)
        if 2 * r + 1 >= n - 1:
            # expected-dimension count says Sec fills the ambient space
            return Ideal(ring, [])
        raise InfeasibleError(f"no secant equation found up to degree {cap}")
    return Ideal(ring, found)


def _monomials_of_degree(nvars: int, d: int):
    if nvars == 1:
        yield (d,)
        return
    for e in range(d, -1, -1):
        for rest in _monomials_of_degree(nvars - 1, d - e):
            yield (e,) + rest


def secant_is_hypersurface_of_degree(I: Ideal, budget=DEFAULT_PAIR_BUDGET):
    """(degree, equation) of Sec(X) when it is a hypersurface: the minimal
    degree with a join relation, with the relation itself."""
    S = secant_ideal(I, budget=budget)
    degs = {g.degree() for g in S.gens}
    return min(degs), S.gens[0]


# ---------------------------------------------------------------------------
# Castelnuovo independence


def castelnuovo_independence(c: int, lam: int, trials: int, p: int, seed: int = 0) -> bool:
    """Lemma test: lam <= 2c+1 points of P^c(F_p) in general position impose
    independent conditions on quadrics.

    Each trial rejection-samples lam points until no c+1 of them lie in a
    hyperplane (checked by determinants), builds the lam x C(c+2, 2)
    evaluation matrix on degree-2 monomials, and demands full row rank.
    Refuses lam > 2c+1 rather than testing a false statement.
    """
    if lam > 2 * c + 1:
        raise ValueError(f"lambda={lam} exceeds 2c+1={2*c+1}; lemma hypothesis violated")
    if lam < 1 or c < 1:
        raise ValueError("need c >= 1 and lambda >= 1")
    rng = random.Random(seed)
    monos = list(_monomials_of_degree(c + 1, 2))
    for _ in range(trials):
        pts = _general_position_points(c, lam, p, rng)
        rows = []
        for pt in pts:
            row = []
            for m in monos:
                v = 1
                for xi, e in zip(pt, m):
                    for _ in range(e):
                        v = v * xi % p
                row.append(v)
            rows.append(row)
        if rank_mod(np.array(rows, dtype=np.int64), p) != lam:
            return False
    return True


def _general_position_points(c: int, lam: int, p: int, rng, attempts: int = 1000):
    for _ in range(attempts):
        pts = [[rng.randrange(p) for _ in range(c + 1)] for _ in range(lam)]
        if _in_general_position(pts, c, p):
            return pts
    raise InfeasibleError("could not sample points in general position")


def _in_general_position(pts, c: int, p: int) -> bool:
    from .linalg import batch_nonsingular_mod

    if len(pts) <= c:
        return rank_mod(np.array(pts, dtype=np.int64), p) == len(pts)
    subs = list(combinations(range(len(pts)), c + 1))
    arr = np.array(pts, dtype=np.int64)
    stack = np.stack([arr[list(s)] for s in subs])
    return bool(batch_nonsingular_mod(stack, p).all())
