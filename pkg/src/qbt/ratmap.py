"""Rational maps between projective spaces: base locus, graph, image,
inverse extraction, birationality certificates, restriction, projection.

The image of a map F: P^n -> P^m is the elimination of the source
variables from the relation ideal <y_i - F_i> (weights deg y_i = deg F),
which equals the y-part of the saturated graph ideal.  Hypersurface images
take a staged path: truncated elimination finds the minimal-degree relation,
and a Jacobian rank certificate (valid in any characteristic: rank r at any
point forces dim of the image cone >= r) pins the image to codimension one,
so the prime relation ideal is principal and the found relation generates
it.  The staged path is exact, not heuristic; `method="elim"` forces the
single full elimination instead.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .errors import (
    InfeasibleError,
    InverseNotFoundError,
    NotGenericallyFiniteError,
    RingMismatchError,
)
from .fields import GF
from .groebner import (
    DEFAULT_PAIR_BUDGET,
    GroebnerBasis,
    Ideal,
    buchberger,
    eliminate,
    normal_form,
    project_to_ring,
    saturate,
    saturate_irrelevant,
)
from .hilbert import hilbert_polynomial
from .linalg import kernel_mod, kernel_qq, rank_mod
from .orders import GREVLEX, EliminationOrder
from .rings import PolyRing, Polynomial, content_and_gcd, exact_div, jacobian, substitute


class RationalMap:
    """Tuple of equal-degree forms F: P^n -> P^m without fixed component."""

    def __init__(self, source: PolyRing, target: PolyRing, forms, strip_fixed: bool = False):
        forms = list(forms)
        if not forms or all(f.is_zero() for f in forms):
            raise ValueError("a rational map needs a nonzero form tuple")
        if len(forms) != target.nvars:
            raise ValueError(f"target P^{target.nvars - 1} needs {target.nvars} forms")
        for f in forms:
            if f.ring != source:
                raise RingMismatchError("form outside the source ring")
            if f and not f.is_homogeneous():
                raise ValueError("forms must be homogeneous")
        degs = {f.degree() for f in forms if f}
        if len(degs) != 1:
            raise ValueError(f"forms must share one degree, got {sorted(degs)}")
        g = content_and_gcd([f for f in forms if f])
        if g.degree() > 0:
            if not strip_fixed:
                raise ValueError(f"fixed component {g}; pass strip_fixed=True to divide it out")
            forms = [exact_div(f, g) if f else f for f in forms]
        self.source = source
        self.target = target
        self.forms = tuple(forms)
        self.degree = next(iter({f.degree() for f in forms if f}))

    @property
    def n(self) -> int:
        return self.source.nvars - 1

    @property
    def m(self) -> int:
        return self.target.nvars - 1

    def __call__(self, point):
        return [f.eval(point) for f in self.forms]

    def __repr__(self):
        return f"RationalMap(P^{self.n} -> P^{self.m}, degree {self.degree})"


@dataclass
class BirationalCertificate:
    forward: tuple
    inverse: tuple
    image_ideal: Ideal
    types: tuple  # (d1, d2)


# ---------------------------------------------------------------------------
# base locus and graph


def base_locus(phi: RationalMap, budget: int = DEFAULT_PAIR_BUDGET, seed: int = 0) -> Ideal:
    """Saturation (w.r.t. the irrelevant ideal) of the ideal of the forms."""
    I = Ideal(phi.source, list(phi.forms))
    return saturate_irrelevant(I, budget=budget, seed=seed)


def linear_system_dim(phi: RationalMap) -> int:
    """Dimension of the span of the defining forms (the unsaturated
    degree-d1 graded piece)."""
    ring = phi.source
    support = sorted({m for f in phi.forms for m, _ in f.terms})
    col = {m: k for k, m in enumerate(support)}
    field = ring.field
    if field.char:
        mat = np.zeros((len(phi.forms), len(support)), dtype=np.int64)
        for r, f in enumerate(phi.forms):
            for m, c in f.terms:
                mat[r, col[m]] = c
        return rank_mod(mat, field.char)
    rows = [[0] * len(support) for _ in phi.forms]
    for r, f in enumerate(phi.forms):
        for m, c in f.terms:
            rows[r][col[m]] = c
    from .linalg import rank_qq

    return rank_qq(rows)


def product_ring(phi: RationalMap) -> PolyRing:
    names = phi.source.names + phi.target.names
    if len(set(names)) != len(names):
        raise ValueError("source and target rings must use distinct variable names")
    return PolyRing(names, phi.source.field, GREVLEX,
                    weights=(1,) * phi.source.nvars + (phi.degree,) * phi.target.nvars)


def graph_ideal(phi: RationalMap, budget: int = DEFAULT_PAIR_BUDGET) -> Ideal:
    """Saturation of the minor ideal <y_i F_j - y_j F_i> by <F_0..F_m>
    (generator-wise), in the product ring; bihomogeneous."""
    R2 = product_ring(phi)
    nx = phi.source.nvars
    F = [_lift(f, R2, 0) for f in phi.forms]
    y = [R2.gen(nx + i) for i in range(phi.target.nvars)]
    minors = []
    for i, j in combinations(range(phi.target.nvars), 2):
        minors.append(y[i] * F[j] - y[j] * F[i])
    I = Ideal(R2, minors)
    return saturate(I, Ideal(R2, F), budget=budget)


def _lift(f: Polynomial, R2: PolyRing, offset: int) -> Polynomial:
    d = {}
    pad = R2.nvars - f.ring.nvars
    for m, c in f.terms:
        mm = (0,) * offset + m + (0,) * (pad - offset)
        d[mm] = R2.field(c)
    return R2.from_dict(d)


# ---------------------------------------------------------------------------
# image


def relation_ideal(phi: RationalMap) -> tuple[Ideal, PolyRing]:
    """<y_i - F_i> in the weighted product ring; its source-variable
    elimination is the ideal of the image closure."""
    R2 = product_ring(phi)
    nx = phi.source.nvars
    gens = [R2.gen(nx + i) - _lift(f, R2, 0) for i, f in enumerate(phi.forms)]
    return Ideal(R2, gens), R2


def _y_only(gb_elements, nx: int):
    xset = set(range(nx))
    return [g for g in gb_elements if not (g.variables_used() & xset)]


def jacobian_corank_certificate(phi: RationalMap, rank_needed: int, seed: int = 0,
                                trials: int = 8) -> bool:
    """True iff the Jacobian of the forms attains `rank_needed` at some
    sample point, certifying dim(image cone) >= rank_needed in any
    characteristic."""
    field = phi.source.field
    rows = jacobian(list(phi.forms))
    rng = random.Random(seed)
    p = field.char if field.char else 1_073_741_789
    for _ in range(trials):
        pt = [rng.randrange(field.char) if field.char else rng.randrange(-50, 51)
              for _ in range(phi.source.nvars)]
        mat = []
        for row in rows:
            if field.char:
                mat.append([f.eval(pt) for f in row])
            else:
                mat.append([int(f.eval(pt)) % p for f in row])
        if rank_mod(np.array(mat, dtype=np.int64), p) >= rank_needed:
            return True
    return False


def image_ideal(
    phi: RationalMap,
    method: str = "auto",
    budget: int = DEFAULT_PAIR_BUDGET,
    max_degree: int | None = None,
    seed: int = 0,
) -> Ideal:
    """Ideal of the closure of the image (the y-part of the graph ideal).

    method "elim": one full elimination of the relation ideal.
    method "hypersurface": staged truncated eliminations; requires the
    codimension-one certificate and returns the principal ideal.
    method "auto": staged search; falls back to full elimination when the
    hypersurface certificate does not apply.
    """
    I, R2 = relation_ideal(phi)
    nx = phi.source.nvars
    order = EliminationOrder(list(range(nx)), R2.nvars)
    if method == "elim":
        gb = buchberger(I, order, budget=budget)
        kept = _y_only(gb.elements, nx)
        return project_to_ring(Ideal(R2, [R2.from_dict(dict(g.terms)) for g in kept]),
                               phi.target, [None] * nx + list(range(phi.target.nvars)))
    cap = max_degree if max_degree is not None else phi.target.nvars
    for e in range(1, cap + 1):
        gb = buchberger(I, order, budget=budget, max_wdeg=phi.degree * e)
        found = _y_only(gb.elements, nx)
        if not found:
            continue
        # hypersurface in P^m means the image cone has dimension m
        if len(found) == 1 and jacobian_corank_certificate(phi, phi.m, seed=seed):
            # prime relation ideal of height one is principal; its minimal
            # degree element is the generator
            return project_to_ring(
                Ideal(R2, [R2.from_dict(dict(found[0].terms))]),
                phi.target,
                [None] * nx + list(range(phi.target.nvars)),
            )
        if method == "hypersurface":
            raise InfeasibleError("image is not a certified hypersurface")
        return image_ideal(phi, method="elim", budget=budget)
    if method == "hypersurface":
        raise InfeasibleError(f"no image equation found up to degree {cap}")
    return image_ideal(phi, method="elim", budget=budget)


# ---------------------------------------------------------------------------
# birationality


def verify_birational_pair(F_map: RationalMap, G_forms, I_image: Ideal) -> BirationalCertificate:
    """Certify (i) G(F(x)) is proportional to x identically, and (ii)
    F(G(y)) is proportional to y modulo the image ideal.  Failures raise
    with the offending index pair."""
    F = list(F_map.forms)
    G = list(G_forms)
    if len(G) != F_map.source.nvars:
        raise ValueError(f"inverse needs {F_map.source.nvars} forms")
    src = F_map.source
    GF_x = [substitute(g, F, src) for g in G]
    x = src.gens()
    for i, j in combinations(range(len(GF_x)), 2):
        if not (GF_x[i] * x[j] - GF_x[j] * x[i]).is_zero():
            raise ValueError(f"not a left inverse: identity fails at index pair ({i}, {j})")
    tgt = F_map.target
    FG_y = [substitute(f, G, tgt) for f in F]
    y = tgt.gens()
    gb = I_image.gb()
    for i, j in combinations(range(len(FG_y)), 2):
        if not normal_form(FG_y[i] * y[j] - FG_y[j] * y[i], gb).is_zero():
            raise ValueError(
                f"not a right inverse on the image: membership fails at index pair ({i}, {j})"
            )
    d2 = {g.degree() for g in G if g}
    return BirationalCertificate(tuple(F), tuple(G), I_image, (F_map.degree, d2.pop()))


def _monomials_of_degree(nvars: int, d: int):
    if nvars == 1:
        yield (d,)
        return
    for e in range(d, -1, -1):
        for rest in _monomials_of_degree(nvars - 1, d - e):
            yield (e,) + rest


def _inverse_candidate_at_degree(phi: RationalMap, e: int, size_cap: int = 4_000_000):
    """Solve the joint linear system G_j(F(x)) = x_j * H(x): the bidegree
    (1, e) graph relations A(y) x = 0 solved for their one-dimensional
    kernel, with the common factor H as the homogenizing unknown."""
    src, tgt = phi.source, phi.target
    field = src.field
    F = list(phi.forms)
    ymonos = list(_monomials_of_degree(tgt.nvars, e))
    d_big = phi.degree * e
    hmonos = list(_monomials_of_degree(src.nvars, d_big - 1))
    n_g = tgt_count = len(ymonos)
    ncols = src.nvars * tgt_count + len(hmonos)
    eq_monos = list(_monomials_of_degree(src.nvars, d_big))
    col_of_eq = {m: k for k, m in enumerate(eq_monos)}
    nrows = src.nvars * len(eq_monos)
    if nrows * ncols > size_cap * 8:
        raise InfeasibleError("inverse extraction matrix exceeds the size cap")

    # precompute F^beta for beta in ymonos
    pow_cache: dict = {}

    def fpow(beta):
        if beta in pow_cache:
            return pow_cache[beta]
        f = src.one()
        for i, bi in enumerate(beta):
            for _ in range(bi):
                f = f * F[i]
        pow_cache[beta] = f
        return f

    entries = []  # (row, col, coeff)
    for j in range(src.nvars):
        base_row = j * len(eq_monos)
        for b, beta in enumerate(ymonos):
            fb = fpow(beta)
            colg = j * tgt_count + b
            for m, c in fb.terms:
                entries.append((base_row + col_of_eq[m], colg, c))
        for hcol, hm in enumerate(hmonos):
            mm = list(hm)
            mm[j] += 1
            entries.append((base_row + col_of_eq[tuple(mm)], src.nvars * tgt_count + hcol,
                            -field.one if field.char == 0 else field.char - 1))
    if field.char:
        mat = np.zeros((nrows, ncols), dtype=np.int64)
        for r, c, v in entries:
            mat[r, c] = (mat[r, c] + v) % field.char
        kern = kernel_mod(mat, field.char)
        vecs = [list(map(int, v)) for v in kern]
    else:
        from fractions import Fraction

        rows = [[Fraction(0)] * ncols for _ in range(nrows)]
        for r, c, v in entries:
            rows[r][c] += v
        vecs = kernel_qq(rows)
    out = []
    for v in vecs:
        G = []
        for j in range(src.nvars):
            d = {}
            for b, beta in enumerate(ymonos):
                cv = field(v[j * tgt_count + b])
                if cv != field.zero:
                    d[beta] = cv
            G.append(tgt.from_dict(d))
        H_nonzero = any(field(c) != field.zero for c in v[src.nvars * tgt_count :])
        out.append((G, H_nonzero))
    return out


def find_inverse(
    phi: RationalMap,
    I_image: Ideal,
    degree_cap: int = 4,
    budget: int = DEFAULT_PAIR_BUDGET,
) -> BirationalCertificate:
    """Best-effort inverse extraction; minimality of the inverse degree is
    certified by the failure of every smaller degree.  Raises
    InverseNotFoundError rather than guessing."""
    for e in range(1, degree_cap + 1):
        try:
            candidates = _inverse_candidate_at_degree(phi, e)
        except InfeasibleError:
            raise
        usable = [G for G, h_ok in candidates if h_ok and any(not g.is_zero() for g in G)]
        for G in usable:
            gcd = content_and_gcd([g for g in G if g])
            if gcd.degree() > 0:
                G = [exact_div(g, gcd) if g else g for g in G]
            try:
                return verify_birational_pair(phi, G, I_image)
            except ValueError:
                continue
    raise InverseNotFoundError(
        f"no inverse of degree <= {degree_cap}: non-birational map or method limitation"
    )


# ---------------------------------------------------------------------------
# fiber degree


def map_degree_probabilistic(
    phi: RationalMap, p: int = 32003, trials: int = 3, seed: int = 0,
    budget: int = DEFAULT_PAIR_BUDGET,
) -> int:
    """Degree of the general fiber over a random image point: the fiber
    ideal saturated by the base locus; raises NotGenericallyFiniteError on a
    positive-dimensional fiber.  Returns the minimum over trials (fiber
    degree can only jump upward at special points)."""
    field = phi.source.field
    if field.char:
        p = field.char
        work = phi
    else:
        fp_ring = phi.source.clone(field=GF(p))
        tgt = phi.target.clone(field=GF(p))
        work = RationalMap(fp_ring, tgt, [f.map_coefficients(fp_ring) for f in phi.forms])
    rng = random.Random(seed)
    degs = []
    for _ in range(trials):
        for _attempt in range(100):
            x_star = [rng.randrange(p) for _ in range(work.source.nvars)]
            y_star = work(x_star)
            if any(v % p for v in y_star):
                break
        else:
            raise InfeasibleError("could not sample a point off the base locus")
        gens = []
        for i, j in combinations(range(len(work.forms)), 2):
            g = work.forms[i].scale(y_star[j]) - work.forms[j].scale(y_star[i])
            if not g.is_zero():
                gens.append(g)
        fiber = Ideal(work.source, gens)
        sat = saturate(fiber, Ideal(work.source, list(work.forms)), budget=budget)
        P = hilbert_polynomial(sat)
        if P.is_zero():
            raise InfeasibleError("empty fiber over a sampled point; retry with a new seed")
        if P.degree > 0:
            raise NotGenericallyFiniteError(
                f"general fiber has dimension {P.degree}: not generically finite"
            )
        degs.append(int(P(0)))
    return min(degs)


# ---------------------------------------------------------------------------
# restriction and projection


def restrict_to_hyperplane(phi: RationalMap, h: Polynomial, strip_fixed: bool = False,
                           new_names=None) -> RationalMap:
    """Restrict to V(h) for a linear form h: solve h for its last variable
    with nonzero coefficient and substitute.  The fixed-component check is
    re-applied; a fixed component is an error unless strip_fixed is set."""
    src = phi.source
    field = src.field
    if h.ring != src or h.degree() != 1:
        raise ValueError("h must be a linear form in the source ring")
    coeffs = {m.index(1): c for m, c in h.terms}
    last = max(coeffs)
    cl = coeffs[last]
    keep = [i for i in range(src.nvars) if i != last]
    names = new_names if new_names is not None else [src.names[i] for i in keep]
    small = PolyRing(names, field, src.order)
    images = []
    k = 0
    gens_small = small.gens()
    img_map = {}
    for i in range(src.nvars):
        if i != last:
            img_map[i] = gens_small[k]
            k += 1
    expr = small.zero()
    for i, c in coeffs.items():
        if i == last:
            continue
        expr = expr - img_map[i].scale(field.div(c, cl))
    img_map[last] = expr
    images = [img_map[i] for i in range(src.nvars)]
    forms = [substitute(f, images, small) for f in phi.forms]
    if all(f.is_zero() for f in forms):
        raise ValueError("map restricts to zero on this hyperplane")
    g = content_and_gcd([f for f in forms if f])
    if g.degree() > 0 and not strip_fixed:
        raise ValueError(f"restriction has a fixed component: {g}")
    return RationalMap(small, phi.target, forms, strip_fixed=strip_fixed)


def project_parameterization(v_forms, source_point=None, point=None):
    """One linear projection step of a parameterized variety.

    With `source_point` q, the center is the projective value v(q) of the
    parameterization (computed on the fixed-component-stripped forms, which
    is the honest value of the rational map).  The recipe: swap the last
    nonzero coordinate of the center with the last coordinate, subtract the
    multiple of the last form that kills it at the center, drop the last
    form.  With `point` given directly the projection may be exterior; the
    степень is then preserved and the caller is told.

    Returns (new_forms, exterior_flag).
    """
    v = list(v_forms)
    ring = v[0].ring
    field = ring.field
    if source_point is not None:
        stripped = v
        g = content_and_gcd([f for f in v if f])
        if g.degree() > 0:
            stripped = [exact_div(f, g) if f else f for f in v]
        vals = [f.eval(source_point) for f in stripped]
        exterior = False
    else:
        if point is None:
            raise ValueError("need source_point or point")
        vals = [field(c) for c in point]
        # exterior iff the point is not a value of the parameterization;
        # callers decide that; here: flag unknown centers as exterior
        exterior = True
    if all(c == field.zero for c in vals):
        raise ValueError("projection center has all coordinates zero")
    j = max(i for i, c in enumerate(vals) if c != field.zero)
    last = len(v) - 1
    v[j], v[last] = v[last], v[j]
    vals = list(vals)
    vals[j], vals[last] = vals[last], vals[j]
    out = []
    for i in range(last):
        if vals[i] != field.zero:
            out.append(v[i] - v[last].scale(field.div(vals[i], vals[last])))
        else:
            out.append(v[i])
    return out, exterior


def codim2_quadric_map(n: int, s: int, field=None) -> tuple:
    """The type-(2,1) normal form: base locus the quadric
    V(x_0^2+...+x_s^2, x_n) of codimension 2, map
    [x_0 x_n, ..., x_{n-1} x_n, x_n^2, x_0^2+...+x_s^2].

    Returns (map, image_quadric, inverse_forms)."""
    if not (1 <= s <= n - 1):
        raise ValueError("need 1 <= s <= n-1")
    from .fields import QQ_FIELD

    field = field or QQ_FIELD
    src = PolyRing.make("x", n + 1, field=field)
    tgt = PolyRing.make("y", n + 2, field=field)
    x = src.gens()
    forms = [x[i] * x[n] for i in range(n)] + [x[n] * x[n]]
    q = src.zero()
    for i in range(s + 1):
        q = q + x[i] * x[i]
    forms.append(q)
    phi = RationalMap(src, tgt, forms)
    y = tgt.gens()
    img = tgt.zero()
    for i in range(s + 1):
        img = img + y[i] * y[i]
    img = img - y[n] * y[n + 1]
    inverse = [y[i] for i in range(n + 1)]
    return phi, img, inverse
