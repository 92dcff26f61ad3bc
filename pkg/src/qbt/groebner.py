"""Buchberger engine and the ideal-theoretic toolbox.

Pair handling follows the normal strategy (minimal lcm degree, then
creation order) with the coprime-lead and chain criteria applied through a
Gebauer-Moeller pair update; the sugar strategy is available behind a flag
and is what the inhomogeneous saturation/intersection runs use.  All tie
breaks are explicit, so recomputing a reduced basis reproduces it exactly.

For weighted rings (used for relation ideals of rational maps) the pair
queue is ordered by weighted degree and a run can be truncated at a
weighted-degree cap: with weighted-homogeneous input, the truncated basis
decides membership correctly for every element of weighted degree <= cap.
"""

from __future__ import annotations

import heapq

from .errors import InfeasibleError, RingMismatchError
from .orders import GREVLEX, EliminationOrder, GrevlexPermuted, MonomialOrder
from .rings import (
    PolyRing,
    Polynomial,
    exact_div,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)

DEFAULT_PAIR_BUDGET = 2_000_000


class GroebnerBasis:
    """Reduced Groebner basis: monic, interreduced, sorted ascending by lead."""

    __slots__ = ("ring", "order", "elements", "truncated_at")

    def __init__(self, ring: PolyRing, order: MonomialOrder, elements, truncated_at=None):
        self.ring = ring
        self.order = order
        self.elements = tuple(elements)
        self.truncated_at = truncated_at

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def leading_monomials(self):
        return [g.lm() for g in self.elements]

    def __repr__(self):
        return f"GroebnerBasis({len(self.elements)} elements, {self.order})"


class Ideal:
    """Generator list plus cached reduced Groebner bases, one per order.

    Ideals are write-once: nothing mutates `gens` after construction, so the
    caches never need invalidation.
    """

    def __init__(self, ring: PolyRing, gens):
        self.ring = ring
        gens = [g for g in gens if not g.is_zero()]
        for g in gens:
            if g.ring != ring:
                raise RingMismatchError("generator outside the ideal's ring")
        self.gens = tuple(gens)
        self._gb_cache: dict = {}

    def gb(self, order: MonomialOrder | None = None, budget: int = DEFAULT_PAIR_BUDGET) -> GroebnerBasis:
        order = order or self.ring.order
        if order not in self._gb_cache:
            self._gb_cache[order] = buchberger(self, order, budget=budget)
        return self._gb_cache[order]

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.gens)

    def contains(self, f: Polynomial, order=None) -> bool:
        return normal_form(f, self.gb(order)).is_zero()

    def is_one(self) -> bool:
        gb = self.gb()
        return len(gb.elements) == 1 and gb.elements[0].degree() == 0

    def __repr__(self):
        return f"Ideal({len(self.gens)} gens in {self.ring})"


# ---------------------------------------------------------------------------
# reduction


def _nf_dict(fd: dict, reducers, ring: PolyRing, heap_key):
    """Full normal form of the term dict `fd` against `reducers`
    (list of (lead_monomial, tail_terms, lead_coeff)).

    Deterministic: always reduces the largest reducible monomial using the
    first reducer in list order.  Returns (normal_form_dict, steps).
    """
    field = ring.field
    p = field.char
    zero = field.zero
    one = field.one
    work = dict(fd)
    out: dict = {}
    heap = [(heap_key(m), m) for m in work]
    heapq.heapify(heap)
    push = heapq.heappush
    pop = heapq.heappop
    steps = 0
    while heap:
        _, m = pop(heap)
        c = work.pop(m, None)
        if c is None:
            continue
        hit = None
        for red in reducers:
            if mono_divides(red[0], m):
                hit = red
                break
        if hit is None:
            out[m] = c
            continue
        lm, tail, lc = hit
        steps += 1
        shift = mono_div(m, lm)
        factor = c if lc == one else field.div(c, lc)
        if p:
            for tm, tc in tail:
                mm = mono_mul(shift, tm)
                prev = work.get(mm)
                if prev is None:
                    v = (-factor * tc) % p
                    if v:
                        work[mm] = v
                        push(heap, (heap_key(mm), mm))
                else:
                    v = (prev - factor * tc) % p
                    if v:
                        work[mm] = v
                    else:
                        del work[mm]
        else:
            for tm, tc in tail:
                mm = mono_mul(shift, tm)
                prev = work.get(mm)
                if prev is None:
                    work[mm] = -factor * tc
                    push(heap, (heap_key(mm), mm))
                else:
                    v = prev - factor * tc
                    if v == zero:
                        del work[mm]
                    else:
                        work[mm] = v
    return out, steps


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    """Remainder of f on division by G: no term divisible by any lead of G,
    f - result lies in <G>."""
    if f.ring.names != G.ring.names or f.ring.field != G.ring.field:
        raise RingMismatchError("normal form: polynomial and basis rings differ")
    reducers = [(g.lm(), g.terms[1:], g.lc()) for g in G.elements]
    out, _ = _nf_dict(dict(f.terms), reducers, G.ring, G.order.heap_key)
    return f.ring.from_dict(out)


# ---------------------------------------------------------------------------
# Buchberger


def spoly(f: Polynomial, g: Polynomial) -> Polynomial:
    """S-polynomial (with monic normalization of both inputs)."""
    f, g = f.monic(), g.monic()
    l = mono_lcm(f.lm(), g.lm())
    ring = f.ring
    a = Polynomial(ring, ((mono_div(l, f.lm()), ring.field.one),))
    b = Polynomial(ring, ((mono_div(l, g.lm()), ring.field.one),))
    return a * f - b * g


def buchberger(
    I: Ideal,
    order: MonomialOrder | None = None,
    budget: int = DEFAULT_PAIR_BUDGET,
    max_wdeg: int | None = None,
    sugar: bool = False,
) -> GroebnerBasis:
    """Reduced Groebner basis of I under `order`.

    `max_wdeg` truncates the run at a weighted-degree cap (meaningful for
    weighted-homogeneous input; the result is then marked truncated).
    Raises InfeasibleError when the S-pair budget is exhausted.
    """
    ring = I.ring
    order = order or ring.order
    heap_key = order.heap_key
    key = order.key
    work_ring = ring if ring.order == order else ring.clone(order=order)
    wdeg = work_ring.wdeg
    field = work_ring.field
    p = field.char

    G: list[Polynomial] = []
    lms: list = []
    sugars: list = []
    reducers: list = []
    alive: dict = {}  # (i, j) -> lcm monomial
    heap: list = []  # (selection key, i, j)

    def sel_key(i, j, l, sg):
        return (sg, wdeg(l), j, i) if sugar else (wdeg(l), j, i)

    def gm_update(t):
        """Gebauer-Moeller update after appending generator index t."""
        lt = lms[t]
        cand = {i: mono_lcm(lms[i], lt) for i in range(t)}
        # chain criterion on old pairs
        for (i, j) in list(alive):
            l = alive[(i, j)]
            if mono_divides(lt, l) and cand[i] != l and cand[j] != l:
                del alive[(i, j)]
        # prune new pairs: strict divisibility between lcms
        order_new = sorted(cand, key=lambda i: (wdeg(cand[i]), i))
        kept: list = []
        for i in order_new:
            li = cand[i]
            if any(mono_divides(cand[j], li) and cand[j] != li for j in kept):
                continue
            kept.append(i)
        # group equal lcms: drop whole group if any member is coprime
        groups: dict = {}
        for i in kept:
            groups.setdefault(cand[i], []).append(i)
        for l, members in groups.items():
            if any(l == mono_mul(lms[i], lt) for i in members):
                continue
            i = min(members)
            sg = max(
                sugars[i] + wdeg(mono_div(l, lms[i])),
                sugars[t] + wdeg(mono_div(l, lt)),
            )
            alive[(i, t)] = l
            heapq.heappush(heap, (sel_key(i, t, l, sg), i, t))

    def add_element(fd):
        f = work_ring.from_dict(fd).monic()
        G.append(f)
        lms.append(f.lm())
        sugars.append(max(wdeg(m) for m, _ in f.terms))
        reducers.append((f.lm(), f.terms[1:], field.one))
        gm_update(len(G) - 1)

    init = sorted((dict(g.terms) for g in I.gens if not g.is_zero()),
                  key=lambda d: key(max(d, key=key)))
    for d in init:
        out, _ = _nf_dict(d, reducers, work_ring, heap_key)
        if out:
            add_element(out)

    processed = 0
    while heap:
        _, i, j = heapq.heappop(heap)
        l = alive.pop((i, j), None)
        if l is None:
            continue
        if max_wdeg is not None and wdeg(l) > max_wdeg:
            continue
        processed += 1
        if processed > budget:
            raise InfeasibleError(f"S-pair budget {budget} exhausted; infeasible at this scale")
        si = mono_div(l, lms[i])
        sj = mono_div(l, lms[j])
        sd: dict = {}
        for m, c in G[i].terms:
            sd[mono_mul(si, m)] = c
        for m, c in G[j].terms:
            mm = mono_mul(sj, m)
            v = sd.get(mm, field.zero) - c
            if p:
                v %= p
            if v == field.zero:
                sd.pop(mm, None)
            else:
                sd[mm] = v
        out, _ = _nf_dict(sd, reducers, work_ring, heap_key)
        if out:
            add_element(out)

    elements = _interreduce(G, work_ring)
    return GroebnerBasis(work_ring, order, elements, truncated_at=max_wdeg)


def _interreduce(G, ring: PolyRing):
    """Minimalize + tail-reduce + monic; output sorted ascending by lead."""
    key = ring.order.key
    heap_key = ring.order.heap_key
    minimal: list = []
    for g in sorted(G, key=lambda g: key(g.lm())):
        if any(mono_divides(h.lm(), g.lm()) for h in minimal):
            continue
        minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = [(h.lm(), h.terms[1:], ring.field.one) for k, h in enumerate(minimal) if k != idx]
        out, _ = _nf_dict(dict(g.terms), others, ring, heap_key)
        if out:
            reduced.append(ring.from_dict(out).monic())
    reduced.sort(key=lambda g: key(g.lm()))
    return tuple(reduced)


# ---------------------------------------------------------------------------
# derived operations


def ideal_equal(I: Ideal, J: Ideal, order=None):
    """(equal?, witness): witness is the first offending generator if not."""
    gb_i = I.gb(order)
    for g in J.gens:
        if not normal_form(g, gb_i).is_zero():
            return False, g
    gb_j = J.gb(order)
    for g in I.gens:
        if not normal_form(g, gb_j).is_zero():
            return False, g
    return True, None


def eliminate(
    I: Ideal,
    keep,
    budget: int = DEFAULT_PAIR_BUDGET,
    sugar: bool = False,
    max_wdeg: int | None = None,
) -> Ideal:
    """Generators of the elimination ideal I cap K[keep], via a block order
    eliminating the complementary variables.  Result lives in the same ring."""
    ring = I.ring
    keep = sorted(keep)
    elim = [i for i in range(ring.nvars) if i not in set(keep)]
    if not elim:
        return I
    order = EliminationOrder(elim, ring.nvars)
    gb = buchberger(I, order, budget=budget, sugar=sugar, max_wdeg=max_wdeg)
    elim_set = set(elim)
    kept = [g for g in gb.elements if not (g.variables_used() & elim_set)]
    return Ideal(ring, [ring.from_dict(dict(g.terms)) for g in kept])


def project_to_ring(I: Ideal, target: PolyRing, var_map) -> Ideal:
    """Rewrite generators into `target`; var_map[i] = target index of source
    variable i (None = must not occur)."""
    out = []
    for g in I.gens:
        d: dict = {}
        for m, c in g.terms:
            mm = [0] * target.nvars
            for i, e in enumerate(m):
                if e:
                    if var_map[i] is None:
                        raise ValueError("generator uses an eliminated variable")
                    mm[var_map[i]] = e
            d[tuple(mm)] = target.field(c)
        out.append(target.from_dict(d))
    return Ideal(target, out)


def _tag_ring(ring: PolyRing) -> PolyRing:
    name = "t_"
    while name in ring.names:
        name += "_"
    return PolyRing((name,) + ring.names, ring.field, GREVLEX)


def intersect(I: Ideal, J: Ideal, budget: int = DEFAULT_PAIR_BUDGET) -> Ideal:
    """I cap J by the tag-variable construction t*I + (1-t)*J, eliminating t."""
    ring = I.ring
    if J.ring != ring:
        raise RingMismatchError("intersection of ideals in different rings")
    ext = _tag_ring(ring)
    t = ext.gen(0)

    def lift(g):
        return ext.from_dict({(0,) + m: c for m, c in g.terms})

    gens = [t * lift(g) for g in I.gens] + [(ext.one() - t) * lift(g) for g in J.gens]
    K = Ideal(ext, gens)
    elim = eliminate(K, keep=range(1, ext.nvars), budget=budget, sugar=True)
    return project_to_ring(elim, ring, [None] + list(range(ring.nvars)))


def colon(I: Ideal, J: Ideal, budget: int = DEFAULT_PAIR_BUDGET) -> Ideal:
    """I : J = {f : f*J inside I}, via intersections with principal ideals."""
    if not J.gens:
        raise ValueError("colon by the zero ideal")
    ring = I.ring
    result = None
    for g in J.gens:
        inter = intersect(I, Ideal(ring, [g]), budget=budget)
        quot = Ideal(ring, [exact_div(h, g) for h in inter.gens])
        if result is None:
            result = quot
        else:
            eq, _ = ideal_equal(result, quot)
            if not eq:
                result = intersect(result, quot, budget=budget)
    return result


def colon_element_power(I: Ideal, g: Polynomial, budget: int = DEFAULT_PAIR_BUDGET) -> Ideal:
    """I : g^infinity by the extra-variable trick: (I + <t*g - 1>) cap K[x]."""
    ring = I.ring
    ext = _tag_ring(ring)
    t = ext.gen(0)

    def lift(h):
        return ext.from_dict({(0,) + m: c for m, c in h.terms})

    gens = [lift(h) for h in I.gens] + [t * lift(g) - ext.one()]
    K = Ideal(ext, gens)
    elim = eliminate(K, keep=range(1, ext.nvars), budget=budget, sugar=True)
    return project_to_ring(elim, ring, [None] + list(range(ring.nvars)))


def colon_variable_power(I: Ideal, i: int, budget: int = DEFAULT_PAIR_BUDGET) -> Ideal:
    """I : x_i^infinity for homogeneous I, by the grevlex-last-variable rule:
    under grevlex with x_i least, a homogeneous basis element divisible by
    x_i is so in every term, and dividing out the maximal power of x_i from
    a reduced basis generates the saturation."""
    ring = I.ring
    if not I.is_homogeneous():
        return colon_element_power(I, ring.gen(i), budget=budget)
    perm = [0] * ring.nvars
    pos = 0
    for j in range(ring.nvars):
        if j != i:
            perm[j] = pos
            pos += 1
    perm[i] = ring.nvars - 1
    order = GrevlexPermuted(perm)
    gb = buchberger(I, order, budget=budget)
    xi = ring.gen(i)
    out = []
    for g in gb.elements:
        h = ring.from_dict(dict(g.terms))
        while not h.is_zero() and all(m[i] >= 1 for m, _ in h.terms):
            h = exact_div(h, xi)
        out.append(h)
    return Ideal(ring, out)


def _as_variable(g: Polynomial):
    if len(g.terms) == 1:
        m, _ = g.terms[0]
        if sum(m) == 1:
            return m.index(1)
    return None


def saturate(I: Ideal, J: Ideal, budget: int = DEFAULT_PAIR_BUDGET) -> Ideal:
    """I : J^infinity = {f : f * J^k inside I for some k}.

    Computed per generator g of J (extra-variable trick, or the grevlex rule
    when g is a variable) and intersected; I : J^inf = cap_g (I : g^inf), and
    the result is already a fixpoint of further saturation.
    """
    if not J.gens:
        raise ValueError("saturation by the zero ideal")
    ring = I.ring
    if any(g.degree() == 0 for g in J.gens):
        return Ideal(ring, [ring.one()])
    result = None
    for g in J.gens:
        v = _as_variable(g)
        part = (
            colon_variable_power(I, v, budget=budget)
            if v is not None
            else colon_element_power(I, g, budget=budget)
        )
        if result is None:
            result = part
        else:
            eq, _ = ideal_equal(result, part)
            if not eq:
                result = intersect(result, part, budget=budget)
    return result


def irrelevant_ideal(ring: PolyRing) -> Ideal:
    return Ideal(ring, ring.gens())


def _monomials_of_degree(nvars: int, d: int):
    if d == 0:
        yield (0,) * nvars
        return
    if nvars == 1:
        yield (d,)
        return
    for e in range(d + 1):
        for rest in _monomials_of_degree(nvars - 1, d - e):
            yield (e,) + rest


def _certify_in_saturation(C: Ideal, I: Ideal, cap: int = 4) -> bool:
    """True if every generator f of C has f*m^N inside I for some N <= cap,
    certifying C <= I : m^infinity exactly."""
    ring = I.ring
    gb = I.gb()
    for f in C.gens:
        ok = False
        for N in range(1, cap + 1):
            if all(
                normal_form(f * ring.from_dict({mu: ring.field.one}), gb).is_zero()
                for mu in _monomials_of_degree(ring.nvars, N)
            ):
                ok = True
                break
        if not ok:
            return False
    return True


def saturate_irrelevant(I: Ideal, budget: int = DEFAULT_PAIR_BUDGET, seed: int = 0) -> Ideal:
    """Saturation by the irrelevant maximal ideal, with a fast exact path.

    C = I : l^infinity for a linear form l always contains the saturation;
    it equals it when every generator of C multiplies into I by a bounded
    power of the irrelevant ideal (checked exactly).  Unlucky l falls back
    to intersecting the per-variable saturations, which is always exact.
    """
    import random

    ring = I.ring
    if not I.gens:
        return I
    if not I.is_homogeneous():
        raise ValueError("saturation by the irrelevant ideal expects homogeneous input")
    rng = random.Random(seed)
    for attempt in range(3):
        coeffs = [1] * ring.nvars if attempt == 0 else [rng.randrange(1, 512) for _ in range(ring.nvars)]
        try:
            C = _colon_linear_power(I, coeffs, budget=budget)
        except InfeasibleError:
            break
        eq, _ = ideal_equal(C, I)
        if eq:
            return I
        if _certify_in_saturation(C, I):
            return C
    parts = [colon_variable_power(I, i, budget=budget) for i in range(ring.nvars)]
    result = parts[0]
    for part in parts[1:]:
        eq, _ = ideal_equal(result, part)
        if not eq:
            result = intersect(result, part, budget=budget)
    return result


def _colon_linear_power(I: Ideal, coeffs, budget) -> Ideal:
    """I : l^infinity for l = sum coeffs[i]*x_i, by a coordinate change that
    turns l into a coordinate and the grevlex-last-variable rule."""
    from .rings import substitute

    ring = I.ring
    field = ring.field
    nz = [i for i, c in enumerate(coeffs) if field(c) != field.zero]
    if not nz:
        raise ValueError("zero linear form")
    last = nz[-1]
    cl = field(coeffs[last])
    if len(nz) == 1:
        return colon_variable_power(I, last, budget=budget)
    fwd = []
    for j in range(ring.nvars):
        if j != last:
            fwd.append(ring.gen(j))
        else:
            d = {}
            m = [0] * ring.nvars
            m[last] = 1
            d[tuple(m)] = field.div(field.one, cl)
            for i, c in enumerate(coeffs):
                if i == last or field(c) == field.zero:
                    continue
                mm = [0] * ring.nvars
                mm[i] = 1
                d[tuple(mm)] = field.neg(field.div(field(c), cl))
            fwd.append(ring.from_dict(d))
    moved = Ideal(ring, [substitute(g, fwd, ring, require_homogeneous=False) for g in I.gens])
    sat = colon_variable_power(moved, last, budget=budget)
    back = []
    for j in range(ring.nvars):
        if j != last:
            back.append(ring.gen(j))
        else:
            d = {}
            for i, c in enumerate(coeffs):
                if field(c) == field.zero:
                    continue
                mm = [0] * ring.nvars
                mm[i] = 1
                d[tuple(mm)] = field(c)
            back.append(ring.from_dict(d))
    return Ideal(ring, [substitute(g, back, ring, require_homogeneous=False) for g in sat.gens])
