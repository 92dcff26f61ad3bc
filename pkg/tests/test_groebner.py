"""Buchberger engine and ideal toolbox, with the division-algorithm and
resultant oracles implemented locally."""

import random
from fractions import Fraction

import pytest

from qbt.errors import InfeasibleError
from qbt.fields import GF, QQ_FIELD
from qbt.groebner import (
    Ideal,
    buchberger,
    colon,
    colon_element_power,
    eliminate,
    ideal_equal,
    intersect,
    irrelevant_ideal,
    normal_form,
    saturate,
    saturate_irrelevant,
    spoly,
)
from qbt.hilbert import hilbert_function
from qbt.orders import GREVLEX, LEX
from qbt.rings import PolyRing, poly_from_str, poly_to_str

FP = GF(32003)


def P(ring, s):
    return poly_from_str(ring, s)


def twisted_cubic(field=QQ_FIELD, order=GREVLEX):
    R = PolyRing.make("x", 4, field=field, order=order)
    return R, Ideal(R, [P(R, s) for s in ["x1^2 - x0*x2", "x1*x2 - x0*x3", "x2^2 - x1*x3"]])


def naive_division(f, divisors):
    """Textbook multivariate division oracle: returns the remainder."""
    from qbt.rings import mono_div, mono_divides, mono_mul

    ring = f.ring
    field = ring.field
    key = ring.order.key
    work = dict(f.terms)
    rem = {}
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        hit = None
        for g in divisors:
            if mono_divides(g.lm(), m):
                hit = g
                break
        if hit is None:
            rem[m] = c
            continue
        factor = field.div(c, hit.lc())
        shift = mono_div(m, hit.lm())
        for gm, gc in hit.terms[1:]:
            mm = mono_mul(shift, gm)
            v = work.get(mm, field.zero) - factor * gc
            if field.char:
                v %= field.char
            if v == field.zero:
                work.pop(mm, None)
            else:
                work[mm] = v
    return ring.from_dict(rem)


class TestNormalForm:
    def test_generators_reduce_to_zero(self):
        R, I = twisted_cubic()
        gb = I.gb()
        for g in I.gens:
            assert normal_form(g, gb).is_zero()

    def test_membership_vs_division_oracle(self):
        R, I = twisted_cubic()
        gb = I.gb()
        f = P(R, "x0*x3 - x1*x2")
        assert normal_form(f, gb).is_zero()
        assert naive_division(f, list(gb.elements)).is_zero()

    def test_already_reduced(self):
        R, I = twisted_cubic()
        gb = I.gb()
        # frozen by the division oracle: x0^2 x2 is untouched by all leads
        f = P(R, "x0^2*x2")
        assert normal_form(f, gb) == naive_division(f, list(gb.elements)) == f

    def test_idempotence(self):
        R, I = twisted_cubic(field=FP)
        gb = I.gb()
        rng = random.Random(0)
        for _ in range(10):
            d = {tuple(rng.randrange(3) for _ in range(4)): rng.randrange(1, 32003)
                 for _ in range(6)}
            f = R.from_dict(d)
            r = normal_form(f, gb)
            assert normal_form(r, gb) == r


class TestBuchberger:
    def test_already_a_basis(self):
        R = PolyRing.make("x", 2)
        I = Ideal(R, [P(R, "x0"), P(R, "x1")])
        gb = I.gb()
        assert sorted(poly_to_str(g) for g in gb) == ["x0", "x1"]

    def test_monomial_ideal_is_its_own_basis(self):
        R = PolyRing.make("x", 4)
        gens = ["x0*x2", "x0*x3", "x1*x2", "x1*x3", "x2*x3"]
        gb = Ideal(R, [P(R, s) for s in gens]).gb()
        assert sorted(poly_to_str(g) for g in gb) == sorted(gens)

    def test_twisted_cubic_lex(self):
        # frozen from the engine's own criteria: the reduced lex basis has 3
        # elements, every S-pair reduces to 0, and membership holds both ways
        R, I = twisted_cubic(order=LEX)
        gb = I.gb(LEX)
        assert len(gb.elements) == 3
        for a in gb:
            for b in gb:
                if a is not b:
                    assert normal_form(spoly(a, b), gb).is_zero()
        grev = twisted_cubic()[1]
        for g in gb:
            assert normal_form(P(grev.ring, poly_to_str(g)), grev.gb()).is_zero()

    def test_spair_criterion_random(self):
        rng = random.Random(11)
        R = PolyRing.make("x", 4, field=FP)
        for _ in range(25):
            gens = []
            for _g in range(3):
                d = {tuple(rng.randrange(3) for _ in range(4)): rng.randrange(1, 32003)
                     for _ in range(4)}
                f = R.from_dict(d)
                if f:
                    gens.append(f)
            if not gens:
                continue
            I = Ideal(R, gens)
            gb = I.gb()
            for a in gb:
                for b in gb:
                    if a is not b:
                        assert normal_form(spoly(a, b), gb).is_zero()
            for g in gens:
                assert normal_form(g, gb).is_zero()

    def test_determinism_byte_identical(self):
        R, I = twisted_cubic(field=FP)
        a = buchberger(I, GREVLEX)
        b = buchberger(Ideal(R, list(I.gens)), GREVLEX)
        assert [g.terms for g in a.elements] == [g.terms for g in b.elements]

    def test_hilbert_agreement_lex_grevlex(self):
        R, I = twisted_cubic(field=FP)
        hf_g = [hilbert_function(I, d) for d in range(5)]
        J = Ideal(R, list(I.gens))
        hf_l = [hilbert_function(J, d, order=LEX) for d in range(5)]
        assert hf_g == hf_l

    def test_budget_exhaustion(self):
        R, I = twisted_cubic(field=FP)
        with pytest.raises(InfeasibleError):
            buchberger(I, GREVLEX, budget=1)


def sylvester_resultant_x(f_coeffs, g_coeffs, ring):
    """Oracle: resultant in x of two univariate-in-x polys with polynomial
    coefficients, by expanding the Sylvester determinant."""
    m, n = len(f_coeffs) - 1, len(g_coeffs) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [ring.zero()] * size
        for j, c in enumerate(reversed(f_coeffs)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [ring.zero()] * size
        for j, c in enumerate(reversed(g_coeffs)):
            row[i + j] = c
        rows.append(row)

    def det(mat):
        k = len(mat)
        if k == 1:
            return mat[0][0]
        total = ring.zero()
        for j in range(k):
            if mat[0][j].is_zero():
                continue
            sub = [[mat[i][l] for l in range(k) if l != j] for i in range(1, k)]
            term = mat[0][j] * det(sub)
            total = total + term if j % 2 == 0 else total - term
        return total

    return det(rows)


class TestEliminate:
    def test_cuspidal_cubic_affine(self):
        # affine run, checked against the Sylvester resultant oracle
        R = PolyRing.make("w", 3)  # w0 = x, w1 = y, w2 = z
        I = Ideal(R, [P(R, "w1 - w0^2"), P(R, "w2 - w0^3")])
        E = eliminate(I, keep=[1, 2], sugar=True)
        expected = P(R, "w1^3 - w2^2")
        eq, _ = ideal_equal(E, Ideal(R, [expected]))
        assert eq
        res = sylvester_resultant_x(
            [R.one(), R.zero(), -P(R, "w1")],  # x^2 - y  (coeffs of x^2, x, 1)
            [R.one(), R.zero(), R.zero(), -P(R, "w2")],  # x^3 - z
            R)
        assert res.monic() == expected.monic()

    def test_eliminate_nothing(self):
        R, I = twisted_cubic()
        assert eliminate(I, keep=range(4)) is I

    def test_quadric_family_graph_elimination(self):
        # the (n, s) = (3, 1) member: eliminating the source variables from
        # the graph leaves exactly the image quadric
        from qbt.ratmap import codim2_quadric_map, graph_ideal

        phi, img, _ = codim2_quadric_map(3, 1, field=FP)
        G = graph_ideal(phi)
        E = eliminate(G, keep=range(4, 9))
        want = G.ring.from_dict({(0, 0, 0, 0) + m: c for m, c in img.terms})
        eq, _ = ideal_equal(E, Ideal(G.ring, [want]))
        assert eq


class TestSaturateColonIntersect:
    def test_simple_saturation(self):
        R = PolyRing.make("x", 2)
        I = Ideal(R, [P(R, "x0^2*x1")])
        S = saturate(I, Ideal(R, [P(R, "x0")]))
        eq, _ = ideal_equal(S, Ideal(R, [P(R, "x1")]))
        assert eq

    def test_saturate_by_unit(self):
        R = PolyRing.make("x", 2)
        I = Ideal(R, [P(R, "x0^2*x1")])
        S = saturate(I, Ideal(R, [R.one()]))
        assert S.is_one()

    def test_two_component_monomial(self):
        # <x0x2, x0x3, x1x2, x1x3> is saturated: it equals the intersection
        # of the two linear ideals, computed independently by intersect
        R = PolyRing.make("x", 4)
        I = Ideal(R, [P(R, s) for s in ["x0*x2", "x0*x3", "x1*x2", "x1*x3"]])
        S = saturate(I, irrelevant_ideal(R))
        eq, _ = ideal_equal(S, I)
        assert eq
        A = Ideal(R, [P(R, "x0"), P(R, "x1")])
        B = Ideal(R, [P(R, "x2"), P(R, "x3")])
        eq, _ = ideal_equal(intersect(A, B), I)
        assert eq

    def test_saturate_fixpoint(self):
        R = PolyRing.make("x", 3, field=FP)
        I = Ideal(R, [P(R, "x0^2*x1"), P(R, "x0*x2^2")])
        J = Ideal(R, [P(R, "x0")])
        S1 = saturate(I, J)
        S2 = saturate(S1, J)
        eq, _ = ideal_equal(S1, S2)
        assert eq
        for g in I.gens:
            assert normal_form(g, S1.gb()).is_zero()

    def test_saturate_irrelevant_vs_rabinowitsch(self):
        R = PolyRing.make("x", 3, field=FP)
        I = Ideal(R, [P(R, "x0^2"), P(R, "x0*x1"), P(R, "x0*x2")])
        fast = saturate_irrelevant(I)
        slow = saturate(I, irrelevant_ideal(R))
        eq, _ = ideal_equal(fast, slow)
        assert eq
        eq, _ = ideal_equal(fast, Ideal(R, [P(R, "x0")]))
        assert eq

    def test_colon(self):
        R = PolyRing.make("x", 2)
        got = colon(Ideal(R, [P(R, "x0*x1")]), Ideal(R, [P(R, "x0")]))
        eq, _ = ideal_equal(got, Ideal(R, [P(R, "x1")]))
        assert eq

    def test_intersect_principal(self):
        R = PolyRing.make("x", 2)
        got = intersect(Ideal(R, [P(R, "x0")]), Ideal(R, [P(R, "x1")]))
        eq, _ = ideal_equal(got, Ideal(R, [P(R, "x0*x1")]))
        assert eq

    def test_edge_component_split(self):
        # removing the linear component from the quadric section of the
        # Segre leaves an ideal containing the printed second quadric
        R = PolyRing.make("x", 8, field=FP)
        segre = [P(R, s) for s in [
            "-x1*x4 + x0*x5", "-x2*x4 + x0*x6", "-x3*x4 + x0*x7",
            "-x2*x5 + x1*x6", "-x3*x5 + x1*x7", "-x3*x6 + x2*x7"]]
        # the specialization with b00=b07=b15=b16=b22=b33=1
        Q = P(R, "x0^2 + x0*x7 + x1*x5 + x1*x6 + x2^2 + x3^2")
        Qp = P(R, "x4*x7 + x3*x7 + x5*x6 + x2*x6 + x5^2 + x0*x4")
        I = Ideal(R, segre + [Q])
        linear = Ideal(R, [R.gen(i) for i in range(4)])
        split = colon(I, linear)
        assert normal_form(Qp, split.gb()).is_zero()


class TestIdealEqual:
    def test_reflexive(self):
        R, I = twisted_cubic()
        eq, _ = ideal_equal(I, I)
        assert eq

    def test_strict_inclusion_with_witness(self):
        R = PolyRing.make("x", 2)
        I = Ideal(R, [P(R, "x0")])
        J = Ideal(R, [P(R, "x0^2")])
        eq, witness = ideal_equal(I, J)
        assert not eq and witness == P(R, "x0")


class TestFieldIndependence:
    def test_corpus_ideal_hilbert_functions(self):
        from qbt.corpus import FixtureContext, load_fixture

        for name in ["example_4_3", "example_4_6"]:
            fx = load_fixture(name)
            hq = None
            for field in (QQ_FIELD, FP):
                ctx = FixtureContext(fx, field)
                psi = ctx.maps["psi"]
                I = Ideal(psi.source, list(psi.forms))
                hf = [hilbert_function(I, d) for d in range(5)]
                if hq is None:
                    hq = hf
                else:
                    assert hf == hq
