"""Kernel arithmetic: canonical form, parser, substitution, jacobian, gcd."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbt.errors import ExponentOverflowError, RingMismatchError
from qbt.fields import GF, QQ_FIELD
from qbt.orders import LEX
from qbt.rings import (
    EXP_CAP,
    PolyRing,
    Polynomial,
    content_and_gcd,
    exact_div,
    jacobian,
    poly_arith,
    poly_from_str,
    poly_to_str,
    substitute,
)

FP = GF(32003)


def P(ring, s):
    return poly_from_str(ring, s)


class TestArith:
    def test_additive_inverse(self):
        R = PolyRing.make("x", 3)
        assert poly_arith(P(R, "x0"), P(R, "-x0"), "add").is_zero()

    def test_difference_of_squares(self):
        R = PolyRing.make("x", 3)
        assert poly_arith(P(R, "x0+x1"), P(R, "x0-x1"), "mul") == P(R, "x0^2 - x1^2")

    def test_hand_expansion_and_random_eval(self):
        # (x3x6 - x0x2)(x1x4 - x0x5), expanded by hand and cross-checked by
        # evaluating both sides at 5 random points over GF(32003)
        R = PolyRing.make("x", 7, field=FP)
        f, g = P(R, "x3*x6 - x0*x2"), P(R, "x1*x4 - x0*x5")
        prod = f * g
        expected = P(R, "x1*x3*x4*x6 - x0*x3*x5*x6 - x0*x1*x2*x4 + x0^2*x2*x5")
        assert prod == expected
        rng = random.Random(5)
        for _ in range(5):
            pt = [rng.randrange(32003) for _ in range(7)]
            assert prod.eval(pt) == f.eval(pt) * g.eval(pt) % 32003

    def test_homogeneous_product_degree(self):
        R = PolyRing.make("x", 4)
        f, g = P(R, "x0^2 + x1*x2"), P(R, "x3")
        assert (f * g).is_homogeneous() and (f * g).degree() == 3

    def test_ring_mismatch(self):
        R, S = PolyRing.make("x", 2), PolyRing.make("y", 2)
        with pytest.raises(RingMismatchError):
            poly_arith(P(R, "x0"), P(S, "y0"), "add")

    def test_exponent_overflow_is_hard_error(self):
        R = PolyRing.make("x", 1)
        big = Polynomial(R, (((EXP_CAP,), R.field.one),))
        with pytest.raises(ExponentOverflowError):
            big * P(R, "x0")


class TestCanonicalForm:
    def test_invariants(self):
        R = PolyRing.make("x", 4, field=FP)
        f = P(R, "3*x0*x1 + x2^2 - x3*x0 + 1")
        key = R.order.key
        keys = [key(m) for m, _ in f.terms]
        assert keys == sorted(keys, reverse=True)
        assert all(c != 0 for _, c in f.terms)
        assert len({m for m, _ in f.terms}) == len(f.terms)

    def test_zero_is_empty(self):
        R = PolyRing.make("x", 2)
        assert (P(R, "x0") - P(R, "x0")).terms == ()

    def test_print_parse_roundtrip(self):
        R = PolyRing.make("x", 5)
        for s in ["x3*x6 - x0*x2".replace("6", "4"), "2*x0^3 - 1/2*x1*x2 + x4",
                  "x0", "-x1^2", "0"]:
            f = P(R, s)
            assert poly_from_str(R, poly_to_str(f)) == f

    def test_whitespace_tolerated(self):
        R = PolyRing.make("x", 3)
        assert P(R, "  x0 *x1-   x2 ^ 2 ") == P(R, "x0*x1 - x2^2")


@st.composite
def random_poly(draw, ring):
    nterms = draw(st.integers(0, 20))
    d = {}
    for _ in range(nterms):
        mono = tuple(draw(st.integers(0, 3)) for _ in range(ring.nvars))
        c = draw(st.integers(0, 32002))
        if c:
            d[mono] = (d.get(mono, 0) + c) % 32003
    return ring.from_dict({m: c for m, c in d.items() if c})


RING6 = PolyRing.make("x", 6, field=FP)


class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(random_poly(RING6), random_poly(RING6), random_poly(RING6))
    def test_associativity_distributivity(self, f, g, h):
        assert (f + g) + h == f + (g + h)
        assert f * (g + h) == f * g + f * h

    @settings(max_examples=100, deadline=None)
    @given(random_poly(RING6), random_poly(RING6), st.integers(0, 10**6))
    def test_evaluation_homomorphism(self, f, g, seed):
        rng = random.Random(seed)
        pt = [rng.randrange(32003) for _ in range(6)]
        assert (f * g).eval(pt) == f.eval(pt) * g.eval(pt) % 32003

    @settings(max_examples=30, deadline=None)
    @given(random_poly(RING6), random_poly(RING6))
    def test_result_canonical(self, f, g):
        r = f * g
        key = RING6.order.key
        keys = [key(m) for m, _ in r.terms]
        assert keys == sorted(keys, reverse=True)
        assert all(c for _, c in r.terms)


class TestSubstitute:
    def test_identity(self):
        R = PolyRing.make("x", 2)
        f = P(R, "x0*x1")
        assert substitute(f, R.gens(), R) == f

    def test_quadric_relation_normal_form(self):
        # the codimension-2-quadric family at (n, s) = (2, 1):
        # [x0 x2, x1 x2, x2^2, x0^2 + x1^2] satisfies y0^2 + y1^2 = y2 y3
        Rx = PolyRing.make("x", 3)
        Ry = PolyRing.make("y", 4)
        images = [P(Rx, t) for t in ["x0*x2", "x1*x2", "x2^2", "x0^2 + x1^2"]]
        assert substitute(P(Ry, "y0^2 + y1^2 - y2*y3"), images, Rx).is_zero()

    def test_quadric_relation_family(self):
        # same identity across n = 3..5, all s
        for n in range(3, 6):
            Rx = PolyRing.make("x", n + 1)
            Ry = PolyRing.make("y", n + 2)
            x = Rx.gens()
            for s in range(1, n):
                images = [x[i] * x[n] for i in range(n)] + [x[n] * x[n]]
                q = Rx.zero()
                for i in range(s + 1):
                    q = q + x[i] * x[i]
                images.append(q)
                y = Ry.gens()
                rel = Ry.zero()
                for i in range(s + 1):
                    rel = rel + y[i] * y[i]
                rel = rel - y[n] * y[n + 1]
                assert substitute(rel, images, Rx).is_zero()

    def test_zero_images(self):
        R = PolyRing.make("x", 3)
        f = P(R, "x0^2 + x1*x2")
        zeros = [R.zero()] * 3
        assert substitute(f, zeros, R, require_homogeneous=False).is_zero()

    def test_composition(self):
        Ra = PolyRing.make("a", 2, field=FP)
        Rb = PolyRing.make("b", 2, field=FP)
        Rc = PolyRing.make("c", 2, field=FP)
        f = P(Ra, "a0^2 + 3*a0*a1")
        G = [P(Rb, "b0*b1"), P(Rb, "b1^2")]
        H = [P(Rc, "c0^2"), P(Rc, "c0*c1 + c1^2")]
        lhs = substitute(substitute(f, G, Rb), H, Rc)
        rhs = substitute(f, [substitute(g, H, Rc) for g in G], Rc)
        assert lhs == rhs

    def test_arity_mismatch(self):
        R = PolyRing.make("x", 3)
        with pytest.raises(ValueError):
            substitute(P(R, "x0"), R.gens()[:2], R)

    def test_inhomogeneous_images_rejected(self):
        R = PolyRing.make("x", 2)
        with pytest.raises(ValueError):
            substitute(P(R, "x0*x1"), [P(R, "x0 + x0^2"), P(R, "x1")], R)


class TestJacobian:
    def test_square(self):
        R = PolyRing.make("x", 3)
        row = jacobian([P(R, "x0^2")])[0]
        assert row[0] == P(R, "2*x0") and row[1].is_zero() and row[2].is_zero()

    def test_bilinear_row(self):
        R = PolyRing.make("y", 6)
        row = jacobian([P(R, "y0*y5 - y2^2")])[0]
        assert [poly_to_str(p) for p in row] == ["y5", "0", "-2*y2", "0", "0", "y0"]


class TestGcd:
    def test_common_variable(self):
        R = PolyRing.make("x", 3)
        assert content_and_gcd([P(R, "x0*x1"), P(R, "x0*x2")]) == P(R, "x0")

    def test_factored(self):
        R = PolyRing.make("x", 2)
        g = content_and_gcd([P(R, "x0^2 - x1^2"), P(R, "x0^2 + 2*x0*x1 + x1^2")])
        assert g == P(R, "x0 + x1")

    def test_coprime_quadrics(self):
        # the five quadrics cutting a line and two points have no fixed part
        R = PolyRing.make("x", 4)
        polys = [P(R, s) for s in ["x0*x2", "x0*x3", "x1*x2", "x1*x3", "x2*x3"]]
        assert content_and_gcd(polys).degree() == 0

    def test_exact_div(self):
        R = PolyRing.make("x", 3, field=FP)
        f, g = P(R, "x0^2*x1 + x0*x1*x2"), P(R, "x0*x1")
        assert exact_div(f, g) == P(R, "x0 + x2")
        with pytest.raises(ValueError):
            exact_div(P(R, "x0^2 + x1"), P(R, "x0"))


class TestOrders:
    def test_lex_vs_grevlex_leading_terms(self):
        R = PolyRing.make("x", 4, field=FP, order=LEX)
        f = P(R, "x1^2 - x0*x2")
        assert f.lm() == (1, 0, 1, 0)
        G = PolyRing.make("x", 4, field=FP)
        g = poly_from_str(G, "x1^2 - x0*x2")
        assert g.lm() == (0, 2, 0, 0)
