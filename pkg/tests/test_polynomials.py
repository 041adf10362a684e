from fractions import Fraction as F

import pytest

from carleman.polynomials import Poly


def two_vars():
    v = ("t", "t'")
    return Poly.variable("t", v), Poly.variable("t'", v)


class TestArithmetic:
    def test_construction(self):
        t, tp = two_vars()
        p = 1 - t - tp + t * tp
        assert p == (1 - t) * (1 - tp)

    def test_zero_and_bool(self):
        t, _ = two_vars()
        assert (t - t).is_zero
        assert not (t - t)
        assert t

    def test_pow(self):
        t = Poly.variable("t", ("t",))
        assert (1 - t) ** 3 == 1 - 3 * t + 3 * t * t - t * t * t

    def test_scalar_mixing(self):
        t = Poly.variable("t", ("t",))
        assert F(1, 2) * t + F(1, 2) * t == t
        assert (t + 1) - 1 == t

    def test_as_fraction(self):
        t = Poly.variable("t", ("t",))
        assert (t - t + F(3, 4)).as_fraction() == F(3, 4)
        with pytest.raises(ValueError):
            t.as_fraction()

    def test_mismatched_variables(self):
        t = Poly.variable("t", ("t",))
        u, _ = two_vars()
        with pytest.raises(ValueError):
            _ = t + u

    def test_str(self):
        t, tp = two_vars()
        assert str(1 - t - tp + t * tp) == "1 - t - t' + t*t'"
        assert str(Poly(("t", "t'"))) == "0"
        assert str(-2 * t * t) == "-2*t^2"


class TestDeformedAddition:
    def test_mu_associativity(self):
        # both bracketings expand to 1 - (1-t)(1-t')(1-t'')
        v = ("t", "t'", "t''")
        t = Poly.variable("t", v)
        tp = Poly.variable("t'", v)
        tpp = Poly.variable("t''", v)

        def mu(a, b):
            return a + b - a * b

        left = mu(mu(t, tp), tpp)
        right = mu(t, mu(tp, tpp))
        closed = 1 - (1 - t) * (1 - tp) * (1 - tpp)
        assert left == right == closed

    def test_mu_closure_factorization(self):
        t, tp = two_vars()
        mu = t + tp - t * tp
        assert 1 - mu == (1 - t) * (1 - tp)

    def test_mu_fixed_point_samples(self):
        def mu(a, b):
            return a + b - a * b

        samples = [F(k, 7) for k in range(-9, 12) if F(k, 7) != 1]
        for a in samples[:6]:
            for b in samples[:6]:
                assert (mu(a, b) == 1) == (a == 1 or b == 1)
        assert mu(F(1), F(5)) == 1
        assert mu(F(3), F(1)) == 1
