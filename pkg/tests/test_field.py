from fractions import Fraction

import mpmath
import numpy as np
import pytest

from ayscale.field import (
    FieldElement,
    IsolatingInterval,
    LAM,
    LAM2,
    OMEGA,
    OMEGA_INV,
    ONE,
    ResidueElement,
    ZERO,
    min_integer_multiple,
    numeric_constants,
    residue_mul,
    residue_reduce,
)

from conftest import random_element


F = FieldElement


def test_addition_examples():
    assert LAM + LAM2 == F(0, 1, 1)
    x = F(Fraction(2, 3), -1, 5)
    assert x + ZERO == x
    assert F(Fraction(1, 2)) + F(Fraction(1, 2)) == ONE


def test_multiplication_reduction():
    assert LAM * LAM2 == F(1, -1, -1)  # lambda^3 = 1 - lambda - lambda^2
    assert LAM * F(1, 1, 1) == ONE
    x = F(Fraction(-3, 7), 2, Fraction(1, 5))
    assert ONE * x == x


def test_inverses():
    assert LAM.invert() == F(1, 1, 1)
    assert (ONE + LAM).invert() == F(Fraction(1, 2), 0, Fraction(1, 2))
    assert ONE.invert() == ONE
    assert OMEGA * OMEGA_INV == ONE
    with pytest.raises(ZeroDivisionError):
        ZERO.invert()


def test_norms():
    assert LAM.norm() == 1
    assert (ONE - LAM).norm() == 2
    assert ZERO.norm() == 0


def test_signs():
    assert ZERO.sign() == 0
    assert (OMEGA - ONE).sign() == -1
    assert F(1, -1, -1).sign() == 1  # equals omega > 0
    assert LAM < ONE and ZERO < LAM


def test_frac_int_split_examples():
    xi, beta = (F(Fraction(1, 2)) + LAM).frac_int_split()
    assert xi == F(Fraction(1, 2)) and beta == LAM
    xi, beta = (LAM + LAM2).frac_int_split()
    assert xi == ZERO and beta == F(0, 1, 1)
    xi, beta = F(0, Fraction(-1, 3), 0).frac_int_split()
    assert xi == F(0, Fraction(2, 3), 0) and beta == F(0, -1, 0)


def test_min_integer_multiple():
    m, alpha = min_integer_multiple(ONE - OMEGA)
    assert m == 2
    assert (ONE - OMEGA) * alpha == F(2)
    assert min_integer_multiple(ONE) == (1, ONE)
    m, alpha = min_integer_multiple(F(2))
    assert m == 2 and alpha == ONE
    with pytest.raises(ValueError):
        min_integer_multiple(F(Fraction(1, 2)))
    with pytest.raises(ZeroDivisionError):
        min_integer_multiple(ZERO)


def test_residue_ring():
    assert residue_reduce(OMEGA, 2).triple == (1, 1, 1)
    assert residue_reduce(ZERO, 5).triple == (0, 0, 0)
    lhs = residue_mul(residue_reduce(LAM, 3), residue_reduce(LAM2, 3))
    assert lhs == residue_reduce(OMEGA, 3)
    with pytest.raises(ValueError):
        residue_mul(ResidueElement(3, 1, 0, 0), ResidueElement(5, 1, 0, 0))
    with pytest.raises(ValueError):
        ResidueElement(0, 1, 0, 0)


def test_ring_axioms_random(rng):
    for _ in range(200):
        a, b, c = (random_element(rng) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_inverse_random(rng):
    for _ in range(1000):
        a = random_element(rng)
        if a.is_zero():
            continue
        assert a * a.invert() == ONE


def test_norm_multiplicative(rng):
    for _ in range(300):
        a, b = random_element(rng), random_element(rng)
        assert (a * b).norm() == a.norm() * b.norm()


def test_norm_matches_numeric_conjugates(rng):
    roots = np.roots([1, 1, 1, -1])
    for _ in range(100):
        a = random_element(rng, max_den=10, span=4)
        numeric = np.prod(
            [complex(a.c0) + complex(a.c1) * r + complex(a.c2) * r * r for r in roots]
        )
        assert abs(numeric.imag) < 1e-8
        assert abs(float(a.norm()) - numeric.real) < 1e-6 * (1 + abs(numeric.real))


def test_split_random(rng):
    for _ in range(300):
        x = random_element(rng)
        xi, beta = x.frac_int_split()
        assert xi + beta == x
        assert beta.is_algebraic_integer()
        for c in xi.triple:
            assert 0 <= c < 1


def test_sign_agrees_with_numerics(rng):
    with mpmath.workdps(60):
        consts = numeric_constants(50)
        lam = consts.lam
        for _ in range(1000):
            a = random_element(rng, max_den=12, span=5)
            b = random_element(rng, max_den=12, span=5)
            d = a - b
            v = (
                mpmath.mpf(d.c0.numerator) / d.c0.denominator
                + lam * d.c1.numerator / d.c1.denominator
                + lam**2 * d.c2.numerator / d.c2.denominator
            )
            s = d.sign()
            if s == 0:
                assert abs(v) < mpmath.mpf("1e-40")
            else:
                assert mpmath.sign(v) == s


def test_min_multiple_divides_norm(rng):
    for _ in range(200):
        a = FieldElement(rng.randint(-9, 9), rng.randint(-9, 9), rng.randint(-9, 9))
        if a.is_zero():
            continue
        m, _ = min_integer_multiple(a)
        assert abs(a.norm()) % m == 0


def test_isolating_interval():
    iv = IsolatingInterval()
    assert iv.lo == Fraction(1, 2) and iv.hi == Fraction(5, 8)

    def f(x):
        return x**3 + x**2 + x - 1

    assert f(iv.lo) < 0 < f(iv.hi)
    iv.refine(40)
    assert f(iv.lo) < 0 < f(iv.hi)
    assert iv.hi - iv.lo == Fraction(1, 2**iv.bits)
    assert Fraction(1, 2) <= iv.lo < iv.hi <= Fraction(5, 8)


def test_serialization_round_trip(rng):
    assert (ONE + LAM).invert().to_str() == "1/2;0;1/2"
    assert FieldElement.from_str("-2;4;1") == F(-2, 4, 1)
    for _ in range(50):
        x = random_element(rng)
        assert FieldElement.from_str(x.to_str()) == x
    with pytest.raises(ValueError):
        FieldElement.from_str("1;2")


def test_numeric_constants():
    c = numeric_constants(50)
    with mpmath.workdps(60):
        assert abs(c.lam**3 + c.lam**2 + c.lam - 1) < mpmath.mpf("1e-49")
        assert abs(mpmath.cos(c.theta) - mpmath.sqrt(c.omega) * (5 - c.omega) / 2) < c.error_bound


def test_powers():
    assert LAM**3 == OMEGA
    assert LAM**0 == ONE
    assert OMEGA**-1 == OMEGA_INV
    assert (ONE + LAM) ** 2 == (ONE + LAM) * (ONE + LAM)
