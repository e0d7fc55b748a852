"""Exact arithmetic in the cubic field Q(lambda), lambda the real root of
x^3 + x^2 + x - 1.

Everything in this library lives over this one fixed field.  An element is a
coefficient triple c0 + c1*lambda + c2*lambda^2 with exact rational
coefficients.  lambda is a unit (1/lambda = 1 + lambda + lambda^2) and
omega = lambda^3 is the contraction ratio of the renormalization; the ring of
algebraic integers is Z[lambda], the elements with integer coefficients.

Real-embedding comparisons are exact: they refine a dyadic isolating interval
for lambda until the sign of the evaluated polynomial is decided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

Rational = Fraction

#: coefficients of the minimal polynomial f(x) = x^3 + x^2 + x - 1, constant first
MINPOLY = (-1, 1, 1, 1)


def reduce_product(a, b):
    """Multiply two coefficient triples and reduce by lambda^3 = 1 - lambda - lambda^2.

    Works for int triples and Fraction triples alike.
    """
    e0 = a[0] * b[0]
    e1 = a[0] * b[1] + a[1] * b[0]
    e2 = a[0] * b[2] + a[1] * b[1] + a[2] * b[0]
    e3 = a[1] * b[2] + a[2] * b[1]
    e4 = a[2] * b[2]
    # lambda^3 = 1 - lambda - lambda^2,  lambda^4 = -1 + 2*lambda
    return (e0 + e3 - e4, e1 - e3 + 2 * e4, e2 - e3)


def triple_mul_matrix(a):
    """3x3 matrix of multiplication by `a` on the basis (1, lambda, lambda^2).

    Column j holds the coefficients of a * lambda^j.
    """
    c0 = a
    c1 = reduce_product(a, (0, 1, 0))
    c2 = reduce_product(a, (0, 0, 1))
    return [[c0[0], c1[0], c2[0]], [c0[1], c1[1], c2[1]], [c0[2], c1[2], c2[2]]]


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def norm_triple(a):
    """Field norm of a coefficient triple: det of the multiplication operator.

    Multiplicative, possibly negative; callers take abs() where needed.
    """
    return _det3(triple_mul_matrix(a))


class IsolatingInterval:
    """Dyadic isolating interval [p/2^k, (p+1)/2^k] for the real root of f.

    f is strictly increasing, so bisection keeps f(lo) < 0 < f(hi).  Starts at
    [1/2, 5/8]; refinement only ever narrows it, so a shared instance may be
    refined from several call sites without coordination.
    """

    def __init__(self):
        self._p = 4  # [4/8, 5/8]
        self._k = 3

    @property
    def lo(self) -> Fraction:
        return Fraction(self._p, 1 << self._k)

    @property
    def hi(self) -> Fraction:
        return Fraction(self._p + 1, 1 << self._k)

    @property
    def bits(self) -> int:
        return self._k

    @staticmethod
    def _f_sign(p: int, k: int) -> int:
        # sign of f(p / 2^k), scaled by 2^(3k)
        v = p * p * p + (p * p << k) + (p << 2 * k) - (1 << 3 * k)
        return (v > 0) - (v < 0)

    def refine(self, extra_bits: int = 64) -> None:
        p, k = self._p, self._k
        for _ in range(extra_bits):
            p, k = 2 * p, k + 1
            if self._f_sign(p + 1, k) > 0:
                pass  # root in left half: keep p
            else:
                p += 1
        self._p, self._k = p, k

    def sign_of_triple(self, a0: int, a1: int, a2: int) -> int:
        """Exact sign of a0 + a1*lambda + a2*lambda^2 for integer coefficients."""
        if a0 == 0 and a1 == 0 and a2 == 0:
            return 0
        while True:
            p, k = self._p, self._k
            q = 1 << k
            # v approximates q^2 * (a0 + a1*lambda + a2*lambda^2); |lambda*q - p| <= 1
            v = a0 * q * q + a1 * p * q + a2 * p * p
            err = q * (abs(a1) + 3 * abs(a2)) + 1
            if v > err:
                return 1
            if v < -err:
                return -1
            self.refine()


_LAMBDA = IsolatingInterval()


def lambda_interval() -> IsolatingInterval:
    """The shared isolating interval for lambda."""
    return _LAMBDA


def sign_int_triple(a0: int, a1: int, a2: int) -> int:
    return _LAMBDA.sign_of_triple(a0, a1, a2)


def _fmt_rational(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


@dataclass(frozen=True, slots=True)
class FieldElement:
    """c0 + c1*lambda + c2*lambda^2 with exact rational coefficients.

    >>> LAM * LAM2
    FieldElement(1, -1, -1)
    >>> (ONE + LAM).invert()
    FieldElement(1/2, 0, 1/2)
    """

    c0: Fraction
    c1: Fraction
    c2: Fraction

    def __init__(self, c0=0, c1=0, c2=0):
        object.__setattr__(self, "c0", Fraction(c0))
        object.__setattr__(self, "c1", Fraction(c1))
        object.__setattr__(self, "c2", Fraction(c2))

    # -- structure ---------------------------------------------------------

    @property
    def triple(self):
        return (self.c0, self.c1, self.c2)

    def is_zero(self) -> bool:
        return not (self.c0 or self.c1 or self.c2)

    def is_algebraic_integer(self) -> bool:
        return (
            self.c0.denominator == 1
            and self.c1.denominator == 1
            and self.c2.denominator == 1
        )

    def int_triple(self):
        """Coefficients as plain ints; requires an algebraic integer."""
        if not self.is_algebraic_integer():
            raise ValueError(f"not an algebraic integer: {self}")
        return (int(self.c0), int(self.c1), int(self.c2))

    def denominator_lcm(self) -> int:
        return math.lcm(
            self.c0.denominator, self.c1.denominator, self.c2.denominator
        )

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.c0 + o.c0, self.c1 + o.c1, self.c2 + o.c2)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.c0 - o.c0, self.c1 - o.c1, self.c2 - o.c2)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return FieldElement(-self.c0, -self.c1, -self.c2)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(*reduce_product(self.triple, o.triple))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.invert()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.invert()

    def __pow__(self, n: int):
        if n < 0:
            return self.invert() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def invert(self) -> "FieldElement":
        """Multiplicative inverse, by Cramer's rule on the multiplication matrix."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        m = triple_mul_matrix(self.triple)
        d = _det3(m)
        cols = []
        for j in range(3):
            n = [row[:] for row in m]
            for i in range(3):
                n[i][j] = Fraction(1 if i == 0 else 0)
            cols.append(Fraction(_det3(n)) / d)
        return FieldElement(*cols)

    def norm(self) -> Fraction:
        """Determinant of multiplication by self (product of the three conjugates)."""
        return Fraction(norm_triple(self.triple))

    # -- real embedding ----------------------------------------------------

    def sign(self) -> int:
        """Exact sign under the real embedding lambda ~ 0.5436890..."""
        d = self.denominator_lcm()
        return sign_int_triple(
            int(self.c0 * d), int(self.c1 * d), int(self.c2 * d)
        )

    def __lt__(self, other):
        return (self - self._coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - self._coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - self._coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - self._coerce(other)).sign() >= 0

    def __float__(self):
        lam = 0.5436890126920763615708559718017479865
        return float(self.c0) + float(self.c1) * lam + float(self.c2) * lam * lam

    # -- decomposition -----------------------------------------------------

    def frac_int_split(self):
        """Split x = xi + beta with xi's coefficients in [0,1) and beta integral.

        The split is coefficient-wise floor, and it is unique.
        """
        floors = [c.numerator // c.denominator for c in self.triple]
        beta = FieldElement(*floors)
        xi = self - beta
        return xi, beta

    # -- serialization -----------------------------------------------------

    def to_str(self) -> str:
        """Canonical text form ``c0;c1;c2``, rationals as ``p/q`` (q omitted when 1)."""
        return ";".join(_fmt_rational(c) for c in self.triple)

    @staticmethod
    def from_str(s: str) -> "FieldElement":
        parts = s.split(";")
        if len(parts) != 3:
            raise ValueError(f"expected 'c0;c1;c2', got {s!r}")
        return FieldElement(*(Fraction(p) for p in parts))

    def __repr__(self):
        return f"FieldElement({', '.join(_fmt_rational(c) for c in self.triple)})"


ZERO = FieldElement(0)
ONE = FieldElement(1)
LAM = FieldElement(0, 1, 0)
LAM2 = FieldElement(0, 0, 1)
OMEGA = LAM**3  # (1, -1, -1)
OMEGA_INV = OMEGA.invert()  # (4, 3, 2)

# plain-int variants for the hot enumeration paths
OMEGA_Z = (1, -1, -1)
OMEGA_INV_Z = (4, 3, 2)


def omega_power_triple(n: int):
    """omega^n as a plain integer triple (n >= 0)."""
    r = (1, 0, 0)
    for _ in range(n):
        r = reduce_product(r, OMEGA_Z)
    return r


def min_integer_multiple(a: FieldElement):
    """Smallest positive integer M divisible by `a` in Z[lambda].

    Returns (M, alpha) with a * alpha = M and alpha in Z[lambda].  M is the
    lcm of the coefficient denominators of 1/a.
    """
    if not a.is_algebraic_integer():
        raise ValueError("argument must be an algebraic integer")
    if a.is_zero():
        raise ZeroDivisionError("zero has no integer multiple")
    inv = a.invert()
    m = inv.denominator_lcm()
    alpha = inv * m
    assert alpha.is_algebraic_integer()
    return m, alpha


# -- residue rings Z[lambda] / m Z[lambda] ---------------------------------


@dataclass(frozen=True, slots=True)
class ResidueElement:
    """Element of Z[lambda]/(m), coefficients reduced into [0, m)."""

    m: int
    c0: int
    c1: int
    c2: int

    def __init__(self, m: int, c0: int, c1: int, c2: int):
        if m <= 0:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "c0", c0 % m)
        object.__setattr__(self, "c1", c1 % m)
        object.__setattr__(self, "c2", c2 % m)

    @property
    def triple(self):
        return (self.c0, self.c1, self.c2)

    def _check(self, other):
        if self.m != other.m:
            raise ValueError(f"modulus mismatch: {self.m} != {other.m}")

    def __add__(self, other):
        self._check(other)
        return ResidueElement(
            self.m, self.c0 + other.c0, self.c1 + other.c1, self.c2 + other.c2
        )

    def __sub__(self, other):
        self._check(other)
        return ResidueElement(
            self.m, self.c0 - other.c0, self.c1 - other.c1, self.c2 - other.c2
        )

    def __mul__(self, other):
        self._check(other)
        return ResidueElement(self.m, *reduce_product(self.triple, other.triple))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative residue powers not supported")
        result = ResidueElement(self.m, 1, 0, 0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_one(self) -> bool:
        return self.triple == (1 % self.m, 0, 0)


def residue_reduce(a: FieldElement, m: int) -> ResidueElement:
    """Ring homomorphism Z[lambda] -> Z[lambda]/(m)."""
    return ResidueElement(m, *a.int_triple())


def residue_mul(u: ResidueElement, v: ResidueElement) -> ResidueElement:
    return u * v


# -- high-precision numerics -------------------------------------------------


@dataclass(frozen=True)
class NumericConstants:
    """High-precision values of lambda, omega and the conjugate angle theta.

    theta is the argument of the complex eigenvalues of modulus omega^(-1/2)
    of the incidence matrix; cos(theta) = sqrt(omega) * (5 - omega) / 2.
    """

    dps: int
    lam: mpmath.mpf
    omega: mpmath.mpf
    theta: mpmath.mpf
    error_bound: mpmath.mpf

    def omega_pow(self, n: int) -> mpmath.mpf:
        with mpmath.workdps(self.dps):
            return self.omega**n


def numeric_constants(dps: int = 50) -> NumericConstants:
    """Compute the numeric constants at `dps` decimal digits, with a safety margin."""
    with mpmath.workdps(dps + 15):
        lam = mpmath.findroot(lambda x: x**3 + x**2 + x - 1, mpmath.mpf("0.5437"))
        omega = lam**3
        cos_theta = mpmath.sqrt(omega) * (5 - omega) / 2
        theta = mpmath.acos(cos_theta)
        bound = mpmath.mpf(10) ** (-dps)
        assert abs(lam**3 + lam**2 + lam - 1) < bound
        assert abs(mpmath.cos(theta) - cos_theta) < bound
    return NumericConstants(dps=dps, lam=lam, omega=omega, theta=theta, error_bound=bound)
