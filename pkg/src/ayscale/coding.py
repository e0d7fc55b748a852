"""Symbolic coding of the interval exchange and its scaling shift.

A symbol (j, t) labels a scaled interval omega*Omega_j together with a
transit time t along its return orbit; a point's code is the symbol sequence
produced by the shift gamma: x -> (x - d_1) / omega, where the digit d_1 is
the algebraic-integer translation accumulated along the path.  Sequences are
constrained by j_k = p(j_{k+1}, t_{k+1}); six constant tails are excluded to
make the point <-> code correspondence bi-unique.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .field import (
    FieldElement,
    LAM,
    OMEGA,
    OMEGA_INV,
    OMEGA_INV_Z,
    ONE,
    ZERO,
    omega_power_triple,
    reduce_product,
    sign_int_triple,
)
from .iet import N_INTERVALS, Interval, canonical_table

_TABLE = canonical_table()


class Symbol(NamedTuple):
    j: int
    t: int

    def __str__(self):
        return f"({self.j},{self.t})"


def path_of(sym: Symbol) -> int:
    """p(j, t): the interval the return orbit of omega*Omega_j occupies at time t."""
    return _TABLE.path[sym.j][sym.t]


SYMBOLS = tuple(
    Symbol(j, t) for j in range(N_INTERVALS) for t in range(_TABLE.nu[j])
)

#: symbols that may follow a symbol whose j-value is the key
SUCCESSORS = {
    i: tuple(s for s in SYMBOLS if path_of(s) == i) for i in range(N_INTERVALS)
}


def digit(sym: Symbol) -> FieldElement:
    """d(j, t) = sum of tau over the first t steps of row j's return path."""
    d = ZERO
    for s in range(sym.t):
        d = d + _TABLE.tau[_TABLE.path[sym.j][s]]
    return d


DIGITS = {s: digit(s) for s in SYMBOLS}
_DIGITS_Z = {s: DIGITS[s].int_triple() for s in SYMBOLS}


def digit_alphabet():
    """The set of digit values over all 61 symbols (25 distinct elements)."""
    return {DIGITS[s] for s in SYMBOLS}


FORBIDDEN_TAILS = (
    Symbol(1, 9),
    Symbol(2, 6),
    Symbol(3, 2),
    Symbol(4, 6),
    Symbol(5, 3),
    Symbol(6, 1),
)


def forbidden_tails():
    return FORBIDDEN_TAILS


def self_loop_symbols():
    """All symbols with p(j,t) = j; these are the constant admissible codes."""
    return tuple(s for s in SYMBOLS if path_of(s) == s.j)


def allowed_fixed_symbols():
    """Self-loops that survive the forbidden-tail exclusion (the 7 fixed codes)."""
    return tuple(s for s in self_loop_symbols() if s not in FORBIDDEN_TAILS)


# -- codes -------------------------------------------------------------------


class InadmissibleCodeError(ValueError):
    pass


@dataclass(frozen=True)
class PeriodicCode:
    """An eventually periodic code: finite preperiod followed by a repeating period."""

    preperiod: tuple
    period: tuple

    def __post_init__(self):
        if not self.period:
            raise InadmissibleCodeError("period must be nonempty")
        word = self.preperiod + self.period
        for k in range(len(word) - 1):
            if word[k].j != path_of(word[k + 1]):
                raise InadmissibleCodeError(
                    f"adjacency broken at position {k}: {word[k]} -> {word[k + 1]}"
                )
        # wrap: the last period symbol is followed by the first, forever
        if self.period[-1].j != path_of(self.period[0]):
            raise InadmissibleCodeError(
                f"adjacency broken at period wrap: {self.period[-1]} -> {self.period[0]}"
            )

    def is_forbidden_tail(self) -> bool:
        s = self.period[0]
        return all(p == s for p in self.period) and s in FORBIDDEN_TAILS

    def shifted(self) -> "PeriodicCode":
        """The code of gamma(x): drop the first symbol."""
        if self.preperiod:
            return PeriodicCode(self.preperiod[1:], self.period)
        return PeriodicCode((), self.period[1:] + self.period[:1])

    def __str__(self):
        pre = "".join(map(str, self.preperiod))
        per = "".join(map(str, self.period))
        return f"{pre}[{per}]"


def decode(code: PeriodicCode) -> FieldElement:
    """Exact value of an eventually periodic code.

    The preperiod contributes a polynomial in omega; the period contributes
    its digit polynomial divided by 1 - omega^n.  Forbidden constant tails
    decode fine arithmetically but land outside [0, 1); callers that care
    should check ``is_forbidden_tail``.
    """
    n = len(code.period)
    s = ZERO
    w = ONE
    for sym in code.preperiod:
        s = s + w * DIGITS[sym]
        w = w * OMEGA
    p = ZERO
    wp = ONE
    for sym in code.period:
        p = p + wp * DIGITS[sym]
        wp = wp * OMEGA
    return s + w * (p / (ONE - OMEGA**n))


# -- tiles --------------------------------------------------------------------


@dataclass(frozen=True)
class Tile:
    symbols: tuple
    interval: Interval

    @property
    def level(self) -> int:
        return len(self.symbols)


def tile_of(symbols) -> Tile:
    """The half-open interval of points whose code starts with `symbols`.

    Level-1 tile of (j, t) is omega*Omega_j + d(j, t); deeper tiles follow
    the affine recursion x = d_1 + omega * x'.
    """
    symbols = tuple(symbols)
    if not symbols:
        raise ValueError("need at least one symbol")
    for k in range(len(symbols) - 1):
        if symbols[k].j != path_of(symbols[k + 1]):
            raise InadmissibleCodeError(
                f"inadmissible pair {symbols[k]} -> {symbols[k + 1]}"
            )
    last = symbols[-1]
    lo = OMEGA * _TABLE.delta[last.j] + DIGITS[last]
    hi = OMEGA * _TABLE.delta[last.j + 1] + DIGITS[last]
    for sym in reversed(symbols[:-1]):
        lo = DIGITS[sym] + OMEGA * lo
        hi = DIGITS[sym] + OMEGA * hi
    return Tile(symbols, Interval(lo, hi))


_SYMBOLS_BY_J = {j: tuple(s for s in SYMBOLS if s.j == j) for j in range(N_INTERVALS)}


def level_tiles(level: int):
    """All tiles of a given level.

    Built by prepending symbols: tile((s0,) + w) = d(s0) + omega * tile(w),
    one affine step per tile.
    """
    if level < 1:
        raise ValueError("level must be >= 1")
    tiles = [tile_of((s,)) for s in SYMBOLS]
    for _ in range(level - 1):
        nxt = []
        for t in tiles:
            for s0 in _SYMBOLS_BY_J[path_of(t.symbols[0])]:
                d = DIGITS[s0]
                nxt.append(
                    Tile(
                        (s0,) + t.symbols,
                        Interval(d + OMEGA * t.interval.lo, d + OMEGA * t.interval.hi),
                    )
                )
        tiles = nxt
    return tiles


# -- fast exact point dynamics ------------------------------------------------

# level-1 tiles sorted left to right; endpoints scaled by 2 are integral
_LEVEL1 = sorted(
    ((OMEGA * _TABLE.delta[s.j] + DIGITS[s], s) for s in SYMBOLS),
    key=lambda pair: float(pair[0]),
)
_TILE_SYMBOLS = tuple(s for _, s in _LEVEL1)
_TILE_LEFTS_2Z = tuple((2 * left).int_triple() for left, _ in _LEVEL1)
_TILE_LEFTS_F = tuple(float(left) for left, _ in _LEVEL1)
_LAM_F = float(LAM)
_LAM2_F = _LAM_F * _LAM_F
_GUARD = 1e-9


class ScaledPointWalker:
    """Exact gamma-stepping on points with a fixed coefficient denominator.

    States are integer triples X with x = X / (2*den); tile lookups try a
    float evaluation first and fall back to exact sign tests within a guard
    band around tile boundaries, so every answer is exact.
    """

    def __init__(self, den: int):
        if den <= 0:
            raise ValueError("denominator must be positive")
        self.den = den
        self._scale = 2 * den
        self._bounds = [
            (den * b0, den * b1, den * b2) for (b0, b1, b2) in _TILE_LEFTS_2Z
        ]

    def to_state(self, x: FieldElement):
        y = x * self._scale
        return y.int_triple()

    def from_state(self, state) -> FieldElement:
        return FieldElement(*(Fraction(c, self._scale) for c in state))

    def tile_index(self, state) -> int:
        """Index into the sorted level-1 tiles of the tile containing the point."""
        a, b, c = state
        v = (a + b * _LAM_F + c * _LAM2_F) / self._scale
        i = bisect.bisect_right(_TILE_LEFTS_F, v) - 1
        if (
            0 <= i
            and v - _TILE_LEFTS_F[i] > _GUARD
            and (i == 60 or _TILE_LEFTS_F[i + 1] - v > _GUARD)
        ):
            return i
        # exact binary search: find rightmost left endpoint <= x
        lo, hi = 0, 61
        while hi - lo > 1:
            mid = (lo + hi) // 2
            ba, bb, bc = self._bounds[mid]
            if sign_int_triple(a - ba, b - bb, c - bc) >= 0:
                lo = mid
            else:
                hi = mid
        return lo

    def step(self, state):
        """One application of gamma; returns (new_state, symbol)."""
        idx = self.tile_index(state)
        sym = _TILE_SYMBOLS[idx]
        d0, d1, d2 = _DIGITS_Z[sym]
        s = self._scale
        shifted = (state[0] - s * d0, state[1] - s * d1, state[2] - s * d2)
        return reduce_product(shifted, OMEGA_INV_Z), sym

    def orbit_code(self, state, cap: int = 1_000_000):
        """Run gamma until the exact state recurs; returns (symbols, first_index)."""
        seen = {state: 0}
        syms = []
        for k in range(1, cap + 1):
            state, sym = self.step(state)
            syms.append(sym)
            if state in seen:
                return tuple(syms), seen[state]
            seen[state] = k
        raise RuntimeError(f"no recurrence within {cap} steps")


def _domain_check(x: FieldElement):
    if x.sign() < 0 or (x - ONE).sign() >= 0:
        raise ValueError(f"point {x} outside [0, 1)")


def encode(x: FieldElement, depth: int):
    """The first `depth` symbols of the code of x."""
    _domain_check(x)
    walker = ScaledPointWalker(x.denominator_lcm())
    state = walker.to_state(x)
    out = []
    for _ in range(depth):
        state, sym = walker.step(state)
        out.append(sym)
    return tuple(out)


def encode_rational(x: FieldElement) -> PeriodicCode:
    """Full eventually periodic code of a field point, by exact state recurrence."""
    _domain_check(x)
    walker = ScaledPointWalker(x.denominator_lcm())
    syms, start = walker.orbit_code(walker.to_state(x))
    return PeriodicCode(syms[:start], syms[start:])


def gamma(x: FieldElement) -> FieldElement:
    """The scaling shift x -> (x - d_1) / omega."""
    _domain_check(x)
    walker = ScaledPointWalker(x.denominator_lcm())
    state, _ = walker.step(walker.to_state(x))
    return walker.from_state(state)


# -- incidence matrix ---------------------------------------------------------


def incidence_matrix():
    """A[i][j] = number of visits of the return orbit of omega*Omega_i to Omega_j."""
    return tuple(
        tuple(sum(1 for t in range(_TABLE.nu[i]) if _TABLE.path[i][t] == j)
              for j in range(N_INTERVALS))
        for i in range(N_INTERVALS)
    )


def matrix_power_trace(n: int) -> int:
    """Trace of A^n, exact."""
    a = incidence_matrix()
    size = N_INTERVALS
    result = [[1 if i == j else 0 for j in range(size)] for i in range(size)]
    base = [list(row) for row in a]
    while n:
        if n & 1:
            result = [
                [sum(result[i][k] * base[k][j] for k in range(size)) for j in range(size)]
                for i in range(size)
            ]
        base = [
            [sum(base[i][k] * base[k][j] for k in range(size)) for j in range(size)]
            for i in range(size)
        ]
        n >>= 1
    return sum(result[i][i] for i in range(size))


def char_poly():
    """Characteristic polynomial of A, exact, ascending coefficients.

    Computed over the rationals from the power sums (Newton's identities);
    the result is integral.
    """
    size = N_INTERVALS
    a = [list(map(Fraction, row)) for row in incidence_matrix()]
    power = [row[:] for row in a]
    traces = [sum(a[i][i] for i in range(size))]
    for _ in range(size - 1):
        power = [
            [sum(power[i][k] * a[k][j] for k in range(size)) for j in range(size)]
            for i in range(size)
        ]
        traces.append(sum(power[i][i] for i in range(size)))
    e = [Fraction(1)]
    for k in range(1, size + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * traces[i - 1]
        e.append(acc / k)
    # char poly = sum_k (-1)^k e_k x^(size-k), ascending order
    coeffs = [Fraction(0)] * (size + 1)
    for k in range(size + 1):
        coeffs[size - k] = (-1) ** k * e[k]
    assert all(c.denominator == 1 for c in coeffs)
    return tuple(int(c) for c in coeffs)


def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        for j, qj in enumerate(q):
            out[i + j] += pi * qj
    return tuple(out)


#: irreducible factors of the characteristic polynomial, ascending coefficients
CHAR_POLY_FACTORS = ((-1, 1), (-1, 7, -5, 1), (-1, 5, -7, 1))


def char_poly_check():
    """Compare the computed matrix against its expected factored spectrum."""
    expected = (1,)
    for f in CHAR_POLY_FACTORS:
        expected = _poly_mul(expected, f)
    actual = char_poly()
    trace = sum(incidence_matrix()[i][i] for i in range(N_INTERVALS))
    return {
        "matrix": incidence_matrix(),
        "char_poly": actual,
        "expected": expected,
        "trace": trace,
        "ok": actual == expected and trace == 13,
    }
