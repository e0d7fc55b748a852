"""The scale-invariant cubic Arnoux-Yoccoz interval exchange.

The map rho translates each of seven half-open intervals Omega_j =
[delta_j, delta_{j+1}) by tau_j.  Scaling by omega = lambda^3 conjugates rho
to its first-return map on Omega_0 = [0, omega); the return itineraries of
the scaled intervals omega*Omega_j are the path rows p(j, t), which this
module re-derives from scratch instead of trusting the stored copy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .field import FieldElement, OMEGA, ZERO, ONE

N_INTERVALS = 7

_DELTA = (
    FieldElement(0, 0, 0),
    FieldElement(1, -1, -1),
    FieldElement(1, -2, 1),
    FieldElement(Fraction(3, 2), -2, Fraction(-1, 2)),
    FieldElement(Fraction(1, 2), 0, Fraction(-1, 2)),
    FieldElement(Fraction(-1, 2), 1, Fraction(3, 2)),
    FieldElement(0, 1, 0),
    FieldElement(1, 0, 0),
)

_TAU = (
    FieldElement(0, 1, 1),
    FieldElement(-1, 3, 0),
    FieldElement(0, 1, -1),
    FieldElement(-1, 2, 1),
    FieldElement(1, -1, -1),
    FieldElement(0, 1, -1),
    FieldElement(0, -1, 0),
)

_PATH = (
    (0, 6, 3, 6),
    (0, 6, 3, 6, 1, 6, 2, 5, 6, 1, 6, 3, 6),
    (0, 6, 3, 6, 1, 6, 2, 5, 6, 2, 4, 6),
    (0, 6, 3, 6, 1, 6, 3, 6),
    (0, 6, 4, 5, 6, 2, 4, 6),
    (0, 6, 4, 5, 6, 2, 5, 6, 1, 6, 3, 6),
    (0, 6, 4, 6),
)

#: left-to-right order of the translated intervals Omega_j + tau_j
PERMUTATION = (6, 2, 4, 3, 5, 1, 0)

DEFAULT_ITERATION_CAP = 10_000


@dataclass(frozen=True)
class Interval:
    """Half-open interval [lo, hi) with field-element endpoints."""

    lo: FieldElement
    hi: FieldElement

    def __post_init__(self):
        if (self.hi - self.lo).sign() <= 0:
            raise ValueError(f"empty interval [{self.lo}, {self.hi})")

    def length(self) -> FieldElement:
        return self.hi - self.lo

    def contains(self, x: FieldElement) -> bool:
        return (x - self.lo).sign() >= 0 and (x - self.hi).sign() < 0


@dataclass(frozen=True)
class IETTable:
    """Interval endpoints, translations, return times and return itineraries."""

    delta: tuple
    tau: tuple
    nu: tuple
    path: tuple

    def validate(self) -> None:
        assert len(self.delta) == N_INTERVALS + 1
        assert self.delta[0] == ZERO and self.delta[-1] == ONE
        for j in range(N_INTERVALS):
            assert (self.delta[j + 1] - self.delta[j]).sign() > 0
        assert sum(self.nu) == 61
        for j in range(N_INTERVALS):
            assert len(self.path[j]) == self.nu[j]
            assert self.path[j][0] == 0

    def omega_j(self, j: int) -> Interval:
        return Interval(self.delta[j], self.delta[j + 1])


def canonical_table() -> IETTable:
    t = IETTable(delta=_DELTA, tau=_TAU, nu=tuple(len(p) for p in _PATH), path=_PATH)
    t.validate()
    return t


_CANONICAL = canonical_table()


def interval_index(x: FieldElement, table: IETTable = _CANONICAL) -> int:
    """The unique j with delta_j <= x < delta_{j+1}.  Raises outside [0, 1)."""
    if x.sign() < 0 or (x - ONE).sign() >= 0:
        raise ValueError(f"point {x} outside [0, 1)")
    lo, hi = 0, N_INTERVALS  # invariant: delta_lo <= x < delta_hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if (x - table.delta[mid]).sign() >= 0:
            lo = mid
        else:
            hi = mid
    return lo


def rho(x: FieldElement, table: IETTable = _CANONICAL) -> FieldElement:
    return x + table.tau[interval_index(x, table)]


@dataclass(frozen=True)
class PermutationReport:
    ok: bool
    permutation: tuple
    total_image_length: FieldElement
    failures: tuple


def verify_permutation(table: IETTable = _CANONICAL) -> PermutationReport:
    """Check that the translated intervals tile [0, 1) in the expected order."""
    images = [
        Interval(table.delta[j] + table.tau[j], table.delta[j + 1] + table.tau[j])
        for j in range(N_INTERVALS)
    ]
    order = sorted(range(N_INTERVALS), key=lambda j: (float(images[j].lo), j))
    failures = []
    cursor = ZERO
    for j in order:
        if images[j].lo != cursor:
            failures.append(f"gap or overlap at {cursor.to_str()} before interval {j}")
        cursor = images[j].hi
    if cursor != ONE:
        failures.append(f"images end at {cursor.to_str()}, not 1")
    total = sum((iv.length() for iv in images), ZERO)
    perm = tuple(order)
    ok = not failures and perm == PERMUTATION and total == ONE
    if perm != PERMUTATION:
        failures.append(f"permutation {perm} != {PERMUTATION}")
    return PermutationReport(
        ok=ok, permutation=perm, total_image_length=total, failures=tuple(failures)
    )


def first_return(
    x: FieldElement,
    target: Interval,
    cap: int = DEFAULT_ITERATION_CAP,
    table: IETTable = _CANONICAL,
):
    """Iterate rho from x until the orbit re-enters `target`.

    Returns (y, time, itinerary) where itinerary[t] is the interval index of
    rho^t(x) for t = 0..time-1.
    """
    if not target.contains(x):
        raise ValueError("starting point not in the target interval")
    itinerary = []
    y = x
    for _ in range(cap):
        j = interval_index(y, table)
        itinerary.append(j)
        y = y + table.tau[j]
        if target.contains(y):
            return y, len(itinerary), tuple(itinerary)
    raise RuntimeError(f"no return within {cap} iterations")


def derive_path_data(table: IETTable = _CANONICAL, cap: int = DEFAULT_ITERATION_CAP):
    """Recompute the return times and itineraries of the scaled intervals.

    Tracks the whole interval omega*Omega_j through the dynamics; at every
    step both endpoints must lie in the same Omega (asserted exactly), so the
    itinerary is certified for every point of the interval at once.  The
    result must reproduce the stored (nu, path) columns.
    """
    omega0 = Interval(ZERO, OMEGA)
    nu_out, path_out = [], []
    for j in range(N_INTERVALS):
        lo = OMEGA * table.delta[j]
        hi = OMEGA * table.delta[j + 1]
        itinerary = []
        for _ in range(cap):
            k = interval_index(lo, table)
            if (hi - table.delta[k + 1]).sign() > 0:
                raise RuntimeError(
                    f"interval from omega*Omega_{j} straddles delta_{k + 1} "
                    f"after {len(itinerary)} steps"
                )
            itinerary.append(k)
            lo = lo + table.tau[k]
            hi = hi + table.tau[k]
            if lo.sign() >= 0 and (hi - omega0.hi).sign() <= 0:
                break
        else:
            raise RuntimeError(f"no return to Omega_0 within {cap} iterations")
        nu_out.append(len(itinerary))
        path_out.append(tuple(itinerary))
    return tuple(nu_out), tuple(path_out)


def scaling_conjugacy_check(samples, table: IETTable = _CANONICAL):
    """For x in [0, omega), the first return of x to Omega_0 equals omega*rho(x/omega)."""
    omega0 = Interval(ZERO, OMEGA)
    failures = []
    from .field import OMEGA_INV

    for x in samples:
        y, _, _ = first_return(x, omega0, table=table)
        expected = OMEGA * rho(x * OMEGA_INV, table)
        if y != expected:
            failures.append((x, y, expected))
    return failures
