"""Orders of fractional parts modulo m and the prime-splitting bound T(m).

The order of xi in Z[lambda]/(m) is the first k >= 1 with
omega^k * xi = xi.  It divides T(m), which is assembled from the
factorization type of f(x) = x^3 + x^2 + x - 1 modulo each prime factor:
the discriminant of f is -44, so exactly 2 and 11 ramify, and every other
prime is inert, splits, or splits completely according to its count of
roots mod p.  Prime powers are handled by the standard lifting argument,
with the threshold exponent computed by exact residue arithmetic.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import BudgetExceededError
from .field import (
    FieldElement,
    OMEGA_Z,
    ResidueElement,
    reduce_product,
    sign_int_triple,
    triple_mul_matrix,
)
from .coding import ScaledPointWalker

# -- plain integer number theory (trial division is plenty at survey scale) ----


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int):
    """Prime factorization as a list of (p, e), ascending."""
    if n < 1:
        raise ValueError("can only factor positive integers")
    out = []
    for p in range(2, n + 1):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    if n > 1:
        out.append((n, 1))
    return out


def primes_upto(limit: int):
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve)


def mobius(n: int) -> int:
    mu = 1
    for _, e in factorize(n):
        if e > 1:
            return 0
        mu = -mu
    return mu


# -- splitting of primes --------------------------------------------------------

RAMIFIED_PRIMES = (2, 11)  # the prime divisors of disc(f) = -44


@dataclass(frozen=True)
class SplittingReport:
    """Factorization type of f mod p.

    `factors` lists (a, multiplicity) for each monic linear factor (x + a);
    the corresponding roots are -a mod p.  kind is one of ramified-total,
    ramified-partial, inert, splits, splits-completely.
    """

    p: int
    kind: str
    factors: tuple

    @property
    def roots(self):
        return tuple(((-a) % self.p, e) for a, e in self.factors)


def _f_mod(x: int, p: int) -> int:
    return (x * x * x + x * x + x - 1) % p


def splitting_type(p: int) -> SplittingReport:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    factors = []
    for r in range(p):
        if _f_mod(r, p) == 0:
            # multiplicity via derivatives of f
            mult = 1
            if (3 * r * r + 2 * r + 1) % p == 0:
                mult = 2
                if (6 * r + 2) % p == 0:
                    mult = 3
            factors.append(((-r) % p, mult))
    distinct = len(factors)
    total = sum(e for _, e in factors)
    if p in RAMIFIED_PRIMES:
        kind = "ramified-total" if total == 3 and distinct == 1 else "ramified-partial"
    elif distinct == 0:
        kind = "inert"
    elif distinct == 1:
        kind = "splits"
    elif distinct == 3:
        kind = "splits-completely"
    else:
        raise AssertionError(f"impossible factorization of f mod {p}: {factors}")
    return SplittingReport(p=p, kind=kind, factors=tuple(sorted(factors)))


def t_prime(p: int) -> int:
    """T(p): the order bound modulo a prime, by splitting type."""
    rep = splitting_type(p)
    if rep.kind == "ramified-total":  # p = 2
        return p * p * (p - 1)
    if rep.kind == "ramified-partial":  # p = 11
        return p * (p - 1)
    if rep.kind == "inert":
        t = p * p + p + 1
        return t // 3 if p % 3 == 1 else t
    if rep.kind == "splits":
        return (p * p - 1) // 3
    # splits completely
    return (p - 1) // 3 if p % 3 == 1 else p - 1


def _omega_pow_mod(k: int, m: int):
    """omega^k as a residue triple mod m."""
    result = (1 % m, 0, 0)
    base = tuple(c % m for c in OMEGA_Z)
    while k:
        if k & 1:
            result = tuple(c % m for c in reduce_product(result, base))
        base = tuple(c % m for c in reduce_product(base, base))
        k >>= 1
    return result


def lifting_threshold(p: int, e_cap: int) -> int:
    """Largest k <= e_cap with omega^T(p) = 1 mod p^k.

    Only the value min(k, e_cap) ever matters for exponents up to e_cap.
    """
    t = t_prime(p)
    mod = p**e_cap
    u = _omega_pow_mod(t, mod)
    u = (u[0] - 1, u[1], u[2])
    k = e_cap
    for c in u:
        c %= mod
        if c == 0:
            continue
        v = 0
        while c % p == 0:
            c //= p
            v += 1
        k = min(k, v)
    assert k >= 1, "T(p) must be an order bound modulo p itself"
    return k


def t_prime_power(p: int, e: int) -> int:
    """T(p^e) = T(p) * p^max(0, e-k), k the lifting threshold."""
    if e < 1:
        raise ValueError("exponent must be >= 1")
    t = t_prime(p)
    if e == 1:
        return t
    k = lifting_threshold(p, e)
    return t * p ** max(0, e - k)


@dataclass(frozen=True)
class OrderBound:
    """T(m) with its per-prime-power parts (p, e, T(p^e), lifting threshold)."""

    m: int
    T: int
    parts: tuple


def t_bound(m: int) -> OrderBound:
    if m < 1:
        raise ValueError("modulus must be >= 1")
    if m == 1:
        return OrderBound(m=1, T=1, parts=())
    parts = []
    total = 1
    for p, e in factorize(m):
        k = 1 if e == 1 else lifting_threshold(p, e)
        tpe = t_prime(p) * p ** max(0, e - k)
        parts.append((p, e, tpe, k))
        total = math.lcm(total, tpe)
    return OrderBound(m=m, T=total, parts=tuple(parts))


# -- orders of residues ----------------------------------------------------------


def order_of(xi: ResidueElement) -> int:
    """min{k >= 1 : omega^k * xi = xi mod (m)}; capped at T(m)."""
    m = xi.m
    if m < 2:
        raise ValueError("modulus must be >= 2")
    cap = t_bound(m).T
    omega = ResidueElement(m, *OMEGA_Z)
    y = omega * xi
    k = 1
    while y != xi:
        y = omega * y
        k += 1
        if k > cap:
            raise RuntimeError(f"order of {xi} exceeds T({m}) = {cap}: bound violated")
    return k


def omega_order_mod(m: int) -> int:
    """Multiplicative order of omega in Z[lambda]/(m), by brute iteration."""
    cap = t_bound(m).T
    one = ResidueElement(m, 1, 0, 0)
    omega = ResidueElement(m, *OMEGA_Z)
    y = omega
    k = 1
    while not y == one:
        y = y * omega
        k += 1
        if k > cap:
            raise RuntimeError(f"order of omega mod {m} exceeds T({m}) = {cap}")
    return k


def all_orders_mod(m: int) -> np.ndarray:
    """Orders of every residue triple mod m, vectorized; index a*m^2 + b*m + c."""
    if m < 2:
        raise ValueError("modulus must be >= 2")
    cap = t_bound(m).T
    grid = np.indices((m, m, m)).reshape(3, -1).T.astype(np.int64)
    om = np.array(triple_mul_matrix(OMEGA_Z), dtype=np.int64).T
    orders = np.zeros(len(grid), dtype=np.int64)
    cur = grid.copy()
    pending = np.ones(len(grid), dtype=bool)
    for k in range(1, cap + 1):
        cur = (cur @ om) % m
        hit = pending & np.all(cur == grid, axis=1)
        orders[hit] = k
        pending &= ~hit
        if not pending.any():
            break
    assert not pending.any(), f"orders exceed T({m}); bound violated"
    return orders


# -- coprimality via the module index ---------------------------------------------


def ideal_index(xi_triple, m: int) -> int:
    """Index in Z^3 of the module generated by xi*Z[lambda] + m*Z[lambda].

    The gcd of the 3x3 minors of the stacked generator matrix is the product
    of the Smith normal form invariants; the ideal (xi, m) is the unit ideal
    iff this index is 1.
    """
    mx = triple_mul_matrix(xi_triple)
    rows = [
        (mx[0][j], mx[1][j], mx[2][j]) for j in range(3)
    ] + [(m, 0, 0), (0, m, 0), (0, 0, m)]
    g = 0
    for a, b, c in combinations(rows, 3):
        det = (
            a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0])
        )
        g = math.gcd(g, det)
        if g == 1:
            return 1
    return g


def is_coprime(xi_triple, m: int) -> bool:
    return ideal_index(xi_triple, m) == 1


def in_ideal_above_two(x: FieldElement) -> bool:
    """Membership in the ramified prime ideal (2, lambda + 1): coefficient sum even."""
    t = x.int_triple()
    return (t[0] + t[1] + t[2]) % 2 == 0


# -- cyclotomic factorization ------------------------------------------------------

_CYCLOTOMIC_CACHE: dict = {}


def _poly_divide_exact(num, den):
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        q[i], r = divmod(num[i + len(den) - 1], den[-1])
        assert r == 0
        for j, d in enumerate(den):
            num[i + j] -= q[i] * d
    assert all(v == 0 for v in num)
    return tuple(q)


def cyclotomic_poly(d: int):
    """Coefficients of the d-th cyclotomic polynomial, ascending, exact."""
    if d in _CYCLOTOMIC_CACHE:
        return _CYCLOTOMIC_CACHE[d]
    num = tuple([-1] + [0] * (d - 1) + [1])  # x^d - 1
    den = (1,)
    for e in range(1, d):
        if d % e == 0:
            den = _poly_mul(den, cyclotomic_poly(e))
    out = _poly_divide_exact(num, den)
    _CYCLOTOMIC_CACHE[d] = out
    return out


def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        for j, qj in enumerate(q):
            out[i + j] += pi * qj
    return tuple(out)


def eval_poly_at_lambda(coeffs) -> tuple:
    """Evaluate an integer polynomial at lambda, as an integer triple (Horner)."""
    acc = (0, 0, 0)
    for c in reversed(coeffs):
        acc = reduce_product(acc, (0, 1, 0))
        acc = (acc[0] + c, acc[1], acc[2])
    return acc


def cyclotomic_check(n: int) -> dict:
    """Verify 1 - omega^n = -prod_{d|n} C_3d(lambda) * prod_{d|n, 3 nmid d} C_d(lambda)."""
    from .field import omega_power_triple

    prod = (1, 0, 0)
    for d in range(1, n + 1):
        if n % d == 0:
            prod = reduce_product(prod, eval_poly_at_lambda(cyclotomic_poly(3 * d)))
            if d % 3 != 0:
                prod = reduce_product(prod, eval_poly_at_lambda(cyclotomic_poly(d)))
    lhs = tuple(a - b for a, b in zip((1, 0, 0), omega_power_triple(n)))
    rhs = tuple(-v for v in prod)
    return {"n": n, "lhs": lhs, "rhs": rhs, "ok": lhs == rhs}


# -- Cebotarev frequencies -----------------------------------------------------------


def cebotarev_frequencies(limit: int) -> dict:
    """Empirical splitting frequencies among unramified primes <= limit."""
    if limit < 100:
        raise ValueError("need a few primes to tally")
    counts = Counter()
    ps = primes_upto(limit)
    for p in ps:
        if p in RAMIFIED_PRIMES:
            continue
        r = np.arange(p, dtype=np.int64)
        roots = int(np.count_nonzero((r * r * r + r * r + r - 1) % p == 0))
        kind = {0: "inert", 1: "splits", 3: "splits-completely"}[roots]
        counts[kind] += 1
    total = sum(counts.values())
    assert total == len(ps) - 2
    return {
        "limit": limit,
        "counts": dict(counts),
        "total": total,
        "frequencies": {k: v / total for k, v in counts.items()},
        "expected": {"inert": 1 / 3, "splits": 1 / 2, "splits-completely": 1 / 6},
    }


# -- the denominator survey -----------------------------------------------------------


@dataclass
class XiRecord:
    m: int
    xi: tuple  # numerator triple over m
    order: int
    partners: tuple  # ((beta triple, period), ...) located periodic points

    @property
    def multiplicity(self) -> int:
        return len(self.partners)


@dataclass
class SurveyReport:
    max_m: int
    kappa_max_m: int
    primitive_counts: dict  # m -> (direct count, mobius-sum count)
    order_histograms: dict  # m -> Counter(order -> count) over primitive xi
    records: list  # XiRecord for m <= kappa_max_m
    mu_prime: Counter  # beta -> located point count
    unmatched: int  # primitive xi with no partner in the candidate core set

    def kappa_fraction(self) -> float:
        if not self.records:
            return 0.0
        return sum(1 for r in self.records if r.multiplicity > 1) / len(self.records)


def mobius_primitive_count(m: int) -> int:
    """Number of residue triples mod m of exact denominator m."""
    return sum(d**3 * mobius(m // d) for d in range(1, m + 1) if m % d == 0)


def _primitive_mask(m: int):
    grid = np.indices((m, m, m)).reshape(3, -1).T
    g = np.gcd.reduce(grid, axis=1)
    return grid, np.gcd(g, m) == 1


def locate_periodic_partners(xi_num, m: int, core_betas, walker=None):
    """All beta in the candidate set making (xi + beta) a gamma-periodic point.

    Returns ((beta, period), ...).  xi_num is the numerator triple of xi over m.
    """
    if walker is None:
        walker = ScaledPointWalker(m)
    found = []
    s = 2  # states are scaled by 2m
    for beta in core_betas:
        state = (
            s * xi_num[0] + s * m * beta[0],
            s * xi_num[1] + s * m * beta[1],
            s * xi_num[2] + s * m * beta[2],
        )
        if sign_int_triple(*state) < 0:
            continue
        rel = (state[0] - s * m, state[1], state[2])
        if sign_int_triple(*rel) >= 0:
            continue
        syms, start = walker.orbit_code(state)
        if start == 0:
            found.append((beta, len(syms)))
    return tuple(found)


def denominator_survey(
    max_m: int,
    kappa_max_m: int | None = None,
    core_betas=None,
    max_states: int = 30_000_000,
) -> SurveyReport:
    """Survey periodic points ordered by denominator.

    For every m <= max_m: enumerate the residues of exact denominator m,
    check the Moebius count, and compute every order.  For m <= kappa_max_m,
    additionally locate the periodic points xi + beta over the candidate
    core set and record multiplicities.
    """
    if max_m < 2:
        raise ValueError("max_m must be >= 2")
    if sum(m**3 for m in range(2, max_m + 1)) > max_states:
        raise BudgetExceededError(f"survey to {max_m} exceeds the state budget")
    if kappa_max_m is None:
        kappa_max_m = max_m
    if core_betas is None:
        core_betas = default_core_betas()
    primitive_counts = {}
    order_histograms = {}
    records = []
    mu_prime: Counter = Counter()
    unmatched = 0
    for m in range(2, max_m + 1):
        grid, mask = _primitive_mask(m)
        direct = int(np.count_nonzero(mask))
        formula = mobius_primitive_count(m)
        primitive_counts[m] = (direct, formula)
        orders = all_orders_mod(m)
        prim_orders = orders[mask]
        order_histograms[m] = Counter(int(v) for v in prim_orders)
        if m <= kappa_max_m:
            walker = ScaledPointWalker(m)
            prim = grid[mask]
            for row, order in zip(prim, prim_orders):
                xi_num = (int(row[0]), int(row[1]), int(row[2]))
                partners = locate_periodic_partners(xi_num, m, core_betas, walker)
                records.append(
                    XiRecord(m=m, xi=xi_num, order=int(order), partners=partners)
                )
                if partners:
                    for beta, _ in partners:
                        mu_prime[beta] += 1
                else:
                    unmatched += 1
    return SurveyReport(
        max_m=max_m,
        kappa_max_m=kappa_max_m,
        primitive_counts=primitive_counts,
        order_histograms=order_histograms,
        records=records,
        mu_prime=mu_prime,
        unmatched=unmatched,
    )


_DEFAULT_CORE = None


def default_core_betas(period: int = 8):
    """Candidate integer parts: the core set observed across Fix(gamma^period)."""
    global _DEFAULT_CORE
    if _DEFAULT_CORE is None:
        from .cycles import core_histogram

        hist = core_histogram(period)
        _DEFAULT_CORE = tuple(r[0] for r in hist.rows)
    return _DEFAULT_CORE
