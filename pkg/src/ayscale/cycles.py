"""Periodic points of the scaling shift: enumeration, statistics, geometry.

Fix(gamma^n) is in bijection with the admissible cyclic symbol words of
length n, minus the six forbidden constant words; the count is Tr A^n - 6.
Every period-n point is an integer triple divided by M_n (the minimal
positive integer divisible by 1 - omega^n), so the enumeration core works in
pure integer arithmetic: a word's digit polynomial is accumulated as an
integer triple, multiplied by alpha_n = M_n / (1 - omega^n), and reduced
mod M_n to split the point into fractional and integer parts.

The hot path is a chunked, vectorized expansion over the symbol graph,
sharded by the first symbol (61 shards).  Shard results are merged in shard
order, so output is identical for any worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .errors import BudgetExceededError
from .field import (
    FieldElement,
    OMEGA,
    ONE,
    ZERO,
    min_integer_multiple,
    norm_triple,
    numeric_constants,
    omega_power_triple,
    triple_mul_matrix,
)
from .coding import (
    DIGITS,
    FORBIDDEN_TAILS,
    SUCCESSORS,
    SYMBOLS,
    PeriodicCode,
    Symbol,
    decode,
    matrix_power_trace,
    path_of,
)
from .field import reduce_product

# -- counting formulas ---------------------------------------------------------


def fix_count_trace(n: int) -> int:
    """#Fix(gamma^n) = Tr A^n - 6, via exact integer matrix powers."""
    if n < 1:
        raise ValueError("period must be >= 1")
    return matrix_power_trace(n) - 6


_CONSTS = None


def _consts():
    global _CONSTS
    if _CONSTS is None:
        _CONSTS = numeric_constants(50)
    return _CONSTS


def fix_count_closed_form(n: int, consts=None) -> mpmath.mpf:
    """Spectral closed form for #Fix(gamma^n); rounds to the exact integer."""
    c = consts or _consts()
    with mpmath.workdps(c.dps):
        wn = c.omega**n
        return (
            1 / wn + wn + 2 * (mpmath.sqrt(1 / wn) + mpmath.sqrt(wn)) * mpmath.cos(n * c.theta) - 5
        )


def i_n_closed_form(n: int, consts=None) -> mpmath.mpf:
    """Spectral closed form for #I_n = |N(1 - omega^n)|."""
    c = consts or _consts()
    with mpmath.workdps(c.dps):
        wn = c.omega**n
        return (
            1 / wn - wn - 2 * (mpmath.sqrt(1 / wn) - mpmath.sqrt(wn)) * mpmath.cos(n * c.theta)
        )


def difference_closed_form(n: int, consts=None) -> mpmath.mpf:
    """#Fix(gamma^n) - #I_n, the oscillating term driving shared fractional parts."""
    c = consts or _consts()
    with mpmath.workdps(c.dps):
        wn = c.omega**n
        return 4 * mpmath.sqrt(1 / wn) * mpmath.cos(n * c.theta) + 2 * wn - 5


def i_n_size(n: int) -> int:
    """#I_n = |N(1 - omega^n)|, exact."""
    if n < 1:
        raise ValueError("period must be >= 1")
    w = omega_power_triple(n)
    return abs(norm_triple((1 - w[0], -w[1], -w[2])))


def m_n(n: int):
    """(M_n, alpha_n): the universal denominator of period-n points."""
    w = omega_power_triple(n)
    return min_integer_multiple(FieldElement(1 - w[0], -w[1], -w[2]))


# -- enumeration core ----------------------------------------------------------

_SYM_J = np.array([s.j for s in SYMBOLS], dtype=np.int8)
_SYM_P = np.array([path_of(s) for s in SYMBOLS], dtype=np.int8)
_SUCC_IDS = [np.flatnonzero(_SYM_P == i).astype(np.int64) for i in range(7)]
_SUCC_CON_IDS = [
    [np.flatnonzero((_SYM_P == i) & (_SYM_J == tgt)).astype(np.int64) for tgt in range(7)]
    for i in range(7)
]
_FORBIDDEN_IDS = {SYMBOLS.index(s) for s in FORBIDDEN_TAILS}

_DIGIT_ROWS = np.array([DIGITS[s].int_triple() for s in SYMBOLS], dtype=np.int64)


def _weight_table(n: int) -> np.ndarray:
    """WD[pos, sym] = digit(sym) * omega^pos as integer triples, pos = 0..n-1."""
    wd = np.empty((n, 61, 3), dtype=np.int64)
    for pos in range(n):
        w = omega_power_triple(pos)
        for sid in range(61):
            d = tuple(int(v) for v in _DIGIT_ROWS[sid])
            wd[pos, sid] = reduce_product(d, w)
    return wd


@dataclass
class _EnumContext:
    n: int
    m: int
    alpha_mat_t: np.ndarray  # transposed multiplication-by-alpha matrix
    wd: np.ndarray
    count_only: bool
    chunk_cap: int


_CTX: _EnumContext | None = None


def _build_context(n: int, count_only: bool) -> _EnumContext:
    m, alpha = m_n(n)
    mat = np.array(triple_mul_matrix(alpha.int_triple()), dtype=np.int64)
    wd = None if count_only else _weight_table(n)
    cap = 1 << (23 if count_only else 19)
    return _EnumContext(
        n=n, m=m, alpha_mat_t=mat.T.copy(), wd=wd, count_only=count_only, chunk_cap=cap
    )


def _init_worker(n: int, count_only: bool) -> None:
    global _CTX
    _CTX = _build_context(n, count_only)


def _forbidden_point(sid: int, n: int, m: int):
    """(xi_num, beta) of the constant word of a forbidden symbol, at period n."""
    x = DIGITS[SYMBOLS[sid]] / (ONE - OMEGA)
    num = tuple(int(c * m) for c in x.triple)
    beta = tuple(c // m for c in num)
    xi = tuple(c - b * m for c, b in zip(num, beta))
    return xi, beta


def _expand_level(cur_j, s_acc, pos, ctx, target):
    """One expansion level; returns (new_j, new_s).  Grouped by current j."""
    last = pos == ctx.n - 1
    j_parts, s_parts = [], []
    for i in range(7):
        mask = cur_j == i
        c = int(np.count_nonzero(mask))
        if not c:
            continue
        ids = _SUCC_CON_IDS[i][target] if last else _SUCC_IDS[i]
        k = len(ids)
        if k == 0:
            continue
        j_parts.append(np.tile(_SYM_J[ids], c))
        if s_acc is not None:
            block = ctx.wd[pos][ids]
            s_parts.append(
                np.repeat(s_acc[mask], k, axis=0) + np.tile(block, (c, 1))
            )
    if not j_parts:
        empty_s = None if s_acc is None else np.empty((0, 3), dtype=np.int64)
        return np.empty(0, dtype=np.int8), empty_s
    new_j = np.concatenate(j_parts)
    new_s = None if s_acc is None else np.concatenate(s_parts)
    return new_j, new_s


def _run_chunk(cur_j, s_acc, pos, ctx, target, sink):
    """Expand a chunk of partial walks through the remaining levels."""
    if pos == ctx.n:
        sink(cur_j, s_acc)
        return
    if len(cur_j) > ctx.chunk_cap:
        for lo in range(0, len(cur_j), ctx.chunk_cap):
            sl = slice(lo, lo + ctx.chunk_cap)
            _run_chunk(
                cur_j[sl], None if s_acc is None else s_acc[sl], pos, ctx, target, sink
            )
        return
    new_j, new_s = _expand_level(cur_j, s_acc, pos, ctx, target)
    _run_chunk(new_j, new_s, pos + 1, ctx, target, sink)


def _shard_task(sid: int):
    """Enumerate the shard of words starting with symbol `sid`.

    Returns a count (count mode) or (xi_num int32, beta int16) arrays,
    with the forbidden constant word removed.
    """
    ctx = _CTX
    n = ctx.n
    target = int(_SYM_P[sid])
    if n == 1:
        if int(_SYM_J[sid]) != target or sid in _FORBIDDEN_IDS:
            return 0 if ctx.count_only else _empty_arrays()
        if ctx.count_only:
            return 1
        s0 = _DIGIT_ROWS[sid][None, :].astype(np.int64)
        return _finalize(s0, ctx)

    cur_j = _SYM_J[sid : sid + 1].copy()
    if ctx.count_only:
        total = 0

        def sink(j_arr, _):
            nonlocal total
            total += len(j_arr)

        _run_chunk(cur_j, None, 1, ctx, target, sink)
        if sid in _FORBIDDEN_IDS:
            total -= 1
        return total

    s0 = ctx.wd[0][sid][None, :].copy()
    xi_parts, beta_parts = [], []

    def sink(_, s_arr):
        xi, beta = _finalize(s_arr, ctx)
        xi_parts.append(xi)
        beta_parts.append(beta)

    _run_chunk(cur_j, s0, 1, ctx, target, sink)
    xi = np.concatenate(xi_parts) if xi_parts else _empty_arrays()[0]
    beta = np.concatenate(beta_parts) if beta_parts else _empty_arrays()[1]
    if sid in _FORBIDDEN_IDS:
        bad_xi, bad_beta = _forbidden_point(sid, n, ctx.m)
        hits = np.flatnonzero(
            (xi == np.array(bad_xi, dtype=xi.dtype)).all(axis=1)
            & (beta == np.array(bad_beta, dtype=beta.dtype)).all(axis=1)
        )
        assert len(hits) >= 1, "forbidden constant word missing from its shard"
        keep = np.ones(len(xi), dtype=bool)
        keep[hits[0]] = False
        xi, beta = xi[keep], beta[keep]
    return xi, beta


def _empty_arrays():
    return np.empty((0, 3), dtype=np.int32), np.empty((0, 3), dtype=np.int16)


def _finalize(s_arr, ctx):
    """Digit-polynomial triples -> (xi numerators mod M_n, integer parts)."""
    num = s_arr @ ctx.alpha_mat_t
    beta = num // ctx.m
    xi = num - beta * ctx.m
    assert xi.max(initial=0) < 2**31 and abs(beta).max(initial=0) < 2**15
    return xi.astype(np.int32), beta.astype(np.int16)


def _run_shards(n: int, count_only: bool, workers: int):
    if n < 1:
        raise ValueError("period must be >= 1")
    shard_ids = list(range(61))
    if workers <= 1:
        _init_worker(n, count_only)
        return [_shard_task(sid) for sid in shard_ids]
    with ProcessPoolExecutor(
        max_workers=workers, initializer=_init_worker, initargs=(n, count_only)
    ) as pool:
        return list(pool.map(_shard_task, shard_ids))


def count_fixed(n: int, workers: int = 1) -> int:
    """Count Fix(gamma^n) by enumerating every admissible cyclic word.

    Each word is materialized (transiently, in chunks); nothing is stored.
    Use fix_count_trace(n) for the independent matrix-power count.
    """
    return sum(_run_shards(n, count_only=True, workers=workers))


@dataclass
class CycleData:
    """All period-n points, as integer data over the common denominator m.

    Row k is the point (xi_num[k] + m * beta[k]) / m; xi_num coefficients lie
    in [0, m), beta is the integer part.  Row order is deterministic.
    """

    n: int
    m: int
    xi_num: np.ndarray
    beta: np.ndarray

    def __len__(self):
        return len(self.xi_num)

    def point(self, k: int) -> FieldElement:
        return FieldElement(
            *(
                Fraction(int(a) + self.m * int(b), self.m)
                for a, b in zip(self.xi_num[k], self.beta[k])
            )
        )


def max_memory_mb() -> int:
    return int(os.environ.get("AY_MAX_MEMORY_MB", "4096"))


def _check_budget(n: int) -> None:
    est_mb = fix_count_trace(n) * 45 / 1e6
    if est_mb > max_memory_mb():
        raise BudgetExceededError(
            f"period {n} needs about {est_mb:.0f} MB of cycle storage; "
            f"cap is {max_memory_mb()} MB (set AY_MAX_MEMORY_MB to raise)"
        )


def cycle_arrays(n: int, workers: int = 1) -> CycleData:
    """Enumerate Fix(gamma^n) into integer arrays (fractional and integer parts)."""
    _check_budget(n)
    results = _run_shards(n, count_only=False, workers=workers)
    xi = np.concatenate([r[0] for r in results])
    beta = np.concatenate([r[1] for r in results])
    m, _ = m_n(n)
    return CycleData(n=n, m=m, xi_num=xi, beta=beta)


# -- exact per-cycle objects ----------------------------------------------------


@dataclass(frozen=True)
class Cycle:
    """A periodic point with its purely periodic code and exact decomposition."""

    code: PeriodicCode
    x: FieldElement
    xi: FieldElement
    beta: FieldElement


def _words(n: int):
    """All admissible cyclic words of length n except the forbidden constants."""
    word = [None] * n

    def rec(k):
        for s in SUCCESSORS[word[k - 1].j]:
            word[k] = s
            if k == n - 1:
                if path_of(word[0]) == s.j:
                    w = tuple(word)
                    if not (all(u == w[0] for u in w) and w[0] in FORBIDDEN_TAILS):
                        yield w
            else:
                yield from rec(k + 1)

    for s0 in SYMBOLS:
        word[0] = s0
        if n == 1:
            if path_of(s0) == s0.j and s0 not in FORBIDDEN_TAILS:
                yield (s0,)
        else:
            yield from rec(1)


def iter_cycles(n: int):
    """Yield every period-n Cycle with exact field values (small n only)."""
    for w in _words(n):
        code = PeriodicCode((), w)
        x = decode(code)
        xi, beta = x.frac_int_split()
        yield Cycle(code=code, x=x, xi=xi, beta=beta)


def sort_key(x: FieldElement):
    """High-precision real-value sort key; exact for points of period <= 12."""
    with mpmath.workdps(60):
        c = _consts()
        return mpmath.mpf(x.c0.numerator) / x.c0.denominator \
            + c.lam * x.c1.numerator / x.c1.denominator \
            + c.lam**2 * x.c2.numerator / x.c2.denominator


# -- statistics ------------------------------------------------------------------


@dataclass
class CycleSetStats:
    n: int
    fix_count: int
    i_n: int
    i_doubleprime: int
    b_n: int
    multiplicity_hist: dict


def _xi_runs(data: CycleData):
    """Sorted xi rows and the run lengths of equal fractional parts."""
    order = np.lexsort((data.xi_num[:, 2], data.xi_num[:, 1], data.xi_num[:, 0]))
    xs = data.xi_num[order]
    change = np.any(xs[1:] != xs[:-1], axis=1)
    boundaries = np.flatnonzero(change) + 1
    starts = np.concatenate(([0], boundaries))
    ends = np.concatenate((boundaries, [len(xs)]))
    return order, starts, ends


def stats(n: int, workers: int = 1, data: CycleData | None = None) -> CycleSetStats:
    """Multiplicity and core-region statistics of Fix(gamma^n)."""
    if data is None:
        data = cycle_arrays(n, workers=workers)
    fix = len(data)
    assert fix == fix_count_trace(n), "enumerated count disagrees with Tr A^n - 6"
    order, starts, ends = _xi_runs(data)
    lengths = ends - starts
    i2 = int(np.count_nonzero(lengths >= 2))
    hist = Counter(int(v) for v in lengths)
    # distinct points: within each xi-run the integer parts must be distinct
    betas_sorted = data.beta[order]
    key = np.concatenate([data.xi_num[order].astype(np.int64),
                          betas_sorted.astype(np.int64)], axis=1)
    full_order = np.lexsort(tuple(key[:, i] for i in range(5, -1, -1)))
    ks = key[full_order]
    assert not np.any(np.all(ks[1:] == ks[:-1], axis=1)), "distinct codes produced equal points"
    b_n = len(np.unique(data.beta, axis=0))
    return CycleSetStats(
        n=n,
        fix_count=fix,
        i_n=i_n_size(n),
        i_doubleprime=i2,
        b_n=b_n,
        multiplicity_hist=dict(sorted(hist.items())),
    )


@dataclass
class CoreHistogram:
    """Occurrence counts of integer parts across Fix(gamma^n), densest first."""

    n: int
    total: int
    rows: list  # (beta triple, count, Fraction density)

    def densities_sum(self) -> Fraction:
        return sum((r[2] for r in self.rows), Fraction(0))


def core_histogram(n: int, workers: int = 1, data: CycleData | None = None) -> CoreHistogram:
    if data is None:
        data = cycle_arrays(n, workers=workers)
    betas, counts = np.unique(data.beta, axis=0, return_counts=True)
    rows = sorted(
        (
            (tuple(int(v) for v in b), int(c), Fraction(int(c), len(data)))
            for b, c in zip(betas, counts)
        ),
        key=lambda r: (-r[1], r[0]),
    )
    return CoreHistogram(n=n, total=len(data), rows=rows)


def merged_xi_groups(max_n: int):
    """Map xi -> set of distinct periodic points over all periods <= max_n.

    Keys are xi-numerator triples over the common denominator lcm(M_1..M_max);
    values are sets of (xi_key, beta triple) pairs, i.e. distinct points.
    """
    import math

    ms = [m_n(k)[0] for k in range(1, max_n + 1)]
    big = math.lcm(*ms)
    groups: dict = {}
    for k in range(1, max_n + 1):
        data = cycle_arrays(k)
        scale = big // data.m
        xi_scaled = data.xi_num.astype(np.int64) * scale
        for row in range(len(data)):
            key = tuple(int(v) for v in xi_scaled[row])
            groups.setdefault(key, set()).add(
                (key, tuple(int(v) for v in data.beta[row]))
            )
    return big, groups


def xi_key_scaled(xi: FieldElement, big: int):
    """xi as a numerator triple over the common denominator `big`."""
    out = []
    for c in xi.triple:
        num = c.numerator * (big // c.denominator)
        if c.denominator * (big // c.denominator) != big:
            raise ValueError("xi denominator does not divide the merge denominator")
        out.append(num)
    return tuple(out)


# -- boundary families and the cube embedding ------------------------------------


def boundary_family(k: int, family: int):
    """The period-(k+2) boundary-set codes built from the two anchor loops.

    Family 1 repeats (1,4) k times then (3,4),(1,2); family 2 repeats (2,9)
    then (4,5),(2,10).  Returns (code, point).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if family == 1:
        word = (Symbol(1, 4),) * k + (Symbol(3, 4), Symbol(1, 2))
    elif family == 2:
        word = (Symbol(2, 9),) * k + (Symbol(4, 5), Symbol(2, 10))
    else:
        raise ValueError("family must be 1 or 2")
    code = PeriodicCode((), word)  # validates admissibility
    n = len(word)
    for d in range(1, n):
        if n % d == 0 and word == word[:d] * (n // d):
            raise AssertionError(f"family word has proper period {d}")
    return code, decode(code)


def embed(xi: FieldElement):
    """Fractional part -> its coefficient triple in the unit cube."""
    for c in xi.triple:
        if not (0 <= c < 1):
            raise ValueError(f"not a fractional part: {xi}")
    return xi.triple
