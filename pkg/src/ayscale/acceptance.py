"""The acceptance checklist: every headline identity at desk scale.

Each criterion is a function returning (ok, detail).  They are surfaced in
two places: ``ay reproduce-all`` emits one JSON verdict per criterion, and
the test suite asserts each one.  All comparisons are exact except where a
tolerance is stated in the detail string.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
import numpy as np

from .field import FieldElement, ONE, ZERO
from . import coding, cycles, iet, orders
from .coding import PeriodicCode, Symbol

EXPECTED_NU = (4, 13, 12, 8, 8, 12, 4)
EXPECTED_PERMUTATION = (6, 2, 4, 3, 5, 1, 0)
EXPECTED_MATRIX = (
    (1, 0, 0, 1, 0, 0, 2),
    (1, 2, 1, 2, 0, 1, 6),
    (1, 1, 2, 1, 1, 1, 5),
    (1, 1, 0, 2, 0, 0, 4),
    (1, 0, 1, 0, 2, 1, 3),
    (1, 1, 1, 1, 1, 2, 5),
    (1, 0, 0, 0, 1, 0, 2),
)
EXPECTED_FIXED = (
    Symbol(0, 0), Symbol(1, 4), Symbol(2, 9), Symbol(3, 6),
    Symbol(4, 2), Symbol(5, 6), Symbol(6, 3),
)
TABLE2_I2 = (2, 14, 38, 86, 182, 374, 758, 1534)
TABLE2_B = (7, 17, 21, 22, 24, 24, 27, 30)
TABLE3_TOP5 = (
    ((0, 0, 0), 0.21275),
    ((0, -1, -1), 0.18921),
    ((0, 0, -1), 0.13777),
    ((1, -2, -1), 0.095625),
    ((-1, 0, 0), 0.077155),
)


def criterion_1_table_rederivation():
    nu, path = iet.derive_path_data()
    table = iet.canonical_table()
    rep = iet.verify_permutation()
    ok = nu == EXPECTED_NU and path == table.path and rep.ok
    return ok, f"nu={nu}, permutation={rep.permutation}"


def criterion_2_incidence():
    rep = coding.char_poly_check()
    ok = (
        rep["ok"]
        and rep["matrix"] == EXPECTED_MATRIX
        and rep["trace"] == 13
    )
    return ok, f"char poly {rep['char_poly']}, trace {rep['trace']}"


def criterion_3_symbol_census():
    n_symbols = len(coding.SYMBOLS)
    n_digits = len(coding.digit_alphabet())
    forb = coding.forbidden_tails()
    forb_ok = len(forb) == 6 and all(coding.path_of(s) == s.j for s in forb)
    fixed = coding.allowed_fixed_symbols()
    ok = (
        n_symbols == 61
        and n_digits == 25
        and forb_ok
        and fixed == EXPECTED_FIXED
    )
    return ok, f"{n_symbols} symbols, {n_digits} digits, {len(fixed)} fixed codes"


def criterion_4_counting(max_n: int = 12, workers: int = 1):
    consts = cycles._consts()
    details = []
    ok = True
    for n in range(1, max_n + 1):
        trace = cycles.fix_count_trace(n)
        enum = cycles.count_fixed(n, workers=workers)
        cf = cycles.fix_count_closed_form(n, consts)
        resid = abs(cf - mpmath.nint(cf))
        i_exact = cycles.i_n_size(n)
        icf = cycles.i_n_closed_form(n, consts)
        iresid = abs(icf - mpmath.nint(icf))
        good = (
            enum == trace
            and int(mpmath.nint(cf)) == trace
            and resid < mpmath.mpf("1e-6")
            and int(mpmath.nint(icf)) == i_exact
            and iresid < mpmath.mpf("1e-6")
        )
        ok = ok and good
        if not good:
            details.append(f"n={n}: enum={enum} trace={trace}")
    head = f"n<=12: Fix counts {[cycles.fix_count_trace(k) for k in (1, 2, 3, 12)]}..."
    return ok, head if ok else "; ".join(details)


def criterion_5_table2(workers: int = 1, cache: dict | None = None):
    ok = True
    got = []
    for n in range(1, 9):
        s = cycles.stats(n, workers=workers, data=None if cache is None else cache.get(n))
        got.append((s.i_doubleprime, s.b_n))
        ok = ok and s.i_doubleprime == TABLE2_I2[n - 1] and s.b_n == TABLE2_B[n - 1]
    nine = "n=9 skipped (memory cap)"
    try:
        cycles._check_budget(9)
        data9 = cycles.cycle_arrays(9, workers=workers)
        if cache is not None:
            cache[9] = data9
        s9 = cycles.stats(9, data=data9)
        ok = ok and s9.i_doubleprime == 3170 and s9.b_n == 30
        nine = f"n=9: I''={s9.i_doubleprime}, B={s9.b_n}"
    except Exception as exc:  # budget exceeded stays optional
        nine = f"n=9 skipped ({exc})"
    return ok, f"I''={tuple(g[0] for g in got)}, B={tuple(g[1] for g in got)}; {nine}"


def criterion_6_core_densities(workers: int = 1, cache: dict | None = None):
    data = None if cache is None else cache.get(9)
    hist = cycles.core_histogram(9, workers=workers, data=data)
    top5 = hist.rows[:5]
    ok = True
    lines = []
    for (beta, count, dens), (exp_beta, exp_mu) in zip(top5, TABLE3_TOP5):
        good = beta == exp_beta and abs(float(dens) - exp_mu) < 0.01
        ok = ok and good
        lines.append(f"{beta}:{float(dens):.5f}")
    return ok, "top5 " + " ".join(lines) + " (tolerance 0.01 vs full-depth values)"


def criterion_7_tilings():
    ok = True
    details = []
    for level in range(1, 5):
        tiles = coding.level_tiles(level)
        # float keys are safe here: level-4 tiles are wider than 1e-5, far
        # beyond double rounding; the exact chain check below is the judge
        tiles = sorted(tiles, key=lambda t: float(t.interval.lo))
        chain = tiles[0].interval.lo == ZERO and tiles[-1].interval.hi == ONE
        for a, b in zip(tiles, tiles[1:]):
            chain = chain and a.interval.hi == b.interval.lo
        total = sum((t.interval.length() for t in tiles), ZERO)
        good = chain and total == ONE
        ok = ok and good
        details.append(f"level {level}: {len(tiles)} tiles")
    return ok, ", ".join(details)


def criterion_8_round_trip(n_points: int = 1000, seed: int = 20260810):
    import random

    rng = random.Random(seed)
    ok = True
    for _ in range(n_points):
        den = rng.randint(1, 50)
        while True:
            x = FieldElement(
                Fraction(rng.randrange(den), den),
                Fraction(rng.randrange(den), den),
                Fraction(rng.randrange(den), den),
            )
            if x.sign() >= 0 and (x - ONE).sign() < 0:
                break
        code = coding.encode_rational(x)
        if coding.decode(code) != x:
            ok = False
            break
    cycle_ok = True
    for n in range(1, 5):
        for cyc in cycles.iter_cycles(n):
            code = coding.encode_rational(cyc.x)
            word = cyc.code.period
            p = code.period
            if code.preperiod or word != p * (len(word) // len(p)):
                cycle_ok = False
    return ok and cycle_ok, f"{n_points} random points and all cycles of period <= 4"


def criterion_9_m_n():
    ok = True
    vals = []
    for n in range(1, 13):
        m, _alpha = cycles.m_n(n)
        vals.append(m)
        ok = ok and m % 2 == 0 and cycles.i_n_size(n) % m == 0
        if n % 2 == 0:
            ok = ok and m % 14 == 0
    ok = ok and vals[0] == 2
    return ok, f"M_n = {vals}"


def criterion_10_cyclotomic():
    results = [orders.cyclotomic_check(n)["ok"] for n in range(1, 13)]
    return all(results), f"exact for n=1..12: {all(results)}"


def criterion_11_proposition2():
    spot = {2: 4, 11: 110, 3: 13, 7: 16}
    ok = all(orders.t_prime_power(p, 1) == t for p, t in spot.items())
    for p, t in spot.items():
        ok = ok and t % orders.omega_order_mod(p) == 0
    for m in range(2, 21):
        T = orders.t_bound(m).T
        o = orders.all_orders_mod(m)
        ok = ok and bool(np.all(T % o == 0))
    lifting = []
    for p in (2, 3, 5, 7, 11, 13):
        ts = [orders.t_prime_power(p, e) for e in range(1, 4)]
        for a, b in zip(ts, ts[1:]):
            ok = ok and b // a in (1, p) and b % a == 0
        stabilized = False
        for a, b in zip(ts, ts[1:]):
            if b == a * p:
                stabilized = True
            elif stabilized:
                ok = False  # once growing, must keep growing by p
        for e in range(1, 4):
            ok = ok and ts[e - 1] % orders.omega_order_mod(p**e) == 0
        lifting.append((p, ts))
    return ok, f"spot T {spot}; lifting {lifting}"


def criterion_12_boundary_families():
    big, groups = cycles.merged_xi_groups(7)
    ok = True
    details = []
    for family in (1, 2):
        for k in range(0, 6):
            code, x = cycles.boundary_family(k, family)
            xi, _ = x.frac_int_split()
            kappa = len(groups.get(cycles.xi_key_scaled(xi, big), ()))
            ok = ok and len(code.period) == k + 2 and kappa > 1
            details.append(f"f{family},k={k}:kappa={kappa}")
    for sym in (Symbol(1, 4), Symbol(2, 9)):
        x = coding.decode(PeriodicCode((), (sym,)))
        xi, _ = x.frac_int_split()
        kappa = len(groups.get(cycles.xi_key_scaled(xi, big), ()))
        ok = ok and kappa > 1
        details.append(f"anchor{sym}:kappa={kappa}")
    return ok, " ".join(details)


def criterion_13_denominator_survey(max_m: int = 20):
    rep = orders.denominator_survey(max_m)
    counts_ok = all(a == b for a, b in rep.primitive_counts.values())
    period_ok = all(
        per % r.order == 0 for r in rep.records for (_b, per) in r.partners
    )
    frac = rep.kappa_fraction()
    ok = counts_ok and period_ok and frac < 0.01
    return ok, (
        f"{len(rep.records)} primitive xi to m={max_m}; kappa>1 fraction "
        f"{frac:.5f} (< 0.01); unmatched={rep.unmatched}"
    )


def criterion_14_cebotarev(limit: int = 10**4):
    rep = orders.cebotarev_frequencies(limit)
    ok = all(
        abs(rep["frequencies"].get(kind, 0.0) - expected) < 0.05
        for kind, expected in rep["expected"].items()
    )
    freqs = {k: round(v, 4) for k, v in rep["frequencies"].items()}
    return ok, f"{freqs} vs (1/3, 1/2, 1/6), tolerance 0.05"


def criterion_15_determinism():
    from .cli import render_stats_text

    one = render_stats_text(max_period=6, workers=1)
    many = render_stats_text(max_period=6, workers=8)
    return one == many, f"{len(one)} bytes, workers 1 vs 8"


CRITERIA = (
    ("1", "Table 1 re-derivation and permutation", criterion_1_table_rederivation),
    ("2", "incidence matrix and characteristic polynomial", criterion_2_incidence),
    ("3", "symbol census", criterion_3_symbol_census),
    ("4", "counting identities for n <= 12", criterion_4_counting),
    ("5", "multiplicity table for n = 1..8 (9 optional)", criterion_5_table2),
    ("6", "core-region densities at n = 9", criterion_6_core_densities),
    ("7", "tile partitions, levels 1-4", criterion_7_tilings),
    ("8", "decode/encode round trip", criterion_8_round_trip),
    ("9", "universal denominators M_n", criterion_9_m_n),
    ("10", "cyclotomic factorization identity", criterion_10_cyclotomic),
    ("11", "order bounds T(m) and lifting", criterion_11_proposition2),
    ("12", "boundary families", criterion_12_boundary_families),
    ("13", "denominator survey to m = 20", criterion_13_denominator_survey),
    ("14", "Cebotarev frequencies", criterion_14_cebotarev),
    ("15", "worker-count determinism", criterion_15_determinism),
)


def run_all(budget_minutes: float | None = None, workers: int = 1):
    """Run every criterion in order, respecting a wall-clock budget.

    Returns a list of verdict dicts; items not attempted within the budget
    are marked skipped, never failed.  The verdicts carry no timing data so
    repeated runs are byte-identical.
    """
    import time

    start = time.monotonic()
    cache: dict = {}
    with_args = {
        "4": lambda: criterion_4_counting(workers=workers),
        "5": lambda: criterion_5_table2(workers=workers, cache=cache),
        "6": lambda: criterion_6_core_densities(workers=workers, cache=cache),
    }
    verdicts = []
    for cid, desc, func in CRITERIA:
        if budget_minutes is not None and time.monotonic() - start > budget_minutes * 60:
            verdicts.append({"criterion": cid, "description": desc, "status": "skipped"})
            continue
        runner = with_args.get(cid, func)
        try:
            ok, detail = runner()
            status = "pass" if ok else "fail"
        except Exception as exc:  # a crash is a recorded failure, not a thrown one
            status, detail = "fail", f"error: {exc}"
        verdicts.append(
            {"criterion": cid, "description": desc, "status": status, "detail": detail}
        )
        if cid == "6":
            cache.clear()
    return verdicts
