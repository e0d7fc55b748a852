from fractions import Fraction

import pytest

from ayscale.field import FieldElement, LAM, LAM2, OMEGA, ONE, ZERO
from ayscale.coding import (
    DIGITS,
    FORBIDDEN_TAILS,
    SUCCESSORS,
    SYMBOLS,
    CHAR_POLY_FACTORS,
    InadmissibleCodeError,
    PeriodicCode,
    Symbol,
    allowed_fixed_symbols,
    char_poly,
    char_poly_check,
    decode,
    digit,
    digit_alphabet,
    encode,
    encode_rational,
    gamma,
    incidence_matrix,
    level_tiles,
    matrix_power_trace,
    path_of,
    self_loop_symbols,
    tile_of,
)
from ayscale.iet import canonical_table

from conftest import random_unit_point

TABLE = canonical_table()


def test_digit_examples():
    for j in range(7):
        assert digit(Symbol(j, 0)) == ZERO
    assert digit(Symbol(0, 1)) == LAM + LAM2
    assert digit(Symbol(6, 3)) == ONE - LAM


def test_digit_alphabet():
    alpha = digit_alphabet()
    assert len(alpha) == 25
    assert ZERO in alpha
    assert LAM + LAM2 in alpha
    assert all(d.is_algebraic_integer() for d in alpha)


def test_forbidden_tails():
    assert FORBIDDEN_TAILS == (
        Symbol(1, 9), Symbol(2, 6), Symbol(3, 2),
        Symbol(4, 6), Symbol(5, 3), Symbol(6, 1),
    )
    assert all(path_of(s) == s.j for s in FORBIDDEN_TAILS)
    assert Symbol(6, 3) not in FORBIDDEN_TAILS


def test_self_loop_census():
    loops = self_loop_symbols()
    assert len(loops) == 13 == matrix_power_trace(1)
    fixed = allowed_fixed_symbols()
    assert len(fixed) == 7
    assert fixed == (
        Symbol(0, 0), Symbol(1, 4), Symbol(2, 9), Symbol(3, 6),
        Symbol(4, 2), Symbol(5, 6), Symbol(6, 3),
    )


def test_symbol_count():
    assert len(SYMBOLS) == 61
    assert sum(len(SUCCESSORS[i]) for i in range(7)) == 61


def test_tile_examples():
    t = tile_of((Symbol(0, 0),))
    assert t.interval.lo == ZERO and t.interval.hi == OMEGA * OMEGA
    t = tile_of((Symbol(6, 3),))
    assert t.interval.contains(LAM)
    tile_of((Symbol(0, 0), Symbol(0, 0)))  # admissible: p(0,0) = 0
    with pytest.raises(InadmissibleCodeError):
        tile_of((Symbol(0, 0), Symbol(0, 1)))  # p(0,1) = 6 != 0


def test_level1_partition():
    tiles = sorted(level_tiles(1), key=lambda t: float(t.interval.lo))
    assert tiles[0].interval.lo == ZERO
    assert tiles[-1].interval.hi == ONE
    for a, b in zip(tiles, tiles[1:]):
        assert a.interval.hi == b.interval.lo
    total = sum((t.interval.length() for t in tiles), ZERO)
    assert total == ONE


def test_level2_tiles_inside_level1(rng):
    tiles2 = level_tiles(2)
    assert len(tiles2) == sum(len(SUCCESSORS[s.j]) for s in SYMBOLS)
    for t in rng.sample(tiles2, 40):
        parent = tile_of(t.symbols[:1])
        assert (t.interval.lo - parent.interval.lo).sign() >= 0
        assert (parent.interval.hi - t.interval.hi).sign() >= 0


def test_encode_examples():
    assert encode(ZERO, 3) == (Symbol(0, 0),) * 3
    assert encode(LAM, 2) == (Symbol(6, 3),) * 2


def test_encode_admissibility_and_membership(rng):
    for _ in range(40):
        x = random_unit_point(rng)
        syms = encode(x, 6)
        for a, b in zip(syms, syms[1:]):
            assert a.j == path_of(b)
        for d in range(1, 7):
            assert tile_of(syms[:d]).interval.contains(x)


def test_encode_avoids_forbidden_constants():
    # each forbidden tail that decodes inside [0,1) hits a tile boundary
    # point whose valid code must differ from the forbidden constant
    for s in FORBIDDEN_TAILS:
        x = decode(PeriodicCode((), (s,)))
        if x.sign() < 0 or (x - ONE).sign() >= 0:
            continue
        syms = encode(x, 8)
        assert any(u != s for u in syms)


def test_encode_rational_examples():
    c = encode_rational(ZERO)
    assert c.preperiod == () and c.period == (Symbol(0, 0),)
    c = encode_rational(LAM)
    assert c.preperiod == () and c.period == (Symbol(6, 3),)
    x = FieldElement(Fraction(1, 2))
    c = encode_rational(x)
    assert decode(c) == x


def test_decode_examples():
    assert decode(PeriodicCode((), (Symbol(0, 0),))) == ZERO
    assert decode(PeriodicCode((), (Symbol(6, 3),))) == LAM
    bad = PeriodicCode((), (Symbol(6, 1),))
    assert bad.is_forbidden_tail()
    assert decode(bad) == ONE  # outside [0,1): the excluded representation


def test_round_trip_random(rng):
    for _ in range(150):
        x = random_unit_point(rng, max_den=50)
        assert decode(encode_rational(x)) == x


def test_gamma_examples():
    assert gamma(ZERO) == ZERO
    assert gamma(LAM) == LAM
    x = FieldElement(Fraction(1, 3), Fraction(1, 7), 0)
    d = DIGITS[encode(x, 1)[0]]
    assert gamma(x) == (x - d) * OMEGA.invert()


def _random_code(rng, pre_len, per_len):
    while True:
        word = [rng.choice(SYMBOLS)]
        for _ in range(per_len - 1):
            word.append(rng.choice(SUCCESSORS[word[-1].j]))
        if path_of(word[0]) == word[-1].j:
            break
    pre = []
    nxt = word[0]
    for _ in range(pre_len):
        cands = [u for u in SYMBOLS if u.j == path_of(nxt)]
        s = rng.choice(cands)
        pre.insert(0, s)
        nxt = s
    return PeriodicCode(tuple(pre), tuple(word))


def test_gamma_is_the_shift(rng):
    checked = 0
    while checked < 50:
        c = _random_code(rng, rng.randint(0, 3), rng.randint(1, 4))
        if c.is_forbidden_tail():
            continue
        x = decode(c)
        if x.sign() < 0 or (x - ONE).sign() >= 0:
            continue
        assert gamma(x) == decode(c.shifted())
        checked += 1


def test_gamma_maps_tiles_onto_intervals():
    for s in SYMBOLS:
        t = tile_of((s,))
        d = DIGITS[s]
        w = OMEGA.invert()
        assert (t.interval.lo - d) * w == TABLE.delta[s.j]
        assert (t.interval.hi - d) * w == TABLE.delta[s.j + 1]
        mid = (t.interval.lo + t.interval.hi) * FieldElement(Fraction(1, 2))
        assert gamma(mid) == (mid - d) * w


def test_code_validation():
    with pytest.raises(InadmissibleCodeError):
        PeriodicCode((), (Symbol(0, 0), Symbol(0, 1)))  # adjacency broken
    with pytest.raises(InadmissibleCodeError):
        PeriodicCode((), ())
    with pytest.raises(InadmissibleCodeError):
        PeriodicCode((Symbol(3, 1),), (Symbol(0, 0),))  # junction broken


def test_incidence_matrix():
    a = incidence_matrix()
    assert a == (
        (1, 0, 0, 1, 0, 0, 2),
        (1, 2, 1, 2, 0, 1, 6),
        (1, 1, 2, 1, 1, 1, 5),
        (1, 1, 0, 2, 0, 0, 4),
        (1, 0, 1, 0, 2, 1, 3),
        (1, 1, 1, 1, 1, 2, 5),
        (1, 0, 0, 0, 1, 0, 2),
    )
    assert a[0][6] == 2
    for i in range(7):
        assert sum(a[i]) == TABLE.nu[i]
    assert sum(a[i][i] for i in range(7)) == 13


def test_char_poly():
    # expand the factored spectrum exactly and compare
    def mul(p, q):
        out = [0] * (len(p) + len(q) - 1)
        for i, pi in enumerate(p):
            for j, qj in enumerate(q):
                out[i + j] += pi * qj
        return tuple(out)

    expected = (1,)
    for f in CHAR_POLY_FACTORS:
        expected = mul(expected, f)
    assert char_poly() == expected
    assert char_poly_check()["ok"]
