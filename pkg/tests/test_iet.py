from fractions import Fraction

import pytest

from ayscale.field import FieldElement, LAM, OMEGA, ONE, ZERO
from ayscale.iet import (
    IETTable,
    Interval,
    canonical_table,
    derive_path_data,
    first_return,
    interval_index,
    rho,
    scaling_conjugacy_check,
    verify_permutation,
)
from ayscale.coding import level_tiles

from conftest import random_unit_point

TABLE = canonical_table()


def test_interval_index_examples():
    assert interval_index(ZERO) == 0
    assert interval_index(LAM) == 6
    with pytest.raises(ValueError):
        interval_index(ONE)
    with pytest.raises(ValueError):
        interval_index(FieldElement(-1))


def test_rho_examples():
    assert rho(ZERO) == FieldElement(0, 1, 1)
    assert rho(LAM) == ZERO
    d1 = TABLE.delta[1]
    assert rho(d1) == d1 + FieldElement(-1, 3, 0)


def test_rho_preserves_unit_interval(rng):
    for _ in range(50):
        x = random_unit_point(rng)
        y = rho(x)
        assert y.sign() >= 0 and (y - ONE).sign() < 0


def test_permutation_report():
    rep = verify_permutation()
    assert rep.ok
    assert rep.permutation == (6, 2, 4, 3, 5, 1, 0)
    assert rep.total_image_length == ONE


def test_perturbed_table_fails():
    tau = list(TABLE.tau)
    tau[0] = tau[0] + FieldElement(Fraction(1, 1000))
    broken = IETTable(delta=TABLE.delta, tau=tuple(tau), nu=TABLE.nu, path=TABLE.path)
    rep = verify_permutation(broken)
    assert not rep.ok and rep.failures


def test_interval_lengths():
    total = sum((TABLE.omega_j(j).length() for j in range(7)), ZERO)
    assert total == ONE


def test_first_return_examples():
    omega0 = Interval(ZERO, OMEGA)
    _, time, itin = first_return(ZERO, omega0)
    assert time == 4 and itin == (0, 6, 3, 6)
    _, time, itin = first_return(OMEGA * TABLE.delta[6], omega0)
    assert time == 4 and itin == (0, 6, 4, 6)
    _, time, itin = first_return(OMEGA * TABLE.delta[1], omega0)
    assert time == 13 and itin == TABLE.path[1]


def test_first_return_demands_membership():
    omega0 = Interval(ZERO, OMEGA)
    with pytest.raises(ValueError):
        first_return(LAM, omega0)


def test_derive_path_data_matches_table():
    nu, path = derive_path_data()
    assert nu == (4, 13, 12, 8, 8, 12, 4)
    assert path == TABLE.path
    assert nu[0] == 4 and path[0] == (0, 6, 3, 6)
    assert nu[3] == 8 and path[3] == (0, 6, 3, 6, 1, 6, 3, 6)


def test_scaling_conjugacy(rng):
    from ayscale.field import OMEGA_INV

    samples = [ZERO, OMEGA * LAM]
    for _ in range(100):
        x = random_unit_point(rng)
        samples.append(OMEGA * x)  # scale into [0, omega)
    assert scaling_conjugacy_check(samples) == []
    # spot values
    omega0 = Interval(ZERO, OMEGA)
    y, _, _ = first_return(ZERO, omega0)
    assert y == OMEGA * rho(ZERO)
    y, _, _ = first_return(OMEGA * LAM, omega0)
    assert y == ZERO


def test_no_periodic_points_finite_depth(rng):
    points = [t.interval.lo for t in level_tiles(1)]
    for _ in range(100):
        points.append(random_unit_point(rng, max_den=9))
    for x in points:
        y = x
        for _ in range(50):
            y = rho(y)
            assert y != x
