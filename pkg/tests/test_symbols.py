import random
from fractions import Fraction

import pytest

from localglobal.padic import PadicNumber, power_class
from localglobal.symbols import (
    InvariantValue,
    LocalExtElement,
    Place,
    REAL_PLACE,
    hilbert2,
    is_local_norm,
    product_formula_check,
)


def test_place_basics():
    assert Place.finite(17).prime == 17
    assert REAL_PLACE.is_real and not REAL_PLACE.is_finite
    assert str(Place.finite(2)) == "2"
    assert str(REAL_PLACE) == "infinity"
    with pytest.raises(ValueError):
        Place.finite(15)


def test_invariant_values():
    half = InvariantValue.half()
    assert str(half) == "1/2"
    assert (half + half).is_zero
    assert str(InvariantValue.thirds(2)) == "2/3"
    assert str(InvariantValue.thirds(1) + InvariantValue.thirds(2)) == "0"
    assert str(-InvariantValue.thirds(1)) == "2/3"
    with pytest.raises(ValueError):
        InvariantValue(Fraction(1, 5))


def test_hilbert2_examples():
    assert hilbert2(-1, -1, REAL_PLACE) == (-1, InvariantValue.half())
    assert hilbert2(2, 17, 17) == (1, InvariantValue.zero())   # 2 = 6^2 mod 17
    assert hilbert2(3, 17, 17) == (-1, InvariantValue.half())  # 3 is a non-residue
    assert hilbert2(5, 7, REAL_PLACE)[0] == 1
    # classical 2-adic values
    assert hilbert2(2, 2, 2)[0] == 1    # 2 = norm of sqrt(2) squared... (2,2)=(2,-1)(2,-2)=1
    assert hilbert2(2, 3, 2)[0] == -1
    assert hilbert2(-1, -1, 2)[0] == -1
    assert hilbert2(2, 7, 2)[0] == 1    # 7 = -1 mod 8: x^2-2y^2 represents 7
    assert hilbert2(5, 2, 5)[0] == -1   # 2 is a non-residue mod 5


def test_hilbert2_symmetric_bimultiplicative():
    rng = random.Random(11)
    places = [REAL_PLACE, Place.finite(2), Place.finite(3), Place.finite(5), Place.finite(17)]
    for _ in range(150):
        v = rng.choice(places)
        a, b, c = (
            Fraction(rng.choice([-1, 1]) * rng.randrange(1, 60), rng.randrange(1, 20))
            for _ in range(3)
        )
        assert hilbert2(a, b, v)[0] == hilbert2(b, a, v)[0]
        assert hilbert2(a * c, b, v)[0] == hilbert2(a, b, v)[0] * hilbert2(c, b, v)[0]
        # squares are everywhere norms
        assert hilbert2(a * a, b, v)[0] == 1


def test_hilbert2_accepts_padic_arguments():
    x = PadicNumber.from_fraction(Fraction(3), 17, 20)
    assert hilbert2(x, 17, 17)[0] == -1
    y = PadicNumber.from_fraction(Fraction(17), 2, 20)
    assert hilbert2(y, y, 2)[0] == 1  # 17 = 1 mod 8 is a square unit


def _quadratic_norm_classes(p, b, bound=60):
    """Classes mod squares of values x^2 - b y^2: a brute-force norm set."""
    classes = set()
    for x in range(bound):
        for y in range(bound):
            if x == 0 and y == 0:
                continue
            val = Fraction(x) ** 2 - b * Fraction(y) ** 2
            if val != 0:
                classes.add(power_class(val, 2, p))
    return classes


def test_hilbert2_against_norm_brute_force():
    rng = random.Random(23)
    for p in (2, 3, 17):
        cache = {}
        for _ in range(200):
            a = Fraction(rng.choice([-1, 1]) * rng.randrange(1, 40)) * Fraction(p) ** rng.randrange(-2, 3)
            b = Fraction(rng.choice([-1, 1]) * rng.randrange(1, 40)) * Fraction(p) ** rng.randrange(-2, 3)
            key = power_class(b, 2, p)
            if key not in cache:
                cache[key] = _quadratic_norm_classes(p, b)
            is_norm = power_class(a, 2, p) in cache[key]
            assert (hilbert2(a, b, p)[0] == 1) == is_norm, (p, a, b)


def test_product_formula_examples():
    assert product_formula_check(3, 17).is_zero
    assert hilbert2(3, 17, 3)[0] == -1 and hilbert2(3, 17, 17)[0] == -1
    assert product_formula_check(2, 17).is_zero
    assert product_formula_check(1, Fraction(-9, 7)).is_zero


def test_product_formula_random_sweep():
    rng = random.Random(7)
    for _ in range(1000):
        a = Fraction(rng.choice([-1, 1]) * rng.randrange(1, 10**4), rng.randrange(1, 10**4))
        b = Fraction(rng.choice([-1, 1]) * rng.randrange(1, 10**4), rng.randrange(1, 10**4))
        assert product_formula_check(a, b).is_zero, (a, b)


def test_local_ext_element_arithmetic():
    a = LocalExtElement(17, 4, 17, (1, 2, 0, 1), prec=25)
    b = LocalExtElement(17, 4, 17, (3, 0, 1, 0), prec=25)
    # norm is multiplicative
    lhs = (a * b).norm()
    rhs = a.norm() * b.norm()
    assert lhs.approx_eq(rhs, digits=15)
    # the norm of a base-field element is its 4th power
    c = LocalExtElement(17, 4, 17, (5, 0, 0, 0), prec=25)
    assert c.norm().approx_eq(PadicNumber.from_fraction(Fraction(5**4), 17, 25), digits=15)
    # the norm of the radical generator is -d for degree 4
    x = LocalExtElement(17, 4, 17, (0, 1, 0, 0), prec=25)
    assert x.norm().approx_eq(PadicNumber.from_fraction(Fraction(-17), 17, 25), digits=15)


def test_local_ext_norm_multiplicative_random():
    rng = random.Random(3)
    for p, m, d in [(17, 4, 17), (3, 2, 7), (5, 3, 2), (2, 4, -1)]:
        for _ in range(10):
            a = LocalExtElement(p, m, d, [rng.randrange(-4, 5) for _ in range(m)], prec=30)
            b = LocalExtElement(p, m, d, [rng.randrange(-4, 5) for _ in range(m)], prec=30)
            na, nb, nab = a.norm(), b.norm(), (a * b).norm()
            if na.is_zero or nb.is_zero or nab.is_zero:
                continue
            assert nab.approx_eq(na * nb, digits=10)


def test_is_local_norm_quartic_17():
    assert is_local_norm(-17, 17, 4, 17)
    assert not is_local_norm(2, 17, 4, 17)
    assert is_local_norm(16, 17, 4, 17)
    # Full 64-class table: 17^k u is a norm iff (-1)^k u is a 4th-power
    # residue mod 17 (the group generated by -17 and the 4th-power units).
    fourth_powers = {pow(t, 4, 17) for t in range(1, 17)}
    for k in range(4):
        for u in range(1, 17):
            expected = (pow(-1, k, 17) * u) % 17 in fourth_powers
            assert is_local_norm(Fraction(17**k * u), 17, 4, 17) == expected, (k, u)


def test_is_local_norm_positive_soundness():
    # literal norms of random elements must always be accepted
    rng = random.Random(9)
    for p, m, d in [(17, 4, 17), (5, 3, 2), (7, 3, 2), (13, 4, 13), (2, 4, -1)]:
        from localglobal.symbols import _radical_norm_exact

        for _ in range(25):
            tup = tuple(rng.randrange(-5, 6) for _ in range(m))
            if not any(tup):
                continue
            val = _radical_norm_exact(m, Fraction(d), tup)
            if val == 0:
                continue
            assert is_local_norm(val, p, m, d), (p, m, d, tup, val)


def test_is_local_norm_splitting_and_small_cases():
    assert is_local_norm(7, 17, 4, 16)       # 16 = 2^4: split algebra
    assert is_local_norm(5, 5, 2, 4)         # 4 is a square
    assert not is_local_norm(5, 5, 2, 2)     # 2 is a non-residue mod 5; v(5) odd
    assert is_local_norm(11, 5, 2, 2)        # 11 = 1 mod 5 is a residue
    assert is_local_norm(3, 3, 3, 10)        # non-Galois cubic: norms are onto
    assert is_local_norm(2, 2, 3, 5)         # no cube roots of unity in Q_2
    # unramified abelian quartic over Q_5 (2 has order 4 mod 5): norms are
    # exactly the classes with valuation divisible by 4 -- 5 is not one
    assert not is_local_norm(5, 5, 4, 2)
    assert is_local_norm(5**4, 5, 4, 2)
    assert is_local_norm(3, 5, 4, 2)         # any unit is an unramified norm
    with pytest.raises(ValueError):
        is_local_norm(0, 5, 2, 2)
    with pytest.raises(ValueError):
        is_local_norm(3, 5, 5, 2)


def test_is_local_norm_quadratic_matches_hilbert2():
    rng = random.Random(31)
    for p in (2, 3, 5, 17):
        for _ in range(60):
            x = Fraction(rng.choice([-1, 1]) * rng.randrange(1, 50)) * Fraction(p) ** rng.randrange(-1, 2)
            d = Fraction(rng.choice([-1, 1]) * rng.randrange(1, 50))
            assert is_local_norm(x, p, 2, d) == (hilbert2(x, d, p)[0] == 1)
