"""Local symbols over the completions of Q.

Quadratic Hilbert symbols at every place (closed formulas, no enumeration),
the invariant-value group Q/Z they land in, elements of radical extensions
Q_p[x]/(x^m - d), and exact norm-group membership for those extensions.
Everything is decided in exact arithmetic; enumerated norm subgroups are
certified against the index predicted by local reciprocity before use.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import is_probable_prime, legendre_symbol
from .padic import (
    DEFAULT_PRECISION,
    InsufficientPrecision,
    PadicNumber,
    PowerClass,
    is_nth_power,
    power_class,
    padic_sqrt,
    _unit_label_digits,
)

__all__ = [
    "Place",
    "REAL_PLACE",
    "InvariantValue",
    "hilbert2",
    "product_formula_check",
    "LocalExtElement",
    "is_local_norm",
]


# ------------------------------------------------------------------ places
@dataclass(frozen=True)
class Place:
    """A place of Q: a finite prime, or the real (archimedean) place."""

    prime: int | None = None

    def __post_init__(self):
        if self.prime is not None and not is_probable_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")

    @classmethod
    def finite(cls, p: int) -> "Place":
        return cls(p)

    @classmethod
    def real(cls) -> "Place":
        return cls(None)

    @property
    def is_real(self) -> bool:
        return self.prime is None

    @property
    def is_finite(self) -> bool:
        return self.prime is not None

    def __str__(self) -> str:
        return "infinity" if self.prime is None else str(self.prime)


REAL_PLACE = Place.real()


def as_place(v) -> Place:
    """Coerce an int prime, None/'infinity'/'oo' (real place) or Place."""
    if isinstance(v, Place):
        return v
    if v is None or (isinstance(v, str) and v.lower() in ("infinity", "inf", "oo")):
        return REAL_PLACE
    return Place(int(v))


# --------------------------------------------------------------- invariants
@dataclass(frozen=True)
class InvariantValue:
    """An element of Q/Z represented by its reduced fraction in [0, 1).

    The value 0 means "no local obstruction here"; values with denominator
    2 come from quaternion classes, denominator 3 from cubic classes.
    Addition is modulo 1.
    """

    value: Fraction

    def __post_init__(self):
        reduced = Fraction(self.value) % 1
        if reduced.denominator not in (1, 2, 3):
            raise ValueError(f"unsupported invariant denominator: {reduced}")
        object.__setattr__(self, "value", reduced)

    @classmethod
    def zero(cls) -> "InvariantValue":
        return cls(Fraction(0))

    @classmethod
    def half(cls) -> "InvariantValue":
        return cls(Fraction(1, 2))

    @classmethod
    def thirds(cls, k: int) -> "InvariantValue":
        return cls(Fraction(k, 3))

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def __add__(self, other: "InvariantValue") -> "InvariantValue":
        return InvariantValue(self.value + other.value)

    def __neg__(self) -> "InvariantValue":
        return InvariantValue(-self.value)

    def __str__(self) -> str:
        return str(self.value)


# ------------------------------------------------------- quadratic symbols
def _split_p_part(q: Fraction, p: int) -> tuple[int, Fraction]:
    """Write q = p**v * u with u a p-adic unit; returns (v, u) exactly."""
    if q == 0:
        raise ValueError("nonzero value required")
    v = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v, Fraction(num, den)


def _unit_residue_exact(u: Fraction, mod: int) -> int:
    """The residue of a p-adic unit written as a fraction, modulo mod."""
    return u.numerator % mod * pow(u.denominator % mod, -1, mod) % mod


def _hilbert2_finite(p: int, va: int, ua: int, vb: int, ub: int) -> int:
    """Quadratic Hilbert symbol at p from valuations and unit residues.

    For odd p the units are needed mod p; at p = 2 they are needed mod 8.
    """
    if p == 2:
        eps_a, eps_b = (ua - 1) // 2 % 2, (ub - 1) // 2 % 2
        omega_a, omega_b = (ua * ua - 1) // 8 % 2, (ub * ub - 1) // 8 % 2
        e = eps_a * eps_b + va * omega_b + vb * omega_a
        return -1 if e % 2 else 1
    sign = 1
    if va % 2 and vb % 2 and (p - 1) // 2 % 2:
        sign = -sign
    if vb % 2:
        sign *= legendre_symbol(ua, p)
    if va % 2:
        sign *= legendre_symbol(ub, p)
    return sign


def _vu(x, p: int) -> tuple[int, int]:
    """Valuation and unit residue (mod 8 at p = 2, mod p otherwise) of x."""
    mod = 8 if p == 2 else p
    if isinstance(x, PadicNumber):
        if x.is_zero:
            raise InsufficientPrecision("symbol of a value that vanishes at precision")
        need = 3 if p == 2 else 1
        if x.prec < need:
            raise InsufficientPrecision("unit residue needs more digits")
        return x.valuation(), x.unit_residue(need) % mod
    v, u = _split_p_part(Fraction(x), p)
    return v, _unit_residue_exact(u, mod)


def hilbert2(a, b, v) -> tuple[int, InvariantValue]:
    """Quadratic Hilbert symbol (a, b)_v as (sign, invariant).

    The sign is +1 iff a is a norm from Q_v(sqrt(b)) (equivalently
    z^2 = a x^2 + b y^2 has a nontrivial Q_v-point); the invariant is 1/2
    exactly when the sign is -1.  Closed formulas at every place: the real
    place is -1 iff both arguments are negative; odd p uses valuations and
    Legendre symbols; p = 2 uses the standard unit formulas mod 8.
    """
    place = as_place(v)
    if place.is_real:
        if isinstance(a, PadicNumber) or isinstance(b, PadicNumber):
            raise ValueError("real place needs exact rational arguments")
        if a == 0 or b == 0:
            raise ValueError("nonzero arguments required")
        sign = -1 if a < 0 and b < 0 else 1
    else:
        p = place.prime
        va, ua = _vu(a, p)
        vb, ub = _vu(b, p)
        sign = _hilbert2_finite(p, va, ua, vb, ub)
    inv = InvariantValue.half() if sign == -1 else InvariantValue.zero()
    return sign, inv


def hilbert2_sign(a, b, v) -> int:
    return hilbert2(a, b, v)[0]


def product_formula_check(a, b) -> InvariantValue:
    """Sum of the invariants of (a, b) over every place where it can ramify.

    The symbol is trivial at odd primes not dividing either argument, so
    the sum runs over 2, the primes dividing the numerators and
    denominators, and the real place.  Reciprocity says the result is 0;
    the exact sum is returned so callers can assert it.
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("nonzero arguments required")
    from .exact import factorize

    primes = {2}
    for q in (a, b):
        primes.update(factorize(q.numerator).as_dict())
        primes.update(factorize(q.denominator).as_dict())
    total = InvariantValue.zero()
    for p in sorted(primes):
        total = total + hilbert2(a, b, p)[1]
    total = total + hilbert2(a, b, REAL_PLACE)[1]
    return total


# ------------------------------------------------- radical extension elements
def _det(mat):
    """Division-free determinant by first-column cofactor expansion."""
    n = len(mat)
    if n == 1:
        return mat[0][0]
    total = None
    for i in range(n):
        minor = [row[1:] for j, row in enumerate(mat) if j != i]
        term = mat[i][0] * _det(minor)
        if i % 2:
            term = -term
        total = term if total is None else total + term
    return total


class LocalExtElement:
    """An element of the radical algebra Q_p[x]/(x^m - d).

    Coefficients are p-adic numbers in the power basis 1, x, ..., x^(m-1).
    Multiplication reduces by x^m = d; the norm is the determinant of the
    multiplication-by-element matrix, so it is multiplicative by
    construction (and that property is exercised in the tests).
    """

    __slots__ = ("p", "prec", "m", "d", "coeffs")

    def __init__(self, p: int, m: int, d, coeffs, prec: int = DEFAULT_PRECISION):
        if m < 1:
            raise ValueError("degree must be positive")
        self.p, self.m, self.prec = p, m, prec
        self.d = Fraction(d)
        cs = []
        for c in coeffs:
            if isinstance(c, PadicNumber):
                if c.p != p:
                    raise ValueError("mixed primes")
                cs.append(c)
            else:
                cs.append(PadicNumber.from_fraction(Fraction(c), p, prec))
        if len(cs) != m:
            raise ValueError(f"need {m} coefficients")
        self.coeffs = tuple(cs)

    def _compatible(self, other: "LocalExtElement"):
        if (self.p, self.m, self.d) != (other.p, other.m, other.d):
            raise ValueError("elements of different algebras")

    def __add__(self, other: "LocalExtElement") -> "LocalExtElement":
        self._compatible(other)
        return LocalExtElement(
            self.p, self.m, self.d,
            [a + b for a, b in zip(self.coeffs, other.coeffs)], self.prec,
        )

    def __sub__(self, other: "LocalExtElement") -> "LocalExtElement":
        self._compatible(other)
        return LocalExtElement(
            self.p, self.m, self.d,
            [a - b for a, b in zip(self.coeffs, other.coeffs)], self.prec,
        )

    def __mul__(self, other: "LocalExtElement") -> "LocalExtElement":
        self._compatible(other)
        m = self.m
        raw = [PadicNumber.zero(self.p, self.prec)] * (2 * m - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                raw[i + j] = raw[i + j] + a * b
        dd = PadicNumber.from_fraction(self.d, self.p, self.prec)
        for k in range(2 * m - 2, m - 1, -1):
            raw[k - m] = raw[k - m] + dd * raw[k]
        return LocalExtElement(self.p, m, self.d, raw[:m], self.prec)

    def _matrix(self):
        """Columns: the element times x^j, reduced modulo x^m - d."""
        dd = PadicNumber.from_fraction(self.d, self.p, self.prec)
        col = list(self.coeffs)
        cols = [col]
        for _ in range(self.m - 1):
            col = [dd * col[-1]] + col[:-1]
            cols.append(col)
        return [[cols[j][i] for j in range(self.m)] for i in range(self.m)]

    def norm(self) -> PadicNumber:
        """Norm down to Q_p: determinant of the multiplication matrix."""
        return _det(self._matrix())


def _radical_norm_exact(m: int, d: Fraction, coeffs) -> Fraction:
    """Exact norm of sum(coeffs[j] x^j) in Q[x]/(x^m - d), as a Fraction."""
    col = [Fraction(c) for c in coeffs]
    cols = [col]
    for _ in range(m - 1):
        col = [d * col[-1]] + col[:-1]
        cols.append(col)
    return _det([[cols[j][i] for j in range(m)] for i in range(m)])


# --------------------------------------------------------- norm membership
@lru_cache(maxsize=None)
def _all_power_classes(p: int, n: int) -> frozenset:
    """Every class of Q_p*/(Q_p*)**n (finite: n valuations x unit classes)."""
    k = _unit_label_digits(p, n)
    mod = p**k
    classes = set()
    for v in range(n):
        for u in range(1, mod):
            if u % p:
                classes.add(power_class(Fraction(u * p**v), n, p))
    return frozenset(classes)


def _subgroup_closure(gens, identity) -> frozenset:
    group = {identity}
    frontier = [identity]
    while frontier:
        elem = frontier.pop()
        for g in gens:
            nxt = elem * g
            if nxt not in group:
                group.add(nxt)
                frontier.append(nxt)
    return frozenset(group)


@lru_cache(maxsize=None)
def _norm_subgroup(p: int, m: int, d: Fraction, expected_index: int) -> frozenset:
    """Image of the norm map of Q_p[x]/(x^m - d) inside Q_p*/(Q_p*)**m.

    Norms of elements with small integer coordinates are accumulated until
    the generated subgroup has exactly the index predicted by local
    reciprocity.  Overshooting the prediction is an arithmetic error;
    failing to reach it within the sampling budget raises
    InsufficientPrecision rather than returning an uncertified subgroup.
    """
    everything = _all_power_classes(p, m)
    identity = power_class(Fraction(1), m, p)
    gens: list[PowerClass] = []
    group = frozenset({identity})
    coefficient_pools = [(0, 1, -1, 2, -2), (0, 1, -1, 2, -2, 3, -3, 4, 5)]
    for pool in coefficient_pools:
        for tup in itertools.product(pool, repeat=m):
            if not any(tup):
                continue
            value = _radical_norm_exact(m, d, tup)
            if value == 0:
                continue
            cls = power_class(value, m, p)
            if cls in group:
                continue
            gens.append(cls)
            group = _subgroup_closure(gens, identity)
            index = len(everything) // len(group)
            if index < expected_index:
                raise ArithmeticError(
                    f"norm subgroup of x^{m} - {d} over Q_{p} exceeds the "
                    f"predicted index {expected_index}"
                )
            if index == expected_index:
                return group
    if len(everything) // len(group) != expected_index:
        raise InsufficientPrecision(
            f"norm subgroup of x^{m} - {d} over Q_{p} did not stabilize at "
            f"index {expected_index} within the sampling budget"
        )
    return group


def _minus_one_is_square(p: int) -> bool:
    return p != 2 and p % 4 == 1


def _hilbert2_sign_padic(x, s: PadicNumber) -> int:
    """Symbol (x, s)_p with the second argument known p-adically."""
    p = s.p
    va, ua = _vu(Fraction(x), p)
    vb, ub = _vu(s, p)
    return _hilbert2_finite(p, va, ua, vb, ub)


def is_local_norm(x, p: int, m: int, d, precision: int = DEFAULT_PRECISION) -> bool:
    """Is x a norm from the radical extension of Q_p defined by x^m = d?

    When x^m - d is irreducible this is literal membership in
    N(L*/Q_p) for the degree-m field L.  When it is reducible the algebra
    Q_p[x]/(x^m - d) splits into a product of smaller fields (the
    completions of the global radical field above p) and membership means
    x lies in the product of their norm groups; a linear factor therefore
    makes every x a norm.  Degrees 2, 3, 4 are supported.

    Decision routes: degree 2 and all quadratic subcases use the closed
    Hilbert-symbol formula; cyclic higher-degree cases enumerate the norm
    subgroup exactly and certify its index before answering.
    """
    x = Fraction(x)
    d = Fraction(d)
    if x == 0 or d == 0:
        raise ValueError("nonzero arguments required")
    if not is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    if m not in (2, 3, 4):
        raise ValueError("supported degrees: 2, 3, 4")
    if is_nth_power(d, m, p, precision):
        return True  # a root exists: a linear factor, so norms are everything

    if m == 2:
        return hilbert2(x, d, p)[0] == 1

    if m == 3:
        if p % 3 != 1:
            # No cube roots of unity in Q_p: the cubic x^3 - d stays
            # non-Galois, and its norm map is onto.
            return True
        group = _norm_subgroup(p, 3, d, 3)
        return power_class(x, 3, p) in group

    # m == 4
    if is_nth_power(d, 2, p, precision):
        # d = s^2 but not a 4th power: the algebra splits as the pair of
        # quadratic fields from x^2 - s and x^2 + s.
        if not _minus_one_is_square(p):
            # The two quadratic norm groups differ by the nontrivial
            # character attached to -1, so together they fill Q_p*.
            return True
        s = padic_sqrt(PadicNumber.from_fraction(d, p, precision))
        return _hilbert2_sign_padic(x, s) == 1
    if is_nth_power(-4 * d, 4, p, precision):
        # x^4 - d = (x^2 - 2wx + 2w^2)(x^2 + 2wx + 2w^2); both factors
        # generate the quadratic field with square root of -1.
        if _minus_one_is_square(p):
            return True
        return hilbert2(x, -1, p)[0] == 1
    # Irreducible quartic.  It is Galois (hence abelian, hence of norm
    # index 4) exactly when a square root of -1 lies in the field, i.e.
    # when -1 is a square in Q_p or -d is.
    if _minus_one_is_square(p) or is_nth_power(-d, 2, p, precision):
        group = _norm_subgroup(p, 4, d, 4)
        return power_class(x, 4, p) in group
    # Non-Galois quartic: norms agree with those of the quadratic
    # subfield generated by the square root of d.
    return hilbert2(x, d, p)[0] == 1
