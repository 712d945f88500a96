"""Finite-precision p-adic numbers, Hensel lifting, and n-th power classes.

A nonzero p-adic number is stored as p**v * u with u a unit known modulo
p**prec ("prec significant digits").  A value whose digits are all zero at
the working precision only carries the absolute precision at which it
vanishes; such values poison any query that depends on the unit part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import is_probable_prime

DEFAULT_PRECISION = 40


class InsufficientPrecision(Exception):
    """The requested answer is not determined at the stored precision."""


class NoConvergence(Exception):
    """Newton iteration precondition v(f(a)) > 2 v(f'(a)) fails."""


class PadicNumber:
    """Immutable p-adic number at finite relative precision."""

    __slots__ = ("p", "v", "unit", "prec", "_zero")

    def __init__(self, p, v, unit, prec, _zero=False):
        if prec <= 0 and not _zero:
            raise InsufficientPrecision(f"no significant digits left (prec={prec})")
        self.p = p
        self._zero = _zero
        if _zero:
            # v holds the absolute precision O(p**v); unit/prec are unused.
            self.v = v
            self.unit = 0
            self.prec = 0
        else:
            unit %= p**prec
            if unit % p == 0:
                raise ValueError("unit part must be a p-adic unit")
            self.v = v
            self.unit = unit
            self.prec = prec

    # ------------------------------------------------------------------ const
    @classmethod
    def zero(cls, p, abs_prec):
        """The class O(p**abs_prec): indistinguishable from 0."""
        return cls(p, abs_prec, 0, 0, _zero=True)

    @classmethod
    def from_int(cls, n, p, prec=DEFAULT_PRECISION):
        return cls.from_fraction(Fraction(n), p, prec)

    @classmethod
    def from_fraction(cls, q, p, prec=DEFAULT_PRECISION):
        q = Fraction(q)
        if q == 0:
            return cls.zero(p, prec)
        num, den, v = q.numerator, q.denominator, 0
        while num % p == 0:
            num //= p
            v += 1
        while den % p == 0:
            den //= p
            v -= 1
        unit = num * pow(den, -1, p**prec) % p**prec
        return cls(p, v, unit, prec)

    # ------------------------------------------------------------------ views
    @property
    def is_zero(self) -> bool:
        return self._zero

    @property
    def abs_prec(self) -> int:
        """Absolute precision: the value is known modulo p**abs_prec."""
        return self.v if self._zero else self.v + self.prec

    def valuation(self) -> int:
        if self._zero:
            raise InsufficientPrecision(
                f"value is O({self.p}^{self.v}); valuation undetermined"
            )
        return self.v

    def unit_residue(self, k: int) -> int:
        """The unit part modulo p**k."""
        if self._zero:
            raise InsufficientPrecision("zero at working precision has no unit part")
        if k > self.prec:
            raise InsufficientPrecision(f"only {self.prec} digits known, need {k}")
        return self.unit % self.p**k

    def residue(self, k: int) -> int:
        """The value modulo p**k (requires v >= 0 and enough digits)."""
        if self._zero:
            if self.v >= k:
                return 0
            raise InsufficientPrecision("not enough digits for requested residue")
        if self.v < 0:
            raise ValueError("negative valuation: not a p-adic integer")
        if self.v + self.prec < k:
            raise InsufficientPrecision(f"known mod p^{self.v + self.prec}, need p^{k}")
        return self.unit * self.p**self.v % self.p**k

    def __repr__(self):
        if self._zero:
            return f"O({self.p}^{self.v})"
        show = self.unit % self.p ** min(self.prec, 6)
        return f"{self.p}^{self.v}*{show}... + O({self.p}^{self.abs_prec})"

    # ------------------------------------------------------------- arithmetic
    def _coerce(self, other):
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError("mixed primes")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicNumber.from_fraction(
                Fraction(other), self.p, self.prec if not self._zero else DEFAULT_PRECISION
            )
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.p
        cap = min(self.abs_prec, other.abs_prec)
        lo = min(
            (x.v for x in (self, other) if not x._zero), default=cap
        )
        if lo >= cap:
            return PadicNumber.zero(p, cap)
        total = 0
        for x in (self, other):
            if not x._zero:
                total += x.unit * p ** (x.v - lo)
        total %= p ** (cap - lo)
        if total == 0:
            return PadicNumber.zero(p, cap)
        v = lo
        while total % p == 0:
            total //= p
            v += 1
        return PadicNumber(p, v, total, cap - v)

    __radd__ = __add__

    def __neg__(self):
        if self._zero:
            return self
        return PadicNumber(self.p, self.v, (-self.unit) % self.p**self.prec, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.p
        if self._zero or other._zero:
            # v is a lower bound on the product's valuation either way
            return PadicNumber.zero(p, self.v + other.v)
        prec = min(self.prec, other.prec)
        return PadicNumber(p, self.v + other.v, self.unit * other.unit, prec)

    __rmul__ = __mul__

    def inverse(self):
        if self._zero:
            raise ZeroDivisionError("cannot invert a value that vanishes at precision")
        mod = self.p**self.prec
        return PadicNumber(self.p, -self.v, pow(self.unit, -1, mod), self.prec)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k == 0:
            return PadicNumber(self.p, 0, 1, self.prec if not self._zero else DEFAULT_PRECISION)
        if k < 0:
            return self.inverse() ** (-k)
        if self._zero:
            return PadicNumber.zero(self.p, self.v * k)
        mod = self.p**self.prec
        return PadicNumber(self.p, self.v * k, pow(self.unit, k, mod), self.prec)

    # -------------------------------------------------------------- equality
    def approx_eq(self, other, digits=None) -> bool:
        """Agreement modulo p**digits (absolute); defaults to shared precision."""
        other = self._coerce(other)
        diff = self - other
        if digits is None:
            return diff._zero
        if diff._zero:
            return diff.v >= digits
        return diff.v >= digits


def _poly_eval(coeffs, x: PadicNumber) -> PadicNumber:
    """Horner evaluation; coeffs ascending, entries int/Fraction/PadicNumber."""
    if not coeffs:
        return PadicNumber.zero(x.p, x.abs_prec)
    acc = x._coerce(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def _poly_derivative(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:]


def hensel_root(coeffs, start, p=None, prec=DEFAULT_PRECISION, target=None) -> PadicNumber:
    """Newton-lift a simple approximate root of f (ascending coefficients).

    Requires v(f(a)) > 2 v(f'(a)) at the start value a, else NoConvergence.
    With an explicit target, iterates until v(f(x)) >= target and raises
    InsufficientPrecision if the digits run out first.  By default it stops
    once f(x) vanishes at the achievable precision (each Newton division by
    f' costs v(f'(root)) absolute digits, so the full working precision is
    reachable only when the root is simple modulo p).
    """
    if isinstance(start, PadicNumber):
        x = start
        p = x.p
    else:
        if p is None:
            raise ValueError("prime p required when start is not p-adic")
        x = PadicNumber.from_fraction(Fraction(start), p, prec)
    coeffs = [
        c if isinstance(c, PadicNumber) else PadicNumber.from_fraction(Fraction(c), p, prec)
        for c in coeffs
    ]
    dcoeffs = _poly_derivative(coeffs)
    fx = _poly_eval(coeffs, x)
    dfx = _poly_eval(dcoeffs, x)
    if dfx.is_zero:
        raise NoConvergence("derivative vanishes at working precision")
    if not fx.is_zero and fx.valuation() <= 2 * dfx.valuation():
        raise NoConvergence(
            f"v(f(a))={fx.valuation()} <= 2*v(f'(a))={2 * dfx.valuation()}"
        )
    for _ in range(64):
        fx = _poly_eval(coeffs, x)
        reached = fx.v if fx.is_zero else fx.valuation()
        if target is None:
            if fx.is_zero:
                return x
        elif reached >= target:
            return x
        dfx = _poly_eval(dcoeffs, x)
        step = fx / dfx
        if step.is_zero:
            raise InsufficientPrecision("Newton step vanished before reaching target")
        x = x - step
    raise InsufficientPrecision("Newton failed to reach target precision")


def padic_sqrt(x: PadicNumber) -> PadicNumber:
    """Square root by residue search plus Hensel lifting; ValueError if none."""
    p = x.p
    if x.is_zero:
        raise InsufficientPrecision("cannot extract a root of a vanished value")
    if x.v % 2 != 0:
        raise ValueError("odd valuation: not a square")
    # Newton needs v(r^2 - u) > 2 v(2r), i.e. a root mod 8 at p = 2, mod p else.
    mod = 8 if p == 2 else p
    u = x.unit_residue(min(x.prec, 3)) % mod
    start = None
    for r in range(1, mod):
        if r % p and r * r % mod == u:
            start = r
            break
    if start is None:
        raise ValueError("unit part is not a square")
    shift = x.v // 2
    unit = PadicNumber(p, 0, x.unit, x.prec)
    root = hensel_root([-unit, 0, 1], PadicNumber(p, 0, start, x.prec))
    return PadicNumber(p, root.v + shift, root.unit, root.prec)


# --------------------------------------------------------------------- classes
def _unit_label_digits(p: int, n: int) -> int:
    """Units congruent mod p**k (k = 2 v_p(n) + 1) share their n-th power class."""
    vp = 0
    m = n
    while m % p == 0:
        m //= p
        vp += 1
    return 2 * vp + 1


_POWER_COSETS: dict[tuple[int, int], frozenset] = {}


def _nth_power_units(p: int, n: int) -> frozenset:
    """The subgroup of n-th powers inside (Z/p**k)*, k the stabilized exponent."""
    key = (p, n)
    if key not in _POWER_COSETS:
        mod = p ** _unit_label_digits(p, n)
        _POWER_COSETS[key] = frozenset(pow(x, n, mod) for x in range(1, mod) if x % p)
    return _POWER_COSETS[key]


def _canonical_unit_label(u: int, n: int, p: int) -> int:
    """Least member of the coset u * (units)**n mod p**k: one label per class."""
    mod = p ** _unit_label_digits(p, n)
    return min(u * s % mod for s in _nth_power_units(p, n))


def is_nth_power_unit(u: int, n: int, p: int) -> bool:
    """Is the unit u an n-th power in Z_p*?

    Closed criteria: odd p uses u**((p-1)/g) = 1 mod p with g = gcd(n, p-1);
    p = 2 uses u = 1 mod 8 (squares) and u = 1 mod 16 (fourth powers);
    p = 3, n = 3 uses u = +-1 mod 9.  Anything else falls back to exhausting
    the stabilized residue ring p**(2 v_p(n) + 1).
    """
    if u % p == 0:
        raise ValueError("not a unit")
    if p != 2 and n % p != 0:
        g = math.gcd(n, p - 1)
        return pow(u % p, (p - 1) // g, p) == 1
    if p == 2:
        odd = n
        while odd % 2 == 0:
            odd //= 2
        s = n // odd  # 2-power part; odd part acts invertibly on Z_2 units
        if s == 1:
            return True
        if s == 2:
            return u % 8 == 1
        if s == 4:
            return u % 16 == 1
    if p == 3 and n == 3:
        return u % 9 in (1, 8)
    mod = p ** _unit_label_digits(p, n)
    return any(r % p and pow(r, n, mod) == u % mod for r in range(1, mod))


@dataclass(frozen=True)
class PowerClass:
    """Class of x in Q_p* / (Q_p*)**n: valuation mod n plus a unit label.

    The label is the least residue in the coset u * (units)**n modulo
    p**(2 v_p(n) + 1), so equal classes compare (and hash) equal; two
    classes multiply componentwise.
    """

    p: int
    n: int
    val_mod: int
    unit_label: int

    @property
    def is_nth_power(self) -> bool:
        return self.val_mod == 0 and is_nth_power_unit(self.unit_label, self.n, self.p)

    def __mul__(self, other: "PowerClass") -> "PowerClass":
        if (self.p, self.n) != (other.p, other.n):
            raise ValueError("mixed class groups")
        k = _unit_label_digits(self.p, self.n)
        return power_class_from_parts(
            self.p, self.n, self.val_mod + other.val_mod, self.unit_label * other.unit_label % self.p**k
        )

    def representative(self) -> Fraction:
        """A small rational in this class: p**v times a canonical unit.

        For n = 2 this lands in {1, u, p, u p} (u the least positive
        non-residue) for odd p, and in {±1, ±5} * 2**{0,1} style reps at 2.
        """
        p, n = self.p, self.n
        u = self.unit_label
        if self.n == 2:
            if p == 2:
                for cand in (1, -1, 5, -5):
                    if (u - cand) % 8 == 0:
                        return Fraction(cand * 2**self.val_mod)
            else:
                if is_nth_power_unit(u, 2, p):
                    unit = 1
                else:
                    unit = next(
                        r for r in range(2, p) if pow(r, (p - 1) // 2, p) == p - 1
                    )
                return Fraction(unit * p**self.val_mod)
        return Fraction(u * p**self.val_mod)


def power_class_from_parts(p: int, n: int, v: int, unit: int) -> PowerClass:
    if unit % p == 0:
        raise ValueError("unit part must be prime to p")
    return PowerClass(p, n, v % n, _canonical_unit_label(unit, n, p))


def power_class(x, n: int, p=None, prec=DEFAULT_PRECISION) -> PowerClass:
    """Class of nonzero x in Q_p*/(Q_p*)**n.

    Accepts an int, Fraction or PadicNumber; a PadicNumber carrying the zero
    flag raises InsufficientPrecision (its class is undetermined).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(x, PadicNumber):
        if x.is_zero:
            raise InsufficientPrecision(
                "power class of a value that vanishes at working precision"
            )
        p = x.p
        k = _unit_label_digits(p, n)
        return power_class_from_parts(p, n, x.valuation(), x.unit_residue(k))
    if p is None:
        raise ValueError("prime p required for exact input")
    if not is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    xa = PadicNumber.from_fraction(Fraction(x), p, prec)
    return power_class(xa, n)


def is_nth_power(x, n: int, p=None, prec=DEFAULT_PRECISION) -> bool:
    return power_class(x, n, p, prec).is_nth_power
