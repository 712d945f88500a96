"""Exact integer and rational arithmetic: primality, factoring, residue symbols.

All routines are deterministic: the Miller-Rabin witnesses below 2**64 are a
fixed proven-complete base set, larger inputs use 40 rounds drawn from an RNG
seeded by the input itself, and Pollard rho walks a fixed schedule of
polynomial offsets.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

# Alias for exact rationals; fractions.Fraction already guarantees
# lowest terms, positive denominator and 0 == Fraction(0, 1).
Rational = Fraction

# Complete deterministic witness set for n < 2**64 (Sinclair / Jaeschke).
_SMALL_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TRIAL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


class FactorizationError(Exception):
    """Raised when a factoring invariant is violated (should not happen)."""


def _miller_rabin_round(n: int, a: int, d: int, s: int) -> bool:
    """One strong-probable-prime test; True means `a` does not witness n composite."""
    a %= n
    if a == 0:
        return True
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin below 2**64; 40 seeded rounds above."""
    if n < 2:
        return False
    for p in _TRIAL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < 2**64:
        witnesses = _SMALL_WITNESSES
    else:
        rng = random.Random(n)
        witnesses = [rng.randrange(2, n - 1) for _ in range(40)]
    return all(_miller_rabin_round(n, a, d, s) for a in witnesses)


def _brent_rho(n: int) -> int:
    """Find a nontrivial factor of composite odd n (Brent's cycle variant).

    The polynomial offsets c = 1, 2, 3, ... are tried in order, so the result
    is fully deterministic.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise FactorizationError(f"rho failed on {n}")


@dataclass(frozen=True)
class Factorization:
    """Signed factorization sign * prod(p**e); primes strictly ascending."""

    sign: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise ValueError("sign must be +-1")
        primes = [p for p, _ in self.factors]
        if primes != sorted(primes) or len(set(primes)) != len(primes):
            raise ValueError("factors must be sorted by distinct primes")
        if any(e < 1 for _, e in self.factors):
            raise ValueError("exponents must be positive")

    @property
    def value(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p**e
        return out

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)


def factorize(n: int) -> Factorization:
    """Factor a nonzero integer by trial division plus deterministic Brent rho."""
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    found: dict[int, int] = {}

    def record(p, e=1):
        found[p] = found.get(p, 0) + e

    for p in _TRIAL_PRIMES:
        while n % p == 0:
            record(p)
            n //= p
    p = 49
    while p * p <= n and p < 10_000:
        while n % p == 0:
            record(p)
            n //= p
        p += 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            record(m)
            continue
        root = math.isqrt(m)
        if root * root == m:
            stack += [root, root]
            continue
        d = _brent_rho(m)
        stack += [d, m // d]
    fz = Factorization(sign, tuple(sorted(found.items())))
    if fz.value != sign * math.prod(p**e for p, e in found.items()):
        raise FactorizationError("reconstruction mismatch")
    return fz


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for _, e in factorize(n).factors)


def quartic_free_part(q: Rational) -> tuple[int, Rational]:
    """Strip fourth powers: return (n0, m) with q * m**4 = n0, n0 a
    fourth-power-free integer of the same sign as q."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("expected a nonzero rational")
    n0 = -1 if q < 0 else 1
    m = Fraction(1)
    exps: dict[int, int] = {}
    for p, e in factorize(q.numerator * (1 if q > 0 else -1)).factors:
        exps[p] = exps.get(p, 0) + e
    for p, e in factorize(q.denominator).factors:
        exps[p] = exps.get(p, 0) - e
    for p, e in sorted(exps.items()):
        r = e % 4
        n0 *= p**r
        m *= Fraction(p) ** ((r - e) // 4)
    assert q * m**4 == n0
    return n0, m


def legendre_symbol(a: int, p: int) -> int:
    """(a/p) for odd prime p: 1 on nonzero squares, -1 on nonsquares, 0 if p | a."""
    if p == 2 or not is_probable_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return -1 if r == p - 1 else 1


def sqrt_mod_prime(a: int, p: int) -> int:
    """A square root of a modulo an odd prime p (Tonelli-Shanks).

    Returns a root in [0, p); raises ValueError on a nonresidue.
    """
    a %= p
    if a == 0:
        return 0
    if legendre_symbol(a, p) != 1:
        raise ValueError(f"{a} is not a square mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q, s = q // 2, s + 1
    z = 2
    while legendre_symbol(z, p) != -1:
        z += 1
    m, c = s, pow(z, q, p)
    t, r = pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2, i = t2 * t2 % p, i + 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    assert r * r % p == a
    return r


def _primitive_root(p: int) -> int:
    """Least positive primitive root mod p."""
    order_factors = [q for q, _ in factorize(p - 1).factors]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in order_factors):
            return g
    raise ValueError(f"no primitive root found mod {p}")


@dataclass(frozen=True)
class QuarticResidue:
    """Value of the quartic power residue character of F_p* (p = 1 mod 4).

    `exponent` e in {0,1,2,3} satisfies a**((p-1)/4) = i**e mod p where i is
    the fourth root of unity g**((p-1)/4) for the least primitive root g;
    `label` spells the corresponding element of {+1, +i, -1, -i}.
    """

    exponent: int
    label: str

    _LABELS = ("+1", "+i", "-1", "-i")

    @property
    def is_plus_one(self) -> bool:
        return self.exponent == 0

    @property
    def sign(self) -> int:
        """+1 or -1 when the value is real; error on +-i."""
        if self.exponent == 0:
            return 1
        if self.exponent == 2:
            return -1
        raise ValueError(f"quartic symbol {self.label} is imaginary")

    def __str__(self):
        return self.label


def quartic_residue_symbol(a: int, p: int) -> QuarticResidue:
    """Quartic residue character a**((p-1)/4) mod p for p = 1 mod 4, p not | a."""
    if p % 4 != 1 or not is_probable_prime(p):
        raise ValueError(f"{p} is not a prime = 1 mod 4")
    if a % p == 0:
        raise ValueError(f"{a} is divisible by {p}")
    r = pow(a % p, (p - 1) // 4, p)
    if r == 1:
        e = 0
    elif r == p - 1:
        e = 2
    else:
        i4 = pow(_primitive_root(p), (p - 1) // 4, p)
        if r == i4:
            e = 1
        elif r == p - i4:
            e = 3
        else:  # pragma: no cover - p prime rules this out
            raise ValueError("value is not a fourth root of unity")
    return QuarticResidue(e, QuarticResidue._LABELS[e])


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def fourth_root(n: int):
    """Exact integer fourth root of n, or None."""
    if n < 0:
        return None
    r = math.isqrt(math.isqrt(n))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**4 == n:
            return c
    return None


def primes_up_to(n: int) -> list[int]:
    """Simple sieve of Eratosthenes."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, ok in enumerate(sieve) if ok]
