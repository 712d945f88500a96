"""The isotrivial family 2Y^2 = Z^4 - N(t), N(t) = (1 + 2/(1+t+t^2))^4 + 16.

Every fibre is everywhere locally solvable, yet globally empty: the
quartic-free part N0 of N(t) is a sum A^4 + 16B^4 with A, B odd and
coprime, each odd prime p | N0 is 1 mod 8, and the invariant sum of the
quaternion class (y, N0) over the places with v_p(N0) odd and 2 a quartic
nonresidue mod p is an odd multiple of 1/2.  The parity is certified via
the two-square-style composition identity for the form a^2 + 16b^2 and
the quartic residue symbol of 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import (
    factorize,
    fourth_root,
    is_perfect_square,
    is_probable_prime,
    quartic_free_part,
    quartic_residue_symbol,
    primes_up_to,
    sqrt_mod_prime,
)
from .padic import hensel_root, is_nth_power_unit
from .reichardt_lind import CurveEquation, NoPoint, local_point
from .symbols import InvariantValue

__all__ = [
    "ElkiesFibre",
    "QuarticRep",
    "RepresentationNotFound",
    "NoRepresentation",
    "fibre",
    "rationals_of_height",
    "local_solvability_report",
    "LocalSolvabilityReport",
    "quartic_rep",
    "gauss_criterion_check",
    "norm_identity_check",
    "obstruction_parity",
    "ObstructionParity",
    "family_scan",
    "FamilyScanReport",
]


class RepresentationNotFound(Exception):
    """No decomposition N0 = A^4 + 16B^4 with A, B odd coprime below the
    exhaustive bound; this would falsify the family property."""


class NoRepresentation(Exception):
    """No decomposition p = a^2 + 16b^2; only possible when -1 fails to
    be a fourth power mod p."""


# ------------------------------------------------------------------ fibres
@dataclass(frozen=True)
class ElkiesFibre:
    """One member of the family: parameter t (None encodes the fibre at
    infinity), its value N, the fourth-power-free part N0, and the
    canonical decomposition N0 = A^4 + 16B^4."""

    t: Fraction | None
    N: Fraction
    N0: int
    A: int
    B: int

    def __post_init__(self):
        assert self.N0 == self.A**4 + 16 * self.B**4
        assert self.A % 2 == 1 and self.B % 2 == 1
        assert math.gcd(self.A, self.B) == 1
        assert self.N0 % 16 == 1


def fibre(t) -> ElkiesFibre:
    """Construct the fibre at t (a rational, or None/'infinity')."""
    if t is None or (isinstance(t, str) and t.lower() in ("infinity", "inf", "oo")):
        t_val, n_val = None, Fraction(17)
    else:
        t_val = Fraction(t)
        s = 1 + t_val + t_val * t_val
        assert s != 0, "1 + t + t^2 has no rational roots"
        n_val = (1 + Fraction(2) / s) ** 4 + 16
    assert n_val.numerator % 2 == 1, "the family takes odd values only"
    n0, _ = quartic_free_part(n_val)
    assert n0 > 0 and n0 % 16 == 1
    bound = int((n0 / 16) ** 0.25) + 2
    for b in range(1, bound + 1, 2):
        rest = n0 - 16 * b**4
        if rest <= 0:
            break
        a = fourth_root(rest)
        if a is not None and a % 2 == 1 and math.gcd(a, b) == 1:
            return ElkiesFibre(t_val, n_val, n0, a, b)
    raise RepresentationNotFound(f"N0 = {n0} is not A^4 + 16B^4 (A, B odd coprime)")


def rationals_of_height(h: int) -> list:
    """None (the fibre at infinity) followed by all rationals a/b in
    lowest terms with |a|, b <= h, ordered by (height, value)."""
    values = {Fraction(0)}
    for b in range(1, h + 1):
        for a in range(-h, h + 1):
            if math.gcd(a, b) == 1:
                values.add(Fraction(a, b))
    key = lambda q: (max(abs(q.numerator), q.denominator), q)
    return [None] + sorted(values, key=key)


# ------------------------------------------------- local solvability
@dataclass(frozen=True)
class LocalSolvabilityReport:
    fib: ElkiesFibre
    real_solvable: bool
    two_adic_solvable: bool
    odd_bad_places: tuple[tuple[int, bool], ...]  # p | N0 -> solvable
    good_places_checked: tuple[int, ...]
    good_places_solvable: bool

    @property
    def everywhere_solvable(self) -> bool:
        return (
            self.real_solvable
            and self.two_adic_solvable
            and all(ok for _, ok in self.odd_bad_places)
            and self.good_places_solvable
        )


def local_solvability_report(
    fib: ElkiesFibre, precision: int = 12, good_prime_bound: int = 50
) -> LocalSolvabilityReport:
    """Verify the fibre has points over R, Q_2, every completion at an odd
    prime dividing N0, and (by direct search) all small good primes.

    At 2: N0 = 1 mod 16 is a fourth power in Q_2, giving a point with
    y = 0.  At odd p | N0: some y makes N0 + 2y^2 a nonzero fourth power
    mod p, and the quartic in z lifts; such y exists because -1, hence
    the relevant quotient structure, behaves as for p = 1 mod 8.
    """
    n0 = fib.N0
    real_ok = n0 > 0

    eq = CurveEquation(2, n0)
    two_ok = not isinstance(
        local_point(eq, 2, precision, allow_y_zero=True), NoPoint
    )

    odd_entries = []
    for p, _ in factorize(n0).factors:
        assert p % 8 == 1, "odd primes dividing a fibre constant are 1 mod 8"
        solvable = False
        for y in range(p):
            u = (n0 + 2 * y * y) % p
            if u and is_nth_power_unit(u, 4, p):
                # Exact certificate: the 4th root of u mod p (two square
                # roots; both lie in the residue squares since p = 1 mod 4)
                # is a simple root of z^4 - (n0 + 2y^2), so it Hensel-lifts
                # to an honest Z_p point with the chosen integer y.
                w = sqrt_mod_prime(u, p)
                z0 = sqrt_mod_prime(w, p)
                root = hensel_root([-(n0 + 2 * y * y), 0, 0, 0, 1], z0, p, precision)
                solvable = root.valuation() == 0
                if p < 500:  # cross-check against the generic residue search
                    solvable = solvable and not isinstance(
                        local_point(eq, p, precision), NoPoint
                    )
                break
        odd_entries.append((p, solvable))

    good = tuple(
        q for q in primes_up_to(good_prime_bound) if q != 2 and n0 % q != 0
    )
    good_ok = all(
        not isinstance(local_point(eq, q, precision), NoPoint) for q in good
    )
    return LocalSolvabilityReport(
        fib, real_ok, two_ok, tuple(odd_entries), good, good_ok
    )


# -------------------------------------------------- quartic representations
@dataclass(frozen=True)
class QuarticRep:
    """p = a^2 + 16 b^2 with a odd; the parity of b decides whether 2 is a
    fourth power mod p."""

    p: int
    a: int
    b: int

    def __post_init__(self):
        assert self.a**2 + 16 * self.b**2 == self.p
        assert self.a % 2 == 1 and self.a > 0 and self.b > 0

    @property
    def b_even(self) -> bool:
        return self.b % 2 == 0


def quartic_rep(p: int) -> QuarticRep:
    """Smallest-b representation p = a^2 + 16b^2, cross-checked against the
    quartic character: 2 is a fourth power mod p iff b is even."""
    if p % 8 != 1 or not is_probable_prime(p):
        raise ValueError("need a prime p = 1 mod 8")
    for b in range(1, math.isqrt(p // 16) + 1):
        rest = p - 16 * b * b
        if rest > 0 and is_perfect_square(rest):
            a = math.isqrt(rest)
            rep = QuarticRep(p, a, b)
            symbol_plus = quartic_residue_symbol(2, p).exponent == 0
            if symbol_plus != rep.b_even:
                raise ArithmeticError(
                    f"quartic criterion failed at p={p}: b={b}, (2/p)_4 "
                    f"{'+1' if symbol_plus else 'nontrivial'}"
                )
            return rep
    raise NoRepresentation(f"{p} has no representation a^2 + 16b^2")


def gauss_criterion_check(p: int) -> bool:
    """True when the representation parity matches the quartic character
    of 2 at p (raises inside quartic_rep on mismatch)."""
    rep = quartic_rep(p)
    return (quartic_residue_symbol(2, p).exponent == 0) == rep.b_even


def norm_identity_check(a: int, b: int, c: int, d: int) -> bool:
    """Composition law of the form x^2 + 16y^2:
    (a^2+16b^2)(c^2+16d^2) = (ac-16bd)^2 + 16(ad+bc)^2."""
    lhs = (a * a + 16 * b * b) * (c * c + 16 * d * d)
    rhs = (a * c - 16 * b * d) ** 2 + 16 * (a * d + b * c) ** 2
    return lhs == rhs


# ----------------------------------------------------------- obstruction
@dataclass(frozen=True)
class ObstructionParity:
    fib: ElkiesFibre
    contributing_primes: tuple[int, ...]
    count: int
    invariant: InvariantValue
    verdict: str


def obstruction_parity(fib: ElkiesFibre) -> ObstructionParity:
    """Sum of forced local invariants over odd places of the fibre.

    A prime p | N0 contributes 1/2 exactly when v_p(N0) is odd and 2 is
    not a fourth power mod p; the fibre is obstructed iff the number of
    contributing primes is odd.  For family members the count is odd
    because N0 = A^4 + 16B^4 forces the representation parity b = B^2 = 1
    mod 2 multiplicatively across the factorization.
    """
    contributing = []
    for p, e in factorize(fib.N0).factors:
        if e % 2 == 1 and quartic_residue_symbol(2, p).exponent != 0:
            contributing.append(p)
    count = len(contributing)
    invariant = InvariantValue.zero() if count % 2 == 0 else InvariantValue.half()
    verdict = "obstructed" if count % 2 == 1 else "unobstructed"
    return ObstructionParity(fib, tuple(contributing), count, invariant, verdict)


# ------------------------------------------------------------- family scan
@dataclass(frozen=True)
class FamilyScanReport:
    entries: tuple[tuple[object, ObstructionParity, LocalSolvabilityReport], ...]

    @property
    def fibre_count(self) -> int:
        return len(self.entries)

    @property
    def all_obstructed(self) -> bool:
        return all(par.verdict == "obstructed" for _, par, _ in self.entries)

    @property
    def all_locally_solvable(self) -> bool:
        return all(loc.everywhere_solvable for _, _, loc in self.entries)


def family_scan(ts, precision: int = 12, good_prime_bound: int = 50) -> FamilyScanReport:
    """fibre -> local solvability -> obstruction parity for each t; the
    family claim is that every entry is locally solvable and obstructed."""
    entries = []
    for t in ts:
        fib = fibre(t)
        loc = local_solvability_report(fib, precision, good_prime_bound)
        par = obstruction_parity(fib)
        entries.append((t, par, loc))
    return FamilyScanReport(tuple(entries))
