"""Local points and local-global obstructions for quartics ell*Y^2 = Z^4 - p.

The near affine chart is g(y, z) = ell*y^2 - z^4 + p = 0; the far chart
(z = 1/w, y = u/w^2, covering points with |z| > 1) is
h(u, w) = ell*u^2 - 1 + p*w^4 = 0.  Local points at finite places are found
by a breadth-first lifting tree over residues and certified by Hensel's
lemma; real points are found directly.

Two obstruction computations are provided:

* `point_obstruction` evaluates the quaternion class (y, p) at a found
  adelic point and sums the local invariants; the curve has points
  everywhere locally yet the sum is the nonzero class 1/2.
* `forced_section_invariants` computes, at each bad place v, the set of
  invariants forced on *any* local splitting of the fundamental group
  extension: the y-coordinate classes for which ell*y^2 is a norm from
  the degree-4 radical algebra Q_v[t]/(t^4 - p).  If 0 is not in the
  sumset of these forced sets, no global section can exist, regardless
  of whether the curve has rational points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .exact import (
    factorize,
    is_perfect_square,
    is_probable_prime,
    is_squarefree,
    legendre_symbol,
    primes_up_to,
)
from .padic import (
    DEFAULT_PRECISION,
    InsufficientPrecision,
    PadicNumber,
    hensel_root,
    is_nth_power,
)
from .symbols import (
    REAL_PLACE,
    InvariantValue,
    Place,
    as_place,
    hilbert2,
    is_local_norm,
)

__all__ = [
    "TwistParams",
    "CurveEquation",
    "LocalPoint",
    "NoPoint",
    "NoPointError",
    "InconclusivePrecision",
    "ObstructionReport",
    "TwistConditions",
    "DensityReport",
    "local_point",
    "point_obstruction",
    "forced_section_invariants",
    "twist_conditions",
    "twist_search",
    "density_experiment",
    "exhaustive_search",
    "model_smoothness_check",
]


class InconclusivePrecision(InsufficientPrecision):
    """A search or norm-group computation hit its budget undecided."""


class NoPointError(Exception):
    """Raised when an obstruction computation needs a missing local point."""

    def __init__(self, place: Place, depth: int):
        self.place = place
        self.depth = depth
        super().__init__(f"no local point at {place} (searched depth {depth})")


# ---------------------------------------------------------------- parameters
@dataclass(frozen=True)
class TwistParams:
    """The twisted quartic ell*Y^2 = Z^4 - p."""

    ell: int
    p: int

    def __post_init__(self):
        if self.ell == 0 or not is_squarefree(abs(self.ell)):
            raise ValueError("ell must be a nonzero squarefree integer")
        if self.p < 3 or not is_probable_prime(self.p):
            raise ValueError("p must be an odd prime")
        if self.p % 2 == 0 or math.gcd(self.ell, self.p) != 1:
            raise ValueError("p must be odd and coprime to ell")

    @property
    def odd_ell_primes(self) -> tuple[int, ...]:
        return tuple(q for q, _ in factorize(abs(self.ell)).factors if q != 2)

    @property
    def bad_finite_places(self) -> tuple[Place, ...]:
        primes = sorted({2, self.p, *self.odd_ell_primes})
        return tuple(Place.finite(q) for q in primes)

    @property
    def bad_places(self) -> tuple[Place, ...]:
        return self.bad_finite_places + (REAL_PLACE,)


@dataclass(frozen=True)
class CurveEquation:
    """The same quartic shape ell*y^2 = z^4 - p without the twist-family
    constraints: p may be any nonzero integer coprime to ell (used for
    composite constants such as the isotrivial-family fibres)."""

    ell: int
    p: int

    def __post_init__(self):
        if self.ell == 0 or self.p == 0 or math.gcd(self.ell, self.p) != 1:
            raise ValueError("need nonzero coprime coefficients")


# ------------------------------------------------------------- local points
@dataclass(frozen=True)
class LocalPoint:
    """A certified local solution; chart 'near' solves ell*y^2 = z^4 - p,
    chart 'far' solves ell*y^2 = 1 - p*z^4 (the substitution z -> 1/z,
    y -> y/z^2), and chart 'real' holds rational approximants."""

    place: Place
    y: object
    z: object
    precision: int
    chart: str = "near"


def _near_residual(tw: TwistParams, y, z):
    return tw.ell * y * y - (z * z * z * z - tw.p)


def _far_residual(tw: TwistParams, y, z):
    return tw.ell * y * y - (1 - tw.p * z * z * z * z)


def verify_local_point(tw: TwistParams, pt: LocalPoint) -> bool:
    """Check the defining equation at the point's stated precision."""
    if pt.chart == "real":
        defect = abs(_near_residual(tw, Fraction(pt.y), Fraction(pt.z)))
        return defect <= Fraction(1, 2 ** pt.precision)
    residual = (
        _near_residual(tw, pt.y, pt.z)
        if pt.chart == "near"
        else _far_residual(tw, pt.y, pt.z)
    )
    return residual.is_zero


@dataclass(frozen=True)
class NoPoint:
    """Witness that the lifting tree died out at every residue branch."""

    place: Place
    depth: int


def _residue_valuation(r: int, q: int, k: int) -> int | None:
    """Valuation of an integer residue known mod q^k; None if it could
    exceed the window."""
    r %= q**k
    if r == 0:
        return None
    v = 0
    while r % q == 0:
        r //= q
        v += 1
    return v


def _sqrt_fraction_down(t: Fraction, precision: int) -> Fraction:
    """Largest dyadic-denominator fraction with square <= t (t >= 0)."""
    scale = 2**precision
    num = t.numerator * t.denominator * scale * scale
    return Fraction(math.isqrt(num), t.denominator * scale)


def local_point(
    tw: TwistParams,
    v,
    precision: int = 16,
    *,
    allow_y_zero: bool = False,
    variant: int = 0,
) -> LocalPoint | NoPoint:
    """Search for a point of the twist over the completion at v.

    Finite places: breadth-first search over residue pairs on both affine
    charts; a branch is closed out by Hensel's lemma as soon as the
    residue depth exceeds twice the valuation of one partial derivative.
    `variant` skips that many certified branches first (deterministically
    different points for sampling).  Real place: direct solve.
    """
    place = as_place(v)
    if place.is_real:
        z = 0
        while (z**4 - tw.p) * tw.ell <= 0:
            z += 1
            if z > abs(tw.p) + 2:  # ell < 0 needs small z; ell > 0 large z
                return NoPoint(place, z)
        t = Fraction(z**4 - tw.p, tw.ell)
        y = _sqrt_fraction_down(t, precision + 8)
        return LocalPoint(place, y, Fraction(z), precision, "real")

    q = place.prime
    depth_bound = 2 * _int_valuation(4 * tw.ell * tw.ell * tw.p, q) + 6

    if allow_y_zero and is_nth_power(Fraction(tw.p), 4, q, max(precision, 12)):
        root = _nth_root_padic(tw.p, 4, q, precision)
        return LocalPoint(place, PadicNumber.zero(q, precision), root, precision)

    skip = variant
    for chart in ("near", "far"):
        result, skip = _chart_search(tw, q, chart, depth_bound, precision, skip,
                                     allow_y_zero)
        if result is not None:
            return result
    return NoPoint(place, depth_bound)


def _int_valuation(n: int, q: int) -> int:
    n = abs(n)
    v = 0
    while n and n % q == 0:
        n //= q
        v += 1
    return v


def _nth_root_padic(a, n: int, q: int, precision: int) -> PadicNumber:
    """Hensel n-th root of a unit that is known to be an n-th power."""
    target = Fraction(a)
    # a start residue exact modulo q^(2 v_q(n) + 1) beats the Newton
    # criterion v(f) > 2 v(f') = 2 v_q(n)
    mod = q ** (2 * _int_valuation(n, q) + 1)
    residue = target.numerator * pow(target.denominator, -1, mod) % mod
    start = next(
        r for r in range(1, mod) if r % q and pow(r, n, mod) == residue
    )
    coeffs = [-target] + [0] * (n - 1) + [1]
    return hensel_root(coeffs, PadicNumber(q, 0, start, precision))


def _chart_search(tw, q, chart, depth_bound, precision, skip, allow_y_zero):
    """BFS one affine chart; returns (LocalPoint | None, remaining skip)."""
    if chart == "near":
        def g(y, z, mod):
            return (tw.ell * y * y - (pow(z, 4, mod) - tw.p)) % mod

        def dz_coeff(z, mod):  # d/dz of -(z^4 - p)
            return -4 * pow(z, 3, mod) % mod

        def exact_y_poly(z0):  # ell*y^2 + (p - z0^4)
            return [tw.p - z0**4, 0, tw.ell]

        def exact_z_poly(y0):  # -z^4 + (ell*y0^2 + p) = 0, ascending
            return [tw.ell * y0 * y0 + tw.p, 0, 0, 0, -1]
    else:
        def g(y, z, mod):
            return (tw.ell * y * y - (1 - tw.p * pow(z, 4, mod))) % mod

        def dz_coeff(z, mod):
            return 4 * tw.p * pow(z, 3, mod) % mod

        def exact_y_poly(z0):
            return [tw.p * z0**4 - 1, 0, tw.ell]

        def exact_z_poly(y0):
            return [1 - tw.ell * y0 * y0, 0, 0, 0, -tw.p]

    frontier = [
        (y, z) for y in range(q) for z in range(q) if g(y, z, q) == 0
    ]
    for depth in range(1, depth_bound + 1):
        mod = q**depth
        next_frontier = []
        for y0, z0 in frontier:
            t_y = _residue_valuation(2 * tw.ell * y0, q, depth)
            t_z = _residue_valuation(dz_coeff(z0, mod), q, depth)
            candidates = [t for t in (t_y, t_z) if t is not None]
            t_min = min(candidates) if candidates else None
            if t_min is not None and depth > 2 * t_min:
                pt = _certify(
                    tw, q, chart, y0, z0, t_y, t_z, precision, exact_y_poly,
                    exact_z_poly, allow_y_zero,
                )
                if pt is not None:
                    if skip > 0:
                        skip -= 1  # deterministic variant: pass this branch by
                        continue
                    return pt, 0
                # certified branch rejected (e.g. its lift has y = 0):
                # keep refining, nearby branches may carry admissible points
            if depth == depth_bound:
                raise InconclusivePrecision(
                    f"lifting tree still alive at depth {depth} over Q_{q}"
                )
            step = mod
            for dy in range(q):
                for dz in range(q):
                    y1, z1 = y0 + dy * step, z0 + dz * step
                    if g(y1, z1, mod * q) == 0:
                        next_frontier.append((y1, z1))
        if not next_frontier:
            return None, skip
        frontier = next_frontier
    return None, skip


def _certify(tw, q, chart, y0, z0, t_y, t_z, precision, exact_y_poly,
             exact_z_poly, allow_y_zero):
    """Turn a Hensel-liftable residue pair into an exact local point."""
    place = Place.finite(q)
    use_y = t_y is not None and (t_z is None or t_y <= t_z)
    try:
        if use_y:
            z = PadicNumber.from_int(z0, q, precision)
            y = hensel_root(exact_y_poly(z0), PadicNumber.from_int(y0, q, precision))
        else:
            y = PadicNumber.from_int(y0, q, precision)
            z = hensel_root(exact_z_poly(y0), PadicNumber.from_int(z0, q, precision))
    except InsufficientPrecision:
        return None
    if y.is_zero and not allow_y_zero:
        return None
    return LocalPoint(place, y, z, precision, chart)


# ----------------------------------------------------------- obstruction
@dataclass(frozen=True)
class ObstructionReport:
    contributions: tuple[tuple[Place, frozenset], ...]
    total: frozenset
    verdict: str

    def contribution(self, v) -> frozenset:
        place = as_place(v)
        for entry, values in self.contributions:
            if entry == place:
                return values
        return frozenset({InvariantValue.zero()})  # good places

    def as_dict(self) -> dict:
        return {str(place): sorted(str(x) for x in values)
                for place, values in self.contributions}


def _sumset(sets) -> frozenset:
    def pairwise(acc, nxt):
        return frozenset(a + b for a in acc for b in nxt)

    return reduce(pairwise, sets, frozenset({InvariantValue.zero()}))


def _make_report(contributions: dict) -> ObstructionReport:
    ordered = tuple(
        sorted(
            contributions.items(),
            key=lambda item: (item[0].is_real, item[0].prime or 0),
        )
    )
    total = _sumset(values for _, values in ordered)
    verdict = "unobstructed" if InvariantValue.zero() in total else "obstructed"
    return ObstructionReport(ordered, total, verdict)


def point_obstruction(
    tw: TwistParams,
    places=None,
    precision: int = 16,
    variant: int = 0,
) -> ObstructionReport:
    """Sum of local invariants of the class (y, p) at a found adelic point.

    Unsampled places of good reduction contribute 0: the class extends
    over the smooth projective model there, so its evaluation lands in
    the Brauer group of the local integers, which vanishes.
    """
    if places is None:
        places = tw.bad_places
    contributions = {}
    for v in places:
        place = as_place(v)
        pt = local_point(tw, place, precision, variant=variant)
        if isinstance(pt, NoPoint):
            raise NoPointError(place, pt.depth)
        # On the far chart, y_affine = y_far / z_far^2 differs from y_far
        # by a square, so the symbol sees the same class either way.
        _, inv = hilbert2(pt.y, tw.p, place)
        contributions[place] = frozenset({inv})
    return _make_report(contributions)


_UNIT_SQUARE_REPS_2 = (1, 3, 5, 7, 2, 6, 10, 14)


def _square_class_reps(q: int) -> tuple[int, ...]:
    if q == 2:
        return _UNIT_SQUARE_REPS_2
    u = next(r for r in range(2, q) if legendre_symbol(r, q) == -1)
    return (1, u, q, q * u)


def forced_section_invariants(
    tw: TwistParams, precision: int = DEFAULT_PRECISION
) -> ObstructionReport:
    """Invariant sets forced on any collection of local sections.

    At each bad place v the section forces a y-class with ell*y^2 a norm
    from Q_v[t]/(t^4 - p); the possible invariants of (y, p) over such
    classes form S_v.  Away from the bad places, and at the real place
    (p > 0), the set is {0}.  If the sumset misses 0, the fundamental
    group extension admits no section.
    """
    contributions = {}
    for place in tw.bad_finite_places:
        q = place.prime
        values = set()
        for y in _square_class_reps(q):
            try:
                if is_local_norm(tw.ell * y * y, q, 4, tw.p, precision):
                    values.add(hilbert2(y, tw.p, place)[1])
            except InsufficientPrecision as exc:
                raise InconclusivePrecision(
                    f"norm decision at {place} did not stabilize"
                ) from exc
        contributions[place] = frozenset(values)
    contributions[REAL_PLACE] = frozenset({InvariantValue.zero()})
    return _make_report(contributions)


# ------------------------------------------------------------ twist family
@dataclass(frozen=True)
class TwistConditions:
    odd_prime_coprime: bool        # (i)  p odd prime, not among ell's primes
    quartic_nonresidue: bool       # (ii) p = 1 mod 4, ell not a 4th power mod p
    square_mod_ell_primes: bool    # (iii) p square mod each q | ell, q = 3 mod 4
    two_adic_solvable: bool        # (iv) p = 1 mod 8 with a Q_2 point

    @property
    def all_satisfied(self) -> bool:
        return (
            self.odd_prime_coprime
            and self.quartic_nonresidue
            and self.square_mod_ell_primes
            and self.two_adic_solvable
        )


def twist_conditions(tw: TwistParams) -> TwistConditions:
    """Decide the four arithmetic conditions that make the twist a
    counterexample to the local-global principle with obstructed sections."""
    ell, p = tw.ell, tw.p
    cond_i = p % 2 == 1 and is_probable_prime(p) and p not in set(
        q for q, _ in factorize(abs(ell)).factors
    )
    cond_ii = p % 4 == 1 and pow(ell % p, (p - 1) // 4, p) != 1
    cond_iii = all(
        q % 4 == 3 and legendre_symbol(p, q) == 1 for q in tw.odd_ell_primes
    )
    if p % 8 != 1:
        cond_iv = False
    elif ell % 2 == 0 or p % 16 == 1:
        # p = 1 mod 16: y = 0, z = p^(1/4); even ell, p = 9 mod 16:
        # y = 2 gives z^4 = p + 4*ell = 1 mod 16, a 4th power in Q_2.
        cond_iv = True
    else:
        cond_iv = not isinstance(
            local_point(tw, 2, precision=8, allow_y_zero=True), NoPoint
        )
    return TwistConditions(cond_i, cond_ii, cond_iii, cond_iv)


def twist_search(ell: int, p_max: int) -> list[int]:
    """Ascending primes p <= p_max for which the twist passes all four
    conditions and the forced-invariant computation certifies obstruction."""
    if ell == 0 or not is_squarefree(abs(ell)):
        raise ValueError("ell must be squarefree and nonzero")
    out = []
    for p in primes_up_to(p_max):
        if p == 2 or math.gcd(ell, p) != 1:
            continue
        tw = TwistParams(ell, p)
        if not twist_conditions(tw).all_satisfied:
            continue
        if forced_section_invariants(tw).verdict == "obstructed":
            out.append(p)
    return out


@dataclass(frozen=True)
class DensityReport:
    ell: int
    p_max: int
    valid_count: int
    prime_count: int
    ratio: Fraction
    predicted: Fraction


def density_experiment(ell: int, p_max: int) -> DensityReport:
    """Empirical density of valid twist primes against the Chebotarev
    prediction 1/2^(n+2) (even ell) resp. 1/2^(n+4) (odd ell), n the
    number of prime factors of ell."""
    if ell == 0 or not is_squarefree(abs(ell)):
        raise ValueError("ell must be squarefree and nonzero")
    factors = factorize(abs(ell)).factors
    if any(q % 4 != 3 for q, _ in factors if q != 2):
        raise ValueError("density prediction needs all odd factors = 3 mod 4")
    n = len(factors)
    predicted = (
        Fraction(1, 2 ** (n + 2)) if ell % 2 == 0 else Fraction(1, 2 ** (n + 4))
    )
    primes = primes_up_to(p_max)
    valid = 0
    for p in primes:
        if p == 2 or math.gcd(ell, p) != 1:
            continue
        if twist_conditions(TwistParams(ell, p)).all_satisfied:
            valid += 1
    return DensityReport(
        ell, p_max, valid, len(primes), Fraction(valid, len(primes)), predicted
    )


# ------------------------------------------------------- global searches
def exhaustive_search(bound: int, ell: int = 2, rhs: int = 17) -> list:
    """Integer solutions of ell*y^2 = z0^4 - rhs*z1^4 with gcd(z0, z1) = 1,
    y != 0, 0 <= z_i <= bound (solutions come in sign families, so
    nonnegative representatives are exhaustive)."""
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    solutions = []
    for z1 in range(bound + 1):
        r = rhs * z1**4
        for z0 in range(bound + 1):
            if math.gcd(z0, z1) != 1:
                continue
            t = z0**4 - r
            if t == 0 or t % ell:
                continue
            y2 = t // ell
            if y2 > 0 and is_perfect_square(y2):
                solutions.append((math.isqrt(y2), z0, z1))
    return solutions


def model_smoothness_check(q: int, tw: TwistParams = TwistParams(2, 17)) -> bool:
    """Smoothness of the projective model (ell*T^2 = A^2 - p*B^2, AB = C^2)
    over F_q at a prime q of good reduction: the 2x4 Jacobian
    [[2*ell*T, -2A, 2p*B, 0], [0, B, A, -2C]] must have rank 2 at every
    F_q-point."""
    if not is_probable_prime(q):
        raise ValueError("q must be prime")
    if (2 * tw.ell * tw.p) % q == 0:
        raise ValueError(f"q = {q} is a place of bad reduction")
    ell, p = tw.ell % q, tw.p % q

    def points():
        for first in range(4):  # index of the first unit coordinate
            fixed = [0] * first + [1]
            for rest in _tuples(q, 3 - first):
                yield tuple(fixed + list(rest))

    for t, a, b, c in points():
        if (ell * t * t - a * a + p * b * b) % q or (a * b - c * c) % q:
            continue
        row1 = (2 * ell * t % q, -2 * a % q, 2 * p * b % q, 0)
        row2 = (0, b % q, a % q, -2 * c % q)
        if not _rank2(row1, row2, q):
            return False
    return True


def _tuples(q: int, length: int):
    if length == 0:
        yield ()
        return
    for head in range(q):
        for tail in _tuples(q, length - 1):
            yield (head, *tail)


def _rank2(row1, row2, q: int) -> bool:
    for i in range(4):
        for j in range(i + 1, 4):
            if (row1[i] * row2[j] - row1[j] * row2[i]) % q:
                return True
    return False
