"""Cube classes and the cubic Hilbert pairing over Q_3(zeta_3).

The field k_v = Q_3(zeta_3) is ramified over Q_3 with uniformizer
pi = zeta_3 - 1 (pi^2 = -3 zeta_3, so v_pi(3) = 2).  Its multiplicative
group modulo cubes is an F_3 vector space of dimension 4, generated by
pi, zeta_3, 1 + pi^2 and 1 + pi^3; principal units 1 + pi^4 O are cubes,
so cube classes of units are decided by their expansion modulo pi^5.

Everything here is exact: elements are pairs of rationals (coordinates
in the basis 1, zeta_3), classes are vectors in F_3^4, and the pairing
matrix is certified against norm subgroups before use.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .padic import InsufficientPrecision
from .symbols import InvariantValue

__all__ = [
    "Eisenstein",
    "ZETA",
    "PI",
    "DegenerateExtension",
    "express",
    "is_cube",
    "norm_subgroup",
    "CubeClassGroup",
    "cube_class_group",
    "hilbert3",
]


class DegenerateExtension(ValueError):
    """Adjoining a cube root of a cube does not give a field extension."""


# ------------------------------------------------------------ ring elements
@dataclass(frozen=True)
class Eisenstein:
    """a + b zeta_3 with rational coordinates (zeta_3^2 = -1 - zeta_3)."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @classmethod
    def of(cls, x) -> "Eisenstein":
        if isinstance(x, Eisenstein):
            return x
        return cls(Fraction(x), Fraction(0))

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __add__(self, other) -> "Eisenstein":
        other = Eisenstein.of(other)
        return Eisenstein(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self) -> "Eisenstein":
        return Eisenstein(-self.a, -self.b)

    def __sub__(self, other) -> "Eisenstein":
        return self + (-Eisenstein.of(other))

    def __rsub__(self, other) -> "Eisenstein":
        return Eisenstein.of(other) + (-self)

    def __mul__(self, other) -> "Eisenstein":
        o = Eisenstein.of(other)
        # (a + b z)(c + d z) with z^2 = -1 - z
        ac, bd = self.a * o.a, self.b * o.b
        cross = self.a * o.b + self.b * o.a
        return Eisenstein(ac - bd, cross - bd)

    __rmul__ = __mul__

    def conjugate(self) -> "Eisenstein":
        """The nontrivial automorphism: zeta_3 -> zeta_3^2."""
        return Eisenstein(self.a - self.b, -self.b)

    def norm(self) -> Fraction:
        """Norm to Q: a^2 - a b + b^2."""
        return self.a * self.a - self.a * self.b + self.b * self.b

    def inverse(self) -> "Eisenstein":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        conj = self.conjugate()
        return Eisenstein(conj.a / n, conj.b / n)

    def __truediv__(self, other) -> "Eisenstein":
        return self * Eisenstein.of(other).inverse()

    def __pow__(self, k: int) -> "Eisenstein":
        if k < 0:
            return self.inverse() ** (-k)
        out = Eisenstein(Fraction(1), Fraction(0))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __str__(self) -> str:
        return f"({self.a}) + ({self.b})*zeta3"


ZETA = Eisenstein(Fraction(0), Fraction(1))
PI = Eisenstein(Fraction(-1), Fraction(1))  # zeta_3 - 1, the uniformizer
ONE = Eisenstein(Fraction(1), Fraction(0))


def _v3(q: Fraction) -> int:
    if q == 0:
        raise ValueError("valuation of zero")
    v, num, den = 0, q.numerator, q.denominator
    while num % 3 == 0:
        num //= 3
        v += 1
    while den % 3 == 0:
        den //= 3
        v -= 1
    return v


def pi_valuation(x: Eisenstein) -> int:
    """v_pi(x); the norm of pi is 3, so v_pi = v_3 of the norm."""
    if x.is_zero:
        raise ValueError("valuation of zero")
    return _v3(x.norm())


def divide_by_pi(x: Eisenstein) -> "Eisenstein":
    """Exact division by the uniformizer: x * (-2 - zeta_3) / 3."""
    return Eisenstein((x.b - 2 * x.a) / 3, -(x.a + x.b) / 3)


def _residue_mod3(q: Fraction) -> int:
    if q.denominator % 3 == 0:
        raise ValueError("not 3-integral")
    return q.numerator % 3 * pow(q.denominator % 3, -1, 3) % 3


def pi_digits(x: Eisenstein, count: int) -> tuple[int, ...]:
    """First `count` digits of the pi-adic expansion, digit set {0, 1, 2}.

    Requires x integral at pi (3-integral coordinates).  The residue field
    O/pi is F_3 with zeta_3 mapping to 1, so the digit is a + b mod 3.
    """
    digits = []
    for _ in range(count):
        d = (_residue_mod3(x.a) + _residue_mod3(x.b)) % 3
        digits.append(d)
        x = divide_by_pi(x - Eisenstein.of(d))
    return tuple(digits)


def unit_part(x: Eisenstein) -> tuple[int, Eisenstein]:
    """Write x = pi^v * u with u a pi-adic unit; returns (v, u) exactly."""
    v = pi_valuation(x)
    u = x
    if v >= 0:
        for _ in range(v):
            u = divide_by_pi(u)
    else:
        u = u * PI ** (-v)
    return v, u


# ------------------------------------------------------ cube classification
_UNIT_GENERATORS = (ZETA, ONE + PI * PI, ONE + PI * PI * PI)


@lru_cache(maxsize=1)
def _cube_residues_mod_pi5() -> tuple[tuple[int, ...], ...]:
    """pi-digit keys (length 5) of cubes of units: exactly 6 of them."""
    seen = set()
    for a in range(27):
        for b in range(27):
            if (a + b) % 3 == 0:
                continue  # not a unit
            x = Eisenstein(Fraction(a), Fraction(b))
            seen.add(pi_digits(x**3, 5))
    assert len(seen) == 6, "cube residue count mod pi^5"
    return tuple(sorted(seen))


@lru_cache(maxsize=1)
def _unit_class_table() -> dict[tuple[int, ...], tuple[int, int, int]]:
    """Map: pi-digit key (mod pi^5) of a unit -> exponents on the three
    unit generators.  Covers all 162 unit residues exactly once."""
    cube_keys = set(_cube_residues_mod_pi5())
    reps_by_key: dict[tuple[int, ...], Eisenstein] = {}
    for a in range(27):
        for b in range(27):
            if (a + b) % 3 == 0:
                continue
            x = Eisenstein(Fraction(a), Fraction(b))
            key = pi_digits(x, 5)
            if key in cube_keys and key not in reps_by_key:
                reps_by_key[key] = x
    cube_reps = list(reps_by_key.values())
    assert len(cube_reps) == 6
    table: dict[tuple[int, ...], tuple[int, int, int]] = {}
    for e1, e2, e3 in itertools.product(range(3), repeat=3):
        g = _UNIT_GENERATORS[0] ** e1 * _UNIT_GENERATORS[1] ** e2 * _UNIT_GENERATORS[2] ** e3
        for rep in cube_reps:
            key = pi_digits(g * rep, 5)
            if key in table:
                raise ArithmeticError("cube class table collision")
            table[key] = (e1, e2, e3)
    assert len(table) == 162, "unit class table must cover all unit residues"
    return table


def express(x) -> tuple[int, int, int, int]:
    """Coordinates of x in k_v*/(k_v*)^3 = F_3^4.

    Basis: the uniformizer pi, then zeta_3, 1 + pi^2, 1 + pi^3.
    """
    x = Eisenstein.of(x)
    if x.is_zero:
        raise ValueError("zero has no cube class")
    v, u = unit_part(x)
    e1, e2, e3 = _unit_class_table()[pi_digits(u, 5)]
    return (v % 3, e1, e2, e3)


def is_cube(x) -> bool:
    return express(x) == (0, 0, 0, 0)


# ------------------------------------------------------ F_3 linear algebra
def _rref3(rows) -> list[list[int]]:
    mat = [[c % 3 for c in row] for row in rows]
    out: list[list[int]] = []
    pivots: list[int] = []
    for col in range(4):
        pivot = next(
            (r for r in mat if r[col] % 3 and all(r[c] == 0 for c in range(col))), None
        )
        if pivot is None:
            continue
        mat.remove(pivot)
        inv = pow(pivot[col], -1, 3)
        pivot = [c * inv % 3 for c in pivot]
        mat = [
            [(c - r[col] * pc) % 3 for c, pc in zip(r, pivot)] for r in mat
        ]
        out = [
            [(c - r[col] * pc) % 3 for c, pc in zip(r, pivot)] for r in out
        ]
        out.append(pivot)
        pivots.append(col)
    order = sorted(range(len(out)), key=lambda i: pivots[i])
    return [out[i] for i in order]


def _rank3(rows) -> int:
    return len(_rref3(rows))


def _in_span3(rows, vec) -> bool:
    return _rank3(list(rows) + [list(vec)]) == _rank3(rows)


def _nullspace3(rows) -> list[tuple[int, ...]]:
    """Basis of {v in F_3^4 : row . v = 0 for all rows}."""
    basis = []
    for vec in itertools.product(range(3), repeat=4):
        if not any(vec):
            continue
        if all(sum(r * v for r, v in zip(row, vec)) % 3 == 0 for row in rows):
            if not _in_span3(basis, vec):
                basis.append(list(vec))
    return [tuple(b) for b in basis]


# -------------------------------------------------------- norm subgroups
_SAMPLE_COORDS = (
    Eisenstein.of(0),
    ONE,
    -ONE,
    ZETA,
    -ZETA,
    ONE + ZETA,
    ONE - ZETA,
    Eisenstein.of(2),
    PI,
    ONE + PI,
)


def norm_subgroup(a) -> tuple[tuple[int, ...], ...]:
    """Basis (3 vectors in F_3^4) of the classes of norms from k_v(a^{1/3}).

    Local reciprocity for the cyclic cubic Kummer extension says the norm
    group has index exactly 3; sampling norms
    N(c0 + c1 t + c2 t^2) = c0^3 + a c1^3 + a^2 c2^3 - 3 a c0 c1 c2
    must therefore span a 3-dimensional subspace and no more.
    """
    a = Eisenstein.of(a)
    cls = express(a)
    if cls == (0, 0, 0, 0):
        raise DegenerateExtension(f"{a} is a cube in Q_3(zeta_3)")
    basis: list[list[int]] = []
    a2 = a * a
    for c0, c1, c2 in itertools.product(_SAMPLE_COORDS, repeat=3):
        if c0.is_zero and c1.is_zero and c2.is_zero:
            continue
        value = c0**3 + a * c1**3 + a2 * c2**3 - 3 * a * c0 * c1 * c2
        if value.is_zero:
            continue
        vec = express(value)
        if not any(vec) or _in_span3(basis, vec):
            continue
        basis.append(list(vec))
        rank = _rank3(basis)
        if rank > 3:
            raise ArithmeticError("norm subgroup exceeds the predicted index 3")
        if rank == 3:
            return tuple(tuple(b) for b in _rref3(basis))
    raise InsufficientPrecision(
        f"norm subgroup of cube root of {a} did not stabilize in the sampling budget"
    )


# ----------------------------------------------------------- the pairing
@dataclass(frozen=True)
class CubeClassGroup:
    """k_v*/(k_v*)^3 with its explicit pairing and Galois action.

    generators: pi, zeta_3, 1 + pi^2, 1 + pi^3 (independent: the pairing
    matrix has rank 4).  pairing_matrix M gives the cubic Hilbert pairing
    as coords(a)^T M coords(b) in F_3; it is skew (M = -M^T).  tau_matrix
    is the induced action of the automorphism zeta_3 -> zeta_3^2 on
    classes; it is an involution.
    """

    generators: tuple[Eisenstein, ...]
    pairing_matrix: tuple[tuple[int, ...], ...]
    tau_matrix: tuple[tuple[int, ...], ...]

    def express(self, x) -> tuple[int, int, int, int]:
        return express(x)

    def pairing(self, x, y) -> int:
        """The pairing value in F_3: 0 iff y is a norm from k_v(x^{1/3})."""
        xv, yv = self.express(x), self.express(y)
        return (
            sum(
                xv[i] * self.pairing_matrix[i][j] * yv[j]
                for i in range(4)
                for j in range(4)
            )
            % 3
        )

    def hilbert3(self, a, b) -> InvariantValue:
        return InvariantValue.thirds(self.pairing(a, b))

    def pairing_of_vectors(self, xv, yv) -> int:
        return (
            sum(xv[i] * self.pairing_matrix[i][j] * yv[j] for i in range(4) for j in range(4))
            % 3
        )

    def annihilator(self, vectors) -> tuple[tuple[int, ...], ...]:
        """Basis of {c : pairing(s, c) = 0 for all s in the span given}."""
        rows = [
            [sum(v[i] * self.pairing_matrix[i][j] for i in range(4)) % 3 for j in range(4)]
            for v in vectors
        ]
        return tuple(_nullspace3(rows))

    def apply_tau(self, vec) -> tuple[int, ...]:
        return tuple(
            sum(self.tau_matrix[i][j] * vec[j] for j in range(4)) % 3 for i in range(4)
        )

    def tau_eigenspace(self, sign: int) -> tuple[tuple[int, ...], ...]:
        """Basis of the eigenspace of tau for eigenvalue +1 or -1."""
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        rows = [
            [(self.tau_matrix[i][j] - (sign % 3) * (i == j)) % 3 for j in range(4)]
            for i in range(4)
        ]
        return tuple(_nullspace3(rows))


@lru_cache(maxsize=1)
def cube_class_group(precision: int = 5) -> CubeClassGroup:
    """Build the 81-element cube-class group with pairing and Galois action.

    The pairing matrix is assembled from the norm subgroups of the four
    generators: each row is the linear form cutting out that subgroup,
    scaled so the matrix is skew; the overall scale is fixed by making the
    first nonzero entry equal to 1.  Both steps are asserted, so a wrong
    subgroup or a non-skew configuration cannot slip through.
    """
    if precision < 5:
        raise ValueError("unit cube classes need at least 5 pi-adic digits")
    generators = (PI,) + _UNIT_GENERATORS
    for idx, g in enumerate(generators):
        want = tuple(1 if i == idx else 0 for i in range(4))
        assert express(g) == want, "generators must map to the standard basis"

    def defining_form(x):
        forms = _nullspace3(norm_subgroup(x))
        assert len(forms) == 1, "norm subgroup must have a unique defining form"
        return forms[0]

    functionals = [defining_form(g) for g in generators]
    # Kernels only fix each row up to a scalar, and skewness alone cannot
    # relate rows whose pairing entries do not overlap; the norm subgroups
    # of a few products of generators couple the remaining scales.
    couplings = []
    for i, j in ((0, 1), (0, 2), (1, 3)):
        w = tuple((a + b) % 3 for a, b in zip(*(express(g) for g in (generators[i], generators[j]))))
        couplings.append((w, defining_form(generators[i] * generators[j])))

    valid = []
    for lams in itertools.product((1, 2), repeat=4):
        m = [[lams[i] * functionals[i][j] % 3 for j in range(4)] for i in range(4)]
        if any(m[i][i] for i in range(4)):
            continue
        if any((m[i][j] + m[j][i]) % 3 for i in range(4) for j in range(4)):
            continue
        ok = True
        for w, form in couplings:
            row = [sum(w[i] * m[i][j] for i in range(4)) % 3 for j in range(4)]
            if not any(
                all(c == mu * f % 3 for c, f in zip(row, form)) for mu in (1, 2)
            ):
                ok = False
                break
        if ok:
            valid.append(m)
    assert len(valid) == 2, "scaling must be unique up to the global sign"
    matrix = None
    for m in valid:
        first = next(m[i][j] for i in range(4) for j in range(4) if m[i][j])
        if first == 1:
            matrix = m
            break
    assert matrix is not None
    assert _rank3(matrix) == 4, "pairing must be non-degenerate"

    tau_cols = [express(g.conjugate()) for g in generators]
    tau = tuple(
        tuple(tau_cols[j][i] for j in range(4)) for i in range(4)
    )
    # tau must be an involution
    square = [
        [sum(tau[i][k] * tau[k][j] for k in range(4)) % 3 for j in range(4)]
        for i in range(4)
    ]
    assert square == [[1 if i == j else 0 for j in range(4)] for i in range(4)]

    return CubeClassGroup(
        generators=generators,
        pairing_matrix=tuple(tuple(row) for row in matrix),
        tau_matrix=tau,
    )


def hilbert3(a, b) -> InvariantValue:
    """Cubic Hilbert pairing on Q_3(zeta_3): 0 iff b is a norm from the
    cube-root extension by a.  If a is itself a cube the extension is
    degenerate and every b is a norm, so the value is 0."""
    a = Eisenstein.of(a)
    b = Eisenstein.of(b)
    if a.is_zero or b.is_zero:
        raise ValueError("nonzero arguments required")
    if is_cube(a):
        return InvariantValue.zero()
    return cube_class_group().hilbert3(a, b)
