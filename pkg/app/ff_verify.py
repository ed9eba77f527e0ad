# ff_verify.py
"""Finite-field checks of the explicit rank-3 sections.

Arithmetic in F_{p^k} goes through ``sympy.polys.galoistools`` dense
polynomials over ZZ, reduced modulo a fixed irreducible. Matrices are 3×3 and
0-indexed: P = P₋(μ) is lower block triangular with unipotent radical at
(2,0), (2,1); the shape of R_u(Q) is derived symbolically by
``unipotent_pattern``.
"""

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence, Union

from sympy import Matrix, eye, isprime, symbols, zeros
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (gf_add, gf_gcdex, gf_irreducible_p, gf_mul, gf_neg, gf_pow_mod, gf_rem,
                                     gf_strip, gf_sub)

from config import DEFAULT_CONFIGS
from u3_example import CASES, INERT, SPLIT, ha1, ha2, ha_mu, lambda_det
from utils import InvariantViolation, ZipInputError, get_logger

logger = get_logger(__name__)

MAX_FIELD_DEGREE = DEFAULT_CONFIGS["MAX_FIELD_DEGREE"]
SECTION_NAMES = ("Ha1", "Ha2", "Ha2Printed", "HaMu", "Det")

# unipotent radical of P = P₋(μ)
P_RADICAL = ((2, 0), (2, 1))


def _digits(n: int, base: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        n, r = divmod(n, base)
        out.append(r)
    return list(reversed(out))


@dataclass(frozen=True)
class FiniteField:
    p: int
    k: int
    modulus: tuple[int, ...]

    def element(self, value: Union[int, Sequence[int]]) -> "FqElement":
        coeffs = [value] if isinstance(value, int) else list(value)
        return FqElement(self, self.reduce([c % self.p for c in coeffs]))

    def reduce(self, coeffs) -> tuple[int, ...]:
        return tuple(gf_strip(gf_rem(gf_strip(list(coeffs)), list(self.modulus), self.p, ZZ)))

    @property
    def zero(self) -> "FqElement":
        return FqElement(self, ())

    @property
    def one(self) -> "FqElement":
        return self.element(1)

    @property
    def generator(self) -> "FqElement":
        return self.element([1, 0])

    @property
    def order(self) -> int:
        return self.p ** self.k

    def random_element(self, rng: random.Random) -> "FqElement":
        return self.element([rng.randrange(self.p) for _ in range(self.k)])

    def random_nonzero(self, rng: random.Random) -> "FqElement":
        while True:
            x = self.random_element(rng)
            if not x.is_zero:
                return x

    def __str__(self) -> str:
        return f"F_{self.p}^{self.k}"


def make_field(p: int, k: int) -> FiniteField:
    """F_{p^k} modulo the first monic irreducible of degree k, ordering coefficients from x^(k-1) down."""
    if not isinstance(p, int) or not isprime(p):
        raise ZipInputError(f"p must be a prime, got {p}")
    if not 1 <= k <= MAX_FIELD_DEGREE:
        raise ZipInputError(f"field degree must be between 1 and {MAX_FIELD_DEGREE}, got {k}")
    for n in range(p ** k):
        candidate = [1] + _digits(n, p, k)
        if gf_irreducible_p(candidate, p, ZZ):
            logger.debug("F_%d^%d modulus %s", p, k, candidate)
            return FiniteField(p, k, tuple(candidate))
    raise InvariantViolation(f"no irreducible polynomial of degree {k} over F_{p}")


@dataclass(frozen=True)
class FqElement:
    field: FiniteField = field(repr=False)
    coeffs: tuple[int, ...]

    def _wrap(self, coeffs) -> "FqElement":
        return FqElement(self.field, self.field.reduce(coeffs))

    def _coerce(self, other) -> "FqElement":
        if isinstance(other, int):
            return self.field.element(other)
        if other.field != self.field:
            raise ZipInputError(f"cannot combine elements of {self.field} and {other.field}")
        return other

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        other = self._coerce(other)
        return self._wrap(gf_add(list(self.coeffs), list(other.coeffs), self.field.p, ZZ))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return self._wrap(gf_sub(list(self.coeffs), list(other.coeffs), self.field.p, ZZ))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return self._wrap(gf_neg(list(self.coeffs), self.field.p, ZZ))

    def __mul__(self, other):
        other = self._coerce(other)
        return self._wrap(gf_mul(list(self.coeffs), list(other.coeffs), self.field.p, ZZ))

    __rmul__ = __mul__

    def inverse(self) -> "FqElement":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero in a finite field")
        s, _, h = gf_gcdex(list(self.coeffs), list(self.field.modulus), self.field.p, ZZ)
        if h != [1]:
            raise InvariantViolation(f"modulus of {self.field} is not irreducible")
        return self._wrap(s)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return self._wrap(gf_pow_mod(list(self.coeffs), n, list(self.field.modulus), self.field.p, ZZ))

    def frobenius(self) -> "FqElement":
        return self ** self.field.p

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        degree = len(self.coeffs) - 1
        for e, c in zip(range(degree, -1, -1), self.coeffs):
            if not c:
                continue
            if e == 0:
                terms.append(str(c))
            else:
                power = "x" if e == 1 else f"x^{e}"
                terms.append(power if c == 1 else f"{c}*{power}")
        return " + ".join(terms)


@dataclass(frozen=True)
class FqMatrix3:
    rows: tuple[tuple[FqElement, ...], ...]

    @classmethod
    def from_entries(cls, field_: FiniteField, entries: Sequence[Sequence]) -> "FqMatrix3":
        return cls(tuple(tuple(e if isinstance(e, FqElement) else field_.element(e) for e in row)
                         for row in entries))

    @classmethod
    def identity(cls, field_: FiniteField) -> "FqMatrix3":
        return cls.from_entries(field_, [[int(i == j) for j in range(3)] for i in range(3)])

    @property
    def field(self) -> FiniteField:
        return self.rows[0][0].field

    def __getitem__(self, ij) -> FqElement:
        i, j = ij
        return self.rows[i][j]

    def __mul__(self, other: "FqMatrix3") -> "FqMatrix3":
        return FqMatrix3(tuple(tuple(sum((self[i, k] * other[k, j] for k in range(3)), self.field.zero)
                                     for j in range(3)) for i in range(3)))

    def map(self, f: Callable[[FqElement], FqElement]) -> "FqMatrix3":
        return FqMatrix3(tuple(tuple(f(e) for e in row) for row in self.rows))

    def transpose(self) -> "FqMatrix3":
        return FqMatrix3(tuple(tuple(self[j, i] for j in range(3)) for i in range(3)))

    def minor(self, rows: Sequence[int], cols: Sequence[int]) -> FqElement:
        (r0, r1), (c0, c1) = rows, cols
        return self[r0, c0] * self[r1, c1] - self[r1, c0] * self[r0, c1]

    def det(self) -> FqElement:
        return (self[0, 0] * self.minor((1, 2), (1, 2))
                - self[0, 1] * self.minor((1, 2), (0, 2))
                + self[0, 2] * self.minor((1, 2), (0, 1)))

    def inverse(self) -> "FqMatrix3":
        d = self.det()
        if d.is_zero:
            raise ZipInputError("matrix is singular")
        d_inv = d.inverse()
        cofactor = [[None] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                rows = [r for r in range(3) if r != i]
                cols = [c for c in range(3) if c != j]
                sign = 1 if (i + j) % 2 == 0 else -1
                cofactor[i][j] = self.minor(rows, cols) * sign
        return FqMatrix3(tuple(tuple(cofactor[j][i] * d_inv for j in range(3)) for i in range(3)))

    def with_zeros(self, positions: Sequence[tuple[int, int]]) -> "FqMatrix3":
        drop = set(positions)
        zero = self.field.zero
        return FqMatrix3(tuple(tuple(zero if (i, j) in drop else self[i, j] for j in range(3)) for i in range(3)))

    def to_json(self) -> list:
        return [[str(e) for e in row] for row in self.rows]


def _antidiagonal(field_: FiniteField) -> FqMatrix3:
    return FqMatrix3.from_entries(field_, [[int(i + j == 2) for j in range(3)] for i in range(3)])


def _require_case(case: str) -> str:
    if case not in CASES:
        raise ZipInputError(f"unknown case {case!r}, expected one of {', '.join(CASES)}")
    return case


def frobenius_matrix(case: str, A: FqMatrix3) -> FqMatrix3:
    """split: entrywise x ↦ x^p; inert: J·ᵗ(A^(p))⁻¹·J."""
    powered = A.map(FqElement.frobenius)
    if _require_case(case) == SPLIT:
        return powered
    J = _antidiagonal(A.field)
    return J * powered.transpose().inverse() * J


@lru_cache(maxsize=None)
def unipotent_pattern(case: str) -> tuple[tuple[int, int], ...]:
    """Off-diagonal positions of R_u(Q), Q the Frobenius image of the parabolic opposite to P."""
    _require_case(case)
    a, b = symbols("a b")
    generic = eye(3)
    generic[0, 2] = a
    generic[1, 2] = b
    if case == SPLIT:
        image = generic
    else:
        J = zeros(3, 3)
        for i in range(3):
            J[i, 2 - i] = 1
        image = J * generic.T.inv() * J
    image = Matrix(image).applyfunc(lambda e: e.expand())
    return tuple((i, j) for i in range(3) for j in range(3) if i != j and image[i, j] != 0)


def theta_L(x: FqMatrix3) -> FqMatrix3:
    return x.with_zeros(P_RADICAL)


def theta_M(case: str, y: FqMatrix3) -> FqMatrix3:
    return y.with_zeros(unipotent_pattern(case))


@dataclass(frozen=True)
class ZipPair:
    x: FqMatrix3
    y: FqMatrix3
    case: str

    def is_valid(self) -> bool:
        return frobenius_matrix(self.case, theta_L(self.x)) == theta_M(self.case, self.y)


def _rng(seed_or_rng) -> random.Random:
    return seed_or_rng if isinstance(seed_or_rng, random.Random) else random.Random(seed_or_rng)


def random_lower_triangular(field_: FiniteField, rng: random.Random) -> FqMatrix3:
    entries = [[field_.zero] * 3 for _ in range(3)]
    for i in range(3):
        entries[i][i] = field_.random_nonzero(rng)
        for j in range(i):
            entries[i][j] = field_.random_element(rng)
    return FqMatrix3.from_entries(field_, entries)


def random_invertible(field_: FiniteField, rng: random.Random) -> FqMatrix3:
    while True:
        g = FqMatrix3.from_entries(field_, [[field_.random_element(rng) for _ in range(3)] for _ in range(3)])
        if not g.det().is_zero:
            return g


def random_unipotent(case: str, field_: FiniteField, rng: random.Random) -> FqMatrix3:
    entries = [[field_.element(int(i == j)) for j in range(3)] for i in range(3)]
    for i, j in unipotent_pattern(case):
        entries[i][j] = field_.random_element(rng)
    return FqMatrix3.from_entries(field_, entries)


def sample_zip_pair(case: str, field_: FiniteField, seed_or_rng=0, x: Optional[FqMatrix3] = None,
                    unipotent: bool = True) -> ZipPair:
    """(x, y) ∈ E with x lower triangular and y = φ(θ_L(x))·u, u ∈ R_u(Q)."""
    rng = _rng(seed_or_rng)
    x = x if x is not None else random_lower_triangular(field_, rng)
    y = frobenius_matrix(case, theta_L(x))
    if unipotent:
        y = y * random_unipotent(case, field_, rng)
    pair = ZipPair(x, y, case)
    if not pair.is_valid():
        raise InvariantViolation(f"sampled pair violates the zip relation in the {case} case")
    return pair


def evaluate_section(name: str, A: FqMatrix3) -> FqElement:
    p = A.field.p
    if name == "Ha1":
        return A[0, 0]
    if name == "Ha2":
        return A.minor((0, 1), (0, 2))
    if name == "Ha2Printed":
        return A.minor((0, 1), (1, 2))
    if name == "HaMu":
        return A[0, 0] ** p * A.minor((0, 1), (0, 1)) - A[1, 0] ** p * A.minor((0, 1), (0, 2))
    if name == "Det":
        return A.det()
    raise ZipInputError(f"unknown section {name!r}, expected one of {', '.join(SECTION_NAMES)}")


def section_weight(name: str, case: str, p: int) -> tuple[int, int, int]:
    """The weight each section is expected to carry."""
    _require_case(case)
    if name == "Det":
        return lambda_det(p, case)
    if case == INERT:
        weights = {"Ha1": ha1(p), "Ha2": ha2(p), "Ha2Printed": ha2(p), "HaMu": ha_mu(p)}
        if name in weights:
            return weights[name]
    raise ZipInputError(f"no expected weight for section {name!r} in the {case} case")


def character(weight: Sequence[int], x: FqMatrix3) -> FqElement:
    """λ(x) = x00^λ1 · x11^λ2 · x22^λ3 for lower-triangular x."""
    out = x.field.one
    for i, e in enumerate(weight):
        out = out * x[i, i] ** int(e)
    return out


@dataclass
class EquivarianceReport:
    section: str
    case: str
    weight: tuple[int, ...]
    p: int
    degree: int
    trials: int
    seed: int
    passed: bool = True
    counterexample: Optional[dict] = None
    torus_only: bool = False

    def to_json(self) -> dict:
        out = {
            "section": self.section,
            "case": self.case,
            "weight": list(self.weight),
            "p": self.p,
            "degree": self.degree,
            "trials": self.trials,
            "seed": self.seed,
            "passed": self.passed,
            "torus_only": self.torus_only,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def trial_seed(seed: int, trial: int) -> int:
    return seed * 1_000_003 + trial


def _run_checks(name, weight, case, field_, trials, seed, torus_only) -> EquivarianceReport:
    _require_case(case)
    weight = tuple(int(a) for a in weight)
    if len(weight) != 3:
        raise ZipInputError(f"weight must be a triple, got {list(weight)}")
    evaluate_section(name, FqMatrix3.identity(field_))  # rejects unknown names up front
    report = EquivarianceReport(name, case, weight, field_.p, field_.k, trials, seed, torus_only=torus_only)
    for trial in range(trials):
        rng = random.Random(trial_seed(seed, trial))
        if torus_only:
            t = FqMatrix3.from_entries(field_, [[field_.random_nonzero(rng) if i == j else 0 for j in range(3)]
                                                for i in range(3)])
            pair = sample_zip_pair(case, field_, rng, x=t, unipotent=False)
        else:
            pair = sample_zip_pair(case, field_, rng)
        g = random_invertible(field_, rng)
        lhs = evaluate_section(name, pair.x * g * pair.y.inverse())
        rhs = character(weight, pair.x) * evaluate_section(name, g)
        if lhs != rhs:
            report.passed = False
            report.counterexample = {"trial": trial, "x": pair.x.to_json(), "y": pair.y.to_json(),
                                     "g": g.to_json(), "lhs": str(lhs), "rhs": str(rhs)}
            logger.debug("%s fails at trial %d", name, trial)
            break
    return report


def check_equivariance(name: str, weight: Sequence[int], case: str, field_: FiniteField,
                       trials: int = DEFAULT_CONFIGS["DEFAULT_TRIALS"],
                       seed: int = DEFAULT_CONFIGS["DEFAULT_SEED"]) -> EquivarianceReport:
    """f(x·g·y⁻¹) = λ(x)·f(g) on seeded samples (x, y) ∈ E with x lower triangular."""
    return _run_checks(name, weight, case, field_, trials, seed, torus_only=False)


def check_torus_weight(name: str, weight: Sequence[int], case: str, field_: FiniteField,
                       trials: int = DEFAULT_CONFIGS["DEFAULT_TRIALS"],
                       seed: int = DEFAULT_CONFIGS["DEFAULT_SEED"]) -> EquivarianceReport:
    """The same relation restricted to x = t diagonal and y = φ(t)."""
    return _run_checks(name, weight, case, field_, trials, seed, torus_only=True)


def default_sections(case: str) -> tuple[str, ...]:
    return ("Ha1", "Ha2", "HaMu", "Det") if _require_case(case) == INERT else ("Det",)


def weyl_permutation(field_: FiniteField, perm: Sequence[int]) -> FqMatrix3:
    """Permutation matrix with a 1 at (perm[j], j)."""
    return FqMatrix3.from_entries(field_, [[int(perm[j] == i) for j in range(3)] for i in range(3)])
