# exact_linalg.py
"""Exact rational and integer linear algebra.

Vectors are tuples of ``fractions.Fraction``; matrices are sequences of such rows.
Elimination goes through sympy (``Matrix.rref`` / ``Matrix.rank``) and integer
saturation through the Smith normal form of ``sympy.polys.matrices``.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from sympy import Matrix, Rational
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DM
from sympy.polys.matrices.normalforms import smith_normal_decomp

from utils import ZipInputError

QVector = tuple[Fraction, ...]
QMatrix = Sequence[Sequence[Fraction]]
IntVector = tuple[int, ...]


def qvec(entries: Iterable) -> QVector:
    """Coerce ints, Fractions or "num/den" strings into a QVector."""
    out = []
    for e in entries:
        if isinstance(e, str):
            out.append(Fraction(e.strip()))
        else:
            out.append(Fraction(e))
    return tuple(out)


def zero(n: int) -> QVector:
    return tuple(Fraction(0) for _ in range(n))


def dot(u: Sequence, v: Sequence) -> Fraction:
    if len(u) != len(v):
        raise ZipInputError(f"pairing of vectors of length {len(u)} and {len(v)}")
    return sum((Fraction(a) * Fraction(b) for a, b in zip(u, v)), Fraction(0))


def add(u: Sequence, v: Sequence) -> QVector:
    return tuple(Fraction(a) + Fraction(b) for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> QVector:
    return tuple(Fraction(a) - Fraction(b) for a, b in zip(u, v))


def scale(c, v: Sequence) -> QVector:
    c = Fraction(c)
    return tuple(c * Fraction(a) for a in v)


def mat_vec(A: QMatrix, x: Sequence) -> QVector:
    return tuple(dot(row, x) for row in A)


def mat_mul(A: QMatrix, B: QMatrix) -> list[QVector]:
    cols = transpose(B, ncols=len(B[0]) if B else 0)
    return [tuple(dot(row, col) for col in cols) for row in A]


def transpose(A: QMatrix, ncols: Optional[int] = None) -> list[QVector]:
    if not A:
        return [tuple() for _ in range(ncols or 0)]
    return [tuple(Fraction(A[i][j]) for i in range(len(A))) for j in range(len(A[0]))]


def identity(n: int) -> list[QVector]:
    return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]


def is_integral(v: Sequence) -> bool:
    return all(Fraction(a).denominator == 1 for a in v)


def as_int_vector(v: Sequence) -> IntVector:
    if not is_integral(v):
        raise ZipInputError(f"expected an integral vector, got {format_vector(v)}")
    return tuple(int(Fraction(a)) for a in v)


def clear_denominators(v: Sequence) -> IntVector:
    """Smallest positive multiple of v that is integral."""
    den = 1
    for a in v:
        den = lcm(den, Fraction(a).denominator)
    return tuple(int(Fraction(a) * den) for a in v)


def primitive(v: Sequence) -> IntVector:
    """Positive rescaling of v to an integral vector with content 1."""
    w = clear_denominators(v)
    g = 0
    for a in w:
        g = gcd(g, a)
    if g == 0:
        return w
    return tuple(a // g for a in w)


def format_rational(q) -> str:
    return str(Fraction(q))


def format_vector(v: Sequence) -> list[str]:
    return [format_rational(a) for a in v]


def _to_sympy(A: QMatrix, ncols: int) -> Matrix:
    flat = []
    for row in A:
        if len(row) != ncols:
            raise ZipInputError("matrix rows have unequal length")
        for a in row:
            a = Fraction(a)
            flat.append(Rational(a.numerator, a.denominator))
    return Matrix(len(A), ncols, flat)


def _to_fraction(e) -> Fraction:
    return Fraction(int(e.p), int(e.q))


def _ncols(A: QMatrix, ncols: Optional[int]) -> int:
    if A:
        return len(A[0])
    if ncols is None:
        raise ZipInputError("column count of an empty matrix must be given explicitly")
    return ncols


def rank(A: QMatrix, ncols: Optional[int] = None) -> int:
    if not A:
        return 0
    return int(_to_sympy(A, _ncols(A, ncols)).rank())


def determinant(A: QMatrix) -> Fraction:
    if not A:
        return Fraction(1)
    return _to_fraction(_to_sympy(A, len(A)).det())


def inverse(A: QMatrix) -> list[QVector]:
    n = len(A)
    if n == 0:
        return []
    M = _to_sympy(A, n)
    if M.det() == 0:
        raise ZipInputError("matrix is singular")
    inv = M.inv()
    return [tuple(_to_fraction(inv[i, j]) for j in range(n)) for i in range(n)]


def solve_linear(A: QMatrix, b: Sequence, ncols: Optional[int] = None) -> Optional[QVector]:
    """Particular solution of A·x = b (free variables set to 0), or None if inconsistent."""
    if len(A) != len(b):
        raise ZipInputError(f"system has {len(A)} rows but right-hand side has {len(b)} entries")
    n = _ncols(A, ncols)
    if not A:
        return zero(n)
    augmented = [tuple(row) + (b[i],) for i, row in enumerate(A)]
    reduced, pivots = _to_sympy(augmented, n + 1).rref()
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = _to_fraction(reduced[i, n])
    return tuple(x)


def rref(A: QMatrix, ncols: Optional[int] = None) -> tuple[list[QVector], tuple[int, ...]]:
    """Reduced row echelon form; only the nonzero rows are returned."""
    n = _ncols(A, ncols)
    if not A:
        return [], ()
    reduced, pivots = _to_sympy(A, n).rref()
    rows = [tuple(_to_fraction(reduced[i, j]) for j in range(n)) for i in range(len(pivots))]
    return rows, tuple(pivots)


def smith(A: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Smith normal form S = s·A·t of a nonempty integer matrix: (diagonal of S, s, t)."""
    smf, s, t = smith_normal_decomp(DM([[int(a) for a in row] for row in A], ZZ))
    smf_rows = smf.to_list()
    size = min(len(A), len(A[0]))
    diagonal = [int(smf_rows[i][i]) for i in range(size)]
    s_rows = [[int(a) for a in row] for row in s.to_list()]
    t_rows = [[int(a) for a in row] for row in t.to_list()]
    return diagonal, s_rows, t_rows


def kernel_basis(A: QMatrix, ncols: Optional[int] = None) -> list[IntVector]:
    """Saturated integral basis of {x ∈ Z^n : A·x = 0}."""
    n = _ncols(A, ncols)
    if n == 0:
        return []
    rows = [clear_denominators(row) for row in A if any(Fraction(a) != 0 for a in row)]
    if not rows:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    diagonal, _, t = smith(rows)
    r = sum(1 for d in diagonal if d != 0)
    # the columns of t beyond the rank span the kernel; t is unimodular so they are saturated
    basis = [tuple(t[i][j] for i in range(n)) for j in range(r, n)]
    return [_sign_normalize(v) for v in basis]


def _sign_normalize(v: IntVector) -> IntVector:
    for a in v:
        if a != 0:
            return v if a > 0 else tuple(-x for x in v)
    return v


@dataclass(frozen=True)
class Lattice:
    """A saturated sublattice of Z^n given by an integral basis."""

    ambient_rank: int
    basis: tuple[IntVector, ...]

    def __post_init__(self):
        for v in self.basis:
            if len(v) != self.ambient_rank:
                raise ZipInputError(f"basis vector of length {len(v)} in a rank {self.ambient_rank} lattice")
        if rank(self.basis, self.ambient_rank) != len(self.basis):
            raise ZipInputError("lattice basis is linearly dependent")

    @classmethod
    def full(cls, n: int) -> "Lattice":
        return cls(n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def kernel_of(cls, forms: QMatrix, n: int) -> "Lattice":
        return cls(n, tuple(kernel_basis(forms, n)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, v: Sequence) -> Optional[QVector]:
        """Rational coordinates of v in the basis, or None when v is outside the span."""
        if len(v) != self.ambient_rank:
            raise ZipInputError(f"vector of length {len(v)} in a rank {self.ambient_rank} lattice")
        return solve_linear(transpose(self.basis, ncols=self.ambient_rank), v, ncols=self.rank)

    def in_span(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def contains(self, v: Sequence) -> bool:
        coords = self.coordinates(v)
        return coords is not None and is_integral(coords)

    def from_coordinates(self, c: Sequence) -> QVector:
        out = zero(self.ambient_rank)
        for coeff, b in zip(c, self.basis):
            out = add(out, scale(coeff, b))
        return out

    def to_json(self) -> dict:
        return {"ambient_rank": self.ambient_rank, "rank": self.rank, "basis": [list(b) for b in self.basis]}
