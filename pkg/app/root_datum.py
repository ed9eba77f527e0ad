# root_datum.py
"""Based root data with a Frobenius action on the character lattice.

Characters and cocharacters both live in Z^n and pair by the dot product.
``sigma_char`` acts on column vectors of X*(T); the action on X_*(T) is its
inverse transpose, so the pairing is σ-invariant by construction.
"""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from sympy import isprime

from exact_linalg import (IntVector, as_int_vector, determinant, dot, inverse, mat_vec, rank,
                          solve_linear, transpose)
from utils import ENUMERATION_LIMIT, InvariantViolation, ResourceLimitError, ZipInputError, get_logger

logger = get_logger(__name__)

IntMatrix = tuple[tuple[int, ...], ...]

# generous bound on the order of a finite-order matrix in GL_n(Z) at desk rank
MAX_SIGMA_ORDER = 10 ** 4


def _int_matrix(rows: Sequence[Sequence]) -> IntMatrix:
    return tuple(tuple(int(a) for a in row) for row in rows)


def int_mat_mul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    n, m = len(A), len(B[0]) if B else 0
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(m)) for i in range(n))


def int_mat_vec(A: IntMatrix, v: Sequence) -> tuple:
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def int_identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class BasedRootDatum:
    p: int
    rank: int
    simple_roots: tuple[IntVector, ...]
    simple_coroots: tuple[IntVector, ...]
    sigma_char: IntMatrix
    sigma_cochar: IntMatrix = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "simple_roots", tuple(tuple(int(a) for a in v) for v in self.simple_roots))
        object.__setattr__(self, "simple_coroots", tuple(tuple(int(a) for a in v) for v in self.simple_coroots))
        object.__setattr__(self, "sigma_char", _int_matrix(self.sigma_char))
        if len(self.sigma_char) != self.rank or any(len(row) != self.rank for row in self.sigma_char):
            raise ZipInputError(f"sigma_char must be a {self.rank}x{self.rank} integer matrix")
        if self.rank and determinant(self.sigma_char) in (1, -1):
            inv = inverse(self.sigma_char)
            object.__setattr__(self, "sigma_cochar", _int_matrix(transpose(inv)))
        else:
            # validate() reports the non-unimodular case with a proper message
            object.__setattr__(self, "sigma_cochar", int_identity(self.rank))

    @property
    def semisimple_rank(self) -> int:
        return len(self.simple_roots)

    def pairing_matrix(self) -> list[list[int]]:
        return [[int(dot(a, c)) for c in self.simple_coroots] for a in self.simple_roots]

    def sigma_permutation(self) -> tuple[int, ...]:
        """π with σ(α_i) = α_{π(i)}."""
        index = {a: i for i, a in enumerate(self.simple_roots)}
        perm = []
        for i, a in enumerate(self.simple_roots):
            image = int_mat_vec(self.sigma_char, a)
            if image not in index:
                raise ZipInputError(f"sigma_char does not permute the simple roots: alpha{i + 1} maps outside Delta")
            perm.append(index[image])
        return tuple(perm)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "rank": self.rank,
            "simple_roots": [list(v) for v in self.simple_roots],
            "simple_coroots": [list(v) for v in self.simple_coroots],
            "sigma_char": [list(row) for row in self.sigma_char],
        }


def validate(datum: BasedRootDatum) -> None:
    if not isinstance(datum.p, int) or datum.p < 2 or not isprime(datum.p):
        raise ZipInputError(f"p must be a prime, got {datum.p}")
    if len(datum.simple_roots) != len(datum.simple_coroots):
        raise ZipInputError("simple_roots and simple_coroots have different lengths")
    for v in datum.simple_roots + datum.simple_coroots:
        if len(v) != datum.rank:
            raise ZipInputError(f"vector {list(v)} does not have length rank={datum.rank}")

    C = datum.pairing_matrix()
    for i, row in enumerate(C):
        if row[i] != 2:
            raise ZipInputError(f"Cartan diagonal: <alpha{i + 1}, alpha{i + 1}^v> = {row[i]} at index ({i}, {i})")
        for j, c in enumerate(row):
            if i == j:
                continue
            if c > 0:
                raise ZipInputError(f"Cartan off-diagonal entry {c} > 0 at index ({i}, {j})")
            if (c == 0) != (C[j][i] == 0):
                raise ZipInputError(f"Cartan zero pattern not symmetric at index ({i}, {j})")
    if datum.simple_roots and rank(datum.simple_roots) != len(datum.simple_roots):
        raise ZipInputError("simple roots are linearly dependent")

    if datum.rank and determinant(datum.sigma_char) not in (1, -1):
        raise ZipInputError("sigma_char is not invertible over Z")
    power = datum.sigma_char
    identity = int_identity(datum.rank)
    for _ in range(MAX_SIGMA_ORDER):
        if power == identity:
            break
        power = int_mat_mul(power, datum.sigma_char)
    else:
        raise ZipInputError("sigma_char does not have finite order")

    perm = datum.sigma_permutation()
    if sorted(perm) != list(range(len(perm))):
        raise ZipInputError(f"sigma_char is not a permutation of the simple roots: {perm}")
    for i, j in enumerate(perm):
        if int_mat_vec(datum.sigma_cochar, datum.simple_coroots[i]) != datum.simple_coroots[j]:
            raise ZipInputError(f"sigma_cochar does not map alpha{i + 1}^v to alpha{j + 1}^v at index ({i}, {j})")


def frobenius_char(datum: BasedRootDatum, lam: Sequence) -> tuple:
    return tuple(mat_vec(datum.sigma_char, lam))


def frobenius_cochar(datum: BasedRootDatum, delta: Sequence) -> tuple:
    return tuple(mat_vec(datum.sigma_cochar, delta))


def sigma_power(datum: BasedRootDatum, k: int, cochar: bool = False) -> IntMatrix:
    """sigma_char ** k for any integer k, or sigma_cochar ** k when cochar is set."""
    matrix = datum.sigma_cochar if cochar else datum.sigma_char
    base = matrix if k >= 0 else _int_matrix(inverse(matrix))
    out = int_identity(datum.rank)
    for _ in range(abs(k)):
        out = int_mat_mul(base, out)
    return out


@dataclass(frozen=True)
class RootSystem:
    positive_roots: tuple[IntVector, ...]
    all_roots: tuple[IntVector, ...]
    coroot_of: dict
    simple_coordinates: dict

    def is_positive(self, beta: Sequence) -> bool:
        return tuple(beta) in set(self.positive_roots)

    def levi_positive_roots(self, indices) -> tuple[IntVector, ...]:
        """Positive roots supported on the given simple-root indices."""
        allowed = set(indices)
        return tuple(b for b in self.positive_roots
                     if all(c == 0 or i in allowed for i, c in enumerate(self.simple_coordinates[b])))


def _reflect(vector, root, coroot_pairing) -> tuple:
    return tuple(v - coroot_pairing * r for v, r in zip(vector, root))


def generate_roots(datum: BasedRootDatum, limit: Optional[int] = None) -> RootSystem:
    limit = ENUMERATION_LIMIT if limit is None else limit
    simple = list(zip(datum.simple_roots, datum.simple_coroots))
    coroot_of = {a: c for a, c in simple}
    queue = deque(simple)
    while queue:
        beta, beta_v = queue.popleft()
        for a, a_v in simple:
            image = _reflect(beta, a, int(dot(beta, a_v)))
            image_v = _reflect(beta_v, a_v, int(dot(a, beta_v)))
            known = coroot_of.get(image)
            if known is None:
                if len(coroot_of) >= limit:
                    raise ResourceLimitError(f"root enumeration exceeded the limit of {limit}")
                coroot_of[image] = image_v
                queue.append((image, image_v))
            elif known != image_v:
                raise InvariantViolation(f"root {list(image)} reached with two coroots")

    simple_columns = transpose(datum.simple_roots, ncols=datum.rank)
    coordinates, positive = {}, []
    for beta in coroot_of:
        coeffs = solve_linear(simple_columns, beta, ncols=len(datum.simple_roots))
        if coeffs is None or any(c.denominator != 1 for c in coeffs):
            raise InvariantViolation(f"root {list(beta)} is not an integral combination of Delta")
        coords = tuple(int(c) for c in coeffs)
        coordinates[beta] = coords
        if all(c >= 0 for c in coords):
            positive.append(beta)
        elif not all(c <= 0 for c in coords):
            raise InvariantViolation(f"root {list(beta)} has mixed signs in the basis Delta")
    positive.sort(key=lambda b: (sum(coordinates[b]), tuple(-c for c in coordinates[b])))
    all_roots = tuple(positive) + tuple(tuple(-x for x in b) for b in positive)
    if len(all_roots) != len(coroot_of):
        raise InvariantViolation("Phi is not the disjoint union of Phi+ and -Phi+")
    logger.debug("generated %d positive roots in rank %d", len(positive), datum.rank)
    return RootSystem(tuple(positive), all_roots, coroot_of, coordinates)


# Builders ------------------------------------------------------------------


def gl_datum(n: int, p: int) -> BasedRootDatum:
    """Split GL_n: X*(T) = Z^n, α_i = e_i − e_{i+1}."""
    simple = tuple(tuple(int(k == i) - int(k == i + 1) for k in range(n)) for i in range(n - 1))
    return BasedRootDatum(p, n, simple, simple, int_identity(n))


def unitary_datum(n: int, p: int) -> BasedRootDatum:
    """GL_n-type datum with the inert Frobenius σλ = −(λ_n, …, λ_1)."""
    split = gl_datum(n, p)
    sigma = tuple(tuple(-int(j == n - 1 - i) for j in range(n)) for i in range(n))
    return BasedRootDatum(p, n, split.simple_roots, split.simple_coroots, sigma)


def sl2_datum(p: int) -> BasedRootDatum:
    return BasedRootDatum(p, 1, ((2,),), ((1,),), ((1,),))


def _block_vectors(vectors, offset: int, total: int):
    return tuple(tuple(0 for _ in range(offset)) + tuple(v) + tuple(0 for _ in range(total - offset - len(v)))
                 for v in vectors)


def _block_matrix(blocks: dict, sizes: list[int]) -> IntMatrix:
    """Assemble a block matrix from {(row_block, col_block): matrix}."""
    total = sum(sizes)
    offsets = [sum(sizes[:i]) for i in range(len(sizes))]
    rows = [[0] * total for _ in range(total)]
    for (bi, bj), M in blocks.items():
        for i, row in enumerate(M):
            for j, a in enumerate(row):
                rows[offsets[bi] + i][offsets[bj] + j] = a
    return _int_matrix(rows)


def product_datum(first: BasedRootDatum, second: BasedRootDatum) -> BasedRootDatum:
    if first.p != second.p:
        raise ZipInputError(f"cannot multiply data over different primes ({first.p} and {second.p})")
    total = first.rank + second.rank
    return BasedRootDatum(
        first.p,
        total,
        _block_vectors(first.simple_roots, 0, total) + _block_vectors(second.simple_roots, first.rank, total),
        _block_vectors(first.simple_coroots, 0, total) + _block_vectors(second.simple_coroots, first.rank, total),
        _block_matrix({(0, 0): first.sigma_char, (1, 1): second.sigma_char}, [first.rank, second.rank]),
    )


def weil_restriction(factor: BasedRootDatum, d: int) -> BasedRootDatum:
    """d block copies of the factor; σ moves block i to block i+1 and twists the last one back by the factor's σ."""
    if d < 1:
        raise ZipInputError("Weil restriction degree must be at least 1")
    n = factor.rank
    total = n * d
    roots, coroots = (), ()
    for k in range(d):
        roots += _block_vectors(factor.simple_roots, k * n, total)
        coroots += _block_vectors(factor.simple_coroots, k * n, total)
    if d == 1:
        return BasedRootDatum(factor.p, n, roots, coroots, factor.sigma_char)
    blocks = {(k + 1, k): int_identity(n) for k in range(d - 1)}
    blocks[(0, d - 1)] = factor.sigma_char
    return BasedRootDatum(factor.p, total, roots, coroots, _block_matrix(blocks, [n] * d))


def datum_from_json(doc: dict) -> tuple[BasedRootDatum, tuple[int, ...]]:
    """Parse the datum document; returns the validated datum and μ."""
    missing = [k for k in ("p", "rank", "simple_roots", "simple_coroots", "sigma_char", "mu") if k not in doc]
    if missing:
        raise ZipInputError(f"datum is missing field(s): {', '.join(missing)}")
    try:
        datum = BasedRootDatum(
            int(doc["p"]),
            int(doc["rank"]),
            tuple(as_int_vector([Fraction(a) for a in v]) for v in doc["simple_roots"]),
            tuple(as_int_vector([Fraction(a) for a in v]) for v in doc["simple_coroots"]),
            doc["sigma_char"],
        )
        mu = as_int_vector([Fraction(a) for a in doc["mu"]])
    except (TypeError, ValueError) as e:
        if isinstance(e, ZipInputError):
            raise
        raise ZipInputError(f"datum fields must be integers: {e}")
    if len(mu) != datum.rank:
        raise ZipInputError(f"mu has length {len(mu)} but rank is {datum.rank}")
    validate(datum)
    return datum, mu
