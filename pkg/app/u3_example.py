# u3_example.py
"""Rank-3 worked example: GL_3 with the split and the inert (unitary) Frobenius, Levi of type (2,1).

Weights are integer triples λ = (λ1, λ2, λ3) in the GL_3 coordinates of root_datum.gl_datum.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import ceil
from typing import Iterator, Optional, Sequence

from sympy import isprime
from sympy.ntheory.modular import solve_congruence

from config import DEFAULT_CONFIGS
from utils import InvariantViolation, ZipInputError, get_logger

logger = get_logger(__name__)

SPLIT = "split"
INERT = "inert"
CASES = (SPLIT, INERT)


def require_prime(p) -> int:
    if not isinstance(p, int) or not isprime(p):
        raise ZipInputError(f"p must be a prime, got {p!r}")
    return p


def ha1(p: int) -> tuple[int, int, int]:
    return (1, 0, p)


def ha2(p: int) -> tuple[int, int, int]:
    return (1 + p, 1, p)


def ha_mu(p: int) -> tuple[int, int, int]:
    return (p + 1, p + 1, p * p + p)


def lambda_det(p: int, case: str = INERT) -> tuple[int, int, int]:
    """Weight of the determinant section: (p+1)(1,1,1) inert, −(p−1)(1,1,1) split."""
    if case == INERT:
        return (p + 1,) * 3
    if case == SPLIT:
        return (-(p - 1),) * 3
    raise ZipInputError(f"unknown case {case!r}, expected one of {', '.join(CASES)}")


@dataclass(frozen=True)
class U3Weight:
    lam: tuple[int, int, int]
    p: int

    def __post_init__(self):
        if len(self.lam) != 3:
            raise ZipInputError(f"expected a weight triple, got {list(self.lam)}")
        require_prime(self.p)
        object.__setattr__(self, "lam", tuple(int(a) for a in self.lam))

    @property
    def is_levi_dominant(self) -> bool:
        return self.lam[0] >= self.lam[1]

    def nu(self, i: int) -> tuple[int, int, int]:
        """ν_i = λ − i·α1."""
        l1, l2, l3 = self.lam
        return (l1 - i, l2 + i, l3)


def _triple(lam: Sequence[int]) -> tuple[int, int, int]:
    if len(lam) != 3:
        raise ZipInputError(f"expected a weight triple, got {list(lam)}")
    return tuple(int(a) for a in lam)


def F_lambda(lam: Sequence[int], p: int) -> Fraction:
    l1, l2, l3 = _triple(lam)
    return Fraction(p, p * p - p + 1) * (p * l1 - (p - 1) * l2 - l3)


@lru_cache(maxsize=65536)
def _residue_class(l2_mod: int, shifted_mod: int, p: int) -> Optional[tuple[int, int]]:
    """The class of i mod p(p²−1) with p | i, p+1 | λ2+i and p²−1 | λ1−i−pλ3, or None."""
    solution = solve_congruence((0, p), ((-l2_mod) % (p + 1), p + 1), (shifted_mod, p * p - 1))
    if solution is None:
        return None
    return int(solution[0]), int(solution[1])


def qualifying_indices(lam: Sequence[int], p: int) -> list[int]:
    """All i with 0 ≤ i ≤ λ1−λ2 satisfying the divisibility conditions and i ≥ F(λ)."""
    l1, l2, l3 = _triple(lam)
    if l1 < l2:
        return []
    residue = _residue_class(l2 % (p + 1), (l1 - p * l3) % (p * p - 1), p)
    if residue is None:
        return []
    r, modulus = residue
    low = max(0, ceil(F_lambda(lam, p)))
    first = low + (r - low) % modulus
    return list(range(first, l1 - l2 + 1, modulus))


def dim_h0_u3(lam: Sequence[int], p: int) -> int:
    return len(qualifying_indices(lam, p))


def czip_u3_contains(lam: Sequence[int], p: int) -> bool:
    l1, l2, l3 = _triple(lam)
    return l1 >= l2 and (p - 1) * l1 + l2 - p * l3 <= 0


@dataclass(frozen=True)
class Decomposition:
    k1: int
    k2: int
    k_mu: int
    k_det: int
    i: int
    nu: tuple[int, int, int]

    def coefficients(self) -> tuple[int, int, int, int]:
        return (self.k1, self.k2, self.k_mu, self.k_det)

    def to_json(self) -> dict:
        return {"i": self.i, "k1": self.k1, "k2": self.k2, "k_mu": self.k_mu, "k_det": self.k_det,
                "nu": list(self.nu)}


def combine(coefficients: Sequence[int], p: int) -> tuple[int, int, int]:
    """k1·ha1 + k2·ha2 + k_mu·ha_mu + k_det·λ_det."""
    k1, k2, k_mu, k_det = coefficients
    gens = (ha1(p), ha2(p), ha_mu(p), lambda_det(p))
    return tuple(sum(k * g[j] for k, g in zip((k1, k2, k_mu, k_det), gens)) for j in range(3))


def decompose_generators(lam: Sequence[int], p: int, i: int) -> Decomposition:
    lam = _triple(lam)
    l1, l2, l3 = lam
    if i not in qualifying_indices(lam, p):
        raise ZipInputError(f"i = {i} does not satisfy the section conditions for lambda = {list(lam)}, p = {p}")
    k2 = i // p
    k1 = l1 - l2 - i
    # k_mu·p(p²−1) = (p²−p+1)(i − F(λ))
    numerator = (p * p - p + 1) * i - p * p * l1 + p * (p - 1) * l2 + p * l3
    if numerator % (p * (p * p - 1)):
        raise InvariantViolation(f"k_mu is not integral for lambda = {list(lam)}, i = {i}")
    k_mu = numerator // (p * (p * p - 1))
    rest = (l2 - k2) - (p + 1) * k_mu
    if rest % (p + 1):
        raise InvariantViolation(f"k_det is not integral for lambda = {list(lam)}, i = {i}")
    k_det = rest // (p + 1)
    out = Decomposition(k1, k2, k_mu, k_det, i, U3Weight(lam, p).nu(i))
    if min(k1, k2, k_mu) < 0 or combine(out.coefficients(), p) != lam:
        raise InvariantViolation(f"decomposition {out.coefficients()} does not reconstruct {list(lam)}")
    return out


def det_shift(lam: Sequence[int], p: int, case: str = INERT) -> tuple[int, int, int]:
    shift = lambda_det(p, case)
    return tuple(a + b for a, b in zip(_triple(lam), shift))


def split_correspondence(lam: Sequence[int]) -> tuple[int, ...]:
    if len(lam) < 1:
        raise ZipInputError("empty weight")
    if int(lam[-1]) != 0:
        raise ZipInputError(f"last coordinate of {list(lam)} is not 0; apply det_shift first")
    return tuple(int(a) for a in lam[:-1])


def split_h0_vanishes(lam: Sequence[int], p: int) -> bool:
    """Split GL_n: H⁰ vanishes unless the last coordinate is divisible by p−1."""
    return int(lam[-1]) % (p - 1) != 0


def default_box(p: int) -> int:
    return DEFAULT_CONFIGS["U3_BOX_FACTOR"] * p * (p + 1)


def box_points(box: int) -> Iterator[tuple[int, int, int]]:
    return product(range(-box, box + 1), repeat=3)


def monoid_points(p: int, box: int) -> set[tuple[int, int, int]]:
    """Box points of Z≥0 ha1 + Z≥0 ha2 + Z≥0 ha_mu + Z λ_det, by direct generation.

    λ1 − λ2 = k1 + p·k2 and pλ3 − (p−1)λ1 − λ2 = (p²−p+1)·k1 + p(p²−1)·k_mu bound the
    nonnegative coefficients; both functionals vanish on λ_det.
    """
    out = set()
    step = p + 1
    a, b, c = ha1(p), ha2(p), ha_mu(p)
    for k_mu in range(0, 2 * p * box // (p * (p * p - 1)) + 1):
        for k1 in range(0, 2 * box + 1):
            if (p * p - p + 1) * k1 + p * (p * p - 1) * k_mu > 2 * p * box:
                break
            for k2 in range(0, (2 * box - k1) // p + 1):
                base = tuple(k1 * a[j] + k2 * b[j] + k_mu * c[j] for j in range(3))
                low = max(-((box + x) // step) for x in base)
                high = min((box - x) // step for x in base)
                for k_det in range(low, high + 1):
                    out.add(tuple(x + k_det * step for x in base))
    return out


def saturation_multiplier(p: int) -> int:
    """|det(ha2, ha_mu, λ_det)|: clears every denominator of a cone point in that basis."""
    return p * (p - 1) * (p + 1) ** 2


def czip_scan(p: int, box: Optional[int] = None, sample: int = 5) -> dict:
    """Exhaustive comparison of the section criterion with the generated monoid on a box."""
    require_prime(p)
    box = default_box(p) if box is None else box
    if box < 0:
        raise ZipInputError("box radius must be nonnegative")
    monoid = monoid_points(p, box)
    multiplier = saturation_multiplier(p)
    sections, decomposition_failures, saturation_failures, outside_cone = set(), [], [], []
    for lam in box_points(box):
        indices = qualifying_indices(lam, p)
        if indices:
            sections.add(lam)
            if not czip_u3_contains(lam, p):
                outside_cone.append(lam)
            for i in indices:
                try:
                    decompose_generators(lam, p, i)
                except InvariantViolation:
                    decomposition_failures.append((lam, i))
        scaled = tuple(multiplier * a for a in lam)
        if czip_u3_contains(lam, p) != bool(qualifying_indices(scaled, p)):
            saturation_failures.append(lam)
    missing = sorted(sections - monoid)
    extra = sorted(monoid - sections)
    report = {
        "p": p,
        "box": box,
        "points": (2 * box + 1) ** 3,
        "sections": len(sections),
        "monoid": len(monoid),
        "double_inclusion": not missing and not extra,
        "decomposition_ok": not decomposition_failures,
        "saturation_ok": not saturation_failures,
        "sections_in_czip": not outside_cone,
        "missing_from_monoid": [list(x) for x in missing[:sample]],
        "missing_from_sections": [list(x) for x in extra[:sample]],
        "decomposition_failures": [{"lambda": list(lam), "i": i} for lam, i in decomposition_failures[:sample]],
        "saturation_failures": [list(x) for x in saturation_failures[:sample]],
    }
    report["ok"] = all(report[k] for k in ("double_inclusion", "decomposition_ok", "saturation_ok",
                                            "sections_in_czip"))
    logger.info("czip scan p=%d box=%d: %d section weights, ok=%s", p, box, len(sections), report["ok"])
    return report
