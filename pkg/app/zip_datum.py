# zip_datum.py
"""Derived data of a cocharacter datum (G, μ).

Conventions: P = P₋(μ) contains B, so every simple root pairs ≥ 0 with μ and
I = {α : ⟨α, μ⟩ = 0} is the type of the Levi L = Cent(μ). Users who think of
P₊(μ) enter −μ instead.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from exact_linalg import Lattice, QVector, add, dot, format_vector, rank, scale, sub, zero
from root_datum import (BasedRootDatum, RootSystem, frobenius_cochar, generate_roots, int_mat_vec, sigma_power,
                        validate)
from utils import InvariantViolation, ZipInputError, get_logger

logger = get_logger(__name__)


def root_name(i: int) -> str:
    return f"alpha{i + 1}"


@dataclass(frozen=True)
class ZipDatum:
    datum: BasedRootDatum
    mu: tuple[int, ...]
    roots: RootSystem
    I: tuple[int, ...]
    Delta_P: tuple[int, ...]
    d: dict
    m: dict
    delta: dict
    XL: Lattice
    XG: Lattice

    @property
    def p(self) -> int:
        return self.datum.p

    def root_index(self, alpha: Union[int, str]) -> int:
        """Accepts 0-based indices or names like "alpha2"."""
        if isinstance(alpha, str):
            if not alpha.startswith("alpha") or not alpha[5:].isdigit():
                raise ZipInputError(f"unknown simple root {alpha!r}")
            alpha = int(alpha[5:]) - 1
        if not 0 <= alpha < len(self.datum.simple_roots):
            raise ZipInputError(f"simple root index {alpha} out of range")
        return alpha

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "mu": list(self.mu),
            "I": [root_name(i) for i in self.I],
            "Delta_P": [root_name(i) for i in self.Delta_P],
            "d": {root_name(i): self.d[i] for i in self.Delta_P},
            "m": {root_name(i): self.m[i] for i in self.Delta_P},
            "delta": {root_name(i): format_vector(self.delta[i]) for i in self.Delta_P},
            "XL": self.XL.to_json(),
            "XG": self.XG.to_json(),
            "picard_rank": picard_rank(self),
            "positive_roots": len(self.roots.positive_roots),
        }


def wp_star(datum: BasedRootDatum, delta: Sequence) -> QVector:
    """℘∗(δ) = δ − p·σ(δ)."""
    return sub(delta, scale(datum.p, frobenius_cochar(datum, delta)))


def _orbit_length(perm: Sequence[int], i: int) -> int:
    d, j = 1, perm[i]
    while j != i:
        j = perm[j]
        d += 1
    return d


def _closed_form_delta(datum: BasedRootDatum, i: int, d: int) -> QVector:
    coroot = datum.simple_coroots[i]
    total = zero(datum.rank)
    for k in range(d):
        total = add(total, scale(datum.p ** k, int_mat_vec(sigma_power(datum, k, cochar=True), coroot)))
    return scale(Fraction(-1, datum.p ** d - 1), total)


def build_zip_datum(datum: BasedRootDatum, mu: Sequence[int], limit: Optional[int] = None) -> ZipDatum:
    validate(datum)
    mu = tuple(int(a) for a in mu)
    if len(mu) != datum.rank:
        raise ZipInputError(f"mu has length {len(mu)} but rank is {datum.rank}")
    pairings = [int(dot(a, mu)) for a in datum.simple_roots]
    negative = [root_name(i) for i, v in enumerate(pairings) if v < 0]
    if negative:
        raise ZipInputError(f"mu pairs negatively with {', '.join(negative)}; normalize mu into the dominant chamber")
    I = tuple(i for i, v in enumerate(pairings) if v == 0)
    Delta_P = tuple(i for i, v in enumerate(pairings) if v > 0)
    roots = generate_roots(datum, limit)

    perm = datum.sigma_permutation()
    inverse_perm = {j: i for i, j in enumerate(perm)}
    d, m, delta = {}, {}, {}
    for i in Delta_P:
        d[i] = _orbit_length(perm, i)
        steps, j = 1, inverse_perm[i]
        while j in I:
            j = inverse_perm[j]
            steps += 1
        m[i] = steps
        delta[i] = _closed_form_delta(datum, i, d[i])
        if wp_star(datum, delta[i]) != tuple(Fraction(a) for a in datum.simple_coroots[i]):
            raise InvariantViolation(f"delta_{root_name(i)} does not invert the Lang map on its coroot")

    XL = Lattice.kernel_of([datum.simple_coroots[i] for i in I], datum.rank)
    XG = Lattice.kernel_of(list(datum.simple_coroots), datum.rank)
    zip_datum = ZipDatum(datum, mu, roots, I, Delta_P, d, m, delta, XL, XG)
    if XL.rank - XG.rank != len(Delta_P):
        raise InvariantViolation(f"rank XL - rank XG = {XL.rank - XG.rank} but |Delta_P| = {len(Delta_P)}")
    if rank(delta_pairing_matrix(zip_datum), XL.rank) != len(Delta_P):
        raise InvariantViolation("the forms <., delta_alpha> are linearly dependent on XL")
    logger.debug("zip datum: I=%s Delta_P=%s", [root_name(i) for i in I], [root_name(i) for i in Delta_P])
    return zip_datum


def _require_parabolic(zip_datum: ZipDatum, alpha) -> int:
    i = zip_datum.root_index(alpha)
    if i not in zip_datum.Delta_P:
        raise ZipInputError(f"{root_name(i)} is not in Delta_P")
    return i


def d_alpha(zip_datum: ZipDatum, alpha) -> int:
    return zip_datum.d[_require_parabolic(zip_datum, alpha)]


def m_alpha(zip_datum: ZipDatum, alpha) -> int:
    return zip_datum.m[_require_parabolic(zip_datum, alpha)]


def delta_alpha(zip_datum: ZipDatum, alpha) -> QVector:
    return zip_datum.delta[_require_parabolic(zip_datum, alpha)]


def xstar_L(zip_datum: ZipDatum) -> Lattice:
    return zip_datum.XL


def xstar_G(zip_datum: ZipDatum) -> Lattice:
    return zip_datum.XG


def picard_rank(zip_datum: ZipDatum) -> int:
    return zip_datum.XL.rank - zip_datum.XG.rank


def delta_pairing_matrix(zip_datum: ZipDatum) -> list[QVector]:
    """|Δᴾ| × rank(XL) matrix of ⟨basis(XL), δ_α⟩."""
    return [tuple(dot(b, zip_datum.delta[i]) for b in zip_datum.XL.basis) for i in zip_datum.Delta_P]


def in_XL(zip_datum: ZipDatum, lam: Sequence) -> bool:
    return len(lam) == zip_datum.datum.rank and zip_datum.XL.contains(lam)
