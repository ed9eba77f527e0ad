# sections.py
"""Existence of sections of line bundles on the stack of G-zips, and structural classifiers."""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from exact_linalg import Lattice, QVector, dot, qvec, solve_linear, zero, add, scale
from root_datum import int_mat_vec
from u3_example import dim_h0_u3
from utils import InvariantViolation, ZipInputError, get_logger
from weyl import WeylGroup
from zip_datum import ZipDatum, in_XL

logger = get_logger(__name__)


class Trool(str, Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, value: Optional[bool]) -> "Trool":
        if value is None:
            return cls.UNKNOWN
        return cls.TRUE if value else cls.FALSE


class TrivialityOracle:
    """Answers "is λ trivial on the stabilizer of the identity?"; None when it cannot tell.

    The base oracle only knows that the zero character is trivial.
    """

    name = "unknown"

    def is_trivial(self, lam: Sequence) -> Optional[bool]:
        return True if not any(Fraction(a) for a in lam) else None

    def dimension(self, lam: Sequence) -> Optional[int]:
        """Dimension of the section space when the oracle knows it exactly."""
        return None


class SublatticeOracle(TrivialityOracle):
    """True on a caller-supplied sublattice of characters known to be trivial; unknown elsewhere."""

    name = "sublattice"

    def __init__(self, basis: Sequence[Sequence[int]], ambient_rank: int):
        self.lattice = Lattice(ambient_rank, tuple(tuple(int(a) for a in v) for v in basis))

    def is_trivial(self, lam: Sequence) -> Optional[bool]:
        if self.lattice.contains(lam):
            return True
        return super().is_trivial(lam)


class U3Oracle(TrivialityOracle):
    """Exact answers for the inert rank-3 example, from the dimension formula."""

    name = "u3"

    def __init__(self, p: int):
        self.p = p

    def is_trivial(self, lam: Sequence) -> Optional[bool]:
        return dim_h0_u3([int(a) for a in lam], self.p) >= 1

    def dimension(self, lam: Sequence) -> Optional[int]:
        return dim_h0_u3([int(a) for a in lam], self.p)


class SplitGL3Oracle(TrivialityOracle):
    """Split GL_3, Levi of type (2,1): (a, a, c) is trivial iff p−1 divides a and c."""

    name = "split_gl3"

    def __init__(self, p: int):
        self.p = p

    def is_trivial(self, lam: Sequence) -> Optional[bool]:
        a, _, c = (int(x) for x in lam)
        return a % (self.p - 1) == 0 and c % (self.p - 1) == 0

    def dimension(self, lam: Sequence) -> Optional[int]:
        return 1 if self.is_trivial(lam) else 0


def oracle_for(zip_datum: ZipDatum, doc: Optional[dict] = None) -> TrivialityOracle:
    """Pick the oracle named by a datum document (`oracle` or `triviality_sublattice`)."""
    doc = doc or {}
    if doc.get("triviality_sublattice"):
        return SublatticeOracle(doc["triviality_sublattice"], zip_datum.datum.rank)
    name = doc.get("oracle")
    if name is None:
        return TrivialityOracle()
    if zip_datum.datum.rank != 3 and name in ("u3", "split_gl3"):
        raise ZipInputError(f"oracle {name!r} needs a rank 3 datum")
    if name == "u3":
        return U3Oracle(zip_datum.p)
    if name == "split_gl3":
        return SplitGL3Oracle(zip_datum.p)
    raise ZipInputError(f"unknown triviality oracle {name!r}")


def _require_XL(zip_datum: ZipDatum, lam: Sequence) -> QVector:
    lam = qvec(lam)
    if not in_XL(zip_datum, lam):
        raise ZipInputError(f"lambda = {[str(a) for a in lam]} is not a character of L")
    return lam


def delta_pairings(zip_datum: ZipDatum, lam: Sequence) -> dict[int, Fraction]:
    return {i: dot(lam, zip_datum.delta[i]) for i in zip_datum.Delta_P}


def has_mu_ordinary_hasse(zip_datum: ZipDatum, lam: Sequence) -> bool:
    lam = _require_XL(zip_datum, lam)
    return all(v > 0 for v in delta_pairings(zip_datum, lam).values())


def h0_nonzero_up_to_power(zip_datum: ZipDatum, lam: Sequence) -> bool:
    lam = _require_XL(zip_datum, lam)
    return all(v >= 0 for v in delta_pairings(zip_datum, lam).values())


@dataclass(frozen=True)
class H0Verdict:
    value: Trool
    dimension: Optional[int]

    def to_json(self) -> dict:
        return {"value": self.value.value, "dimension": self.dimension}


def h0_nonzero_exact(zip_datum: ZipDatum, lam: Sequence, oracle: Optional[TrivialityOracle] = None) -> H0Verdict:
    """False if some ⟨λ, δ_α⟩ < 0; otherwise the oracle decides, and a nonzero space is a line."""
    lam = _require_XL(zip_datum, lam)
    oracle = oracle or TrivialityOracle()
    if any(v < 0 for v in delta_pairings(zip_datum, lam).values()):
        return H0Verdict(Trool.FALSE, 0)
    verdict = Trool.of(oracle.is_trivial(lam))
    dimension = {Trool.TRUE: 1, Trool.FALSE: 0}.get(verdict)
    known = oracle.dimension(lam)
    if known is not None and dimension is not None and known != dimension:
        raise InvariantViolation(f"oracle {oracle.name} reports dimension {known} for a verdict {verdict.value}")
    return H0Verdict(verdict, dimension)


def kw_condition(zip_datum: ZipDatum, lam: Sequence) -> bool:
    lam = _require_XL(zip_datum, lam)
    return all(dot(lam, zip_datum.datum.simple_coroots[i]) < 0 for i in zip_datum.Delta_P)


def is_hasse_type(zip_datum: ZipDatum, group: Optional[WeylGroup] = None) -> bool:
    datum = zip_datum.datum
    perm = datum.sigma_permutation()
    I = set(zip_datum.I)
    if {perm[i] for i in I} != I:
        return False
    if not I:
        return True
    group = group or WeylGroup(datum, zip_datum.roots)
    w0I = group.longest_element(zip_datum.I)
    for i in I:
        alpha = datum.simple_roots[i]
        if int_mat_vec(datum.sigma_char, alpha) != tuple(-a for a in w0I.apply(alpha)):
            return False
    return True


def dual_basis_lambda(zip_datum: ZipDatum) -> list[QVector]:
    """λ_α ∈ XL ⊗ Q with ⟨λ_α, δ_β⟩ = [α = β], normalized orthogonal to XG."""
    XL, XG = zip_datum.XL, zip_datum.XG
    rows = [tuple(dot(b, zip_datum.delta[j]) for b in XL.basis) for j in zip_datum.Delta_P]
    rows += [tuple(dot(b, g) for b in XL.basis) for g in XG.basis]
    out = []
    for i in zip_datum.Delta_P:
        rhs = [Fraction(int(i == j)) for j in zip_datum.Delta_P] + [Fraction(0)] * XG.rank
        coeffs = solve_linear(rows, rhs, ncols=XL.rank)
        if coeffs is None:
            raise InvariantViolation("the pairings with delta are not independent on XL")
        lam = zero(zip_datum.datum.rank)
        for c, b in zip(coeffs, XL.basis):
            lam = add(lam, scale(c, b))
        out.append(lam)
    return out


def hasse_verdict(zip_datum: ZipDatum, lam: Sequence, oracle: Optional[TrivialityOracle] = None,
                  gs=None, pha=None) -> dict:
    """Every section criterion for one weight; gs/pha are the precomputed cones."""
    lam = _require_XL(zip_datum, lam)
    exact = h0_nonzero_exact(zip_datum, lam, oracle)
    report = {
        "lambda": [str(a) for a in lam],
        "mu_ordinary_hasse": has_mu_ordinary_hasse(zip_datum, lam),
        "h0_up_to_power": h0_nonzero_up_to_power(zip_datum, lam),
        "h0_exact": exact.value.value,
        "h0_exact_dimension": exact.dimension,
        "kw_condition": kw_condition(zip_datum, lam),
        "pairings": {f"alpha{i + 1}": str(v) for i, v in delta_pairings(zip_datum, lam).items()},
    }
    if gs is not None:
        report["in_gs_cone"] = gs.contains(lam)
    if pha is not None:
        report["in_pha_cone"] = pha.contains(lam)
    return report
