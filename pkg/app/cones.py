# cones.py
"""Rational polyhedral cones on sublattices of Z^n.

Cones keep ambient coordinates for every output vector and record the
sublattice they live in. Internally all work happens in the coordinates of the
sublattice basis, where the lattice is plain Z^k.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import floor
from typing import Optional, Sequence

from exact_linalg import (IntVector, Lattice, QVector, dot, inverse, kernel_basis, primitive, rank, rref, smith,
                          solve_linear, sub)
from root_datum import int_identity, int_mat_mul, int_mat_vec, product_datum
from utils import CONE_RANK_LIMIT, HILBERT_VOLUME_LIMIT, ResourceLimitError, ZipInputError, get_logger
from weyl import WeylGroup
from zip_datum import ZipDatum, build_zip_datum

logger = get_logger(__name__)


@dataclass(frozen=True)
class RationalCone:
    ambient: Lattice
    halfspaces: tuple[IntVector, ...]
    rays: tuple[IntVector, ...]
    lineality: tuple[IntVector, ...]

    def contains(self, v: Sequence) -> bool:
        return all(dot(f, v) >= 0 for f in self.halfspaces)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def dimension(self) -> int:
        vectors = list(self.rays) + list(self.lineality)
        return rank(vectors, self.ambient.ambient_rank) if vectors else 0

    def to_json(self) -> dict:
        return {
            "ambient": self.ambient.to_json(),
            "halfspaces": [list(f) for f in self.halfspaces],
            "rays": [list(r) for r in self.rays],
            "lineality": [list(l) for l in self.lineality],
        }


# Coordinates -----------------------------------------------------------------


def _form_to_coords(ambient: Lattice, form: Sequence) -> QVector:
    return tuple(dot(b, form) for b in ambient.basis)


def _vector_to_coords(ambient: Lattice, v: Sequence) -> QVector:
    coords = ambient.coordinates(v)
    if coords is None:
        raise ZipInputError(f"vector {[str(a) for a in v]} is outside the ambient lattice span")
    return coords


def _coords_to_vector(ambient: Lattice, c: Sequence) -> QVector:
    return ambient.from_coordinates(c)


def _coords_form_to_ambient(ambient: Lattice, g: Sequence) -> IntVector:
    """An ambient form in the span of the basis restricting to g on coordinates."""
    gram = [tuple(Fraction(dot(a, b)) for b in ambient.basis) for a in ambient.basis]
    h = solve_linear(gram, g, ncols=ambient.rank)
    return primitive(_coords_to_vector(ambient, h))


def _dedupe(vectors) -> list:
    seen, out = set(), []
    for v in vectors:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def _int_dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


# Double description ----------------------------------------------------------


def double_description(constraints: Sequence[IntVector], k: int) -> tuple[list[IntVector], list[IntVector]]:
    """Generators (rays, lineality basis) of {x ∈ Q^k : ⟨h, x⟩ ≥ 0 for every constraint h}.

    Halfspaces are added one at a time starting from the whole space; new rays
    are created only from adjacent pairs (combinatorial adjacency test).
    """
    lineality = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    rays: list[IntVector] = []
    processed: list[IntVector] = []
    for h in constraints:
        if not any(h):
            continue
        values = [_int_dot(h, l) for l in lineality]
        pivot = next((i for i, v in enumerate(values) if v != 0), None)
        if pivot is not None:
            l0, v0 = lineality[pivot], values[pivot]
            if v0 < 0:
                l0, v0 = tuple(-a for a in l0), -v0
            lineality = [primitive(tuple(v0 * a - v * b for a, b in zip(l, l0)))
                         for i, (l, v) in enumerate(zip(lineality, values)) if i != pivot]
            rays = [primitive(tuple(v0 * a - _int_dot(h, r) * b for a, b in zip(r, l0))) for r in rays]
            rays.append(primitive(l0))
        else:
            zero_sets = {r: frozenset(j for j, c in enumerate(processed) if _int_dot(c, r) == 0) for r in rays}
            positive = [r for r in rays if _int_dot(h, r) > 0]
            negative = [r for r in rays if _int_dot(h, r) < 0]
            new_rays = [r for r in rays if _int_dot(h, r) >= 0]
            for a in positive:
                for b in negative:
                    common = zero_sets[a] & zero_sets[b]
                    if any(r != a and r != b and common <= zero_sets[r] for r in rays):
                        continue
                    ha, hb = _int_dot(h, a), _int_dot(h, b)
                    new_rays.append(primitive(tuple(ha * y - hb * x for x, y in zip(a, b))))
            rays = _dedupe(new_rays)
        processed.append(h)
    return rays, lineality


# Construction ---------------------------------------------------------------


def _check_rank(ambient: Lattice):
    if ambient.ambient_rank > CONE_RANK_LIMIT:
        raise ResourceLimitError(f"ambient rank {ambient.ambient_rank} exceeds the cone rank limit {CONE_RANK_LIMIT}")


def _canonical_ray(v: Sequence, lineality_rows, pivots) -> IntVector:
    """Reduce v modulo the lineality space so it vanishes on the lineality pivot coordinates."""
    out = tuple(Fraction(a) for a in v)
    for row, piv in zip(lineality_rows, pivots):
        c = out[piv]
        if c:
            out = sub(out, tuple(c * a for a in row))
    return primitive(out)


def _lineality_echelon(lineality: Sequence[IntVector], n: int):
    """Echelon form of the lineality space with pivots taken from the last coordinate backwards."""
    if not lineality:
        return [], []
    reversed_rows, pivots = rref([tuple(reversed(l)) for l in lineality], n)
    return [tuple(reversed(r)) for r in reversed_rows], [n - 1 - p for p in pivots]


def from_halfspaces(ambient: Lattice, forms: Sequence[Sequence]) -> RationalCone:
    _check_rank(ambient)
    n = ambient.ambient_rank
    halfspaces = _dedupe(primitive(f) for f in forms if any(Fraction(a) != 0 for a in f))
    for f in halfspaces:
        if len(f) != n:
            raise ZipInputError(f"form of length {len(f)} on a rank {n} lattice")
    coords = [primitive(_form_to_coords(ambient, f)) for f in halfspaces]
    rays_c, _ = double_description(coords, ambient.rank)
    lineality = tuple(primitive(_coords_to_vector(ambient, c)) for c in kernel_basis(coords, ambient.rank))
    rows, pivots = _lineality_echelon(lineality, n)
    rays = sorted(_dedupe(_canonical_ray(_coords_to_vector(ambient, r), rows, pivots) for r in rays_c))
    return RationalCone(ambient, tuple(halfspaces), tuple(rays), lineality)


def from_rays(ambient: Lattice, generators: Sequence[Sequence]) -> RationalCone:
    _check_rank(ambient)
    k = ambient.rank
    gen_coords = [_vector_to_coords(ambient, g) for g in generators]
    dual_rays, dual_lineality = double_description([primitive(c) for c in gen_coords if any(c)], k)
    coord_forms = list(dual_rays) + list(dual_lineality) + [tuple(-a for a in l) for l in dual_lineality]
    halfspaces = tuple(sorted(_dedupe(primitive(_coords_form_to_ambient(ambient, g)) for g in coord_forms)))
    lineality_c = kernel_basis(coord_forms, k)
    lineality = tuple(primitive(_coords_to_vector(ambient, c)) for c in lineality_c)
    target = k - len(lineality_c) - 1
    # one generator per extremal face; the smallest one when several land on the same face
    by_face: dict[frozenset, IntVector] = {}
    for g, c in zip(generators, gen_coords):
        tight = frozenset(i for i, f in enumerate(coord_forms) if dot(f, c) == 0)
        if len(tight) == len(coord_forms):
            continue  # inside the lineality space
        tight_forms = [coord_forms[i] for i in sorted(tight)]
        if rank(tight_forms, k) != target:
            continue
        ray = primitive(g)
        if tight not in by_face or ray < by_face[tight]:
            by_face[tight] = ray
    return RationalCone(ambient, halfspaces, tuple(sorted(by_face.values())), lineality)


# Hilbert bases ---------------------------------------------------------------


def _facets(rays: Sequence[IntVector], d: int) -> list[IntVector]:
    facet_forms, _ = double_description(list(rays), d)
    return facet_forms


def _cover_by_simplices(rays: list[IntVector], d: int, dim: int) -> list[list[IntVector]]:
    """Simplicial cones covering cone(rays); rays span a space of dimension dim inside Q^d."""
    if len(rays) == dim:
        return [rays]
    apex = rays[0]
    out = []
    for f in _facets(rays, d):
        if _int_dot(f, apex) <= 0:
            continue
        face = [r for r in rays if _int_dot(f, r) == 0]
        for simplex in _cover_by_simplices(face, d, dim - 1):
            out.append([apex] + simplex)
    return out


def _parallelepiped_points(simplex: list[IntVector]) -> list[IntVector]:
    """Lattice points of the half-open parallelepiped spanned by the rows of a nonsingular integer matrix."""
    d = len(simplex)
    diagonal, _, t = smith(simplex)
    t_inv = inverse(t)
    v_inv = inverse(simplex)
    points = []
    for y in product(*(range(abs(x)) for x in diagonal)):
        x = [sum(Fraction(y[i]) * t_inv[i][j] for i in range(d)) for j in range(d)]
        coeffs = [sum(x[i] * v_inv[i][j] for i in range(d)) for j in range(d)]
        fractional = [c - floor(c) for c in coeffs]
        point = tuple(int(sum(fractional[j] * simplex[j][col] for j in range(d))) for col in range(d))
        points.append(point)
    return points


def _pointed_hilbert_basis(rays: list[IntVector], forms: list[QVector], e: int, limit: int) -> list[IntVector]:
    rays = _dedupe(primitive(r) for r in rays if any(r))
    if not rays:
        return []
    annihilator = kernel_basis(rays, e)
    span = Lattice.kernel_of(annihilator, e) if annihilator else Lattice.full(e)
    d = span.rank
    local_rays = [tuple(int(a) for a in span.coordinates(r)) for r in rays]
    local_forms = [tuple(dot(b, f) for b in span.basis) for f in forms]

    candidates = set(local_rays)
    volume = 0
    for simplex in _cover_by_simplices(local_rays, d, d):
        volume += abs(_simplex_volume(simplex))
        if volume > limit:
            raise ResourceLimitError(f"parallelepiped volume exceeds the Hilbert basis limit of {limit}")
        candidates.update(p for p in _parallelepiped_points(simplex) if any(p))

    def inside(v):
        return all(dot(f, v) >= 0 for f in local_forms)

    ordered = sorted(candidates)
    basis = [x for x in ordered
             if not any(c != x and inside(tuple(a - b for a, b in zip(x, c))) for c in ordered)]
    return [tuple(int(a) for a in span.from_coordinates(x)) for x in basis]


def _simplex_volume(simplex: list[IntVector]) -> int:
    diagonal, _, _ = smith(simplex)
    out = 1
    for x in diagonal:
        out *= x
    return out


def _pointed_part(cone: RationalCone, limit: Optional[int] = None) -> list[IntVector]:
    """Hilbert basis of the pointed quotient, lifted to ambient vectors with no lineality component."""
    limit = HILBERT_VOLUME_LIMIT if limit is None else limit
    ambient = cone.ambient
    k = ambient.rank
    forms_c = [_form_to_coords(ambient, f) for f in cone.halfspaces]
    rays_c = [primitive(_vector_to_coords(ambient, r)) for r in cone.rays]
    lineality_c = kernel_basis(forms_c, k)
    ell = len(lineality_c)
    if ell:
        _, _, t = smith(lineality_c)
        t_inv = [tuple(int(a) for a in row) for row in inverse(t)]
        quotient_rays = [primitive(tuple(sum(r[i] * t[i][j] for i in range(k)) for j in range(ell, k)))
                         for r in rays_c]
        quotient_forms = [tuple(sum(t_inv[i][j] * Fraction(g[j]) for j in range(k)) for i in range(ell, k))
                          for g in forms_c]
        local = _pointed_hilbert_basis(quotient_rays, quotient_forms, k - ell, limit)
        lifted = [tuple(sum(((0,) * ell + y)[i] * t_inv[i][j] for i in range(k)) for j in range(k)) for y in local]
    else:
        lifted = _pointed_hilbert_basis(rays_c, forms_c, k, limit)
    logger.debug("pointed Hilbert basis with %d elements (lineality rank %d)", len(lifted), ell)
    return [tuple(int(a) for a in _coords_to_vector(ambient, c)) for c in lifted]


def hilbert_basis(cone: RationalCone, limit: Optional[int] = None) -> list[IntVector]:
    """Minimal generators of cone ∩ ambient lattice; lineality contributes ± its basis."""
    out = _pointed_part(cone, limit)
    for l in cone.lineality:
        out.append(tuple(l))
        out.append(tuple(-a for a in l))
    return sorted(out)


def is_free_monoid(cone: RationalCone, limit: Optional[int] = None) -> bool:
    """True when cone ∩ lattice is a free monoid times the lineality group, i.e. its semigroup ring is polynomial
    in the pointed generators."""
    vectors = _pointed_part(cone, limit) + list(cone.lineality)
    return not vectors or rank(vectors, cone.ambient.ambient_rank) == len(vectors)


# Cones of a zip datum ----------------------------------------------------------


def eff_cone(zip_datum: ZipDatum) -> RationalCone:
    return from_halfspaces(zip_datum.XL, [zip_datum.delta[i] for i in zip_datum.Delta_P])


def dominant_cone(datum) -> RationalCone:
    return from_halfspaces(Lattice.full(datum.rank), list(datum.simple_coroots))


def gs_cone(zip_datum: ZipDatum) -> RationalCone:
    roots = zip_datum.roots
    levi = set(roots.levi_positive_roots(zip_datum.I))
    forms = [roots.coroot_of[b] for b in roots.positive_roots if b in levi]
    forms += [tuple(-a for a in roots.coroot_of[b]) for b in roots.positive_roots if b not in levi]
    return from_halfspaces(Lattice.full(zip_datum.datum.rank), forms)


def h_matrix(zip_datum: ZipDatum, group: Optional[WeylGroup] = None):
    """Matrix of h(λ) = λ − p·w_{0,I}(σ⁻¹λ) on X*(T)."""
    datum = zip_datum.datum
    group = group or WeylGroup(datum, zip_datum.roots)
    n = datum.rank
    if not n:
        return ()
    sigma_inv = tuple(tuple(int(a) for a in row) for row in inverse(datum.sigma_char))
    w_sigma = int_mat_mul(group.longest_element(zip_datum.I).action, sigma_inv)
    ident = int_identity(n)
    return tuple(tuple(ident[i][j] - datum.p * w_sigma[i][j] for j in range(n)) for i in range(n))


def pha_generators(zip_datum: ZipDatum, group: Optional[WeylGroup] = None) -> list[IntVector]:
    """h applied to the rays and ± lineality of the dominant cone, unnormalized."""
    h = h_matrix(zip_datum, group)
    dominant = dominant_cone(zip_datum.datum)
    generators = list(dominant.rays)
    for l in dominant.lineality:
        generators += [l, tuple(-a for a in l)]
    return [tuple(int_mat_vec(h, g)) for g in generators]


def pha_cone(zip_datum: ZipDatum, group: Optional[WeylGroup] = None) -> RationalCone:
    return from_rays(Lattice.full(zip_datum.datum.rank), pha_generators(zip_datum, group))


def product_zip(first: ZipDatum, second: ZipDatum) -> ZipDatum:
    datum = product_datum(first.datum, second.datum)
    return build_zip_datum(datum, tuple(first.mu) + tuple(second.mu))


def contains(cone: RationalCone, v: Sequence) -> bool:
    return cone.contains(v)
