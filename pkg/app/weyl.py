# weyl.py
"""Finite Weyl groups as integer matrices on X*(T), Bruhat order, ᴵW and the twisted order."""

from dataclasses import dataclass
from typing import Iterable, Optional

from exact_linalg import inverse
from root_datum import (BasedRootDatum, IntMatrix, RootSystem, _int_matrix, int_identity, int_mat_mul,
                        int_mat_vec)
from utils import ENUMERATION_LIMIT, InvariantViolation, ResourceLimitError, get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class WeylElement:
    action: IntMatrix
    length: int
    reduced_word: tuple[int, ...]
    index: int

    @property
    def name(self) -> str:
        if not self.reduced_word:
            return "e"
        return "".join(f"s{i + 1}" for i in self.reduced_word)

    def apply(self, lam) -> tuple:
        return int_mat_vec(self.action, lam)

    def __str__(self) -> str:
        return self.name


def simple_reflection_matrix(root, coroot) -> IntMatrix:
    n = len(root)
    return tuple(tuple(int(r == c) - root[r] * coroot[c] for c in range(n)) for r in range(n))


class WeylGroup:
    """All elements of W, deduplicated by action and ordered by (length, reduced word)."""

    def __init__(self, datum: BasedRootDatum, roots: RootSystem, limit: Optional[int] = None):
        self.datum = datum
        self.roots = roots
        self.limit = ENUMERATION_LIMIT if limit is None else limit
        self.generators = [simple_reflection_matrix(a, c)
                           for a, c in zip(datum.simple_roots, datum.simple_coroots)]
        self._sigma_inv = _int_matrix(inverse(datum.sigma_char)) if datum.rank else ()
        self.elements = self._enumerate()
        self._by_action = {w.action: w for w in self.elements}
        self._bruhat_cache: dict[tuple[int, int], bool] = {}

    def _enumerate(self) -> list[WeylElement]:
        words = {int_identity(self.datum.rank): ()}
        level = [int_identity(self.datum.rank)]
        length = 0
        while level:
            next_level = []
            for action in sorted(level, key=lambda a: words[a]):
                for i, s in enumerate(self.generators):
                    image = int_mat_mul(s, action)
                    if image in words:
                        continue
                    if len(words) >= self.limit:
                        raise ResourceLimitError(f"Weyl group enumeration exceeded the limit of {self.limit}")
                    words[image] = (i,) + words[action]
                    next_level.append(image)
            length += 1
            level = next_level
            logger.debug("Weyl enumeration: %d elements after length %d", len(words), length)
        ordered = sorted(words.items(), key=lambda item: (len(item[1]), item[1]))
        return [WeylElement(action, len(word), word, k) for k, (action, word) in enumerate(ordered)]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def identity(self) -> WeylElement:
        return self.elements[0]

    def element(self, action: IntMatrix) -> WeylElement:
        try:
            return self._by_action[action]
        except KeyError:
            raise InvariantViolation("matrix is not an element of the enumerated Weyl group")

    def from_word(self, word: Iterable[int]) -> WeylElement:
        action = int_identity(self.datum.rank)
        for i in word:
            action = int_mat_mul(action, self.generators[i])
        return self.element(action)

    def multiply(self, a: WeylElement, b: WeylElement) -> WeylElement:
        return self.element(int_mat_mul(a.action, b.action))

    def inverse(self, w: WeylElement) -> WeylElement:
        return self.from_word(reversed(w.reduced_word))

    def reflect(self, i: int, w: WeylElement) -> WeylElement:
        """s_i · w."""
        return self.element(int_mat_mul(self.generators[i], w.action))

    def sigma(self, w: WeylElement) -> WeylElement:
        """σ(w): the element acting by sigma_char · w · sigma_char⁻¹."""
        if not self.datum.rank:
            return w
        return self.element(int_mat_mul(int_mat_mul(self.datum.sigma_char, w.action), self._sigma_inv))

    def inversion_count(self, w: WeylElement) -> int:
        w_inv = self.inverse(w)
        positive = set(self.roots.positive_roots)
        return sum(1 for beta in positive if tuple(w_inv.apply(beta)) not in positive)

    def parabolic_subgroup(self, indices: Iterable[int]) -> list[WeylElement]:
        allowed = set(indices)
        return [w for w in self.elements if set(w.reduced_word) <= allowed]

    def longest_element(self, indices: Optional[Iterable[int]] = None) -> WeylElement:
        if indices is None:
            return self.elements[-1]
        subgroup = self.parabolic_subgroup(indices)
        top = max(w.length for w in subgroup)
        candidates = [w for w in subgroup if w.length == top]
        if len(candidates) != 1:
            raise InvariantViolation("parabolic subgroup has no unique longest element")
        return candidates[0]

    def minimal_coset_reps(self, indices: Iterable[int]) -> list[WeylElement]:
        """ᴵW: minimal length representatives of the right cosets W_I w."""
        indices = list(indices)
        return [w for w in self.elements
                if all(self.reflect(i, w).length == w.length + 1 for i in indices)]

    def bruhat_leq(self, lower: WeylElement, upper: WeylElement) -> bool:
        key = (lower.index, upper.index)
        cached = self._bruhat_cache.get(key)
        if cached is not None:
            return cached
        if upper.length == 0:
            result = lower.length == 0
        elif lower.length > upper.length:
            result = False
        else:
            i = upper.reduced_word[0]  # left descent of upper
            shifted = self.reflect(i, lower)
            smaller = shifted if shifted.length < lower.length else lower
            result = self.bruhat_leq(smaller, self.reflect(i, upper))
        self._bruhat_cache[key] = result
        return result

    def twisted_leq(self, lower: WeylElement, upper: WeylElement, indices: Iterable[int]) -> bool:
        """lower ≼ upper: w₁·lower·σ(w₁)⁻¹ ≤ upper for some w₁ ∈ W_I.

        Conjugating upper instead is not antisymmetric on ᴵW (split GL_3, I = {α1} already breaks it).
        """
        for w1 in self.parabolic_subgroup(indices):
            conjugate = self.multiply(self.multiply(w1, lower), self.inverse(self.sigma(w1)))
            if self.bruhat_leq(conjugate, upper):
                return True
        return False


@dataclass(frozen=True)
class StrataPoset:
    elements: tuple[tuple[WeylElement, int], ...]
    order: tuple[tuple[bool, ...], ...]
    top: WeylElement
    codim_one: tuple[WeylElement, ...]
    dim_G: int
    dim_P: int

    def covers(self) -> list[tuple[int, int]]:
        """Cover relations (i, j) meaning element i ≺ element j, by transitive reduction."""
        n = len(self.elements)
        strict = [[self.order[i][j] and i != j for j in range(n)] for i in range(n)]
        out = []
        for i in range(n):
            for j in range(n):
                if strict[i][j] and not any(strict[i][k] and strict[k][j] for k in range(n)):
                    out.append((i, j))
        return out

    def to_json(self) -> dict:
        return {
            "elements": [{"name": w.name, "reduced_word": [i + 1 for i in w.reduced_word], "length": w.length,
                          "dim": dim} for w, dim in self.elements],
            "order": [[int(x) for x in row] for row in self.order],
            "top": self.top.name,
            "codim_one": [w.name for w in self.codim_one],
            "dim_G": self.dim_G,
            "dim_P": self.dim_P,
        }

    def to_dot(self) -> str:
        lines = ["digraph strata {", "  rankdir=BT;"]
        for w, dim in self.elements:
            lines.append(f'  "{w.name}" [label="{w.name}\\ndim {dim}"];')
        for i, j in self.covers():
            lines.append(f'  "{self.elements[i][0].name}" -> "{self.elements[j][0].name}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def strata_poset(zip_datum, group: Optional[WeylGroup] = None) -> StrataPoset:
    group = group or WeylGroup(zip_datum.datum, zip_datum.roots)
    I = zip_datum.I
    reps = group.minimal_coset_reps(I)
    n = zip_datum.datum.rank
    n_pos = len(zip_datum.roots.positive_roots)
    n_pos_L = len(zip_datum.roots.levi_positive_roots(I))
    dim_P = n + n_pos + n_pos_L
    dim_G = n + 2 * n_pos
    order = tuple(tuple(group.twisted_leq(a, b, I) for b in reps) for a in reps)
    top = group.multiply(group.longest_element(I), group.longest_element())
    if top not in reps or top.length != max(w.length for w in reps):
        raise InvariantViolation(f"w_0,I w_0 = {top.name} is not the longest element of IW")
    codim_one = []
    for j in zip_datum.Delta_P:
        w = group.multiply(group.multiply(group.longest_element(I), group.from_word([j])), group.longest_element())
        if w not in reps or w.length != top.length - 1:
            raise InvariantViolation(f"w_0,I s_{j + 1} w_0 = {w.name} is not a codimension-one stratum")
        codim_one.append(w)
    return StrataPoset(tuple((w, w.length + dim_P) for w in reps), order, top, tuple(codim_one), dim_G, dim_P)


def z_element(zip_datum, group: Optional[WeylGroup] = None) -> WeylElement:
    """z = σ(w_{0,I})·w₀."""
    group = group or WeylGroup(zip_datum.datum, zip_datum.roots)
    return group.multiply(group.sigma(group.longest_element(zip_datum.I)), group.longest_element())


def enumerate_weyl(datum: BasedRootDatum, roots: RootSystem, limit: Optional[int] = None) -> list[WeylElement]:
    return WeylGroup(datum, roots, limit).elements


def poset_to_json(poset: StrataPoset) -> dict:
    return poset.to_json()


def poset_to_dot(poset: StrataPoset) -> str:
    return poset.to_dot()
