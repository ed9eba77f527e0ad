from fractions import Fraction

import pytest

from root_datum import BasedRootDatum, gl_datum
from utils import ResourceLimitError, ZipInputError
from zip_datum import build_zip_datum, d_alpha, delta_alpha, in_XL, m_alpha, picard_rank, wp_star


def test_gl3_split_levi_type(bundled):
    zip_datum, _ = bundled("gl3_split")
    assert zip_datum.I == (0,)
    assert zip_datum.Delta_P == (1,)
    assert d_alpha(zip_datum, "alpha2") == 1
    assert m_alpha(zip_datum, 1) == 1
    assert delta_alpha(zip_datum, "alpha2") == (0, Fraction(-1, 2), Fraction(1, 2))
    assert picard_rank(zip_datum) == 1
    assert zip_datum.to_json()["delta"] == {"alpha2": ["0", "-1/2", "1/2"]}


def test_u3_inert_orbit_and_m(bundled):
    zip_datum, _ = bundled("u3_inert")
    assert zip_datum.d == {1: 2}
    assert zip_datum.to_json()["m"] == {"alpha2": 2}
    assert delta_alpha(zip_datum, "alpha2") == (Fraction(-3, 8), Fraction(1, 4), Fraction(1, 8))


def test_sl2_weil3_has_two_parabolic_roots(bundled):
    zip_datum, _ = bundled("sl2_weil3")
    assert zip_datum.I == (2,)
    assert zip_datum.Delta_P == (0, 1)
    assert zip_datum.d == {0: 3, 1: 3}
    assert zip_datum.m == {0: 2, 1: 1}
    assert picard_rank(zip_datum) == 2


def test_sl2_weil2_and_c2(bundled):
    weil2, _ = bundled("sl2_weil2")
    assert weil2.m == {0: 2}
    c2, _ = bundled("c2_split")
    assert c2.I == (0,)
    assert c2.Delta_P == (1,)


@pytest.mark.parametrize("name", ["gl3_split", "u3_inert", "sl2_weil2", "sl2_weil3", "c2_split"])
def test_delta_inverts_the_lang_map(bundled, name):
    zip_datum, _ = bundled(name)
    for i in zip_datum.Delta_P:
        assert wp_star(zip_datum.datum, zip_datum.delta[i]) == zip_datum.datum.simple_coroots[i]


def test_in_XL(bundled):
    zip_datum, _ = bundled("gl3_split")
    assert in_XL(zip_datum, (2, 2, 5))
    assert not in_XL(zip_datum, (1, 0, 0))
    assert not in_XL(zip_datum, (1, 1))


def test_parabolic_helpers_reject_levi_roots(bundled):
    zip_datum, _ = bundled("gl3_split")
    with pytest.raises(ZipInputError, match="not in Delta_P"):
        d_alpha(zip_datum, "alpha1")
    with pytest.raises(ZipInputError):
        m_alpha(zip_datum, "beta2")


def test_mu_must_be_dominant():
    with pytest.raises(ZipInputError, match="negatively"):
        build_zip_datum(gl_datum(3, 3), (0, 1, 1))


def test_limit_is_forwarded_to_root_enumeration():
    with pytest.raises(ResourceLimitError):
        build_zip_datum(gl_datum(3, 3), (1, 1, 0), limit=2)


def test_delta_in_a_non_orthonormal_basis():
    # U(3) at p = 3 after the change of basis g = [[1,1,0],[0,1,0],[0,0,1]] on X*(T):
    # roots g·α, coroots g⁻ᵀ·α∨, sigma g·σ·g⁻¹ (no longer a signed permutation), mu g⁻ᵀ·mu
    datum = BasedRootDatum(3, 3, ((0, -1, 0), (1, 1, -1)), ((1, -2, 0), (0, 1, -1)),
                           ((0, -1, -1), (0, -1, 0), (-1, 1, 0)))
    zip_datum = build_zip_datum(datum, (1, 0, 0))
    assert zip_datum.I == (0,)
    assert zip_datum.d == {1: 2}
    assert zip_datum.m == {1: 2}
    assert delta_alpha(zip_datum, "alpha2") == (Fraction(-3, 8), Fraction(5, 8), Fraction(1, 8))
    assert wp_star(datum, zip_datum.delta[1]) == datum.simple_coroots[1]
