from fractions import Fraction

import pytest

from u3_example import (INERT, SPLIT, F_lambda, U3Weight, box_points, combine, czip_scan, czip_u3_contains, default_box,
                        decompose_generators, det_shift, dim_h0_u3, ha1, ha2, ha_mu, lambda_det, monoid_points,
                        qualifying_indices, saturation_multiplier, split_correspondence, split_h0_vanishes)
from utils import ZipInputError

import _test_helpers as helpers

PRIMES = [2, 3, 5, 7]


@pytest.mark.parametrize("p", PRIMES)
def test_generators_have_one_dimensional_sections(p):
    assert qualifying_indices(ha1(p), p) == [0]
    assert qualifying_indices(ha2(p), p) == [p]
    assert qualifying_indices(ha_mu(p), p) == [0]
    assert dim_h0_u3(lambda_det(p), p) == 1
    assert dim_h0_u3(tuple(-a for a in lambda_det(p)), p) == 1


@pytest.mark.parametrize("p", PRIMES)
def test_F_of_the_mu_ordinary_weight(p):
    assert F_lambda(ha_mu(p), p) == Fraction(-p * (p + 1) * (p - 1), p * p - p + 1)
    assert F_lambda(ha1(p), p) == 0
    assert F_lambda(ha2(p), p) == p


def test_sections_vanish_on_a_non_divisible_weight():
    assert dim_h0_u3((3, 0, 2), 2) == 0
    assert dim_h0_u3((0, 0, 1), 3) == 0
    assert qualifying_indices((0, 1, 0), 3) == []


def test_sections_of_a_multiple_of_ha2():
    # 3·ha2 at p = 2: only i = 6 clears both the congruences and F(λ) = 6
    assert qualifying_indices((9, 3, 6), 2) == [6]
    assert decompose_generators((9, 3, 6), 2, 6).coefficients() == (0, 3, 0, 0)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_decompositions(p):
    assert decompose_generators(ha_mu(p), p, 0).coefficients() == (0, 0, 1, 0)
    assert decompose_generators(ha1(p), p, 0).coefficients() == (1, 0, 0, 0)
    lam = combine((1, 1, 0, 1), p)
    assert qualifying_indices(lam, p) == [p]
    out = decompose_generators(lam, p, p)
    assert out.coefficients() == (1, 1, 0, 1)
    assert out.nu == U3Weight(lam, p).nu(p)
    assert combine(out.coefficients(), p) == lam


def test_decompose_rejects_a_non_qualifying_index():
    with pytest.raises(ZipInputError, match="does not satisfy"):
        decompose_generators(ha_mu(3), 3, 1)


def test_u3_weight_validation():
    with pytest.raises(ZipInputError, match="prime"):
        U3Weight((1, 0, 0), 4)
    with pytest.raises(ZipInputError, match="triple"):
        U3Weight((1, 0), 3)
    weight = U3Weight((3, 1, 0), 3)
    assert weight.is_levi_dominant
    assert weight.nu(2) == (1, 3, 0)


def test_czip_cone_contains_the_generators():
    for p in PRIMES:
        for g in (ha1(p), ha2(p), ha_mu(p), lambda_det(p)):
            assert czip_u3_contains(g, p)
        assert not czip_u3_contains((0, 1, 0), p)


def test_split_correspondence_and_det_shift():
    assert split_correspondence((3, 1, 0)) == (3, 1)
    with pytest.raises(ZipInputError, match="det_shift"):
        split_correspondence((1, 1, 1))
    assert det_shift((0, 0, 0), 3, SPLIT) == (-2, -2, -2)
    assert det_shift((1, 0, 3), 3, INERT) == (5, 4, 7)
    assert split_h0_vanishes((1, 1, 3), 3)
    assert not split_h0_vanishes((0, 0, 2), 3)
    with pytest.raises(ZipInputError, match="unknown case"):
        lambda_det(3, "ramified")


def test_monoid_points_respects_the_box():
    box = 6
    points = monoid_points(2, box)
    assert (0, 0, 0) in points
    assert ha1(2) in points
    assert all(max(abs(a) for a in x) <= box for x in points)


def test_saturation_multiplier():
    assert saturation_multiplier(3) == 3 * 2 * 16


@pytest.mark.parametrize("p, box", [(2, 6), (3, 4)])
def test_czip_scan_small_box(p, box):
    report = czip_scan(p, box)
    expected = {"double_inclusion": True, "decomposition_ok": True, "saturation_ok": True,
                "sections_in_czip": True, "ok": True, "points": (2 * box + 1) ** 3}
    assert helpers.compare_report(f"czip scan p={p} box={box}", expected, report)
    assert report["sections"] == report["monoid"]


@pytest.mark.slow
@pytest.mark.parametrize("p", [2, 3])
def test_czip_scan_default_box(p):
    report = czip_scan(p)
    assert helpers.compare_report(f"czip scan p={p}", {"ok": True}, report)


@pytest.mark.slow
def test_czip_scan_p5():
    report = czip_scan(5, 30)
    assert helpers.compare_report("czip scan p=5", {"ok": True}, report)


def test_czip_scan_rejects_bad_input():
    with pytest.raises(ZipInputError):
        czip_scan(4, 2)
    with pytest.raises(ZipInputError):
        czip_scan(3, -1)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_det_shift_preserves_section_dimensions(p):
    for lam in box_points(p + 1):
        assert dim_h0_u3(det_shift(lam, p), p) == dim_h0_u3(lam, p), lam


@pytest.mark.slow
@pytest.mark.parametrize("p, box", [(2, None), (3, None), (5, 30)])
def test_det_shift_on_the_full_box(p, box):
    box = default_box(p) if box is None else box
    changed = [lam for lam in box_points(box) if dim_h0_u3(det_shift(lam, p), p) != dim_h0_u3(lam, p)]
    assert changed == []
