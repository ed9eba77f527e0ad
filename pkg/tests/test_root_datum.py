import pytest

from root_datum import (BasedRootDatum, datum_from_json, frobenius_char, frobenius_cochar, generate_roots, gl_datum,
                        product_datum, sigma_power, sl2_datum, unitary_datum, validate, weil_restriction)
from utils import ResourceLimitError, ZipInputError


def test_gl3_roots():
    roots = generate_roots(gl_datum(3, 3))
    assert roots.positive_roots == ((1, -1, 0), (0, 1, -1), (1, 0, -1))
    assert len(roots.all_roots) == 6
    assert roots.coroot_of[(1, 0, -1)] == (1, 0, -1)
    assert roots.simple_coordinates[(1, 0, -1)] == (1, 1)
    assert roots.levi_positive_roots([0]) == ((1, -1, 0),)


def test_c2_roots_have_long_and_short_coroots():
    datum = BasedRootDatum(3, 2, ((1, -1), (0, 2)), ((1, -1), (0, 1)), ((1, 0), (0, 1)))
    validate(datum)
    roots = generate_roots(datum)
    assert len(roots.positive_roots) == 4
    assert roots.coroot_of[(2, 0)] == (1, 0)
    assert roots.coroot_of[(1, 1)] == (1, 1)


def test_unitary_frobenius_swaps_simple_roots():
    datum = unitary_datum(3, 5)
    validate(datum)
    assert datum.sigma_permutation() == (1, 0)
    assert frobenius_char(datum, (1, 0, 0)) == (0, 0, -1)
    # the pairing is invariant under the simultaneous action
    lam, delta = (3, 1, -2), (1, 0, -1)
    image_lam = frobenius_char(datum, lam)
    image_delta = frobenius_cochar(datum, delta)
    assert sum(a * b for a, b in zip(image_lam, image_delta)) == sum(a * b for a, b in zip(lam, delta))


def test_sigma_power_inverse():
    datum = weil_restriction(sl2_datum(3), 3)
    assert sigma_power(datum, 3) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert sigma_power(datum, -1) == sigma_power(datum, 2)


def test_weil_restriction_cycles_blocks():
    datum = weil_restriction(sl2_datum(2), 2)
    validate(datum)
    assert datum.simple_roots == ((2, 0), (0, 2))
    assert datum.sigma_permutation() == (1, 0)


def test_product_datum_is_block_diagonal():
    datum = product_datum(gl_datum(2, 3), sl2_datum(3))
    validate(datum)
    assert datum.rank == 3
    assert datum.simple_roots == ((1, -1, 0), (0, 0, 2))
    with pytest.raises(ZipInputError):
        product_datum(gl_datum(2, 3), sl2_datum(5))


@pytest.mark.parametrize("change, message", [
    ({"p": 4}, "prime"),
    ({"simple_coroots": [[1, -1, 0], [0, 2, -2]]}, "Cartan diagonal"),
    ({"sigma_char": [[2, 0, 0], [0, 1, 0], [0, 0, 1]]}, "not invertible"),
    ({"sigma_char": [[0, 1, 0], [1, 0, 0], [0, 0, 1]]}, "permute"),
])
def test_validate_reports_the_offending_entry(change, message):
    doc = {"p": 3, "rank": 3, "simple_roots": [[1, -1, 0], [0, 1, -1]],
           "simple_coroots": [[1, -1, 0], [0, 1, -1]], "sigma_char": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
           "mu": [1, 1, 0]}
    doc.update(change)
    with pytest.raises(ZipInputError, match=message):
        datum_from_json(doc)


def test_datum_from_json_missing_fields():
    with pytest.raises(ZipInputError, match="mu"):
        datum_from_json({"p": 3, "rank": 1, "simple_roots": [[2]], "simple_coroots": [[1]], "sigma_char": [[1]]})


def test_root_enumeration_limit():
    with pytest.raises(ResourceLimitError):
        generate_roots(gl_datum(4, 3), limit=3)
