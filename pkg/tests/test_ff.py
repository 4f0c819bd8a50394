import pytest

from algebra.ff import (
    FFElem,
    common_field,
    ff_arith,
    ff_embed,
    ff_frobenius,
    ff_make,
    ff_primitive,
    multiplicative_order,
)
from utils.errors import InputError


def assert_input_error(exc_info, code):
    assert exc_info.value.code == code
    assert exc_info.value.exit_code == 1


def test_f4_generator_satisfies_its_modulus(f4):
    g = f4.gen()
    assert g * g == g + 1
    assert str(g * g) == "g+1"


def test_prime_field_arithmetic(f3):
    two = f3.from_int(2)
    assert two + two == f3.from_int(1)
    assert two * two == f3.one()
    assert two.inverse() == two
    assert -two == f3.one()
    assert (f3.one() - two) == two


def test_ff_arith_dispatch(f4):
    g = f4.gen()
    assert ff_arith(g, g, "add") == f4.zero()
    assert ff_arith(g, g, "mul") == g + 1
    assert ff_arith(g, None, "inv") * g == f4.one()
    assert ff_arith(g, 3, "pow") == f4.one()
    with pytest.raises(InputError) as exc_info:
        ff_arith(g, g, "div")
    assert_input_error(exc_info, "unknown_op")


def test_every_nonzero_element_has_an_inverse():
    for p, n in [(2, 3), (3, 2), (5, 1)]:
        F = ff_make(p, n)
        for x in F.elements():
            if not x.is_zero:
                assert x * x.inverse() == F.one()


def test_zero_has_no_inverse(f4):
    with pytest.raises(InputError) as exc_info:
        f4.zero().inverse()
    assert_input_error(exc_info, "zero_inverse")


def test_frobenius_is_additive_and_has_period_n():
    F = ff_make(3, 2)
    for x in F.elements():
        for y in F.elements():
            assert ff_frobenius(x + y) == ff_frobenius(x) + ff_frobenius(y)
        assert ff_frobenius(x, 2) == x
        assert x.frobenius() == x ** 3


def test_frobenius_rejects_negative_iterations(f4):
    with pytest.raises(InputError):
        ff_frobenius(f4.gen(), -1)


def test_primitive_element_has_full_order():
    for p, n in [(2, 1), (2, 2), (2, 4), (3, 2), (5, 1), (7, 1)]:
        F = ff_make(p, n)
        assert multiplicative_order(ff_primitive(F)) == F.order - 1


def test_primitive_of_f4_is_g(f4):
    assert ff_primitive(f4) == f4.gen()


def test_non_prime_characteristic_is_rejected():
    with pytest.raises(InputError) as exc_info:
        ff_make(4, 1)
    assert_input_error(exc_info, "non_prime_characteristic")
    with pytest.raises(InputError):
        ff_make(2, 0)


def test_mixed_fields_do_not_combine(f2, f4):
    with pytest.raises(InputError) as exc_info:
        f2.one() + f4.one()
    assert_input_error(exc_info, "field_mismatch")


def test_embedding_is_a_ring_homomorphism(f4):
    F16 = ff_make(2, 4)
    for x in f4.elements():
        for y in f4.elements():
            ex, ey = ff_embed(x, f4, F16), ff_embed(y, f4, F16)
            assert ff_embed(x * y, f4, F16) == ex * ey
            assert ff_embed(x + y, f4, F16) == ex + ey


def test_embedding_into_an_unrelated_degree_fails(f4):
    with pytest.raises(InputError) as exc_info:
        ff_embed(f4.gen(), f4, ff_make(2, 3))
    assert_input_error(exc_info, "not_embeddable")


def test_common_field_takes_the_lcm_degree(f4):
    assert common_field(f4, ff_make(2, 3)).n == 6
    assert common_field(f4, ff_make(2, 4)).n == 4
    assert common_field(ff_make(2, 1), f4) == f4


def test_elem_validates_coefficients(f4):
    assert f4.elem([1, 1]) == FFElem(f4, 3)
    with pytest.raises(InputError):
        f4.elem([2, 0])
    with pytest.raises(InputError):
        f4.elem([1])
