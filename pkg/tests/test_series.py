from fractions import Fraction

import pytest

from algebra.ff import ff_embed, ff_make
from algebra.series import (
    INF,
    SeriesCtx,
    ZeroToPrecision,
    hensel_lift,
    ls_agree,
    ls_arith,
    ls_coefficient,
    ls_extend,
    ls_frobenius,
    ls_pow,
    ls_scale_uniformizer,
    ls_val,
    poly_eval,
)
from utils.errors import InputError, PrecisionError


def test_valuation_of_polynomials(ctx2, f2):
    assert ls_val(ctx2.series([(2, 1), (3, 1)], exact=True)) == 2
    ramified = SeriesCtx(f2, 3, 30)
    assert ls_val(ramified.monomial(5)) == Fraction(5, 3)


def test_valuation_of_zero(ctx2):
    assert ls_val(ctx2.zero()) == INF
    unknown = ctx2.series([], prec=10)
    assert ls_val(unknown) == ZeroToPrecision(Fraction(10))
    assert unknown.is_zero_to_prec and not unknown.is_exact_zero


def test_inverse_of_one_plus_t_in_char_two(ctx2):
    x = ctx2.series([(0, 1), (1, 1)], exact=True)
    inv = ls_arith(x, None, "inv")
    assert not inv.exact
    assert inv.prec == ctx2.prec
    assert inv.terms == tuple((k, 1) for k in range(ctx2.prec))
    assert (x * inv - 1).is_zero_to_prec


def test_geometric_inverse_in_char_three(ctx3):
    x = ctx3.series([(0, 1), (1, 1)], exact=True)
    inv = x.inverse()
    assert [c.code for c in inv.coeffs[:4]] == [1, 2, 1, 2]
    prod = x * inv
    assert prod.terms == ((0, 1),)
    assert prod.prec == ctx3.prec


def test_addition_cancels_in_char_two(ctx2):
    a = ctx2.series([(1, 1), (2, 1)], exact=True)
    b = ctx2.uniformizer()
    assert ls_arith(a, b, "add") == ctx2.monomial(2)


def test_inverting_zero_to_precision_is_a_precision_error(ctx2):
    with pytest.raises(PrecisionError) as exc_info:
        ctx2.series([], prec=5).inverse()
    assert exc_info.value.exit_code == 2
    with pytest.raises(InputError):
        ctx2.zero().inverse()


def test_frobenius_squares_in_char_two(ctx2, ctx4, f4):
    x = ctx2.series([(0, 1), (1, 1), (3, 1)], exact=True)
    assert ls_frobenius(x) == ctx2.series([(0, 1), (2, 1), (6, 1)], exact=True)
    g = f4.gen()
    assert ls_frobenius(ctx4.monomial(1, g)) == ctx4.monomial(2, g + 1)


def test_frobenius_on_constants(ctx4, f4):
    for c in f4.elements():
        assert ctx4.constant(c).frobenius() == ctx4.constant(c ** 2)


def test_frobenius_of_inexact_series_scales_precision(ctx2):
    x = ctx2.series([(0, 1)], prec=10)
    assert ls_frobenius(x).prec == 20


def test_extend_preserves_valuation(ctx2, f4):
    t = ctx2.uniformizer()
    u3 = ls_extend(t, 3, f4)
    assert u3.terms == ((3, 1),)
    assert ls_val(u3) == ls_val(t) == 1


def test_extend_embeds_the_residue_field(ctx4, f4):
    F16 = ff_make(2, 4)
    g = f4.gen()
    x = ls_extend(ctx4.monomial(1, g), 1, F16)
    assert x.coefficient(1) == ff_embed(g, f4, F16)


def test_extend_needs_a_multiple_of_e(f2):
    ctx = SeriesCtx(f2, 2, 20)
    with pytest.raises(InputError):
        ls_extend(ctx.uniformizer(), 3, f2)


def test_scale_uniformizer(f4):
    ctx = SeriesCtx(f4, 3, 30)
    g = f4.gen()
    x = ctx.series([(1, 1), (2, 1)], exact=True)
    y = ls_scale_uniformizer(x, g)
    assert y.coefficient(1) == g
    assert y.coefficient(2) == g ** 2
    assert ls_scale_uniformizer(ls_scale_uniformizer(y, g), g) == x


def test_coefficient_beyond_precision(ctx2):
    x = ctx2.series([(0, 1)], prec=4)
    assert ls_coefficient(x, 3).is_zero
    with pytest.raises(PrecisionError):
        ls_coefficient(x, 4)


def test_agree_needs_known_terms(ctx2):
    a = ctx2.series([(0, 1), (5, 1)], prec=8)
    b = ctx2.series([(0, 1)], exact=True)
    assert ls_agree(a, b, 5)
    assert not ls_agree(a, b, 6)
    with pytest.raises(PrecisionError):
        ls_agree(a, b, 9)


def test_pow_matches_repeated_products(ctx3):
    x = ctx3.series([(0, 1), (1, 2)], exact=True)
    assert ls_pow(x, 3) == x * x * x
    assert (ls_pow(x, -1) * x - 1).is_zero


def test_hensel_lift_artin_schreier(ctx2):
    f = [ctx2.uniformizer(), ctx2.one(), ctx2.one()]
    root = hensel_lift(f, ctx2.zero())
    assert [root.coefficient(k).code for k in range(5)] == [0, 1, 1, 0, 1]
    assert poly_eval(f, root).is_zero


def test_hensel_lift_fixed_point_is_exact(ctx3):
    f = [ctx3.constant(-1), ctx3.zero(), ctx3.one()]
    assert hensel_lift(f, ctx3.one()) == ctx3.one()


def test_hensel_lift_unit_root_in_char_two(ctx2):
    f = [ctx2.zero(), ctx2.one(), ctx2.series([(0, 1), (1, 1)], exact=True)]
    root = hensel_lift(f, ctx2.one())
    assert poly_eval(f, root).is_zero
    assert all(c.code == 1 for c in root.coeffs[:10])


def test_hensel_precondition(ctx2):
    f = [ctx2.one(), ctx2.zero(), ctx2.one()]
    with pytest.raises(InputError) as exc_info:
        hensel_lift(f, ctx2.zero())
    assert exc_info.value.code == "hensel_precondition"


def test_mixing_contexts_is_rejected(ctx2, f2):
    other = SeriesCtx(f2, 2, 64)
    with pytest.raises(InputError) as exc_info:
        ctx2.one() + other.one()
    assert exc_info.value.code == "ctx_mismatch"


def test_exact_products_stay_exact(ctx2):
    x = ctx2.series([(0, 1), (1, 1)], exact=True)
    assert (x * x).exact
    assert (x * x) == ctx2.series([(0, 1), (2, 1)], exact=True)


def test_monomials_keep_extension_field_residues(ctx4, f4):
    g = f4.gen()
    assert ctx4.monomial(1, g).terms == ((1, g.code),)
    assert ctx4.monomial(1, g + 1).terms == ((1, (g + 1).code),)
    # plain integers are read in the prime field
    assert ctx4.monomial(1, 2).is_exact_zero
    assert ctx4.monomial(1, 3) == ctx4.monomial(1)


def test_inverse_of_a_monomial_beyond_the_precision_is_exact(ctx2, ctx4, f4):
    x = ctx2.monomial(-70)
    inv = x.inverse()
    assert inv.exact
    assert inv.terms == ((70, 1),)
    assert x * inv == ctx2.one()
    g = f4.gen()
    inv4 = ctx4.monomial(-80, g).inverse()
    assert inv4.exact
    assert inv4.terms == ((80, f4.inv(g.code)),)
