import random
from fractions import Fraction

import pytest

from algebra.btgroup import (
    BTDesc,
    ElementaryBT,
    a_number,
    additive_poly,
    companion_coefficients,
    elementary_dual,
    elementary_hw,
    fiber_heights,
    hasse_invariant,
    is_universal,
    jacobian_rank,
    specialize,
    universal_deformation_hw,
    versality_check,
)
from algebra.ff import ff_make
from algebra.series import INF, SeriesCtx, ls_val
from algebra.semilinear import SigmaMat
from utils.errors import InputError, PrecisionError


def companion(base, coeffs):
    """Companion matrix with last column (-a_1, ..., -a_c)."""
    c = len(coeffs)
    rows = [[base.one() if i == j + 1 else base.zero() for j in range(c - 1)] for i in range(c)]
    for i, a in enumerate(coeffs):
        rows[i].append(-a)
    return BTDesc(c, 1, SigmaMat.from_rows(base, rows))


def codes(M):
    return [[x.code for x in r] for r in M.entries]


def test_elementary_hw_of_slope_one_third(f2):
    B = elementary_hw(ElementaryBT(1, 3), f2)
    assert (B.c, B.d) == (2, 1)
    assert codes(B.hw) == [[0, 0], [1, 0]]
    assert a_number(B) == 1


def test_elementary_hw_extreme_slopes(f2):
    etale = elementary_hw(ElementaryBT(0, 1), f2)
    assert (etale.c, etale.d) == (1, 0)
    assert codes(etale.hw) == [[1]]
    mult = elementary_hw(ElementaryBT(1, 1), f2)
    assert (mult.c, mult.d) == (0, 1)
    assert mult.hw.size == 0


def test_elementary_slopes_must_be_reduced():
    with pytest.raises(InputError) as exc_info:
        ElementaryBT(2, 4)
    assert exc_info.value.code == "bad_slope"
    with pytest.raises(InputError):
        ElementaryBT(3, 2)


def test_elementary_dual_swaps_the_slope():
    assert elementary_dual(ElementaryBT(1, 3)) == ElementaryBT(2, 3)
    assert elementary_dual(ElementaryBT(0, 1)).slope == 1


def test_descriptor_size_must_match_c(f2):
    with pytest.raises(InputError) as exc_info:
        BTDesc(2, 1, SigmaMat.from_rows(f2, [[1]]))
    assert exc_info.value.code == "bad_descriptor"


def test_universal_deformation_coefficients(f2):
    B = universal_deformation_hw(2, f2)
    ring = B.base
    assert companion_coefficients(B.hw) == [ring.var(0), ring.var(1)]
    assert is_universal(B)
    assert jacobian_rank(B) == 2


def test_specialize_to_a_curve(f2, ctx2):
    B = universal_deformation_hw(2, f2)
    t = ctx2.uniformizer()
    S = specialize(B, {"t1": t, "t2": t})
    assert S.base == ctx2
    assert companion_coefficients(S.hw) == [t, t]
    assert hasse_invariant(S) == 1


def test_specialize_requires_every_variable(f2, ctx2):
    B = universal_deformation_hw(2, f2)
    with pytest.raises(InputError) as exc_info:
        specialize(B, {"t1": ctx2.uniformizer()})
    assert exc_info.value.code == "missing_variable"
    assert exc_info.value.details["missing"] == ["t2"]


def test_specialize_rejects_negative_valuation(f2, ctx2):
    B = universal_deformation_hw(1, f2)
    with pytest.raises(InputError) as exc_info:
        specialize(B, [ctx2.monomial(-1)])
    assert exc_info.value.code == "negative_valuation"


def test_specialize_needs_the_multivariate_base(ctx2):
    with pytest.raises(InputError) as exc_info:
        specialize(companion(ctx2, [ctx2.uniformizer()]), [ctx2.uniformizer()])
    assert exc_info.value.code == "unsupported_base"


def test_hasse_invariant_is_the_valuation_of_a1_on_random_companions():
    rng = random.Random(20240611)
    for _ in range(200):
        p = rng.choice([2, 3])
        ctx = SeriesCtx(ff_make(p, 1), 1, 64)
        c = rng.randint(1, 3)
        coeffs = []
        for _ in range(c):
            terms = [(k, rng.randrange(p)) for k in range(rng.randint(0, 6))]
            coeffs.append(ctx.series(terms, exact=True))
        if coeffs[0].is_zero:
            coeffs[0] = ctx.monomial(rng.randint(0, 5))
        assert hasse_invariant(companion(ctx, coeffs)) == ls_val(coeffs[0])


def test_hasse_invariant_over_a_field(f3):
    assert hasse_invariant(companion(f3, [f3.one()])) == 0
    assert hasse_invariant(companion(f3, [f3.zero(), f3.one()])) == INF
    assert hasse_invariant(BTDesc(0, 2, SigmaMat(f3, ()))) == 0


def test_hasse_invariant_of_a_provable_zero(ctx2):
    assert hasse_invariant(companion(ctx2, [ctx2.zero(), ctx2.uniformizer()])) == INF


def test_hasse_invariant_to_precision_is_a_precision_error(ctx2):
    with pytest.raises(PrecisionError) as exc_info:
        hasse_invariant(companion(ctx2, [ctx2.series([], prec=10)]))
    assert exc_info.value.code == "indeterminate_determinant"
    assert exc_info.value.exit_code == 2


def test_hasse_invariant_needs_a_curve(f2):
    with pytest.raises(InputError) as exc_info:
        hasse_invariant(universal_deformation_hw(2, f2))
    assert exc_info.value.code == "unsupported_base"


def test_fiber_heights_of_the_main_instance(ctx2):
    t = ctx2.uniformizer()
    B = companion(ctx2, [t, ctx2.one()])
    closed = fiber_heights(B)
    assert (closed.i0, closed.etale_height, closed.connected_height) == (1, 1, 2)
    assert not closed.connected
    generic = fiber_heights(B, "generic")
    assert (generic.i0, generic.etale_height, generic.connected_height) == (0, 2, 1)


def test_fiber_heights_of_a_connected_fiber(ctx2):
    t = ctx2.uniformizer()
    B = companion(ctx2, [t, t, t])
    closed = fiber_heights(B)
    assert closed.connected
    assert closed.as_dict() == {"i0": 3, "etale_height": 0, "connected_height": 4, "connected": True}
    assert a_number(B) == 1


def test_fiber_heights_at_points_of_the_universal_base(f2):
    B = universal_deformation_hw(2, f2)
    assert fiber_heights(B, [1, 0]).i0 == 0
    assert fiber_heights(B, [0, 1]).i0 == 1
    assert fiber_heights(B).connected


def test_fiber_heights_through_a_cyclic_vector(f2):
    B = BTDesc(2, 1, SigmaMat.from_rows(f2, [[1, 0], [0, 1]]))
    heights = fiber_heights(B)
    assert heights.i0 == 0
    assert heights.etale_height == 2


def test_fiber_heights_without_a_cyclic_vector(f2):
    B = BTDesc(2, 1, SigmaMat.from_rows(f2, [[0, 0], [0, 0]]))
    with pytest.raises(InputError) as exc_info:
        fiber_heights(B)
    assert exc_info.value.code == "not_hw_cyclic"
    assert exc_info.value.details["status"] == "absent"


def test_generic_fiber_needs_a_companion(ctx2):
    B = BTDesc(2, 1, SigmaMat.from_rows(ctx2, [[1, 0], [0, 1]]))
    with pytest.raises(InputError) as exc_info:
        fiber_heights(B, "generic")
    assert exc_info.value.code == "not_companion"


def test_generic_fiber_with_unknown_coefficient(ctx2):
    B = companion(ctx2, [ctx2.series([], prec=10), ctx2.one()])
    with pytest.raises(PrecisionError) as exc_info:
        fiber_heights(B, "generic")
    assert exc_info.value.code == "indeterminate_fiber"


def test_fiber_heights_of_an_etale_free_descriptor(f2):
    heights = fiber_heights(BTDesc(0, 3, SigmaMat(f2, ())))
    assert heights.as_dict() == {"i0": 0, "etale_height": 0, "connected_height": 3, "connected": True}


def test_additive_poly_of_a_companion(ctx2):
    t = ctx2.uniformizer()
    P = additive_poly(companion(ctx2, [t, ctx2.one()]))
    assert P.c == 2 and P.degree == 4
    assert str(P) == "X^4 + X^2 + (t)*X"


def test_additive_poly_needs_a_companion(ctx2):
    with pytest.raises(InputError) as exc_info:
        additive_poly(BTDesc(2, 1, SigmaMat.from_rows(ctx2, [[1, 1], [0, 1]])))
    assert exc_info.value.code == "not_companion"


def test_degenerate_deformation_is_not_versal(f2):
    B = universal_deformation_hw(2, f2)
    ring = B.base
    t1 = ring.var(0)
    rows = [[ring.zero(), -t1], [ring.one(), -t1]]
    D = BTDesc(2, 1, SigmaMat.from_rows(ring, rows))
    assert jacobian_rank(D) == 1
    assert not versality_check(D)
    assert not is_universal(D)


def test_versality_needs_the_multivariate_base(ctx2):
    with pytest.raises(InputError) as exc_info:
        versality_check(companion(ctx2, [ctx2.uniformizer()]))
    assert exc_info.value.code == "unsupported_base"


def test_slope_of_elementary_group():
    assert ElementaryBT(1, 3).slope == Fraction(1, 3)


def test_specializing_along_one_axis_of_the_universal_family(f2, ctx2):
    B = universal_deformation_hw(3, f2)
    S = specialize(B, {"t1": ctx2.uniformizer(), "t2": ctx2.zero(), "t3": ctx2.zero()})
    assert hasse_invariant(S) == 1
    assert fiber_heights(S).connected
