import itertools
from fractions import Fraction

import pytest

from algebra.btgroup import BTDesc, fiber_heights
from algebra.ff import ff_make
from algebra.gltheory import ModMatrix
from algebra.monodromy import (
    AdditivePoly,
    additive_from_dense,
    cartan_check,
    cartan_report,
    igusa_tower,
    monodromy_certificate,
    nonsplit_witness,
    tame_generator_matrix,
    tame_roots,
)
from algebra.npoly import np_root_valuations
from algebra.series import SeriesCtx, ls_val
from algebra.semilinear import SigmaMat
from utils.errors import InputError, PrecisionError


@pytest.fixture(scope="module")
def ctx2_48():
    return SeriesCtx(ff_make(2, 1), 1, 48)


def poly(ctx, *coeffs):
    return AdditivePoly(ctx.p, tuple(ctx.series(c, exact=True) if isinstance(c, list) else c for c in coeffs))


def split_product(ctx):
    """(X^2 + b X) o (X^2 + t^3 X) with b = t^2 + t^4: roots 0, t^3, t, t + t^3."""
    return poly(ctx, [(5, 1), (7, 1)], [(2, 1), (4, 1), (6, 1)])


def tame_corpus(ctx2, ctx3):
    return [
        poly(ctx2, [(1, 1)], [(1, 1)]),
        poly(ctx3, [(1, 1)]),
        poly(ctx2, [(1, 1)]),
        split_product(ctx2),
    ]


@pytest.fixture(scope="module")
def connected_roots(ctx2_48):
    return tame_roots(poly(ctx2_48, [(1, 1)], [(1, 1)]))


def test_connected_instance_has_four_roots_of_valuation_one_third(connected_roots):
    T = connected_roots
    assert len(T.roots) == 4
    assert T.roots[0].is_exact_zero
    assert [ls_val(r) for r in T.nonzero_roots] == [Fraction(1, 3)] * 3
    assert T.ramification == 3 and T.e == 3
    assert T.ctx.residue.n == 2
    # leading residues are the cube roots of unity in F_4, two of them outside F_2
    assert sorted(r.terms[0] for r in T.nonzero_roots) == [(1, 1), (1, 2), (1, 3)]
    assert T.dim == 2
    for r in T.roots:
        assert T.poly.evaluate(r).is_zero


def test_connected_roots_are_additively_closed(connected_roots):
    T = connected_roots
    cut = min(int(min(r.bound, T.ctx.prec)) for r in T.nonzero_roots)
    keys = {tuple((k, c) for k, c in r.terms if k < cut) for r in T.roots}
    for a, b in itertools.product(T.roots, repeat=2):
        s = a + b
        assert tuple((k, c) for k, c in s.terms if k < cut) in keys


def test_connected_generator_is_a_cartan_generator(connected_roots):
    M = tame_generator_matrix(connected_roots)
    assert M.order() == 3
    assert cartan_check(M)
    report = cartan_report(M)
    assert report["span_size"] == 4 and report["closed"] and report["zero_divisor_free"]
    # acts freely on the nonzero roots
    for v in [(1, 0), (0, 1), (1, 1)]:
        image = tuple(sum(M.rows[i][j] * v[j] for j in range(2)) % 2 for i in range(2))
        assert image != v


def test_other_roots_of_unity_give_powers_of_the_generator(connected_roots, ctx3):
    T = connected_roots
    M = tame_generator_matrix(T)
    for k in (1, 2, 3):
        assert tame_generator_matrix(T, T.zeta ** k) == M ** k
    # zeta and zeta^2 generate the same inertia image, so the matrices are conjugate
    gl2 = [ModMatrix.make([[a, b], [c, d]], 2) for a, b, c, d in itertools.product(range(2), repeat=4)]
    gl2 = [U for U in gl2 if U.is_invertible]
    assert any(U @ M == (M ** 2) @ U for U in gl2)
    S = tame_roots(poly(ctx3, [(1, 1)]))
    assert tame_generator_matrix(S, S.zeta ** 2).rows == ((1,),)


def test_generator_rejects_a_zeta_outside_the_roots_of_unity(connected_roots):
    F = connected_roots.ctx.residue
    with pytest.raises(InputError) as exc_info:
        tame_generator_matrix(connected_roots, F.zero())
    assert exc_info.value.code == "bad_zeta"


def test_generator_needs_enough_known_terms(connected_roots):
    with pytest.raises(PrecisionError) as exc_info:
        tame_generator_matrix(connected_roots, match_min_terms=1000)
    assert exc_info.value.code == "match_precision"


def test_artin_schreier_type_root_in_odd_characteristic(ctx3):
    T = tame_roots(poly(ctx3, [(1, 1)]))
    assert len(T.roots) == 3
    assert [ls_val(r) for r in T.nonzero_roots] == [Fraction(1, 2)] * 2
    assert T.ramification == 2
    # -1 is not a square in F_3
    assert T.ctx.residue.n == 2
    M = tame_generator_matrix(T)
    assert M.rows == ((2,),)
    assert M.order() == 2
    assert cartan_check(M)


def test_odd_characteristic_roots_over_an_extension_field_base():
    ctx9 = SeriesCtx(ff_make(3, 2), 1, 64)
    T = tame_roots(poly(ctx9, [(1, 1)]))
    assert len(T.roots) == 3
    assert T.ramification == 2
    # -1 is a square in F_9, so the residue field stays put
    assert T.ctx.residue.n == 2
    residues = sorted(r.terms[0][1] for r in T.nonzero_roots)
    assert all(code >= 3 for code in residues)
    for r in T.roots:
        assert T.poly.evaluate(r).is_zero
    M = tame_generator_matrix(T)
    assert M.rows == ((2,),)
    assert cartan_check(M)


def test_split_instance_needs_no_extension(ctx2):
    T = tame_roots(split_product(ctx2))
    t = ctx2.uniformizer()
    assert T.ramification == 1
    assert T.ctx == ctx2
    assert list(T.roots) == [ctx2.zero(), t, t + t ** 3, t ** 3]
    M = tame_generator_matrix(T)
    assert M.rows == ((1, 0), (0, 1))
    assert not cartan_check(M)


def test_wild_slope_is_refused(ctx2):
    with pytest.raises(InputError) as exc_info:
        tame_roots(poly(ctx2, [(2, 1)], [(1, 1)]))
    assert exc_info.value.code == "wild_slope"
    assert exc_info.value.details["valuation"] == Fraction(1, 2)


def test_inseparable_polynomial_is_refused(ctx2):
    with pytest.raises(InputError) as exc_info:
        tame_roots(poly(ctx2, ctx2.zero(), [(1, 1)]))
    assert exc_info.value.code == "inseparable"
    with pytest.raises(PrecisionError):
        tame_roots(poly(ctx2, ctx2.series([], prec=8), [(1, 1)]))


def test_additive_from_dense(ctx2):
    t = ctx2.uniformizer()
    zero, one = ctx2.zero(), ctx2.one()
    P = additive_from_dense([zero, t, t, zero, one], 2)
    assert P.coeffs == (t, t)
    with pytest.raises(InputError) as exc_info:
        additive_from_dense([zero, t, t, one, one], 2)
    assert exc_info.value.code == "not_additive"
    with pytest.raises(InputError) as exc_info:
        additive_from_dense([zero, t, zero, zero, t], 2)
    assert exc_info.value.code == "not_monic"


def test_certificate_of_two_roots_of_valuation_one_half(ctx2):
    cert = monodromy_certificate(poly(ctx2, [(2, 1)], [(1, 1)]))
    assert cert.slopes == ((Fraction(1), 1), (Fraction(1, 2), 2))
    assert cert.zero_roots == 1
    assert 2 in cert.ram_divisors
    assert not cert.tame
    assert cert.witness is None


def test_certificate_of_a_tame_instance(ctx2):
    cert = monodromy_certificate(poly(ctx2, [(1, 1)], [(1, 1)]))
    assert cert.ram_divisors == (3,)
    assert cert.tame
    assert cert.as_dict()["slopes"] == [[Fraction(1, 3), 3]]


def test_witness_on_the_etale_rank_one_instance(ctx4, f4):
    P = poly(ctx4, [(1, 1)], ctx4.one())
    witness = nonsplit_witness(P, f4)
    assert witness is not None
    assert witness.alpha == f4.one()
    assert witness.valuation == 1
    assert witness.valuation == ls_val(P.evaluate(ctx4.constant(witness.alpha)))
    cert = monodromy_certificate(P, f4)
    assert cert.witness == witness
    assert 2 in cert.ram_divisors
    assert cert.witness_slopes == ((Fraction(1, 2), 2), (Fraction(0), 2))


def test_no_witness_on_the_connected_instance(ctx2):
    P = poly(ctx2, [(1, 1)], [(1, 1)])
    assert nonsplit_witness(P, ff_make(2, 2)) is None
    assert nonsplit_witness(P, ff_make(2, 4)) is None


def test_witness_search_field_must_match_characteristic(ctx2):
    with pytest.raises(InputError) as exc_info:
        nonsplit_witness(poly(ctx2, [(1, 1)]), ff_make(3, 1))
    assert exc_info.value.code == "field_mismatch"


def test_igusa_tower_in_characteristic_two(ctx2):
    tower = igusa_tower(2, ctx2.uniformizer(), ctx2.one(), 3)
    assert tower.valuations == (Fraction(1), Fraction(1, 2), Fraction(1, 4))
    assert tower.ram_bound == 4


def test_igusa_tower_in_characteristic_three(ctx3):
    tower = igusa_tower(3, ctx3.uniformizer(), ctx3.one(), 2)
    assert tower.valuations == (Fraction(1, 2), Fraction(1, 6))
    assert tower.ram_bound == 6


def test_igusa_valuations_follow_the_closed_formula():
    for p in (2, 3, 5):
        ctx = SeriesCtx(ff_make(p, 1), 1, 16)
        tower = igusa_tower(p, ctx.uniformizer(), ctx.one(), 4)
        assert tower.valuations == tuple(Fraction(1, p ** (i - 1) * (p - 1)) for i in range(1, 5))


def test_igusa_hypotheses(ctx2):
    t = ctx2.uniformizer()
    with pytest.raises(InputError) as exc_info:
        igusa_tower(2, t * t, ctx2.one(), 2)
    assert exc_info.value.code == "igusa_hypothesis"
    with pytest.raises(InputError) as exc_info:
        igusa_tower(2, t, t, 2)
    assert exc_info.value.code == "igusa_hypothesis"
    with pytest.raises(InputError) as exc_info:
        igusa_tower(2, t, ctx2.one(), 0)
    assert exc_info.value.code == "bad_levels"


def test_cartan_report_needs_an_invertible_matrix():
    with pytest.raises(InputError) as exc_info:
        cartan_report(ModMatrix.make([[1, 0], [0, 0]], 2))
    assert exc_info.value.code == "singular_matrix"


def test_root_valuations_agree_with_constructed_roots(ctx2, ctx3):
    for P in tame_corpus(ctx2, ctx3):
        T = tame_roots(P)
        expected = np_root_valuations(P.dense()).multiset()
        assert sorted(ls_val(r) for r in T.nonzero_roots) == expected, str(P)
        c = P.c
        rows = [[P.ctx.one() if i == j + 1 else P.ctx.zero() for j in range(c - 1)] for i in range(c)]
        for i, a in enumerate(P.coeffs):
            rows[i].append(-a)
        heights = fiber_heights(BTDesc(c, 1, SigmaMat.from_rows(P.ctx, rows)), "generic")
        assert T.dim == c - heights.i0 == heights.etale_height
