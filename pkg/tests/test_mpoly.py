import pytest

from algebra.mpoly import MPolyRing
from utils.errors import InputError


def test_truncation_at_the_degree_cap(f2):
    R = MPolyRing(f2, 2, 2)
    t1, t2 = R.var(0), R.var(1)
    assert (t1 * t2).total_degree == 2
    assert (t1 * t1 * t2).is_zero


def test_untruncated_ring_keeps_everything(f2):
    R = MPolyRing(f2, 1, None)
    t1 = R.var(0)
    assert (t1 * t1 * t1 * t1 * t1).total_degree == 5


def test_char_two_cancellation(f2):
    R = MPolyRing(f2, 2, 4)
    t1 = R.var(0)
    assert (t1 + t1).is_zero
    assert str((t1 + 1) * (t1 + 1)) == "1 + t1^2"


def test_frobenius_raises_exponents_and_coefficients(f4):
    R = MPolyRing(f4, 1, 8)
    g = f4.gen()
    x = R.poly([((1,), g)])
    assert x.frobenius() == R.poly([((2,), g + 1)])


def test_constant_and_linear_parts(f3):
    R = MPolyRing(f3, 2, 4)
    t1, t2 = R.var(0), R.var(1)
    x = 2 + t1 * 2 + t1 * t2 + t2
    assert x.constant_term() == f3.from_int(2)
    assert x.linear_part() == [f3.from_int(2), f3.one()]


def test_evaluate_at_a_residue_point(f3):
    R = MPolyRing(f3, 2, 4)
    t1, t2 = R.var(0), R.var(1)
    x = t1 * t2 + t2
    assert x.evaluate([f3.from_int(2), f3.one()]) == f3.zero()


def test_substitute_into_series(f2, ctx2):
    R = MPolyRing(f2, 2, 4)
    t1, t2 = R.var(0), R.var(1)
    t = ctx2.uniformizer()
    assert (t1 * t1 + t2).substitute([t, ctx2.one()]) == ctx2.series([(0, 1), (2, 1)], exact=True)


def test_bad_monomials_are_rejected(f2):
    R = MPolyRing(f2, 2, 4)
    with pytest.raises(InputError):
        R.poly([((1,), 1)])
    with pytest.raises(InputError):
        R.poly([((1, -1), 1)])
    with pytest.raises(InputError):
        R.var(2)
