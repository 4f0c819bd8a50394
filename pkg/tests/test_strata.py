from fractions import Fraction

import pytest

from algebra.strata import NPgon, diamond_dim, enumerate_np, hasse_edges, np_leq, special_beta
from utils.errors import InputError


def slopes(*values):
    return tuple(Fraction(v) for v in values)


def test_enumerate_small_shape():
    polygons = enumerate_np(2, 1)
    assert [b.slopes for b in polygons] == [
        slopes(0, 0, 1),
        slopes(0, "1/2", "1/2"),
        slopes("1/3", "1/3", "1/3"),
    ]
    assert [diamond_dim(b)[1] for b in polygons] == [2, 1, 0]


def test_open_slopes_drop_the_extreme_parts():
    assert [b.slopes for b in enumerate_np(2, 1, open_slopes=True)] == [slopes("1/3", "1/3", "1/3")]


def test_hasse_edges_of_a_chain():
    assert hasse_edges(enumerate_np(2, 1)) == [(1, 0), (2, 1)]


def test_vertices_skip_points_inside_a_segment():
    b = NPgon.from_slopes(2, 2, [0, "1/2", "1/2", 1])
    assert b.vertices() == [(0, 0), (1, 0), (3, 1), (4, 2)]
    assert b.height(2) == Fraction(1, 2)


def test_polygon_validation():
    with pytest.raises(InputError) as exc_info:
        NPgon.from_slopes(1, 1, [1, 0])
    assert exc_info.value.code == "bad_polygon"
    with pytest.raises(InputError):
        NPgon.from_slopes(1, 1, ["1/2"])
    with pytest.raises(InputError):
        NPgon.from_slopes(1, 1, ["1/3", "1/3"])
    with pytest.raises(InputError):
        enumerate_np(0, 0)


def test_order_needs_matching_shapes():
    with pytest.raises(InputError) as exc_info:
        np_leq(enumerate_np(2, 1)[0], enumerate_np(1, 2)[0])
    assert exc_info.value.code == "shape_mismatch"


@pytest.mark.parametrize("c", range(1, 6))
@pytest.mark.parametrize("d", range(2, 6))
def test_special_polygon_dimension(c, d):
    beta = special_beta(c, d)
    points, dim = diamond_dim(beta)
    assert dim == c * (d - 1)
    assert len(points) == dim
    assert beta.slopes[: c + 1] == (Fraction(1, c + 1),) * (c + 1)


def test_special_polygon_needs_room():
    with pytest.raises(InputError):
        special_beta(0, 2)
    with pytest.raises(InputError):
        special_beta(2, 1)


def test_ordinary_polygon_has_full_dimension():
    for c in range(1, 5):
        for d in range(1, 5):
            ordinary = NPgon(c, d, (Fraction(0),) * c + (Fraction(1),) * d)
            assert diamond_dim(ordinary)[1] == c * d


def test_order_is_a_partial_order_and_dim_is_monotone():
    for total in range(1, 7):
        for c in range(0, total + 1):
            d = total - c
            polygons = enumerate_np(c, d)
            dims = [diamond_dim(b)[1] for b in polygons]
            n = len(polygons)
            leq = [[np_leq(polygons[i], polygons[j]) for j in range(n)] for i in range(n)]
            for i in range(n):
                assert leq[i][i]
                for j in range(n):
                    if i != j:
                        assert not (leq[i][j] and leq[j][i])
                    if leq[i][j]:
                        assert dims[i] <= dims[j]
                        for k in range(n):
                            if leq[j][k]:
                                assert leq[i][k]
