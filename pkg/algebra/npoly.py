"""Newton polygons over the valued series field.

The polygon of sum c_i X^i is the lower convex hull of the points
(i, v(c_i)); a segment of slope -s and length l stands for l roots of
valuation s.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from algebra.series import LSeries, ZeroToPrecision, ls_val
from utils.errors import InputError, PrecisionError

Point = tuple[int, Fraction]


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[Point, ...]

    @property
    def slopes(self) -> list[tuple[Fraction, int]]:
        out = []
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:]):
            out.append((Fraction(y1 - y0) / (x1 - x0), x1 - x0))
        return out

    def height(self, x: int | Fraction) -> Fraction:
        if not self.vertices[0][0] <= x <= self.vertices[-1][0]:
            raise InputError("outside_polygon", f"x={x} outside [{self.vertices[0][0]}, {self.vertices[-1][0]}]")
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:]):
            if x0 <= x <= x1:
                return Fraction(y0) + (Fraction(y1 - y0) / (x1 - x0)) * (x - x0)
        return Fraction(self.vertices[-1][1])

    def as_dict(self) -> dict:
        return {
            "vertices": [[x, y] for x, y in self.vertices],
            "slopes": [[s, length] for s, length in self.slopes],
        }


@dataclass(frozen=True)
class RootValuations:
    zero_roots: int
    slopes: tuple[tuple[Fraction, int], ...]

    @property
    def degree(self) -> int:
        return self.zero_roots + sum(m for _, m in self.slopes)

    def multiset(self) -> list[Fraction]:
        out: list[Fraction] = []
        for v, m in self.slopes:
            out.extend([v] * m)
        return sorted(out)

    def as_dict(self) -> dict:
        return {"zero_roots": self.zero_roots, "slopes": [[v, m] for v, m in self.slopes]}


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def np_hull(points: Iterable[tuple[int, Fraction | int | float]]) -> NewtonPolygon:
    lowest: dict[int, Fraction] = {}
    for x, y in points:
        if isinstance(y, float) and math.isinf(y):
            continue
        y = Fraction(y)
        if x not in lowest or y < lowest[x]:
            lowest[x] = y
    if len(lowest) < 2:
        raise InputError("too_few_points", "a Newton polygon needs at least two finite points", details={"finite_points": len(lowest)})
    hull: list[Point] = []
    for pt in sorted(lowest.items()):
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    return NewtonPolygon(tuple(hull))


def np_root_valuations(f: Sequence[LSeries]) -> RootValuations:
    """Root valuations of sum f[i] X^i, certified against the known precision."""
    vals = [ls_val(c) for c in f]
    finite = [i for i, v in enumerate(vals) if not (isinstance(v, float) and math.isinf(v))]
    if not finite:
        raise InputError("zero_polynomial", "polynomial is identically zero")
    lead = finite[-1]
    low = finite[0]
    if isinstance(vals[lead], ZeroToPrecision):
        raise PrecisionError("leading_coefficient_unknown", "leading coefficient vanishes through the known precision", details={"index": lead})
    if isinstance(vals[low], ZeroToPrecision):
        raise PrecisionError(
            "zero_root_count_unknown",
            "lowest coefficient vanishes through the known precision",
            details={"index": low},
            hint="raise --prec",
        )
    known = [(i, v) for i, v in enumerate(vals) if isinstance(v, Fraction)]
    if lead == low:
        return RootValuations(zero_roots=low, slopes=())
    hull = np_hull(known)
    for i, v in enumerate(vals):
        if isinstance(v, ZeroToPrecision) and low < i < lead and v.bound < hull.height(i):
            raise PrecisionError(
                "indeterminate_polygon",
                f"coefficient {i} is only known to vanish below valuation {v.bound}, which may change the polygon",
                details={"index": i, "bound": v.bound, "hull_height": hull.height(i)},
                hint="raise --prec",
            )
    slopes = tuple((-s, length) for s, length in hull.slopes)
    return RootValuations(zero_roots=low, slopes=slopes)
