"""Newton polygons with endpoints (0, 0) and (c + d, d): enumeration, order, dimensions."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator, Sequence

from utils.errors import InputError


@dataclass(frozen=True)
class NPgon:
    c: int
    d: int
    slopes: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.slopes) != self.c + self.d:
            raise InputError("bad_polygon", f"expected {self.c + self.d} slopes, got {len(self.slopes)}")
        if sum(self.slopes, Fraction(0)) != self.d:
            raise InputError("bad_polygon", f"slopes must sum to d={self.d}")
        if any(not 0 <= s <= 1 for s in self.slopes):
            raise InputError("bad_polygon", "slopes must lie in [0, 1]")
        if any(a > b for a, b in zip(self.slopes, self.slopes[1:])):
            raise InputError("bad_polygon", "slopes must be nondecreasing")

    @classmethod
    def from_slopes(cls, c: int, d: int, slopes: Sequence[Fraction | int | str]) -> "NPgon":
        return cls(c, d, tuple(Fraction(s) for s in slopes))

    @property
    def length(self) -> int:
        return self.c + self.d

    def height(self, x: int) -> Fraction:
        if not 0 <= x <= self.length:
            raise InputError("outside_polygon", f"x={x} outside [0, {self.length}]")
        return sum(self.slopes[:x], Fraction(0))

    def vertices(self) -> list[tuple[int, Fraction]]:
        out = [(0, Fraction(0))]
        for x in range(1, self.length):
            if self.slopes[x - 1] != self.slopes[x]:
                out.append((x, self.height(x)))
        out.append((self.length, Fraction(self.d)))
        return out

    def as_dict(self) -> dict[str, Any]:
        return {"c": self.c, "d": self.d, "slopes": list(self.slopes)}


def _paths(x: int, y: int, total_x: int, total_y: int, last: Fraction | None, open_slopes: bool) -> Iterator[list[Fraction]]:
    if x == total_x:
        if y == total_y:
            yield []
        return
    for dx in range(1, total_x - x + 1):
        for dy in range(0, min(dx, total_y - y) + 1):
            s = Fraction(dy, dx)
            if last is not None and s <= last:
                continue
            if open_slopes and not 0 < s < 1:
                continue
            for rest in _paths(x + dx, y + dy, total_x, total_y, s, open_slopes):
                yield [s] * dx + rest


def enumerate_np(c: int, d: int, open_slopes: bool = False) -> list[NPgon]:
    """Every convex lattice path (0,0) -> (c+d, d), one per slope sequence, sorted by slopes."""
    if c < 0 or d < 0 or c + d < 1:
        raise InputError("bad_shape", f"need c, d >= 0 and c + d >= 1, got c={c}, d={d}")
    out = [NPgon(c, d, tuple(s)) for s in _paths(0, 0, c + d, d, None, open_slopes)]
    out.sort(key=lambda b: b.slopes)
    return out


def _same_shape(a: NPgon, b: NPgon) -> None:
    if (a.c, a.d) != (b.c, b.d):
        raise InputError("shape_mismatch", f"polygons live in NP({a.length},{a.d}) and NP({b.length},{b.d})")


def np_leq(a: NPgon, b: NPgon) -> bool:
    """a <= b: no point of a lies below b."""
    _same_shape(a, b)
    return all(a.height(x) >= b.height(x) for x in range(a.length + 1))


def diamond_dim(b: NPgon) -> tuple[list[tuple[int, int]], int]:
    points = [
        (x, y)
        for y in range(b.d)
        for x in range(y + 1, b.length)
        if y >= b.height(x)
    ]
    return points, len(points)


def special_beta(c: int, d: int) -> NPgon:
    """(1/(c+1) repeated c+1 times, then d-1 ones)."""
    if c < 1 or d < 2:
        raise InputError("bad_shape", f"special polygon needs c >= 1 and d >= 2, got c={c}, d={d}")
    beta = NPgon(c, d, tuple([Fraction(1, c + 1)] * (c + 1) + [Fraction(1)] * (d - 1)))
    _, dim = diamond_dim(beta)
    assert dim == c * (d - 1), f"dim of the special polygon is {dim}, expected {c * (d - 1)}"
    return beta


def hasse_edges(polygons: Sequence[NPgon]) -> list[tuple[int, int]]:
    """Covering pairs (i, j): polygons[i] < polygons[j] with nothing strictly between."""
    n = len(polygons)
    leq = [[np_leq(polygons[i], polygons[j]) for j in range(n)] for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(n):
            if i == j or not leq[i][j]:
                continue
            if any(k not in (i, j) and leq[i][k] and leq[k][j] for k in range(n)):
                continue
            edges.append((i, j))
    return edges
