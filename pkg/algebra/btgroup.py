"""BT-group descriptors built from Hasse-Witt data.

A descriptor is (c, d, hw): codimension, dimension and the Hasse-Witt matrix
of size c over a finite field, a series context or the truncated
multivariate ring of the one-dimensional universal deformation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

from algebra.ff import FFElem, FieldDesc, ff_make
from algebra.monodromy import AdditivePoly
from algebra.mpoly import MPolyRing
from algebra.series import INF, LSeries, SeriesCtx, ls_val
from algebra.semilinear import (
    SigmaMat,
    base_field,
    closed_point,
    companion_form,
    cyclic_vector,
    kernel_dim,
    mat_det,
    mat_rank,
)
from utils.errors import InputError, PrecisionError


@dataclass(frozen=True)
class ElementaryBT:
    """G^(s/r): Dieudonne relation F^(r-s) = V^s."""

    s: int
    r: int

    def __post_init__(self) -> None:
        if self.r <= 0 or not 0 <= self.s <= self.r:
            raise InputError("bad_slope", f"need 0 <= s <= r and r > 0, got s={self.s}, r={self.r}")
        if math.gcd(self.s, self.r) != 1:
            raise InputError("bad_slope", f"s and r must be coprime, got s={self.s}, r={self.r}")

    @property
    def slope(self) -> Fraction:
        return Fraction(self.s, self.r)


@dataclass(frozen=True)
class BTDesc:
    c: int
    d: int
    hw: SigmaMat

    def __post_init__(self) -> None:
        if self.c < 0 or self.d < 0:
            raise InputError("bad_descriptor", f"c and d must be >= 0, got c={self.c}, d={self.d}")
        if self.hw.size != self.c:
            raise InputError("bad_descriptor", f"Hasse-Witt matrix has size {self.hw.size}, expected c={self.c}")

    @property
    def height(self) -> int:
        return self.c + self.d

    @property
    def base(self):
        return self.hw.base


@dataclass(frozen=True)
class FiberHeights:
    i0: int
    etale_height: int
    connected_height: int
    connected: bool

    def as_dict(self) -> dict[str, Any]:
        return {
            "i0": self.i0,
            "etale_height": self.etale_height,
            "connected_height": self.connected_height,
            "connected": self.connected,
        }


def _default_field(field: FieldDesc | None) -> FieldDesc:
    return field if field is not None else ff_make(2, 1)


def elementary_hw(E: ElementaryBT, field: FieldDesc | None = None) -> BTDesc:
    F = _default_field(field)
    c, d = E.r - E.s, E.s
    if c == 0:
        return BTDesc(0, d, SigmaMat(F, ()))
    if E.s == 0:
        # F acts invertibly on k[F]/(F - 1)
        return BTDesc(1, 0, SigmaMat.from_rows(F, [[1]]))
    rows = [[1 if i == j + 1 else 0 for j in range(c)] for i in range(c)]
    return BTDesc(c, d, SigmaMat.from_rows(F, rows))


def elementary_dual(E: ElementaryBT) -> ElementaryBT:
    return ElementaryBT(E.r - E.s, E.r)


def universal_deformation_hw(c: int, field: FieldDesc | None = None, degree_cap: int | None = 4) -> BTDesc:
    if c < 1:
        raise InputError("bad_codimension", f"universal deformation needs c >= 1, got {c}")
    ring = MPolyRing(_default_field(field), c, degree_cap)
    rows: list[list[Any]] = [[ring.one() if i == j + 1 else ring.zero() for j in range(c - 1)] for i in range(c)]
    for i in range(c):
        rows[i].append(-ring.var(i))
    return BTDesc(c, 1, SigmaMat.from_rows(ring, rows))


def _assignment_list(ring: MPolyRing, assignment: Mapping[Any, LSeries] | Sequence[LSeries]) -> list[LSeries]:
    if not isinstance(assignment, Mapping):
        values = list(assignment)
    else:
        by_index: dict[int, LSeries] = {}
        for key, value in assignment.items():
            idx = int(key[1:]) if isinstance(key, str) and key.startswith("t") else int(key)
            by_index[idx] = value
        missing = [i for i in range(1, ring.nvars + 1) if i not in by_index]
        if missing:
            raise InputError("missing_variable", f"assignment misses t{missing[0]}", details={"missing": [f"t{i}" for i in missing]})
        values = [by_index[i] for i in range(1, ring.nvars + 1)]
    if len(values) != ring.nvars:
        raise InputError("missing_variable", f"assignment needs {ring.nvars} series, got {len(values)}")
    for i, x in enumerate(values):
        if x.terms and x.terms[0][0] < 0:
            raise InputError("negative_valuation", f"image of t{i + 1} has negative valuation", details={"variable": f"t{i + 1}"})
    return values


def specialize(B: BTDesc, assignment: Mapping[Any, LSeries] | Sequence[LSeries]) -> BTDesc:
    """Substitute t_i -> series into every entry of a multivariate descriptor."""
    if not isinstance(B.base, MPolyRing):
        raise InputError("unsupported_base", "specialize expects a descriptor over the multivariate base")
    values = _assignment_list(B.base, assignment)
    ctx = values[0].ctx
    rows = [[x.substitute(values) for x in r] for r in B.hw.entries]
    return BTDesc(B.c, B.d, SigmaMat(ctx, tuple(tuple(r) for r in rows)))


def hasse_invariant(B: BTDesc) -> Fraction | float:
    """Valuation of det hw; 0 when c = 0 and inf when the determinant is provably zero."""
    if B.c == 0:
        return Fraction(0)
    if isinstance(B.base, MPolyRing):
        raise InputError("unsupported_base", "the Hasse invariant needs a series or field base; specialize first")
    det = mat_det(B.hw.rows(), B.base)
    if isinstance(det, FFElem):
        return INF if det.is_zero else Fraction(0)
    if det.is_exact_zero:
        return INF
    if det.is_zero_to_prec:
        raise PrecisionError(
            "indeterminate_determinant",
            f"det of the Hasse-Witt matrix vanishes through O({det.ctx.var}^{det.prec}) but is not provably zero",
            details={"prec": det.prec},
            hint="raise --prec",
        )
    return ls_val(det)


def a_number(B: BTDesc) -> int:
    """Corank of hw at the closed point."""
    if B.c == 0:
        return 0
    return kernel_dim(B.hw)


def _is_one(x: Any) -> bool:
    return (x - 1).is_zero


def companion_coefficients(M: SigmaMat) -> list[Any] | None:
    """(a_1, ..., a_c) when M has subdiagonal ones and last column (-a_1, ..., -a_c)."""
    c = M.size
    for i in range(c):
        for j in range(c - 1):
            x = M.entries[i][j]
            if i == j + 1:
                if not _is_one(x):
                    return None
            elif not x.is_zero:
                return None
    return [-M.entries[i][c - 1] for i in range(c)]


def _coefficients_at_fiber(B: BTDesc, point: Any, extension_bound: int, search_budget: int) -> list[Any]:
    base = B.base
    if isinstance(base, SeriesCtx) and point == "generic":
        coeffs = companion_coefficients(B.hw)
        if coeffs is None:
            raise InputError("not_companion", "the generic fiber is only read from a companion matrix")
        return coeffs
    if isinstance(base, MPolyRing):
        if point is None or point == "closed":
            point = [base.residue.zero()] * base.nvars
        values = [x if isinstance(x, FFElem) else base.residue.from_int(x) for x in point]
        target = values[0].field if values else base.residue
        reduced = SigmaMat(target, tuple(tuple(x.evaluate(values) for x in r) for r in B.hw.entries))
    elif point in (None, "closed"):
        reduced = closed_point(B.hw)
    else:
        raise InputError("bad_point", f"unsupported fiber {point!r} for this base")
    coeffs = companion_coefficients(reduced)
    if coeffs is not None:
        return coeffs
    found = cyclic_vector(reduced, extension_bound=extension_bound, search_budget=search_budget)
    if not found.found:
        raise InputError(
            "not_hw_cyclic",
            "the Hasse-Witt matrix has no cyclic vector at this fiber",
            details={"status": found.status, "searched": found.searched},
        )
    companion, _ = companion_form(reduced, found.vector)
    return companion_coefficients(companion)


def fiber_heights(B: BTDesc, point: Any = None, extension_bound: int = 8, search_budget: int = 200_000) -> FiberHeights:
    """i0 = min{i : a_(i+1)(x) != 0} with a_(c+1) = 1, and the etale/connected heights."""
    if B.c == 0:
        return FiberHeights(0, 0, B.d, True)
    coeffs = _coefficients_at_fiber(B, point, extension_bound, search_budget)
    i0 = B.c
    for i, a in enumerate(coeffs):
        if isinstance(a, LSeries) and not a.exact and a.is_zero_to_prec:
            raise PrecisionError("indeterminate_fiber", f"a_{i + 1} vanishes through the known precision", hint="raise --prec")
        if not a.is_zero:
            i0 = i
            break
    return FiberHeights(i0, B.c - i0, B.d + i0, i0 == B.c)


def additive_poly(B: BTDesc) -> AdditivePoly:
    coeffs = companion_coefficients(B.hw)
    if coeffs is None or B.c == 0:
        raise InputError("not_companion", "additive_poly needs a companion Hasse-Witt matrix with c >= 1")
    return AdditivePoly(base_field(B.base).p, tuple(coeffs))


def jacobian_rank(B: BTDesc) -> int:
    """Rank of the linear parts of a_1, ..., a_c at the closed point."""
    if not isinstance(B.base, MPolyRing):
        raise InputError("unsupported_base", "versality is checked over the multivariate base")
    coeffs = companion_coefficients(B.hw)
    if coeffs is None:
        raise InputError("not_companion", "versality_check needs a companion Hasse-Witt matrix")
    rows = [a.linear_part() for a in coeffs]
    if not rows or not rows[0]:
        return 0
    return mat_rank(rows, B.base.residue)


def versality_check(B: BTDesc) -> bool:
    return jacobian_rank(B) == B.c


def is_universal(B: BTDesc) -> bool:
    if not isinstance(B.base, MPolyRing):
        raise InputError("unsupported_base", "versality is checked over the multivariate base")
    return B.d == 1 and B.base.nvars == B.c and versality_check(B)
