"""Polynomials in t_1..t_m over a finite field, truncated at total degree D.

This is the base ring of the universal deformation matrix. ``degree_cap=None``
keeps every term.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from algebra.ff import FFElem, FieldDesc, embed_code
from algebra.series import LSeries
from utils.errors import InputError

Monomial = tuple[int, ...]


@dataclass(frozen=True)
class MPolyRing:
    residue: FieldDesc
    nvars: int
    degree_cap: int | None = 4

    def __post_init__(self) -> None:
        if self.nvars < 0:
            raise InputError("bad_ring", f"number of variables must be >= 0, got {self.nvars}")
        if self.degree_cap is not None and self.degree_cap < 1:
            raise InputError("bad_ring", f"degree cap must be >= 1, got {self.degree_cap}")

    @property
    def p(self) -> int:
        return self.residue.p

    def keeps(self, mono: Monomial) -> bool:
        return self.degree_cap is None or sum(mono) <= self.degree_cap

    def poly(self, terms: Iterable[tuple[Sequence[int], FFElem | int]]) -> "MPoly":
        acc: dict[Monomial, int] = {}
        for exps, c in terms:
            mono = tuple(exps)
            if len(mono) != self.nvars:
                raise InputError("bad_monomial", f"monomial {list(mono)} needs {self.nvars} exponents")
            if any(e < 0 for e in mono):
                raise InputError("bad_monomial", f"negative exponent in {list(mono)}")
            if isinstance(c, FFElem):
                if c.field != self.residue:
                    raise InputError("field_mismatch", f"coefficient in {c.field!r}, ring residue is {self.residue!r}")
                code = c.code
            else:
                code = c % self.p
            acc[mono] = self.residue.add(acc.get(mono, 0), code)
        return _make(self, acc)

    def zero(self) -> "MPoly":
        return MPoly(self, ())

    def one(self) -> "MPoly":
        return self.constant(1)

    def constant(self, c: FFElem | int) -> "MPoly":
        return self.poly([((0,) * self.nvars, c)])

    def var(self, i: int) -> "MPoly":
        if not 0 <= i < self.nvars:
            raise InputError("bad_variable", f"variable index {i} outside 0..{self.nvars - 1}")
        mono = [0] * self.nvars
        mono[i] = 1
        return self.poly([(mono, 1)])


def _make(ring: MPolyRing, acc: dict[Monomial, int]) -> "MPoly":
    return MPoly(ring, tuple(sorted((m, c) for m, c in acc.items() if c and ring.keeps(m))))


@dataclass(frozen=True)
class MPoly:
    ring: MPolyRing
    terms: tuple[tuple[Monomial, int], ...]

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int:
        return max((sum(m) for m, _ in self.terms), default=-1)

    def _coerce(self, other) -> "MPoly | None":
        if isinstance(other, MPoly):
            if other.ring != self.ring:
                raise InputError("ring_mismatch", "polynomials live in different rings")
            return other
        if isinstance(other, (int, FFElem)):
            return self.ring.constant(other)
        return None

    def __add__(self, other):
        y = self._coerce(other)
        if y is None:
            return NotImplemented
        F = self.ring.residue
        acc = dict(self.terms)
        for m, c in y.terms:
            acc[m] = F.add(acc.get(m, 0), c)
        return _make(self.ring, acc)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        F = self.ring.residue
        return MPoly(self.ring, tuple((m, F.neg(c)) for m, c in self.terms))

    def __sub__(self, other):
        y = self._coerce(other)
        if y is None:
            return NotImplemented
        return self + (-y)

    def __rsub__(self, other):
        y = self._coerce(other)
        if y is None:
            return NotImplemented
        return y + (-self)

    def __mul__(self, other):
        y = self._coerce(other)
        if y is None:
            return NotImplemented
        ring = self.ring
        F = ring.residue
        acc: dict[Monomial, int] = {}
        for m1, c1 in self.terms:
            for m2, c2 in y.terms:
                m = tuple(a + b for a, b in zip(m1, m2))
                if not ring.keeps(m):
                    continue
                acc[m] = F.add(acc.get(m, 0), F.mul(c1, c2))
        return _make(ring, acc)

    __rmul__ = __mul__

    def frobenius(self, k: int = 1) -> "MPoly":
        F = self.ring.residue
        q = self.ring.p ** k
        acc: dict[Monomial, int] = {}
        for m, c in self.terms:
            mono = tuple(e * q for e in m)
            acc[mono] = F.add(acc.get(mono, 0), F.frob(c, k))
        return _make(self.ring, acc)

    def constant_term(self) -> FFElem:
        zero = (0,) * self.ring.nvars
        for m, c in self.terms:
            if m == zero:
                return FFElem(self.ring.residue, c)
        return self.ring.residue.zero()

    def linear_part(self) -> list[FFElem]:
        out = [self.ring.residue.zero()] * self.ring.nvars
        for m, c in self.terms:
            if sum(m) == 1:
                out[m.index(1)] = FFElem(self.ring.residue, c)
        return out

    def evaluate(self, point: Sequence[FFElem]) -> FFElem:
        """Value at a point whose coordinates lie in an extension of the residue field."""
        if len(point) != self.ring.nvars:
            raise InputError("bad_point", f"point needs {self.ring.nvars} coordinates, got {len(point)}")
        target = point[0].field if point else self.ring.residue
        acc = target.zero()
        for m, c in self.terms:
            term = FFElem(target, embed_code(c, self.ring.residue, target))
            for x, e in zip(point, m):
                if e:
                    term = term * x ** e
            acc = acc + term
        return acc

    def substitute(self, assignment: Sequence[LSeries]) -> LSeries:
        if len(assignment) != self.ring.nvars:
            raise InputError("missing_variable", f"assignment needs {self.ring.nvars} series, got {len(assignment)}")
        if not assignment:
            raise InputError("missing_variable", "a polynomial in no variables has no series context")
        ctx = assignment[0].ctx
        if ctx.residue != self.ring.residue:
            raise InputError("field_mismatch", "series residue field differs from the ring's")
        acc = ctx.zero()
        for m, c in self.terms:
            term = ctx.constant(FFElem(ctx.residue, c))
            for x, e in zip(assignment, m):
                if e:
                    term = term * x ** e
            acc = acc + term
        return acc

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            factors = [f"t{i + 1}" if e == 1 else f"t{i + 1}^{e}" for i, e in enumerate(m) if e]
            cs = str(FFElem(self.ring.residue, c))
            if not factors:
                parts.append(cs)
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(("(" + cs + ")" if "+" in cs else cs) + "*" + "*".join(factors))
        return " + ".join(parts)
