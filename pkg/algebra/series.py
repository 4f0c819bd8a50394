"""Truncated Laurent series over a finite residue field.

A series lives in a ``SeriesCtx``: residue field F_q', ramification index e
(the uniformizer u has valuation 1/e, u^e = t) and a precision cap N. Each
value records the exponent below which its coefficients are known; exact
values (constructor-asserted polynomials) carry no error term at all.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from algebra.ff import FFElem, FieldDesc, embed_code
from utils.errors import InputError, PrecisionError

INF = math.inf


@dataclass(frozen=True)
class ZeroToPrecision:
    """Valuation of a series whose known coefficients all vanish: at least ``bound``."""

    bound: Fraction

    def __str__(self) -> str:
        return f">= {self.bound}"


Valuation = Fraction | float | ZeroToPrecision


@dataclass(frozen=True)
class SeriesCtx:
    residue: FieldDesc
    e: int = 1
    prec: int = 64

    def __post_init__(self) -> None:
        if self.e < 1:
            raise InputError("bad_ramification", f"ramification index must be >= 1, got {self.e}")
        if self.prec < 1:
            raise InputError("bad_precision", f"precision must be >= 1, got {self.prec}")

    @property
    def p(self) -> int:
        return self.residue.p

    @property
    def var(self) -> str:
        return "t" if self.e == 1 else "u"

    def _code(self, c: FFElem | int) -> int:
        if isinstance(c, FFElem):
            if c.field != self.residue:
                raise InputError("field_mismatch", f"coefficient in {c.field!r}, context residue is {self.residue!r}")
            return c.code
        return c % self.p

    def series(
        self,
        terms: Iterable[tuple[int, FFElem | int]] | dict[int, FFElem | int],
        prec: int | None = None,
        exact: bool = False,
    ) -> "LSeries":
        items = terms.items() if isinstance(terms, dict) else terms
        acc: dict[int, int] = {}
        for k, c in items:
            code = self._code(c)
            acc[k] = self.residue.add(acc.get(k, 0), code)
        bound = self.prec if prec is None else min(prec, self.prec)
        if exact and any(k >= self.prec and code for k, code in acc.items()):
            exact = False
        return _make(self, acc, bound, exact)

    def zero(self) -> "LSeries":
        return LSeries(self, (), self.prec, True)

    def one(self) -> "LSeries":
        return self.constant(1)

    def constant(self, c: FFElem | int) -> "LSeries":
        return self.series([(0, c)], exact=True)

    def monomial(self, k: int, c: FFElem | int = 1) -> "LSeries":
        return self.series([(k, c)], exact=True)

    def uniformizer(self) -> "LSeries":
        return self.monomial(1)

    def from_codes(self, terms: Iterable[tuple[int, int]], prec: int | None = None, exact: bool = False) -> "LSeries":
        return _make(self, dict(terms), self.prec if prec is None else min(prec, self.prec), exact)


def _make(ctx: SeriesCtx, acc: dict[int, int], bound: int, exact: bool) -> "LSeries":
    if exact:
        terms = tuple(sorted((k, c) for k, c in acc.items() if c))
        return LSeries(ctx, terms, ctx.prec, True)
    terms = tuple(sorted((k, c) for k, c in acc.items() if c and k < bound))
    return LSeries(ctx, terms, bound, False)


@dataclass(frozen=True)
class LSeries:
    ctx: SeriesCtx
    terms: tuple[tuple[int, int], ...]
    prec: int
    exact: bool = field(default=False)

    # -- shape ---------------------------------------------------------------

    @property
    def bound(self) -> float | int:
        """Exponent below which coefficients are known (inf when exact)."""
        return INF if self.exact else self.prec

    @property
    def is_zero_to_prec(self) -> bool:
        return not self.terms

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_exact_zero(self) -> bool:
        return self.exact and not self.terms

    @property
    def ord(self) -> int | float:
        if self.terms:
            return self.terms[0][0]
        return INF if self.exact else self.prec

    @property
    def coeffs(self) -> list[FFElem]:
        """Coefficients for exponents ord..prec-1 (dense)."""
        if not self.terms:
            return []
        top = self.terms[-1][0] + 1 if self.exact else self.prec
        lookup = dict(self.terms)
        return [FFElem(self.ctx.residue, lookup.get(k, 0)) for k in range(self.terms[0][0], top)]

    def coefficient(self, k: int) -> FFElem:
        return ls_coefficient(self, k)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "LSeries") -> None:
        if other.ctx != self.ctx:
            raise InputError("ctx_mismatch", "series live in different contexts")

    def _coerce(self, other) -> "LSeries | None":
        if isinstance(other, LSeries):
            self._check(other)
            return other
        if isinstance(other, (int, FFElem)):
            return self.ctx.constant(other)
        return None

    def __add__(self, other):
        y = self._coerce(other)
        if y is None:
            return NotImplemented
        return _add(self, y)

    __radd__ = __add__

    def __neg__(self) -> "LSeries":
        F = self.ctx.residue
        return LSeries(self.ctx, tuple((k, F.neg(c)) for k, c in self.terms), self.prec, self.exact)

    def __sub__(self, other):
        y = self._coerce(other)
        if y is None:
            return NotImplemented
        return _add(self, -y)

    def __rsub__(self, other):
        y = self._coerce(other)
        if y is None:
            return NotImplemented
        return _add(y, -self)

    def __mul__(self, other):
        y = self._coerce(other)
        if y is None:
            return NotImplemented
        return _mul(self, y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        y = self._coerce(other)
        if y is None:
            return NotImplemented
        return _mul(self, _inv(y))

    def __pow__(self, k: int) -> "LSeries":
        return ls_pow(self, k)

    def inverse(self) -> "LSeries":
        return _inv(self)

    def frobenius(self, k: int = 1) -> "LSeries":
        out = self
        for _ in range(k):
            out = ls_frobenius(out)
        return out

    def scale(self, c: FFElem | int) -> "LSeries":
        code = self.ctx._code(c)
        F = self.ctx.residue
        if code == 0:
            return LSeries(self.ctx, (), self.prec, self.exact)
        return LSeries(self.ctx, tuple((k, F.mul(v, code)) for k, v in self.terms), self.prec, self.exact)

    def shift(self, k: int) -> "LSeries":
        """Multiply by u^k."""
        if self.exact:
            if any(e + k >= self.ctx.prec for e, _ in self.terms):
                return self.ctx.from_codes(((e + k, c) for e, c in self.terms), prec=self.ctx.prec)
            return LSeries(self.ctx, tuple((e + k, c) for e, c in self.terms), self.ctx.prec, True)
        return self.ctx.from_codes(((e + k, c) for e, c in self.terms), prec=self.prec + k)

    def truncate(self, prec: int) -> "LSeries":
        """Forget everything from u^prec on."""
        bound = min(prec, self.bound)
        return self.ctx.from_codes(self.terms, prec=int(bound))

    def __str__(self) -> str:
        v = self.ctx.var
        parts = []
        for k, code in self.terms:
            c = FFElem(self.ctx.residue, code)
            cs = str(c)
            mono = "" if k == 0 else (v if k == 1 else f"{v}^{k}")
            if not mono:
                parts.append(cs)
            elif code == 1:
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}" if "+" in cs else f"{cs}*{mono}")
        body = " + ".join(parts) if parts else "0"
        if self.exact:
            return body
        return f"{body} + O({v}^{self.prec})"


def _add(x: LSeries, y: LSeries) -> LSeries:
    F = x.ctx.residue
    acc = dict(x.terms)
    for k, c in y.terms:
        acc[k] = F.add(acc.get(k, 0), c)
    if x.exact and y.exact:
        return _make(x.ctx, acc, x.ctx.prec, True)
    return _make(x.ctx, acc, int(min(x.bound, y.bound)), False)


def _mul(x: LSeries, y: LSeries) -> LSeries:
    ctx = x.ctx
    if x.is_exact_zero or y.is_exact_zero:
        return ctx.zero()
    vx, vy = x.ord, y.ord
    bound = min(vx + y.bound, vy + x.bound, x.bound + y.bound, ctx.prec)
    F = ctx.residue
    acc: dict[int, int] = {}
    overflow = False
    for kx, cx in x.terms:
        for ky, cy in y.terms:
            k = kx + ky
            if k >= bound:
                overflow = True
                continue
            acc[k] = F.add(acc.get(k, 0), F.mul(cx, cy))
    if x.exact and y.exact and not overflow:
        return _make(ctx, acc, ctx.prec, True)
    return _make(ctx, acc, int(bound), False)


def _inv(x: LSeries) -> LSeries:
    ctx = x.ctx
    if x.is_exact_zero:
        raise InputError("zero_inverse", "cannot invert the zero series")
    if x.is_zero_to_prec:
        raise PrecisionError(
            "zero_to_precision",
            f"cannot invert a series that vanishes through O({ctx.var}^{x.prec})",
            details={"prec": x.prec},
            hint="raise --prec",
        )
    F = ctx.residue
    v, c0 = x.terms[0]
    c0_inv = F.inv(c0)
    if x.exact and len(x.terms) == 1:
        return ctx.from_codes([(-v, c0_inv)], exact=True)
    bound = int(min(x.bound - 2 * v, ctx.prec))
    count = bound + v
    if count < 1:
        raise PrecisionError(
            "precision_exhausted",
            "inverse would carry no known coefficient",
            details={"ord": v, "prec": x.prec},
            hint="raise --prec",
        )
    b = [0] * count
    for k, c in x.terms:
        if k - v < count:
            b[k - v] = F.mul(c, c0_inv)
    z = [0] * count
    z[0] = 1
    for k in range(1, count):
        acc = 0
        for j in range(1, k + 1):
            if b[j] and z[k - j]:
                acc = F.add(acc, F.mul(b[j], z[k - j]))
        z[k] = F.neg(acc)
    return ctx.from_codes(((k - v, F.mul(c, c0_inv)) for k, c in enumerate(z)), prec=bound)


def ls_val(x: LSeries) -> Valuation:
    if x.is_exact_zero:
        return INF
    if x.is_zero_to_prec:
        return ZeroToPrecision(Fraction(x.prec, x.ctx.e))
    return Fraction(x.terms[0][0], x.ctx.e)


def ls_arith(x: LSeries, y: LSeries | None, op: str) -> LSeries:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inverse()
    raise InputError("unknown_op", f"unsupported series operation {op!r}")


def ls_frobenius(x: LSeries) -> LSeries:
    ctx = x.ctx
    p = ctx.p
    F = ctx.residue
    terms = ((k * p, F.frob(c)) for k, c in x.terms)
    if x.exact:
        if all(k * p < ctx.prec for k, _ in x.terms):
            return ctx.from_codes(terms, exact=True)
        return ctx.from_codes(terms, prec=ctx.prec)
    return ctx.from_codes(terms, prec=x.prec * p)


def ls_pow(x: LSeries, k: int) -> LSeries:
    if k < 0:
        return ls_pow(x.inverse(), -k)
    result = x.ctx.one()
    base = x
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def ls_extend(x: LSeries, new_e: int, new_residue: FieldDesc, prec: int | None = None) -> LSeries:
    ctx = x.ctx
    if new_e % ctx.e:
        raise InputError("bad_ramification", f"e={ctx.e} does not divide {new_e}")
    factor = new_e // ctx.e
    target = SeriesCtx(new_residue, new_e, prec if prec is not None else ctx.prec * factor)
    terms = [(k * factor, embed_code(c, ctx.residue, new_residue)) for k, c in x.terms]
    if x.exact:
        return target.from_codes(terms, exact=all(k < target.prec for k, _ in terms))
    return target.from_codes(terms, prec=x.prec * factor)


def ls_scale_uniformizer(x: LSeries, zeta: FFElem) -> LSeries:
    """Apply u -> zeta*u, fixing residue constants."""
    F = x.ctx.residue
    if zeta.field != F:
        raise InputError("field_mismatch", "zeta must lie in the residue field")
    terms = tuple((k, F.mul(c, F.pow(zeta.code, k))) for k, c in x.terms)
    return LSeries(x.ctx, terms, x.prec, x.exact)


def ls_coefficient(x: LSeries, k: int) -> FFElem:
    if k >= x.bound:
        raise PrecisionError("precision_exhausted", f"coefficient of {x.ctx.var}^{k} is beyond the known precision {x.prec}")
    for e, c in x.terms:
        if e == k:
            return FFElem(x.ctx.residue, c)
    return x.ctx.residue.zero()


def ls_agree(x: LSeries, y: LSeries, upto: int) -> bool:
    """True when x and y have equal coefficients below u^upto."""
    if upto > x.bound or upto > y.bound:
        raise PrecisionError("precision_exhausted", f"comparison up to {upto} exceeds known precision")
    a = {k: c for k, c in x.terms if k < upto}
    b = {k: c for k, c in y.terms if k < upto}
    return a == b


def ls_approximant(x: LSeries) -> LSeries:
    """The known terms of x as an exact polynomial."""
    return LSeries(x.ctx, x.terms, x.ctx.prec, True)


def closed_point(x: LSeries) -> FFElem:
    """Residue of x (value at u = 0)."""
    if x.terms and x.terms[0][0] < 0:
        raise InputError("negative_valuation", "series with negative valuation has no residue", details={"ord": x.terms[0][0]})
    return ls_coefficient(x, 0)


# -- polynomials with series coefficients (low degree first) ------------------


def poly_eval(coeffs: Sequence[LSeries], x: LSeries) -> LSeries:
    if not coeffs:
        return x.ctx.zero()
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def poly_derivative(coeffs: Sequence[LSeries]) -> list[LSeries]:
    return [c.scale(i) for i, c in enumerate(coeffs)][1:]


def _valuation_or_bound(v: Valuation) -> Fraction | float:
    if isinstance(v, ZeroToPrecision):
        return v.bound
    return v


def hensel_lift(f: Sequence[LSeries], x0: LSeries, max_iterations: int = 64) -> LSeries:
    """Newton iteration from ``x0`` to the root of ``f`` it determines."""
    if not f:
        raise InputError("empty_polynomial", "hensel_lift needs a non-empty polynomial")
    df = poly_derivative(f)
    fx = poly_eval(f, x0)
    dfx = poly_eval(df, x0) if df else x0.ctx.zero()
    if dfx.is_exact_zero:
        raise InputError("hensel_precondition", "derivative vanishes at the starting point", details={"v_f": ls_val(fx), "v_df": "inf"})
    if dfx.is_zero_to_prec:
        raise PrecisionError("derivative_zero_to_precision", "derivative vanishes through the known precision", details={"v_df": ls_val(dfx)})
    v_df = ls_val(dfx)
    v_f = ls_val(fx)
    if fx.is_exact_zero:
        return x0
    if not _valuation_or_bound(v_f) > 2 * v_df:
        raise InputError(
            "hensel_precondition",
            "need v(f(x0)) > 2 v(f'(x0))",
            details={"v_f": v_f, "v_df": v_df},
        )
    x = ls_approximant(x0)
    for _ in range(max_iterations):
        fx = poly_eval(f, x)
        if fx.is_exact_zero:
            return x
        dfx = poly_eval(df, x)
        if fx.is_zero_to_prec:
            # the root agrees with x below u^(B - ord f'(x))
            return x.truncate(fx.prec - dfx.ord)
        x = ls_approximant(x - fx / dfx)
    raise PrecisionError("no_convergence", f"Newton iteration did not settle in {max_iterations} steps")
