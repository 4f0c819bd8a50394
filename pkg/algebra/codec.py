"""JSON codec for the algebra types.

Every ``load_*`` takes the decoded JSON value plus the dotted path it was
found at, and raises ``InputError`` with ``details["path"]`` on the first
malformed field. ``dump_*`` output re-parses through the matching loader.
"""
from __future__ import annotations

import dataclasses
import math
from fractions import Fraction
from typing import Any

from algebra.btgroup import BTDesc
from algebra.ff import FFElem, FieldDesc, ff_make
from algebra.gltheory import ModMatrix
from algebra.monodromy import AdditivePoly, TameRootSystem, additive_from_dense
from algebra.mpoly import MPoly, MPolyRing
from algebra.npoly import NewtonPolygon
from algebra.semilinear import Base, SigmaMat
from algebra.series import INF, LSeries, SeriesCtx, ZeroToPrecision
from algebra.strata import NPgon
from utils.errors import AlgebraError, InputError


def _at(path: str, key: Any) -> str:
    return f"{path}.{key}" if path else str(key)


def _fail(path: str, message: str, code: str = "bad_payload") -> InputError:
    return InputError(code, f"{path or '<root>'}: {message}", details={"path": path})


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise _fail(path, f"expected an integer, got {value!r}")
    return value


def _list(value: Any, path: str) -> list[Any]:
    if not isinstance(value, list):
        raise _fail(path, f"expected a list, got {type(value).__name__}")
    return value


def _dict(value: Any, path: str) -> dict[str, Any]:
    if not isinstance(value, dict):
        raise _fail(path, f"expected an object, got {type(value).__name__}")
    return value


def _field_of(data: dict[str, Any], key: str, path: str) -> Any:
    if key not in data:
        raise _fail(_at(path, key), "missing field")
    return data[key]


def _relocated(exc: AlgebraError, path: str) -> InputError:
    """Re-raise a domain InputError with the payload path attached."""
    details = dict(exc.details) if isinstance(exc.details, dict) else {"cause": exc.details} if exc.details is not None else {}
    details.setdefault("path", path)
    return InputError(exc.code, f"{path or '<root>'}: {exc.message}", details=details, hint=exc.hint)


# -- rationals and valuations ---------------------------------------------------------


def dump_rational(x: Fraction | int) -> list[int]:
    x = Fraction(x)
    return [x.numerator, x.denominator]


def load_rational(value: Any, path: str = "") -> Fraction:
    if isinstance(value, bool):
        raise _fail(path, "expected a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise _fail(path, f"cannot read {value!r} as a rational") from None
    if isinstance(value, list) and len(value) == 2:
        num, den = _int(value[0], _at(path, 0)), _int(value[1], _at(path, 1))
        if den == 0:
            raise _fail(_at(path, 1), "zero denominator")
        return Fraction(num, den)
    raise _fail(path, f"expected [num, den], an integer or 'a/b', got {value!r}")


def dump_valuation(v: Fraction | float | ZeroToPrecision) -> Any:
    if isinstance(v, ZeroToPrecision):
        return {"zero_to_precision": dump_rational(v.bound)}
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return dump_rational(v)


def load_valuation(value: Any, path: str = "") -> Fraction | float | ZeroToPrecision:
    if value == "inf":
        return INF
    if isinstance(value, dict):
        return ZeroToPrecision(load_rational(_field_of(value, "zero_to_precision", path), _at(path, "zero_to_precision")))
    return load_rational(value, path)


# -- fields and elements --------------------------------------------------------------


def dump_field(F: FieldDesc) -> dict[str, int]:
    return {"p": F.p, "n": F.n}


def load_field(value: Any, path: str = "") -> FieldDesc:
    data = _dict(value, path)
    p = _int(_field_of(data, "p", path), _at(path, "p"))
    n = _int(data.get("n", 1), _at(path, "n"))
    try:
        return ff_make(p, n)
    except InputError as exc:
        raise _relocated(exc, path) from exc


def dump_element(x: FFElem) -> int | list[int]:
    return x.code if x.field.n == 1 else list(x.coeffs)


def load_element(value: Any, F: FieldDesc, path: str = "") -> FFElem:
    """An int is read in the prime field; a list gives power-basis coefficients."""
    if isinstance(value, list):
        if len(value) != F.n:
            raise _fail(path, f"{F!r} elements have {F.n} coefficients, got {len(value)}")
        coeffs = [_int(c, _at(path, i)) % F.p for i, c in enumerate(value)]
        return F.elem(coeffs)
    return F.from_int(_int(value, path))


# -- bases ----------------------------------------------------------------------------


def dump_base(base: Base) -> dict[str, Any]:
    if isinstance(base, FieldDesc):
        return {"kind": "field", **dump_field(base)}
    if isinstance(base, SeriesCtx):
        return {"kind": "series", **dump_field(base.residue), "e": base.e, "prec": base.prec}
    return {"kind": "mpoly", **dump_field(base.residue), "nvars": base.nvars, "degree_cap": base.degree_cap}


def load_base(value: Any, path: str = "", prec: int | None = None, degree_cap: int | None = None) -> Base:
    """``prec`` and ``degree_cap`` fill in (and override) the payload values when given."""
    data = _dict(value, path)
    kind = data.get("kind", "series")
    F = load_field(data, path)
    try:
        if kind == "field":
            return F
        if kind == "series":
            e = _int(data.get("e", 1), _at(path, "e"))
            N = prec if prec is not None else _int(data.get("prec", 64), _at(path, "prec"))
            return SeriesCtx(F, e, N)
        if kind == "mpoly":
            nvars = _int(_field_of(data, "nvars", path), _at(path, "nvars"))
            cap = data.get("degree_cap", 4) if degree_cap is None else degree_cap
            if cap is not None:
                cap = _int(cap, _at(path, "degree_cap"))
            return MPolyRing(F, nvars, cap)
    except InputError as exc:
        raise _relocated(exc, path) from exc
    raise _fail(_at(path, "kind"), f"unknown base kind {kind!r}; use field, series or mpoly")


# -- series and polynomials -------------------------------------------------------------


def dump_series(x: LSeries) -> dict[str, Any]:
    F = x.ctx.residue
    out: dict[str, Any] = {"terms": [[k, dump_element(FFElem(F, c))] for k, c in x.terms], "exact": x.exact}
    if not x.exact:
        out["prec"] = x.prec
    return out


def _terms(value: Any, F: FieldDesc, path: str) -> list[tuple[int, FFElem]]:
    out = []
    for i, item in enumerate(_list(value, path)):
        where = _at(path, i)
        if not isinstance(item, list) or len(item) != 2:
            raise _fail(where, "expected [exponent, coefficient]")
        out.append((_int(item[0], _at(where, 0)), load_element(item[1], F, _at(where, 1))))
    return out


def load_series(value: Any, ctx: SeriesCtx, path: str = "") -> LSeries:
    """A term list or an int is exact; an object is inexact unless it says ``"exact": true``."""
    if isinstance(value, int) and not isinstance(value, bool):
        return ctx.constant(value)
    if isinstance(value, list):
        return ctx.series(_terms(value, ctx.residue, path), exact=True)
    data = _dict(value, path)
    terms = _terms(data.get("terms", []), ctx.residue, _at(path, "terms"))
    exact = data.get("exact", False)
    if not isinstance(exact, bool):
        raise _fail(_at(path, "exact"), "expected true or false")
    prec = data.get("prec")
    if prec is not None:
        prec = _int(prec, _at(path, "prec"))
        if prec < 1:
            raise _fail(_at(path, "prec"), "precision must be >= 1")
    return ctx.series(terms, prec=prec, exact=exact)


def dump_mpoly(x: MPoly) -> list[list[Any]]:
    F = x.ring.residue
    return [[dump_element(FFElem(F, c)), list(m)] for m, c in x.terms]


def load_mpoly(value: Any, ring: MPolyRing, path: str = "") -> MPoly:
    if isinstance(value, int) and not isinstance(value, bool):
        return ring.constant(value)
    terms = []
    for i, item in enumerate(_list(value, path)):
        where = _at(path, i)
        if not isinstance(item, list) or len(item) != 2:
            raise _fail(where, "expected [coefficient, [e1, ..., em]]")
        exps = [_int(e, _at(_at(where, 1), j)) for j, e in enumerate(_list(item[1], _at(where, 1)))]
        terms.append((exps, load_element(item[0], ring.residue, _at(where, 0))))
    try:
        return ring.poly(terms)
    except InputError as exc:
        raise _relocated(exc, path) from exc


def dump_entry(x: Any) -> Any:
    if isinstance(x, FFElem):
        return dump_element(x)
    if isinstance(x, LSeries):
        return dump_series(x)
    return dump_mpoly(x)


def load_entry(value: Any, base: Base, path: str = "") -> Any:
    if isinstance(base, FieldDesc):
        return load_element(value, base, path)
    if isinstance(base, SeriesCtx):
        return load_series(value, base, path)
    return load_mpoly(value, base, path)


# -- matrices and descriptors ------------------------------------------------------------


def dump_sigma(M: SigmaMat) -> dict[str, Any]:
    return {"base": dump_base(M.base), "rows": [[dump_entry(x) for x in r] for r in M.entries]}


def _rows(value: Any, base: Base, path: str) -> list[list[Any]]:
    rows = _list(value, path)
    out = []
    for i, r in enumerate(rows):
        where = _at(path, i)
        r = _list(r, where)
        if len(r) != len(rows):
            raise _fail(where, f"row has {len(r)} entries, matrix has {len(rows)} rows", code="not_square")
        out.append([load_entry(x, base, _at(where, j)) for j, x in enumerate(r)])
    return out


def load_sigma(value: Any, path: str = "", prec: int | None = None, degree_cap: int | None = None) -> SigmaMat:
    data = _dict(value, path)
    base = load_base(_field_of(data, "base", path), _at(path, "base"), prec, degree_cap)
    rows = _rows(_field_of(data, "rows", path), base, _at(path, "rows"))
    return SigmaMat(base, tuple(tuple(r) for r in rows))


def dump_btdesc(B: BTDesc) -> dict[str, Any]:
    return {"c": B.c, "d": B.d, **dump_sigma(B.hw)}


def load_btdesc(value: Any, path: str = "", prec: int | None = None, degree_cap: int | None = None) -> BTDesc:
    """``c`` defaults to the matrix size and ``d`` to 1."""
    data = _dict(value, path)
    hw = load_sigma(data, path, prec, degree_cap)
    c = _int(data.get("c", hw.size), _at(path, "c"))
    d = _int(data.get("d", 1), _at(path, "d"))
    try:
        return BTDesc(c, d, hw)
    except InputError as exc:
        raise _relocated(exc, path) from exc


def dump_additive(P: AdditivePoly) -> dict[str, Any]:
    return {"base": dump_base(P.ctx), "coeffs": [dump_series(a) for a in P.coeffs]}


def load_additive(value: Any, path: str = "", prec: int | None = None) -> AdditivePoly:
    data = _dict(value, path)
    ctx = load_base(_field_of(data, "base", path), _at(path, "base"), prec)
    if not isinstance(ctx, SeriesCtx):
        raise _fail(_at(path, "base"), "additive polynomials need a series base", code="unsupported_base")
    try:
        if "dense" in data:
            where = _at(path, "dense")
            dense = [load_series(x, ctx, _at(where, i)) for i, x in enumerate(_list(data["dense"], where))]
            if not dense:
                raise _fail(where, "empty coefficient list")
            return additive_from_dense(dense, ctx.p)
        where = _at(path, "coeffs")
        coeffs = [load_series(x, ctx, _at(where, i)) for i, x in enumerate(_list(_field_of(data, "coeffs", path), where))]
        return AdditivePoly(ctx.p, tuple(coeffs))
    except InputError as exc:
        if isinstance(exc.details, dict) and "path" in exc.details:
            raise
        raise _relocated(exc, path) from exc


# -- polygons and groups --------------------------------------------------------------


def dump_newton_polygon(N: NewtonPolygon) -> dict[str, Any]:
    return {"vertices": [[x, dump_rational(y)] for x, y in N.vertices]}


def load_newton_polygon(value: Any, path: str = "") -> NewtonPolygon:
    data = _dict(value, path)
    where = _at(path, "vertices")
    vertices = []
    for i, item in enumerate(_list(_field_of(data, "vertices", path), where)):
        at = _at(where, i)
        if not isinstance(item, list) or len(item) != 2:
            raise _fail(at, "expected [x, y]")
        vertices.append((_int(item[0], _at(at, 0)), load_rational(item[1], _at(at, 1))))
    return NewtonPolygon(tuple(vertices))


def dump_npgon(b: NPgon) -> dict[str, Any]:
    return {"c": b.c, "d": b.d, "slopes": [dump_rational(s) for s in b.slopes]}


def load_npgon(value: Any, path: str = "") -> NPgon:
    data = _dict(value, path)
    c = _int(_field_of(data, "c", path), _at(path, "c"))
    d = _int(_field_of(data, "d", path), _at(path, "d"))
    where = _at(path, "slopes")
    slopes = tuple(load_rational(s, _at(where, i)) for i, s in enumerate(_list(_field_of(data, "slopes", path), where)))
    try:
        return NPgon(c, d, slopes)
    except InputError as exc:
        raise _relocated(exc, path) from exc


def dump_modmatrix(M: ModMatrix) -> dict[str, Any]:
    return M.as_dict()


def load_modmatrix(value: Any, path: str = "", p: int | None = None, m: int | None = None) -> ModMatrix:
    """A bare row list needs ``p`` (and optionally ``m``) from the caller."""
    if isinstance(value, list):
        data: dict[str, Any] = {"rows": value, "p": p, "m": m or 1}
    else:
        data = _dict(value, path)
    p_val = data.get("p", p)
    if p_val is None:
        raise _fail(_at(path, "p"), "missing field")
    p_val = _int(p_val, _at(path, "p"))
    m_val = _int(data.get("m", m or 1), _at(path, "m"))
    where = _at(path, "rows")
    rows = [
        [_int(x, _at(_at(where, i), j)) for j, x in enumerate(_list(r, _at(where, i)))]
        for i, r in enumerate(_list(_field_of(data, "rows", path), where))
    ]
    try:
        M = ModMatrix.make(rows, p_val, m_val)
    except InputError as exc:
        raise _relocated(exc, path) from exc
    if "n" in data and data["n"] != M.n:
        raise _fail(_at(path, "n"), f"n={data['n']} but the matrix has {M.n} rows")
    return M


def dump_tame_roots(T: TameRootSystem) -> dict[str, Any]:
    return {
        "base": dump_base(T.ctx),
        "roots": [dump_series(r) for r in T.roots],
        "zeta": dump_element(T.zeta),
        "ramification": T.ramification,
        "dim": T.dim,
    }


def to_jsonable(obj: Any) -> Any:
    """Render results for the CLI; algebra values use the codec formats above."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return dump_rational(obj)
    if isinstance(obj, float):
        return "inf" if math.isinf(obj) and obj > 0 else obj
    if isinstance(obj, ZeroToPrecision):
        return dump_valuation(obj)
    if isinstance(obj, FFElem):
        return dump_element(obj)
    if isinstance(obj, LSeries):
        return dump_series(obj)
    if isinstance(obj, MPoly):
        return dump_mpoly(obj)
    if isinstance(obj, (FieldDesc, SeriesCtx, MPolyRing)):
        return dump_base(obj)
    if isinstance(obj, TameRootSystem):
        return dump_tame_roots(obj)
    if isinstance(obj, SigmaMat):
        return dump_sigma(obj)
    if isinstance(obj, BTDesc):
        return dump_btdesc(obj)
    if isinstance(obj, AdditivePoly):
        return dump_additive(obj)
    if isinstance(obj, NPgon):
        return dump_npgon(obj)
    if isinstance(obj, NewtonPolygon):
        return dump_newton_polygon(obj)
    if dataclasses.is_dataclass(obj) and hasattr(obj, "as_dict"):
        return to_jsonable(obj.as_dict())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [to_jsonable(v) for v in obj]
        return sorted(items) if isinstance(obj, (set, frozenset)) else items
    raise TypeError(f"cannot serialise {type(obj).__name__}")
