"""Galois data of additive polynomials P(X) = sum a_(i+1) X^(p^i) over F_q((t)).

Roots are computed in tame extensions F_q'((u)), u^e = t. The tame generator
acts as u -> zeta*u with zeta of exact order e; wild ramification is only
certified through Newton-polygon denominators, never constructed.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from algebra.ff import FFElem, FieldDesc, common_field, embed_code, ff_embed, ff_make, ff_primitive
from algebra.gltheory import ModMatrix
from algebra.mpoly import MPoly
from algebra.npoly import RootValuations, np_hull, np_root_valuations
from algebra.series import LSeries, SeriesCtx, ls_approximant, ls_extend, ls_scale_uniformizer, ls_val
from algebra.semilinear import rref_mod_p
from utils.errors import BudgetError, InputError, PrecisionError
from utils.telemetry import log_event

# largest residue field searched exhaustively for residue equations
_MAX_SEARCH_FIELD = 1 << 20


def _one_like(a: Any) -> Any:
    if isinstance(a, LSeries):
        return a.ctx.one()
    if isinstance(a, MPoly):
        return a.ring.one()
    return a.field.one()


def _is_one(x: Any) -> bool:
    return (x - 1).is_zero


@dataclass(frozen=True)
class AdditivePoly:
    p: int
    coeffs: tuple[Any, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise InputError("bad_additive", "an additive polynomial needs c >= 1")

    @property
    def c(self) -> int:
        return len(self.coeffs)

    @property
    def degree(self) -> int:
        return self.p ** self.c

    @property
    def ctx(self) -> SeriesCtx:
        a = self.coeffs[0]
        if not isinstance(a, LSeries):
            raise InputError("unsupported_base", "this operation needs series coefficients")
        return a.ctx

    def full(self) -> list[Any]:
        """a_1, ..., a_c, a_(c+1) = 1."""
        return [*self.coeffs, _one_like(self.coeffs[0])]

    def dense(self) -> list[LSeries]:
        ctx = self.ctx
        out = [ctx.zero()] * (self.degree + 1)
        for i, a in enumerate(self.full()):
            out[self.p ** i] = a
        return out

    def evaluate(self, x: LSeries) -> LSeries:
        acc = x.ctx.zero()
        power = x
        for i, a in enumerate(self.full()):
            if i:
                power = power.frobenius()
            if not a.is_exact_zero:
                acc = acc + a * power
        return acc

    def extend(self, e: int, residue: FieldDesc) -> "AdditivePoly":
        return AdditivePoly(self.p, tuple(ls_extend(a, e, residue) for a in self.coeffs))

    def __str__(self) -> str:
        parts = []
        for i, a in reversed(list(enumerate(self.full()))):
            if a.is_zero and i < self.c:
                continue
            mono = "X" if i == 0 else f"X^{self.p ** i}"
            s = str(a)
            parts.append(mono if s == "1" else f"({s})*{mono}")
        return " + ".join(parts)


def additive_from_dense(coeffs: Sequence[LSeries], p: int) -> AdditivePoly:
    """Validate sum coeffs[k] X^k as monic additive of degree p^c and return it."""
    deg = len(coeffs) - 1
    c = 0
    while p ** c < deg:
        c += 1
    if deg < p or p ** c != deg:
        raise InputError("not_additive", f"degree {deg} is not a power p^c with c >= 1", details={"degree": deg, "p": p})
    if coeffs[0].ctx.p != p:
        raise InputError("field_mismatch", f"coefficients have characteristic {coeffs[0].ctx.p}, expected {p}")
    powers = {p ** i for i in range(c + 1)}
    for k, a in enumerate(coeffs):
        if k not in powers and not a.is_zero:
            raise InputError("not_additive", f"coefficient of X^{k} must vanish in an additive polynomial", details={"index": k})
    if not _is_one(coeffs[deg]):
        raise InputError("not_monic", "additive polynomials are monic")
    return AdditivePoly(p, tuple(coeffs[p ** i] for i in range(c)))


def _check_separable(P: AdditivePoly) -> None:
    a1 = P.coeffs[0]
    if a1.is_exact_zero:
        raise InputError("inseparable", "a_1 = 0: P is not separable", hint="the roots of X^(p^c) carry no Galois action")
    if a1.is_zero_to_prec:
        raise PrecisionError("inseparable_to_precision", "a_1 vanishes through the known precision", hint="raise --prec")


def _normalized(v: Fraction, e0: int) -> Fraction:
    return v * e0


# -- tame roots ------------------------------------------------------------------


@dataclass(frozen=True)
class TameRootSystem:
    poly: AdditivePoly
    ctx: SeriesCtx
    roots: tuple[LSeries, ...]
    zeta: FFElem
    ramification: int

    @property
    def e(self) -> int:
        return self.ctx.e

    @property
    def nonzero_roots(self) -> list[LSeries]:
        return [r for r in self.roots if not r.is_exact_zero]

    @property
    def dim(self) -> int:
        return round(math.log(len(self.roots), self.poly.p))


class _Enlarge(Exception):
    def __init__(self, reason: str, ram_factor: int = 1, degree_factor: int = 1) -> None:
        super().__init__(reason)
        self.reason = reason
        self.ram_factor = ram_factor
        self.degree_factor = degree_factor


def _residue_solutions(F: FieldDesc, const: int, terms: Sequence[tuple[int, int]]) -> list[int]:
    """z in F with const + sum c z^k = 0, in code order."""
    out = []
    for z in range(F.order):
        acc = const
        for k, c in terms:
            acc = F.add(acc, F.mul(c, F.pow(z, k)))
        if acc == 0:
            out.append(z)
    return out


def _splitting_factor(F: FieldDesc, const: int, terms: Sequence[tuple[int, int]], want: int, extension_bound: int) -> int:
    """Least j >= 2 such that the residue equation has ``want`` solutions in F_(q^j)."""
    for j in range(2, extension_bound + 1):
        if F.order ** j > _MAX_SEARCH_FIELD:
            break
        Fj = ff_make(F.p, F.n * j)
        sols = _residue_solutions(Fj, embed_code(const, F, Fj), [(k, embed_code(c, F, Fj)) for k, c in terms])
        if len([z for z in sols if z or const]) >= want:
            return j
    raise BudgetError(
        "extension_bound_exhausted",
        f"residue equation over {F!r} does not split within extension degree {extension_bound}",
        details={"field": repr(F), "extension_bound": extension_bound},
        hint="raise --ext-bound",
    )


def _leading(a: LSeries) -> int:
    return a.terms[0][1]


def _leading_segment(R: LSeries, full: Sequence[LSeries], p: int) -> tuple[int, Fraction, list[int]]:
    """First segment of the polygon of P(X) + R: end x, slope, indices i on it."""
    pts: list[tuple[int, Fraction]] = [(0, Fraction(R.ord))]
    for i, a in enumerate(full):
        if a.terms:
            pts.append((p ** i, Fraction(a.terms[0][0])))
    hull = np_hull(pts)
    (x0, y0), (x1, y1) = hull.vertices[0], hull.vertices[1]
    slope = (y1 - y0) / (x1 - x0)
    on_line = []
    for i, a in enumerate(full):
        x = p ** i
        if x > x1:
            break
        line = y0 + slope * x
        if a.terms:
            if a.terms[0][0] == line:
                on_line.append(i)
        elif not a.exact and a.prec <= line:
            raise PrecisionError(
                "indeterminate_polygon",
                f"a_{i + 1} is only known to vanish below u^{a.prec}",
                details={"index": i + 1, "bound": a.prec},
                hint="raise --prec",
            )
    return x1, -slope, on_line


def _settle(a: LSeries, R: LSeries, full: Sequence[LSeries], p: int) -> LSeries:
    """Precision to which the exact approximant a pins down its nearest root."""
    B = R.prec
    o1 = full[0].ord
    for i, c in enumerate(full[1:], start=1):
        if c.is_exact_zero:
            continue
        vi = c.ord if c.terms else c.prec
        if Fraction(o1 - B) > Fraction(vi - B, p ** i):
            raise PrecisionError(
                "precision_exhausted",
                "residual vanishes to precision but the nearest root is not isolated",
                details={"prec": B},
                hint="raise --prec",
            )
    return a.truncate(int(B - o1))


def _refine_root(Q: AdditivePoly, a: LSeries, extension_bound: int) -> LSeries:
    """Move a to the root of Q it approximates, using Q(a + d) = Q(a) + Q(d)."""
    ctx = a.ctx
    full = Q.full()
    F = ctx.residue
    a1_inv = full[0].inverse()
    for _ in range(4 * ctx.prec + 16):
        R = Q.evaluate(a)
        if R.is_exact_zero:
            return a
        if R.is_zero_to_prec:
            return _settle(a, R, full, Q.p)
        x1, sigma, on_line = _leading_segment(R, full, Q.p)
        if x1 == 1:
            a = ls_approximant(a - R * a1_inv)
            continue
        if sigma.denominator != 1:
            if sigma.denominator % Q.p == 0:
                raise InputError(
                    "wild_refinement",
                    "the next correction term needs wild ramification",
                    details={"valuation": sigma / ctx.e},
                    hint="use the certificate subcommand for wild instances",
                )
            raise _Enlarge("ramification", ram_factor=sigma.denominator)
        m = int(sigma)
        terms = [(Q.p ** i, _leading(full[i])) for i in on_line]
        sols = _residue_solutions(F, _leading(R), terms)
        if not sols:
            j = _splitting_factor(F, _leading(R), terms, 1, extension_bound)
            raise _Enlarge("residue_solution", degree_factor=j)
        a = a + ctx.monomial(m, FFElem(F, sols[0]))
    raise PrecisionError("no_convergence", "root refinement did not settle", hint="raise --prec")


def _add_to_span(span: list[LSeries], y: LSeries, p: int) -> list[LSeries]:
    return span + [r + y.scale(k) for k in range(1, p) for r in span]


def _segment_roots(Q: AdditivePoly, m: int, mult: int, span: list[LSeries], extension_bound: int) -> list[LSeries]:
    ctx = Q.ctx
    F = ctx.residue
    p = Q.p
    full = Q.full()
    heights = {}
    for i, a in enumerate(full):
        if a.terms:
            heights[i] = a.terms[0][0] + m * p ** i
    H = min(heights.values())
    for i, a in enumerate(full):
        if not a.terms and not a.exact and a.prec + m * p ** i <= H:
            raise PrecisionError("indeterminate_polygon", f"a_{i + 1} vanishes only to precision", hint="raise --prec")
    terms = [(p ** i, _leading(full[i])) for i, h in heights.items() if h == H]
    want = mult // len(span)
    residues = [z for z in _residue_solutions(F, 0, terms) if z]
    if len(residues) < want:
        raise _Enlarge("residue_roots", degree_factor=_splitting_factor(F, 0, terms, want, extension_bound))
    for z in residues:
        if any(r.terms and r.terms[0] == (m, z) for r in span):
            continue
        y = _refine_root(Q, ctx.monomial(m, FFElem(F, z)), extension_bound)
        span = _add_to_span(span, y, p)
    return span


def _residue_degree(F0: FieldDesc, ram: int, step: int) -> int:
    k = step
    while (F0.order ** k - 1) % ram:
        k += step
    return k


def _root_key(x: LSeries, cut: int) -> tuple:
    return tuple((k, c) for k, c in x.terms if k < cut)


def _canonical(roots: Sequence[LSeries]) -> list[LSeries]:
    nonzero = [r for r in roots if not r.is_exact_zero]
    cut = min((int(min(r.bound, r.ctx.prec)) for r in nonzero), default=0)
    nonzero.sort(key=lambda r: (r.ord, _root_key(r, cut)))
    zero = [r for r in roots if r.is_exact_zero]
    return zero[:1] + nonzero


def _tame_roots_at(P: AdditivePoly, rv: RootValuations, ram: int, k: int, extension_bound: int) -> TameRootSystem:
    ctx0 = P.ctx
    F0 = ctx0.residue
    F = ff_make(F0.p, F0.n * k)
    e = ctx0.e * ram
    Q = P.extend(e, F)
    ctx = Q.ctx
    span = [ctx.zero()]
    for v, mult in rv.slopes:
        m = v * e
        span = _segment_roots(Q, int(m), mult, span, extension_bound)
        if len(span) > P.degree:
            raise PrecisionError("root_count_mismatch", "more roots than the degree allows", hint="raise --prec")
    if len(span) != P.degree:
        raise PrecisionError("root_count_mismatch", f"found {len(span)} of {P.degree} roots", hint="raise --prec")
    for r in span:
        if not Q.evaluate(r).is_zero:
            raise PrecisionError("root_check_failed", "a constructed root does not annihilate P", hint="raise --prec")
    roots = _canonical(span)
    zeta = ff_primitive(F) ** ((F.order - 1) // ram)
    return TameRootSystem(Q, ctx, tuple(roots), zeta, ram)


def tame_roots(P: AdditivePoly, extension_bound: int = 8) -> TameRootSystem:
    """All roots of P in a tame extension F_q'((u)), enlarging e and q' until P splits."""
    _check_separable(P)
    ctx0 = P.ctx
    rv = np_root_valuations(P.dense())
    ram = 1
    for v, _ in rv.slopes:
        den = _normalized(v, ctx0.e).denominator
        if den % P.p == 0:
            raise InputError(
                "wild_slope",
                f"root valuation {v} has denominator divisible by p={P.p}",
                details={"valuation": v},
                hint="use the certificate subcommand for wild instances",
            )
        ram = math.lcm(ram, den)
    step = 1
    for attempt in range(extension_bound + 1):
        try:
            k = _residue_degree(ctx0.residue, ram, step)
            return _tame_roots_at(P, rv, ram, k, extension_bound)
        except _Enlarge as grow:
            ram *= grow.ram_factor
            if grow.degree_factor > 1:
                step = k * grow.degree_factor
            log_event("tame_roots_enlarged", reason=grow.reason, attempt=attempt + 1, ramification=ram, degree_step=step)
    raise BudgetError(
        "extension_bound_exhausted",
        f"P did not split after {extension_bound} enlargements",
        details={"ramification": ram, "degree_step": step},
        hint="raise --ext-bound",
    )


# -- tame generator ----------------------------------------------------------------


def tame_generator_matrix(T: TameRootSystem, zeta: FFElem | None = None, match_min_terms: int = 8) -> ModMatrix:
    """Matrix over F_p of u -> zeta*u on the root group, in the greedy basis."""
    p = T.poly.p
    zeta = T.zeta if zeta is None else zeta
    if zeta.field != T.ctx.residue:
        raise InputError("field_mismatch", "zeta must lie in the residue field of the root system")
    if zeta.is_zero or not (zeta ** T.ramification - 1).is_zero:
        raise InputError("bad_zeta", f"zeta must be a root of unity of order dividing {T.ramification}")
    nonzero = T.nonzero_roots
    if not nonzero:
        raise InputError("trivial_root_group", "the root group is trivial")
    lo = min(r.ord for r in nonzero)
    cut = min(int(min(r.bound, T.ctx.prec)) for r in nonzero)
    if cut - lo < match_min_terms:
        raise PrecisionError(
            "match_precision",
            f"roots are known on {cut - lo} terms, matching needs {match_min_terms}",
            details={"known_terms": cut - lo, "required": match_min_terms},
            hint="raise --prec",
        )
    keys = {_root_key(r, cut) for r in T.roots}
    if len(keys) != len(T.roots):
        raise PrecisionError("roots_not_separated", "two roots agree on every known term", hint="raise --prec")

    basis: list[LSeries] = []
    span = [T.ctx.zero()]
    for r in nonzero:
        if _root_key(r, cut) not in {_root_key(s, cut) for s in span}:
            basis.append(r)
            span = _add_to_span(span, r, p)
    coords: dict[tuple, tuple[int, ...]] = {}
    for vec in itertools.product(range(p), repeat=len(basis)):
        acc = T.ctx.zero()
        for k, b in zip(vec, basis):
            if k:
                acc = acc + b.scale(k)
        coords[_root_key(acc, cut)] = vec
    if set(coords) != keys:
        raise PrecisionError("roots_not_closed", "the root set is not closed under addition to precision", hint="raise --prec")

    cols = []
    for j, b in enumerate(basis):
        image = _root_key(ls_scale_uniformizer(b, zeta), cut)
        if image not in coords:
            raise PrecisionError(
                "unmatched_image",
                f"image of basis root {j} matches no root",
                details={"basis_index": j, "known_terms": cut - lo},
                hint="raise --prec; an unmatched image can also mean the root set is not Galois-stable",
            )
        cols.append(coords[image])
    n = len(basis)
    return ModMatrix.make([[cols[j][i] for j in range(n)] for i in range(n)], p, 1)


def cartan_span(M: ModMatrix) -> list[tuple[int, ...]]:
    """Elements of the F_p-span of the powers of M, as sorted flat tuples."""
    if M.m != 1:
        raise InputError("bad_level", "cartan checks work over F_p (m = 1)")
    powers = []
    cur = ModMatrix.make([[1 if i == j else 0 for j in range(M.n)] for i in range(M.n)], M.p)
    seen = set()
    while cur.flat not in seen:
        seen.add(cur.flat)
        powers.append(list(cur.flat))
        cur = cur @ M
    basis, _ = rref_mod_p(powers, M.p)
    out = set()
    for vec in itertools.product(range(M.p), repeat=len(basis)):
        out.add(tuple(sum(k * b[i] for k, b in zip(vec, basis)) % M.p for i in range(M.n * M.n)))
    return sorted(out)


def cartan_report(M: ModMatrix) -> dict[str, Any]:
    if not M.is_invertible:
        raise InputError("singular_matrix", "cartan_check needs an invertible matrix")
    span = cartan_span(M)
    elems = set(span)
    closed = all(
        (ModMatrix.from_flat(a, M.n, M.p, 1) @ ModMatrix.from_flat(b, M.n, M.p, 1)).flat in elems
        for a in span
        for b in span
    )
    zero = tuple([0] * (M.n * M.n))
    domain = all(ModMatrix.from_flat(a, M.n, M.p, 1).is_invertible for a in span if a != zero)
    order = M.order()
    field = closed and domain and len(span) == M.p ** M.n
    return {
        "span_size": len(span),
        "closed": closed,
        "zero_divisor_free": domain,
        "order": order,
        "cartan": field and order == M.p ** M.n - 1,
    }


def cartan_check(M: ModMatrix) -> bool:
    return cartan_report(M)["cartan"]


# -- certificates ------------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    alpha: FFElem
    valuation: Fraction

    def as_dict(self) -> dict[str, Any]:
        return {"alpha": self.alpha.code, "field": [self.alpha.field.p, self.alpha.field.n], "valuation": self.valuation}


@dataclass(frozen=True)
class MonodromyCertificate:
    slopes: tuple[tuple[Fraction, int], ...]
    zero_roots: int
    ram_divisors: tuple[int, ...]
    tame: bool
    image_order_divisors: tuple[int, ...]
    witness: Witness | None = None
    witness_slopes: tuple[tuple[Fraction, int], ...] = ()

    def as_dict(self) -> dict[str, Any]:
        return {
            "slopes": [[v, m] for v, m in self.slopes],
            "zero_roots": self.zero_roots,
            "ram_divisors": list(self.ram_divisors),
            "tame": self.tame,
            "image_order_divisors": list(self.image_order_divisors),
            "witness": self.witness.as_dict() if self.witness else None,
            "witness_slopes": [[v, m] for v, m in self.witness_slopes],
        }


def _divisors_from(denominators: set[int]) -> tuple[int, ...]:
    total = 1
    for d in denominators:
        total = math.lcm(total, d)
    return tuple(sorted({d for d in denominators if d > 1} | {total}))


def _extended_to(P: AdditivePoly, F: FieldDesc) -> AdditivePoly:
    ctx = P.ctx
    if F == ctx.residue:
        return P
    return AdditivePoly(P.p, tuple(ls_extend(a, ctx.e, F, ctx.prec) for a in P.coeffs))


def nonsplit_witness(P: AdditivePoly, search: FieldDesc) -> Witness | None:
    """First alpha in ``search`` (code order) with v(P(alpha)) = 1, or None."""
    ctx0 = P.ctx
    if search.p != P.p:
        raise InputError("field_mismatch", f"search field has characteristic {search.p}, expected {P.p}")
    h = ls_val(P.coeffs[0])
    if not isinstance(h, Fraction) or _normalized(h, ctx0.e) != 1:
        log_event("nonsplit_witness_hypothesis", h=h if isinstance(h, Fraction) else str(h), e=ctx0.e)
    F = common_field(ctx0.residue, search)
    Q = _extended_to(P, F)
    target = Fraction(1, ctx0.e)
    for alpha in search.elements():
        value = Q.evaluate(Q.ctx.constant(ff_embed(alpha, search, F)))
        v = ls_val(value)
        if isinstance(v, Fraction) and v == target:
            return Witness(alpha, _normalized(v, ctx0.e))
    return None


def monodromy_certificate(P: AdditivePoly, search: FieldDesc | None = None) -> MonodromyCertificate:
    """Ramification divisors forced by the root valuations of P (and of P - P(alpha))."""
    _check_separable(P)
    ctx0 = P.ctx
    rv = np_root_valuations(P.dense())
    dens = {_normalized(v, ctx0.e).denominator for v, _ in rv.slopes}
    witness = None
    witness_slopes: tuple[tuple[Fraction, int], ...] = ()
    if search is not None:
        witness = nonsplit_witness(P, search)
        if witness is not None:
            F = common_field(ctx0.residue, search)
            Q = _extended_to(P, F)
            dense = Q.dense()
            alpha = Q.ctx.constant(ff_embed(witness.alpha, search, F))
            dense[0] = -Q.evaluate(alpha)
            wv = np_root_valuations(dense)
            witness_slopes = wv.slopes
            dens |= {_normalized(v, ctx0.e).denominator for v, _ in wv.slopes}
    divisors = _divisors_from(dens)
    return MonodromyCertificate(
        slopes=rv.slopes,
        zero_roots=rv.zero_roots,
        ram_divisors=divisors,
        tame=all(d % P.p for d in dens),
        image_order_divisors=divisors,
        witness=witness,
        witness_slopes=witness_slopes,
    )


# -- the level tower of the one-dimensional connected case ----------------------------


@dataclass(frozen=True)
class IgusaTower:
    valuations: tuple[Fraction, ...]
    ram_bound: int

    def as_dict(self) -> dict[str, Any]:
        return {"valuations": list(self.valuations), "ram_bound": self.ram_bound}


def igusa_tower(p: int, a1: LSeries, alpha: LSeries, levels: int) -> IgusaTower:
    """Valuations v(y_1), ..., v(y_n) of V(y_1) = 0, V^(p^(i-1))(y_i) = y_(i-1), by polygons only."""
    if levels < 1:
        raise InputError("bad_levels", f"levels must be >= 1, got {levels}")
    if a1.ctx.p != p or alpha.ctx.p != p:
        raise InputError("field_mismatch", f"series must have characteristic {p}")
    e0 = a1.ctx.e
    va, vb = ls_val(a1), ls_val(alpha)
    if not isinstance(va, Fraction) or _normalized(va, e0) != 1:
        raise InputError("igusa_hypothesis", "need v(a1) = 1", details={"v_a1": va if isinstance(va, Fraction) else str(va)})
    if not isinstance(vb, Fraction) or vb != 0:
        raise InputError("igusa_hypothesis", "need alpha to be a unit", details={"v_alpha": vb if isinstance(vb, Fraction) else str(vb)})
    va = _normalized(va, e0)
    first = np_hull([(1, va), (p, vb)])
    vals = [-first.slopes[0][0]]
    for i in range(2, levels + 1):
        scale = p ** (i - 1)
        hull = np_hull([(0, vals[-1]), (1, scale * va), (p, scale * vb)])
        if len(hull.vertices) != 2:
            raise InputError(
                "split_polygon",
                f"level {i} polygon has {len(hull.vertices) - 1} segments",
                details={"level": i},
            )
        vals.append(-hull.slopes[0][0])
    ram = 1
    for v in vals:
        ram = math.lcm(ram, v.denominator)
    return IgusaTower(tuple(vals), ram)

