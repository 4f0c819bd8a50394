"""Frobenius-semilinear matrix algebra.

A ``SigmaMat`` M stands for the map x -> M * x^(p), where x^(p) applies the
base Frobenius to every coordinate. Bases are a finite field, a series
context or a truncated multivariate polynomial ring.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Sequence

from algebra.ff import FFElem, FieldDesc, embed_code, ff_make
from algebra.mpoly import MPoly, MPolyRing
from algebra.series import LSeries, SeriesCtx, closed_point as series_residue, ls_agree, ls_approximant, ls_extend
from utils.errors import InputError
from utils.telemetry import log_event

Base = FieldDesc | SeriesCtx | MPolyRing
Matrix = list[list[Any]]


def base_field(base: Base) -> FieldDesc:
    return base if isinstance(base, FieldDesc) else base.residue


def coerce(base: Base, value: Any) -> Any:
    if isinstance(value, (FFElem, LSeries, MPoly)):
        if isinstance(value, FFElem) and not isinstance(base, FieldDesc):
            return base.constant(value)
        return value
    if isinstance(base, FieldDesc):
        return base.from_int(value)
    return base.constant(value)


@dataclass(frozen=True)
class SigmaMat:
    base: Base
    entries: tuple[tuple[Any, ...], ...]

    @classmethod
    def from_rows(cls, base: Base, rows: Sequence[Sequence[Any]]) -> "SigmaMat":
        size = len(rows)
        if any(len(r) != size for r in rows):
            raise InputError("not_square", "Hasse-Witt matrices must be square", details={"rows": [len(r) for r in rows]})
        return cls(base, tuple(tuple(coerce(base, x) for x in r) for r in rows))

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def is_field_base(self) -> bool:
        return isinstance(self.base, FieldDesc)

    def rows(self) -> Matrix:
        return [list(r) for r in self.entries]

    def frobenius(self, k: int = 1) -> "SigmaMat":
        return SigmaMat(self.base, tuple(tuple(x.frobenius(k) for x in r) for r in self.entries))

    def apply(self, v: Sequence[Any]) -> list[Any]:
        """phi(v) = M * v^(p)."""
        return mat_vec(self.rows(), [x.frobenius() for x in v], self.base)


# -- plain matrix helpers ------------------------------------------------------


def mat_identity(base: Base, c: int) -> Matrix:
    zero, one = base.zero(), base.one()
    return [[one if i == j else zero for j in range(c)] for i in range(c)]


def mat_mul(a: Matrix, b: Matrix, base: Base) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new = []
        for j in range(cols):
            acc = base.zero()
            for k in range(inner):
                acc = acc + row[k] * b[k][j]
            new.append(acc)
        out.append(new)
    return out


def mat_vec(a: Matrix, v: Sequence[Any], base: Base) -> list[Any]:
    out = []
    for row in a:
        acc = base.zero()
        for x, y in zip(row, v):
            acc = acc + x * y
        out.append(acc)
    return out


def frobenius_matrix(a: Matrix, j: int) -> Matrix:
    if j == 0:
        return [list(r) for r in a]
    return [[x.frobenius(j) for x in r] for r in a]


def mat_is_zero(a: Matrix) -> bool:
    return all(x.is_zero for r in a for x in r)


def _det_field(a: Matrix, F: FieldDesc) -> FFElem:
    n = len(a)
    m = [list(r) for r in a]
    det = F.one()
    for col in range(n):
        pivot = next((r for r in range(col, n) if not m[r][col].is_zero), None)
        if pivot is None:
            return F.zero()
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det = det * m[col][col]
        inv = m[col][col].inverse()
        for r in range(col + 1, n):
            if m[r][col].is_zero:
                continue
            factor = m[r][col] * inv
            m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return det


def _known_zero(x: Any) -> bool:
    return x.is_exact_zero if isinstance(x, LSeries) else x.is_zero


def _det_ring(a: Matrix, base: Base) -> Any:
    n = len(a)
    # minors over the last rows, keyed by the set of columns still free
    memo: dict[int, Any] = {}

    def minor(row: int, used: int) -> Any:
        if row == n:
            return base.one()
        if used in memo:
            return memo[used]
        acc = base.zero()
        sign = 1
        for col in range(n):
            if used & (1 << col):
                continue
            entry = a[row][col]
            if not _known_zero(entry):
                term = entry * minor(row + 1, used | (1 << col))
                acc = acc + term if sign > 0 else acc - term
            # sign alternates over the free columns only
            sign = -sign
        memo[used] = acc
        return acc

    return minor(0, 0)


def mat_det(a: Matrix, base: Base) -> Any:
    if not a:
        return base.one()
    if isinstance(base, FieldDesc):
        return _det_field(a, base)
    return _det_ring(a, base)


def mat_rank(a: Matrix, F: FieldDesc) -> int:
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    rank = 0
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if not m[r][col].is_zero), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = m[rank][col].inverse()
        for r in range(rows):
            if r != rank and not m[r][col].is_zero:
                factor = m[r][col] * inv
                m[r] = [x - factor * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def mat_solve(a: Matrix, b: Sequence[FFElem], F: FieldDesc) -> list[FFElem]:
    """Solve a x = b for square invertible a over a field."""
    n = len(a)
    m = [list(r) + [b[i]] for i, r in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not m[r][col].is_zero), None)
        if pivot is None:
            raise InputError("singular_matrix", "matrix is singular")
        m[col], m[pivot] = m[pivot], m[col]
        inv = m[col][col].inverse()
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and not m[r][col].is_zero:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def mat_inverse(a: Matrix, base: Base) -> Matrix:
    n = len(a)
    if isinstance(base, FieldDesc):
        cols = []
        for j in range(n):
            e = [base.one() if i == j else base.zero() for i in range(n)]
            cols.append(mat_solve(a, e, base))
        return [[cols[j][i] for j in range(n)] for i in range(n)]
    det = mat_det(a, base)
    if isinstance(det, MPoly):
        raise InputError("unsupported_inverse", "matrix inversion over the multivariate base is not supported")
    det_inv = det.inverse()
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = [[a[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            cof = mat_det(minor, base)
            row.append(cof * det_inv if (i + j) % 2 == 0 else -(cof * det_inv))
        out.append(row)
    return out


def conjugate(M: SigmaMat, U: Sequence[Sequence[Any]]) -> SigmaMat:
    """Matrix of the same semilinear map after the base change x = U y: U^-1 M U^(p)."""
    rows = [[coerce(M.base, x) for x in r] for r in U]
    inv = mat_inverse(rows, M.base)
    out = mat_mul(mat_mul(inv, M.rows(), M.base), frobenius_matrix(rows, 1), M.base)
    return SigmaMat(M.base, tuple(tuple(r) for r in out))


def closed_point(M: SigmaMat) -> SigmaMat:
    """Reduction of M at the closed point of its base."""
    if isinstance(M.base, FieldDesc):
        return M
    F = M.base.residue
    if isinstance(M.base, SeriesCtx):
        rows = [[series_residue(x) for x in r] for r in M.entries]
    else:
        rows = [[x.constant_term() for x in r] for r in M.entries]
    return SigmaMat(F, tuple(tuple(r) for r in rows))


def embed_matrix(M: SigmaMat, target: FieldDesc) -> SigmaMat:
    if not isinstance(M.base, FieldDesc):
        raise InputError("non_field_base", "only matrices over a finite field can be moved to an extension")
    if M.base == target:
        return M
    rows = [[FFElem(target, embed_code(x.code, M.base, target)) for x in r] for r in M.entries]
    return SigmaMat(target, tuple(tuple(r) for r in rows))


# -- operations ----------------------------------------------------------------


def twist_compose(M: SigmaMat, k: int) -> SigmaMat:
    if k < 0:
        raise InputError("bad_iteration", "twist count must be >= 0")
    result = mat_identity(M.base, M.size)
    rows = M.rows()
    for j in range(k):
        result = mat_mul(result, frobenius_matrix(rows, j), M.base)
    return SigmaMat(M.base, tuple(tuple(r) for r in result))


def is_nilpotent_sigma(M: SigmaMat) -> bool:
    red = closed_point(M)
    return mat_is_zero(twist_compose(red, red.size).rows())


def kernel_dim(M: SigmaMat) -> int:
    red = closed_point(M)
    return red.size - mat_rank(red.rows(), red.base)


def stable_rank(M: SigmaMat) -> int:
    """Rank of the c-fold iterate at the closed point (the etale rank)."""
    red = closed_point(M)
    return mat_rank(twist_compose(red, red.size).rows(), red.base)


@dataclass(frozen=True)
class CyclicVectorResult:
    status: str
    vector: tuple[FFElem, ...] | None = None
    field: FieldDesc | None = None
    searched: int = 0

    @property
    def found(self) -> bool:
        return self.status == "found"

    def as_dict(self) -> dict[str, Any]:
        return {"status": self.status, "searched": self.searched}


def cycle_columns(M: SigmaMat, v: Sequence[Any]) -> list[list[Any]]:
    cols = [list(v)]
    for _ in range(1, M.size):
        cols.append(M.apply(cols[-1]))
    return cols


def _columns_to_rows(cols: list[list[Any]]) -> Matrix:
    return [[col[i] for col in cols] for i in range(len(cols[0]))] if cols else []


def cycle_determinant(M: SigmaMat) -> MPoly:
    """det[v, phi v, ..., phi^(c-1) v] as a polynomial in the coordinates of v."""
    F = base_field(M.base)
    ring = MPolyRing(F, M.size, None)
    sym = SigmaMat(ring, tuple(tuple(ring.constant(x) for x in r) for r in M.entries))
    v = [ring.var(i) for i in range(M.size)]
    return mat_det(_columns_to_rows(cycle_columns(sym, v)), ring)


def cyclic_vector(M: SigmaMat, extension_bound: int = 8, search_budget: int = 200_000) -> CyclicVectorResult:
    if not isinstance(M.base, FieldDesc):
        raise InputError("non_field_base", "cyclic vectors are searched over a finite field; reduce at the closed point first")
    if extension_bound < 1:
        raise InputError("bad_extension_bound", "extension_bound must be >= 1")
    c = M.size
    if c == 0:
        raise InputError("empty_matrix", "a 0x0 matrix has no cyclic vector")
    F = M.base
    searched = 0
    for j in range(1, extension_bound + 1):
        if j == 2 and cycle_determinant(M).is_zero:
            return CyclicVectorResult("absent", searched=searched)
        Fj = F if j == 1 else ff_make(F.p, F.n * j)
        Mj = embed_matrix(M, Fj)
        for codes in itertools.product(range(Fj.order), repeat=c):
            if not any(codes):
                continue
            searched += 1
            if searched > search_budget:
                log_event("cyclic_vector_inconclusive", reason="search_budget", searched=searched - 1, degree=j, size=c)
                return CyclicVectorResult("inconclusive", searched=searched - 1)
            v = [FFElem(Fj, code) for code in codes]
            if not _det_field(_columns_to_rows(cycle_columns(Mj, v)), Fj).is_zero:
                return CyclicVectorResult("found", tuple(v), Fj, searched)
    if extension_bound == 1 and cycle_determinant(M).is_zero:
        return CyclicVectorResult("absent", searched=searched)
    log_event("cyclic_vector_inconclusive", reason="extension_bound", searched=searched, extension_bound=extension_bound, size=c)
    return CyclicVectorResult("inconclusive", searched=searched)


def companion_form(M: SigmaMat, v: Sequence[FFElem]) -> tuple[SigmaMat, SigmaMat]:
    """Matrix of phi in the basis v, phi v, ..., phi^(c-1) v, and that basis."""
    if not v:
        raise InputError("empty_matrix", "companion form needs c >= 1")
    target = v[0].field
    Mv = embed_matrix(M, target)
    c = Mv.size
    cols = cycle_columns(Mv, v)
    basis = _columns_to_rows(cols)
    if _det_field(basis, target).is_zero:
        raise InputError("dependent_cycle", "v, phi v, ..., phi^(c-1) v are linearly dependent")
    last = mat_solve(basis, Mv.apply(cols[-1]), target)
    rows = [[target.zero()] * c for _ in range(c)]
    for i in range(1, c):
        rows[i][i - 1] = target.one()
    for i in range(c):
        rows[i][c - 1] = last[i]
    return SigmaMat(target, tuple(tuple(r) for r in rows)), SigmaMat(target, tuple(tuple(r) for r in basis))


# -- fixed points of x -> U x^(p) ------------------------------------------------


@dataclass(frozen=True)
class FixedSpace:
    field: FieldDesc
    basis: tuple[tuple[Any, ...], ...]
    dim: int
    rank: int
    stable: bool
    # U over the field the basis lives in
    matrix: SigmaMat

    def as_dict(self) -> dict[str, Any]:
        return {"dim": self.dim, "rank": self.rank, "stable": self.stable}


def rref_mod_p(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    m = [[x % p for x in r] for r in rows]
    cols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for col in range(cols):
        pivot = next((i for i in range(r, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = pow(m[r][col], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    return m[:r], pivots


def nullspace_mod_p(rows: list[list[int]], ncols: int, p: int) -> list[list[int]]:
    """RREF basis of {x : rows * x = 0} over F_p."""
    red, pivots = rref_mod_p(rows, p) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for r, pc in enumerate(pivots):
            x[pc] = (-red[r][f]) % p
        basis.append(x)
    if not basis:
        return []
    canon, _ = rref_mod_p(basis, p)
    return canon


def _fixed_space_over(U: SigmaMat, F: FieldDesc) -> list[tuple[FFElem, ...]]:
    c = U.size
    m = F.n
    p = F.p
    n_unknowns = c * m
    images = []
    for i in range(c):
        for k in range(m):
            code = p ** k
            frob = F.frob(code)
            col = []
            for r in range(c):
                val = F.mul(U.entries[r][i].code, frob)
                if r == i:
                    val = F.sub(val, code)
                col.extend(_digits(F, val))
            images.append(col)
    equations = [[images[u][r] for u in range(n_unknowns)] for r in range(n_unknowns)]
    out = []
    for vec in nullspace_mod_p(equations, n_unknowns, p):
        coords = []
        for i in range(c):
            code = sum(vec[i * m + k] * p ** k for k in range(m))
            coords.append(FFElem(F, code))
        out.append(tuple(coords))
    return out


def _digits(F: FieldDesc, code: int) -> tuple[int, ...]:
    return FFElem(F, code).coeffs


def _extend_matrix(U: SigmaMat, F: FieldDesc) -> SigmaMat:
    """U with its residue field enlarged to F."""
    if isinstance(U.base, FieldDesc):
        return embed_matrix(U, F)
    ctx: SeriesCtx = U.base
    if F == ctx.residue:
        return U
    target = SeriesCtx(F, ctx.e, ctx.prec)
    rows = [[ls_extend(x, ctx.e, F, ctx.prec) for x in r] for r in U.entries]
    return SigmaMat(target, tuple(tuple(r) for r in rows))


def _lift_fixed_vector(U: SigmaMat, start: Sequence[FFElem]) -> tuple[LSeries, ...]:
    ctx: SeriesCtx = U.base
    x = [ctx.constant(b) for b in start]
    for _ in range(ctx.prec + 2):
        nx = U.apply(x)
        settled = all(ls_agree(a, b, ctx.prec if b.exact else b.prec) for a, b in zip(x, nx))
        if settled:
            return tuple(nx)
        x = [ls_approximant(y) for y in nx]
    raise AssertionError("fixed-point lift did not settle")


def fixed_space(U: SigmaMat, extension_bound: int = 8) -> FixedSpace:
    if isinstance(U.base, MPolyRing):
        raise InputError("unsupported_base", "fixed spaces are computed over a finite field or a series ring")
    if isinstance(U.base, SeriesCtx):
        for r in U.entries:
            for x in r:
                if x.terms and x.terms[0][0] < 0:
                    raise InputError("negative_valuation", "fixed_space needs entries with nonnegative valuation")
    red = closed_point(U)
    rank = stable_rank(red)
    F = red.base
    basis: list[tuple[FFElem, ...]] = []
    field = F
    for j in range(1, extension_bound + 1):
        field = F if j == 1 else ff_make(F.p, F.n * j)
        basis = _fixed_space_over(embed_matrix(red, field), field)
        if len(basis) == rank:
            break
    stable = len(basis) == rank
    extended = _extend_matrix(U, field)
    if isinstance(U.base, SeriesCtx):
        lifted = tuple(_lift_fixed_vector(extended, b) for b in basis)
        return FixedSpace(field, lifted, len(lifted), rank, stable, extended)
    return FixedSpace(field, tuple(basis), len(basis), rank, stable, extended)


# -- the group-scheme presentation ----------------------------------------------


@dataclass(frozen=True)
class Relation:
    """X_j^p + sum_i linear[i] X_i."""

    j: int
    p: int
    linear: tuple[Any, ...]

    def render(self) -> str:
        parts = [f"X{self.j + 1}^{self.p}"]
        for i, c in enumerate(self.linear):
            if c.is_zero:
                continue
            cs = str(c)
            if cs == "1":
                parts.append(f"X{i + 1}")
            else:
                parts.append(f"({cs})*X{i + 1}" if "+" in cs else f"{cs}*X{i + 1}")
        return " + ".join(parts)


def presentation(M: SigmaMat) -> list[Relation]:
    p = base_field(M.base).p
    return [Relation(j, p, tuple(-M.entries[i][j] for i in range(M.size))) for j in range(M.size)]


def presentation_jacobian(M: SigmaMat) -> SigmaMat:
    """d(relation_j)/dX_i = -h_ij, i.e. the matrix -h^T."""
    rows = [[-M.entries[i][j] for i in range(M.size)] for j in range(M.size)]
    return SigmaMat(M.base, tuple(tuple(r) for r in rows))


def is_etale_presentation(M: SigmaMat) -> bool:
    """Etale iff the Jacobian determinant is a unit of the base."""
    det = mat_det(presentation_jacobian(M).rows(), M.base)
    if isinstance(det, FFElem):
        return not det.is_zero
    if isinstance(det, LSeries):
        return bool(det.terms) and det.terms[0][0] == 0
    return not det.constant_term().is_zero
