"""Finite-level matrix groups GL_n(Z/p^m): closures and the surjectivity criteria.

Matrices are kept as flat row-major tuples of residues mod p^m; a subgroup is
enumerated breadth first under an element budget.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from sympy import isprime

from algebra.ff import FFElem, ff_make, ff_primitive
from utils.errors import BudgetError, InputError
from utils.telemetry import log_event

DEFAULT_BUDGET = 10_000_000

Flat = tuple[int, ...]


def _flat_mul(a: Flat, b: Flat, n: int, mod: int) -> Flat:
    out = []
    for i in range(n):
        row = a[i * n:(i + 1) * n]
        for j in range(n):
            out.append(sum(row[k] * b[k * n + j] for k in range(n)) % mod)
    return tuple(out)


def _flat_det(a: Flat, n: int, mod: int) -> int:
    if n == 0:
        return 1 % mod
    if n == 1:
        return a[0] % mod
    total = 0
    for j in range(n):
        minor = tuple(a[r * n + c] for r in range(1, n) for c in range(n) if c != j)
        term = a[j] * _flat_det(minor, n - 1, mod)
        total += term if j % 2 == 0 else -term
    return total % mod


def _identity(n: int, mod: int) -> Flat:
    return tuple(1 % mod if i == j else 0 for i in range(n) for j in range(n))


@dataclass(frozen=True)
class ModMatrix:
    n: int
    p: int
    m: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.n or any(len(r) != self.n for r in self.rows):
            raise InputError("bad_matrix", f"expected a {self.n}x{self.n} matrix")
        if self.m < 1:
            raise InputError("bad_level", f"level m must be >= 1, got {self.m}")

    @classmethod
    def make(cls, rows: Sequence[Sequence[int]], p: int, m: int = 1) -> "ModMatrix":
        mod = p ** m
        return cls(len(rows), p, m, tuple(tuple(int(x) % mod for x in r) for r in rows))

    @classmethod
    def from_flat(cls, flat: Flat, n: int, p: int, m: int) -> "ModMatrix":
        return cls(n, p, m, tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n)))

    @property
    def modulus(self) -> int:
        return self.p ** self.m

    @property
    def flat(self) -> Flat:
        return tuple(x for r in self.rows for x in r)

    def det(self) -> int:
        return _flat_det(self.flat, self.n, self.modulus)

    @property
    def is_invertible(self) -> bool:
        return self.det() % self.p != 0

    def __matmul__(self, other: "ModMatrix") -> "ModMatrix":
        self._check(other)
        return ModMatrix.from_flat(_flat_mul(self.flat, other.flat, self.n, self.modulus), self.n, self.p, self.m)

    def __pow__(self, k: int) -> "ModMatrix":
        if k < 0:
            raise InputError("bad_exponent", "use a positive exponent")
        result = _identity(self.n, self.modulus)
        base = self.flat
        while k:
            if k & 1:
                result = _flat_mul(result, base, self.n, self.modulus)
            base = _flat_mul(base, base, self.n, self.modulus)
            k >>= 1
        return ModMatrix.from_flat(result, self.n, self.p, self.m)

    def _check(self, other: "ModMatrix") -> None:
        if (other.n, other.p, other.m) != (self.n, self.p, self.m):
            raise InputError("shape_mismatch", "matrices live in different groups")

    def reduce(self, m: int) -> "ModMatrix":
        if not 1 <= m <= self.m:
            raise InputError("bad_level", f"cannot reduce level {self.m} to {m}")
        return ModMatrix.make(self.rows, self.p, m)

    def order(self) -> int:
        if not self.is_invertible:
            raise InputError("singular_matrix", "singular matrices have no multiplicative order")
        ident = _identity(self.n, self.modulus)
        cur = self.flat
        k = 1
        while cur != ident:
            cur = _flat_mul(cur, self.flat, self.n, self.modulus)
            k += 1
        return k

    def as_dict(self) -> dict[str, Any]:
        return {"n": self.n, "p": self.p, "m": self.m, "rows": [list(r) for r in self.rows]}


@dataclass(frozen=True)
class SubgroupClosure:
    n: int
    p: int
    m: int
    generators: tuple[ModMatrix, ...]
    elements: frozenset[Flat] = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: ModMatrix) -> bool:
        return g.flat in self.elements

    def sorted_elements(self) -> list[Flat]:
        return sorted(self.elements)

    def as_dict(self) -> dict[str, Any]:
        return {"n": self.n, "p": self.p, "m": self.m, "order": self.order, "generators": [g.as_dict() for g in self.generators]}


def closure(gens: Sequence[ModMatrix], budget: int = DEFAULT_BUDGET) -> SubgroupClosure:
    if not gens:
        raise InputError("no_generators", "closure needs at least one generator")
    n, p, m = gens[0].n, gens[0].p, gens[0].m
    for g in gens:
        gens[0]._check(g)
        if not g.is_invertible:
            raise InputError("singular_generator", "every generator must be invertible", details={"rows": [list(r) for r in g.rows]})
    mod = p ** m
    flats = [g.flat for g in gens]
    ident = _identity(n, mod)
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in flats:
            y = _flat_mul(x, g, n, mod)
            if y not in seen:
                seen.add(y)
                if len(seen) > budget:
                    raise BudgetError(
                        "element_budget_exceeded",
                        f"closure grew past {budget} elements",
                        details={"budget": budget, "n": n, "p": p, "m": m},
                        hint="raise --budget",
                    )
                queue.append(y)
    log_event("closure_completed", order=len(seen), generators=len(gens), n=n, p=p, m=m)
    return SubgroupClosure(n, p, m, tuple(gens), frozenset(seen))


def gl_order(n: int, p: int, m: int = 1) -> int:
    order = p ** (n * n * (m - 1))
    for i in range(n):
        order *= p ** n - p ** i
    return order


def _all_flats(n: int, mod: int) -> Iterable[Flat]:
    return itertools.product(range(mod), repeat=n * n)


def count_invertible(n: int, p: int, m: int = 1, budget: int = DEFAULT_BUDGET) -> int:
    mod = p ** m
    if mod ** (n * n) > budget:
        raise BudgetError("element_budget_exceeded", f"{mod ** (n * n)} matrices exceed the budget {budget}", hint="raise --budget")
    return sum(1 for a in _all_flats(n, mod) if _flat_det(a, n, mod) % p)


def _validate(n: int, p: int) -> None:
    if n < 1:
        raise InputError("bad_size", f"matrix size must be >= 1, got {n}")
    if not isprime(p):
        raise InputError("non_prime_characteristic", f"p must be prime, got {p}")


def nonsplit_cartan_gen(n: int, p: int) -> ModMatrix:
    """Multiplication by the least primitive element of F_{p^n} in the basis 1, g, ..., g^(n-1)."""
    _validate(n, p)
    F = ff_make(p, n)
    alpha = ff_primitive(F)
    cols = []
    for j in range(n):
        basis = FFElem(F, p ** j)
        cols.append((alpha * basis).coeffs)
    return ModMatrix.make([[cols[j][i] for j in range(n)] for i in range(n)], p, 1)


def _affine_group(n: int, p: int) -> list[ModMatrix]:
    """H = {[[A, b], [0, 1]] : A in GL_(n-1)(F_p), b in F_p^(n-1)}."""
    k = n - 1
    out = []
    for a in _all_flats(k, p):
        if _flat_det(a, k, p) % p == 0:
            continue
        for b in itertools.product(range(p), repeat=k):
            rows = [[a[i * k + j] for j in range(k)] + [b[i]] for i in range(k)]
            rows.append([0] * k + [1])
            out.append(ModMatrix.make(rows, p, 1))
    return out


def check_lemma65(n: int, p: int, budget: int = DEFAULT_BUDGET) -> dict[str, Any]:
    """Mirabolic H and a non-split Cartan C: |GL| = |H||C|, H n C = 1, <H, C> = GL."""
    _validate(n, p)
    if p ** (n * n) > budget:
        raise BudgetError("element_budget_exceeded", f"p^(n^2) = {p ** (n * n)} exceeds the budget {budget}", hint="raise --budget")
    H = _affine_group(n, p)
    cartan = nonsplit_cartan_gen(n, p)
    C = closure([cartan], budget)
    h_elems = {h.flat for h in H}
    order_gl = gl_order(n, p, 1)
    group = closure(H + [cartan], budget)
    report = {
        "counting": order_gl == len(h_elems) * C.order,
        "intersection_trivial": h_elems & C.elements == {_identity(n, p)},
        "generates": group.order == order_gl,
        "order": group.order,
        "h_order": len(h_elems),
        "c_order": C.order,
        "gl_order": order_gl,
    }
    if p ** (n * n) <= min(budget, 100_000):
        report["exhaustive_count"] = count_invertible(n, p, 1, budget)
    return report


def is_graded_element(g: ModMatrix, m: int) -> bool:
    """g = 1 + p^m E with E = diag(x, 0, ..., 0) mod p and x a unit, read mod p^(m+1)."""
    mod = g.p ** (m + 1)
    step = g.p ** m
    for i in range(g.n):
        for j in range(g.n):
            x = g.rows[i][j] % mod
            if i == 0 and j == 0:
                diff = (x - 1) % mod
                if diff % step != 0 or (diff // step) % g.p == 0:
                    return False
            elif x != (1 if i == j else 0):
                return False
    return True


def check_lemma63(gens: Sequence[ModMatrix], budget: int = DEFAULT_BUDGET) -> dict[str, Any]:
    """Conditions (i), (ii) of the graded surjectivity criterion and the conclusion, at level m_max + 1."""
    if not gens:
        raise InputError("no_generators", "the surjectivity check needs generators")
    n, p, level = gens[0].n, gens[0].p, gens[0].m
    if level < 2:
        raise InputError("bad_level", "generators must live at level m_max + 1 >= 2")
    m_max = level - 1
    group = closure(gens, budget)
    residues = {ModMatrix.from_flat(x, n, p, level).reduce(1).flat for x in group.elements}
    condition_i = len(residues) == gl_order(n, p, 1)
    condition_ii = {}
    for m in range(1, m_max + 1):
        condition_ii[m] = any(is_graded_element(ModMatrix.from_flat(x, n, p, level), m) for x in group.sorted_elements())
    expected = gl_order(n, p, level)
    return {
        "n": n,
        "p": p,
        "m_max": m_max,
        "condition_i": condition_i,
        "condition_ii": {str(m): ok for m, ok in condition_ii.items()},
        "conditions_hold": condition_i and all(condition_ii.values()),
        "conclusion": group.order == expected,
        "order": group.order,
        "expected_order": expected,
    }


def check_small_level_remark(gens: Sequence[ModMatrix], budget: int = DEFAULT_BUDGET) -> dict[str, Any]:
    """Rank-one check that condition (ii) at m = 1 (m = 1, 2 when p = 2) already forces surjectivity."""
    if not gens or gens[0].n != 1:
        raise InputError("unsupported_size", "the small-level check is only run for n = 1")
    report = check_lemma63(gens, budget)
    small = [m for m in (1, 2) if m <= report["m_max"] and (m == 1 or report["p"] == 2)]
    small_ok = report["condition_i"] and all(report["condition_ii"][str(m)] for m in small)
    return {
        "small_levels": small,
        "small_conditions": small_ok,
        "conclusion": report["conclusion"],
        "consistent": (not small_ok) or report["conclusion"],
    }
