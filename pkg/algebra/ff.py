"""Finite fields F_{p^n}.

Elements are stored as integer codes: the coefficient vector (low degree
first) read as a base-p number. Multiplication goes through log/exp tables
built from the least primitive element, so fields are meant to stay small.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import lcm
from typing import Iterator, Sequence

from sympy import Poly, isprime, primefactors, symbols

from utils.errors import InputError

_X = symbols("x")


@dataclass(frozen=True)
class FieldDesc:
    p: int
    n: int
    modulus: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.p ** self.n

    @property
    def deg(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.n})" if self.n > 1 else f"GF({self.p})"

    # -- element constructors ------------------------------------------------

    def elem(self, coeffs: Sequence[int]) -> "FFElem":
        coeffs = list(coeffs)
        if len(coeffs) != self.n:
            raise InputError("bad_element", f"{self!r} elements have {self.n} coefficients, got {len(coeffs)}")
        if any(not isinstance(c, int) or c < 0 or c >= self.p for c in coeffs):
            raise InputError("bad_element", f"coefficients must lie in [0, {self.p})", details={"coeffs": coeffs})
        return FFElem(self, sum(c * self.p ** i for i, c in enumerate(coeffs)))

    def from_code(self, code: int) -> "FFElem":
        if not 0 <= code < self.order:
            raise InputError("bad_element", f"code {code} outside {self!r}")
        return FFElem(self, code)

    def from_int(self, k: int) -> "FFElem":
        return FFElem(self, k % self.p)

    def zero(self) -> "FFElem":
        return FFElem(self, 0)

    def one(self) -> "FFElem":
        return FFElem(self, 1)

    def gen(self) -> "FFElem":
        """The class of the modulus variable (0 in a prime field)."""
        return FFElem(self, self.p % self.order if self.n > 1 else 0)

    def elements(self) -> Iterator["FFElem"]:
        for code in range(self.order):
            yield FFElem(self, code)

    # -- code-level arithmetic -----------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        t = _tables(self)
        da, db = t.digits[a], t.digits[b]
        return sum(((x + y) % self.p) * w for x, y, w in zip(da, db, t.weights))

    def neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        t = _tables(self)
        return sum(((-x) % self.p) * w for x, w in zip(t.digits[a], t.weights))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        t = _tables(self)
        return t.exp[(t.log[a] + t.log[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise InputError("zero_inverse", f"0 has no inverse in {self!r}")
        t = _tables(self)
        return t.exp[(-t.log[a]) % (self.order - 1)]

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k > 0:
                return 0
            if k == 0:
                return 1
            raise InputError("zero_inverse", f"0 has no inverse in {self!r}")
        t = _tables(self)
        return t.exp[(t.log[a] * k) % (self.order - 1)]

    def frob(self, a: int, k: int = 1) -> int:
        return self.pow(a, self.p ** (k % self.n))

    def scalar(self, k: int, a: int) -> int:
        """k * a for an integer k (the image of k in the prime field)."""
        return self.mul(k % self.p, a)


@dataclass(frozen=True, eq=True)
class FFElem:
    field: FieldDesc
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return _tables(self.field).digits[self.code]

    @property
    def is_zero(self) -> bool:
        return self.code == 0

    def _other(self, other: "FFElem | int") -> int:
        if isinstance(other, int):
            return other % self.field.p
        if not isinstance(other, FFElem):
            return NotImplemented  # type: ignore[return-value]
        if other.field != self.field:
            raise InputError("field_mismatch", f"cannot combine {self.field!r} with {other.field!r}")
        return other.code

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FFElem(self.field, self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FFElem(self.field, self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FFElem(self.field, self.field.sub(b, self.code))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FFElem(self.field, self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __neg__(self):
        return FFElem(self.field, self.field.neg(self.code))

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FFElem(self.field, self.field.mul(self.code, self.field.inv(b)))

    def __pow__(self, k: int):
        return FFElem(self.field, self.field.pow(self.code, k))

    def inverse(self) -> "FFElem":
        return FFElem(self.field, self.field.inv(self.code))

    def frobenius(self, k: int = 1) -> "FFElem":
        return FFElem(self.field, self.field.frob(self.code, k))

    def __str__(self) -> str:
        if self.code == 0:
            return "0"
        parts = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mono = "g" if i == 1 else f"g^{i}"
                parts.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(parts)


@dataclass(frozen=True)
class _Tables:
    digits: tuple[tuple[int, ...], ...]
    weights: tuple[int, ...]
    exp: tuple[int, ...]
    log: tuple[int, ...]
    primitive: int


def _polymulmod(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], p: int) -> tuple[int, ...]:
    n = len(modulus) - 1
    prod = [0] * (2 * n - 1 if n else 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for i in range(n + 1):
                prod[k - n + i] = (prod[k - n + i] - c * modulus[i]) % p
    return tuple(prod[:n])


def _slow_pow(a: tuple[int, ...], k: int, modulus: Sequence[int], p: int) -> tuple[int, ...]:
    n = len(modulus) - 1
    result = tuple([1] + [0] * (n - 1))
    base = a
    while k:
        if k & 1:
            result = _polymulmod(result, base, modulus, p)
        base = _polymulmod(base, base, modulus, p)
        k >>= 1
    return result


@lru_cache(maxsize=None)
def _tables(field: FieldDesc) -> _Tables:
    p, n, q = field.p, field.n, field.order
    weights = tuple(p ** i for i in range(n))
    digits = tuple(tuple((code // w) % p for w in weights) for code in range(q))
    one = digits[1]
    primes = primefactors(q - 1)
    primitive = None
    for code in range(1, q):
        d = digits[code]
        if all(_slow_pow(d, (q - 1) // r, field.modulus, p) != one for r in primes):
            primitive = code
            break
    assert primitive is not None
    code_of = {d: c for c, d in enumerate(digits)}
    exp = []
    cur = one
    for _ in range(q - 1):
        exp.append(code_of[cur])
        cur = _polymulmod(cur, digits[primitive], field.modulus, p)
    log = [0] * q
    for i, c in enumerate(exp):
        log[c] = i
    return _Tables(digits=digits, weights=weights, exp=tuple(exp), log=tuple(log), primitive=primitive)


def _is_irreducible(low_first: Sequence[int], p: int) -> bool:
    return Poly(list(reversed(low_first)), _X, modulus=p).is_irreducible


@lru_cache(maxsize=None)
def _make_field(p: int, n: int) -> FieldDesc:
    if n == 1:
        return FieldDesc(p, 1, (0, 1))
    for low in itertools.product(range(p), repeat=n):
        if low[0] == 0:
            continue
        candidate = tuple(low) + (1,)
        if _is_irreducible(candidate, p):
            return FieldDesc(p, n, candidate)
    raise AssertionError(f"no irreducible polynomial of degree {n} over F_{p}")


def ff_make(p: int, n: int) -> FieldDesc:
    if not isinstance(p, int) or not isprime(p):
        raise InputError("non_prime_characteristic", f"characteristic must be prime, got {p!r}")
    if not isinstance(n, int) or n < 1:
        raise InputError("bad_degree", f"extension degree must be >= 1, got {n!r}")
    return _make_field(p, n)


def ff_arith(x: FFElem, y: FFElem | int | None, op: str) -> FFElem:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inverse()
    if op == "pow":
        if not isinstance(y, int):
            raise InputError("bad_exponent", "pow needs an integer exponent")
        return x ** y
    raise InputError("unknown_op", f"unsupported field operation {op!r}")


def ff_frobenius(x: FFElem, k: int = 1) -> FFElem:
    if k < 0:
        raise InputError("bad_iteration", "Frobenius iteration count must be >= 0")
    return x.frobenius(k)


def ff_primitive(field: FieldDesc) -> FFElem:
    return FFElem(field, _tables(field).primitive)


def multiplicative_order(x: FFElem) -> int:
    if x.is_zero:
        raise InputError("zero_order", "0 has no multiplicative order")
    q1 = x.field.order - 1
    order = q1
    for r in primefactors(q1):
        while order % r == 0 and x.field.pow(x.code, order // r) == 1:
            order //= r
    return order


@lru_cache(maxsize=None)
def _embedding_map(source: FieldDesc, target: FieldDesc) -> tuple[int, ...]:
    if source.p != target.p or target.n % source.n != 0:
        raise InputError("not_embeddable", f"{source!r} does not embed in {target!r}")
    if source == target:
        return tuple(range(source.order))
    root = None
    for r in range(target.order):
        acc = 0
        for coeff in reversed(source.modulus):
            acc = target.add(target.mul(acc, r), coeff % target.p)
        if acc == 0:
            root = r
            break
    assert root is not None
    powers = [1]
    for _ in range(source.n - 1):
        powers.append(target.mul(powers[-1], root))
    images = []
    for digits in _tables(source).digits:
        acc = 0
        for c, w in zip(digits, powers):
            if c:
                acc = target.add(acc, target.scalar(c, w))
        images.append(acc)
    return tuple(images)


def ff_embed(x: FFElem, source: FieldDesc, target: FieldDesc) -> FFElem:
    if x.field != source:
        raise InputError("field_mismatch", f"element lives in {x.field!r}, not {source!r}")
    return FFElem(target, _embedding_map(source, target)[x.code])


def embed_code(code: int, source: FieldDesc, target: FieldDesc) -> int:
    return _embedding_map(source, target)[code]


def common_field(a: FieldDesc, b: FieldDesc) -> FieldDesc:
    if a.p != b.p:
        raise InputError("field_mismatch", f"{a!r} and {b!r} have different characteristic")
    if a.n % b.n == 0:
        return a
    if b.n % a.n == 0:
        return b
    return ff_make(a.p, lcm(a.n, b.n))
