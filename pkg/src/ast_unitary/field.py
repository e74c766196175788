"""Exact arithmetic in GF(q^2) and its subfield GF(q).

Elements are plain ints in the base-p polynomial encoding: the coefficient of
x^i is the i-th base-p digit, so 0 is zero and 1 is one.  All arithmetic goes
through exp/log tables for a fixed primitive element alpha (the class of x
modulo the modulus) and a Zech table for addition in odd characteristic.

:class:`FieldElem` wraps an int together with its context for callers who
want operator syntax; the kernels elsewhere in the package work on raw ints.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

from .errors import (
    ContextMismatch,
    DivisionByZero,
    FieldTooLarge,
    NoPrimitivePolynomial,
    NotInF0Star,
    NotPrime,
    ZeroHasNoCoset,
)

MAX_Q = 64


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, e) with p**e == q, or None if q is not a prime power."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    return (p, e) if q == 1 else None


def _x_period(p: int, coeffs: tuple[int, ...]) -> int:
    """Multiplicative order of x modulo the monic polynomial x^d + sum c_i x^i.

    Returns 0 if x does not return to 1 within p^d - 1 steps.
    """
    d = len(coeffs)
    n = p**d - 1
    if p == 2:
        top = 1 << d
        red = sum(c << i for i, c in enumerate(coeffs))
        v = 1
        for k in range(1, n + 1):
            v <<= 1
            if v & top:
                v ^= top | red
            if v == 1:
                return k
        return 0
    digits = [1] + [0] * (d - 1)
    one = list(digits)
    for k in range(1, n + 1):
        t = digits[-1]
        digits = [0] + digits[:-1]
        if t:
            digits = [(di - t * ci) % p for di, ci in zip(digits, coeffs)]
        if digits == one:
            return k
    return 0


def primitive_modulus(p: int, d: int) -> tuple[int, ...]:
    """Lexicographically smallest monic primitive polynomial of degree d.

    Coefficients are listed low-to-high degree (leading 1 included) and the
    lexicographic comparison runs over that list.
    """
    n = p**d - 1
    for low in itertools.product(range(p), repeat=d):
        if low[0] == 0:
            continue
        if _x_period(p, low) == n:
            return low + (1,)
    raise NoPrimitivePolynomial(f"no primitive polynomial of degree {d} over GF({p})")


class FieldCtx:
    """GF(q^2) with q = p^e, together with its fixed subfield F0 = GF(q).

    Immutable after construction.  Build instances with :func:`build_field`
    so that equal parameters share one cached context.
    """

    def __init__(self, p: int, e: int, modulus: tuple[int, ...]):
        self.p = p
        self.e = e
        self.q = p**e
        self.size = self.q * self.q
        self.n = self.size - 1  # order of F^x
        self.modulus = tuple(modulus)
        d = 2 * e

        exp = [0] * self.n
        v = [1] + [0] * (d - 1)
        low = self.modulus[:-1]
        for k in range(self.n):
            exp[k] = sum(c * p**i for i, c in enumerate(v))
            t = v[-1]
            v = [0] + v[:-1]
            if t:
                v = [(vi - t * ci) % p for vi, ci in zip(v, low)]
        log = [-1] * self.size
        for k, x in enumerate(exp):
            log[x] = k
        if any(log[x] < 0 for x in range(1, self.size)):
            raise NoPrimitivePolynomial(f"modulus {modulus} is not primitive")
        # doubled so that exp[log a + log b] needs no reduction
        self.exp = exp + exp
        self.log = log

        # zech[k] = log(1 + alpha^k), or -1 when 1 + alpha^k = 0
        zech = [-1] * self.n
        for k in range(self.n):
            x = exp[k]
            c0 = x % p
            s = x - c0 + (c0 + 1) % p
            zech[k] = log[s] if s else -1
        self.zech = zech

        self.t0 = 0 if p == 2 else (self.q + 1) // 2
        self._check_trace_coset()

        self.np_exp = np.array(self.exp, dtype=np.int64)
        self.np_log = np.array(self.log, dtype=np.int64)

    def _check_trace_coset(self) -> None:
        kernel = [x for x in range(1, self.size) if self.trace(x) == 0]
        residues = {self.log[x] % (self.q + 1) for x in kernel}
        if len(kernel) != self.q - 1 or residues != {self.t0}:
            raise AssertionError("trace-zero elements do not form the expected F0^x coset")

    def __repr__(self) -> str:
        return f"FieldCtx(q={self.q}, modulus={list(self.modulus)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldCtx):
            return NotImplemented
        return (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.modulus))

    # -- raw-int arithmetic ---------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if a == 0:
            return b
        if b == 0:
            return a
        la = self.log[a]
        z = self.zech[(self.log[b] - la) % self.n]
        return 0 if z < 0 else self.exp[la + z]

    def neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        return self.exp[self.log[a] + self.n // 2]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("zero has no inverse")
        return self.exp[(self.n - self.log[a]) % self.n]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise DivisionByZero("division by zero")
        if a == 0:
            return 0
        return self.exp[(self.log[a] - self.log[b]) % self.n]

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise DivisionByZero("negative power of zero")
            return 1 if k == 0 else 0
        return self.exp[(self.log[a] * k) % self.n]

    def conj(self, a: int) -> int:
        """Frobenius x -> x^q, the involution of GF(q^2) over GF(q)."""
        if a == 0:
            return 0
        return self.exp[(self.log[a] * self.q) % self.n]

    def trace(self, a: int) -> int:
        return self.add(a, self.conj(a))

    def norm(self, a: int) -> int:
        if a == 0:
            return 0
        return self.exp[(self.log[a] * (self.q + 1)) % self.n]

    def in_F0(self, a: int) -> bool:
        return self.conj(a) == a

    def in_F0_star(self, a: int) -> bool:
        return a != 0 and self.log[a] % (self.q + 1) == 0

    def coset_residue(self, a: int) -> int:
        """Index of the F0^x coset containing a, as dlog(a) mod (q+1)."""
        if a == 0:
            raise ZeroHasNoCoset("zero lies in no coset of F0^x")
        return self.log[a] % (self.q + 1)

    def solve_norm(self, s: int) -> int:
        """Canonical c = alpha^k with c * conj(c) = s, for s in F0^x."""
        if not self.in_F0_star(s):
            raise NotInF0Star(f"{self.fmt(s)} is not a nonzero element of F0")
        return self.exp[self.log[s] // (self.q + 1)]

    def alpha(self, k: int = 1) -> int:
        return self.exp[k % self.n]

    def dlog(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("zero has no discrete logarithm")
        return self.log[a]

    def elements(self) -> range:
        return range(self.size)

    def F0(self) -> list[int]:
        return [0] + [self.exp[k] for k in range(0, self.n, self.q + 1)]

    def fmt(self, a: int) -> str:
        if a == 0:
            return "0"
        k = self.log[a]
        return "1" if k == 0 else f"a^{k}"

    def parse(self, s: str) -> int:
        s = s.strip()
        if s == "0":
            return 0
        if s == "1":
            return 1
        if not s.startswith("a^"):
            raise ValueError(f"cannot parse field element {s!r}")
        return self.alpha(int(s[2:]))

    def elem(self, value: int) -> FieldElem:
        if not 0 <= value < self.size:
            raise ContextMismatch(f"{value} is not an element handle of {self!r}")
        return FieldElem(self, value)

    # -- vectorised kernels over int64 arrays -----------------------------------

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = self.np_exp[self.np_log[a] + self.np_log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        if self.p == 2:
            return a ^ b
        la = self.np_log[a]
        z = np.asarray(self.zech, dtype=np.int64)[(self.np_log[b] - la) % self.n]
        out = np.where(z < 0, 0, self.np_exp[la + np.maximum(z, 0)])
        return np.where(a == 0, b, np.where(b == 0, a, out))

    def vconj(self, a: np.ndarray) -> np.ndarray:
        out = self.np_exp[(self.np_log[a] * self.q) % self.n]
        return np.where(a == 0, 0, out)


@functools.lru_cache(maxsize=None)
def build_field(p: int, e: int = 1) -> FieldCtx:
    """Field context for GF(q^2), q = p^e, with a deterministic modulus."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1:
        raise ValueError("exponent must be positive")
    if p**e > MAX_Q:
        raise FieldTooLarge(f"q = {p}^{e} exceeds the supported bound {MAX_Q}")
    return FieldCtx(p, e, primitive_modulus(p, 2 * e))


def field_for_q(q: int) -> FieldCtx:
    pe = prime_power(q)
    if pe is None:
        raise NotPrime(f"{q} is not a prime power")
    return build_field(*pe)


class FieldElem:
    """An element of a specific :class:`FieldCtx`, with operator syntax."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx: FieldCtx, value: int):
        self.ctx = ctx
        self.value = value

    def _other(self, other: FieldElem | int) -> int:
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise ContextMismatch("operands belong to different fields")
            return other.value
        if isinstance(other, int) and other in (0, 1):
            return other
        return NotImplemented

    def _wrap(self, v: int) -> FieldElem:
        return FieldElem(self.ctx, v)

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.sub(self.value, o))

    def __neg__(self):
        return self._wrap(self.ctx.neg(self.value))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.div(self.value, o))

    def __pow__(self, k: int):
        return self._wrap(self.ctx.pow(self.value, k))

    def inv(self) -> FieldElem:
        return self._wrap(self.ctx.inv(self.value))

    def conj(self) -> FieldElem:
        return self._wrap(self.ctx.conj(self.value))

    def trace(self) -> FieldElem:
        return self._wrap(self.ctx.trace(self.value))

    def norm(self) -> FieldElem:
        return self._wrap(self.ctx.norm(self.value))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElem):
            return self.ctx == other.ctx and self.value == other.value
        if isinstance(other, int):
            return self.value == other and other in (0, 1)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ctx, self.value))

    def __repr__(self) -> str:
        return f"FieldElem({self.ctx.fmt(self.value)}, q={self.ctx.q})"

    def __str__(self) -> str:
        return self.ctx.fmt(self.value)


_OPS = {
    "add": (2, FieldCtx.add),
    "sub": (2, FieldCtx.sub),
    "neg": (1, FieldCtx.neg),
    "mul": (2, FieldCtx.mul),
    "div": (2, FieldCtx.div),
    "inv": (1, FieldCtx.inv),
}


def arith(ctx: FieldCtx, op: str, *operands: FieldElem | int) -> FieldElem:
    """Apply a named operation; ``pow`` takes (base, int exponent)."""
    vals = []
    for x in operands:
        if isinstance(x, FieldElem):
            if x.ctx != ctx:
                raise ContextMismatch("operand belongs to a different field")
            vals.append(x.value)
        else:
            vals.append(x)
    if op == "pow":
        base, k = vals
        return FieldElem(ctx, ctx.pow(base, k))
    if op not in _OPS:
        raise ValueError(f"unknown operation {op!r}")
    arity, fn = _OPS[op]
    if len(vals) != arity:
        raise TypeError(f"{op} takes {arity} operand(s)")
    for v in vals:
        if not 0 <= v < ctx.size:
            raise ContextMismatch(f"{v} is not an element handle of {ctx!r}")
    return FieldElem(ctx, fn(ctx, *vals))
