"""The Hermitian form on F^3, isotropic lines, and the cone of isotropic lines.

The form is B(x, y) = x1*conj(y2) + x2*conj(y1) + x3*conj(y3) in the basis
u = (1,0,0), v = (0,1,0), w = (0,0,1), so B(u,v) = B(w,w) = 1 and u, v are
isotropic.  Vectors are 3-tuples of raw field ints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import InternalInvariantViolation, NotIsotropic, ZeroVector
from .field import FieldCtx

Vector3 = tuple[int, int, int]

U: Vector3 = (1, 0, 0)
V: Vector3 = (0, 1, 0)
W: Vector3 = (0, 0, 1)


class ProjLine(NamedTuple):
    """Canonical representative of a 1-dimensional subspace.

    The first nonzero coordinate is 1, so equal lines have equal tuples.
    """

    x1: int
    x2: int
    x3: int


class LineParams(NamedTuple):
    """Normal form of an isotropic line.

    ``kind`` is ``"U"``, ``"V"``, ``"zero"`` (the line [a u + v] with
    a + conj(a) = 0, stored as ``b = a``) or ``"prime"`` (the line
    [b u + v + c w] with b + conj(b) != 0).
    """

    kind: str
    b: int = 0
    c: int = 0


def hermitian_form(ctx: FieldCtx, x: Vector3, y: Vector3) -> int:
    mul, conj, add = ctx.mul, ctx.conj, ctx.add
    return add(add(mul(x[0], conj(y[1])), mul(x[1], conj(y[0]))), mul(x[2], conj(y[2])))


def is_isotropic(ctx: FieldCtx, x: Vector3) -> bool:
    if not any(x):
        raise ZeroVector("the zero vector spans no line")
    return hermitian_form(ctx, x, x) == 0


def scale(ctx: FieldCtx, lam: int, x: Vector3) -> Vector3:
    return (ctx.mul(lam, x[0]), ctx.mul(lam, x[1]), ctx.mul(lam, x[2]))


def canonicalize(ctx: FieldCtx, x: Vector3) -> ProjLine:
    for c in x:
        if c:
            if c == 1:
                return ProjLine(*x)
            return ProjLine(*scale(ctx, ctx.inv(c), x))
    raise ZeroVector("the zero vector spans no line")


def fmt_line(ctx: FieldCtx, line: Vector3) -> str:
    return "[" + ":".join(ctx.fmt(c) for c in line) + "]"


def parse_line(ctx: FieldCtx, s: str) -> ProjLine:
    parts = s.strip().strip("[]").split(":")
    if len(parts) != 3:
        raise ValueError(f"cannot parse line {s!r}")
    return canonicalize(ctx, tuple(ctx.parse(p) for p in parts))


def line_params(ctx: FieldCtx, line: Vector3) -> LineParams:
    x1, x2, x3 = line
    if hermitian_form(ctx, line, line) != 0:
        raise NotIsotropic(f"{fmt_line(ctx, line)} is not isotropic")
    if x2 == 0:
        if x3 != 0 or x1 == 0:
            raise InternalInvariantViolation(f"{fmt_line(ctx, line)} has no normal form")
        return LineParams("U")
    if x1 == 0 and x3 == 0:
        return LineParams("V")
    inv2 = ctx.inv(x2)
    b = ctx.mul(x1, inv2)
    c = ctx.mul(x3, inv2)
    if c == 0:
        return LineParams("zero", b)
    return LineParams("prime", b, c)


@dataclass
class Cone:
    """All isotropic lines in a fixed order.

    Order: [u], [v], then the lines [a u + v] by dlog a, then the lines
    [b u + v + c w] by (dlog b, dlog c).
    """

    ctx: FieldCtx
    lines: list[ProjLine]
    n_zero: int
    index: dict[ProjLine, int] = field(init=False, repr=False)
    coords: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.index = {L: k for k, L in enumerate(self.lines)}
        self.coords = np.array(self.lines, dtype=np.int64).reshape(-1, 3)

    def __len__(self) -> int:
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)

    @property
    def omega_zero(self) -> list[ProjLine]:
        return self.lines[2 : 2 + self.n_zero]

    @property
    def omega_prime(self) -> list[ProjLine]:
        return self.lines[2 + self.n_zero :]


def enumerate_cone(ctx: FieldCtx) -> Cone:
    q = ctx.q
    by_log = sorted(range(1, ctx.size), key=ctx.dlog)
    lines = [canonicalize(ctx, U), canonicalize(ctx, V)]
    zero = [canonicalize(ctx, (a, 1, 0)) for a in by_log if ctx.trace(a) == 0]
    lines += zero
    for b in by_log:
        tb = ctx.trace(b)
        if tb == 0:
            continue
        # solutions of norm(c) = -trace(b) form one coset of the norm kernel
        k0 = ctx.dlog(ctx.solve_norm(ctx.neg(tb)))
        for k in sorted((k0 + (q - 1) * m) % ctx.n for m in range(q + 1)):
            lines.append(canonicalize(ctx, (b, 1, ctx.alpha(k))))
    cone = Cone(ctx, lines, len(zero))
    if len(lines) != q**3 + 1 or len(zero) != q - 1 or len(cone.index) != len(lines):
        raise InternalInvariantViolation(f"cone for q={q} has wrong size {len(lines)}")
    return cone


def form_log_row(ctx: FieldCtx, cone: Cone, y: Vector3) -> np.ndarray:
    """dlog B(L, y) for every line L of the cone, with -1 where B(L, y) = 0."""
    X = cone.coords
    cy = [ctx.conj(c) for c in y]
    t = ctx.vadd(
        ctx.vadd(ctx.vmul(X[:, 0], np.int64(cy[1])), ctx.vmul(X[:, 1], np.int64(cy[0]))),
        ctx.vmul(X[:, 2], np.int64(cy[2])),
    )
    return ctx.np_log[t]
