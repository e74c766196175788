"""Unitary matrices over GF(q^2) and the explicit two-transitivity witness.

Matrices are tuples of three row tuples of raw field ints; column k is the
image of the k-th basis vector (u, v, w).
"""

from __future__ import annotations

import functools
import itertools

from .errors import (
    DegenerateComplement,
    FieldTooLargeForEnumeration,
    LinesEqual,
    NotIsotropic,
)
from .field import FieldCtx
from .hermitian import ProjLine, Vector3, canonicalize, hermitian_form, scale

Matrix = tuple[Vector3, Vector3, Vector3]

IDENTITY: Matrix = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
BASIS = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
# B(e_a, e_b) for the basis u, v, w
BASIS_GRAM = ((0, 1, 0), (1, 0, 0), (0, 0, 1))

ENUMERATION_MAX_Q = 3


def from_columns(c0: Vector3, c1: Vector3, c2: Vector3) -> Matrix:
    return tuple(zip(c0, c1, c2))


def column(M: Matrix, k: int) -> Vector3:
    return (M[0][k], M[1][k], M[2][k])


def apply(ctx: FieldCtx, M: Matrix, x: Vector3) -> Vector3:
    add, mul = ctx.add, ctx.mul
    x0, x1, x2 = x
    return tuple(add(add(mul(r[0], x0), mul(r[1], x1)), mul(r[2], x2)) for r in M)


def act(ctx: FieldCtx, M: Matrix, line: Vector3) -> ProjLine:
    """Image of an isotropic line under M."""
    return canonicalize(ctx, apply(ctx, M, line))


def mat_mul(ctx: FieldCtx, A: Matrix, B: Matrix) -> Matrix:
    add, mul = ctx.add, ctx.mul
    return tuple(
        tuple(add(add(mul(A[r][0], B[0][k]), mul(A[r][1], B[1][k])), mul(A[r][2], B[2][k])) for k in range(3))
        for r in range(3)
    )


def det(ctx: FieldCtx, M: Matrix) -> int:
    add, sub, mul = ctx.add, ctx.sub, ctx.mul
    (a, b, c), (d, e, f), (g, h, i) = M
    t1 = mul(a, sub(mul(e, i), mul(f, h)))
    t2 = mul(b, sub(mul(d, i), mul(f, g)))
    t3 = mul(c, sub(mul(d, h), mul(e, g)))
    return add(sub(t1, t2), t3)


def mat_inv(ctx: FieldCtx, M: Matrix) -> Matrix:
    sub, mul = ctx.sub, ctx.mul
    (a, b, c), (d, e, f), (g, h, i) = M
    dinv = ctx.inv(det(ctx, M))
    adj = (
        (sub(mul(e, i), mul(f, h)), sub(mul(c, h), mul(b, i)), sub(mul(b, f), mul(c, e))),
        (sub(mul(f, g), mul(d, i)), sub(mul(a, i), mul(c, g)), sub(mul(c, d), mul(a, f))),
        (sub(mul(d, h), mul(e, g)), sub(mul(b, g), mul(a, h)), sub(mul(a, e), mul(b, d))),
    )
    return tuple(tuple(mul(dinv, x) for x in row) for row in adj)


def is_unitary(ctx: FieldCtx, M: Matrix) -> bool:
    """True iff M preserves B on all nine pairs of basis vectors."""
    cols = [column(M, k) for k in range(3)]
    for a in range(3):
        for b in range(3):
            if hermitian_form(ctx, cols[a], cols[b]) != BASIS_GRAM[a][b]:
                return False
    return det(ctx, M) != 0


def complement(ctx: FieldCtx, x: Vector3, y: Vector3) -> Vector3:
    """A vector t with B(t, x) = B(t, y) = 0, by a cross product.

    B(t, x) is the ordinary dot product of t with (conj x2, conj x1, conj x3),
    so the cross product of those two vectors spans the solution space.
    """
    conj, sub, mul = ctx.conj, ctx.sub, ctx.mul
    a = (conj(x[1]), conj(x[0]), conj(x[2]))
    b = (conj(y[1]), conj(y[0]), conj(y[2]))
    return (
        sub(mul(a[1], b[2]), mul(a[2], b[1])),
        sub(mul(a[2], b[0]), mul(a[0], b[2])),
        sub(mul(a[0], b[1]), mul(a[1], b[0])),
    )


@functools.lru_cache(maxsize=1 << 17)
def witness_pair(ctx: FieldCtx, L1: ProjLine, L2: ProjLine) -> Matrix:
    """A unitary tau with tau[L1] = [u] and tau[L2] = [v].

    Built as the inverse of the matrix with columns (x, y', w') where x
    spans L1, y' spans L2 with B(x, y') = 1, and w' spans the orthogonal
    complement of both with B(w', w') = 1.
    """
    if L1 == L2:
        raise LinesEqual("a witness needs two distinct lines")
    x, y = tuple(L1), tuple(L2)
    if hermitian_form(ctx, x, x) or hermitian_form(ctx, y, y):
        raise NotIsotropic("witness_pair needs isotropic lines")
    beta = hermitian_form(ctx, x, y)
    if beta == 0:
        raise DegenerateComplement("distinct isotropic lines are orthogonal")
    y1 = scale(ctx, ctx.conj(ctx.inv(beta)), y)
    w0 = complement(ctx, x, y1)
    if not any(w0):
        raise DegenerateComplement("lines are linearly dependent")
    w0 = tuple(canonicalize(ctx, w0))
    gamma = hermitian_form(ctx, w0, w0)
    if gamma == 0:
        raise DegenerateComplement("orthogonal complement is isotropic")
    w1 = scale(ctx, ctx.solve_norm(ctx.inv(gamma)), w0)
    return mat_inv(ctx, from_columns(x, y1, w1))


def enumerate_group(ctx: FieldCtx) -> list[Matrix]:
    """Every element of U(3, q^2), for q <= 3.

    Columns are chosen one at a time, keeping only partial matrices whose
    columns already satisfy the basis pairings; every survivor is then
    re-checked with :func:`is_unitary`.
    """
    if ctx.q > ENUMERATION_MAX_Q:
        raise FieldTooLargeForEnumeration(f"group enumeration is limited to q <= {ENUMERATION_MAX_Q}")
    B = functools.partial(hermitian_form, ctx)
    vectors = [v for v in itertools.product(range(ctx.size), repeat=3) if any(v)]
    isotropic = [v for v in vectors if B(v, v) == 0]
    group = []
    for c0 in isotropic:
        for c1 in isotropic:
            if B(c0, c1) != 1:
                continue
            w0 = complement(ctx, c0, c1)
            for lam in range(1, ctx.size):
                c2 = scale(ctx, lam, w0)
                if B(c2, c2) != 1:
                    continue
                M = from_columns(c0, c1, c2)
                if is_unitary(ctx, M):
                    group.append(M)
    return group


def group_order(q: int) -> int:
    """|U(3, q^2)| = q^3 (q + 1) (q^2 - 1) (q^3 + 1)."""
    return q**3 * (q + 1) * (q * q - 1) * (q**3 + 1)


def line_permutations(ctx: FieldCtx, group: list[Matrix], lines: list[ProjLine]) -> set[tuple[int, ...]]:
    """Distinct permutations of the cone induced by ``group``.

    Scalar matrices act trivially, so this is the image of the group in
    PGU(3, q^2).
    """
    index = {L: k for k, L in enumerate(lines)}
    return {tuple(index[act(ctx, g, L)] for L in lines) for g in group}


def triple_orbits(perms: set[tuple[int, ...]], n: int) -> dict[tuple[int, int, int], int]:
    """Orbit label of every triple of point indices under a permutation group."""
    label: dict[tuple[int, int, int], int] = {}
    k = 0
    for t in itertools.product(range(n), repeat=3):
        if t in label:
            continue
        for p in perms:
            label[(p[t[0]], p[t[1]], p[t[2]])] = k
        k += 1
    return label
