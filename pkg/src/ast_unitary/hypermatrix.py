"""Adjacency hypermatrices and the ternary product

    (ABC)[x, y, z] = sum_w A[w, y, z] * B[x, w, z] * C[x, y, w].

Small cones (at most ``DENSE_MAX`` lines) use dense integer cubes.  Larger
ones keep a hypermatrix as a coefficient per relation, so that an entry is
``coeffs[rel(x, y, z)]``; products of such hypermatrices are evaluated one
cell at a time and never materialised.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimMismatch, IndexOutOfRange, TooLargeForDense
from .scheme import IntersectionTensor, Scheme

DENSE_MAX = 30


class Hypermatrix:
    dim: int

    def entry(self, x: int, y: int, z: int) -> int:
        raise NotImplementedError

    def to_dense(self) -> np.ndarray:
        raise NotImplementedError


@dataclass
class DenseHypermatrix(Hypermatrix):
    cube: np.ndarray

    @property
    def dim(self) -> int:
        return self.cube.shape[0]

    def entry(self, x: int, y: int, z: int) -> int:
        return int(self.cube[x, y, z])

    def to_dense(self) -> np.ndarray:
        return self.cube


@dataclass
class RelationHypermatrix(Hypermatrix):
    """Hypermatrix constant on each relation of ``scheme``."""

    scheme: Scheme
    coeffs: np.ndarray

    @property
    def dim(self) -> int:
        return self.scheme.omega_size

    def entry(self, x: int, y: int, z: int) -> int:
        lines = self.scheme.cone.lines
        return int(self.coeffs[self.scheme.classify(lines[x], lines[y], lines[z])])

    def values(self, rel: np.ndarray) -> np.ndarray:
        return self.coeffs[rel]

    def to_dense(self) -> np.ndarray:
        return self.coeffs[class_cube(self.scheme)]


@dataclass
class TernaryProduct(Hypermatrix):
    """Lazy product of three relation hypermatrices over one scheme."""

    a: RelationHypermatrix
    b: RelationHypermatrix
    c: RelationHypermatrix
    scheme: Scheme = field(init=False)

    def __post_init__(self) -> None:
        self.scheme = self.a.scheme

    @property
    def dim(self) -> int:
        return self.scheme.omega_size

    def entry(self, x: int, y: int, z: int) -> int:
        s = self.scheme
        t1 = self.a.values(s.relation_row(None, y, z))
        t2 = self.b.values(s.relation_row(x, None, z))
        t3 = self.c.values(s.relation_row(x, y, None))
        return int(np.dot(t1 * t2, t3))


def class_cube(scheme: Scheme) -> np.ndarray:
    cube = scheme._cache.get("class_cube")
    if cube is None:
        cube = scheme._cache["class_cube"] = scheme.class_cube()
    return cube


def adjacency(scheme: Scheme, i: int, dense: bool | None = None) -> Hypermatrix:
    if not 0 <= i < scheme.n_relations:
        raise IndexOutOfRange(f"relation index {i} outside 0..{scheme.n_relations - 1}")
    if dense is None:
        dense = scheme.omega_size <= DENSE_MAX
    if dense:
        if scheme.omega_size > DENSE_MAX:
            raise TooLargeForDense(f"|Omega| = {scheme.omega_size} exceeds {DENSE_MAX}")
        return DenseHypermatrix((class_cube(scheme) == i).astype(np.int64))
    coeffs = np.zeros(scheme.n_relations, dtype=np.int64)
    coeffs[i] = 1
    return RelationHypermatrix(scheme, coeffs)


def ternary_product(A: Hypermatrix, B: Hypermatrix, C: Hypermatrix) -> Hypermatrix:
    if not A.dim == B.dim == C.dim:
        raise DimMismatch(f"dimensions {A.dim}, {B.dim}, {C.dim} differ")
    kinds = {type(A), type(B), type(C)}
    if kinds == {RelationHypermatrix}:
        if not (A.scheme is B.scheme is C.scheme):
            raise DimMismatch("relation hypermatrices from different schemes")
        return TernaryProduct(A, B, C)
    a, b, c = (M.to_dense() for M in (A, B, C))
    return DenseHypermatrix(np.einsum("wyz,xwz,xyw->xyz", a, b, c))


@dataclass
class StructureReport:
    q: int
    mode: str
    triples_checked: int
    cells_checked: int
    mismatch: tuple | None = None
    overlap: bool = False

    @property
    def passed(self) -> bool:
        return self.mismatch is None and not self.overlap


def decompose(scheme: Scheme, cube: np.ndarray) -> np.ndarray | None:
    """Coefficients c with cube = sum_l c[l] A_l, or None if none exist."""
    C = class_cube(scheme)
    coeffs = np.zeros(scheme.n_relations, dtype=np.int64)
    for l in range(scheme.n_relations):
        vals = np.unique(cube[C == l])
        if len(vals) != 1:
            return None
        coeffs[l] = vals[0]
    return coeffs


def verify_structure_constants(
    scheme: Scheme,
    tensor: IntersectionTensor,
    index_cap: int | None = None,
    mode: str = "auto",
    cells: int = 10_000,
    seed: int = 0,
) -> StructureReport:
    """Check A_i A_j A_k = sum_l p[l][i][j][k] A_l for all i, j, k < index_cap.

    ``dense`` forms every product explicitly; ``sampled`` checks the cellwise
    form (A_i A_j A_k)[x, y, z] = p[rel(x, y, z)][i][j][k] at ``cells``
    random cells, drawn evenly across relations.
    """
    R = scheme.n_relations
    cap = R if index_cap is None else min(index_cap, R)
    if mode == "auto":
        mode = "dense" if scheme.omega_size <= DENSE_MAX else "sampled"
    P = tensor.entries

    if mode == "dense":
        if scheme.omega_size > DENSE_MAX:
            raise TooLargeForDense(f"|Omega| = {scheme.omega_size} exceeds {DENSE_MAX}")
        A = [adjacency(scheme, i, dense=True).to_dense() for i in range(R)]
        overlap = not np.array_equal(sum(A), np.ones_like(A[0]))
        report = StructureReport(scheme.q, "dense", 0, 0, overlap=overlap)
        for i in range(cap):
            for j in range(cap):
                for k in range(cap):
                    prod = np.einsum("wyz,xwz,xyw->xyz", A[i], A[j], A[k])
                    coeffs = decompose(scheme, prod)
                    report.triples_checked += 1
                    report.cells_checked += prod.size
                    if coeffs is None or not np.array_equal(coeffs, P[:, i, j, k]):
                        report.mismatch = ((i, j, k), None if coeffs is None else coeffs.tolist(), P[:, i, j, k].tolist())
                        return report
        return report

    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    report = StructureReport(scheme.q, f"sampled({cells})", cap**3, 0)
    for n in range(cells):
        x, y, z = scheme.random_triple(n % R, rng)
        l = n % R
        got = scheme.gamma_counts(x, y, z)[:cap, :cap, :cap]
        report.cells_checked += 1
        if not np.array_equal(got, P[l, :cap, :cap, :cap]):
            bad = np.argwhere(got != P[l, :cap, :cap, :cap])[0]
            i, j, k = (int(t) for t in bad)
            report.mismatch = ((x, y, z), (l, i, j, k), int(got[i, j, k]), int(P[l, i, j, k]))
            return report
    return report


def cube_identity(scheme: Scheme, i: int, coefficient: int, cells: int = 2000, seed: int = 0) -> bool:
    """Whether A_i A_i A_i = coefficient * A_i, densely for small cones and
    cellwise at ``cells`` sampled cells (evenly across relations) otherwise."""
    if scheme.omega_size <= DENSE_MAX:
        A = adjacency(scheme, i).to_dense()
        return np.array_equal(np.einsum("wyz,xwz,xyw->xyz", A, A, A), coefficient * A)
    Ai = adjacency(scheme, i, dense=False)
    prod = ternary_product(Ai, Ai, Ai)
    rng = np.random.default_rng(seed)
    R = scheme.n_relations
    for n in range(cells):
        x, y, z = scheme.random_triple(n % R, rng)
        want = coefficient if n % R == i else 0
        if prod.entry(x, y, z) != want:
            return False
    return True
