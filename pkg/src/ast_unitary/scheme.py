"""The association scheme on triples from U(3, q^2) acting on isotropic lines.

Relations 0..3 are the coincidence patterns; relation 4 is the orbit of
([u], [v], [a u + v]) and relations 5..q+4 are the orbits of
([u], [v], [b_i u + v + c_i w]), one for each F0^x coset of nonzero trace.

Two classifiers are provided.  :meth:`Scheme.classify` follows the group:
it moves the first two points to ([u], [v]) with an explicit unitary and
reads off the coset of the third point's u-coordinate.  :meth:`Scheme.relation_row`
evaluates the same coset through the form directly,

    coset of  B(z, y) / (B(x, y) * B(z, x)),

vectorised over one free slot; it backs the sampled checks where the
per-triple group route would be too slow, and is cross-checked against
:meth:`Scheme.classify` in the tests.
"""

from __future__ import annotations

import functools
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ExhaustiveTooLarge, IsUorV
from .field import FieldCtx, field_for_q
from .hermitian import (
    Cone,
    ProjLine,
    canonicalize,
    enumerate_cone,
    form_log_row,
    line_params,
)
from .unitary import act, enumerate_group, line_permutations, triple_orbits, witness_pair

PERMUTATIONS: list[tuple[int, int, int]] = list(itertools.permutations(range(3)))

EXHAUSTIVE_MAX_Q = 3

Triple = tuple[ProjLine, ProjLine, ProjLine]


@dataclass
class IntersectionTensor:
    """Exact counts p[l, i, j, k] for relation indices 0..q+4."""

    q: int
    entries: np.ndarray

    @classmethod
    def zeros(cls, q: int) -> IntersectionTensor:
        r = q + 5
        return cls(q, np.zeros((r, r, r, r), dtype=np.int64))

    @property
    def rank(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, idx):
        return self.entries[idx]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntersectionTensor):
            return NotImplemented
        return self.q == other.q and np.array_equal(self.entries, other.entries)

    def nonzero_cells(self) -> list[tuple[int, int, int, int, int]]:
        """(l, i, j, k, p) for every nonzero cell, sorted by index."""
        idx = np.argwhere(self.entries)
        return [(int(l), int(i), int(j), int(k), int(self.entries[l, i, j, k])) for l, i, j, k in idx]

    def slice_sums(self) -> np.ndarray:
        return self.entries.reshape(self.rank, -1).sum(axis=1)

    def first_difference(self, other: IntersectionTensor):
        """First cell (l, i, j, k, mine, theirs) where the tensors differ."""
        diff = np.argwhere(self.entries != other.entries)
        if len(diff) == 0:
            return None
        l, i, j, k = (int(t) for t in diff[0])
        return (l, i, j, k, int(self.entries[l, i, j, k]), int(other.entries[l, i, j, k]))


@dataclass
class Scheme:
    ctx: FieldCtx
    cone: Cone
    a: int
    reps: list[tuple[int, int]]  # (b_i, c_i) for i = 5..q+4
    rel_of_residue: list[int]  # coset residue mod q+1 -> relation index
    rel_triples: list[Triple] = field(default_factory=list)
    valencies: list[int] = field(default_factory=list)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def n_relations(self) -> int:
        return self.q + 5

    @property
    def omega_size(self) -> int:
        return len(self.cone)

    @property
    def coset_to_rel(self) -> dict[int, int]:
        return dict(enumerate(self.rel_of_residue))

    def b(self, i: int) -> int:
        return self.reps[i - 5][0]

    def c(self, i: int) -> int:
        return self.reps[i - 5][1]

    def rel_of_b(self, b: int) -> int:
        """Relation of any line [b u + v + c w] (or [b u + v]) in the cone."""
        return self.rel_of_residue[self.ctx.coset_residue(b)]

    # -- classification through the group --------------------------------------

    def classify_line_rel(self, line: ProjLine) -> int:
        """Relation of ([u], [v], line) for a line other than [u] and [v]."""
        kind, b, _ = line_params(self.ctx, line)
        if kind == "zero":
            return 4
        if kind == "prime":
            return self.rel_of_residue[self.ctx.coset_residue(b)]
        raise IsUorV(f"line {line} is [u] or [v]")

    def classify(self, x: ProjLine, y: ProjLine, z: ProjLine) -> int:
        if x == y:
            return 0 if y == z else 3
        if y == z:
            return 1
        if x == z:
            return 2
        tau = witness_pair(self.ctx, x, y)
        return self.classify_line_rel(act(self.ctx, tau, z))

    classify_triple = classify

    def line(self, k: int) -> ProjLine:
        return self.cone.lines[k]

    def class_cube(self) -> np.ndarray:
        """Relation of every triple of line indices, via :meth:`classify`."""
        if self.q > EXHAUSTIVE_MAX_Q:
            raise ExhaustiveTooLarge(f"class cube is limited to q <= {EXHAUSTIVE_MAX_Q}")
        N = self.omega_size
        lines = self.cone.lines
        cube = np.empty((N, N, N), dtype=np.int64)
        for a, x in enumerate(lines):
            for b, y in enumerate(lines):
                for c, z in enumerate(lines):
                    cube[a, b, c] = self.classify(x, y, z)
        return cube

    # -- classification through the form ---------------------------------------

    def _form_row(self, k: int) -> np.ndarray:
        """dlog B(L, line k) mod (q+1) over the cone (diagonal entry is junk)."""
        row = self._cache.get(("row", k))
        if row is None:
            row = (form_log_row(self.ctx, self.cone, self.cone.lines[k]) % (self.q + 1)).astype(np.int16)
            self._cache[("row", k)] = row
        return row

    def relation_row(self, x: int | None, y: int | None, z: int | None) -> np.ndarray:
        """Relations of the triples obtained by letting the ``None`` slot run
        over every line index, with the other two slots fixed."""
        free = [s is None for s in (x, y, z)]
        if sum(free) != 1:
            raise ValueError("exactly one slot must be free")
        N = self.omega_size
        P = np.arange(N)
        X = P if x is None else np.full(N, x)
        Y = P if y is None else np.full(N, y)
        Z = P if z is None else np.full(N, z)
        # residue of B(s, t) = row(t)[s]; conj negates residues mod q+1
        if x is None:
            r_zy = self._form_row(y)[z]
            r_xy = self._form_row(y)
            r_zx = -self._form_row(z)
        elif y is None:
            r_zy = -self._form_row(z)
            r_xy = -self._form_row(x)
            r_zx = self._form_row(x)[z]
        else:
            r_zy = self._form_row(y)
            r_xy = self._form_row(y)[x]
            r_zx = self._form_row(x)
        res = (r_zy - r_xy - r_zx) % (self.q + 1)
        out = np.asarray(self.rel_of_residue)[res]
        out = np.where(X == Z, 2, out)
        out = np.where(Y == Z, 1, out)
        out = np.where(X == Y, np.where(Y == Z, 0, 3), out)
        return out

    # -- sampling ----------------------------------------------------------------

    def random_triple(self, rel: int, rng: np.random.Generator, fast: bool = True) -> tuple[int, int, int]:
        """Uniformly random member of relation ``rel``, as line indices."""
        N = self.omega_size
        x, y = (int(t) for t in rng.choice(N, size=2, replace=False))
        if rel == 0:
            return (x, x, x)
        if rel == 1:
            return (y, x, x)
        if rel == 2:
            return (x, y, x)
        if rel == 3:
            return (x, x, y)
        if fast:
            row = self.relation_row(x, y, None)
        else:
            X, Y = self.line(x), self.line(y)
            row = np.array([self.classify(X, Y, Z) for Z in self.cone.lines])
        z = int(rng.choice(np.flatnonzero(row == rel)))
        return (x, y, z)

    def gamma_counts(self, x: int, y: int, z: int) -> np.ndarray:
        """Histogram over w of (rel(w,y,z), rel(x,w,z), rel(x,y,w))."""
        R = self.n_relations
        r1 = self.relation_row(None, y, z)
        r2 = self.relation_row(x, None, z)
        r3 = self.relation_row(x, y, None)
        code = (r1 * R + r2) * R + r3
        return np.bincount(code, minlength=R**3).reshape(R, R, R)


def build_scheme(ctx: FieldCtx) -> Scheme:
    q = ctx.q
    cone = enumerate_cone(ctx)
    a = ctx.alpha(ctx.t0)
    rel_of_residue = [4] * (q + 1)
    reps = []
    for t in range(q + 1):
        if t == ctx.t0:
            continue
        b = ctx.alpha(t)
        c = ctx.solve_norm(ctx.neg(ctx.trace(b)))
        rel_of_residue[t] = 5 + len(reps)
        reps.append((b, c))
    scheme = Scheme(ctx, cone, a, reps, rel_of_residue)

    u, v = canonicalize(ctx, (1, 0, 0)), canonicalize(ctx, (0, 1, 0))
    triples = [(u, u, u), (v, u, u), (u, v, u), (u, u, v), (u, v, canonicalize(ctx, (a, 1, 0)))]
    triples += [(u, v, canonicalize(ctx, (b, 1, c))) for b, c in reps]
    scheme.rel_triples = triples

    val = [0] * scheme.n_relations
    for z in cone:
        val[scheme.classify(u, v, z)] += 1
    scheme.valencies = val
    return scheme


@functools.lru_cache(maxsize=None)
def scheme_for(q: int) -> Scheme:
    return build_scheme(field_for_q(q))


def oracle_tensor(scheme: Scheme, triples: list[Triple] | None = None, threads: int = 1) -> IntersectionTensor:
    """Intersection numbers by direct count of the Gamma-sets.

    ``triples`` overrides the representative of each relation.
    """
    triples = triples or scheme.rel_triples
    R = scheme.n_relations
    lines = scheme.cone.lines

    def one_slice(l: int) -> np.ndarray:
        x, y, z = triples[l]
        counts = np.zeros((R, R, R), dtype=np.int64)
        for w in lines:
            counts[scheme.classify(w, y, z), scheme.classify(x, w, z), scheme.classify(x, y, w)] += 1
        return counts

    tensor = IntersectionTensor.zeros(scheme.q)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            slices = list(pool.map(one_slice, range(R)))
    else:
        slices = [one_slice(l) for l in range(R)]
    for l, s in enumerate(slices):
        tensor.entries[l] = s
    return tensor


# -- axiom verification ----------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    witness: object = None


@dataclass
class AxiomReport:
    q: int
    mode: str
    checks: list[Check]
    permutation_table: list[list[int]]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _perm_table_from(mapping: dict[tuple[int, int], set[int]], R: int) -> tuple[list[list[int]], list]:
    table, bad = [], []
    for p_idx in range(len(PERMUTATIONS)):
        row = []
        for l in range(R):
            images = mapping.get((p_idx, l), set())
            if len(images) != 1:
                bad.append((PERMUTATIONS[p_idx], l, sorted(images)))
                row.append(-1)
            else:
                row.append(next(iter(images)))
        if sorted(row) != list(range(R)):
            bad.append((PERMUTATIONS[p_idx], "not a bijection", row))
        table.append(row)
    return table, bad


def _is_group_action(table: list[list[int]]) -> bool:
    """Check that composing permutations composes the index maps."""
    pos = {p: n for n, p in enumerate(PERMUTATIONS)}
    for s, ps in enumerate(PERMUTATIONS):
        for t, pt in enumerate(PERMUTATIONS):
            # permuting by ps then pt picks coordinates ps[pt[a]]
            st = pos[tuple(ps[pt[a]] for a in range(3))]
            for l in range(len(table[0])):
                if table[st][l] != table[t][table[s][l]]:
                    return False
    return True


def verify_axioms(
    scheme: Scheme,
    mode: str = "exhaustive",
    samples: int = 200,
    seed: int = 0,
    tensor: IntersectionTensor | None = None,
) -> AxiomReport:
    """Check the four defining conditions of an AST.

    ``mode`` is ``"exhaustive"`` (every triple, q <= 3) or ``"sampled"``
    (``samples`` random pairs and ``samples`` random members per relation).
    """
    if mode == "exhaustive":
        return _verify_exhaustive(scheme, tensor)
    if mode == "sampled":
        return _verify_sampled(scheme, samples, seed, tensor)
    raise ValueError(f"unknown mode {mode!r}")


def _verify_exhaustive(scheme: Scheme, tensor: IntersectionTensor | None) -> AxiomReport:
    if scheme.q > EXHAUSTIVE_MAX_Q:
        raise ExhaustiveTooLarge(f"exhaustive verification is limited to q <= {EXHAUSTIVE_MAX_Q}")
    tensor = tensor or oracle_tensor(scheme)
    R, N = scheme.n_relations, scheme.omega_size
    C = scheme.class_cube()
    checks = []

    # constant third valencies
    bad = None
    val = np.asarray(scheme.valencies)
    for x in range(N):
        for y in range(N):
            if x != y:
                got = np.bincount(C[x, y], minlength=R)
                if not np.array_equal(got, val):
                    bad = ((x, y), got.tolist())
                    break
        if bad:
            break
    checks.append(Check("valencies", bad is None, f"{N * (N - 1)} ordered pairs", bad))

    # constant intersection numbers
    bad = None
    A1 = C.transpose(1, 2, 0)[None]  # [x,y,z,w] -> C[w,y,z]
    A2 = C.transpose(0, 2, 1)[:, None]  # C[x,w,z]
    for x in range(N):
        code = ((A1[0] * R + A2[x]) * R + C[x][:, None, :]).reshape(N * N, N)
        offs = (np.arange(N * N) * R**3)[:, None]
        hist = np.bincount((code + offs).ravel(), minlength=N * N * R**3).reshape(N, N, R**3)
        expect = tensor.entries.reshape(R, R**3)[C[x]]
        diff = np.argwhere(hist != expect)
        if len(diff):
            y, z, cell = (int(t) for t in diff[0])
            bad = ((x, y, z), int(C[x, y, z]), np.unravel_index(cell, (R, R, R)))
            break
    checks.append(Check("intersection-numbers", bad is None, f"{N**3} triples", bad))

    # closure under permuting coordinates
    idx = np.indices((N, N, N))
    mapping = {}
    for p_idx, perm in enumerate(PERMUTATIONS):
        D = C[idx[perm[0]], idx[perm[1]], idx[perm[2]]]
        for l in range(R):
            mapping[(p_idx, l)] = set(np.unique(D[C == l]).tolist())
    table, bad = _perm_table_from(mapping, R)
    ok = not bad and _is_group_action(table)
    checks.append(Check("permutation-closure", ok, "6 permutations", bad or None))

    # the four coincidence relations
    x, y, z = idx
    expect = np.where(
        x == y, np.where(y == z, 0, 3), np.where(y == z, 1, np.where(x == z, 2, -1))
    )
    trivial_ok = np.array_equal(np.where(expect >= 0, C, -1), expect) and bool(np.all(C[expect < 0] >= 4))
    checks.append(Check("trivial-relations", trivial_ok, "coincidence patterns"))
    return AxiomReport(scheme.q, "exhaustive", checks, table)


def _verify_sampled(scheme: Scheme, samples: int, seed: int, tensor: IntersectionTensor | None) -> AxiomReport:
    tensor = tensor or oracle_tensor(scheme)
    rng = np.random.default_rng(seed)
    R, N = scheme.n_relations, scheme.omega_size
    lines = scheme.cone.lines
    checks = []

    bad = None
    val = np.asarray(scheme.valencies)
    for _ in range(samples):
        x, y = (int(t) for t in rng.choice(N, size=2, replace=False))
        got = np.bincount(scheme.relation_row(x, y, None), minlength=R)
        if not np.array_equal(got, val):
            bad = ((x, y), got.tolist())
            break
    checks.append(Check("valencies", bad is None, f"{samples} sampled pairs", bad))

    bad = None
    drawn: dict[int, list[tuple[int, int, int]]] = {}
    for l in range(R):
        drawn[l] = [scheme.random_triple(l, rng) for _ in range(samples)]
        for t in drawn[l]:
            if scheme.classify(*(lines[s] for s in t)) != l:
                bad = (t, "sampled triple misclassified")
                break
            if not np.array_equal(scheme.gamma_counts(*t), tensor.entries[l]):
                bad = (t, l)
                break
        if bad:
            break
    checks.append(Check("intersection-numbers", bad is None, f"{samples} triples per relation", bad))

    mapping = {}
    for p_idx, perm in enumerate(PERMUTATIONS):
        for l in range(R):
            images = set()
            for t in drawn.get(l, []):
                images.add(scheme.classify(*(lines[t[perm[a]]] for a in range(3))))
            mapping[(p_idx, l)] = images
    table, bad = _perm_table_from(mapping, R)
    ok = not bad and _is_group_action(table)
    checks.append(Check("permutation-closure", ok, f"6 permutations x {samples} triples", bad or None))

    bad = None
    for _ in range(samples):
        x, y, z = (lines[int(t)] for t in rng.choice(N, size=3, replace=False))
        pats = [((x, x, x), 0), ((y, x, x), 1), ((x, y, x), 2), ((x, x, y), 3)]
        for t, want in pats:
            if scheme.classify(*t) != want:
                bad = (t, want)
        if scheme.classify(x, y, z) < 4:
            bad = ((x, y, z), ">=4")
        if bad:
            break
    checks.append(Check("trivial-relations", bad is None, f"{samples} sampled patterns", bad))
    return AxiomReport(scheme.q, f"sampled({samples})", checks, table)


def permutation_table(scheme: Scheme, samples: int = 20, seed: int = 0) -> list[list[int]]:
    """Index map of each coordinate permutation on the relations."""
    rng = np.random.default_rng(seed)
    lines = scheme.cone.lines
    mapping = {}
    for l in range(scheme.n_relations):
        drawn = [scheme.random_triple(l, rng) for _ in range(samples)]
        for p_idx, perm in enumerate(PERMUTATIONS):
            mapping[(p_idx, l)] = {
                scheme.classify(*(lines[t[perm[a]]] for a in range(3))) for t in drawn
            }
    table, _ = _perm_table_from(mapping, scheme.n_relations)
    return table


def group_orbit_check(scheme: Scheme) -> Check:
    """Compare the classification with the orbits of the full unitary group.

    Enumerates U(3, q^2), takes its permutation image on the cone and checks
    that the triple orbits are exactly the classes of :meth:`Scheme.class_cube`.
    """
    group = enumerate_group(scheme.ctx)
    perms = line_permutations(scheme.ctx, group, scheme.cone.lines)
    orbits = triple_orbits(perms, scheme.omega_size)
    cube = scheme.class_cube()
    pairs = {(lab, int(cube[t])) for t, lab in orbits.items()}
    n_orbits = len({lab for lab, _ in pairs})
    ok = len(pairs) == n_orbits == scheme.n_relations
    bad = None
    if not ok:
        seen: dict[int, int] = {}
        for t, lab in sorted(orbits.items()):
            r = int(cube[t])
            if seen.setdefault(lab, r) != r:
                bad = t
                break
    detail = f"{len(group)} matrices, {len(perms)} cone permutations, {n_orbits} triple orbits"
    return Check("group-orbits", ok, detail, bad)
