"""Intersection numbers from closed-form rules, independent of Gamma-set counting.

Every cell (l, i, j, k) is produced by exactly one rule and tagged with it:

* ``trivial:*`` rules fix the cells forced by coincident points, together
  with the zero cells that coincidence leaves unreachable (``trivial-zero``);
* ``line-1`` .. ``line-5`` cover relations 1..3 paired with the nontrivial
  relations (values 0, q-1 and q^2-1 decided by coset comparisons);
* ``line-6`` .. ``line-8`` cover l = 4 and ``line-9`` .. ``line-13`` cover
  l >= 5.  Lines 8 and 10..13 are membership tests in F0^x evaluated over the
  q^2 - 1 lines [b u + v + c w] of an orbit (or the q - 1 lines [g u + v]).

The existential families (8, 10, 11, 12) return a fixed value when a
witness exists.  The scans also count witnesses; a count the rule does not
allow is recorded in ``violations`` rather than folded into the value.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import IndexOutOfRange, NotCharTwo
from .hermitian import canonicalize
from .scheme import IntersectionTensor, Scheme

Cell = tuple[int, int, int, int]


@dataclass
class ClosedFormReport:
    tensor: IntersectionTensor
    provenance: dict[Cell, str]
    violations: list[str] = field(default_factory=list)


class ClosedForm:
    """Memoising evaluator for one scheme."""

    def __init__(self, scheme: Scheme):
        self.s = scheme
        self.ctx = scheme.ctx
        self.q = scheme.q
        self.nontrivial = range(5, scheme.n_relations)
        self.violations: list[str] = []
        self._orbit: dict[int, list[tuple[int, int]]] = {}
        self._scan: dict[tuple[int, int], dict] = {}
        self._scan12: dict[int, dict] = {}

    @classmethod
    def of(cls, scheme: Scheme) -> ClosedForm:
        ev = scheme._cache.get("closed_form")
        if ev is None:
            ev = scheme._cache["closed_form"] = cls(scheme)
        return ev

    # -- helpers -----------------------------------------------------------------

    def _check(self, *idx: int) -> None:
        for t in idx:
            if not 0 <= t < self.s.n_relations:
                raise IndexOutOfRange(f"relation index {t} outside 0..{self.s.n_relations - 1}")

    def unit_in_F0(self, x: int) -> bool:
        return self.ctx.in_F0_star(x)

    def rel_of_line(self, b: int, c: int) -> int:
        return self.s.classify_line_rel(canonicalize(self.ctx, (b, 1, c)))

    def orbit(self, k: int) -> list[tuple[int, int]]:
        """(b, c) for every line [b u + v + c w] in the stabiliser orbit of relation k."""
        members = self._orbit.get(k)
        if members is None:
            ctx = self.ctx
            members = []
            for r in ctx.F0()[1:]:
                b = ctx.mul(self.s.b(k), r)
                target = ctx.neg(ctx.trace(b))
                members += [(b, c) for c in range(1, ctx.size) if ctx.norm(c) == target]
            self._orbit[k] = members
        return members

    # -- relations 0..3 -----------------------------------------------------------

    def trivial(self, l: int, i: int, j: int, k: int) -> tuple[int, str]:
        self._check(l, i, j, k)
        q, cell = self.q, (l, i, j, k)
        if min(cell) > 3:
            raise IndexOutOfRange(f"{cell} has no index <= 3")
        if cell == (0, 0, 0, 0):
            return 1, "trivial:000/0"
        if cell == (0, 1, 2, 3):
            return q**3, "trivial:123/0"
        if cell in ((1, 0, 1, 1), (2, 2, 0, 2), (3, 3, 3, 0)):
            return 1, "trivial:coincide-first"
        if cell in ((1, 1, 3, 2), (2, 3, 2, 1), (3, 2, 1, 3)):
            return 1, "trivial:coincide-second"
        if l >= 4 and (i, j, k) in ((3, l, 1), (l, 3, 2), (2, 1, l)):
            return 1, "trivial:coincide-nontrivial"
        if l in (1, 2, 3) and min(i, j, k) >= 4:
            return 0, "trivial:nontrivial-zero"
        if l in (1, 2, 3):
            # the free index of each family sits where the trivial relation is pinned
            free = {1: (j, k), 2: (i, k), 3: (i, j)}[l]
            pinned = {1: i, 2: j, 3: k}[l]
            if pinned == l and min(free) >= 4:
                return self._trivial_family(l, *free)
        return 0, "trivial-zero"

    def _trivial_family(self, l: int, s: int, t: int) -> tuple[int, str]:
        q, ctx = self.q, self.ctx
        if s == 4 and t == 4:
            return q - 1, "line-1"
        if s == 4 or t == 4:
            return 0, "line-2"
        if l == 1:
            j, i = s, t
            hit = j == self.rel_of_line(ctx.conj(self.s.b(i)), self.s.c(i))
            return (q * q - 1 if hit else 0), "line-3"
        if l == 2:
            j, i = s, t
            bi_inv = ctx.inv(self.s.b(i))
            hit = j == self.rel_of_line(bi_inv, ctx.mul(bi_inv, self.s.c(i)))
            return (q * q - 1 if hit else 0), "line-4"
        j, i = s, t
        bj_inv = ctx.inv(self.s.b(j))
        lhs = self.rel_of_line(ctx.conj(self.s.b(i)), self.s.c(i))
        rhs = self.rel_of_line(ctx.conj(bj_inv), ctx.mul(bj_inv, self.s.c(j)))
        return (q * q - 1 if lhs == rhs else 0), "line-5"

    # -- relation 4 ----------------------------------------------------------------

    def ell4(self, i: int, j: int, k: int) -> tuple[int, str]:
        self._check(i, j, k)
        if min(i, j, k) < 4:
            raise IndexOutOfRange("use trivial() for indices <= 3")
        q, ctx, a = self.q, self.ctx, self.s.a
        if (i, j, k) == (4, 4, 4):
            return q - 2, "line-6"
        if 4 in (i, j, k):
            return 0, "line-7"
        bi, bj = self.s.b(i), self.s.b(j)
        a_inv = ctx.inv(a)
        witnesses = 0
        for r in ctx.F0()[1:]:
            b = ctx.mul(self.s.b(k), r)
            d = ctx.add(ctx.conj(b), a)
            if d == 0:
                continue
            if self.unit_in_F0(ctx.mul(bj, ctx.inv(d))) and self.unit_in_F0(
                ctx.mul(ctx.mul(ctx.mul(bi, b), d), a_inv)
            ):
                witnesses += 1
        if witnesses > 1:
            self.violations.append(f"p[4][{i}][{j}][{k}]: {witnesses} admissible b in one coset")
        return (q + 1 if witnesses else 0), "line-8"

    # -- relations 5..q+4 ----------------------------------------------------------

    def _scan_orbit(self, l: int, k: int) -> dict:
        """Tally the membership conditions over the orbit of relation k,
        relative to the representative of relation l."""
        key = (l, k)
        if key in self._scan:
            return self._scan[key]
        ctx, R = self.ctx, self.s.n_relations
        bl, cl = self.s.b(l), self.s.c(l)
        bl_inv = ctx.inv(bl)
        both = [[0] * R for _ in range(R)]
        j_with_proportional = [0] * R
        i_with_same_c = [0] * R
        for b, c in self.orbit(k):
            d = ctx.add(ctx.add(ctx.conj(b), bl), ctx.mul(ctx.conj(c), cl))
            if d == 0:
                continue
            x = ctx.mul(ctx.mul(b, bl_inv), d)
            y = ctx.inv(d)
            I = [i for i in self.nontrivial if self.unit_in_F0(ctx.mul(self.s.b(i), x))]
            J = [j for j in self.nontrivial if self.unit_in_F0(ctx.mul(self.s.b(j), y))]
            for i in I:
                for j in J:
                    both[i][j] += 1
            if ctx.mul(bl, c) == ctx.mul(b, cl):
                for j in J:
                    j_with_proportional[j] += 1
            if c == cl:
                for i in I:
                    i_with_same_c[i] += 1
        out = {"both": both, "line10": j_with_proportional, "line11": i_with_same_c}
        self._scan[key] = out
        return out

    def _scan_zero(self, l: int) -> list[list[int]]:
        if l in self._scan12:
            return self._scan12[l]
        ctx, R = self.ctx, self.s.n_relations
        bl = self.s.b(l)
        bl_inv = ctx.inv(bl)
        counts = [[0] * R for _ in range(R)]
        for g in range(1, ctx.size):
            if ctx.trace(g) != 0:
                continue
            d = ctx.add(ctx.conj(g), bl)
            if d == 0:
                continue
            x = ctx.mul(ctx.mul(d, g), bl_inv)
            y = ctx.inv(d)
            for i in self.nontrivial:
                if not self.unit_in_F0(ctx.mul(self.s.b(i), x)):
                    continue
                for j in self.nontrivial:
                    if self.unit_in_F0(ctx.mul(self.s.b(j), y)):
                        counts[i][j] += 1
        self._scan12[l] = counts
        return counts

    def _at_most_one(self, count: int, cell: Cell) -> int:
        if count > 1:
            self.violations.append(f"p{list(cell)}: {count} witnesses where one is expected")
        return 1 if count else 0

    def general(self, l: int, i: int, j: int, k: int) -> tuple[int, str]:
        self._check(l, i, j, k)
        if l < 5 or min(i, j, k) < 4:
            raise IndexOutOfRange("general() needs l >= 5 and i, j, k >= 4")
        fours = (i, j, k).count(4)
        if fours >= 2:
            return 0, "line-9"
        cell = (l, i, j, k)
        if i == 4:
            return self._at_most_one(self._scan_orbit(l, k)["line10"][j], cell), "line-10"
        if j == 4:
            return self._at_most_one(self._scan_orbit(l, k)["line11"][i], cell), "line-11"
        if k == 4:
            return self._at_most_one(self._scan_zero(l)[i][j], cell), "line-12"
        return self._scan_orbit(l, k)["both"][i][j], "line-13"

    def cell(self, l: int, i: int, j: int, k: int) -> tuple[int, str]:
        if min(l, i, j, k) <= 3:
            return self.trivial(l, i, j, k)
        if l == 4:
            return self.ell4(i, j, k)
        return self.general(l, i, j, k)

    def report(self) -> ClosedFormReport:
        R = self.s.n_relations
        tensor = IntersectionTensor.zeros(self.q)
        prov: dict[Cell, str] = {}
        for l in range(R):
            for i in range(R):
                for j in range(R):
                    for k in range(R):
                        value, label = self.cell(l, i, j, k)
                        tensor.entries[l, i, j, k] = value
                        prov[(l, i, j, k)] = label
        return ClosedFormReport(tensor, prov, list(self.violations))


def cf_trivial(scheme: Scheme, l: int, i: int, j: int, k: int) -> int:
    return ClosedForm.of(scheme).trivial(l, i, j, k)[0]


def cf_ell4(scheme: Scheme, i: int, j: int, k: int) -> int:
    return ClosedForm.of(scheme).ell4(i, j, k)[0]


def cf_general(scheme: Scheme, l: int, i: int, j: int, k: int) -> int:
    return ClosedForm.of(scheme).general(l, i, j, k)[0]


def closed_form_tensor(scheme: Scheme) -> ClosedFormReport:
    return ClosedForm(scheme).report()


@dataclass
class Char2Report:
    q: int
    checked: int
    failures: list[tuple[str, Cell, int]]

    @property
    def passed(self) -> bool:
        return not self.failures


def char2_vanishing_check(scheme: Scheme, tensor: IntersectionTensor | None = None) -> Char2Report:
    """In characteristic 2, p[l][k][l][k], p[l][l][k][k], p[l][k][k][l] and
    p[l][l][l][l] vanish for distinct k, l >= 5, and so does p[i][i][i][i]."""
    if scheme.ctx.p != 2:
        raise NotCharTwo(f"q = {scheme.q} is odd")
    T = (tensor or closed_form_tensor(scheme).tensor).entries
    idx = range(5, scheme.n_relations)
    failures = []
    checked = 0
    for l in idx:
        for k in idx:
            if k == l:
                continue
            for name, cell in (
                ("klk", (l, k, l, k)),
                ("lkk", (l, l, k, k)),
                ("kkl", (l, k, k, l)),
                ("lll", (l, l, l, l)),
            ):
                checked += 1
                if T[cell]:
                    failures.append((name, cell, int(T[cell])))
    for i in idx:
        checked += 1
        if T[i, i, i, i]:
            failures.append(("iii", (i, i, i, i), int(T[i, i, i, i])))
    return Char2Report(scheme.q, checked, failures)
