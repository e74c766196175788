"""Acceptance suite: one test per criterion, all comparisons exact.

A PASS/FAIL line per criterion is printed in the terminal summary
(see conftest.py).
"""

import subprocess
import sys
import time

import numpy as np
import pytest

from ast_unitary.closed_form import char2_vanishing_check, closed_form_tensor
from ast_unitary.field import MAX_Q, field_for_q, prime_power
from ast_unitary.hypermatrix import cube_identity, verify_structure_constants
from ast_unitary.scheme import build_scheme, group_orbit_check, oracle_tensor, scheme_for, verify_axioms

criterion = pytest.mark.criterion

REL_QS = [2, 3, 4, 5, 7, 8, 9]
TENSOR_QS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]
ALL_QS = [q for q in range(2, MAX_Q + 1) if prime_power(q)]


def fresh(q):
    return build_scheme(field_for_q(q))


@criterion(1, "relation count q+5 for q in {2,3,4,5,7,8,9}, under 1 s each")
def test_relation_count():
    for q in REL_QS:
        t = time.perf_counter()
        s = fresh(q)
        lines = s.cone.lines
        u, v = lines[0], lines[1]
        seen = {s.classify(u, v, z) for z in lines} | {s.classify(u, u, u), s.classify(u, u, v)}
        elapsed = time.perf_counter() - t
        assert s.n_relations == q + 5
        assert seen == set(range(q + 5))
        assert elapsed < 1.0, (q, elapsed)


@criterion(2, "valencies n4 = q-1 and n_i = q^2-1, recounted from the action")
def test_valencies():
    rng = np.random.default_rng(2)
    for q in REL_QS:
        s = scheme_for(q)
        lines = s.cone.lines
        pairs = [(0, 1)] + [tuple(int(t) for t in rng.choice(len(lines), 2, replace=False)) for _ in range(4)]
        for x, y in pairs:
            counts = np.bincount(
                [s.classify(lines[x], lines[y], z) for z in lines if z not in (lines[x], lines[y])],
                minlength=s.n_relations,
            )
            assert counts[4] == q - 1
            assert list(counts[5:]) == [q * q - 1] * q
            assert not counts[:4].any()


@criterion(3, "AST axioms: exhaustive for q in {2,3}, sampled (200, seeded) for q in {4,5}, under 30 s")
def test_axioms():
    t = time.perf_counter()
    for q in (2, 3):
        rep = verify_axioms(fresh(q), "exhaustive")
        assert rep.passed, rep.checks
        assert any(c.detail == f"{(q**3 + 1) ** 3} triples" for c in rep.checks)
    for q in (4, 5):
        rep = verify_axioms(fresh(q), "sampled", samples=200, seed=q)
        assert rep.passed, rep.checks
    assert time.perf_counter() - t < 30.0


@criterion(4, "closed-form tensor equals Gamma-count tensor for q in {2,3,4,5,7,8}, under 60 s")
def test_oracle_vs_closed_form():
    t = time.perf_counter()
    for q in (2, 3, 4, 5, 7, 8):
        s = fresh(q)
        oracle = oracle_tensor(s)
        rep = closed_form_tensor(s)
        assert rep.tensor == oracle, (q, rep.tensor.first_difference(oracle))
        assert rep.violations == []
    assert time.perf_counter() - t < 60.0


@criterion(5, "p[4,4,4,4] = q-2, p[1,1,4,4] = q-1, the forced zero families, p[0,1,2,3] = q^3")
def test_specific_values():
    for q in REL_QS:
        s = scheme_for(q)
        R = s.n_relations
        big = range(5, R)
        for T in (oracle_tensor(s), closed_form_tensor(s).tensor):
            P = T.entries
            assert P[4, 4, 4, 4] == q - 2
            assert P[1, 1, 4, 4] == P[2, 4, 2, 4] == P[3, 4, 4, 3] == q - 1
            assert P[0, 1, 2, 3] == q**3
            for n in big:
                # a single 4 next to a nontrivial index in the relation-1..3 families
                for l, cells in (
                    (1, [(1, 4, n), (1, n, 4)]),
                    (2, [(4, 2, n), (n, 2, 4)]),
                    (3, [(4, n, 3), (n, 4, 3)]),
                ):
                    for c in cells:
                        assert P[(l,) + c] == 0
            for i in range(4, R):
                for j in range(4, R):
                    for k in range(4, R):
                        if 4 in (i, j, k) and (i, j, k) != (4, 4, 4):
                            assert P[4, i, j, k] == 0
                        if (i, j, k).count(4) >= 2:
                            assert not P[5:, i, j, k].any()


@criterion(6, "structure constants: dense q in {2,3}, 10^4 sampled cells q in {4,5}; A4^3 = (q-2) A4 for every supported q")
def test_ternary_algebra():
    for q in (2, 3):
        s = scheme_for(q)
        rep = verify_structure_constants(s, oracle_tensor(s), mode="dense")
        assert rep.passed, rep.mismatch
        assert rep.triples_checked == (q + 5) ** 3
    for q in (4, 5):
        s = scheme_for(q)
        rep = verify_structure_constants(s, oracle_tensor(s), mode="sampled", cells=10_000, seed=q)
        assert rep.passed, rep.mismatch
        assert rep.cells_checked == 10_000
    for q in ALL_QS:
        cells = 2000 if q <= 16 else 3 * (q + 5)
        assert cube_identity(scheme_for(q), 4, q - 2, cells=cells, seed=q), q


@criterion(7, "characteristic 2 vanishing families for q in {2,4,8}")
def test_char2():
    for q in (2, 4, 8):
        s = scheme_for(q)
        for T in (oracle_tensor(s), closed_form_tensor(s).tensor):
            rep = char2_vanishing_check(s, T)
            assert rep.passed, rep.failures
            assert rep.checked > 0


@criterion(8, "q=2: orbits of the enumerated unitary group equal the classification, under 10 s")
def test_group_oracle():
    t = time.perf_counter()
    check = group_orbit_check(fresh(2))
    assert check.passed, check
    # 648 matrices acting as 216 distinct permutations of the 9 lines
    assert check.detail == "648 matrices, 216 cone permutations, 7 triple orbits"
    assert time.perf_counter() - t < 10.0


@criterion(9, "representative independence for q in {3,5}: 5 seeded alternative triples per relation")
def test_representative_independence():
    for q in (3, 5):
        s = scheme_for(q)
        base = oracle_tensor(s)
        rng = np.random.default_rng(9 * q)
        lines = s.cone.lines
        for _ in range(5):
            triples = []
            for l in range(s.n_relations):
                x, y, z = s.random_triple(l, rng, fast=False)
                triples.append((lines[x], lines[y], lines[z]))
            assert oracle_tensor(s, triples) == base


@criterion(10, "conservation: every slice sums to q^3+1")
def test_conservation():
    for q in TENSOR_QS:
        s = scheme_for(q)
        for T in (oracle_tensor(s), closed_form_tensor(s).tensor):
            assert list(T.slice_sums()) == [q**3 + 1] * (q + 5)


@criterion(11, "q=16 full build and verify from a cold start, under 120 s")
def test_performance_q16(tmp_path):
    t = time.perf_counter()
    cmd = [sys.executable, "-m", "ast_unitary"]
    build = subprocess.run(cmd + ["build", "--q", "16", "--out", str(tmp_path / "q16.json")], capture_output=True, text=True)
    verify = subprocess.run(cmd + ["verify", "--q", "16", "--suite", "all"], capture_output=True, text=True)
    elapsed = time.perf_counter() - t
    assert build.returncode == 0, build.stderr
    assert verify.returncode == 0, verify.stdout + verify.stderr
    assert "FAIL" not in verify.stdout
    assert f"{21**4} cells compared" in verify.stdout
    assert elapsed < 120.0, elapsed
