import numpy as np
import pytest

from ast_unitary.errors import ExhaustiveTooLarge, IsUorV
from ast_unitary.field import field_for_q
from ast_unitary.hermitian import canonicalize
from ast_unitary.scheme import (
    IntersectionTensor,
    group_orbit_check,
    oracle_tensor,
    permutation_table,
    scheme_for,
    verify_axioms,
)
from ast_unitary.unitary import enumerate_group, line_permutations


def test_q2_parameters():
    s = scheme_for(2)
    ctx = s.ctx
    assert s.a == 1
    assert s.n_relations == 7
    assert [s.b(5), s.b(6)] == [ctx.alpha(1), ctx.alpha(2)]
    for i in (5, 6):
        assert ctx.norm(s.c(i)) == ctx.neg(ctx.trace(s.b(i)))


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_representatives(q):
    s = scheme_for(q)
    ctx = s.ctx
    assert ctx.trace(s.a) == 0 and s.a != 0
    residues = [ctx.coset_residue(b) for b, _ in s.reps]
    assert residues == sorted(residues)
    assert len(set(residues)) == q
    assert ctx.coset_residue(s.a) not in residues
    for l, triple in enumerate(s.rel_triples):
        assert s.classify(*triple) == l


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_valencies(q):
    s = scheme_for(q)
    assert s.valencies[4] == q - 1
    assert s.valencies[5:] == [q * q - 1] * q
    assert sum(s.valencies) == q**3 + 1


def test_classify_examples():
    s = scheme_for(3)
    ctx = s.ctx
    u, v = s.line(0), s.line(1)
    for L in s.cone.omega_zero:
        assert s.classify(u, v, L) == 4
        assert s.classify_line_rel(L) == 4
    assert s.classify(v, u, u) == 1
    assert s.classify(u, v, u) == 2
    assert s.classify(u, u, v) == 3
    assert s.classify(u, u, u) == 0
    assert s.classify_line_rel(canonicalize(ctx, (s.b(5), 1, s.c(5)))) == 5
    with pytest.raises(IsUorV):
        s.classify_line_rel(u)


def test_q2_classes_along_norm_fibre():
    s = scheme_for(2)
    ctx = s.ctx
    a = ctx.alpha(1)
    for e in range(1, ctx.size):
        if ctx.norm(e) == 1:
            assert s.classify_line_rel(canonicalize(ctx, (a, 1, e))) == 5


def test_classification_is_group_invariant_q2():
    s = scheme_for(2)
    cube = s.class_cube()
    perms = line_permutations(s.ctx, enumerate_group(s.ctx), s.cone.lines)
    for p in perms:
        p = np.array(p)
        assert np.array_equal(cube[np.ix_(p, p, p)], cube)


def test_group_orbits_equal_classes_q2():
    check = group_orbit_check(scheme_for(2))
    assert check.passed, check


@pytest.mark.parametrize("q", [2, 3])
def test_relation_row_matches_classify_everywhere(q):
    s = scheme_for(q)
    cube = s.class_cube()
    N = s.omega_size
    for a in range(N):
        for b in range(N):
            assert np.array_equal(s.relation_row(a, b, None), cube[a, b, :])
            assert np.array_equal(s.relation_row(a, None, b), cube[a, :, b])
            assert np.array_equal(s.relation_row(None, a, b), cube[:, a, b])


@pytest.mark.parametrize("q", [4, 5, 7, 8])
def test_relation_row_matches_classify_sampled(q):
    s = scheme_for(q)
    rng = np.random.default_rng(q)
    lines = s.cone.lines
    for _ in range(20):
        x, y = (int(t) for t in rng.choice(s.omega_size, 2, replace=False))
        row = s.relation_row(x, y, None)
        for z in rng.choice(s.omega_size, 40, replace=False):
            assert row[z] == s.classify(lines[x], lines[y], lines[int(z)])


@pytest.mark.parametrize("q", [3, 5])
def test_random_triple_lands_in_relation(q):
    s = scheme_for(q)
    rng = np.random.default_rng(0)
    lines = s.cone.lines
    for l in range(s.n_relations):
        for fast in (True, False):
            x, y, z = s.random_triple(l, rng, fast=fast)
            assert s.classify(lines[x], lines[y], lines[z]) == l


def test_oracle_examples():
    for q in (2, 3, 4):
        T = oracle_tensor(scheme_for(q))
        assert T[0, 1, 2, 3] == q**3
        assert T[4, 4, 4, 4] == q - 2
        assert not T.entries[5:, 5:, 4, 4].any()
        assert set(T.slice_sums()) == {q**3 + 1}


def test_oracle_threads_agree():
    s = scheme_for(4)
    assert oracle_tensor(s, threads=3) == oracle_tensor(s)


def test_axioms_q2_exhaustive():
    rep = verify_axioms(scheme_for(2), "exhaustive")
    assert rep.passed, rep.checks
    assert rep.permutation_table[0] == list(range(7))


def test_axioms_sampled_q4():
    rep = verify_axioms(scheme_for(4), "sampled", samples=50, seed=1)
    assert rep.passed, rep.checks
    with pytest.raises(ExhaustiveTooLarge):
        verify_axioms(scheme_for(4), "exhaustive")


def test_permutation_table_shape():
    table = permutation_table(scheme_for(3))
    assert len(table) == 6
    assert table[0] == list(range(8))
    for row in table:
        assert sorted(row) == list(range(8))
        assert row[4:5] == [4]


def test_tensor_helpers():
    T = IntersectionTensor.zeros(2)
    assert T.rank == 7
    T.entries[1, 2, 3, 4] = 5
    assert T.nonzero_cells() == [(1, 2, 3, 4, 5)]
    U = IntersectionTensor.zeros(2)
    assert T.first_difference(U) == (1, 2, 3, 4, 5, 0)
    assert T != U
    assert field_for_q(2) is scheme_for(2).ctx
