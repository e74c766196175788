import dataclasses

import pytest

from ast_unitary.closed_form import (
    ClosedForm,
    cf_ell4,
    cf_general,
    cf_trivial,
    char2_vanishing_check,
    closed_form_tensor,
)
from ast_unitary.errors import IndexOutOfRange, NotCharTwo
from ast_unitary.scheme import oracle_tensor, scheme_for


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_equals_oracle(q):
    s = scheme_for(q)
    rep = closed_form_tensor(s)
    assert rep.tensor == oracle_tensor(s), rep.tensor.first_difference(oracle_tensor(s))
    assert rep.violations == []
    R = s.n_relations
    assert len(rep.provenance) == R**4


def test_pinned_values():
    for q in (2, 3, 5):
        s = scheme_for(q)
        assert cf_trivial(s, 0, 1, 2, 3) == q**3
        assert cf_trivial(s, 1, 1, 4, 4) == q - 1
        assert cf_ell4(s, 4, 4, 4) == q - 2
        assert cf_ell4(s, 5, 4, 4) == 0
        for l in range(5, s.n_relations):
            for i in range(5, s.n_relations):
                assert cf_general(s, l, i, 4, 4) == 0


def test_line3_example_q2():
    s = scheme_for(2)
    ctx = s.ctx
    assert ctx.conj(s.b(5)) == s.b(6)
    assert cf_trivial(s, 1, 1, 6, 5) == 3
    assert cf_trivial(s, 1, 1, 5, 5) == 0


def test_lines_10_to_12_are_zero_or_one():
    for q in (2, 3, 4):
        s = scheme_for(q)
        rep = closed_form_tensor(s)
        for cell, label in rep.provenance.items():
            if label in ("line-10", "line-11", "line-12"):
                assert rep.tensor[cell] in (0, 1)


def test_provenance_labels():
    s = scheme_for(3)
    rep = closed_form_tensor(s)
    assert rep.provenance[(0, 0, 0, 0)] == "trivial:000/0"
    assert rep.provenance[(4, 4, 4, 4)] == "line-6"
    assert rep.provenance[(5, 6, 7, 5)] == "line-13"
    assert rep.provenance[(5, 4, 6, 7)] == "line-10"
    assert rep.provenance[(5, 6, 4, 7)] == "line-11"
    assert rep.provenance[(5, 6, 7, 4)] == "line-12"
    assert rep.provenance[(4, 5, 6, 7)] == "line-8"
    labels = set(rep.provenance.values())
    assert {f"line-{n}" for n in range(1, 14)} <= labels


@pytest.mark.parametrize("q", [3, 4, 5])
def test_independent_of_c_translate(q):
    s = scheme_for(q)
    ctx = s.ctx
    kappa = next(x for x in range(2, ctx.size) if ctx.norm(x) == 1)
    shifted = dataclasses.replace(s, reps=[(b, ctx.mul(c, kappa)) for b, c in s.reps], _cache={})
    assert closed_form_tensor(shifted).tensor == closed_form_tensor(s).tensor


def test_index_errors():
    s = scheme_for(2)
    with pytest.raises(IndexOutOfRange):
        cf_trivial(s, 0, 0, 0, 7)
    with pytest.raises(IndexOutOfRange):
        cf_trivial(s, 4, 4, 4, 4)
    with pytest.raises(IndexOutOfRange):
        cf_ell4(s, 1, 5, 5)
    with pytest.raises(IndexOutOfRange):
        cf_general(s, 4, 5, 5, 5)


def test_evaluator_is_cached_per_scheme():
    s = scheme_for(3)
    assert ClosedForm.of(s) is ClosedForm.of(s)


@pytest.mark.parametrize("q", [2, 4, 8])
def test_char2_vanishing(q):
    s = scheme_for(q)
    rep = char2_vanishing_check(s)
    assert rep.passed, rep.failures
    assert char2_vanishing_check(s, oracle_tensor(s)).passed


def test_char2_example_and_guard():
    s = scheme_for(2)
    assert closed_form_tensor(s).tensor[6, 5, 6, 5] == 0
    with pytest.raises(NotCharTwo):
        char2_vanishing_check(scheme_for(3))
