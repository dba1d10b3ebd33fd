import pytest
import numpy as np
from sympy import eye

from lib.scheme.relations import build_relations, expected_valencies, verify_scheme_axioms
from lib.scheme.idempotents import (
    dual_eigenmatrix,
    expected_multiplicities,
    adjacency_eigenvalues,
    idempotents_from_Q,
    verify_idempotents,
    verify_eigenmatrices,
)
from lib.scheme.spectral import (
    chi_point,
    coefficient_table,
    projection_table,
    verify_point_relation_identities,
    verify_prop1,
    verify_theorem2_rank,
    verify_theorem2_structure,
    lines_certificate,
    verify_line_projection_formulas,
    verify_corollary_span,
)
from lib.utils.exact import exact_rank, in_row_space, common_denominator

CASES = [('bundle2', 'scheme2'), ('bundle3', 'scheme3')]


@pytest.fixture
def case(request):
    bundle_name, scheme_name = request.param
    return request.getfixturevalue(bundle_name), request.getfixturevalue(scheme_name)


@pytest.mark.parametrize('q', [2, 3, 4, 5, 7, 8, 9])
def test_closed_forms(q):
    Q = dual_eigenmatrix(q)
    N = q ** 2 * (q ** 2 - 1)
    assert tuple(Q.row(0)) == expected_multiplicities(q)
    assert sum(expected_multiplicities(q)) == N
    assert common_denominator(Q) == 1
    P = N * Q.inv()
    assert P * Q == N * eye(5)
    assert tuple(P.row(0)) == expected_valencies(q)
    assert tuple(P.col(3)) == adjacency_eigenvalues(q)
    assert coefficient_table(q) * Q == projection_table(q)


def test_valencies(scheme2, scheme3):
    assert scheme2.valencies == (1, 5, 0, 5, 1)
    assert scheme3.valencies == (1, 20, 30, 20, 1)
    assert scheme2.multiplicities == (1, 1, 0, 5, 5)
    assert scheme3.multiplicities == (1, 6, 20, 30, 15)
    assert scheme3.denominator == 72


@pytest.mark.parametrize('case', CASES, indirect=True)
def test_scheme_axioms(case):
    bundle, S = case
    report, p = verify_scheme_axioms(S)
    assert report.passed, report.witness
    for i in range(5):
        assert p[0, i, i] == S.valencies[i]
    assert np.array_equal(p, S.intersection_numbers)


def test_broken_scheme_fails(bundle3):
    S = build_relations(bundle3)
    rel = S.relations.copy()
    rel[[1, 2]] = rel[[2, 1]]
    broken = S.copy(relations=rel, valencies=tuple(int(v) for v in rel[:, 0, :].sum(axis=1)))
    report, _ = verify_scheme_axioms(broken)
    assert not report.passed
    assert np.array_equal(S.relations, build_relations(bundle3).relations)


@pytest.mark.parametrize('case', CASES, indirect=True)
def test_idempotents(case):
    bundle, S = case
    report = verify_idempotents(S)
    assert report.passed, report.witness
    assert report.details['ranks'] == list(expected_multiplicities(bundle.q))


def test_degenerate_idempotent_at_q2(scheme2):
    assert not np.any(scheme2.idempotents[2])
    assert verify_idempotents(scheme2).details['zero_idempotents'] == [2]
    assert verify_eigenmatrices(scheme2).details['vacuous_rows'] == [2]


def test_wrong_Q_fails(scheme3):
    Q = dual_eigenmatrix(3).copy()
    Q[:, 1] = 2 * Q[:, 1]
    report = verify_idempotents(idempotents_from_Q(scheme3, Q))
    assert not report.passed


@pytest.mark.parametrize('case', CASES, indirect=True)
def test_eigenmatrices(case):
    bundle, S = case
    report = verify_eigenmatrices(S)
    assert report.passed, report.witness
    assert report.details['Q'][0][0] == '1'


@pytest.mark.parametrize('case', CASES, indirect=True)
def test_point_identities(case):
    bundle, S = case
    q = bundle.q
    report = verify_point_relation_identities(bundle, S)
    assert report.passed, report.witness
    assert report.details['w_size'] == [q * (q - 2) * (q + 1)]
    report = verify_prop1(bundle, S)
    assert report.passed, report.witness
    assert report.details['vacuous'] == ([2] if q == 2 else [])


def test_prop1_on_sampled_rows(bundle3, scheme3):
    rows = np.array([0, 5, 17, 200])
    assert verify_point_relation_identities(bundle3, scheme3, rows).passed
    assert verify_prop1(bundle3, scheme3, rows).passed


def test_chi_point(bundle2):
    P = int(bundle2.ext_points[0])
    assert chi_point(bundle2, P).sum() == 2
    with pytest.raises(ValueError):
        chi_point(bundle2, int(np.flatnonzero(bundle2.w_points)[0]))


@pytest.mark.parametrize('case', CASES, indirect=True)
def test_theorem2(case):
    bundle, S = case
    q = bundle.q
    report = verify_theorem2_rank(bundle, S)
    assert report.passed, report.details
    assert report.details['rank'] == {2: 11, 3: 66}[q]
    assert report.details['rank'] == report.details['closed_form']
    report = verify_theorem2_structure(bundle, S)
    assert report.passed, report.witness
    M = bundle.ext_incidence.T @ bundle.ext_incidence
    lhs, rhs = lines_certificate(bundle, M)
    assert np.array_equal(lhs, rhs)


@pytest.mark.parametrize('case', CASES, indirect=True)
def test_line_projections(case):
    bundle, S = case
    report = verify_line_projection_formulas(bundle, S)
    assert report.passed, report.witness
    assert verify_line_projection_formulas(bundle, S, rows=np.array([0, 3])).passed


@pytest.mark.parametrize('case', CASES, indirect=True)
def test_corollary_span(case):
    bundle, S = case
    report = verify_corollary_span(bundle, S)
    assert report.passed, report.witness
    assert report.details['rank'] == S.n - S.multiplicities[1] - 1
    assert verify_corollary_span(bundle, S, exact=False).details['rank'] == report.details['rank']


def test_exact_helpers():
    assert exact_rank(np.eye(5, dtype=np.int64)) == 5
    assert exact_rank(np.zeros((3, 3), dtype=np.int64)) == 0
    mat = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert exact_rank(mat) == 2
    assert in_row_space(mat, np.array([[1, 3, 4]]))
    assert not in_row_space(mat, np.array([[0, 0, 1]]))
