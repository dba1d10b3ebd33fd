# -*- coding: utf-8 -*-

import logging
import numpy as np
from sympy import Matrix, Rational

from lib.core.report import CheckReport
from lib.utils.exact import exact_rank, in_row_space

logger = logging.getLogger(__name__)


def chi_point(bundle, point):
    """0/1 vector over the external lines through an external point."""
    pos = bundle.ext_point_position[point] if 0 <= point < bundle.n_points else -1
    if pos < 0:
        raise ValueError(f'point {point} is not an external point')
    return bundle.ext_incidence[pos].copy()


def point_vectors(bundle):
    """
    Rows per external point: chi of its lines, chi of the lines through its
    sigma image, and chi of the set W (external lines meeting the W-line
    on the point but through neither the point nor its image).
    """
    X = bundle.ext_incidence
    Xbar = X[bundle.ext_point_sigma]
    lines = bundle.point_lines[bundle.ext_points]
    w_line = lines[bundle.w_lines[lines]]
    meet = bundle.line_concurrency[np.ix_(w_line, bundle.ext_lines)]
    W = (meet & (X == 0) & (Xbar == 0)).astype(np.int64)
    return X, Xbar, W


def coefficient_table(q):
    """chi_[P] A_i in the basis (chi_[P], j, chi_W, chi_[P^sigma]), columns i = 0..4."""
    return Matrix([
        [1, -1, -(q - 2), q - 2, 0],
        [0, 1, q - 2, 1, 0],
        [0, -1, 2, -1, 0],
        [0, q - 2, -(q - 2), -1, 1],
    ])


def projection_table(q):
    """N chi_[P] E_i in the same basis."""
    h = Rational(1, 2)
    return Matrix([
        [0, 0, h * q * (q - 2) * (q + 1) ** 2, h * q ** 2 * (q ** 2 - 1), q * (q + 1)],
        [q, 0, 0, 0, -q],
        [0, 0, -q * (q + 1), 0, q * (q + 1)],
        [0, 0, h * q * (q - 2) * (q + 1) ** 2, -h * q ** 2 * (q ** 2 - 1), q * (q + 1)],
    ])


def verify_point_relation_identities(bundle, S, rows=None):
    q, n = bundle.q, S.n
    X, Xbar, W = point_vectors(bundle)
    if rows is not None:
        X, Xbar, W = X[rows], Xbar[rows], W[rows]
    A = S.relations
    j = np.ones_like(X)

    report = CheckReport('PROP1', 'chi_[P] A_i closed forms', True, params={'q': q, 'points': len(X)})
    closed = {
        4: Xbar,
        3: j + (q - 2) * X - W - Xbar,
        1: (q - 2) * Xbar + j - W - X,
        2: (q - 2) * j - (q - 2) * (Xbar + X) + 2 * W,
    }
    for i in (4, 3, 1, 2):
        got = X @ A[i]
        bad = np.flatnonzero(np.any(got != closed[i], axis=1))
        if len(bad):
            report.fail({'point': int(bundle.ext_points[bad[0]]) if rows is None else int(bundle.ext_points[rows[bad[0]]]),
                         'relation': i}, violations=len(bad))

    sizes = np.unique(W.sum(axis=1))
    report.details['w_size'] = sizes.tolist()
    report.details['w_size_closed_form'] = q * (q - 2) * (q + 1)
    if len(sizes) != 1:
        report.fail({'reason': '|W| is not constant', 'sizes': sizes.tolist()})
    elif sizes[0] != q * (q - 2) * (q + 1):
        report.fail({'reason': '|W| differs from q(q-2)(q+1)', 'size': int(sizes[0])})
    return report


def verify_prop1(bundle, S, rows=None):
    """chi_[P] E_1 = 0 and chi_[P] E_i != 0 for i = 2, 3, 4 (i = 2 vacuous when E_2 = 0)."""
    q, n = bundle.q, S.n
    X, Xbar, W = point_vectors(bundle)
    if rows is not None:
        X, Xbar, W = X[rows], Xbar[rows], W[rows]
    E = S.idempotents
    scale = S.denominator // n

    report = CheckReport('PROP1', 'projections of chi_[P]', True, params={'q': q, 'points': len(X)})
    vacuous = [i for i in (2, 3, 4) if S.multiplicities[i] == 0]
    report.details['vacuous'] = vacuous

    proj = [X @ E[i] for i in range(5)]
    if np.any(proj[1]):
        bad = int(np.flatnonzero(np.any(proj[1] != 0, axis=1))[0])
        report.fail({'point_row': bad, 'idempotent': 1, 'reason': 'nonzero E_1 projection'})
    for i in (2, 3, 4):
        if i in vacuous:
            if np.any(proj[i]):
                report.fail({'idempotent': i, 'reason': 'projection onto a zero idempotent'})
            continue
        zero = np.flatnonzero(~np.any(proj[i] != 0, axis=1))
        if len(zero):
            report.fail({'point_row': int(zero[0]), 'idempotent': i, 'reason': 'zero projection'})

    C, T = coefficient_table(q), projection_table(q)
    if C * S.Q != T:
        report.fail({'reason': 'coefficient table times Q differs from the projection table'})
    T = np.array(T.tolist(), dtype=np.int64)
    basis = (X, np.ones_like(X), W, Xbar)
    for i in range(5):
        expected = scale * sum(T[b, i] * basis[b] for b in range(4))
        if not np.array_equal(proj[i], expected):
            bad = int(np.flatnonzero(np.any(proj[i] != expected, axis=1))[0])
            report.fail({'point_row': bad, 'idempotent': i, 'reason': 'projection table'})
    return report


def verify_theorem2_rank(bundle, S):
    q, n = bundle.q, S.n
    A = bundle.ext_incidence
    rank = exact_rank(A)
    expected = n - S.multiplicities[1]
    report = CheckReport('THM2-RANK', 'rank of the chi_[P] matrix', rank == expected,
                         params={'q': q, 'rows': A.shape[0], 'columns': n},
                         details={'rank': rank, 'expected': expected, 'closed_form': q ** 2 * (q ** 2 - 1) - q * (q - 1) ** 2 // 2})
    if not report.passed:
        report.witness = {'rank': rank, 'expected': expected}
    return report


def lines_certificate(bundle, M):
    """
    Integer form of the row-space certificate for chi_l + chi_lbar:
    q(q^2+1)(sum over U_l and U_lbar - 3q(M_l + M_lbar)) - (2q^2-2q) colsum(M)
    = -2q^3(q+1)(q^2+1)(chi_l + chi_lbar), U_l = {M_l} and the rows of lines meeting l.
    """
    q, n = bundle.q, bundle.n_ext
    bar = bundle.antipode
    U = (np.eye(n, dtype=np.int64) + bundle.ext_concurrency.astype(np.int64)) @ M
    lhs = q * (q ** 2 + 1) * (U + U[bar] - 3 * q * (M + M[bar])) \
        - (2 * q ** 2 - 2 * q) * M.sum(axis=0)[None, :]
    pair = np.eye(n, dtype=np.int64) + np.eye(n, dtype=np.int64)[bar]
    rhs = -2 * q ** 3 * (q + 1) * (q ** 2 + 1) * pair
    return lhs, rhs


def verify_theorem2_structure(bundle, S):
    q, n = bundle.q, S.n
    A = bundle.ext_incidence
    M = A.T @ A
    conc = bundle.ext_concurrency.astype(np.int64)
    report = CheckReport('THM2-M-STRUCTURE', 'M = A^T A', True, params={'q': q, 'n': n})

    expected = (q ** 2 + 1) * np.eye(n, dtype=np.int64) + conc
    if not np.array_equal(M, expected):
        bad = int(np.flatnonzero(np.any(M != expected, axis=1))[0])
        report.fail({'line': int(bundle.ext_lines[bad]), 'reason': 'row is not (q^2+1) chi_l + chi_perp'})
    if not np.all(np.diag(M) == q ** 2 + 1):
        report.fail({'reason': 'diagonal'})
    col = M.sum(axis=0)
    if not np.all(col == q * (q ** 2 + 1)):
        report.fail({'reason': 'column sums', 'values': np.unique(col).tolist()})

    lhs, rhs = lines_certificate(bundle, M)
    if not np.array_equal(lhs, rhs):
        bad = int(np.flatnonzero(np.any(lhs != rhs, axis=1))[0])
        report.fail({'line': int(bundle.ext_lines[bad]), 'reason': 'certificate for chi_l + chi_lbar'})

    bar = bundle.antipode
    firsts = np.flatnonzero(np.arange(n) < bar)
    pairs = np.eye(n, dtype=np.int64)[firsts] + np.eye(n, dtype=np.int64)[bar[firsts]]
    if not in_row_space(M, pairs):
        report.fail({'reason': 'chi_l + chi_lbar outside the row space of M'})

    report.details['diagonal'] = q ** 2 + 1
    report.details['column_sum'] = q * (q ** 2 + 1)
    report.details['rank_M'] = exact_rank(M)
    return report


def line_projection_forms(q, n, e, ebar, perp, perpbar):
    """(denominator, numerator vector) of chi_l E_i for i = 0..4."""
    j = np.ones_like(e)
    return [
        (n, j),
        (2 * q * (q + 1), (q - 1) * (e - ebar) + perpbar - perp),
        (2 * q ** 2 * (q - 1), -2 * j + q * ((q - 1) ** 2 * e + perp + (q - 1) ** 2 * ebar + perpbar)),
        (2 * q * (q + 1), (q ** 2 + 1) * (e - ebar) - perpbar + perp),
        (2 * q * (q ** 2 - 1), 2 * j + (q + 1) * ((q - 1) * (e + ebar) - perpbar - perp)),
    ]


def verify_line_projection_formulas(bundle, S, rows=None):
    q, n = bundle.q, S.n
    if rows is None:
        rows = np.arange(n)
    bar = bundle.antipode
    ident = np.eye(n, dtype=np.int64)
    conc = bundle.ext_concurrency.astype(np.int64)
    e, ebar = ident[rows], ident[bar[rows]]
    perp, perpbar = conc[rows], conc[bar[rows]]

    report = CheckReport('LINE-PROJECTIONS', 'chi_l E_i closed forms', True, params={'q': q, 'lines': len(rows)})
    for i, (d, combo) in enumerate(line_projection_forms(q, n, e, ebar, perp, perpbar)):
        got = d * S.idempotents[i][rows]
        want = S.denominator * combo
        if not np.array_equal(got, want):
            bad = int(rows[np.flatnonzero(np.any(got != want, axis=1))[0]])
            report.fail({'line': int(bundle.ext_lines[bad]), 'idempotent': i})
    report.details['zero_idempotents'] = [i for i in range(5) if S.multiplicities[i] == 0]
    return report


def verify_corollary_span(bundle, S, exact=True):
    """(q^3-q) chi_[P] - j lies in V_2+V_3+V_4 and spans it."""
    q, n = bundle.q, S.n
    X = bundle.ext_incidence
    Y = (q ** 3 - q) * X - 1
    E = S.idempotents
    report = CheckReport('COR-SINV0V1', 'span of (q^3-q) chi_[P] - j', True, params={'q': q})
    for i in (0, 1):
        if np.any(Y @ E[i]):
            report.fail({'reason': f'nonzero E_{i} projection'})
    expected = n - S.multiplicities[1] - 1
    if exact:
        rank = exact_rank(Y)
        report.details['rank_method'] = 'elimination'
    else:
        # rows are orthogonal to j while together with j they span the chi_[P]
        rank = exact_rank(X) - 1
        report.details['rank_method'] = 'rank of chi_[P] rows minus one'
    report.details['rank'] = rank
    report.details['expected'] = expected
    if rank != expected:
        report.fail({'rank': rank, 'expected': expected})
    return report
