# -*- coding: utf-8 -*-

import logging
import numpy as np
from sympy import Matrix, Rational, eye

from lib.core.report import CheckReport
from lib.scheme.relations import N_CLASSES, expected_valencies, build_relations, verify_scheme_axioms
from lib.utils.exact import common_denominator, exact_rank, fraction_strings

logger = logging.getLogger(__name__)


def dual_eigenmatrix(q):
    """
    Closed form dual eigenmatrix: rows are the relations A_0..A_4, columns
    the idempotents E_0..E_4.
    """
    q = Rational(q)
    h = Rational(1, 2)
    return Matrix([
        [1, h * q * (q - 1) ** 2, h * (q - 2) * (q + 1) * (q ** 2 + 1), h * q * (q - 1) * (q ** 2 + 1), h * q * (q ** 2 + 1)],
        [1, h * q * (q - 1), h * (q - 2) * (q + 1), -h * q * (q - 1), -h * q * (q - 1)],
        [1, 0, -(q + 1), 0, q],
        [1, -h * q * (q - 1), h * (q - 2) * (q + 1), h * q * (q - 1), -h * q * (q - 1)],
        [1, -h * q * (q - 1) ** 2, h * (q - 2) * (q + 1) * (q ** 2 + 1), -h * q * (q - 1) * (q ** 2 + 1), h * q * (q ** 2 + 1)],
    ])


def expected_multiplicities(q):
    return (1, q * (q - 1) ** 2 // 2, (q - 2) * (q + 1) * (q ** 2 + 1) // 2,
            q * (q - 1) * (q ** 2 + 1) // 2, q * (q ** 2 + 1) // 2)


def adjacency_eigenvalues(q):
    """Eigenvalue of A_3 on E_0..E_4."""
    return ((q - 1) * (q ** 2 + 1), -(q ** 2 + 1), q - 1, q - 1, -(q - 1) ** 2)


def idempotents_from_Q(S, Qmat):
    """E_i = (1/N) sum_j Q_ji A_j, kept as integer numerators over a common denominator."""
    d = common_denominator(Qmat)
    denominator = S.n * d
    numerators = np.zeros((N_CLASSES + 1, S.n, S.n), dtype=np.int64)
    for i in range(N_CLASSES + 1):
        for j in range(N_CLASSES + 1):
            coeff = Qmat[j, i] * d
            numerators[i] += int(coeff) * S.relations[j]
    multiplicities = tuple(int(Qmat[0, i]) for i in range(N_CLASSES + 1))
    P = S.n * Qmat.inv()
    logger.info(f'Idempotents over denominator {denominator}, multiplicities {multiplicities}')
    return S.with_idempotents(Q=Qmat, P=P, idempotents=numerators, denominator=denominator,
                              multiplicities=multiplicities)


def verify_idempotents(S):
    E, D, n = S.idempotents, S.denominator, S.n
    report = CheckReport('E-IDEMPOTENTS', 'minimal idempotents', True,
                         params={'q': S.q, 'n': n, 'denominator': D, 'rank_method': 'elimination'})
    if not np.array_equal(E.sum(axis=0), D * np.eye(n, dtype=np.int64)):
        report.fail({'reason': 'sum of idempotents is not the identity'})
    for i in range(N_CLASSES + 1):
        if not np.array_equal(E[i], E[i].T):
            report.fail({'reason': f'E_{i} not symmetric'})
        for j in range(i, N_CLASSES + 1):
            prod = E[i] @ E[j]
            target = D * E[i] if i == j else np.zeros_like(prod)
            if not np.array_equal(prod, target):
                a, b = np.argwhere(prod != target)[0]
                report.fail({'reason': f'E_{i} E_{j}', 'entry': [int(a), int(b)]})

    ranks, traces = [], []
    for i in range(N_CLASSES + 1):
        trace = int(np.trace(E[i]))
        traces.append(Rational(trace, D))
        rank = exact_rank(E[i])
        ranks.append(rank)
        if rank != S.multiplicities[i] or Rational(trace, D) != S.multiplicities[i]:
            report.fail({'reason': f'rank of E_{i}', 'rank': rank, 'trace': Rational(trace, D),
                         'expected': S.multiplicities[i]})
    if tuple(ranks) != expected_multiplicities(S.q):
        report.fail({'reason': 'multiplicities', 'ranks': ranks})

    report.details['ranks'] = ranks
    report.details['traces'] = traces
    report.details['zero_idempotents'] = [i for i in range(N_CLASSES + 1) if not np.any(E[i])]
    return report


def constructed_eigenmatrix(S):
    """Eigenvalue of A_j on the image of E_i, read off the built matrices. None where E_i = 0."""
    E, A = S.idempotents, S.relations
    table = []
    for i in range(N_CLASSES + 1):
        nz = np.argwhere(E[i] != 0)
        if len(nz) == 0:
            table.append(None)
            continue
        r, c = nz[0]
        table.append([Rational(int((A[j] @ E[i])[r, c]), int(E[i][r, c])) for j in range(N_CLASSES + 1)])
    return table


def verify_eigenmatrices(S):
    q, n = S.q, S.n
    Q, P, E, A = S.Q, S.P, S.idempotents, S.relations
    report = CheckReport('EQ2-Q', 'eigenmatrices', True, params={'q': q, 'n': n})

    if sum(Q.row(0)) != n:
        report.fail({'reason': 'multiplicities do not sum to N', 'row': list(Q.row(0))})
    if S.multiplicities != expected_multiplicities(q):
        report.fail({'reason': 'first row', 'row': list(S.multiplicities)})
    if P * Q != n * eye(N_CLASSES + 1):
        report.fail({'reason': 'P Q is not N I'})
    if tuple(int(P[0, j]) for j in range(N_CLASSES + 1)) != expected_valencies(q):
        report.fail({'reason': 'first row of P is not the valency vector'})

    # A_j E_i = P_ij E_i
    for i in range(N_CLASSES + 1):
        for j in range(N_CLASSES + 1):
            lam = Rational(P[i, j])
            lhs = lam.q * (A[j] @ E[i])
            rhs = lam.p * E[i]
            if not np.array_equal(lhs, rhs):
                report.fail({'reason': 'eigen relation', 'i': i, 'j': j, 'eigenvalue': lam})

    built = constructed_eigenmatrix(S)
    for i, row in enumerate(built):
        if row is not None and row != [Rational(P[i, j]) for j in range(N_CLASSES + 1)]:
            report.fail({'reason': 'constructed eigenvalues differ from N Q^-1', 'i': i, 'row': row})

    a3 = [Rational(P[i, 3]) for i in range(N_CLASSES + 1)]
    if a3 != [Rational(v) for v in adjacency_eigenvalues(q)]:
        report.fail({'reason': 'eigenvalues of A_3', 'observed': a3})

    report.details['Q'] = fraction_strings(Q)
    report.details['P'] = fraction_strings(P)
    report.details['constructed_P'] = built
    report.details['vacuous_rows'] = [i for i, row in enumerate(built) if row is None]
    return report


def build_scheme(bundle):
    """Relations, intersection numbers and the idempotents of the closed form Q."""
    S = build_relations(bundle)
    _, p = verify_scheme_axioms(S)
    S = S.with_idempotents(intersection_numbers=p)
    return idempotents_from_Q(S, dual_eigenmatrix(bundle.q))
