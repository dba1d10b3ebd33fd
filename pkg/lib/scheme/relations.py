# -*- coding: utf-8 -*-

import logging
import numpy as np

from lib.core.errors import ConstructionError
from lib.core.report import CheckReport

logger = logging.getLogger(__name__)

N_CLASSES = 4


class RelationScheme(object):
    """
    Relations A_0..A_4 on the local external-line order. The idempotents are
    stored as integer numerators: E_i = idempotents[i] / denominator.
    """
    def __init__(
            self,
            q,
            n,
            relations,
            valencies,
            Q=None,
            P=None,
            idempotents=None,
            denominator=1,
            multiplicities=(),
            intersection_numbers=None,
    ):
        self.q = q
        self.n = n
        self.relations = relations
        self.valencies = valencies
        self.Q = Q
        self.P = P
        self.idempotents = idempotents
        self.denominator = denominator
        self.multiplicities = multiplicities
        self.intersection_numbers = intersection_numbers

    def copy(self, **kwargs):
        state = dict(vars(self))
        state.update(kwargs)
        return RelationScheme(**state)

    def with_idempotents(self, **kwargs):
        return self.copy(**kwargs)


def expected_valencies(q):
    k1 = (q - 1) * (q ** 2 + 1)
    return (1, k1, q * (q - 2) * (q ** 2 + 1), k1, 1)


def build_relations(bundle):
    """
    A_1: not concurrent, n concurrent with the antipode of l
    A_2: not concurrent, n not concurrent with the antipode, n not the antipode
    A_3: concurrent
    A_4: n is the antipode of l
    """
    n = bundle.n_ext
    conc = bundle.ext_concurrency
    eye = np.eye(n, dtype=bool)
    anti = np.zeros((n, n), dtype=bool)
    anti[np.arange(n), bundle.antipode] = True
    conc_bar = conc[bundle.antipode]

    apart = ~conc & ~eye
    rel = np.stack([
        eye,
        apart & conc_bar,
        apart & ~conc_bar & ~anti,
        conc,
        anti,
    ]).astype(np.int64)

    cover = rel.sum(axis=0)
    if not np.all(cover == 1):
        a, b = np.argwhere(cover != 1)[0]
        raise ConstructionError(
            f'relations do not partition the pair ({int(bundle.ext_lines[a])}, {int(bundle.ext_lines[b])}): '
            f'it lies in {int(cover[a, b])} relations'
        )
    valencies = tuple(int(v) for v in rel[:, 0, :].sum(axis=1))
    logger.info(f'Relations on {n} external lines, valencies {valencies}')
    return RelationScheme(q=bundle.q, n=n, relations=rel, valencies=valencies)


def verify_scheme_axioms(S):
    """Symmetry, partition and closure of A_i A_j under the span of the A_k."""
    q, n = S.q, S.n
    A = S.relations
    report = CheckReport('THM3-SCHEME', 'association scheme axioms', True, params={'q': q, 'n': n})

    if not np.array_equal(A[0], np.eye(n, dtype=np.int64)):
        report.fail({'reason': 'A_0 is not the identity'})
    if not np.array_equal(A.sum(axis=0), np.ones((n, n), dtype=np.int64)):
        a, b = np.argwhere(A.sum(axis=0) != 1)[0]
        report.fail({'reason': 'not a partition', 'pair': [int(a), int(b)]})
    for i in range(N_CLASSES + 1):
        if not np.array_equal(A[i], A[i].T):
            a, b = np.argwhere(A[i] != A[i].T)[0]
            report.fail({'reason': f'A_{i} not symmetric', 'pair': [int(a), int(b)]})

    row_sums = A.sum(axis=2)
    for i in range(N_CLASSES + 1):
        if not np.all(row_sums[i] == row_sums[i][0]):
            report.fail({'reason': f'A_{i} has non-constant row sums'})
    if S.valencies != expected_valencies(q):
        report.fail({'reason': 'valencies', 'observed': list(S.valencies), 'expected': list(expected_valencies(q))})

    p = np.zeros((N_CLASSES + 1,) * 3, dtype=np.int64)
    for i in range(N_CLASSES + 1):
        for j in range(N_CLASSES + 1):
            prod = A[i] @ A[j]
            combo = np.zeros_like(prod)
            for k in range(N_CLASSES + 1):
                values = np.unique(prod[A[k] == 1])
                if len(values) == 0:
                    continue
                if len(values) != 1:
                    a, b = np.argwhere((A[k] == 1) & (prod != values[0]))[0]
                    report.fail({'reason': 'non-constant intersection number', 'i': i, 'j': j, 'k': k,
                                 'pair': [int(a), int(b)], 'values': values[:4].tolist()})
                p[k, i, j] = values[0]
                combo += values[0] * A[k]
            if not np.array_equal(prod, combo):
                report.fail({'reason': f'A_{i} A_{j} outside the span', 'i': i, 'j': j})
            if not np.array_equal(prod, A[j] @ A[i]):
                report.fail({'reason': f'A_{i} and A_{j} do not commute'})

    report.details['valencies'] = list(S.valencies)
    report.details['intersection_numbers'] = p
    return report, p
