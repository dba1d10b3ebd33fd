# -*- coding: utf-8 -*-

import numpy as np
from sympy import Rational, ZZ, QQ, ilcm
from sympy.polys.matrices import DomainMatrix


def domain_matrix(mat):
    """Sparse DomainMatrix over QQ from an integer numpy array."""
    mat = np.asarray(mat)
    rows = {}
    for i, j in zip(*np.nonzero(mat)):
        rows.setdefault(int(i), {})[int(j)] = ZZ(int(mat[i, j]))
    return DomainMatrix(rows, mat.shape, ZZ).convert_to(QQ)


def exact_rank(mat):
    mat = np.asarray(mat)
    if mat.size == 0 or not np.any(mat):
        return 0
    return int(domain_matrix(mat).rank())


def in_row_space(mat, vectors):
    """True when every row of `vectors` lies in the rational row space of `mat`."""
    return exact_rank(np.vstack([mat, vectors])) == exact_rank(mat)


def common_denominator(mat):
    return int(ilcm(*[Rational(v).q for v in mat] + [1]))


def fraction_strings(mat):
    return [[str(Rational(v)) for v in mat.row(i)] for i in range(mat.rows)]
