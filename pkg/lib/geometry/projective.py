# -*- coding: utf-8 -*-

import itertools
import numpy as np


def normalize(field, vec):
    """Scale so that the first nonzero coordinate is 1."""
    vec = [int(v) for v in vec]
    for v in vec:
        if v != 0:
            inv = field.inv(v)
            return tuple(field.mul(inv, x) for x in vec)
    raise ValueError('the zero vector is not a projective point')


def row_reduce(field, rows):
    """Reduced row echelon form; zero rows are dropped."""
    mat = [[int(v) for v in row] for row in rows]
    n_cols = len(mat[0])
    pivot_row = 0
    for col in range(n_cols):
        pivot = next((r for r in range(pivot_row, len(mat)) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[pivot_row], mat[pivot] = mat[pivot], mat[pivot_row]
        inv = field.inv(mat[pivot_row][col])
        mat[pivot_row] = [field.mul(inv, x) for x in mat[pivot_row]]
        for r in range(len(mat)):
            if r != pivot_row and mat[r][col] != 0:
                c = mat[r][col]
                mat[r] = [field.sub(x, field.mul(c, y)) for x, y in zip(mat[r], mat[pivot_row])]
        pivot_row += 1
        if pivot_row == len(mat):
            break
    return tuple(tuple(row) for row in mat[:pivot_row])


def line_points(field, line):
    """
    Points of the line with echelon rows (r0, r1): r1 and every r0 + b*r1.
    Both forms are already normalized since the pivot of r0 comes first.
    """
    r0, r1 = line
    pts = [tuple(r1)]
    for b in range(field.order):
        pts.append(tuple(field.add(x, field.mul(b, y)) for x, y in zip(r0, r1)))
    return pts


def projective_points(field, dim=3):
    """All normalized points of PG(dim, F), sorted lexicographically."""
    pts = []
    n = dim + 1
    for lead in range(n):
        for rest in itertools.product(range(field.order), repeat=n - lead - 1):
            pts.append((0,) * lead + (1,) + rest)
    pts.sort()
    return np.array(pts, dtype=np.int64)
